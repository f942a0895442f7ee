use alloc::vec::Vec;
use core::fmt;

use super::{dense_inverse, dense_mul, dense_nth_root, Coeff, EXACT};
use crate::error::{Error, Result};
use crate::scalars::{CycloField, Rational, Scalar};

/// Polynomial in a formal parameter `eps`, computed modulo `eps^(bound + 1)`.
///
/// Constants built with [`Coeff::zero`] / [`Coeff::one`] carry no bound; any
/// operation keeps the smaller bound of its operands.
#[derive(Clone, PartialEq, Debug)]
pub struct EpsPoly {
    coeffs: Vec<Scalar>,
    bound: u32,
}

impl EpsPoly {
    pub fn new(mut coeffs: Vec<Scalar>, bound: u32) -> EpsPoly {
        if bound != EXACT {
            coeffs.truncate(bound as usize + 1);
        }
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        EpsPoly { coeffs, bound }
    }

    pub fn constant(c: Scalar) -> EpsPoly {
        EpsPoly::new(alloc::vec![c], EXACT)
    }

    /// Degree bound `D` of the truncation `eps^(D+1) = 0`.
    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, eps: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, c| &(&acc * eps) + c)
    }

    fn len_for(bound: u32) -> usize {
        if bound == EXACT {
            usize::MAX
        } else {
            bound as usize + 1
        }
    }
}

impl Coeff for EpsPoly {
    fn zero() -> Self {
        EpsPoly { coeffs: Vec::new(), bound: EXACT }
    }

    fn one() -> Self {
        EpsPoly::constant(Scalar::one())
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn plus(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect();
        EpsPoly::new(c, self.bound.min(o.bound))
    }

    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negated())
    }

    fn times(&self, o: &Self) -> Self {
        let bound = self.bound.min(o.bound);
        if self.is_zero() || o.is_zero() {
            return EpsPoly { coeffs: Vec::new(), bound };
        }
        let len = (self.coeffs.len() + o.coeffs.len() - 1).min(EpsPoly::len_for(bound));
        EpsPoly::new(dense_mul(&self.coeffs, &o.coeffs, len), bound)
    }

    fn negated(&self) -> Self {
        EpsPoly { coeffs: self.coeffs.iter().map(|c| -c).collect(), bound: self.bound }
    }

    fn scaled(&self, q: &Rational) -> Self {
        EpsPoly::new(self.coeffs.iter().map(|c| c.scale(q)).collect(), self.bound)
    }

    fn inverse(&self) -> Result<Self> {
        if self.coeffs.is_empty() {
            return Err(Error::DivisionByZero);
        }
        if self.is_constant() {
            return Ok(EpsPoly::new(alloc::vec![self.coeffs[0].inv()?], self.bound));
        }
        if self.bound == EXACT {
            return Err(Error::DivisionByZero);
        }
        let len = self.bound as usize + 1;
        Ok(EpsPoly::new(dense_inverse(&self.coeffs, len)?, self.bound))
    }

    fn unit_root(&self, n: u32, field: &CycloField) -> Result<Self> {
        if self.coeffs.is_empty() {
            return Err(Error::DivisionByZero);
        }
        if self.is_constant() {
            return Ok(EpsPoly::new(alloc::vec![field.nth_root(&self.coeffs[0], n)?], self.bound));
        }
        if self.bound == EXACT {
            return Err(Error::NotRepresentable {
                what: alloc::format!("root of the polynomial {}", self),
                order: field.order(),
            });
        }
        let len = self.bound as usize + 1;
        Ok(EpsPoly::new(dense_nth_root(&self.coeffs, n, len, field)?, self.bound))
    }
}

impl fmt::Display for EpsPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            match k {
                0 => write!(f, "{}", c)?,
                _ => write!(f, "({})*eps^{}", c, k)?,
            }
            first = false;
        }
        Ok(())
    }
}
