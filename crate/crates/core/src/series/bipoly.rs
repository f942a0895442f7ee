use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use super::{Order, TSeries, EXACT};
use crate::error::{Error, Result};
use crate::scalars::{ratio, Rational, Scalar};

/// Bivariate polynomial in `(x, y)` known up to total degree `trunc`.
///
/// Terms of total degree `>= trunc` are unknown; [`EXACT`] marks an exact
/// polynomial.
#[derive(Clone, PartialEq, Debug)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Scalar>,
    trunc: u32,
}

fn degree((i, j): (u32, u32)) -> u32 {
    i + j
}

impl BiPoly {
    pub fn zero(trunc: u32) -> BiPoly {
        BiPoly { terms: BTreeMap::new(), trunc }
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Scalar)>>(terms: I, trunc: u32) -> BiPoly {
        let mut p = BiPoly::zero(trunc);
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    pub fn monomial(c: Scalar, i: u32, j: u32, trunc: u32) -> BiPoly {
        BiPoly::from_terms([((i, j), c)], trunc)
    }

    pub fn constant(c: Scalar) -> BiPoly {
        BiPoly::monomial(c, 0, 0, EXACT)
    }

    pub fn x() -> BiPoly {
        BiPoly::monomial(Scalar::one(), 1, 0, EXACT)
    }

    pub fn y() -> BiPoly {
        BiPoly::monomial(Scalar::one(), 0, 1, EXACT)
    }

    pub(crate) fn add_term(&mut self, k: (u32, u32), c: Scalar) {
        if degree(k) >= self.trunc || c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&k) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(k, sum);
        }
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.trunc == EXACT
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Scalar {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &Scalar)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Lowest total degree of a known nonzero term.
    pub fn ord(&self) -> Order {
        match self.terms.keys().map(|k| degree(*k)).min() {
            Some(d) => Order::Finite(d),
            None => Order::AtLeast(self.trunc),
        }
    }

    /// Highest total degree of a stored term.
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| degree(*k)).max()
    }

    /// Homogeneous part of total degree `d`.
    pub fn homogeneous(&self, d: u32) -> BiPoly {
        BiPoly::from_terms(
            self.terms.iter().filter(|(k, _)| degree(**k) == d).map(|(k, c)| (*k, c.clone())),
            EXACT,
        )
    }

    pub fn truncate(&self, d: u32) -> BiPoly {
        let d = d.min(self.trunc);
        BiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| degree(**k) < d)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
            trunc: d,
        }
    }

    /// Same coefficients with a declared truncation.
    pub fn with_trunc(&self, d: u32) -> BiPoly {
        BiPoly::from_terms(self.terms.iter().map(|(k, c)| (*k, c.clone())), d)
    }

    pub fn add(&self, o: &BiPoly) -> BiPoly {
        let trunc = self.trunc.min(o.trunc);
        let mut out = self.truncate(trunc);
        for (k, c) in &o.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &BiPoly) -> BiPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(), trunc: self.trunc }
    }

    pub fn scale(&self, s: &Scalar) -> BiPoly {
        BiPoly::from_terms(self.terms.iter().map(|(k, c)| (*k, c * s)), self.trunc)
    }

    pub fn scale_rational(&self, q: &Rational) -> BiPoly {
        BiPoly::from_terms(self.terms.iter().map(|(k, c)| (*k, c.scale(q))), self.trunc)
    }

    pub fn mul(&self, o: &BiPoly) -> BiPoly {
        let trunc = self
            .trunc
            .saturating_add(o.ord().bound())
            .min(o.trunc.saturating_add(self.ord().bound()));
        let mut out = BiPoly::zero(trunc);
        for ((i, j), a) in &self.terms {
            for ((k, l), b) in &o.terms {
                if i + j + k + l < trunc {
                    out.add_term((i + k, j + l), a * b);
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> BiPoly {
        let mut out = BiPoly::constant(Scalar::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn dx(&self) -> BiPoly {
        BiPoly::from_terms(
            self.terms
                .iter()
                .filter(|((i, _), _)| *i > 0)
                .map(|((i, j), c)| ((i - 1, *j), c.scale(&ratio(*i as i64, 1)))),
            lower(self.trunc),
        )
    }

    pub fn dy(&self) -> BiPoly {
        BiPoly::from_terms(
            self.terms
                .iter()
                .filter(|((_, j), _)| *j > 0)
                .map(|((i, j), c)| ((*i, j - 1), c.scale(&ratio(*j as i64, 1)))),
            lower(self.trunc),
        )
    }

    /// Exchange the roles of `x` and `y`.
    pub fn swap(&self) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|((i, j), c)| ((*j, *i), c.clone())).collect(), trunc: self.trunc }
    }

    /// Multiply by `x^a y^b`.
    pub fn shift(&self, a: u32, b: u32) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|((i, j), c)| ((i + a, j + b), c.clone())).collect(),
            trunc: self.trunc.saturating_add(a + b),
        }
    }

    /// Substitute series of positive order for `x` and `y`.
    pub fn compose_series(&self, x: &TSeries, y: &TSeries) -> Result<TSeries> {
        let (vx, vy) = (positive_order(x.ord())?, positive_order(y.ord())?);
        let bound = self.trunc.saturating_mul(vx.min(vy));
        let (mut mi, mut mj) = (0, 0);
        for (i, j) in self.terms.keys() {
            mi = mi.max(*i);
            mj = mj.max(*j);
        }
        let xp = powers(x, mi, bound);
        let yp = powers(y, mj, bound);
        let mut out = TSeries::zero(bound);
        for ((i, j), c) in &self.terms {
            let term = xp[*i as usize].mul(&yp[*j as usize]).truncate(bound);
            out = out.add(&term.scale(c));
        }
        Ok(out)
    }

    /// Substitute bivariate polynomials of positive order for `x` and `y`.
    pub fn compose(&self, u: &BiPoly, v: &BiPoly) -> Result<BiPoly> {
        let (vu, vv) = (positive_order(u.ord())?, positive_order(v.ord())?);
        let bound = self.trunc.saturating_mul(vu.min(vv));
        let (mut mi, mut mj) = (0, 0);
        for (i, j) in self.terms.keys() {
            mi = mi.max(*i);
            mj = mj.max(*j);
        }
        let mut up = alloc::vec![BiPoly::constant(Scalar::one())];
        for _ in 0..mi {
            up.push(up.last().unwrap().mul(u).truncate(bound));
        }
        let mut vp = alloc::vec![BiPoly::constant(Scalar::one())];
        for _ in 0..mj {
            vp.push(vp.last().unwrap().mul(v).truncate(bound));
        }
        let mut out = BiPoly::zero(bound);
        for ((i, j), c) in &self.terms {
            out = out.add(&up[*i as usize].mul(&vp[*j as usize]).truncate(bound).scale(c));
        }
        Ok(out)
    }

    /// Evaluate at a point of the field (exact polynomials only).
    pub fn eval(&self, x: &Scalar, y: &Scalar) -> Scalar {
        self.terms
            .iter()
            .fold(Scalar::zero(), |acc, ((i, j), c)| &acc + &(&(c * &x.pow(*i)) * &y.pow(*j)))
    }
}

fn lower(trunc: u32) -> u32 {
    if trunc == EXACT {
        EXACT
    } else {
        trunc.saturating_sub(1)
    }
}

fn positive_order(o: Order) -> Result<u32> {
    match o {
        Order::Finite(0) => Err(Error::UnitSubstitution),
        o => Ok(o.bound().max(1)),
    }
}

fn powers(s: &TSeries, e: u32, bound: u32) -> Vec<TSeries> {
    let mut out = alloc::vec![TSeries::monomial(Scalar::one(), 0, EXACT)];
    for _ in 0..e {
        let next = out.last().unwrap().mul(s).truncate(bound);
        out.push(next);
    }
    out
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for ((i, j), c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            write!(f, "({})*x^{}*y^{}", c, i, j)?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        if self.trunc != EXACT {
            write!(f, " + O(deg {})", self.trunc)?;
        }
        Ok(())
    }
}
