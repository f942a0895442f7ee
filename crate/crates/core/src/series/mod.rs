//! Truncated power series in `t` and truncated bivariate polynomials in `(x, y)`.
//!
//! A series carries a truncation `K`: coefficients of `t^e` with `e >= K` are
//! unknown. [`EXACT`] marks a polynomial known in full. Every arithmetic
//! result carries the largest truncation that its inputs justify.

mod bipoly;
mod eps;

pub use bipoly::BiPoly;
pub use eps::EpsPoly;

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::scalars::{ratio, CycloField, Rational, Scalar};

/// Truncation of a series that is known exactly.
pub const EXACT: u32 = u32::MAX;

/// Valuation of a truncated series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u32),
    /// Every known coefficient vanishes; `AtLeast(EXACT)` is the zero polynomial.
    AtLeast(u32),
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(v) => Some(v),
            Order::AtLeast(_) => None,
        }
    }

    /// Lower bound on the valuation, exact when finite.
    pub fn bound(self) -> u32 {
        match self {
            Order::Finite(v) | Order::AtLeast(v) => v,
        }
    }

    pub fn shift(self, k: u32) -> Order {
        match self {
            Order::Finite(v) => Order::Finite(v + k),
            Order::AtLeast(v) => Order::AtLeast(v.saturating_add(k)),
        }
    }

    pub fn shift_down(self, k: u32) -> Order {
        match self {
            Order::Finite(v) => Order::Finite(v - k),
            Order::AtLeast(EXACT) => Order::AtLeast(EXACT),
            Order::AtLeast(v) => Order::AtLeast(v.saturating_sub(k)),
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(v) => write!(f, "{}", v),
            Order::AtLeast(EXACT) => f.write_str("inf"),
            Order::AtLeast(v) => write!(f, ">={}", v),
        }
    }
}

/// Coefficient rings usable in [`Series`].
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scaled(&self, q: &Rational) -> Self;
    /// Inverse of a unit of the ring.
    fn inverse(&self) -> Result<Self>;
    /// An `n`-th root of a unit, branch chosen through `field`.
    fn unit_root(&self, n: u32, field: &CycloField) -> Result<Self>;
}

impl Coeff for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, q: &Rational) -> Self {
        self.scale(q)
    }
    fn inverse(&self) -> Result<Self> {
        self.inv()
    }
    fn unit_root(&self, n: u32, field: &CycloField) -> Result<Self> {
        field.nth_root(self, n)
    }
}

/// Product of two dense series truncated to `len` coefficients.
pub(crate) fn dense_mul<R: Coeff>(a: &[R], b: &[R], len: usize) -> Vec<R> {
    let mut out = vec![R::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] = out[i + j].plus(&x.times(y));
            }
        }
    }
    out
}

/// Inverse of a dense series with unit constant term, `len` coefficients.
pub(crate) fn dense_inverse<R: Coeff>(a: &[R], len: usize) -> Result<Vec<R>> {
    let inv0 = a[0].inverse()?;
    let mut out = vec![R::zero(); len];
    if len == 0 {
        return Ok(out);
    }
    out[0] = inv0.clone();
    for k in 1..len {
        let mut acc = R::zero();
        for j in 1..=k.min(a.len() - 1) {
            if !a[j].is_zero() && !out[k - j].is_zero() {
                acc = acc.plus(&a[j].times(&out[k - j]));
            }
        }
        out[k] = acc.times(&inv0).negated();
    }
    Ok(out)
}

/// `n`-th root of a dense series with unit constant term, `len` coefficients.
///
/// With `f = a / a_0`, the root `g = f^(1/n)` satisfies `f g' = (1/n) f' g`,
/// which gives `k g_k = sum_{j=1..k} ((1/n + 1) j - k) f_j g_{k-j}`.
pub(crate) fn dense_nth_root<R: Coeff>(
    a: &[R],
    n: u32,
    len: usize,
    field: &CycloField,
) -> Result<Vec<R>> {
    let lead = a[0].unit_root(n, field)?;
    let inv0 = a[0].inverse()?;
    let f: Vec<R> = a.iter().take(len).map(|c| c.times(&inv0)).collect();
    let mut g = vec![R::zero(); len];
    if len == 0 {
        return Ok(g);
    }
    g[0] = R::one();
    let alpha1 = ratio(1, n as i64) + ratio(1, 1);
    for k in 1..len {
        let mut acc = R::zero();
        for j in 1..=k.min(f.len() - 1) {
            if f[j].is_zero() || g[k - j].is_zero() {
                continue;
            }
            let w = &alpha1 * ratio(j as i64, 1) - ratio(k as i64, 1);
            acc = acc.plus(&f[j].times(&g[k - j]).scaled(&w));
        }
        g[k] = acc.scaled(&ratio(1, k as i64));
    }
    Ok(g.into_iter().map(|c| c.times(&lead)).collect())
}

/// Truncated univariate power series in `t`.
#[derive(Clone, PartialEq, Debug)]
pub struct Series<R: Coeff = Scalar> {
    terms: BTreeMap<u32, R>,
    trunc: u32,
}

pub type TSeries = Series<Scalar>;

impl<R: Coeff> Series<R> {
    /// The zero series known up to `trunc`.
    pub fn zero(trunc: u32) -> Self {
        Series { terms: BTreeMap::new(), trunc }
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, R)>>(terms: I, trunc: u32) -> Self {
        let mut s = Series::zero(trunc);
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    pub fn monomial(c: R, e: u32, trunc: u32) -> Self {
        Series::from_terms([(e, c)], trunc)
    }

    /// Dense coefficients `c_0 .. c_{len-1}`.
    pub fn from_dense(coeffs: Vec<R>, offset: u32, trunc: u32) -> Self {
        let mut s = Series::zero(trunc);
        for (i, c) in coeffs.into_iter().enumerate() {
            s.add_term(offset + i as u32, c);
        }
        s
    }

    fn add_term(&mut self, e: u32, c: R) {
        if e >= self.trunc || c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&e) {
            Some(old) => old.plus(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(e, sum);
        }
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.trunc == EXACT
    }

    pub fn coeff(&self, e: u32) -> R {
        self.terms.get(&e).cloned().unwrap_or_else(R::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &R)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.terms.keys().copied()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn ord(&self) -> Order {
        match self.terms.keys().next() {
            Some(&e) => Order::Finite(e),
            None => Order::AtLeast(self.trunc),
        }
    }

    /// Valuation lower bound used by truncation propagation.
    fn valuation(&self) -> u32 {
        self.ord().bound()
    }

    pub fn truncate(&self, k: u32) -> Self {
        let k = k.min(self.trunc);
        Series {
            terms: self.terms.range(..k).map(|(e, c)| (*e, c.clone())).collect(),
            trunc: k,
        }
    }

    /// Same coefficients with a declared truncation (used for exact inputs).
    pub fn with_trunc(mut self, k: u32) -> Self {
        self.trunc = k;
        self.terms = core::mem::take(&mut self.terms).into_iter().filter(|(e, _)| *e < k).collect();
        self
    }

    pub fn add(&self, o: &Self) -> Self {
        let trunc = self.trunc.min(o.trunc);
        let mut out = self.truncate(trunc);
        for (e, c) in o.terms.range(..trunc) {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Series {
            terms: self.terms.iter().map(|(e, c)| (*e, c.negated())).collect(),
            trunc: self.trunc,
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        if c.is_zero() {
            return Series::zero(self.trunc);
        }
        Series::from_terms(self.terms.iter().map(|(e, x)| (*e, x.times(c))), self.trunc)
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        Series::from_terms(self.terms.iter().map(|(e, x)| (*e, x.scaled(q))), self.trunc)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let trunc = self
            .trunc
            .saturating_add(o.valuation())
            .min(o.trunc.saturating_add(self.valuation()));
        let mut acc: BTreeMap<u32, R> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = ea + eb;
                if e >= trunc {
                    break;
                }
                let p = ca.times(cb);
                match acc.get_mut(&e) {
                    Some(v) => *v = v.plus(&p),
                    None => {
                        acc.insert(e, p);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Series { terms: acc, trunc }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Series::monomial(R::one(), 0, EXACT);
        for _ in 0..e {
            result = result.mul(self);
        }
        result
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: u32) -> Self {
        Series {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
            trunc: self.trunc.saturating_add(k),
        }
    }

    /// Divide by `t^k`; the series must have no known term below `k`.
    pub fn shift_down(&self, k: u32) -> Result<Self> {
        if let Some(&e) = self.terms.keys().next() {
            if e < k {
                return Err(Error::OrderNotDivisible { ord: e, n: k });
            }
        }
        if self.trunc != EXACT && self.trunc < k {
            return Err(Error::TruncationExhausted {
                context: "shift",
                needed: k,
                available: self.trunc,
            });
        }
        Ok(Series {
            terms: self.terms.iter().map(|(e, c)| (e - k, c.clone())).collect(),
            trunc: if self.trunc == EXACT { EXACT } else { self.trunc - k },
        })
    }

    pub fn derivative(&self) -> Self {
        Series::from_terms(
            self.terms
                .iter()
                .filter(|(e, _)| **e > 0)
                .map(|(e, c)| (e - 1, c.scaled(&ratio(*e as i64, 1)))),
            if self.trunc == EXACT { EXACT } else { self.trunc.saturating_sub(1) },
        )
    }

    /// Dense coefficients starting at `offset`, `len` of them.
    fn dense(&self, offset: u32, len: usize) -> Vec<R> {
        (0..len as u32).map(|i| self.coeff(offset + i)).collect()
    }

    /// Substitute `inner` (of positive order) for `t`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let v = match inner.ord() {
            Order::Finite(0) => return Err(Error::UnitSubstitution),
            o => o.bound().max(1),
        };
        let lowest = self.terms.keys().next().copied();
        let mut bound = self.trunc.saturating_mul(v);
        if let Some(i0) = lowest {
            if i0 > 0 && inner.trunc != EXACT {
                bound = bound.min(inner.trunc.saturating_add((i0 - 1).saturating_mul(v)));
            } else if i0 == 0 {
                bound = bound.min(inner.trunc);
            }
        }
        let mut out = Series::zero(bound);
        let mut power = Series::monomial(R::one(), 0, EXACT);
        let mut current = 0u32;
        for (e, c) in &self.terms {
            while current < *e {
                power = power.mul(inner).truncate(bound);
                current += 1;
            }
            out = out.add(&power.scale(c).truncate(bound));
        }
        Ok(out.truncate(bound))
    }

    /// Compositional inverse of a series of order exactly 1 (Lagrange inversion).
    pub fn invert_param(&self) -> Result<Self> {
        match self.ord() {
            Order::Finite(1) => {}
            o => return Err(Error::NotInvertible { ord: o.bound() }),
        }
        if self.trunc == EXACT {
            return Err(Error::TruncationExhausted {
                context: "inversion of an exact polynomial needs a truncation",
                needed: 0,
                available: EXACT,
            });
        }
        let k = self.trunc;
        // s = t * q(t); r_j = (1/j) [u^{j-1}] (1/q)^j.
        let len = (k - 1) as usize;
        let q = self.dense(1, len);
        let h = dense_inverse(&q, len)?;
        let mut hp = vec![R::one()];
        let mut out = Series::zero(k);
        for j in 1..k {
            hp = dense_mul(&hp, &h, len);
            let c = hp[(j - 1) as usize].scaled(&ratio(1, j as i64));
            out.add_term(j, c);
        }
        Ok(out)
    }

    /// `n`-th root of a series whose order is a multiple of `n`.
    pub fn nth_root(&self, n: u32, field: &CycloField) -> Result<Self> {
        let ord = match self.ord() {
            Order::Finite(o) => o,
            Order::AtLeast(k) => {
                return Err(Error::TruncationExhausted {
                    context: "root of a series with no known term",
                    needed: k.saturating_add(1),
                    available: k,
                })
            }
        };
        if ord % n != 0 {
            return Err(Error::OrderNotDivisible { ord, n });
        }
        if self.trunc == EXACT {
            return Err(Error::TruncationExhausted {
                context: "root of an exact polynomial needs a truncation",
                needed: 0,
                available: EXACT,
            });
        }
        let len = (self.trunc - ord) as usize;
        let root = dense_nth_root(&self.dense(ord, len), n, len, field)?;
        Ok(Series::from_dense(root, ord / n, ord / n + len as u32))
    }
}

impl<R: Coeff + fmt::Display> fmt::Display for Series<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            write!(f, "({})*t^{}", c, e)?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        if self.trunc != EXACT {
            write!(f, " + O(t^{})", self.trunc)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(terms: &[(u32, i64)], trunc: u32) -> TSeries {
        Series::from_terms(terms.iter().map(|(e, c)| (*e, Scalar::from_int(*c))), trunc)
    }

    #[test]
    fn order_values() {
        assert_eq!(s(&[(3, 1), (5, 1)], 20).ord(), Order::Finite(3));
        assert_eq!(s(&[], 20).ord(), Order::AtLeast(20));
        assert_eq!(s(&[(25, 1)], 20).ord(), Order::AtLeast(20));
    }

    #[test]
    fn product_truncation_propagates() {
        let a = s(&[(2, 1)], 10);
        let b = s(&[(3, 1), (4, 1)], 8);
        let p = a.mul(&b);
        assert_eq!(p.trunc(), 10);
        assert_eq!(p, s(&[(5, 1), (6, 1)], 10));
    }

    #[test]
    fn invert_simple_params() {
        let t = s(&[(1, 1)], 10);
        assert_eq!(t.invert_param().unwrap(), t);
        let two_t = s(&[(1, 2)], 10);
        assert_eq!(
            two_t.invert_param().unwrap(),
            Series::monomial(Scalar::from_ratio(1, 2), 1, 10)
        );
        assert!(s(&[(2, 1)], 10).invert_param().is_err());
    }

    #[test]
    fn compose_rejects_units() {
        let a = s(&[(1, 1)], 10);
        assert_eq!(a.compose(&s(&[(0, 1), (1, 1)], 10)), Err(Error::UnitSubstitution));
    }

    #[test]
    fn roots_need_divisible_order() {
        let f = CycloField::default();
        assert!(matches!(
            s(&[(3, 1)], 10).nth_root(2, &f),
            Err(Error::OrderNotDivisible { ord: 3, n: 2 })
        ));
        assert_eq!(s(&[(6, 1)], 20).nth_root(6, &f).unwrap(), s(&[(1, 1)], 15));
    }

    #[test]
    fn derivative_and_shift() {
        let a = s(&[(3, 1), (5, 2)], 10);
        assert_eq!(a.derivative(), s(&[(2, 3), (4, 10)], 9));
        assert_eq!(a.shift(2).shift_down(2).unwrap(), a);
        assert!(a.shift_down(4).is_err());
    }
}
