//! Exact arithmetic in the cyclotomic field Q(zeta_L).
//!
//! An element is stored in the power basis `1, z, ..., z^(phi(L)-1)` of
//! `Q[z] / Phi_L(z)`, fully reduced, with every rational in lowest terms.
//! Elements that happen to be rational collapse to a plain rational, so a
//! rational is a member of every field and combines freely with any of them.
//! Two non-rational elements must come from the same `L`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Build a rational from a numerator and denominator.
pub fn ratio(p: i64, q: i64) -> Rational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

#[derive(Clone, PartialEq, Eq, Debug, Hash)]
enum Repr {
    Rat(Rational),
    Cyc { order: u32, coeffs: Vec<Rational> },
}

/// An exact element of Q(zeta_L).
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Scalar(Repr);

pub fn euler_phi(l: u32) -> usize {
    let mut n = l;
    let mut result = l;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

/// Coefficients (ascending) of the L-th cyclotomic polynomial.
pub fn cyclotomic_poly(l: u32) -> Vec<i64> {
    // x^l - 1 divided by Phi_d for every proper divisor d of l.
    let mut num = vec![0i64; l as usize + 1];
    num[0] = -1;
    num[l as usize] = 1;
    for d in 1..l {
        if l % d == 0 {
            let den = cyclotomic_poly(d);
            num = poly_div_exact(&num, &den);
        }
    }
    num
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut q = vec![0i64; qn + 1];
    for k in (0..=qn).rev() {
        let c = rem[k + dn];
        q[k] = c;
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= c * d;
        }
    }
    q
}

fn reduce_power_basis(order: u32, mut coeffs: Vec<Rational>) -> Scalar {
    let phi = euler_phi(order);
    if coeffs.len() > phi {
        let modulus = cyclotomic_poly(order);
        for k in (phi..coeffs.len()).rev() {
            let c = core::mem::replace(&mut coeffs[k], Rational::zero());
            if c.is_zero() {
                continue;
            }
            for (i, m) in modulus.iter().take(phi).enumerate() {
                if *m != 0 {
                    coeffs[k - phi + i] -= &c * Rational::from_integer(BigInt::from(*m));
                }
            }
        }
        coeffs.truncate(phi);
    }
    coeffs.resize(phi.max(1), Rational::zero());
    Scalar::canonical(order, coeffs)
}

impl Scalar {
    fn canonical(order: u32, coeffs: Vec<Rational>) -> Scalar {
        if order <= 1 || coeffs.iter().skip(1).all(Zero::is_zero) {
            Scalar(Repr::Rat(coeffs.into_iter().next().unwrap_or_else(Rational::zero)))
        } else {
            Scalar(Repr::Cyc { order, coeffs })
        }
    }

    pub fn zero() -> Scalar {
        Scalar(Repr::Rat(Rational::zero()))
    }

    pub fn one() -> Scalar {
        Scalar(Repr::Rat(Rational::one()))
    }

    pub fn from_int(v: i64) -> Scalar {
        Scalar(Repr::Rat(Rational::from_integer(BigInt::from(v))))
    }

    pub fn from_ratio(p: i64, q: i64) -> Scalar {
        Scalar(Repr::Rat(ratio(p, q)))
    }

    pub fn from_rational(r: Rational) -> Scalar {
        Scalar(Repr::Rat(r))
    }

    /// Element `sum c_k z^k` of Q(zeta_order); any number of coefficients.
    pub fn from_power_basis(order: u32, coeffs: Vec<Rational>) -> Scalar {
        if order <= 1 {
            let s = coeffs.into_iter().fold(Rational::zero(), |a, b| a + b);
            return Scalar(Repr::Rat(s));
        }
        reduce_power_basis(order, coeffs)
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.0, Repr::Rat(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.0, Repr::Rat(r) if r.is_one())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match &self.0 {
            Repr::Rat(r) => Some(r),
            Repr::Cyc { .. } => None,
        }
    }

    /// Order L of the field the element was computed in; 1 for rationals.
    pub fn field_order(&self) -> u32 {
        match &self.0 {
            Repr::Rat(_) => 1,
            Repr::Cyc { order, .. } => *order,
        }
    }

    /// Power-basis coordinates padded to `phi(order)` entries.
    pub fn coordinates(&self, order: u32) -> Vec<Rational> {
        let phi = euler_phi(order.max(1)).max(1);
        match &self.0 {
            Repr::Rat(r) => {
                let mut v = vec![Rational::zero(); phi];
                v[0] = r.clone();
                v
            }
            Repr::Cyc { coeffs, .. } => coeffs.clone(),
        }
    }

    fn common_order(&self, other: &Scalar) -> Result<u32> {
        match (self.field_order(), other.field_order()) {
            (1, o) | (o, 1) => Ok(o),
            (a, b) if a == b => Ok(a),
            (a, b) => Err(Error::FieldMismatch { left: a, right: b }),
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        if let (Repr::Rat(a), Repr::Rat(b)) = (&self.0, &other.0) {
            return Ok(Scalar(Repr::Rat(a + b)));
        }
        let order = self.common_order(other)?;
        let mut c = self.coordinates(order);
        for (x, y) in c.iter_mut().zip(other.coordinates(order)) {
            *x += y;
        }
        Ok(Scalar::canonical(order, c))
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        match (&self.0, &other.0) {
            (Repr::Rat(a), Repr::Rat(b)) => return Ok(Scalar(Repr::Rat(a * b))),
            (Repr::Rat(a), Repr::Cyc { order, coeffs })
            | (Repr::Cyc { order, coeffs }, Repr::Rat(a)) => {
                if a.is_zero() {
                    return Ok(Scalar::zero());
                }
                return Ok(Scalar::canonical(*order, coeffs.iter().map(|c| c * a).collect()));
            }
            _ => {}
        }
        let order = self.common_order(other)?;
        let a = self.coordinates(order);
        let b = other.coordinates(order);
        let mut prod = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        Ok(reduce_power_basis(order, prod))
    }

    pub fn scale(&self, q: &Rational) -> Scalar {
        self * &Scalar::from_rational(q.clone())
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Scalar> {
        match &self.0 {
            Repr::Rat(r) => {
                if r.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Scalar(Repr::Rat(r.recip())))
                }
            }
            Repr::Cyc { order, coeffs } => {
                let order = *order;
                let phi = coeffs.len();
                // Columns of the multiplication-by-self matrix, then solve M v = e_0.
                let mut columns = Vec::with_capacity(phi);
                for k in 0..phi {
                    let mut basis = vec![Rational::zero(); k + 1];
                    basis[k] = Rational::one();
                    let zk = reduce_power_basis(order, basis);
                    columns.push((self * &zk).coordinates(order));
                }
                let mut m: Vec<Vec<Rational>> = (0..phi)
                    .map(|r| {
                        let mut row: Vec<Rational> = (0..phi).map(|c| columns[c][r].clone()).collect();
                        row.push(if r == 0 { Rational::one() } else { Rational::zero() });
                        row
                    })
                    .collect();
                let sol = solve_square(&mut m).ok_or(Error::DivisionByZero)?;
                Ok(Scalar::canonical(order, sol))
            }
        }
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        self.common_order(other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut result = Scalar::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Integer power, negative exponents through the inverse.
    pub fn powi(&self, e: i64) -> Result<Scalar> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            Ok(self.inv()?.pow((-e) as u32))
        }
    }

    /// Canonical text form; `z` stands for zeta_L of the ambient field.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Parse the text form produced by `Display` in the field Q(zeta_order).
    pub fn parse(text: &str, order: u32) -> Result<Scalar> {
        parse_scalar(text, order.max(1))
    }
}

fn solve_square(m: &mut [Vec<Rational>]) -> Option<Vec<Rational>> {
    let n = m.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for v in m[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=n {
                    let t = &m[col][c] * &f;
                    m[r][c] -= t;
                }
            }
        }
    }
    Some(m.iter().map(|row| row[n].clone()).collect())
}

fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Rat(r) => f.write_str(&fmt_rational(r)),
            Repr::Cyc { coeffs, .. } => {
                let mut first = true;
                for (k, c) in coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let neg = c.is_negative();
                    let mag = c.abs();
                    let mut body = String::new();
                    if k == 0 {
                        body.push_str(&fmt_rational(&mag));
                    } else {
                        if !mag.is_one() {
                            body.push_str(&fmt_rational(&mag));
                            body.push('*');
                        }
                        body.push_str(&format!("z^{}", k));
                    }
                    match (first, neg) {
                        (true, true) => f.write_str("-")?,
                        (true, false) => {}
                        (false, true) => f.write_str("-")?,
                        (false, false) => f.write_str("+")?,
                    }
                    f.write_str(&body)?;
                    first = false;
                }
                Ok(())
            }
        }
    }
}

fn parse_scalar(text: &str, order: u32) -> Result<Scalar> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty scalar".into()));
    }
    let bytes = s.as_bytes();
    let mut pos = 0;
    let mut total = Scalar::zero();
    let mut first = true;
    while pos < bytes.len() {
        let mut sign = 1i64;
        if bytes[pos] == b'+' || bytes[pos] == b'-' {
            if bytes[pos] == b'-' {
                sign = -1;
            }
            pos += 1;
        } else if !first {
            return Err(Error::Parse(format!("expected sign at offset {} in {:?}", pos, text)));
        }
        let start = pos;
        while pos < bytes.len() && bytes[pos] != b'+' && bytes[pos] != b'-' {
            pos += 1;
        }
        let term = &s[start..pos];
        total = &total + &(&parse_term(term, order)? * &Scalar::from_int(sign));
        first = false;
    }
    Ok(total)
}

fn parse_term(term: &str, order: u32) -> Result<Scalar> {
    let bad = || Error::Parse(format!("malformed scalar term {:?}", term));
    let (coef, zpart) = match term.find('z') {
        Some(idx) => {
            let head = &term[..idx];
            let coef = if head.is_empty() {
                Rational::one()
            } else {
                parse_rational(head.strip_suffix('*').ok_or_else(bad)?).ok_or_else(bad)?
            };
            (coef, Some(&term[idx + 1..]))
        }
        None => (parse_rational(term).ok_or_else(bad)?, None),
    };
    let power = match zpart {
        None => return Ok(Scalar::from_rational(coef)),
        Some("") => 1u32,
        Some(rest) => rest
            .strip_prefix('^')
            .and_then(|e| e.parse::<u32>().ok())
            .ok_or_else(bad)?,
    };
    let mut basis = vec![Rational::zero(); power as usize + 1];
    basis[power as usize] = coef;
    Ok(Scalar::from_power_basis(order, basis))
}

fn parse_rational(s: &str) -> Option<Rational> {
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().ok()?;
    let q: BigInt = q.parse().ok()?;
    if q.is_zero() || q.is_negative() {
        return None;
    }
    Some(BigRational::new(p, q))
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                self.$checked(rhs).expect(concat!("Scalar::", stringify!($method)))
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Rat(r) => Scalar(Repr::Rat(-r)),
            Repr::Cyc { order, coeffs } => Scalar(Repr::Cyc {
                order: *order,
                coeffs: coeffs.iter().map(|c| -c).collect(),
            }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Scalar {
        Scalar::from_int(v)
    }
}

/// The coefficient field Q(zeta_L) selected for a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycloField {
    order: u32,
}

impl Default for CycloField {
    fn default() -> Self {
        CycloField { order: 12 }
    }
}

impl CycloField {
    pub fn new(order: u32) -> Result<CycloField> {
        if order == 0 {
            return Err(Error::Parse("cyclotomic order must be positive".into()));
        }
        Ok(CycloField { order })
    }

    pub fn rationals() -> CycloField {
        CycloField { order: 1 }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        let o = s.field_order();
        o == 1 || o == self.order
    }

    /// zeta_order raised to `e` (any integer).
    pub fn zeta_pow(&self, e: i64) -> Scalar {
        if self.order == 1 {
            return Scalar::one();
        }
        let e = e.rem_euclid(self.order as i64) as usize;
        let mut basis = vec![Rational::zero(); e + 1];
        basis[e] = Rational::one();
        Scalar::from_power_basis(self.order, basis)
    }

    /// zeta_l^k, for `l` dividing the field order.
    pub fn root_of_unity(&self, k: i64, l: u32) -> Result<Scalar> {
        if l == 0 {
            return Err(Error::Parse("root of unity order must be positive".into()));
        }
        if l == 2 && self.order % 2 == 1 {
            return Ok(if k.rem_euclid(2) == 0 { Scalar::one() } else { -Scalar::one() });
        }
        if self.order % l != 0 {
            return Err(Error::RootOfUnityOutsideField { l, order: self.order });
        }
        Ok(self.zeta_pow(k * (self.order / l) as i64))
    }

    /// Rotation number `r` in [0, 1) with `s = exp(2 pi i r)`, when `s` is a
    /// root of unity of the field (including `-zeta^k` for odd orders).
    pub fn rotation(&self, s: &Scalar) -> Option<Rational> {
        let minus = -s;
        for k in 0..self.order {
            let z = self.zeta_pow(k as i64);
            if z == *s {
                return Some(ratio(k as i64, self.order as i64));
            }
            if z == minus {
                let r = ratio(k as i64, self.order as i64) + ratio(1, 2);
                return Some(r.clone() - r.floor());
            }
        }
        None
    }

    /// An n-th root of `s` inside the field.
    ///
    /// Candidates are `q * zeta^k` with `q` a positive rational, tried for
    /// `k = 0, 1, ..., L-1` in that order; the first one with `(q zeta^k)^n = s`
    /// wins. For odd `n` the candidates `-q * zeta^k` are tried afterwards.
    pub fn nth_root(&self, s: &Scalar, n: u32) -> Result<Scalar> {
        if n == 0 {
            return Err(Error::Parse("root index must be positive".into()));
        }
        if n == 1 || s.is_zero() {
            return Ok(s.clone());
        }
        let signs: &[i64] = if n % 2 == 1 { &[1, -1] } else { &[1] };
        for &sign in signs {
            for k in 0..self.order {
                let twist = self.zeta_pow(-(k as i64) * n as i64);
                let w = &(s * &twist) * &Scalar::from_int(sign);
                if let Some(r) = w.as_rational() {
                    if let Some(q) = positive_rational_root(r, n) {
                        let root = &Scalar::from_rational(q) * &self.zeta_pow(k as i64);
                        return Ok(&root * &Scalar::from_int(sign));
                    }
                }
            }
        }
        Err(Error::NotRepresentable {
            what: format!("{}-th root of {}", n, s),
            order: self.order,
        })
    }
}

/// Exact positive n-th root of a positive rational, if one exists.
pub fn positive_rational_root(r: &Rational, n: u32) -> Option<Rational> {
    if !r.is_positive() {
        return None;
    }
    let p = r.numer();
    let q = r.denom();
    let pr = p.nth_root(n);
    let qr = q.nth_root(n);
    if num_traits::pow(pr.clone(), n as usize) == *p && num_traits::pow(qr.clone(), n as usize) == *q
    {
        Some(BigRational::new(pr, qr))
    } else {
        None
    }
}

/// gcd helper on u32 used across modules.
pub fn gcd_u32(a: u32, b: u32) -> u32 {
    a.gcd(&b)
}
