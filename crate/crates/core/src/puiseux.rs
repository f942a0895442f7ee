//! Puiseux parametrizations `(t^n, y(t))` of plane branches.
//!
//! Characteristic data, semigroup and conductor, strict transforms under
//! blow-up, the multiplicity sequence, and an implicitization oracle.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::scalars::{gcd_u32, CycloField, Scalar};
use crate::series::{BiPoly, Order, TSeries, EXACT};

/// A branch `x = t^n`, `y = y(t)` with `ord y >= n`.
#[derive(Clone, PartialEq, Debug)]
pub struct PuiseuxParam {
    n: u32,
    y: TSeries,
}

impl PuiseuxParam {
    pub fn new(n: u32, y: TSeries) -> Result<PuiseuxParam> {
        if n == 0 {
            return Err(Error::InvalidParam("multiplicity must be positive".into()));
        }
        if let Order::Finite(v) = y.ord() {
            if v < n {
                return Err(Error::TangentConeViolation);
            }
        }
        Ok(PuiseuxParam { n, y })
    }

    /// Build from `(exponent, coefficient)` pairs with truncation `trunc`.
    pub fn from_terms<I: IntoIterator<Item = (u32, Scalar)>>(n: u32, terms: I, trunc: u32) -> Result<PuiseuxParam> {
        PuiseuxParam::new(n, TSeries::from_terms(terms, trunc))
    }

    /// Integer coefficients, a convenience for tests and examples.
    pub fn from_ints(n: u32, terms: &[(u32, i64)], trunc: u32) -> Result<PuiseuxParam> {
        PuiseuxParam::from_terms(n, terms.iter().map(|(e, c)| (*e, Scalar::from_int(*c))), trunc)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn y(&self) -> &TSeries {
        &self.y
    }

    /// `x(t) = t^n`, known exactly.
    pub fn x(&self) -> TSeries {
        TSeries::monomial(Scalar::one(), self.n, EXACT)
    }

    pub fn trunc(&self) -> u32 {
        self.y.trunc()
    }

    pub fn coeff(&self, e: u32) -> Scalar {
        self.y.coeff(e)
    }

    pub fn with_trunc(&self, k: u32) -> PuiseuxParam {
        PuiseuxParam { n: self.n, y: self.y.truncate(k) }
    }

    /// Same coefficients declared known up to `k` (for exact polynomial data).
    pub fn extended(&self, k: u32) -> PuiseuxParam {
        PuiseuxParam { n: self.n, y: self.y.clone().with_trunc(k) }
    }

    /// First exponent of `y` not divisible by `n` (the first characteristic
    /// exponent), if one is known.
    pub fn first_char_exponent(&self) -> Option<u32> {
        self.y.support().find(|e| e % self.n != 0)
    }

    /// Prepared means the first exponent of `y` is not a multiple of `n`.
    pub fn is_prepared(&self) -> bool {
        self.n > 1 && matches!(self.y.ord(), Order::Finite(m) if m % self.n != 0)
    }

    /// Characteristic exponents `beta_1 < ... < beta_g` read from the support.
    pub fn char_exponents(&self) -> Vec<u32> {
        let mut e = self.n;
        let mut out = Vec::new();
        for k in self.y.support() {
            if e == 1 {
                break;
            }
            if k % e != 0 {
                out.push(k);
                e = gcd_u32(e, k);
            }
        }
        out
    }

    /// gcd of `n` and the known support.
    pub fn support_gcd(&self) -> u32 {
        self.y.support().fold(self.n, gcd_u32)
    }

    /// Check that the gcd chain reaches 1 inside the known data.
    pub fn check_irreducible(&self) -> Result<()> {
        match self.support_gcd() {
            1 => Ok(()),
            g if self.y.is_exact() => Err(Error::NotIrreducible { gcd: g }),
            _ => Err(Error::IrreducibilityUndetermined { trunc: self.trunc() }),
        }
    }

    /// Substitute `t -> xi t`.
    pub fn rotate(&self, xi: &Scalar) -> PuiseuxParam {
        let y = TSeries::from_terms(self.y.terms().map(|(e, c)| (e, c * &xi.pow(e))), self.y.trunc());
        PuiseuxParam { n: self.n, y }
    }
}

impl fmt::Display for PuiseuxParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(t^{}, {})", self.n, self.y)
    }
}

/// A flow `exp(-c x^k d/dy)` removed during preparation.
#[derive(Clone, PartialEq, Debug)]
pub struct HeadTerm {
    pub k: u32,
    pub coeff: Scalar,
}

#[derive(Clone, PartialEq, Debug)]
pub struct Preparation {
    pub param: PuiseuxParam,
    pub log: Vec<HeadTerm>,
    /// The branch is smooth: `y` vanishes after removing all head terms.
    pub smooth: bool,
}

/// Remove the head terms `a_{kn} t^{kn}` that precede the first
/// characteristic exponent.
pub fn prepare(phi: &PuiseuxParam) -> Result<Preparation> {
    let n = phi.n;
    let stop = match phi.first_char_exponent() {
        Some(m) => m,
        None if n == 1 => phi.trunc(),
        None => return Err(phi.check_irreducible().err().unwrap_or(Error::IrreducibilityUndetermined { trunc: phi.trunc() })),
    };
    let mut log = Vec::new();
    let mut y = phi.y.clone();
    for (e, c) in phi.y.terms() {
        if e >= stop {
            break;
        }
        log.push(HeadTerm { k: e / n, coeff: c.clone() });
        y = y.sub(&TSeries::monomial(c.clone(), e, EXACT));
    }
    Ok(Preparation { param: PuiseuxParam { n, y }, log, smooth: n == 1 })
}

/// Semigroup of values of a branch.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SemigroupData {
    pub generators: Vec<u32>,
    pub conductor: u32,
    pub char_exponents: Vec<u32>,
}

impl SemigroupData {
    /// Membership by dynamic programming over the generators.
    pub fn contains(&self, v: u32) -> bool {
        if v >= self.conductor {
            return true;
        }
        let mut reach = vec![false; v as usize + 1];
        reach[0] = true;
        for k in 1..=v as usize {
            reach[k] = self.generators.iter().any(|&g| g as usize <= k && reach[k - g as usize]);
        }
        reach[v as usize]
    }

    /// Elements below `bound`, ascending.
    pub fn elements_below(&self, bound: u32) -> Vec<u32> {
        (0..bound).filter(|v| self.contains(*v)).collect()
    }

    /// The gcd sequence `e_0 = n, e_1, ..., e_g = 1`.
    pub fn gcd_chain(&self) -> Vec<u32> {
        let mut e = vec![self.generators[0]];
        for b in &self.char_exponents {
            let last = *e.last().unwrap();
            e.push(gcd_u32(last, *b));
        }
        e
    }
}

/// Generators and conductor from the characteristic exponents.
pub fn semigroup(phi: &PuiseuxParam) -> Result<SemigroupData> {
    let n = phi.n;
    let beta = phi.char_exponents();
    let mut e = n;
    for b in &beta {
        e = gcd_u32(e, *b);
    }
    if e != 1 {
        phi.check_irreducible()?;
    }
    let mut gens = vec![n];
    let mut conductor: i64 = 1 - n as i64;
    let mut e_prev = n;
    let mut n_prev = 1;
    for (q, b) in beta.iter().enumerate() {
        let gen = if q == 0 { *b } else { n_prev * gens[q] + b - beta[q - 1] };
        gens.push(gen);
        let e_q = gcd_u32(e_prev, *b);
        n_prev = e_prev / e_q;
        conductor += (n_prev as i64 - 1) * gen as i64;
        e_prev = e_q;
    }
    Ok(SemigroupData { generators: gens, conductor: conductor.max(0) as u32, char_exponents: beta })
}

/// Multiplicities of the infinitely near points, predicted by the Euclidean
/// algorithm on the characteristic exponents.
pub fn mult_sequence_euclid(n: u32, char_exponents: &[u32], depth: usize) -> Vec<u32> {
    let mut out = Vec::new();
    let mut prev = 0;
    let mut e = n;
    for (q, b) in char_exponents.iter().enumerate() {
        let (mut a, mut d) = if q == 0 { (*b, n) } else { (b - prev, e) };
        while d > 0 && out.len() < depth {
            for _ in 0..a / d {
                out.push(d);
            }
            let r = a % d;
            a = d;
            d = r;
        }
        e = gcd_u32(e, *b);
        prev = *b;
    }
    while out.len() < depth {
        out.push(1);
    }
    out.truncate(depth);
    out
}

/// The strict transform after one blow-up, with the coordinate change used.
///
/// In the chart `x = x1, y = x1 * y1` the branch meets the divisor at
/// `y1 = translate`. With `y2 = y1 - translate` the new coordinates are
/// `(x1, y2)` when `swapped` is false and `(y2 / scale, x1)` otherwise.
#[derive(Clone, PartialEq, Debug)]
pub struct StrictTransform {
    pub param: PuiseuxParam,
    pub translate: Scalar,
    pub swapped: bool,
    pub scale: Scalar,
}

/// Blow up the origin and move to the point of the strict transform.
pub fn strict_transform(phi: &PuiseuxParam) -> Result<StrictTransform> {
    let n = phi.n;
    let y1 = phi.y.shift_down(n)?;
    let translate = y1.coeff(0);
    let y2 = y1.sub(&TSeries::monomial(translate.clone(), 0, EXACT));
    match y2.ord() {
        Order::Finite(m) if m < n => {
            let scale = y2.coeff(m);
            let u = y2.scale(&scale.inv()?);
            let s = u.nth_root(m, &CycloField::rationals())?;
            let alpha = s.invert_param()?;
            let y = alpha.pow(n);
            Ok(StrictTransform { param: PuiseuxParam { n: m, y }, translate, swapped: true, scale })
        }
        Order::Finite(_) => {
            Ok(StrictTransform { param: PuiseuxParam { n, y: y2 }, translate, swapped: false, scale: Scalar::one() })
        }
        Order::AtLeast(k) if n == 1 => Ok(StrictTransform {
            param: PuiseuxParam { n, y: TSeries::zero(k) },
            translate,
            swapped: false,
            scale: Scalar::one(),
        }),
        Order::AtLeast(k) => Err(Error::TruncationExhausted {
            context: "strict transform of a singular branch",
            needed: k + 1,
            available: k,
        }),
    }
}

/// Multiplicities `n_0, ..., n_{depth-1}` by repeated strict transforms,
/// cross-checked against the Euclidean prediction.
pub fn mult_sequence(phi: &PuiseuxParam, depth: usize) -> Result<Vec<u32>> {
    let mut out = Vec::with_capacity(depth);
    let mut cur = phi.clone();
    while out.len() < depth {
        out.push(cur.n);
        if cur.n == 1 {
            // smooth from here on: every later point has multiplicity one
            out.resize(depth, 1);
            break;
        }
        if out.len() < depth {
            cur = strict_transform(&cur)?.param;
        }
    }
    let expected = mult_sequence_euclid(phi.n, &phi.char_exponents(), depth);
    if phi.support_gcd() == 1 && expected != out {
        return Err(Error::CrossCheck(alloc::format!(
            "multiplicity sequence {:?} differs from the Euclidean prediction {:?}",
            out, expected
        )));
    }
    Ok(out)
}

/// Implicit equation `f(x, y)` of the branch, monic of degree `n` in `y`,
/// treating the known part of `y(t)` as an exact polynomial.
///
/// `f = (-1)^n det(M)` where `M` is the matrix of multiplication by
/// `y(t) - y` on `Q[x, y][t] / (t^n - x)` in the basis `1, t, ..., t^(n-1)`.
pub fn implicitize(phi: &PuiseuxParam) -> BiPoly {
    let n = phi.n as usize;
    let mut m = vec![vec![BiPoly::zero(EXACT); n]; n];
    for k in 0..n {
        for (e, c) in phi.y.terms() {
            let p = e as usize + k;
            let (q, r) = (p / n, p % n);
            m[r][k] = m[r][k].add(&BiPoly::monomial(c.clone(), q as u32, 0, EXACT));
        }
        m[k][k] = m[k][k].sub(&BiPoly::y());
    }
    let det = determinant(&m);
    if n % 2 == 1 {
        det.neg()
    } else {
        det
    }
}

/// Laplace expansion along rows with memoization over column subsets.
fn determinant(m: &[Vec<BiPoly>]) -> BiPoly {
    let n = m.len();
    let mut memo: BTreeMap<u32, BiPoly> = BTreeMap::new();
    minor(m, 0, (1u32 << n) - 1, &mut memo)
}

fn minor(m: &[Vec<BiPoly>], row: usize, cols: u32, memo: &mut BTreeMap<u32, BiPoly>) -> BiPoly {
    if cols == 0 {
        return BiPoly::constant(Scalar::one());
    }
    if let Some(v) = memo.get(&cols) {
        return v.clone();
    }
    let mut acc = BiPoly::zero(EXACT);
    let mut sign_pos = true;
    for c in 0..m.len() {
        if cols & (1 << c) == 0 {
            continue;
        }
        if !m[row][c].is_zero() {
            let sub = minor(m, row + 1, cols & !(1 << c), memo);
            let term = m[row][c].mul(&sub);
            acc = if sign_pos { acc.add(&term) } else { acc.sub(&term) };
        }
        sign_pos = !sign_pos;
    }
    memo.insert(cols, acc.clone());
    acc
}

/// Intersection multiplicity `(Gamma, g = 0)` as `ord_t g(phi(t))`.
pub fn intersection(phi: &PuiseuxParam, g: &BiPoly) -> Result<Order> {
    Ok(g.compose_series(&phi.x(), &phi.y)?.ord())
}

/// Bring an arbitrary parametrization `(x(t), y(t))` with `ord x = n <= ord y`
/// back to the form `(u^n, ...)`, choosing the root branch of `field`.
pub fn renormalize(x: &TSeries, y: &TSeries, field: &CycloField) -> Result<PuiseuxParam> {
    let n = match x.ord() {
        Order::Finite(n) if n > 0 => n,
        Order::Finite(_) => return Err(Error::UnitSubstitution),
        Order::AtLeast(k) => {
            return Err(Error::TruncationExhausted { context: "renormalization", needed: k + 1, available: k })
        }
    };
    if let Order::Finite(v) = y.ord() {
        if v < n {
            return Err(Error::TangentConeViolation);
        }
    }
    if x.is_exact() && x.num_terms() == 1 && x.coeff(n).is_one() {
        return PuiseuxParam::new(n, y.clone());
    }
    let x = if x.is_exact() { x.truncate(y.trunc()) } else { x.clone() };
    let s = x.nth_root(n, field)?;
    let alpha = s.invert_param()?;
    let y = y.compose(&alpha)?;
    PuiseuxParam::new(n, y)
}

/// `n`-th roots of unity available in `field`, in a fixed order.
pub fn roots_of_unity(n: u32, field: &CycloField) -> Vec<Scalar> {
    let mut out: Vec<Scalar> = Vec::new();
    let l = field.order() as i64;
    for k in 0..l {
        for s in [field.zeta_pow(k), -field.zeta_pow(k)] {
            if s.pow(n).is_one() && !out.contains(&s) {
                out.push(s);
            }
        }
    }
    out
}

/// Two branches agree after preparation and a substitution `t -> xi t`
/// with `xi^n = 1`, on their common truncation.
pub fn branch_equal(a: &PuiseuxParam, b: &PuiseuxParam, field: &CycloField) -> Result<bool> {
    if a.n != b.n {
        return Ok(false);
    }
    let pa = prepare(a)?.param;
    let pb = prepare(b)?.param;
    let k = pa.trunc().min(pb.trunc());
    let (pa, pb) = (pa.with_trunc(k), pb.with_trunc(k));
    Ok(roots_of_unity(a.n, field).iter().any(|xi| pa.rotate(xi) == pb))
}

/// Default `t`-truncation for branch computations: `c + 2n + 4`.
pub fn default_trunc(n: u32, conductor: u32) -> u32 {
    conductor + 2 * n + 4
}
