//! Resonances of diffeomorphism jets with root-of-unity eigenvalues, the
//! linear system cutting out second jets of fields tangent to a branch, and
//! certificates that a branch class is not complete.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::puiseux::PuiseuxParam;
use crate::scalars::{ratio, CycloField, Rational, Scalar};
use crate::series::{BiPoly, Order, EXACT};
use crate::vfield::{apply_diffeo, upsilon, JetDiffeo, OneForm};

fn frac(r: &Rational) -> Rational {
    r - r.floor()
}

/// Eigenvalues `exp(2 pi i r1)`, `exp(2 pi i r2)` given by rotation numbers in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenPair {
    pub rotations: [Rational; 2],
}

impl EigenPair {
    pub fn new(r1: Rational, r2: Rational) -> EigenPair {
        EigenPair { rotations: [frac(&r1), frac(&r2)] }
    }

    pub fn from_ratios(p1: i64, q1: i64, p2: i64, q2: i64) -> EigenPair {
        EigenPair::new(ratio(p1, q1), ratio(p2, q2))
    }

    /// Rotation numbers of two roots of unity of the field.
    pub fn from_scalars(l1: &Scalar, l2: &Scalar, field: &CycloField) -> Result<EigenPair> {
        let rot = |s: &Scalar| {
            field
                .rotation(s)
                .ok_or_else(|| Error::InvalidParam(format!("eigenvalue {} is not a root of unity of the field", s)))
        };
        Ok(EigenPair::new(rot(l1)?, rot(l2)?))
    }

    pub fn swapped(&self) -> EigenPair {
        EigenPair { rotations: [self.rotations[1].clone(), self.rotations[0].clone()] }
    }
}

/// `x^i y^j e_target`, with `target` 1 or 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub i: u32,
    pub j: u32,
    pub target: u8,
}

impl Monomial {
    pub fn new(i: u32, j: u32, target: u8) -> Monomial {
        Monomial { i, j, target }
    }

    pub fn swapped(&self) -> Monomial {
        Monomial { i: self.j, j: self.i, target: 3 - self.target }
    }

    /// Integer coefficients `(a, b)` of the strong resonance
    /// `a log l1 + b log l2 = 0`.
    fn exponents(&self) -> (i64, i64) {
        if self.target == 1 {
            (self.i as i64 - 1, self.j as i64)
        } else {
            (self.i as i64, self.j as i64 - 1)
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{} y^{} e{}", self.i, self.j, self.target)
    }
}

pub fn is_resonant(e: &EigenPair, m: &Monomial) -> bool {
    let (a, b) = m.exponents();
    let [r1, r2] = &e.rotations;
    frac(&(r1 * Rational::from_integer(a.into()) + r2 * Rational::from_integer(b.into()))).is_zero()
}

/// Resonant monomials of degree `2..=degree`, by degree, then decreasing `i`,
/// then target.
pub fn resonant_monomials(e: &EigenPair, degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d in 2..=degree {
        for i in (0..=d).rev() {
            for target in [1, 2] {
                let m = Monomial::new(i, d - i, target);
                if is_resonant(e, &m) {
                    out.push(m);
                }
            }
        }
    }
    out
}

/// One row `a k1 + b k2 = rhs` of the strong-resonance system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntRow {
    pub monomial: Monomial,
    pub a: i64,
    pub b: i64,
    pub rhs: Rational,
}

impl fmt::Display for IntRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*k1 + {}*k2 = {}", self.a, self.b, self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Every choice of logarithms leaves some present monomial weakly resonant.
    Obstructed,
    /// Logarithms making all present monomials strongly resonant: `(k1, k2)`.
    NotObstructed { k1: BigInt, k2: BigInt },
    /// No monomial present and no resonance up to the stated degree.
    NonResonant { degree: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResonanceCertificate {
    pub eigen: EigenPair,
    pub present: Vec<Monomial>,
    /// Logarithms are `2 pi i (r + k)`; each row asks one present monomial to
    /// be strongly resonant.
    pub system: Vec<IntRow>,
    pub verdict: Verdict,
    /// Why the system has (no) integer solution.
    pub reason: String,
}

fn int(r: &Rational) -> Option<BigInt> {
    r.is_integer().then(|| r.to_integer())
}

/// Decide whether `a k1 + b k2 = rhs` (all rows) has an integer solution.
fn solve_integer(rows: &[IntRow]) -> (Option<(BigInt, BigInt)>, String) {
    let q = |v: i64| Rational::from_integer(v.into());
    // a nonzero pair of rows gives the rank-2 case
    for (x, r) in rows.iter().enumerate() {
        for s in &rows[x + 1..] {
            let det = r.a * s.b - r.b * s.a;
            if det == 0 {
                continue;
            }
            let k1 = (&r.rhs * q(s.b) - &s.rhs * q(r.b)) / q(det);
            let k2 = (&s.rhs * q(r.a) - &r.rhs * q(s.a)) / q(det);
            for t in rows {
                if q(t.a) * &k1 + q(t.b) * &k2 != t.rhs {
                    return (None, format!("rows are inconsistent at ({}, {}): {}", k1, k2, t));
                }
            }
            return match (int(&k1), int(&k2)) {
                (Some(a), Some(b)) => (Some((a, b)), format!("unique solution k1={}, k2={}", k1, k2)),
                _ => (None, format!("unique rational solution k1={}, k2={} is not integral", k1, k2)),
            };
        }
    }
    let lead = rows.iter().find(|r| r.a != 0 || r.b != 0);
    let lead = match lead {
        None => {
            return match rows.iter().find(|r| !r.rhs.is_zero()) {
                Some(r) => (None, format!("row {} reads 0 = {}", r, r.rhs)),
                None => (Some((BigInt::zero(), BigInt::zero())), String::from("no constraint")),
            };
        }
        Some(r) => r,
    };
    // rank one: every row is a multiple of `lead`
    for r in rows {
        let (fa, fb) = (r.a * lead.b, r.b * lead.a);
        let zero_row = r.a == 0 && r.b == 0;
        let consistent = if zero_row {
            r.rhs.is_zero()
        } else {
            let m = if lead.a != 0 { ratio(r.a, lead.a) } else { ratio(r.b, lead.b) };
            fa == fb && r.rhs == &lead.rhs * &m
        };
        if !consistent {
            return (None, format!("row {} contradicts {}", r, lead));
        }
    }
    let g = BigInt::from(lead.a).gcd(&BigInt::from(lead.b));
    let rhs = match int(&lead.rhs) {
        Some(v) => v,
        None => return (None, format!("{} has a non-integral right-hand side", lead)),
    };
    if !(&rhs % &g).is_zero() {
        return (None, format!("gcd({}, {}) = {} does not divide {}", lead.a, lead.b, g, rhs));
    }
    // extended Euclid for a particular solution
    let e = BigInt::from(lead.a).extended_gcd(&BigInt::from(lead.b));
    let f = &rhs / &e.gcd;
    (Some((e.x * &f, e.y * &f)), format!("{} is solvable over the integers", lead))
}

/// Decide whether the present resonant monomials can all be strongly
/// resonant for one choice of logarithms.
pub fn obstruction(e: &EigenPair, present: &[Monomial], degree: u32) -> Result<ResonanceCertificate> {
    for m in present {
        if !is_resonant(e, m) {
            return Err(Error::NotResonant { i: m.i, j: m.j, target: m.target });
        }
    }
    let [r1, r2] = &e.rotations;
    let system: Vec<IntRow> = present
        .iter()
        .map(|m| {
            let (a, b) = m.exponents();
            let rhs = -(r1 * Rational::from_integer(a.into()) + r2 * Rational::from_integer(b.into()));
            IntRow { monomial: *m, a, b, rhs }
        })
        .collect();
    let (verdict, reason) = if present.is_empty() && resonant_monomials(e, degree).is_empty() {
        (Verdict::NonResonant { degree }, format!("no resonant monomial of degree <= {}", degree))
    } else {
        match solve_integer(&system) {
            (Some((k1, k2)), why) => (Verdict::NotObstructed { k1, k2 }, why),
            (None, why) => (Verdict::Obstructed, why),
        }
    };
    Ok(ResonanceCertificate { eigen: e.clone(), present: present.to_vec(), system, verdict, reason })
}

/// Names of the unknown second-jet coefficients, in column order.
pub const JET2_UNKNOWNS: [&str; 6] = ["a20", "a11", "a02", "b20", "b11", "b02"];

/// Second jets `A = a20 x^2 + a11 x y + a02 y^2`, `B = ...` of fields whose
/// dual form `-B dx + A dy` vanishes on the branch below the order reached
/// by cubic terms.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet2Stabilizer {
    /// Coefficient rows, one per power of `t` in `orders`.
    pub rows: Vec<[Scalar; 6]>,
    pub orders: Vec<u32>,
    pub rank: usize,
    pub dimension: usize,
    pub basis: Vec<[Scalar; 6]>,
}

fn jet2_form(k: usize) -> OneForm {
    let (i, j) = [(2, 0), (1, 1), (0, 2)][k % 3];
    let mono = BiPoly::monomial(Scalar::one(), i, j, EXACT);
    if k < 3 {
        OneForm::new(BiPoly::zero(EXACT), mono)
    } else {
        OneForm::new(mono.neg(), BiPoly::zero(EXACT))
    }
}

/// Row echelon form; returns the reduced rows and pivot columns.
pub fn row_reduce(rows: &[[Scalar; 6]]) -> (Vec<[Scalar; 6]>, Vec<usize>) {
    let mut m: Vec<[Scalar; 6]> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..6 {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for k in 0..6 {
            m[r][k] = &m[r][k] * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..6 {
                    let v = &m[i][k] - &(&f * &m[r][k]);
                    m[i][k] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

/// The stabilizer system on second jets.
pub fn stabilizer_jet2(phi: &PuiseuxParam) -> Result<Jet2Stabilizer> {
    let mut bound = u32::MAX;
    for a in 0..=3 {
        for dy in [false, true] {
            let mono = BiPoly::monomial(Scalar::one(), a, 3 - a, EXACT);
            let w = if dy { OneForm::new(BiPoly::zero(EXACT), mono) } else { OneForm::new(mono, BiPoly::zero(EXACT)) };
            if let Order::Finite(v) = upsilon(&w, phi)? {
                bound = bound.min(v - 1);
            }
        }
    }
    if bound == u32::MAX || bound > phi.trunc() {
        return Err(Error::TruncationExhausted { context: "stabilizer system", needed: bound, available: phi.trunc() });
    }
    let branch = phi.with_trunc(bound);
    let cols: Vec<_> = (0..6).map(|k| jet2_form(k).pullback(&branch)).collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut orders = Vec::new();
    for e in 0..bound {
        let row: [Scalar; 6] = core::array::from_fn(|k| cols[k].coeff(e));
        if row.iter().any(|c| !c.is_zero()) {
            rows.push(row);
            orders.push(e);
        }
    }
    let (reduced, pivots) = row_reduce(&rows);
    let basis = (0..6)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v: [Scalar; 6] = core::array::from_fn(|_| Scalar::zero());
            v[free] = Scalar::one();
            for (row, &p) in reduced.iter().zip(&pivots) {
                v[p] = -&row[free];
            }
            v
        })
        .collect::<Vec<_>>();
    Ok(Jet2Stabilizer { rank: pivots.len(), dimension: 6 - pivots.len(), rows, orders, basis })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompletenessCertificate {
    pub stabilizer: Jet2Stabilizer,
    pub resonance: ResonanceCertificate,
    /// Both hypotheses hold: the class of the branch is not complete.
    pub non_complete: bool,
    /// The moved branch `Phi(phi)` when its renormalization is representable.
    pub witness: Option<PuiseuxParam>,
}

/// Resonant monomials of degree two carried by the jet.
pub fn present_monomials(map: &JetDiffeo, e: &EigenPair) -> Vec<Monomial> {
    let mut out = Vec::new();
    for i in (0..=2).rev() {
        for (target, comp) in [(1u8, map.x()), (2u8, map.y())] {
            let m = Monomial::new(i, 2 - i, target);
            if !comp.coeff(i, 2 - i).is_zero() && is_resonant(e, &m) {
                out.push(m);
            }
        }
    }
    out
}

/// Certificate that `phi` and `map(phi)` are analytically equivalent while
/// `map` lies in no flow, via trivial second-jet stabilizer and resonances.
pub fn completeness_obstruction(phi: &PuiseuxParam, map: &JetDiffeo, field: &CycloField) -> Result<CompletenessCertificate> {
    let l = map.linear_part();
    if !l[0][1].is_zero() || !l[1][0].is_zero() {
        return Err(Error::InvalidParam("linear part of the jet is not diagonal".into()));
    }
    let eigen = EigenPair::from_scalars(&l[0][0], &l[1][1], field)?;
    let present = present_monomials(map, &eigen);
    let resonance = obstruction(&eigen, &present, 2)?;
    let stabilizer = stabilizer_jet2(phi)?;
    let non_complete = stabilizer.dimension == 0 && resonance.verdict == Verdict::Obstructed;
    let witness = apply_diffeo(map, phi, field).ok();
    Ok(CompletenessCertificate { stabilizer, resonance, non_complete, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn resonances_of_involution() {
        let e = EigenPair::from_ratios(0, 1, 1, 2);
        let r = resonant_monomials(&e, 2);
        assert_eq!(r, vec![Monomial::new(2, 0, 1), Monomial::new(1, 1, 2), Monomial::new(0, 2, 1)]);
    }

    #[test]
    fn resonances_of_cube_roots() {
        let e = EigenPair::from_ratios(1, 3, 2, 3);
        assert_eq!(resonant_monomials(&e, 2), vec![Monomial::new(2, 0, 2), Monomial::new(0, 2, 1)]);
    }

    #[test]
    fn obstruction_examples() {
        let e = EigenPair::from_ratios(0, 1, 1, 2);
        let c = obstruction(&e, &[Monomial::new(2, 0, 1), Monomial::new(0, 2, 1)], 2).unwrap();
        assert_eq!(c.verdict, Verdict::Obstructed);
        let c = obstruction(&e, &[Monomial::new(2, 0, 1), Monomial::new(1, 1, 2)], 2).unwrap();
        match c.verdict {
            Verdict::NotObstructed { k1, k2 } => {
                for r in &c.system {
                    let lhs = BigInt::from(r.a) * &k1 + BigInt::from(r.b) * &k2;
                    assert_eq!(Rational::from_integer(lhs), r.rhs);
                }
            }
            v => panic!("{:?}", v),
        }
        let e = EigenPair::from_ratios(1, 3, 2, 3);
        let c = obstruction(&e, &[Monomial::new(0, 2, 1), Monomial::new(2, 0, 2)], 2).unwrap();
        assert_eq!(c.verdict, Verdict::Obstructed);
        assert!(obstruction(&e, &[Monomial::new(1, 1, 1)], 2).is_err());
    }

    #[test]
    fn cusp_stabilizer() {
        let s = stabilizer_jet2(&PuiseuxParam::from_ints(2, &[(3, 1)], 20).unwrap()).unwrap();
        assert_eq!((s.rank, s.dimension), (2, 4));
        let s = stabilizer_jet2(&PuiseuxParam::from_ints(1, &[], 10).unwrap()).unwrap();
        assert_eq!(s.dimension, 5);
    }

    fn g0() -> PuiseuxParam {
        PuiseuxParam::from_ints(6, &[(7, 1), (10, 1), (11, 1)], 40).unwrap()
    }

    fn row(v: [i64; 6]) -> [Scalar; 6] {
        v.map(Scalar::from_int)
    }

    #[test]
    fn gamma0_stabilizer_matches_expected_system() {
        let s = stabilizer_jet2(&g0()).unwrap();
        assert_eq!(s.dimension, 0);
        let expected = [
            row([7, 0, 0, 0, -6, 0]),
            row([0, 7, 0, 0, 0, -6]),
            row([0, 0, 7, 0, 0, 0]),
            row([10, 0, 0, 0, -6, 0]),
            row([11, 17, 0, 0, -6, -12]),
            row([0, 0, 0, 1, 0, 0]),
        ];
        let mut both = s.rows.clone();
        both.extend(expected.iter().cloned());
        assert_eq!(row_reduce(&expected).1.len(), s.rank);
        assert_eq!(row_reduce(&both).1.len(), s.rank);
    }

    #[test]
    fn gamma0_certificates() {
        let f = CycloField::default();
        let m = JetDiffeo::new(
            BiPoly::from_terms([((1, 0), Scalar::one()), ((2, 0), Scalar::one()), ((0, 2), Scalar::one())], EXACT),
            BiPoly::monomial(Scalar::from_int(-1), 0, 1, EXACT),
        )
        .unwrap();
        let c = completeness_obstruction(&g0(), &m, &f).unwrap();
        assert!(c.non_complete);
        let w = c.witness.unwrap().rotate(&Scalar::from_int(-1));
        assert_eq!(w.with_trunc(12), PuiseuxParam::from_ints(6, &[(7, 1), (10, -1), (11, 1)], 12).unwrap());

        let z3 = f.root_of_unity(1, 3).unwrap();
        let m = JetDiffeo::new(
            BiPoly::from_terms([((1, 0), z3.clone()), ((0, 2), Scalar::one())], EXACT),
            BiPoly::from_terms([((0, 1), &z3 * &z3), ((2, 0), Scalar::one())], EXACT),
        )
        .unwrap();
        assert!(completeness_obstruction(&g0(), &m, &f).unwrap().non_complete);

        let c = completeness_obstruction(&g0(), &JetDiffeo::identity(EXACT), &f).unwrap();
        assert!(!c.non_complete);
    }
}

