//! Random corpus shared by the integration suites: irreducible polynomial
//! branches with `n <= 6` and singular polynomial vector fields.

#![allow(dead_code)]

use branchflow_core::puiseux::PuiseuxParam;
use branchflow_core::scalars::gcd_u32;
use branchflow_core::series::{BiPoly, EXACT};
use branchflow_core::vfield::{JetDiffeo, VectorField};
use branchflow_core::{Order, Scalar, TSeries};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn coefficient(r: &mut ChaCha8Rng) -> Scalar {
    let (p, q) = *[(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-3, 2), (3, 1)].choose(r).unwrap();
    Scalar::from_ratio(p, q)
}

/// Exponents of `y` for an irreducible branch of multiplicity `n`, first
/// exponent not a multiple of `n`.
pub fn support(r: &mut ChaCha8Rng, n: u32, span: u32) -> Vec<u32> {
    if n == 1 {
        let mut s: Vec<u32> = (2..2 + span).filter(|_| r.gen_bool(0.3)).collect();
        s.dedup();
        return s;
    }
    let mut first = r.gen_range(n + 1..n + span);
    while first % n == 0 {
        first += 1;
    }
    let mut s = vec![first];
    let mut g = gcd_u32(n, first);
    for e in first + 1..first + span {
        if r.gen_bool(0.25) {
            s.push(e);
            g = gcd_u32(g, e);
        }
    }
    let mut e = first + span;
    while g > 1 {
        if e % g != 0 {
            s.push(e);
            g = gcd_u32(g, e);
        }
        e += 1;
    }
    s
}

/// A random irreducible polynomial branch, declared known up to `trunc`.
pub fn branch_with(r: &mut ChaCha8Rng, n: u32, trunc: u32) -> PuiseuxParam {
    let s = support(r, n, 6);
    PuiseuxParam::from_terms(n, s.into_iter().map(|e| (e, coefficient(r))), trunc).unwrap()
}

pub fn branch(r: &mut ChaCha8Rng, trunc: u32) -> PuiseuxParam {
    let n = r.gen_range(1..=6);
    branch_with(r, n, trunc)
}

fn poly(r: &mut ChaCha8Rng, min_deg: u32, max_deg: u32, density: f64) -> BiPoly {
    let mut terms = Vec::new();
    for d in min_deg..=max_deg {
        for i in 0..=d {
            if r.gen_bool(density) {
                terms.push(((i, d - i), coefficient(r)));
            }
        }
    }
    BiPoly::from_terms(terms, EXACT)
}

/// A singular polynomial field of degree at most three, not identically zero.
pub fn field(r: &mut ChaCha8Rng) -> VectorField {
    loop {
        let x = VectorField::new(poly(r, 1, 3, 0.3), poly(r, 1, 3, 0.3));
        if !x.is_zero() {
            return x;
        }
    }
}

/// A nonzero field without linear part, plus `c y d/dx` sometimes, so
/// that the linear part is nilpotent.
pub fn nilpotent_field(r: &mut ChaCha8Rng, max_deg: u32) -> VectorField {
    loop {
        let mut a = poly(r, 2, max_deg, 0.3);
        if r.gen_bool(0.5) {
            a = a.add(&BiPoly::monomial(coefficient(r), 0, 1, EXACT));
        }
        let x = VectorField::new(a, poly(r, 2, max_deg, 0.3));
        if !x.is_zero() {
            return x;
        }
    }
}

/// A 2-jet `(x + q1 + a y, y + q2)` with unipotent linear part.
pub fn unipotent_jet(r: &mut ChaCha8Rng) -> JetDiffeo {
    let mut x = BiPoly::x().add(&poly(r, 2, 2, 0.5));
    if r.gen_bool(0.5) {
        x = x.add(&BiPoly::monomial(coefficient(r), 0, 1, EXACT));
    }
    let y = BiPoly::y().add(&poly(r, 2, 2, 0.5));
    JetDiffeo::new(x, y).unwrap()
}

/// Values `ord g(phi)` below `bound` of the monomials `x^a y^b` and their
/// combinations, by Gaussian elimination on leading terms. Independent of
/// the characteristic-exponent formulas.
pub fn value_set(phi: &PuiseuxParam, bound: u32) -> Vec<u32> {
    let branch = phi.with_trunc(bound);
    let (x, y) = (branch.x(), branch.y().clone());
    let vy = y.ord().finite().unwrap_or(bound).max(1);
    let mut rows: Vec<(u32, TSeries)> = Vec::new();
    for a in 0..=bound / phi.n() {
        for b in 0..=bound / vy {
            let mut s = x.pow(a).mul(&y.pow(b)).truncate(bound);
            while let Order::Finite(e) = s.ord() {
                match rows.iter().find(|(p, _)| *p == e) {
                    Some((_, r)) => {
                        let c = &s.coeff(e) / &r.coeff(e);
                        s = s.sub(&r.scale(&c));
                    }
                    None => {
                        rows.push((e, s));
                        break;
                    }
                }
            }
        }
    }
    let mut v: Vec<u32> = rows.into_iter().map(|(e, _)| e).collect();
    v.sort();
    v
}
