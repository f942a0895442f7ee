mod common;

use branchflow_core::embedding::{
    completeness_obstruction, obstruction, resonant_monomials, row_reduce, stabilizer_jet2, EigenPair, Monomial,
    Verdict,
};
use branchflow_core::puiseux::PuiseuxParam;
use branchflow_core::series::{BiPoly, EXACT};
use branchflow_core::vfield::{upsilon, JetDiffeo, OneForm};
use branchflow_core::{CycloField, Order, Rational, Scalar};
use num_bigint::BigInt;
use proptest::prelude::*;

fn rat(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

fn eigen() -> impl Strategy<Value = EigenPair> {
    (0i64..12, 0i64..12, prop_oneof![Just(1i64), Just(2), Just(3), Just(4), Just(6), Just(12)])
        .prop_map(|(p1, p2, q)| EigenPair::from_ratios(p1, q, p2, q))
}

/// Integer points of the system in a box, by enumeration.
fn brute_force_solvable(cert: &branchflow_core::embedding::ResonanceCertificate) -> bool {
    (-12i64..=12).any(|k1| {
        (-12i64..=12).any(|k2| cert.system.iter().all(|r| rat(r.a * k1 + r.b * k2) == r.rhs))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn resonances_commute_with_the_swap(e in eigen()) {
        let mut direct: Vec<Monomial> = resonant_monomials(&e, 4).iter().map(Monomial::swapped).collect();
        let mut swapped = resonant_monomials(&e.swapped(), 4);
        direct.sort();
        swapped.sort();
        prop_assert_eq!(direct, swapped);
    }

    #[test]
    fn integer_shifts_do_not_change_resonances(e in eigen(), a in -3i64..=3, b in -3i64..=3) {
        let [r1, r2] = e.rotations.clone();
        let shifted = EigenPair::new(r1 + rat(a), r2 + rat(b));
        prop_assert_eq!(resonant_monomials(&shifted, 4), resonant_monomials(&e, 4));
    }

    #[test]
    fn verdicts_match_enumeration(e in eigen(), pick in prop::collection::vec(any::<bool>(), 16)) {
        let all = resonant_monomials(&e, 4);
        let present: Vec<Monomial> = all.iter().zip(pick.iter().cycle()).filter(|(_, p)| **p).map(|(m, _)| *m).collect();
        let cert = obstruction(&e, &present, 4).unwrap();
        let swapped: Vec<Monomial> = present.iter().map(Monomial::swapped).collect();
        let mirror = obstruction(&e.swapped(), &swapped, 4).unwrap();
        prop_assert_eq!(matches!(cert.verdict, Verdict::Obstructed), matches!(mirror.verdict, Verdict::Obstructed));
        match &cert.verdict {
            Verdict::Obstructed => prop_assert!(!brute_force_solvable(&cert)),
            Verdict::NotObstructed { k1, k2 } => {
                for r in &cert.system {
                    prop_assert_eq!(Rational::from_integer(BigInt::from(r.a) * k1 + BigInt::from(r.b) * k2), r.rhs.clone());
                }
            }
            Verdict::NonResonant { .. } => prop_assert!(all.is_empty()),
        }
    }
}

fn quad_form(v: &[i64; 6]) -> OneForm {
    // A = a20 x^2 + a11 xy + a02 y^2, B likewise; the dual form is -B dx + A dy
    let poly = |c: &[i64]| {
        BiPoly::from_terms(
            [(2, 0), (1, 1), (0, 2)].iter().zip(c).map(|(&(i, j), &k)| ((i, j), Scalar::from_int(k))),
            EXACT,
        )
    };
    OneForm::new(poly(&v[3..]).neg(), poly(&v[..3]))
}

fn brute_force_stabilizer(phi: &PuiseuxParam) {
    let s = stabilizer_jet2(phi).unwrap();
    // the order reached by cubic terms, independently of the library
    let mut bound = u32::MAX;
    for a in 0..=3 {
        for dy in [false, true] {
            let m = BiPoly::monomial(Scalar::one(), a, 3 - a, EXACT);
            let w = if dy { OneForm::new(BiPoly::zero(EXACT), m) } else { OneForm::new(m, BiPoly::zero(EXACT)) };
            if let Order::Finite(v) = upsilon(&w, phi).unwrap() {
                bound = bound.min(v);
            }
        }
    }
    let mut v = [0i64; 6];
    for code in 0..729 {
        let mut c = code;
        for slot in v.iter_mut() {
            *slot = c % 3 - 1;
            c /= 3;
        }
        let vanishes = match upsilon(&quad_form(&v), phi).unwrap() {
            Order::Finite(u) => u >= bound,
            Order::AtLeast(_) => true,
        };
        let mut rows = s.basis.clone();
        rows.push(v.map(Scalar::from_int));
        let in_span = row_reduce(&rows).1.len() == s.dimension;
        assert_eq!(vanishes, in_span, "{} at {:?}", phi, v);
    }
}

#[test]
fn stabilizers_match_enumeration() {
    brute_force_stabilizer(&PuiseuxParam::from_ints(2, &[(3, 1)], 40).unwrap());
    brute_force_stabilizer(&PuiseuxParam::from_ints(3, &[(4, 1)], 40).unwrap());
    brute_force_stabilizer(&PuiseuxParam::from_ints(4, &[(6, 1), (7, 1)], 60).unwrap());
    brute_force_stabilizer(&PuiseuxParam::from_ints(6, &[(7, 1), (10, 1), (11, 1)], 40).unwrap());
}

#[test]
fn reference_jet_is_not_complete() {
    let field = CycloField::default();
    let g0 = PuiseuxParam::from_ints(6, &[(7, 1), (10, 1), (11, 1)], 40).unwrap();
    let m1 = JetDiffeo::new(
        BiPoly::from_terms([((1, 0), Scalar::one()), ((2, 0), Scalar::one()), ((0, 2), Scalar::one())], EXACT),
        BiPoly::from_terms([((0, 1), Scalar::from_int(-1))], EXACT),
    )
    .unwrap();
    let c = completeness_obstruction(&g0, &m1, &field).unwrap();
    assert!(c.non_complete);
    assert_eq!(c.resonance.verdict, Verdict::Obstructed);
    assert_eq!(c.stabilizer.dimension, 0);
}
