mod common;

use branchflow_core::puiseux::{
    branch_equal, default_trunc, implicitize, intersection, mult_sequence, mult_sequence_euclid, prepare, semigroup, strict_transform,
    PuiseuxParam,
};
use branchflow_core::series::{BiPoly, EXACT};
use branchflow_core::{CycloField, Order, Scalar};

fn br(n: u32, terms: &[(u32, i64)], trunc: u32) -> PuiseuxParam {
    PuiseuxParam::from_ints(n, terms, trunc).unwrap()
}

#[test]
fn cusp_equation_and_intersections() {
    let cusp = br(2, &[(3, 1)], EXACT);
    let f = implicitize(&cusp);
    let expected = BiPoly::from_terms([((0, 2), Scalar::one()), ((3, 0), Scalar::from_int(-1))], EXACT);
    assert_eq!(f, expected);
    let y = BiPoly::from_terms([((0, 1), Scalar::one())], EXACT);
    assert_eq!(intersection(&cusp, &y).unwrap(), Order::Finite(3));
}

#[test]
fn two_generator_conductors() {
    // c = (n - 1)(m - 1) for a single characteristic exponent
    for (n, m) in [(2, 3), (2, 7), (3, 5), (4, 7), (6, 7), (5, 9)] {
        let s = semigroup(&br(n, &[(m, 1)], EXACT)).unwrap();
        assert_eq!(s.generators, vec![n, m]);
        assert_eq!(s.conductor, (n - 1) * (m - 1));
    }
}

#[test]
fn three_generator_semigroup() {
    // (t^4, t^6 + t^7): generators 4, 6, 13, conductor 16
    let s = semigroup(&br(4, &[(6, 1), (7, 1)], EXACT)).unwrap();
    assert_eq!(s.generators, vec![4, 6, 13]);
    assert_eq!(s.char_exponents, vec![6, 7]);
    assert_eq!(s.conductor, 16);
    let values = common::value_set(&br(4, &[(6, 1), (7, 1)], 40), 30);
    let listed: Vec<u32> = (0..30).filter(|v| s.contains(*v)).collect();
    assert_eq!(values, listed);
}

#[test]
fn multiplicities_of_known_branches() {
    assert_eq!(mult_sequence(&br(2, &[(3, 1)], 20), 3).unwrap(), vec![2, 1, 1]);
    assert_eq!(mult_sequence(&br(6, &[(7, 1), (10, 1), (11, 1)], 60), 4).unwrap(), vec![6, 1, 1, 1]);
    assert_eq!(mult_sequence(&br(3, &[(5, 1)], 30), 4).unwrap(), vec![3, 2, 1, 1]);
    assert_eq!(mult_sequence_euclid(4, &[6, 7], 5), vec![4, 2, 2, 1, 1]);
}

#[test]
fn preparation_and_blow_up() {
    let p = prepare(&br(3, &[(3, 2), (6, 1), (7, 1)], 30)).unwrap();
    assert_eq!(p.param, br(3, &[(7, 1)], 30));
    assert_eq!(p.log.len(), 2);
    // m >= 2n: the exponents shift down by n
    let st = strict_transform(&br(2, &[(5, 1)], 20)).unwrap();
    assert_eq!((st.param.n(), st.param.y().ord()), (2, Order::Finite(3)));
    assert!(!st.swapped);
}

#[test]
fn rotated_branches_are_equal() {
    let field = CycloField::default();
    let g0 = br(6, &[(7, 1), (10, 1), (11, 1)], 40);
    for k in 0..6 {
        let xi = field.root_of_unity(k, 6).unwrap();
        assert!(branch_equal(&g0, &g0.rotate(&xi), &field).unwrap());
    }
    assert!(!branch_equal(&g0, &br(6, &[(7, 1), (10, 1), (11, -1)], 40), &field).unwrap());
}

/// Oracles on a random corpus: value sets against the semigroup, the
/// conductor against `sum n_i (n_i - 1)` over the blow-up sequence, and the
/// implicit equation against back substitution.
#[test]
fn corpus_oracles() {
    let mut r = common::rng(7);
    for _ in 0..40 {
        let b = common::branch(&mut r, EXACT);
        let sg = semigroup(&b).unwrap();
        let known = b.extended(default_trunc(b.n(), sg.conductor));
        let bound = sg.conductor + 2 * b.n() + 2;
        let values = common::value_set(&known, bound);
        assert_eq!(values, (0..bound).filter(|v| sg.contains(*v)).collect::<Vec<_>>(), "{}", b);
        // a singular point adds at least 2 to the sum, so c/2 + 1 steps suffice
        let depth = (sg.conductor / 2 + 1) as usize;
        let mults = mult_sequence(&known, depth).unwrap();
        let delta2: u32 = mults.iter().map(|m| m * (m - 1)).sum();
        assert_eq!(delta2, sg.conductor, "{} with multiplicities {:?}", b, mults);
        let f = implicitize(&b);
        assert_eq!(intersection(&b, &f).unwrap().finite(), None, "{}", b);
    }
}
