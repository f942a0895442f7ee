mod common;

use branchflow_core::moduli::contact_exponent_deformation;
use branchflow_core::puiseux::{semigroup, PuiseuxParam};
use branchflow_core::series::{BiPoly, EXACT};
use branchflow_core::vfield::{
    apply_diffeo, contact_exponent, iterated_tangency, jet_exp, jet_log, tangency_order, JetDiffeo, VectorField,
};
use branchflow_core::{CycloField, Error, Order, Scalar};

fn br(n: u32, terms: &[(u32, i64)], trunc: u32) -> PuiseuxParam {
    PuiseuxParam::from_ints(n, terms, trunc).unwrap()
}

#[test]
fn exp_of_shear_is_the_shear() {
    // exp(y d/dx) = (x + y, y), exactly
    let x = VectorField::from_ints(&[(0, 1, 1)], &[]);
    let j = jet_exp(&x, 5).unwrap();
    assert_eq!(j.x().truncate(6), BiPoly::x().add(&BiPoly::y()).truncate(6));
    assert_eq!(j.y().truncate(6), BiPoly::y().truncate(6));
}

#[test]
fn exp_of_quadratic_field() {
    // X = x^2 d/dx: the flow is x / (1 - x) = x + x^2 + x^3 + ...
    let x = VectorField::from_ints(&[(2, 0, 1)], &[]);
    let j = jet_exp(&x, 6).unwrap();
    let geometric = BiPoly::from_terms((1..=6).map(|k| ((k, 0), Scalar::one())), EXACT);
    assert_eq!(j.x().truncate(7), geometric.truncate(7));
}

#[test]
fn exp_refuses_semisimple_fields() {
    let x = VectorField::from_ints(&[(1, 0, 1)], &[]);
    assert!(matches!(jet_exp(&x, 4), Err(Error::NotNilpotent)));
}

#[test]
fn flows_add_along_one_field() {
    let mut r = common::rng(11);
    for _ in 0..10 {
        let x = common::nilpotent_field(&mut r, 3);
        let a = jet_exp(&x.scale(&Scalar::from_ratio(1, 2)), 6).unwrap();
        let b = jet_exp(&x.scale(&Scalar::from_ratio(3, 2)), 6).unwrap();
        let both = a.compose(&b).unwrap().truncate(6);
        let twice = jet_exp(&x.scale(&Scalar::from_int(2)), 6).unwrap().truncate(6);
        assert_eq!(both, twice);
    }
}

#[test]
fn log_inverts_exp_on_unipotent_jets() {
    let mut r = common::rng(12);
    for _ in 0..20 {
        let j = common::unipotent_jet(&mut r).truncate(6);
        let back = jet_exp(&jet_log(&j).unwrap(), 6).unwrap().truncate(6);
        assert_eq!(back, j);
    }
}

#[test]
fn cusp_tangencies() {
    let cusp = br(2, &[(3, 1)], 30);
    let x = VectorField::from_ints(&[], &[(1, 0, 1)]);
    assert_eq!(tangency_order(&x, &cusp).unwrap(), Order::Finite(5));
    assert_eq!(iterated_tangency(&x, &cusp, 2).unwrap(), vec![Order::Finite(5), Order::Finite(4)]);
    assert_eq!(contact_exponent(&x, &cusp).unwrap(), Order::Finite(2));
}

#[test]
fn regular_fields_have_no_contact_exponent() {
    let x = VectorField::from_ints(&[(0, 0, 1)], &[]);
    assert!(contact_exponent(&x, &br(2, &[(3, 1)], 20)).is_err());
}

#[test]
fn euler_field_on_the_fixed_point_branch() {
    let g0 = br(6, &[(7, 1), (10, 1), (11, 1)], 40);
    let x = VectorField::from_ints(&[(1, 0, 6)], &[(0, 1, 7)]);
    assert_eq!(contact_exponent(&x, &g0).unwrap(), Order::Finite(10));
    assert_eq!(contact_exponent_deformation(&g0, &x, &CycloField::default()).unwrap(), Order::Finite(10));
}

#[test]
fn image_under_the_involutive_jet() {
    let g0 = br(6, &[(7, 1), (10, 1), (11, 1)], 40);
    let m = JetDiffeo::new(
        BiPoly::from_terms([((1, 0), Scalar::one()), ((2, 0), Scalar::one()), ((0, 2), Scalar::one())], EXACT),
        BiPoly::from_terms([((0, 1), Scalar::from_int(-1))], EXACT),
    )
    .unwrap();
    let image = apply_diffeo(&m, &g0, &CycloField::default()).unwrap();
    assert_eq!(image.n(), 6);
    let flipped = image.rotate(&Scalar::from_int(-1)).with_trunc(12);
    assert_eq!(flipped, br(6, &[(7, 1), (10, -1), (11, 1)], 12));
}

/// The form route and the deformation route agree on a random corpus,
/// and tangency satisfies `tau = contact + n + c - 1`.
#[test]
fn contact_routes_agree() {
    let field = CycloField::default();
    let mut r = common::rng(13);
    for _ in 0..40 {
        let b0 = common::branch(&mut r, EXACT);
        let deg = b0.y().support().max().unwrap_or(0).max(b0.n());
        let b = b0.extended(4 * deg + 2);
        let x = common::field(&mut r);
        let form = contact_exponent(&x, &b).unwrap();
        let def = contact_exponent_deformation(&b, &x, &field).unwrap();
        if let Order::Finite(k) = form {
            assert_eq!(def, form, "{} with ({}, {})", b, x.a(), x.b());
            let c = semigroup(&b).unwrap().conductor;
            let tau = tangency_order(&x, &b).unwrap();
            assert_eq!(tau, Order::Finite(k + b.n() + c - 1), "{}", b);
        }
    }
}
