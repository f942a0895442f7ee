//! Singular plane vector fields, their dual 1-forms, contact orders along a
//! branch, and exp/log between nilpotent fields and unipotent jets.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::puiseux::{implicitize, renormalize, PuiseuxParam};
use crate::scalars::{ratio, CycloField, Scalar};
use crate::series::{BiPoly, Order, TSeries, EXACT};

/// A 2x2 matrix over the field, row major.
pub type Linear = [[Scalar; 2]; 2];

/// `A(x, y) d/dx + B(x, y) d/dy`.
#[derive(Clone, PartialEq, Debug)]
pub struct VectorField {
    a: BiPoly,
    b: BiPoly,
}

impl VectorField {
    pub fn new(a: BiPoly, b: BiPoly) -> VectorField {
        VectorField { a, b }
    }

    pub fn zero() -> VectorField {
        VectorField::new(BiPoly::zero(EXACT), BiPoly::zero(EXACT))
    }

    /// Integer coefficients `(i, j, c)` for `c x^i y^j`.
    pub fn from_ints(a: &[(u32, u32, i64)], b: &[(u32, u32, i64)]) -> VectorField {
        let conv = |t: &[(u32, u32, i64)]| {
            BiPoly::from_terms(t.iter().map(|(i, j, c)| ((*i, *j), Scalar::from_int(*c))), EXACT)
        };
        VectorField::new(conv(a), conv(b))
    }

    pub fn a(&self) -> &BiPoly {
        &self.a
    }

    pub fn b(&self) -> &BiPoly {
        &self.b
    }

    pub fn trunc(&self) -> u32 {
        self.a.trunc().min(self.b.trunc())
    }

    pub fn truncate(&self, d: u32) -> VectorField {
        VectorField::new(self.a.truncate(d), self.b.truncate(d))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Vanishes at the origin.
    pub fn is_singular(&self) -> bool {
        self.a.coeff(0, 0).is_zero() && self.b.coeff(0, 0).is_zero()
    }

    /// `min(ord A, ord B)`.
    pub fn multiplicity(&self) -> Order {
        self.a.ord().min(self.b.ord())
    }

    /// Matrix `[[a10, a01], [b10, b01]]` of the linear part.
    pub fn linear_part(&self) -> Linear {
        [
            [self.a.coeff(1, 0), self.a.coeff(0, 1)],
            [self.b.coeff(1, 0), self.b.coeff(0, 1)],
        ]
    }

    /// Singular with nilpotent linear part.
    pub fn is_nilpotent(&self) -> bool {
        let m = self.linear_part();
        self.is_singular() && (&m[0][0] + &m[1][1]).is_zero() && det(&m).is_zero()
    }

    /// Prepared relative to a branch tangent to `y = 0`: one of the cross
    /// partials of the linear part vanishes.
    pub fn is_prepared(&self) -> bool {
        self.a.coeff(0, 1).is_zero() || self.b.coeff(1, 0).is_zero()
    }

    /// Derivation `X(f) = A f_x + B f_y`.
    pub fn apply(&self, f: &BiPoly) -> BiPoly {
        self.a.mul(&f.dx()).add(&self.b.mul(&f.dy()))
    }

    pub fn add(&self, o: &VectorField) -> VectorField {
        VectorField::new(self.a.add(&o.a), self.b.add(&o.b))
    }

    pub fn sub(&self, o: &VectorField) -> VectorField {
        VectorField::new(self.a.sub(&o.a), self.b.sub(&o.b))
    }

    pub fn scale(&self, s: &Scalar) -> VectorField {
        VectorField::new(self.a.scale(s), self.b.scale(s))
    }

    /// `-B dx + A dy`.
    pub fn dual_form(&self) -> OneForm {
        OneForm::new(self.b.neg(), self.a.clone())
    }

    /// Push forward by the linear map `u = M (x, y)`.
    pub fn conjugate_linear(&self, m: &Linear) -> Result<VectorField> {
        let inv = inverse(m)?;
        let lin = |r: &[Scalar; 2]| {
            BiPoly::from_terms([((1, 0), r[0].clone()), ((0, 1), r[1].clone())], EXACT)
        };
        let (u, v) = (lin(&inv[0]), lin(&inv[1]));
        let a = self.a.compose(&u, &v)?;
        let b = self.b.compose(&u, &v)?;
        let na = a.scale(&m[0][0]).add(&b.scale(&m[0][1]));
        let nb = a.scale(&m[1][0]).add(&b.scale(&m[1][1]));
        Ok(VectorField::new(na, nb))
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] d/dx + [{}] d/dy", self.a, self.b)
    }
}

pub fn det(m: &Linear) -> Scalar {
    &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0])
}

pub fn inverse(m: &Linear) -> Result<Linear> {
    let d = det(m).inv()?;
    Ok([
        [&m[1][1] * &d, -&(&m[0][1] * &d)],
        [-&(&m[1][0] * &d), &m[0][0] * &d],
    ])
}

/// `P(x, y) dx + Q(x, y) dy`.
#[derive(Clone, PartialEq, Debug)]
pub struct OneForm {
    p: BiPoly,
    q: BiPoly,
}

impl OneForm {
    pub fn new(p: BiPoly, q: BiPoly) -> OneForm {
        OneForm { p, q }
    }

    pub fn p(&self) -> &BiPoly {
        &self.p
    }

    pub fn q(&self) -> &BiPoly {
        &self.q
    }

    /// The field `Q d/dx - P d/dy` whose dual form this is.
    pub fn to_field(&self) -> VectorField {
        VectorField::new(self.q.clone(), self.p.neg())
    }

    pub fn add(&self, o: &OneForm) -> OneForm {
        OneForm::new(self.p.add(&o.p), self.q.add(&o.q))
    }

    pub fn scale(&self, s: &Scalar) -> OneForm {
        OneForm::new(self.p.scale(s), self.q.scale(s))
    }

    /// Coefficient of `dt` in the pullback along the branch.
    pub fn pullback(&self, phi: &PuiseuxParam) -> Result<TSeries> {
        let (x, y) = (phi.x(), phi.y().clone());
        let px = self.p.compose_series(&x, &y)?;
        let qy = self.q.compose_series(&x, &y)?;
        Ok(px.mul(&x.derivative()).add(&qy.mul(&y.derivative())))
    }
}

/// `ord_t` of the pulled back form plus one.
pub fn upsilon(omega: &OneForm, phi: &PuiseuxParam) -> Result<Order> {
    Ok(match omega.pullback(phi)?.ord() {
        Order::Finite(v) => Order::Finite(v + 1),
        Order::AtLeast(k) => Order::AtLeast(k.saturating_add(1)),
    })
}

/// Contact exponent `upsilon(-B dx + A dy) - n` of a singular field.
pub fn contact_exponent(x: &VectorField, phi: &PuiseuxParam) -> Result<Order> {
    if !x.is_singular() {
        return Err(Error::NotSingular);
    }
    Ok(match upsilon(&x.dual_form(), phi)? {
        Order::Finite(v) => Order::Finite(v - phi.n()),
        Order::AtLeast(k) => Order::AtLeast(k.saturating_sub(phi.n())),
    })
}

/// `(X(f), f)` with `f` the implicit equation of the polynomial branch.
pub fn tangency_order(x: &VectorField, phi: &PuiseuxParam) -> Result<Order> {
    Ok(iterated_tangency(x, phi, 1)?[0])
}

/// `(X^k(f), f)` for `k = 1..=kmax`, reading the branch as a polynomial.
pub fn iterated_tangency(x: &VectorField, phi: &PuiseuxParam, kmax: usize) -> Result<Vec<Order>> {
    let exact = phi.extended(EXACT);
    let mut g = implicitize(&exact);
    let mut out = Vec::with_capacity(kmax);
    for _ in 0..kmax {
        g = x.apply(&g);
        out.push(g.compose_series(&exact.x(), exact.y())?.ord());
    }
    Ok(out)
}

/// A jet of a diffeomorphism fixing the origin: `(x, y) -> (X(x, y), Y(x, y))`.
///
/// Components are known up to total degree `order` inclusive.
#[derive(Clone, PartialEq, Debug)]
pub struct JetDiffeo {
    x: BiPoly,
    y: BiPoly,
}

impl JetDiffeo {
    pub fn new(x: BiPoly, y: BiPoly) -> Result<JetDiffeo> {
        if !x.coeff(0, 0).is_zero() || !y.coeff(0, 0).is_zero() {
            return Err(Error::InvalidParam("jet must fix the origin".into()));
        }
        let j = JetDiffeo { x, y };
        det(&j.linear_part()).inv()?;
        Ok(j)
    }

    pub fn identity(order: u32) -> JetDiffeo {
        let t = order.saturating_add(1);
        JetDiffeo { x: BiPoly::x().truncate(t), y: BiPoly::y().truncate(t) }
    }

    /// Exact linear map `(x, y) -> M (x, y)`.
    pub fn linear(m: &Linear) -> Result<JetDiffeo> {
        let lin = |r: &[Scalar; 2]| {
            BiPoly::from_terms([((1, 0), r[0].clone()), ((0, 1), r[1].clone())], EXACT)
        };
        JetDiffeo::new(lin(&m[0]), lin(&m[1]))
    }

    pub fn x(&self) -> &BiPoly {
        &self.x
    }

    pub fn y(&self) -> &BiPoly {
        &self.y
    }

    /// Jet order `N`; `EXACT` for polynomial maps.
    pub fn order(&self) -> u32 {
        let t = self.x.trunc().min(self.y.trunc());
        if t == EXACT {
            EXACT
        } else {
            t - 1
        }
    }

    pub fn truncate(&self, order: u32) -> JetDiffeo {
        let t = order.saturating_add(1);
        JetDiffeo { x: self.x.truncate(t), y: self.y.truncate(t) }
    }

    pub fn linear_part(&self) -> Linear {
        [
            [self.x.coeff(1, 0), self.x.coeff(0, 1)],
            [self.y.coeff(1, 0), self.y.coeff(0, 1)],
        ]
    }

    /// Both eigenvalues of the linear part equal one.
    pub fn is_unipotent(&self) -> bool {
        let m = self.linear_part();
        (&m[0][0] + &m[1][1]) == Scalar::from_int(2) && det(&m).is_one()
    }

    /// `g o self`.
    pub fn pull(&self, g: &BiPoly) -> Result<BiPoly> {
        g.compose(&self.x, &self.y)
    }

    /// `self o other`.
    pub fn compose(&self, other: &JetDiffeo) -> Result<JetDiffeo> {
        Ok(JetDiffeo { x: other.pull(&self.x)?, y: other.pull(&self.y)? })
    }
}

impl fmt::Display for JetDiffeo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Iterate `g -> X(g)` summing `X^k(g) / k!` until the terms vanish.
fn exp_series(x: &VectorField, g: &BiPoly, cap: u64) -> Result<BiPoly> {
    let mut sum = g.clone();
    let mut term = g.clone();
    let mut k = 1i64;
    while !term.is_zero() {
        if k as u64 > cap {
            return Err(Error::NotNilpotent);
        }
        term = x.apply(&term).scale_rational(&ratio(1, k)).truncate(g.trunc());
        sum = sum.add(&term);
        k += 1;
    }
    Ok(sum)
}

/// `N`-jet of the time-one flow of a nilpotent field.
pub fn jet_exp(x: &VectorField, order: u32) -> Result<JetDiffeo> {
    if !x.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    let t = order + 1;
    let xf = x.truncate(t);
    let cap = (order as u64 + 1) * (order as u64 + 2);
    let ex = exp_series(&xf, &BiPoly::x().truncate(t), cap)?;
    let ey = exp_series(&xf, &BiPoly::y().truncate(t), cap)?;
    Ok(JetDiffeo { x: ex, y: ey })
}

/// The nilpotent field whose time-one flow has the given unipotent jet.
///
/// `log(Phi^*) = sum_k (-1)^(k+1) (Phi^* - Id)^k / k` is a derivation of the
/// jet algebra; its values on `x` and `y` are the components of the field.
pub fn jet_log(phi: &JetDiffeo) -> Result<VectorField> {
    if !phi.is_unipotent() {
        return Err(Error::NotUnipotent);
    }
    let order = phi.order();
    if order == EXACT {
        return Err(Error::TruncationExhausted {
            context: "logarithm of a polynomial map needs a jet order",
            needed: 0,
            available: EXACT,
        });
    }
    let cap = (order as u64 + 1) * (order as u64 + 2);
    let t = order + 1;
    let log_of = |g: BiPoly| -> Result<BiPoly> {
        let mut sum = BiPoly::zero(t);
        let mut term = g;
        let mut k = 1i64;
        loop {
            term = phi.pull(&term)?.sub(&term).truncate(t);
            if term.is_zero() {
                break;
            }
            if k as u64 > cap {
                return Err(Error::NotUnipotent);
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            sum = sum.add(&term.scale_rational(&ratio(sign, k)));
            k += 1;
        }
        Ok(sum)
    };
    Ok(VectorField::new(log_of(BiPoly::x().truncate(t))?, log_of(BiPoly::y().truncate(t))?))
}

/// Image of a branch under a jet, renormalized to `(t^n, ...)`.
pub fn apply_diffeo(phi_map: &JetDiffeo, branch: &PuiseuxParam, field: &CycloField) -> Result<PuiseuxParam> {
    if phi_map.linear_part()[0][0].is_zero() {
        return Err(Error::TangentConeViolation);
    }
    let (x, y) = image(phi_map, branch)?;
    renormalize(&x, &y, field)
}

/// `(X(t^n, y(t)), Y(t^n, y(t)))` before renormalization.
pub fn image(phi_map: &JetDiffeo, branch: &PuiseuxParam) -> Result<(TSeries, TSeries)> {
    let (bx, by) = (branch.x(), branch.y().clone());
    let x = phi_map.x.compose_series(&bx, &by)?;
    let y = phi_map.y.compose_series(&bx, &by)?;
    let k = x.trunc().min(y.trunc());
    Ok((x.truncate(k), y.truncate(k)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cusp() -> PuiseuxParam {
        PuiseuxParam::from_ints(2, &[(3, 1)], 30).unwrap()
    }

    fn g0() -> PuiseuxParam {
        PuiseuxParam::from_ints(6, &[(7, 1), (10, 1), (11, 1)], 40).unwrap()
    }

    fn form(p: &[(u32, u32, i64)], q: &[(u32, u32, i64)]) -> OneForm {
        let f = VectorField::from_ints(p, q);
        OneForm::new(f.a().clone(), f.b().clone())
    }

    #[test]
    fn upsilon_values() {
        assert_eq!(upsilon(&form(&[(2, 0, 1)], &[]), &g0()).unwrap(), Order::Finite(18));
        assert_eq!(upsilon(&form(&[], &[(0, 2, 1)]), &g0()).unwrap(), Order::Finite(21));
        assert_eq!(upsilon(&form(&[(1, 0, -1)], &[]), &cusp()).unwrap(), Order::Finite(4));
    }

    #[test]
    fn contact_values() {
        let xdy = VectorField::from_ints(&[], &[(1, 0, 1)]);
        assert_eq!(contact_exponent(&xdy, &cusp()).unwrap(), Order::Finite(2));
        let euler = VectorField::from_ints(&[(1, 0, 6)], &[(0, 1, 7)]);
        assert_eq!(contact_exponent(&euler, &g0()).unwrap(), Order::Finite(10));
        let radial = VectorField::from_ints(&[(1, 0, 1)], &[(0, 1, 1)]);
        assert_eq!(contact_exponent(&radial, &cusp()).unwrap(), Order::Finite(3));
    }

    #[test]
    fn tangency_on_cusp() {
        let xdy = VectorField::from_ints(&[], &[(1, 0, 1)]);
        let it = iterated_tangency(&xdy, &cusp(), 2).unwrap();
        assert_eq!(it, alloc::vec![Order::Finite(5), Order::Finite(4)]);
        let smooth = PuiseuxParam::from_ints(1, &[], 20).unwrap();
        assert_eq!(tangency_order(&xdy, &smooth).unwrap(), Order::Finite(1));
    }

    #[test]
    fn predicates() {
        assert!(VectorField::from_ints(&[], &[(1, 0, 1)]).is_nilpotent());
        assert!(!VectorField::from_ints(&[(1, 0, 1)], &[]).is_nilpotent());
        assert!(!VectorField::from_ints(&[(0, 1, 1)], &[(1, 0, 1)]).is_prepared());
    }

    #[test]
    fn exp_examples() {
        let f = VectorField::from_ints(&[], &[(2, 0, 1)]);
        let e = jet_exp(&f, 4).unwrap();
        assert_eq!(e.y(), &BiPoly::from_terms([((0, 1), Scalar::one()), ((2, 0), Scalar::one())], 5));
        assert_eq!(jet_log(&e).unwrap(), f.truncate(5));
        let g = VectorField::from_ints(&[(0, 1, 1)], &[]);
        let e = jet_exp(&g, 3).unwrap();
        assert_eq!(e.x(), &BiPoly::from_terms([((1, 0), Scalar::one()), ((0, 1), Scalar::one())], 4));
        assert!(jet_log(&JetDiffeo::identity(5)).unwrap().is_zero());
        assert!(jet_exp(&VectorField::from_ints(&[(1, 0, 1)], &[]), 3).is_err());
    }

    #[test]
    fn diffeo_on_cusp() {
        let f = VectorField::from_ints(&[], &[(2, 0, 1)]);
        let e = jet_exp(&f, 6).unwrap();
        let out = apply_diffeo(&e, &cusp(), &CycloField::default()).unwrap();
        assert_eq!(out, PuiseuxParam::from_ints(2, &[(3, 1), (4, 1)], 14).unwrap());
    }
}
