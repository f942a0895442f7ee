//! Point blow-ups of vector fields along a branch.
//!
//! The pull-back keeps the factor vanishing on the exceptional divisor, so
//! every divisor created at a singular point stays invariant. The shared path
//! follows the strict transform of the branch until the pulled back field
//! becomes regular.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::puiseux::{mult_sequence_euclid, semigroup, strict_transform, PuiseuxParam};
use crate::scalars::Scalar;
use crate::series::{BiPoly, EXACT};
use crate::vfield::VectorField;

/// Standard chart of the blow-up of the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    /// `x = x1, y = x1 * y1`; the divisor is `x1 = 0`.
    X,
    /// `x = x1 * y1, y = y1`; the divisor is `y1 = 0`.
    Y,
}

/// Which coordinate axis a divisor is, in the current chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    /// The divisor `x = 0`.
    XZero,
    /// The divisor `y = 0`.
    YZero,
}

fn binomial(q: u32, r: u32) -> i64 {
    let mut acc: i64 = 1;
    for k in 0..r as i64 {
        acc = acc * (q as i64 - k) / (k + 1);
    }
    acc
}

/// `p(x1, x1 y1)` as a map keyed by `(deg x1, deg y1)`, keeping only terms
/// whose `x1`-degree is below the truncation of `p`.
fn substitute(p: &BiPoly) -> BTreeMap<(u32, u32), Scalar> {
    let bound = p.trunc();
    let mut out = BTreeMap::new();
    for ((i, j), c) in p.terms() {
        if i + j < bound {
            out.insert((i + j, j), c.clone());
        }
    }
    out
}

fn accumulate(map: &mut BTreeMap<(u32, u32), Scalar>, k: (u32, u32), c: Scalar) {
    let v = match map.remove(&k) {
        Some(old) => &old + &c,
        None => c,
    };
    if !v.is_zero() {
        map.insert(k, v);
    }
}

/// Replace `y1` by `y1 + c` and collect into a polynomial truncated at `trunc`.
fn translate(map: &BTreeMap<(u32, u32), Scalar>, c: &Scalar, trunc: u32) -> BiPoly {
    let mut out = BTreeMap::new();
    for ((p, q), coef) in map {
        if c.is_zero() {
            accumulate(&mut out, (*p, *q), coef.clone());
            continue;
        }
        for r in 0..=*q {
            let w = &(coef * &c.pow(q - r)) * &Scalar::from_int(binomial(*q, r));
            accumulate(&mut out, (*p, r), w);
        }
    }
    BiPoly::from_terms(out, trunc)
}

/// Pull-back of `X` to a chart of the blow-up of the origin, followed by the
/// translation moving `y1 = translate` (resp. `x1 = translate`) to the origin.
pub fn pullback_field(x: &VectorField, chart: Chart, translate_to: &Scalar) -> Result<VectorField> {
    match chart {
        Chart::X => pullback_x_chart(x, translate_to),
        Chart::Y => {
            let swapped = VectorField::new(x.b().swap(), x.a().swap());
            let p = pullback_x_chart(&swapped, translate_to)?;
            Ok(VectorField::new(p.b().swap(), p.a().swap()))
        }
    }
}

fn pullback_x_chart(x: &VectorField, c: &Scalar) -> Result<VectorField> {
    let d = x.a().trunc().min(x.b().trunc());
    let (a, b) = (x.a().truncate(d), x.b().truncate(d));
    let a_sub = substitute(&a);
    let mut num = substitute(&b);
    for ((p, q), coef) in &a_sub {
        accumulate(&mut num, (*p, q + 1), -coef);
    }
    let mut divided = BTreeMap::new();
    for ((p, q), coef) in num {
        if p == 0 {
            return Err(Error::NotSingular);
        }
        divided.insert((p - 1, q), coef);
    }
    let lower = if d == EXACT { EXACT } else { d - 1 };
    Ok(VectorField::new(translate(&a_sub, c, d), translate(&divided, c, lower)))
}

/// Field on the exceptional divisor of the blow-up of a singular point, in
/// the coordinate `y1` of the x-chart: `p(y1) d/dy1` with
/// `p = b10 + (b01 - a10) y1 - a01 y1^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct RestrictedField {
    pub coeffs: [Scalar; 3],
}

impl RestrictedField {
    pub fn of(x: &VectorField) -> RestrictedField {
        let m = x.linear_part();
        RestrictedField { coeffs: [m[1][0].clone(), &m[1][1] - &m[0][0], -&m[0][1]] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn eval(&self, y: &Scalar) -> Scalar {
        &(&self.coeffs[0] + &(&self.coeffs[1] * y)) + &(&(&self.coeffs[2] * y) * y)
    }

    /// Number of zeros on the projective line counted with multiplicity
    /// (the point at infinity has multiplicity `2 - deg p`).
    pub fn zero_count(&self) -> u32 {
        if self.is_zero() {
            u32::MAX
        } else {
            2
        }
    }

    /// All zeros coincide.
    pub fn has_single_zero(&self) -> bool {
        let [c0, c1, c2] = &self.coeffs;
        if !c2.is_zero() {
            (&(c1 * c1) - &(&(c0 * c2) * &Scalar::from_int(4))).is_zero()
        } else {
            c1.is_zero() && !c0.is_zero()
        }
    }

    /// Vanishes at `y1 = 0`.
    pub fn zero_at_origin(&self) -> bool {
        self.coeffs[0].is_zero()
    }

    /// Vanishes at `y1 = infinity`.
    pub fn zero_at_infinity(&self) -> bool {
        self.coeffs[2].is_zero()
    }
}

/// State at the current infinitely near point.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalModel {
    pub field: VectorField,
    pub branch: PuiseuxParam,
    /// Divisors through the point: `(index of the divisor, its axis)`.
    pub divisors: Vec<(u32, Axis)>,
    pub history: Vec<u32>,
}

impl LocalModel {
    pub fn new(field: VectorField, branch: PuiseuxParam) -> LocalModel {
        let n = branch.n();
        LocalModel { field, branch, divisors: Vec::new(), history: alloc::vec![n] }
    }

    pub fn is_corner(&self) -> bool {
        self.divisors.len() >= 2
    }

    /// Blow up the current point and move to the point of the strict transform.
    pub fn blow_up(&self) -> Result<LocalModel> {
        let st = strict_transform(&self.branch)?;
        let pulled = pullback_field(&self.field, Chart::X, &st.translate)?;
        let field = if st.swapped {
            // new coordinates (u, v) = (y2 / s, x1)
            let s = &st.scale;
            let u = BiPoly::y();
            let v = BiPoly::monomial(s.clone(), 1, 0, EXACT);
            let a = pulled.b().compose(&u, &v)?.scale(&s.inv()?);
            let b = pulled.a().compose(&u, &v)?;
            VectorField::new(a, b)
        } else {
            pulled
        };
        let index = self.history.len() as u32;
        let mut divisors = Vec::new();
        for (id, axis) in &self.divisors {
            if *axis == Axis::YZero && st.translate.is_zero() {
                divisors.push((*id, if st.swapped { Axis::XZero } else { Axis::YZero }));
            }
        }
        divisors.push((index, if st.swapped { Axis::YZero } else { Axis::XZero }));
        let mut history = self.history.clone();
        history.push(st.param.n());
        Ok(LocalModel { field, branch: st.param, divisors, history })
    }
}

/// Infinitely near points shared by a field and a branch.
#[derive(Clone, Debug, PartialEq)]
pub struct SharedPath {
    /// Multiplicities `n_0, ..., n_N` of the branch along the path.
    pub mults: Vec<u32>,
    /// Number of blow-ups: `P_N` is the first regular point of the field.
    pub n: u32,
    /// `E_N` is a free divisor.
    pub last_point_free: bool,
    /// `P_N` lies on two divisors (never true, by construction and checked).
    pub last_point_corner: bool,
    /// Always false: the path stops at the first regular point.
    pub last_point_singular_for_x: bool,
    /// The strict transform of the branch is singular at `P_N`.
    pub last_point_singular_for_curve: bool,
    /// The field has a single singular point on `E_N` (counted twice).
    pub single_singularity_on_last_divisor: bool,
    /// That singular point is the corner `E_N` meets `E_{N-1}`.
    pub singularity_at_corner: bool,
}

/// Default bound on the path length.
///
/// A path of `N` blow-ups has contact at least `N`, and contacts beyond
/// `trunc - n` cannot be seen in the data, so the truncation bounds every
/// path worth following. Exact branches fall back to the blow-ups needed to
/// make the branch smooth plus the conductor.
pub fn default_max_depth(phi: &PuiseuxParam) -> Result<u32> {
    let sg = semigroup(phi)?;
    let seq = mult_sequence_euclid(phi.n(), &sg.char_exponents, 4 * phi.n() as usize + 64);
    let smooth_at = seq.iter().position(|m| *m == 1).unwrap_or(seq.len()) as u32;
    let structural = smooth_at + sg.conductor + 2;
    Ok(if phi.trunc() == EXACT { structural } else { structural.max(phi.trunc() - phi.n() + 1) })
}

/// Follow the branch through blow-ups until the pulled back field is regular.
///
/// A blow-up lowers the degree of a term of the field by at most one, so a
/// path of length `d` only sees the field up to degree `d + 2`. Every step
/// reads only known coefficients of the branch and reports exhaustion
/// otherwise. Both budgets start small and grow, which keeps short paths
/// cheap.
pub fn shared_path(x: &VectorField, phi: &PuiseuxParam, max_depth: u32) -> Result<SharedPath> {
    let full = phi.trunc();
    let mut trunc = full.min(4 * phi.n() + 16);
    loop {
        let branch = phi.with_trunc(trunc);
        let mut depth = max_depth.min(8);
        let r = loop {
            match shared_path_within(x, &branch, depth) {
                Err(Error::MaxDepthExceeded { .. }) if depth < max_depth => depth = (2 * depth).min(max_depth),
                r => break r,
            }
        };
        match r {
            Err(Error::TruncationExhausted { .. }) | Err(Error::MaxDepthExceeded { .. }) if trunc < full => {
                trunc = trunc.saturating_mul(2).min(full);
            }
            r => return r,
        }
    }
}

fn shared_path_within(x: &VectorField, phi: &PuiseuxParam, max_depth: u32) -> Result<SharedPath> {
    if !x.is_singular() {
        return Ok(SharedPath {
            mults: alloc::vec![phi.n()],
            n: 0,
            last_point_free: true,
            last_point_corner: false,
            last_point_singular_for_x: false,
            last_point_singular_for_curve: phi.n() > 1,
            single_singularity_on_last_divisor: false,
            singularity_at_corner: false,
        });
    }
    let nilpotent = x.is_nilpotent();
    let mut model = LocalModel::new(x.truncate(max_depth.saturating_add(3)), phi.clone());
    let mut previous = model.clone();
    let mut depth = 0;
    while model.field.is_singular() {
        if depth == max_depth {
            return Err(Error::MaxDepthExceeded { depth });
        }
        previous = model.clone();
        model = model.blow_up()?;
        depth += 1;
    }
    let last_point_free = !previous.is_corner();
    let restricted = RestrictedField::of(&previous.field);
    let st = strict_transform(&previous.branch)?;
    if restricted.is_zero() || restricted.eval(&st.translate).is_zero() {
        return Err(Error::CrossCheck("last point of the shared path is singular on its divisor".into()));
    }
    let single = restricted.has_single_zero();
    let at_corner = match previous.divisors.iter().find(|(id, _)| *id + 1 == depth) {
        Some((_, Axis::YZero)) => restricted.zero_at_origin(),
        Some((_, Axis::XZero)) => restricted.zero_at_infinity(),
        None => false,
    };
    if model.is_corner() {
        return Err(Error::CrossCheck("shared path ends at a corner of the divisor".into()));
    }
    if nilpotent && (!last_point_free || !single || (depth > 1 && !at_corner)) {
        return Err(Error::CrossCheck(
            "nilpotent field does not end its shared path on a free divisor with one singularity".into(),
        ));
    }
    Ok(SharedPath {
        mults: model.history.clone(),
        n: depth,
        last_point_free,
        last_point_corner: false,
        last_point_singular_for_x: false,
        last_point_singular_for_curve: model.branch.n() > 1,
        single_singularity_on_last_divisor: single,
        singularity_at_corner: at_corner,
    })
}

/// `(Gamma, Gamma_eps) = sum_{i < N} n_i^2`.
pub fn noether_intersection(path: &SharedPath) -> u32 {
    path.mults.iter().take(path.n as usize).map(|m| m * m).sum()
}

/// Contact exponent read from the path: `n_{N-1} + sum_{j=1}^{N-1} n_j`.
pub fn contact_from_path(path: &SharedPath) -> Option<u32> {
    let n = path.n as usize;
    if n == 0 {
        return None;
    }
    Some(path.mults[n - 1] + path.mults[1..n].iter().sum::<u32>())
}

/// `upsilon` of the dual form read from the path: `n_{N-1} + sum_{j<N} n_j`.
pub fn upsilon_from_path(path: &SharedPath) -> Option<u32> {
    let n = path.n as usize;
    if n == 0 {
        return None;
    }
    Some(path.mults[n - 1] + path.mults[..n].iter().sum::<u32>())
}
