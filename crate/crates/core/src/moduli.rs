//! Flow deformations of a branch, the set of contact exponents, Zariski's
//! invariant and the reduction to analytic normal form by nilpotent flows.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::puiseux::{prepare, roots_of_unity, semigroup, PuiseuxParam, SemigroupData};
use crate::scalars::{ratio, CycloField, Scalar};
use crate::series::{BiPoly, Coeff, EpsPoly, Order, Series, TSeries, EXACT};
use crate::blowup::{contact_from_path, noether_intersection, shared_path, SharedPath};
use crate::vfield::{apply_diffeo, contact_exponent, jet_exp, tangency_order, upsilon, OneForm, VectorField};

/// Default degree in `eps` of a deformation.
pub const DEFAULT_EPS_DEGREE: u32 = 4;
const MAX_EPS_DEGREE: u32 = 16;

/// A branch moved by the flow of a field for a formal time `eps`:
/// `(t^n, sum_i a_i(eps) t^i)` with `a_i` known modulo `eps^(d_eps + 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeformedParam {
    pub n: u32,
    pub coeffs: BTreeMap<u32, EpsPoly>,
    pub trunc: u32,
    pub d_eps: u32,
    /// The field satisfied the preparedness condition relative to the branch.
    pub prepared: bool,
}

impl DeformedParam {
    pub fn coeff(&self, i: u32) -> EpsPoly {
        self.coeffs.get(&i).cloned().unwrap_or_else(EpsPoly::zero)
    }

    /// Least exponent whose coefficient depends on `eps`.
    pub fn first_moving(&self) -> Option<u32> {
        self.coeffs.iter().find(|(_, c)| !c.is_constant()).map(|(i, _)| *i)
    }

    /// Specialize at `eps = 0`.
    pub fn at_zero(&self) -> Result<PuiseuxParam> {
        PuiseuxParam::from_terms(self.n, self.coeffs.iter().map(|(i, c)| (*i, c.coeff(0))), self.trunc)
    }
}

fn lift(s: &TSeries, pieces: &[TSeries], d_eps: u32) -> Series<EpsPoly> {
    let trunc = pieces.iter().map(TSeries::trunc).min().unwrap_or(s.trunc());
    let mut exps = BTreeSet::new();
    for p in pieces {
        exps.extend(p.support());
    }
    Series::from_terms(
        exps.into_iter().map(|e| (e, EpsPoly::new(pieces.iter().map(|p| p.coeff(e)).collect(), d_eps))),
        trunc,
    )
}

/// Deformation known up to `t^k`.
fn deform_to(phi: &PuiseuxParam, x: &VectorField, d_eps: u32, k: u32, field: &CycloField) -> Result<DeformedParam> {
    if !x.is_singular() {
        return Err(Error::NotSingular);
    }
    let n = phi.n();
    let k = k.min(phi.trunc());
    let dt = k.div_ceil(n) + 1;
    let xf = x.truncate(dt);
    let (bx, by) = (phi.x(), phi.y().truncate(k));
    let mut gx = BiPoly::x().truncate(dt);
    let mut gy = BiPoly::y().truncate(dt);
    let mut px = vec![bx.truncate(k)];
    let mut py = vec![by.clone()];
    for j in 1..=d_eps {
        gx = xf.apply(&gx).scale_rational(&ratio(1, j as i64));
        gy = xf.apply(&gy).scale_rational(&ratio(1, j as i64));
        px.push(gx.compose_series(&bx, &by)?.truncate(k));
        py.push(gy.compose_series(&bx, &by)?.truncate(k));
    }
    let sx = lift(&bx, &px, d_eps);
    let sy = lift(&by, &py, d_eps);
    let root = sx.nth_root(n, field)?;
    let alpha = root.invert_param()?;
    let y = sy.compose(&alpha)?;
    Ok(DeformedParam {
        n,
        coeffs: y.terms().map(|(e, c)| (e, c.clone())).collect(),
        trunc: y.trunc(),
        d_eps,
        prepared: x.is_prepared(),
    })
}

/// The branch moved by `exp(eps X)`, renormalized over `Q[eps] / eps^(d_eps+1)`.
pub fn deform(phi: &PuiseuxParam, x: &VectorField, d_eps: u32, field: &CycloField) -> Result<DeformedParam> {
    deform_to(phi, x, d_eps, phi.trunc(), field)
}

/// Least exponent moved by the flow of `X`, found from deformations.
///
/// The `t`-truncation grows until a moving coefficient shows up, then the
/// `eps`-degree is doubled until the answer no longer changes.
pub fn contact_exponent_deformation(phi: &PuiseuxParam, x: &VectorField, field: &CycloField) -> Result<Order> {
    let n = phi.n();
    // for exact data the pullback of the dual form is a polynomial whose
    // degree bounds any finite contact
    let cap = if phi.trunc() == EXACT {
        let dphi = phi.y().support().max().unwrap_or(0).max(n);
        let dx = x.a().max_degree().max(x.b().max_degree()).unwrap_or(0);
        (dx + 1) * dphi + 2
    } else {
        phi.trunc()
    };
    let mut k = (3 * n + 4).min(cap);
    let mut d = DEFAULT_EPS_DEGREE;
    loop {
        let def = deform_to(phi, x, d, k, field)?;
        match def.first_moving() {
            Some(j) => {
                let mut d2 = d;
                let mut best = j;
                while d2 < MAX_EPS_DEGREE {
                    d2 *= 2;
                    let again = deform_to(phi, x, d2, (best + 1).min(cap), field)?.first_moving();
                    match again {
                        Some(j2) if j2 == best => break,
                        Some(j2) => best = j2,
                        None => return Err(Error::CrossCheck("deformation lost a moving coefficient".into())),
                    }
                }
                return Ok(Order::Finite(best));
            }
            None if k < def.trunc.min(cap) || k < cap => {
                k = (2 * k).min(cap);
            }
            None if d < MAX_EPS_DEGREE => d *= 2,
            None => return Ok(Order::AtLeast(def.trunc.saturating_sub(n))),
        }
    }
}

/// `upsilon(m y dx - n x dy) - n` for a prepared branch with first exponent `m`,
/// after reducing the form modulo exact differentials `d(x^a y^b)`.
///
/// Without the reduction the plain value can land in the semigroup (a term
/// such as `t^(2n)` or `t^(m+n)` still present), and then it is not an
/// invariant. The reduced value never lies in the semigroup. `None` when the
/// reduced form vanishes up to the truncation of the branch.
pub fn lambda_invariant(phi: &PuiseuxParam) -> Result<Option<u32>> {
    let m = match phi.y().ord() {
        Order::Finite(m) if phi.is_prepared() => m,
        _ => return Err(Error::InvalidParam("branch is not prepared".into())),
    };
    let n = phi.n();
    let limit = phi.trunc();
    let form = OneForm::new(
        BiPoly::monomial(Scalar::from_int(m as i64), 0, 1, EXACT),
        BiPoly::monomial(Scalar::from_int(-(n as i64)), 1, 0, EXACT),
    );
    let mut exact = Echelon::new(limit);
    for b in 0..=limit / m + 1 {
        for a in 0..=limit / n + 1 {
            if a + b == 0 || n * a + m * b > limit + n {
                continue;
            }
            let g = BiPoly::monomial(Scalar::one(), a, b, EXACT);
            let dg = OneForm::new(g.dx(), g.dy());
            exact.insert(dg.pullback(phi)?, dg);
        }
    }
    let mut s = form.pullback(phi)?.truncate(limit);
    while let Order::Finite(e) = s.ord() {
        match exact.rows.get(&e) {
            Some((row, _)) => {
                let f = &s.coeff(e) / &row.coeff(e);
                s = s.sub(&row.scale(&f));
            }
            None => return Ok(Some(e + 1 - n)),
        }
    }
    Ok(None)
}

/// Echelon basis of the pullbacks of a family of forms, keyed by leading order.
#[derive(Clone, Debug, Default)]
struct Echelon {
    rows: BTreeMap<u32, (TSeries, OneForm)>,
    bound: u32,
}

impl Echelon {
    fn new(bound: u32) -> Echelon {
        Echelon { rows: BTreeMap::new(), bound }
    }

    fn insert(&mut self, mut s: TSeries, mut w: OneForm) {
        s = s.truncate(self.bound);
        loop {
            let e = match s.ord() {
                Order::Finite(e) => e,
                Order::AtLeast(_) => return,
            };
            match self.rows.get(&e) {
                Some((row, form)) => {
                    let f = &s.coeff(e) / &row.coeff(e);
                    s = s.sub(&row.scale(&f));
                    w = w.add(&form.scale(&-&f));
                }
                None => {
                    self.rows.insert(e, (s, w));
                    return;
                }
            }
        }
    }
}

/// Contact exponents of singular fields with a branch, up to a bound.
#[derive(Clone, Debug)]
pub struct ContactSet {
    pub n: u32,
    pub bound: u32,
    /// `Lambda`: contacts of all singular fields, within `[1, bound]`.
    pub values: BTreeSet<u32>,
    /// Contacts `> m` realized by nilpotent fields, within `(m, bound]`.
    pub nilpotent: BTreeSet<u32>,
    nil_rows: BTreeMap<u32, OneForm>,
}

impl ContactSet {
    pub fn contains(&self, j: u32) -> bool {
        self.values.contains(&j)
    }

    /// A nilpotent field with contact exactly `j`, from the echelon basis.
    pub fn nilpotent_witness(&self, j: u32) -> Option<VectorField> {
        self.nil_rows.get(&(j + self.n - 1)).map(OneForm::to_field)
    }
}

fn monomial_form(a: u32, b: u32, dy: bool) -> OneForm {
    let mono = BiPoly::monomial(Scalar::one(), a, b, EXACT);
    if dy {
        OneForm::new(BiPoly::zero(EXACT), mono)
    } else {
        OneForm::new(mono, BiPoly::zero(EXACT))
    }
}

/// Value set of Kahler forms `x^a y^b dx`, `x^a y^b dy` (`a + b >= 1`),
/// shifted by `-n`, within `[1, bound]`.
///
/// The nilpotent part uses the span of `y dy` and the forms of degree at
/// least two: above `m` any form whose dual field is nilpotent lies there.
pub fn contact_set(phi: &PuiseuxParam, bound: u32) -> Result<ContactSet> {
    let n = phi.n();
    let limit = bound + n;
    if limit > phi.trunc() {
        return Err(Error::TruncationExhausted {
            context: "contact set",
            needed: limit,
            available: phi.trunc(),
        });
    }
    let vy = phi.y().ord().finite();
    let m = phi.first_char_exponent().unwrap_or(u32::MAX);
    let branch = phi.with_trunc(limit);
    let mut all = Echelon::new(limit);
    let mut nil = Echelon::new(limit);
    let max_b = match vy {
        Some(v) => limit / v + 1,
        None => 0,
    };
    for b in 0..=max_b {
        for a in 0..=limit / n + 1 {
            if a + b == 0 {
                continue;
            }
            let base = n * a + vy.unwrap_or(0) * b;
            if base > limit + n {
                break;
            }
            for dy in [false, true] {
                if dy && vy.is_none() {
                    continue;
                }
                let w = monomial_form(a, b, dy);
                let s = w.pullback(&branch)?;
                if a + b >= 2 || (dy && (a, b) == (0, 1)) {
                    nil.insert(s.clone(), w.clone());
                }
                all.insert(s, w);
            }
        }
    }
    let shift = |e: u32| (e + 1).checked_sub(n).filter(|v| *v >= 1 && *v <= bound);
    let values = all.rows.keys().filter_map(|e| shift(*e)).collect();
    let mut nilpotent = BTreeSet::new();
    let mut nil_rows = BTreeMap::new();
    for (e, (_, w)) in nil.rows {
        if let Some(j) = shift(e) {
            if j > m.min(u32::MAX - 1) {
                nilpotent.insert(j);
                nil_rows.insert(e, w);
            }
        }
    }
    Ok(ContactSet { n, bound, values, nilpotent, nil_rows })
}

/// Flow `exp(s X)` applied to a branch, with a jet order large enough for
/// the truncation of the branch.
pub fn apply_flow(phi: &PuiseuxParam, x: &VectorField, s: &Scalar, field: &CycloField) -> Result<PuiseuxParam> {
    if s.is_zero() {
        return Ok(phi.clone());
    }
    let k = phi.trunc();
    let order = k.div_ceil(phi.n());
    let jet = jet_exp(&x.scale(s).truncate(order + 1), order)?;
    let out = apply_diffeo(&jet, phi, field)?;
    Ok(out.with_trunc(k))
}

/// Monomial nilpotent field of contact `j` from `j + n = p n + q m`.
pub fn monomial_witness(n: u32, m: u32, j: u32) -> Option<VectorField> {
    let target = j + n;
    let mut q = 0;
    while q * m <= target {
        let rest = target - q * m;
        if rest % n == 0 {
            let p = rest / n;
            if p >= 1 && (p, q) != (1, 1) && p - 1 + q >= 1 {
                let b = BiPoly::monomial(Scalar::one(), p - 1, q, EXACT);
                return Some(VectorField::new(BiPoly::zero(EXACT), b));
            }
            if q >= 1 && (p, q) != (1, 1) && p + q >= 2 {
                let a = BiPoly::monomial(Scalar::one(), p, q - 1, EXACT);
                return Some(VectorField::new(a, BiPoly::zero(EXACT)));
            }
        }
        q += 1;
    }
    None
}

/// One step of the reduction: the flow `exp(s0 X)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Elimination {
    pub j: u32,
    pub witness: VectorField,
    pub s0: Scalar,
    pub result: PuiseuxParam,
}

/// Remove the coefficient of `t^j` with the flow of a nilpotent field of
/// contact `j`, leaving the coefficients below `j` untouched.
pub fn eliminate_term(phi: &PuiseuxParam, j: u32, contacts: &ContactSet, field: &CycloField) -> Result<Elimination> {
    let n = phi.n();
    let m = phi.first_char_exponent().ok_or_else(|| Error::InvalidParam("branch is smooth".into()))?;
    let candidates = [monomial_witness(n, m, j), contacts.nilpotent_witness(j)];
    let mut chosen = None;
    for w in candidates.into_iter().flatten() {
        if w.is_nilpotent() && contact_exponent(&w, phi)? == Order::Finite(j) {
            chosen = Some(w);
            break;
        }
    }
    if chosen.is_none() {
        // Earlier eliminations change the echelon rows though not the values,
        // so the stored combination may have drifted: rebuild it on `phi`.
        if let Some(w) = contact_set(phi, contacts.bound)?.nilpotent_witness(j) {
            if w.is_nilpotent() && contact_exponent(&w, phi)? == Order::Finite(j) {
                chosen = Some(w);
            }
        }
    }
    let witness = chosen.ok_or(Error::NoWitness { j })?;
    let def = deform_to(phi, &witness, 2, j + 1, field)?;
    for i in 0..j {
        if !def.coeff(i).is_constant() {
            return Err(Error::CrossCheck(format!("flow moved the coefficient of t^{} below {}", i, j)));
        }
    }
    let aj = def.coeff(j);
    if aj.degree().unwrap_or(0) != 1 {
        return Err(Error::NotAffine { j });
    }
    let slope = aj.coeff(1);
    let s0 = -&(&phi.coeff(j) / &slope);
    let result = apply_flow(phi, &witness, &s0, field)?;
    if !result.coeff(j).is_zero() {
        return Err(Error::CrossCheck(format!("coefficient of t^{} survived its elimination", j)));
    }
    Ok(Elimination { j, witness, s0, result })
}

/// How the final scaling `(x, y) -> (u^n x, w y)`, `t -> t / u` is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ScaleMode {
    /// Exact roots; fail when the root is not in the field.
    #[default]
    Exact,
    /// Leave the coefficients unscaled and report the constraints.
    Skip,
    /// Scale exactly when possible, otherwise report the constraints so the
    /// caller can display numeric roots.
    Numeric,
}

/// A transcript entry; replaying the entries reproduces the normal form.
#[derive(Clone, Debug, PartialEq)]
pub enum Step {
    /// `exp(s0 X)` removing the coefficient of `t^j`.
    Flow { j: u32, witness: VectorField, s0: Scalar },
    /// Drop every coefficient from `t^at` on (`at` exceeds `m`).
    Truncate { at: u32 },
    /// `a_i -> w u^(-i) a_i`.
    Scale { u: Scalar, w: Scalar },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Scaling {
    Applied { u: Scalar, w: Scalar },
    /// Constraints `u^(lambda - m) = a_lambda / a_m`, `w = u^m / a_m` left unsolved.
    Constraints { ratio: Scalar, root_index: u32, a_m: Scalar, text: String },
}

#[derive(Clone, Debug)]
pub struct NormalFormReport {
    pub input: PuiseuxParam,
    pub output: PuiseuxParam,
    pub n: u32,
    pub m: Option<u32>,
    pub lambda: Option<u32>,
    pub conductor: u32,
    pub semigroup: SemigroupData,
    /// `Lambda` within `[1, c]`.
    pub contact_set: BTreeSet<u32>,
    /// Exponents in `(m, c)` reachable by nilpotent fields.
    pub eliminable: BTreeSet<u32>,
    pub steps: Vec<Step>,
    pub scaling: Scaling,
}

fn scale_branch(phi: &PuiseuxParam, u: &Scalar, w: &Scalar) -> Result<PuiseuxParam> {
    let inv = u.inv()?;
    PuiseuxParam::from_terms(phi.n(), phi.y().terms().map(|(i, c)| (i, &(c * w) * &inv.pow(i))), phi.trunc())
}

fn truncate_at(phi: &PuiseuxParam, at: u32) -> Result<PuiseuxParam> {
    PuiseuxParam::from_terms(phi.n(), phi.y().terms().filter(|(i, _)| *i < at).map(|(i, c)| (i, c.clone())), phi.trunc())
}

/// Apply one transcript step.
pub fn apply_step(phi: &PuiseuxParam, step: &Step, field: &CycloField) -> Result<PuiseuxParam> {
    match step {
        Step::Flow { witness, s0, .. } => apply_flow(phi, witness, s0, field),
        Step::Truncate { at } => truncate_at(phi, *at),
        Step::Scale { u, w } => scale_branch(phi, u, w),
    }
}

/// Replay a transcript from the input branch.
pub fn replay(input: &PuiseuxParam, steps: &[Step], field: &CycloField) -> Result<PuiseuxParam> {
    steps.iter().try_fold(input.clone(), |phi, s| apply_step(&phi, s, field))
}

/// Zariski's invariant: the value of `lambda_invariant` when it lies below
/// the conductor, `None` otherwise (the branch is then equivalent to
/// `(t^n, t^m)`).
pub fn zariski_lambda(phi: &PuiseuxParam, conductor: u32) -> Result<Option<u32>> {
    Ok(lambda_invariant(phi)?.filter(|l| *l < conductor))
}

/// Reduce a branch to its analytic normal form.
pub fn normal_form(phi: &PuiseuxParam, mode: ScaleMode, field: &CycloField) -> Result<NormalFormReport> {
    phi.check_irreducible()?;
    let n = phi.n();
    let prep = prepare(phi)?;
    let mut steps: Vec<Step> = prep
        .log
        .iter()
        .map(|h| Step::Flow {
            j: h.k * n,
            witness: VectorField::new(BiPoly::zero(EXACT), BiPoly::monomial(Scalar::one(), h.k, 0, EXACT)),
            s0: -&h.coeff,
        })
        .collect();
    let mut cur = prep.param.clone();
    let sg = semigroup(&cur)?;
    let c = sg.conductor;
    if prep.smooth {
        steps.push(Step::Truncate { at: 0 });
        let output = truncate_at(&cur, 0)?;
        return Ok(NormalFormReport {
            input: phi.clone(),
            output,
            n,
            m: None,
            lambda: None,
            conductor: 0,
            semigroup: sg,
            contact_set: BTreeSet::new(),
            eliminable: BTreeSet::new(),
            steps,
            scaling: Scaling::Applied { u: Scalar::one(), w: Scalar::one() },
        });
    }
    if cur.trunc() < c + n {
        return Err(Error::TruncationExhausted { context: "normal form", needed: c + n, available: cur.trunc() });
    }
    let m = cur.first_char_exponent().expect("prepared branch");
    let contacts = contact_set(&cur, c)?;
    let lambda = zariski_lambda(&cur, c)?;
    let set_lambda = contacts.values.iter().copied().find(|j| *j > m && *j < c && !contacts.nilpotent.contains(j));
    if set_lambda != lambda {
        return Err(Error::CrossCheck(format!(
            "lambda from the contact set ({:?}) differs from the form value ({:?})",
            set_lambda, lambda
        )));
    }
    let eliminable: BTreeSet<u32> = contacts.nilpotent.iter().copied().filter(|j| *j > m && *j < c).collect();
    for &j in &eliminable {
        if cur.coeff(j).is_zero() {
            continue;
        }
        let e = eliminate_term(&cur, j, &contacts, field)?;
        steps.push(Step::Flow { j, witness: e.witness, s0: e.s0 });
        cur = e.result;
    }
    let cut = c.max(m + 1);
    steps.push(Step::Truncate { at: cut });
    cur = truncate_at(&cur, cut)?;
    let a_m = cur.coeff(m);
    let scaling = match lambda {
        None => {
            let w = a_m.inv()?;
            Scaling::Applied { u: Scalar::one(), w }
        }
        Some(l) => {
            let r = &cur.coeff(l) / &a_m;
            match (field.nth_root(&r, l - m), mode) {
                (Ok(u), ScaleMode::Exact | ScaleMode::Numeric) => {
                    let w = &u.pow(m) / &a_m;
                    Scaling::Applied { u, w }
                }
                (Err(e), ScaleMode::Exact) => return Err(e),
                (_, _) => Scaling::Constraints {
                    text: format!("u^{} = {}, w = u^{} / ({})", l - m, r, m, a_m),
                    ratio: r,
                    root_index: l - m,
                    a_m: a_m.clone(),
                },
            }
        }
    };
    if let Scaling::Applied { u, w } = &scaling {
        let step = Step::Scale { u: u.clone(), w: w.clone() };
        cur = apply_step(&cur, &step, field)?;
        steps.push(step);
    }
    if zariski_lambda(&cur, c)? != lambda {
        return Err(Error::CrossCheck("lambda changed along the reduction".into()));
    }
    for j in &eliminable {
        if !cur.coeff(*j).is_zero() {
            return Err(Error::CrossCheck(format!("eliminable exponent {} survived", j)));
        }
    }
    Ok(NormalFormReport {
        input: phi.clone(),
        output: cur,
        n,
        m: Some(m),
        lambda,
        conductor: c,
        semigroup: sg,
        contact_set: contacts.values.iter().copied().filter(|j| *j <= c).collect(),
        eliminable,
        steps,
        scaling,
    })
}

/// Whether two normal forms are related by `a'_i = w u^(-i) a_i`.
///
/// With `lambda` finite the admissible `u` satisfy
/// `u^(lambda - m) = (a_lambda a'_m) / (a_m a'_lambda)` up to the inverse
/// convention; all of them are tried.
pub fn moduli_equivalent(r1: &NormalFormReport, r2: &NormalFormReport, field: &CycloField) -> Result<bool> {
    if r1.n != r2.n || r1.m != r2.m || r1.lambda != r2.lambda || r1.conductor != r2.conductor || r1.contact_set != r2.contact_set {
        return Ok(false);
    }
    let (m, l) = match (r1.m, r1.lambda) {
        (Some(m), Some(l)) => (m, l),
        _ => return Ok(true),
    };
    let (a, b) = (&r1.output, &r2.output);
    let k = a.trunc().min(b.trunc()).min(r1.conductor);
    // b_i = nu kappa^i a_i
    let ratio_l = &(&b.coeff(l) * &a.coeff(m)) / &(&b.coeff(m) * &a.coeff(l));
    let d = l - m;
    let kappa0 = field.nth_root(&ratio_l, d)?;
    let roots = roots_of_unity(d, field);
    for xi in &roots {
        let kappa = &kappa0 * xi;
        let nu = &b.coeff(m) / &(&a.coeff(m) * &kappa.pow(m));
        if (0..k).all(|i| b.coeff(i) == &(&nu * &kappa.pow(i)) * &a.coeff(i)) {
            return Ok(true);
        }
    }
    if roots.len() < d as usize {
        return Err(Error::RootOfUnityOutsideField { l: d, order: field.order() });
    }
    Ok(false)
}

/// The contact exponent computed three ways, with the tangency order.
#[derive(Clone, Debug, PartialEq)]
pub struct ContactTriple {
    pub upsilon: Order,
    /// `upsilon - n`.
    pub from_form: Order,
    pub from_deformation: Order,
    /// `None` when the branch stays invariant along the explored blow-ups.
    pub path: Option<SharedPath>,
    pub from_path: Option<u32>,
    pub noether: Option<u32>,
    pub tangency: Order,
    pub conductor: u32,
}

/// Compute every contact invariant of `(X, phi)` and insist they agree,
/// including `tangency = contact + n + c - 1`.
pub fn contact_triple(x: &VectorField, phi: &PuiseuxParam, max_depth: u32, field: &CycloField) -> Result<ContactTriple> {
    let n = phi.n();
    let conductor = semigroup(phi)?.conductor;
    let ups = upsilon(&x.dual_form(), phi)?;
    let from_form = contact_exponent(x, phi)?;
    let from_deformation = contact_exponent_deformation(phi, x, field)?;
    let path = match shared_path(x, phi, max_depth) {
        Ok(p) => Some(p),
        Err(Error::MaxDepthExceeded { .. }) => None,
        Err(e @ Error::TruncationExhausted { .. }) => match from_form {
            Order::Finite(_) => return Err(e),
            Order::AtLeast(_) => None,
        },
        Err(e) => return Err(e),
    };
    let from_path = path.as_ref().and_then(contact_from_path);
    let noether = path.as_ref().map(noether_intersection);
    let tangency = tangency_order(x, phi)?;
    let fail = |what: &str| Err(Error::CrossCheck(format!("{}: form {:?}, deformation {:?}, path {:?}, tangency {:?}", what, from_form, from_deformation, from_path, tangency)));
    match (from_form, from_deformation) {
        (Order::Finite(a), Order::Finite(b)) if a != b => return fail("deformation disagrees with the form"),
        (Order::Finite(_), Order::AtLeast(_)) | (Order::AtLeast(_), Order::Finite(_)) => {
            return fail("deformation disagrees with the form")
        }
        _ => {}
    }
    match (from_form, from_path) {
        (Order::Finite(a), Some(b)) if a != b => return fail("shared path disagrees with the form"),
        (Order::Finite(_), None) | (Order::AtLeast(_), Some(_)) => return fail("shared path disagrees with the form"),
        _ => {}
    }
    match (from_form, tangency) {
        (Order::Finite(j), Order::Finite(t)) if t == j + n + conductor - 1 => {}
        (Order::AtLeast(_), Order::AtLeast(_)) => {}
        _ => return fail("tangency order breaks the conductor relation"),
    }
    Ok(ContactTriple { upsilon: ups, from_form, from_deformation, path, from_path, noether, tangency, conductor })
}
