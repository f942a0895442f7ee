//! Command line front end.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};

use branchflow_core::blowup::{default_max_depth, noether_intersection, shared_path, upsilon_from_path, contact_from_path, SharedPath};
use branchflow_core::embedding::{completeness_obstruction, stabilizer_jet2, Verdict, JET2_UNKNOWNS};
use branchflow_core::moduli::{self, contact_set, deform, moduli_equivalent, normal_form, replay, zariski_lambda, ScaleMode};
use branchflow_core::puiseux::{mult_sequence, prepare, semigroup, PuiseuxParam};
use branchflow_core::{CycloField, Error, ErrorKind};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::report::{self, Envelope, NormalFormDoc};
use crate::schema::{load, FieldFile, JetFile, ParamFile};

#[derive(Debug, Parser)]
#[command(name = "branchflow", version, about = "Exact invariants of plane branches under holomorphic flows")]
pub struct Cli {
    #[command(flatten)]
    pub opts: Options,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Declared truncation of input branches, overriding the file.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub trunc_t: Option<u32>,
    /// Degree in eps kept by deformations.
    #[arg(long, global = true, default_value_t = moduli::DEFAULT_EPS_DEGREE, value_parser = clap::value_parser!(u32).range(1..))]
    pub trunc_eps: u32,
    /// Work in Q(zeta_L).
    #[arg(long = "cyclotomic", global = true, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..))]
    pub cyclotomic: u32,
    /// How the final scaling of a normal form is solved.
    #[arg(long, global = true, value_enum, default_value_t = Scale::Exact)]
    pub scale: Scale,
    /// Bound on the number of blow-ups along a shared path.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_depth: Option<u32>,
    /// Write the report here (atomically) instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Exact,
    Skip,
    Numeric,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Multiplicity, first exponent, Zariski invariant, semigroup, conductor, contact set.
    Invariants { branch: PathBuf },
    /// Contact of a field with a branch, computed three ways and cross-checked.
    Contact { branch: PathBuf, field: PathBuf },
    /// The branch moved by the flow of a field, with eps formal.
    Deform { branch: PathBuf, field: PathBuf },
    /// Infinitely near points shared by a field and a branch.
    SharedPath { branch: PathBuf, field: PathBuf },
    /// Analytic normal form with a replayable transcript.
    NormalForm { branch: PathBuf },
    /// Whether two branches are analytically equivalent.
    Equivalence { first: PathBuf, second: PathBuf },
    /// Non-completeness certificate for a branch and a 2-jet.
    Embeddability { branch: PathBuf, jet: PathBuf },
    /// Second jets of fields tangent to a branch.
    Stabilizer { branch: PathBuf },
    /// Replay the transcript of a normal-form report.
    Verify { report: PathBuf },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Invariants { .. } => "invariants",
            Command::Contact { .. } => "contact",
            Command::Deform { .. } => "deform",
            Command::SharedPath { .. } => "shared-path",
            Command::NormalForm { .. } => "normal-form",
            Command::Equivalence { .. } => "equivalence",
            Command::Embeddability { .. } => "embeddability",
            Command::Stabilizer { .. } => "stabilizer",
            Command::Verify { .. } => "verify",
        }
    }
}

/// Process exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e.kind() {
        ErrorKind::Input => 2,
        ErrorKind::Mathematical => 3,
        ErrorKind::Internal => 4,
    }
}

struct Ctx {
    field: CycloField,
    opts: Options,
}

impl Ctx {
    fn branch(&self, path: &Path) -> Result<PuiseuxParam, Error> {
        let p = load::<ParamFile>(path)?.to_param(self.field.order())?;
        Ok(match self.opts.trunc_t {
            Some(k) if k < p.trunc() => p.with_trunc(k),
            Some(k) => p.extended(k),
            None => p,
        })
    }

    fn field_file(&self, path: &Path) -> Result<branchflow_core::vfield::VectorField, Error> {
        load::<FieldFile>(path)?.to_field(self.field.order())
    }

    fn max_depth(&self, phi: &PuiseuxParam) -> Result<u32, Error> {
        match self.opts.max_depth {
            Some(d) => Ok(d),
            None => default_max_depth(phi),
        }
    }

    fn scale(&self) -> ScaleMode {
        match self.opts.scale {
            Scale::Exact => ScaleMode::Exact,
            Scale::Skip => ScaleMode::Skip,
            Scale::Numeric => ScaleMode::Numeric,
        }
    }
}

fn path_json(p: &SharedPath) -> Value {
    json!({
        "mults": p.mults,
        "length": p.n,
        "last_point_free": p.last_point_free,
        "last_point_corner": p.last_point_corner,
        "last_point_singular_for_field": p.last_point_singular_for_x,
        "last_point_singular_for_curve": p.last_point_singular_for_curve,
        "single_singularity_on_last_divisor": p.single_singularity_on_last_divisor,
        "singularity_at_corner": p.singularity_at_corner,
        "noether": noether_intersection(p),
        "contact": contact_from_path(p),
        "upsilon": upsilon_from_path(p),
    })
}

fn invariants(phi: &PuiseuxParam) -> Result<Value, Error> {
    phi.check_irreducible()?;
    let prep = prepare(phi)?;
    let sg = semigroup(&prep.param)?;
    let c = sg.conductor;
    let (m, lambda, contacts) = if prep.smooth {
        (None, None, BTreeSet::new())
    } else {
        let cs = contact_set(&prep.param, c.max(1))?;
        (prep.param.first_char_exponent(), zariski_lambda(&prep.param, c)?, cs.values)
    };
    Ok(json!({
        "input": ParamFile::from_param(phi),
        "prepared": ParamFile::from_param(&prep.param),
        "n": phi.n(),
        "m": m,
        "lambda": lambda,
        "semigroup": report::semigroup(&sg),
        "conductor": c,
        "contact_set": contacts,
        "mult_sequence": mult_sequence(&prep.param, phi.n() as usize + 2)?,
    }))
}

fn contact(ctx: &Ctx, phi: &PuiseuxParam, x: &branchflow_core::vfield::VectorField) -> Result<Value, Error> {
    let t = moduli::contact_triple(x, phi, ctx.max_depth(phi)?, &ctx.field)?;
    Ok(json!({
        "upsilon": report::order(t.upsilon),
        "contact_exponent": report::order(t.from_form),
        "contact_deformation": report::order(t.from_deformation),
        "contact_path": t.from_path,
        "tangency_order": report::order(t.tangency),
        "conductor": t.conductor,
        "noether": t.noether,
        "shared_path": t.path.as_ref().map(path_json),
        "prepared_field": x.is_prepared(),
        "nilpotent_field": x.is_nilpotent(),
    }))
}

fn normal_form_doc(ctx: &Ctx, phi: &PuiseuxParam) -> Result<NormalFormDoc, Error> {
    let r = normal_form(phi, ctx.scale(), &ctx.field)?;
    Ok(NormalFormDoc::new(&r, ctx.opts.scale == Scale::Numeric, &ctx.field))
}

fn verify(path: &Path) -> Result<(Value, CycloField), Error> {
    let env: Envelope = load(path)?;
    if env.schema != report::SCHEMA || env.command != "normal-form" {
        return Err(Error::Parse(format!("{} is not a {} normal-form report", path.display(), report::SCHEMA)));
    }
    let field = CycloField::new(env.field_order)?;
    let doc: NormalFormDoc = serde_json::from_value(env.result).map_err(|e| Error::Parse(e.to_string()))?;
    let input = doc.input.to_param(field.order())?;
    let output = doc.output.to_param(field.order())?;
    let steps = doc.steps.iter().map(|s| report::parse_step(s, field.order())).collect::<Result<Vec<_>, _>>()?;
    let replayed = replay(&input, &steps, &field)?;
    if replayed != output {
        return Err(Error::CrossCheck(format!("transcript replays to {} instead of {}", replayed, output)));
    }
    Ok((json!({ "verified": true, "steps": steps.len(), "output": doc.output }), field))
}

/// Run one command and return its report.
pub fn run(cli: &Cli) -> Result<Envelope, Error> {
    let ctx = Ctx { field: CycloField::new(cli.opts.cyclotomic)?, opts: cli.opts.clone() };
    let name = cli.command.name();
    let result = match &cli.command {
        Command::Invariants { branch } => invariants(&ctx.branch(branch)?)?,
        Command::Contact { branch, field } => contact(&ctx, &ctx.branch(branch)?, &ctx.field_file(field)?)?,
        Command::Deform { branch, field } => {
            let phi = ctx.branch(branch)?;
            let d = deform(&phi, &ctx.field_file(field)?, ctx.opts.trunc_eps, &ctx.field)?;
            let coeffs: Vec<Value> = d
                .coeffs
                .iter()
                .map(|(i, c)| json!([i, c.coeffs().iter().map(|s| s.to_text()).collect::<Vec<_>>()]))
                .collect();
            json!({
                "n": d.n,
                "trunc": d.trunc,
                "trunc_eps": d.d_eps,
                "coeffs": coeffs,
                "first_moving": d.first_moving(),
                "prepared_field": d.prepared,
            })
        }
        Command::SharedPath { branch, field } => {
            let phi = ctx.branch(branch)?;
            let x = ctx.field_file(field)?;
            match shared_path(&x, &phi, ctx.max_depth(&phi)?) {
                Ok(p) => json!({ "invariant": false, "path": path_json(&p) }),
                Err(Error::MaxDepthExceeded { depth }) => json!({ "invariant": true, "explored_depth": depth, "path": null }),
                Err(e) => return Err(e),
            }
        }
        Command::NormalForm { branch } => {
            serde_json::to_value(normal_form_doc(&ctx, &ctx.branch(branch)?)?).expect("plain data")
        }
        Command::Equivalence { first, second } => {
            let r1 = normal_form(&ctx.branch(first)?, ctx.scale(), &ctx.field)?;
            let r2 = normal_form(&ctx.branch(second)?, ctx.scale(), &ctx.field)?;
            let eq = moduli_equivalent(&r1, &r2, &ctx.field)?;
            json!({
                "equivalent": eq,
                "first": NormalFormDoc::new(&r1, false, &ctx.field),
                "second": NormalFormDoc::new(&r2, false, &ctx.field),
            })
        }
        Command::Embeddability { branch, jet } => {
            let phi = ctx.branch(branch)?;
            let map = load::<JetFile>(jet)?.to_jet(ctx.field.order())?;
            let c = completeness_obstruction(&phi, &map, &ctx.field)?;
            let r = &c.resonance;
            let verdict = match &r.verdict {
                Verdict::Obstructed => json!({ "kind": "obstructed" }),
                Verdict::NotObstructed { k1, k2 } => json!({ "kind": "not-obstructed", "k1": k1.to_string(), "k2": k2.to_string() }),
                Verdict::NonResonant { degree } => json!({ "kind": "non-resonant", "degree": degree }),
            };
            json!({
                "rotations": r.eigen.rotations.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
                "present": r.present.iter().map(|m| json!([m.i, m.j, m.target])).collect::<Vec<_>>(),
                "system": r.system.iter().map(|row| json!({
                    "monomial": [row.monomial.i, row.monomial.j, row.monomial.target],
                    "k1": row.a,
                    "k2": row.b,
                    "rhs": row.rhs.to_string(),
                })).collect::<Vec<_>>(),
                "verdict": verdict,
                "reason": r.reason,
                "stabilizer_dimension": c.stabilizer.dimension,
                "non_complete": c.non_complete,
                "witness": c.witness.as_ref().map(ParamFile::from_param),
            })
        }
        Command::Stabilizer { branch } => {
            let s = stabilizer_jet2(&ctx.branch(branch)?)?;
            let text = |v: &[branchflow_core::Scalar; 6]| v.iter().map(|c| c.to_text()).collect::<Vec<_>>();
            json!({
                "unknowns": JET2_UNKNOWNS,
                "orders": s.orders,
                "rows": s.rows.iter().map(text).collect::<Vec<_>>(),
                "rank": s.rank,
                "dimension": s.dimension,
                "basis": s.basis.iter().map(text).collect::<Vec<_>>(),
            })
        }
        Command::Verify { report } => {
            let (v, field) = verify(report)?;
            return Ok(Envelope::new(name, &field, v));
        }
    };
    Ok(Envelope::new(name, &ctx.field, result))
}

/// Write `text` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Parse arguments, run, write the report; returns the exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(env) => {
            let text = env.to_text();
            match &cli.opts.out {
                Some(p) => {
                    if let Err(e) = write_atomic(p, &text) {
                        eprintln!("{{\"error\":\"io\",\"message\":{}}}", json!(e.to_string()));
                        return 1;
                    }
                }
                None => print!("{}", text),
            }
            0
        }
        Err(e) => {
            eprintln!("{}", json!({ "error": e.code(), "message": e.to_string() }));
            exit_code(&e)
        }
    }
}
