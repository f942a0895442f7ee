//! Report documents. Every report is wrapped in an envelope carrying the
//! schema version, the command and the field order, and is written with
//! sorted keys so that two runs on the same input diff cleanly.

use branchflow_core::moduli::{NormalFormReport, Scaling, Step};
use branchflow_core::puiseux::SemigroupData;
use branchflow_core::{CycloField, Error, Order, Scalar};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::numeric;
use crate::schema::{FieldFile, ParamFile};

pub const SCHEMA: &str = "branchflow-report/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub schema: String,
    pub command: String,
    pub field_order: u32,
    pub result: Value,
}

impl Envelope {
    pub fn new(command: &str, field: &CycloField, result: Value) -> Envelope {
        Envelope { schema: SCHEMA.into(), command: command.into(), field_order: field.order(), result }
    }

    /// Canonical text: keys sorted, two-space indentation, trailing newline.
    pub fn to_text(&self) -> String {
        let v = serde_json::to_value(self).expect("reports are plain data");
        let mut s = serde_json::to_string_pretty(&v).expect("reports are plain data");
        s.push('\n');
        s
    }
}

/// `{"finite": k}` or `{"at_least": k}`.
pub fn order(o: Order) -> Value {
    match o {
        Order::Finite(k) => json!({ "finite": k }),
        Order::AtLeast(k) => json!({ "at_least": k }),
    }
}

pub fn semigroup(s: &SemigroupData) -> Value {
    json!({
        "generators": s.generators,
        "conductor": s.conductor,
        "char_exponents": s.char_exponents,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StepDoc {
    Flow { j: u32, witness: FieldFile, s0: String },
    Truncate { at: u32 },
    Scale { u: String, w: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum ScalingDoc {
    Applied {
        u: String,
        w: String,
    },
    Constraints {
        text: String,
        ratio: String,
        root_index: u32,
        a_m: String,
        /// Display-only approximations `[re, im]` of every admissible `u`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        numeric_u: Option<Vec<[f64; 2]>>,
    },
}

/// Serialized normal form, complete enough to replay.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalFormDoc {
    pub input: ParamFile,
    pub output: ParamFile,
    pub n: u32,
    pub m: Option<u32>,
    pub lambda: Option<u32>,
    pub conductor: u32,
    pub generators: Vec<u32>,
    pub contact_set: Vec<u32>,
    pub eliminable: Vec<u32>,
    pub steps: Vec<StepDoc>,
    pub scaling: ScalingDoc,
}

pub fn step_doc(s: &Step) -> StepDoc {
    match s {
        Step::Flow { j, witness, s0 } => StepDoc::Flow { j: *j, witness: FieldFile::from_field(witness), s0: s0.to_text() },
        Step::Truncate { at } => StepDoc::Truncate { at: *at },
        Step::Scale { u, w } => StepDoc::Scale { u: u.to_text(), w: w.to_text() },
    }
}

pub fn parse_step(s: &StepDoc, order: u32) -> Result<Step, Error> {
    Ok(match s {
        StepDoc::Flow { j, witness, s0 } => Step::Flow { j: *j, witness: witness.to_field(order)?, s0: Scalar::parse(s0, order)? },
        StepDoc::Truncate { at } => Step::Truncate { at: *at },
        StepDoc::Scale { u, w } => Step::Scale { u: Scalar::parse(u, order)?, w: Scalar::parse(w, order)? },
    })
}

impl NormalFormDoc {
    pub fn new(r: &NormalFormReport, numeric_display: bool, field: &CycloField) -> NormalFormDoc {
        let scaling = match &r.scaling {
            Scaling::Applied { u, w } => ScalingDoc::Applied { u: u.to_text(), w: w.to_text() },
            Scaling::Constraints { ratio, root_index, a_m, text } => ScalingDoc::Constraints {
                text: text.clone(),
                ratio: ratio.to_text(),
                root_index: *root_index,
                a_m: a_m.to_text(),
                numeric_u: numeric_display.then(|| numeric::roots(&numeric::complex(ratio, field.order()), *root_index)),
            },
        };
        NormalFormDoc {
            input: ParamFile::from_param(&r.input),
            output: ParamFile::from_param(&r.output),
            n: r.n,
            m: r.m,
            lambda: r.lambda,
            conductor: r.conductor,
            generators: r.semigroup.generators.clone(),
            contact_set: r.contact_set.iter().copied().collect(),
            eliminable: r.eliminable.iter().copied().collect(),
            steps: r.steps.iter().map(step_doc).collect(),
            scaling,
        }
    }
}
