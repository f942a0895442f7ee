//! JSON input files: branches, vector fields and 2-jets.
//!
//! Coefficients are strings in the scalar text grammar (`"3/2"`,
//! `"1/2*z^1 + -1*z^3"`), read in the field chosen on the command line.

use std::fs;
use std::path::Path;

use branchflow_core::puiseux::PuiseuxParam;
use branchflow_core::series::{BiPoly, EXACT};
use branchflow_core::vfield::{JetDiffeo, VectorField};
use branchflow_core::{Error, Scalar};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

/// `{ "n": 6, "y": [[7,"1"],[10,"1"],[11,"1"]], "trunc": 40 }`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamFile {
    pub n: u32,
    pub y: Vec<(u32, String)>,
    pub trunc: u32,
}

/// `{ "A": [[i,j,"c"], ...], "B": [[i,j,"c"], ...] }`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldFile {
    #[serde(rename = "A", default)]
    pub a: Vec<(u32, u32, String)>,
    #[serde(rename = "B", default)]
    pub b: Vec<(u32, u32, String)>,
}

/// `{ "x": [[i,j,"c"], ...], "y": [[i,j,"c"], ...] }`, the components of a
/// polynomial map fixing the origin.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JetFile {
    pub x: Vec<(u32, u32, String)>,
    pub y: Vec<(u32, u32, String)>,
}

fn scalar(text: &str, order: u32) -> Result<Scalar, Error> {
    Scalar::parse(text, order)
}

fn poly(terms: &[(u32, u32, String)], order: u32) -> Result<BiPoly, Error> {
    let mut out = Vec::with_capacity(terms.len());
    for (i, j, c) in terms {
        out.push(((*i, *j), scalar(c, order)?));
    }
    Ok(BiPoly::from_terms(out, EXACT))
}

pub fn poly_terms(p: &BiPoly) -> Vec<(u32, u32, String)> {
    p.terms().map(|((i, j), c)| (i, j, c.to_text())).collect()
}

impl ParamFile {
    pub fn to_param(&self, order: u32) -> Result<PuiseuxParam, Error> {
        let mut terms = Vec::with_capacity(self.y.len());
        for (e, c) in &self.y {
            terms.push((*e, scalar(c, order)?));
        }
        PuiseuxParam::from_terms(self.n, terms, self.trunc)
    }

    pub fn from_param(p: &PuiseuxParam) -> ParamFile {
        ParamFile { n: p.n(), y: p.y().terms().map(|(e, c)| (e, c.to_text())).collect(), trunc: p.trunc() }
    }
}

impl FieldFile {
    pub fn to_field(&self, order: u32) -> Result<VectorField, Error> {
        Ok(VectorField::new(poly(&self.a, order)?, poly(&self.b, order)?))
    }

    pub fn from_field(x: &VectorField) -> FieldFile {
        FieldFile { a: poly_terms(x.a()), b: poly_terms(x.b()) }
    }
}

impl JetFile {
    pub fn to_jet(&self, order: u32) -> Result<JetDiffeo, Error> {
        JetDiffeo::new(poly(&self.x, order)?, poly(&self.y, order)?)
    }
}

/// Read and deserialize a JSON file; every failure is an input error.
pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {}", path.display(), e)))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {}", path.display(), e)))
}
