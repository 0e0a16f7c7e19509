use std::fs;
use std::path::Path;

use fermigauss::colpa::LinearGaussianOp;
use fermigauss::gaussianops::QuadraticGenerator;
use fermigauss::{ComplexMatrix, Error, C64};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::CliError;

/// `[re, im]`.
pub type Pair = [f64; 2];

/// Operator document: `L`, the `2L x 2L` generator `M` in the `(c^dag, c) x (c, c^dag)`
/// layout, and optional linear coefficients `u`, `v`. `T`, written by `compose`, is
/// informational and ignored on load.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorFile {
    #[serde(rename = "L")]
    pub sites: usize,
    #[serde(rename = "M")]
    pub m: Vec<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<Pair>>,
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub transfer: Option<Vec<Vec<Pair>>>,
}

impl OperatorFile {
    pub fn from_op(op: &LinearGaussianOp) -> Self {
        let linear = !op.is_quadratic();
        Self {
            sites: op.sites(),
            m: matrix_pairs(op.generator().matrix()),
            u: linear.then(|| op.u().iter().map(|&z| pair(z)).collect()),
            v: linear.then(|| op.v().iter().map(|&z| pair(z)).collect()),
            transfer: None,
        }
    }

    pub fn to_op(&self) -> Result<LinearGaussianOp, CliError> {
        let n = 2 * self.sites;
        if self.m.len() != n || self.m.iter().any(|row| row.len() != n) {
            return Err(invalid(format!("M must be {n}x{n} for L = {}", self.sites)));
        }
        let m = ComplexMatrix::from_fn(n, n, |i, j| complex(self.m[i][j]));
        if !m.is_finite() {
            return Err(invalid("M has non-finite entries".into()));
        }
        let g = QuadraticGenerator::new(m)?;
        let vector = |name: &str, v: &Option<Vec<Pair>>| -> Result<Vec<C64>, CliError> {
            match v {
                None => Ok(vec![C64::new(0.0, 0.0); self.sites]),
                Some(v) if v.len() == self.sites => Ok(v.iter().map(|&p| complex(p)).collect()),
                Some(v) => Err(invalid(format!("{name} has length {}, expected {}", v.len(), self.sites))),
            }
        };
        Ok(LinearGaussianOp::new(g, vector("u", &self.u)?, vector("v", &self.v)?)?)
    }
}

fn invalid(msg: String) -> CliError {
    CliError::Lib(Error::InvalidOperator(msg))
}

/// A loaded operator with the SHA-256 of its file.
pub struct Loaded {
    pub op: LinearGaussianOp,
    pub digest: InputDigest,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

pub fn load_operator(path: &Path) -> Result<Loaded, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Io { path: path.display().to_string(), source: e })?;
    let digest = InputDigest { path: path.display().to_string(), sha256: hex::encode(Sha256::digest(&bytes)) };
    let file: OperatorFile = serde_json::from_slice(&bytes).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    Ok(Loaded { op: file.to_op()?, digest })
}

pub fn complex(p: Pair) -> C64 {
    C64::new(p[0], p[1])
}

pub fn pair(z: C64) -> Pair {
    [z.re, z.im]
}

pub fn cx(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn matrix_pairs(m: &ComplexMatrix) -> Vec<Vec<Pair>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| pair(m[(i, j)])).collect()).collect()
}

pub fn matrix(m: &ComplexMatrix) -> Value {
    json!(matrix_pairs(m))
}

pub fn vector(v: &[C64]) -> Value {
    Value::Array(v.iter().map(|&z| cx(z)).collect())
}
