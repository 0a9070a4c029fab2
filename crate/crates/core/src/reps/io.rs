//! JSON representation files.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "mode": "rational",
//!   "quiver": { "loops": [0, 0], "edges": [[0, 2], [2, 0]] },
//!   "n": [1, 1],
//!   "arrows": [
//!     { "source": 0, "target": 1, "x": { "rows": 1, "cols": 1, "entries": ["1"] },
//!                                 "y": { "rows": 1, "cols": 1, "entries": ["0"] } }
//!   ]
//! }
//! ```
//!
//! Entries are row-major; rationals are `"p/q"` strings (integers also
//! accepted) and complex numbers are `[re, im]` pairs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use super::{RepError, Representation};
use crate::linalg::{Field, Matrix};
use crate::quiver::{DimVector, Quiver};
use crate::rational::{fmt_q, parse_q, Q};

pub const REP_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum RepIoError {
    #[error("malformed representation file: {0}")]
    Schema(String),
    #[error(transparent)]
    Rep(#[from] RepError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnyRepresentation {
    Rational(Representation<Q>),
    Complex(Representation<Complex64>),
}

impl AnyRepresentation {
    pub fn mode(&self) -> &'static str {
        match self {
            Self::Rational(_) => "rational",
            Self::Complex(_) => "complex",
        }
    }

    pub fn n(&self) -> &DimVector {
        match self {
            Self::Rational(r) => r.n(),
            Self::Complex(r) => r.n(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    entries: Vec<Value>,
}

#[derive(Serialize, Deserialize)]
struct ArrowFile {
    source: usize,
    target: usize,
    x: MatrixFile,
    y: MatrixFile,
}

#[derive(Serialize, Deserialize)]
struct RepFile {
    schema_version: u32,
    mode: String,
    quiver: Quiver,
    n: DimVector,
    arrows: Vec<ArrowFile>,
}

trait Entry: Field {
    fn to_value(&self) -> Value;
    fn from_value(v: &Value) -> Result<Self, String>;
}

impl Entry for Q {
    fn to_value(&self) -> Value {
        Value::String(fmt_q(self))
    }
    fn from_value(v: &Value) -> Result<Self, String> {
        match v {
            Value::String(s) => parse_q(s).map_err(|e| e.to_string()),
            Value::Number(n) => n
                .as_i64()
                .map(|i| Q::from_integer(i.into()))
                .ok_or_else(|| format!("non-integer number {n} in rational mode")),
            other => Err(format!("expected a rational, found {other}")),
        }
    }
}

impl Entry for Complex64 {
    fn to_value(&self) -> Value {
        serde_json::json!([self.re, self.im])
    }
    fn from_value(v: &Value) -> Result<Self, String> {
        let pair: [f64; 2] = serde_json::from_value(v.clone()).map_err(|e| format!("expected [re, im]: {e}"))?;
        Ok(Complex64::new(pair[0], pair[1]))
    }
}

fn matrix_to_file<F: Entry>(m: &Matrix<F>) -> MatrixFile {
    MatrixFile { rows: m.rows(), cols: m.cols(), entries: m.data().iter().map(Entry::to_value).collect() }
}

fn matrix_from_file<F: Entry>(m: &MatrixFile) -> Result<Matrix<F>, RepIoError> {
    if m.entries.len() != m.rows * m.cols {
        return Err(RepIoError::Schema(format!(
            "matrix declares {}x{} but has {} entries",
            m.rows,
            m.cols,
            m.entries.len()
        )));
    }
    let data = m.entries.iter().map(F::from_value).collect::<Result<Vec<F>, String>>().map_err(RepIoError::Schema)?;
    Ok(Matrix::from_row_major(m.rows, m.cols, data))
}

fn to_file<F: Entry>(rep: &Representation<F>, mode: &str) -> RepFile {
    RepFile {
        schema_version: REP_SCHEMA_VERSION,
        mode: mode.to_string(),
        quiver: rep.quiver().clone(),
        n: rep.n().clone(),
        arrows: rep
            .quiver()
            .arrows()
            .iter()
            .enumerate()
            .map(|(k, a)| ArrowFile {
                source: a.source,
                target: a.target,
                x: matrix_to_file(&rep.x()[k]),
                y: matrix_to_file(&rep.y()[k]),
            })
            .collect(),
    }
}

fn from_file<F: Entry>(f: &RepFile) -> Result<Representation<F>, RepIoError> {
    let arrows = f.quiver.arrows();
    if arrows.len() != f.arrows.len() {
        return Err(RepIoError::Schema(format!("expected {} arrows, found {}", arrows.len(), f.arrows.len())));
    }
    let mut x = Vec::with_capacity(arrows.len());
    let mut y = Vec::with_capacity(arrows.len());
    for (k, (a, af)) in arrows.iter().zip(&f.arrows).enumerate() {
        if (a.source, a.target) != (af.source, af.target) {
            return Err(RepIoError::Schema(format!(
                "arrow {k} should run {} -> {}, found {} -> {}",
                a.source, a.target, af.source, af.target
            )));
        }
        x.push(matrix_from_file(&af.x)?);
        y.push(matrix_from_file(&af.y)?);
    }
    Ok(Representation::new(f.quiver.clone(), f.n.clone(), x, y)?)
}

pub fn representation_to_json(rep: &AnyRepresentation) -> Value {
    let file = match rep {
        AnyRepresentation::Rational(r) => to_file(r, "rational"),
        AnyRepresentation::Complex(r) => to_file(r, "complex"),
    };
    serde_json::to_value(file).expect("representation file serializes")
}

pub fn parse_representation(text: &str) -> Result<AnyRepresentation, RepIoError> {
    let file: RepFile = serde_json::from_str(text).map_err(|e| RepIoError::Schema(e.to_string()))?;
    if file.schema_version != REP_SCHEMA_VERSION {
        return Err(RepIoError::Schema(format!("unsupported schema_version {}", file.schema_version)));
    }
    match file.mode.as_str() {
        "rational" => Ok(AnyRepresentation::Rational(from_file(&file)?)),
        "complex" => Ok(AnyRepresentation::Complex(from_file(&file)?)),
        other => Err(RepIoError::Schema(format!("unknown mode {other:?}"))),
    }
}
