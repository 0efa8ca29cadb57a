//! The versioned JSON matrix format.
//!
//! ```json
//! {"format": 1, "kind": "operator2", "label": "optional", "data": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}
//! ```
//!
//! Complex numbers are `[re, im]` pairs; `state_vector` data is a flat list of
//! four pairs, the operator kinds are row-major grids.

use pobasis::locc::DensityMatrix;
use pobasis::numerics::{Matrix, Operator2, Operator4, StateVector, C64};
use serde::Deserialize;
use serde_json::{json, Value};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    StateVector,
    Operator2,
    Operator4,
    DensityMatrix,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::StateVector => "state_vector",
            Kind::Operator2 => "operator2",
            Kind::Operator4 => "operator4",
            Kind::DensityMatrix => "density_matrix",
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct SchemaError(pub String);

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    format: u64,
    kind: Kind,
    #[serde(default)]
    label: Option<String>,
    data: Value,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    State(StateVector),
    Op2(Operator2),
    Op4(Operator4),
    /// Shape-checked only; state validation happens in the command.
    Density(Operator4),
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixDocument {
    pub label: Option<String>,
    pub payload: Payload,
}

fn pair(v: &Value, at: &str) -> Result<C64, SchemaError> {
    let [re, im]: [f64; 2] =
        serde_json::from_value(v.clone()).map_err(|_| SchemaError(format!("{at}: expected [re, im] number pair")))?;
    if !(re.is_finite() && im.is_finite()) {
        return Err(SchemaError(format!("{at}: non-finite number")));
    }
    Ok(C64::new(re, im))
}

fn row<const N: usize>(v: &Value, at: &str) -> Result<[C64; N], SchemaError> {
    let items =
        v.as_array().filter(|a| a.len() == N).ok_or_else(|| SchemaError(format!("{at}: expected {N} entries")))?;
    let mut out = [C64::new(0.0, 0.0); N];
    for (k, item) in items.iter().enumerate() {
        out[k] = pair(item, &format!("{at}[{k}]"))?;
    }
    Ok(out)
}

fn grid<const N: usize>(v: &Value) -> Result<Matrix<N>, SchemaError> {
    let rows = v.as_array().filter(|a| a.len() == N).ok_or_else(|| SchemaError(format!("data: expected {N} rows")))?;
    let mut m = Matrix::<N>::zeros();
    for (i, r) in rows.iter().enumerate() {
        m.0[i] = row::<N>(r, &format!("data[{i}]"))?;
    }
    Ok(m)
}

impl MatrixDocument {
    pub fn parse(text: &str) -> Result<Self, SchemaError> {
        let raw: Raw = serde_json::from_str(text).map_err(|e| SchemaError(e.to_string()))?;
        if raw.format != FORMAT_VERSION {
            return Err(SchemaError(format!("unsupported format {}", raw.format)));
        }
        let payload = match raw.kind {
            Kind::StateVector => Payload::State(StateVector(row::<4>(&raw.data, "data")?)),
            Kind::Operator2 => Payload::Op2(grid::<2>(&raw.data)?),
            Kind::Operator4 => Payload::Op4(grid::<4>(&raw.data)?),
            Kind::DensityMatrix => Payload::Density(grid::<4>(&raw.data)?),
        };
        Ok(Self { label: raw.label, payload })
    }

    pub fn kind(&self) -> Kind {
        match self.payload {
            Payload::State(_) => Kind::StateVector,
            Payload::Op2(_) => Kind::Operator2,
            Payload::Op4(_) => Kind::Operator4,
            Payload::Density(_) => Kind::DensityMatrix,
        }
    }

    pub fn to_value(&self) -> Value {
        let data = match &self.payload {
            Payload::State(v) => state_value(v),
            Payload::Op2(m) => matrix_value(m),
            Payload::Op4(m) | Payload::Density(m) => matrix_value(m),
        };
        let mut doc = json!({ "format": FORMAT_VERSION, "kind": self.kind().name() });
        if let Some(label) = &self.label {
            doc["label"] = json!(label);
        }
        doc["data"] = data;
        doc
    }

    pub fn density(m: &DensityMatrix, label: Option<String>) -> Self {
        Self { label, payload: Payload::Density(*m.matrix()) }
    }
}

pub fn complex_value(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn state_value(v: &StateVector) -> Value {
    Value::Array(v.0.iter().copied().map(complex_value).collect())
}

pub fn matrix_value<const N: usize>(m: &Matrix<N>) -> Value {
    Value::Array(m.0.iter().map(|r| Value::Array(r.iter().copied().map(complex_value).collect())).collect())
}
