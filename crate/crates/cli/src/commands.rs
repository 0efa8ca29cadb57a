//! One function per subcommand. Each takes parsed documents and returns the
//! report value together with its exit code.

use pobasis::error::{Error, Refusal};
use pobasis::factorization::kronecker_factor;
use pobasis::locc::{
    apply_local_filter, pseudo_diagonalize, synthesize_action_with_tol, transformable, Decision, DensityMatrix,
    PseudoSpectrum,
};
use pobasis::numerics::{Operator2, Operator4};
use pobasis::pseudometric::{concurrence_mixed, spin_flip_op2, spin_flip_op4, spin_flip_state};
use pobasis::representation::{sl2_pair_to_so4, unimodular_rescale};
use serde_json::{json, Value};

use crate::document::{complex_value, matrix_value, state_value, Kind, MatrixDocument, Payload};
use crate::selftest::{run_selftest, Hooks};
use crate::CliError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_SELFTEST: i32 = 4;

pub struct Outcome {
    pub value: Value,
    pub code: i32,
    /// Error object also written to standard error.
    pub error: Option<Value>,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Self { value, code: EXIT_OK, error: None }
    }
}

fn expect_kind(doc: &MatrixDocument, role: &str, allowed: &[Kind]) -> Result<(), CliError> {
    if allowed.contains(&doc.kind()) {
        Ok(())
    } else {
        let names: Vec<_> = allowed.iter().map(|k| k.name()).collect();
        Err(CliError::Schema(format!("{role}: expected {}, got {}", names.join(" or "), doc.kind().name())))
    }
}

fn state(doc: &MatrixDocument, role: &str) -> Result<DensityMatrix, CliError> {
    expect_kind(doc, role, &[Kind::DensityMatrix])?;
    let Payload::Density(m) = &doc.payload else { unreachable!() };
    Ok(DensityMatrix::new(*m)?)
}

fn operator2(doc: &MatrixDocument, role: &str) -> Result<Operator2, CliError> {
    expect_kind(doc, role, &[Kind::Operator2])?;
    let Payload::Op2(m) = &doc.payload else { unreachable!() };
    Ok(*m)
}

fn operator4(doc: &MatrixDocument, role: &str) -> Result<Operator4, CliError> {
    expect_kind(doc, role, &[Kind::Operator4])?;
    let Payload::Op4(m) = &doc.payload else { unreachable!() };
    Ok(*m)
}

pub fn flip(doc: &MatrixDocument) -> Result<Outcome, CliError> {
    expect_kind(doc, "input", &[Kind::StateVector, Kind::Operator2, Kind::Operator4])?;
    let payload = match &doc.payload {
        Payload::State(v) => Payload::State(spin_flip_state(v)),
        Payload::Op2(m) => Payload::Op2(spin_flip_op2(m)),
        Payload::Op4(m) => Payload::Op4(spin_flip_op4(m)),
        Payload::Density(_) => unreachable!(),
    };
    Ok(Outcome::ok(MatrixDocument { label: doc.label.clone(), payload }.to_value()))
}

fn spectrum_value(s: &PseudoSpectrum) -> Value {
    json!(s.lambdas)
}

pub fn analyze(doc: &MatrixDocument) -> Result<Outcome, CliError> {
    let rho = state(doc, "rho")?;
    let spectrum = pseudo_diagonalize(&rho)?;
    Ok(Outcome::ok(json!({
        "format": 1,
        "kind": "analysis",
        "rank": spectrum.rank,
        "lambdas": spectrum_value(&spectrum),
        "concurrence": concurrence_mixed(&rho),
        "vectors": spectrum.vectors.iter().map(state_value).collect::<Vec<_>>(),
        "reconstruction_residual": spectrum.reconstruct().max_abs_diff(rho.matrix()),
        "gram_residual": spectrum.gram_residual(),
    })))
}

fn refusal_value(r: &Refusal) -> Value {
    match r {
        Refusal::RankMismatch { rank_rho, rank_sigma } => {
            json!({ "kind": "rank_mismatch", "rank_rho": rank_rho, "rank_sigma": rank_sigma })
        }
        Refusal::SpectrumMismatch { max_difference } => {
            json!({ "kind": "spectrum_mismatch", "max_difference": max_difference })
        }
    }
}

pub fn check(rho: &MatrixDocument, sigma: &MatrixDocument, tol: f64) -> Result<Outcome, CliError> {
    let (r, s) = (state(rho, "rho")?, state(sigma, "sigma")?);
    let t = transformable(&r, &s, tol)?;
    let mut v = json!({
        "format": 1,
        "kind": "decision",
        "transformable": t.is_yes(),
        "lambdas_rho": spectrum_value(&t.rho),
        "lambdas_sigma": spectrum_value(&t.sigma),
    });
    let code = match &t.decision {
        Decision::Yes { witness } => {
            v["witness"] = matrix_value(witness);
            EXIT_OK
        }
        Decision::No(refusal) => {
            v["reason"] = refusal_value(refusal);
            EXIT_NEGATIVE
        }
    };
    Ok(Outcome { value: v, code, error: None })
}

pub fn synth(rho: &MatrixDocument, sigma: &MatrixDocument, tol: f64) -> Result<Outcome, CliError> {
    let (r, s) = (state(rho, "rho")?, state(sigma, "sigma")?);
    let plan = synthesize_action_with_tol(&r, &s, tol)?;
    Ok(Outcome::ok(json!({
        "format": 1,
        "kind": "transform_plan",
        "a": matrix_value(&plan.a),
        "b": matrix_value(&plan.b),
        "success_probability": plan.success_probability,
        "verification": { "residual": plan.residual },
    })))
}

pub fn apply(rho: &MatrixDocument, a: &MatrixDocument, b: &MatrixDocument) -> Result<Outcome, CliError> {
    let r = state(rho, "rho")?;
    let (a, b) = (operator2(a, "a")?, operator2(b, "b")?);
    let (out, p) = apply_local_filter(&r, &a, &b)?;
    Ok(Outcome::ok(json!({
        "format": 1,
        "kind": "filter_result",
        "probability": p,
        "state": MatrixDocument::density(&out, rho.label.clone()).to_value(),
    })))
}

/// Both factors are rescaled to unit determinant first.
pub fn repmat(a: &MatrixDocument, b: &MatrixDocument) -> Result<Outcome, CliError> {
    let a = unimodular_rescale(&operator2(a, "a")?)?;
    let b = unimodular_rescale(&operator2(b, "b")?)?;
    let d = sl2_pair_to_so4(&a, &b)?;
    let doc = MatrixDocument { label: Some("rep_matrix".into()), payload: Payload::Op4(d.into_inner()) };
    Ok(Outcome::ok(doc.to_value()))
}

pub fn factor(doc: &MatrixDocument, tol: f64) -> Result<Outcome, CliError> {
    let m = operator4(doc, "input")?;
    let pair = kronecker_factor(&m, tol)?;
    Ok(Outcome::ok(json!({
        "format": 1,
        "kind": "local_pair",
        "a": matrix_value(&pair.a),
        "b": matrix_value(&pair.b),
        "scale": complex_value(pair.scale),
        "residual": pair.operator().max_abs_diff(&m),
    })))
}

pub fn selftest(seed: u64, rounds: usize, hooks: &Hooks) -> Outcome {
    let report = run_selftest(seed, rounds, hooks);
    if report.passed() {
        return Outcome::ok(report.to_value());
    }
    let counterexample = report.first_counterexample().cloned().unwrap_or(Value::Null);
    Outcome {
        value: report.to_value(),
        code: EXIT_SELFTEST,
        error: Some(json!({
            "error": {
                "kind": "selftest_failure",
                "message": format!("suite {} failed", counterexample["suite"]),
                "counterexample": counterexample,
            }
        })),
    }
}

/// Stable snake_case name of a library error.
pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::NotHermitian { .. } => "not_hermitian",
        Error::NotPsd { .. } => "not_psd",
        Error::Singular { .. } => "singular",
        Error::NotSymmetric { .. } => "not_symmetric",
        Error::ZeroPseudoNorm { .. } => "zero_pseudo_norm",
        Error::LinearlyDependent { .. } => "linearly_dependent",
        Error::NotNormalized { .. } => "not_normalized",
        Error::InvalidState(_) => "invalid_state",
        Error::InvalidBasis { .. } => "invalid_basis",
        Error::NotUnimodular { .. } => "not_unimodular",
        Error::NotProductForm { .. } => "not_product_form",
        Error::Stage { .. } => "stage",
        Error::Degenerate { .. } => "degenerate",
        Error::NotTransformable(_) => "not_transformable",
        Error::ZeroProbability { .. } => "zero_probability",
    }
}

/// Negative answers exit with 1, every other library error with 3.
pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::NotTransformable(_) | Error::NotProductForm { .. } => EXIT_NEGATIVE,
        _ => EXIT_DOMAIN,
    }
}
