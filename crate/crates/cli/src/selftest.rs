//! Randomized property suites behind `pobasis selftest`.

use pobasis::factorization::{so4_to_sl2_pair_direct, so4_to_sl2_pair_polar};
use pobasis::locc::{apply_local_filter, synthesize_action, transformable, Decision, DensityMatrix};
use pobasis::numerics::{svd, Operator2, StateVector, C64};
use pobasis::pseudo_diagonalize;
use pobasis::pseudometric::{concurrence_mixed, flip_spectrum, magic_basis, pseudo_gram_schmidt, spin_flip_state};
use pobasis::random::{self, SeededRng};
use pobasis::representation::{orthogonality_residual, sl2_pair_to_so4};
use serde_json::{json, Value};

use crate::document::{matrix_value, state_value, MatrixDocument};

/// Test-only switches for checking that the harness notices broken math.
#[derive(Clone, Copy, Debug, Default)]
pub struct Hooks {
    /// Negates the spin flip used by the suites.
    pub flip_sign_fault: bool,
}

impl Hooks {
    fn flip(&self, v: &StateVector) -> StateVector {
        let f = spin_flip_state(v);
        if self.flip_sign_fault {
            -f
        } else {
            f
        }
    }

    fn pseudo_inner(&self, a: &StateVector, b: &StateVector) -> C64 {
        a.dot(&self.flip(b))
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub samples: usize,
    pub tolerance: f64,
    pub max_residual: f64,
    pub counterexample: Option<Value>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    fn to_value(&self) -> Value {
        json!({
            "name": self.name,
            "samples": self.samples,
            "tolerance": self.tolerance,
            "max_residual": self.max_residual,
            "passed": self.passed(),
        })
    }
}

struct Suite {
    report: SuiteReport,
}

impl Suite {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self { report: SuiteReport { name, samples: 0, tolerance, max_residual: 0.0, counterexample: None } }
    }

    /// Records one sample; `inputs` is only evaluated for the first failure.
    fn record(&mut self, residual: f64, inputs: impl FnOnce() -> Value) {
        let r = &mut self.report;
        let sample = r.samples;
        r.samples += 1;
        if residual.is_nan() {
            r.max_residual = f64::INFINITY;
        } else {
            r.max_residual = r.max_residual.max(residual);
        }
        if (residual.is_nan() || residual >= r.tolerance) && r.counterexample.is_none() {
            r.counterexample = Some(json!({
                "suite": r.name,
                "sample": sample,
                "residual": if residual.is_finite() { json!(residual) } else { json!(residual.to_string()) },
                "inputs": inputs(),
            }));
        }
    }

    fn fail(&mut self, detail: String, inputs: impl FnOnce() -> Value) {
        self.record(f64::INFINITY, || json!({ "detail": detail, "values": inputs() }));
    }
}

fn doc_op2(label: &str, m: &Operator2) -> Value {
    json!({ "format": 1, "kind": "operator2", "label": label, "data": matrix_value(m) })
}

fn doc_state(label: &str, v: &StateVector) -> Value {
    json!({ "format": 1, "kind": "state_vector", "label": label, "data": state_value(v) })
}

fn doc_rho(label: &str, rho: &DensityMatrix) -> Value {
    MatrixDocument::density(rho, Some(label.into())).to_value()
}

fn magic_suite(hooks: &Hooks) -> SuiteReport {
    let mut s = Suite::new("magic_basis", 1e-12);
    let m = magic_basis();
    for i in 0..4 {
        let e = m.vector(i);
        let mut residual = hooks.flip(e).max_abs_diff(e);
        for j in 0..4 {
            let target = if i == j { 1.0 } else { 0.0 };
            residual = residual.max((hooks.pseudo_inner(e, m.vector(j)) - target).norm());
        }
        s.record(residual, || json!([doc_state("e", e), doc_state("flipped", &hooks.flip(e))]));
    }
    s.report
}

fn pseudo_form_suite(rng: &mut SeededRng, rounds: usize, hooks: &Hooks) -> SuiteReport {
    let mut s = Suite::new("pseudo_form", 1e-10);
    for _ in 0..rounds {
        let (a, b) = (random::random_state_vector(rng), random::random_state_vector(rng));
        let (x, y) = (random::random_sl2(rng), random::random_sl2(rng));
        let k = x.kron(&y);
        let before = hooks.pseudo_inner(&a, &b);
        let after = hooks.pseudo_inner(&(k * a), &(k * b));
        let symmetry = (before - hooks.pseudo_inner(&b, &a)).norm();
        let residual = ((after - before).norm() / k.max_abs().powi(2).max(1.0)).max(symmetry);
        s.record(residual, || json!([doc_state("a", &a), doc_state("b", &b), doc_op2("A", &x), doc_op2("B", &y)]));
    }
    s.report
}

fn homomorphism_suite(rng: &mut SeededRng, rounds: usize) -> SuiteReport {
    let mut s = Suite::new("homomorphism", 1e-9);
    for _ in 0..rounds {
        let (a1, b1, a2, b2) =
            (random::random_sl2(rng), random::random_sl2(rng), random::random_sl2(rng), random::random_sl2(rng));
        let inputs = || json!([doc_op2("A1", &a1), doc_op2("B1", &b1), doc_op2("A2", &a2), doc_op2("B2", &b2)]);
        let built = (sl2_pair_to_so4(&a1, &b1), sl2_pair_to_so4(&a2, &b2), sl2_pair_to_so4(&(a1 * a2), &(b1 * b2)));
        match built {
            (Ok(d1), Ok(d2), Ok(d12)) => {
                let orth = orthogonality_residual(d1.matrix());
                let mult = d12.matrix().max_abs_diff(&(*d1.matrix() * *d2.matrix()));
                s.record(orth.max(mult), inputs);
            }
            (e1, e2, e3) => {
                let msg = [e1.err(), e2.err(), e3.err()].into_iter().flatten().next().map(|e| e.to_string());
                s.fail(msg.unwrap_or_default(), inputs);
            }
        }
    }
    s.report
}

fn kernel_suite(rng: &mut SeededRng, rounds: usize) -> SuiteReport {
    let mut s = Suite::new("kernel", 1e-12);
    for _ in 0..rounds {
        let (a, b) = (random::random_sl2(rng), random::random_sl2(rng));
        let inputs = || json!([doc_op2("A", &a), doc_op2("B", &b)]);
        match (sl2_pair_to_so4(&a, &b), sl2_pair_to_so4(&-a, &-b)) {
            (Ok(d), Ok(dn)) => s.record(d.matrix().max_abs_diff(dn.matrix()), inputs),
            (Err(e), _) | (_, Err(e)) => s.fail(e.to_string(), inputs),
        }
    }
    s.report
}

fn round_trip_suites(rng: &mut SeededRng, rounds: usize) -> [SuiteReport; 2] {
    let mut direct_suite = Suite::new("round_trip_direct", 1e-8);
    let mut polar_suite = Suite::new("round_trip_polar", 1e-7);
    let basis = magic_basis();
    for _ in 0..rounds {
        let (a, b) = (random::random_sl2(rng), random::random_sl2(rng));
        let inputs = || json!([doc_op2("A", &a), doc_op2("B", &b)]);
        let d = match sl2_pair_to_so4(&a, &b) {
            Ok(d) => d,
            Err(e) => {
                direct_suite.fail(e.to_string(), inputs);
                continue;
            }
        };
        match so4_to_sl2_pair_direct(&d, &basis) {
            Ok(direct) => {
                direct_suite.record(direct.pair_distance(&a, &b), inputs);
                match so4_to_sl2_pair_polar(&d, &basis) {
                    Ok(polar) => polar_suite.record(polar.distance(&direct), inputs),
                    Err(e) => polar_suite.fail(e.to_string(), inputs),
                }
            }
            Err(e) => direct_suite.fail(e.to_string(), inputs),
        }
    }
    [direct_suite.report, polar_suite.report]
}

fn gram_schmidt_suite(rng: &mut SeededRng, rounds: usize) -> SuiteReport {
    let mut s = Suite::new("gram_schmidt", 1e-8);
    for _ in 0..rounds {
        let q = random::random_quadruple(rng);
        let inputs = || Value::Array(q.iter().map(|v| doc_state("input", v)).collect());
        match pseudo_gram_schmidt(&q) {
            Ok(b) => s.record(b.gram_residual(), inputs),
            Err(e) => s.fail(e.to_string(), inputs),
        }
    }
    s.report
}

fn diagonalization_suite(rng: &mut SeededRng, rounds: usize) -> SuiteReport {
    let mut s = Suite::new("pseudo_diagonalization", 1e-8);
    for _ in 0..rounds {
        let rho = random::random_density_matrix(rng);
        let inputs = || json!([doc_rho("rho", &rho)]);
        match pseudo_diagonalize(&rho) {
            Ok(spectrum) => {
                let reference = flip_spectrum(&rho);
                let lambda = (0..4).map(|i| (spectrum.lambdas[i] - reference[i]).abs()).fold(0.0, f64::max);
                let recon = spectrum.reconstruct().max_abs_diff(rho.matrix());
                s.record(lambda.max(recon).max(spectrum.gram_residual()), inputs);
            }
            Err(e) => s.fail(e.to_string(), inputs),
        }
    }
    s.report
}

fn concurrence_suite(rng: &mut SeededRng, rounds: usize, hooks: &Hooks) -> SuiteReport {
    let mut s = Suite::new("concurrence", 1e-8);
    for k in 0..=10 {
        let p = k as f64 / 10.0;
        let Ok(w) = DensityMatrix::werner(p) else { continue };
        let residual = (concurrence_mixed(&w) - ((3.0 * p - 1.0) / 2.0).max(0.0)).abs();
        s.record(residual, || json!([doc_rho("werner", &w)]));
    }
    for _ in 0..rounds {
        let v = random::random_state_vector(rng);
        let a = v.amplitudes();
        let schmidt = svd(&Operator2::from_fn(|i, j| a[2 * i + j])).s;
        let expect = 2.0 * schmidt[0] * schmidt[1];
        let pure = hooks.pseudo_inner(&v, &v).norm();
        let mixed = DensityMatrix::from_pure(&v).map(|rho| concurrence_mixed(&rho));
        let residual = (pure - expect).abs().max(mixed.map_or(f64::INFINITY, |c| (c - expect).abs()));
        s.record(residual, || json!([doc_state("psi", &v)]));
    }
    s.report
}

fn filtering_suite(rng: &mut SeededRng, rounds: usize) -> SuiteReport {
    let mut s = Suite::new("local_filtering", 1e-8);
    for _ in 0..rounds {
        let rho = random::random_density_matrix(rng);
        let (a, b) = random::random_filter_pair(rng, f64::INFINITY);
        let inputs = || json!([doc_rho("rho", &rho), doc_op2("A0", &a), doc_op2("B0", &b)]);
        let sigma = match apply_local_filter(&rho, &a, &b) {
            Ok((sigma, _)) => sigma,
            Err(e) => {
                s.fail(e.to_string(), inputs);
                continue;
            }
        };
        match transformable(&rho, &sigma, 1e-8) {
            Ok(t) if t.is_yes() => {}
            Ok(t) => {
                s.fail(format!("refused: {:?}", t.decision), inputs);
                continue;
            }
            Err(e) => {
                s.fail(e.to_string(), inputs);
                continue;
            }
        }
        match synthesize_action(&rho, &sigma) {
            Ok(plan) if plan.success_probability > 0.0 && plan.success_probability <= 1.0 + 1e-12 => {
                s.record(plan.residual, inputs)
            }
            Ok(plan) => s.fail(format!("success probability {}", plan.success_probability), inputs),
            Err(e) => s.fail(e.to_string(), inputs),
        }
    }
    s.report
}

fn refusal_suite(rng: &mut SeededRng, rounds: usize) -> SuiteReport {
    let mut s = Suite::new("refusal", 0.5);
    for k in 0..rounds {
        let rho = random::random_density_matrix(rng);
        let sigma = random::random_density_matrix_rank(rng, k % 3 + 1);
        let inputs = || json!([doc_rho("rho", &rho), doc_rho("sigma", &sigma)]);
        match transformable(&rho, &sigma, 1e-8) {
            Ok(t) => s.record(if matches!(t.decision, Decision::No(_)) { 0.0 } else { 1.0 }, inputs),
            Err(e) => s.fail(e.to_string(), inputs),
        }
    }
    s.report
}

#[derive(Clone, Debug)]
pub struct SelftestReport {
    pub seed: u64,
    pub rounds: usize,
    pub suites: Vec<SuiteReport>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }

    pub fn first_counterexample(&self) -> Option<&Value> {
        self.suites.iter().find_map(|s| s.counterexample.as_ref())
    }

    pub fn to_value(&self) -> Value {
        let mut v = json!({
            "format": 1,
            "kind": "selftest",
            "seed": self.seed,
            "rounds": self.rounds,
            "passed": self.passed(),
            "suites": self.suites.iter().map(SuiteReport::to_value).collect::<Vec<_>>(),
        });
        if let Some(c) = self.first_counterexample() {
            v["counterexample"] = c.clone();
        }
        v
    }
}

/// Runs every suite with `rounds` samples each. Each suite draws from its own
/// stream derived from `seed`, so suites do not perturb one another.
pub fn run_selftest(seed: u64, rounds: usize, hooks: &Hooks) -> SelftestReport {
    let stream = |k: u64| random::seeded(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(k));
    let mut suites = vec![
        magic_suite(hooks),
        pseudo_form_suite(&mut stream(1), rounds, hooks),
        homomorphism_suite(&mut stream(2), rounds),
        kernel_suite(&mut stream(3), rounds),
    ];
    suites.extend(round_trip_suites(&mut stream(4), rounds));
    suites.push(gram_schmidt_suite(&mut stream(5), rounds));
    suites.push(diagonalization_suite(&mut stream(6), rounds));
    suites.push(concurrence_suite(&mut stream(7), rounds, hooks));
    suites.push(filtering_suite(&mut stream(8), rounds));
    suites.push(refusal_suite(&mut stream(9), rounds));
    SelftestReport { seed, rounds, suites }
}
