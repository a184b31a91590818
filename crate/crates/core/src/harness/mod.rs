//! Report assembly: classification, spectrum and verifier checks for one
//! operator, plus the example catalog, generators and suites.

pub mod catalog;
pub mod generators;
pub mod suite;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::classifier::{
    self, classify_asymptotic, hierarchy_violations, individual_eventual, open_question_flag, uniform_eventual,
    weak_eventual, ConeTestSet, Notion, PositivityVerdict, Status, HIERARCHY,
};
use crate::error::{Error, Result};
use crate::lattice::{cone_distance, norm_value, LatticeVector, NormKind};
use crate::matrix::{CMatrix, MatrixJson};
use crate::operators::{ModelDescriptor, OperatorModel};
use crate::spectral::{self, Spectrum};
use crate::verifier::{self, CheckResult, Measured, PowerBound};

pub use catalog::{build_example, catalog, catalog_names, CatalogEntry};
pub use generators::{cyclic_block, make_eventually_positive, positive_random, EventuallyPositive, GeneratorSpec};
pub use suite::{run_suite, SuiteKind, SuiteOutcome, SuiteSummary};

pub const SCHEMA_VERSION: &str = "1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
/// Identity of the generator behind every seeded draw.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha), one stream per trial or member";
/// Dense checks are skipped above this dimension.
pub const CHECK_DIM_CAP: usize = spectral::MAX_DIM;
pub const CYCLICITY_K: i64 = 12;
pub const MONOTONICITY_NS: [i64; 7] = [-3, -2, -1, 0, 1, 2, 3];
pub const ERROR_DECAY_JS: [i32; 10] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10];
pub const CHECK_TOL: f64 = 1e-8;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONTRADICTION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyOptions {
    pub eventual_horizon: u64,
    pub asymptotic_horizon: u64,
    pub tol: f64,
    pub seed: u64,
    /// Run the verifier checks when the model has a dense matrix of
    /// dimension at most [`CHECK_DIM_CAP`].
    pub checks: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            eventual_horizon: classifier::DEFAULT_EVENTUAL_HORIZON,
            asymptotic_horizon: classifier::DEFAULT_ASYMPTOTIC_HORIZON,
            tol: classifier::DEFAULT_TOL,
            seed: 0,
            checks: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelInput {
    Model { id: String, descriptor: ModelDescriptor },
    Example(String),
    Generate(GeneratorSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisReport {
    pub schema_version: String,
    pub tool_version: String,
    pub rng: String,
    pub operator_id: String,
    pub model_descriptor: ModelDescriptor,
    pub seed: u64,
    pub options: ClassifyOptions,
    pub classification: Vec<PositivityVerdict>,
    pub spectrum: Option<Spectrum>,
    /// Names of the checks scheduled for this model; each appears once in `checks`.
    pub run_plan: Vec<String>,
    pub checks: Vec<CheckResult>,
    pub power_bound: Option<PowerBound>,
    pub decay_sequences: BTreeMap<String, Vec<f64>>,
    pub hierarchy_violations: Vec<(Notion, Notion)>,
    pub open_question_flag: bool,
    pub contradictions: usize,
    /// Internal solver failures, one line each.
    pub errors: Vec<String>,
    pub notes: Vec<String>,
}

impl AnalysisReport {
    pub fn verdict(&self, notion: Notion) -> Option<&PositivityVerdict> {
        self.classification.iter().find(|v| v.notion == notion)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn exit_code(&self) -> i32 {
        if self.contradictions > 0 {
            EXIT_CONTRADICTION
        } else if !self.errors.is_empty() {
            EXIT_SOLVER
        } else {
            EXIT_OK
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }
}

/// Model descriptor JSON (tagged by `kind`) or bare matrix JSON (`n`,
/// `entries`), the latter read as a dense operator on `l^1`.
pub fn parse_model(text: &str) -> Result<ModelDescriptor> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    if value.get("kind").is_some() {
        serde_json::from_str(text).map_err(|e| Error::Schema(locate(text, e)))
    } else {
        let m: MatrixJson = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        Ok(ModelDescriptor::Dense { n: m.n, entries: m.entries, norm: NormKind::Ell1 })
    }
}

pub fn parse_generator(text: &str) -> Result<GeneratorSpec> {
    let spec: GeneratorSpec = serde_json::from_str(text).map_err(|e| Error::Schema(locate(text, e)))?;
    spec.validate()?;
    Ok(spec)
}

/// Tagged enums are buffered by serde, so their errors carry no position;
/// point at the first occurrence of the offending field instead.
fn locate(text: &str, e: serde_json::Error) -> String {
    let msg = e.to_string();
    if e.line() > 0 {
        return msg;
    }
    let field = msg.split('`').nth(1).map(|f| format!("\"{f}\""));
    match field.and_then(|f| text.find(&f)) {
        Some(at) => {
            let before = &text[..at];
            let line = before.matches('\n').count() + 1;
            let column = at - before.rfind('\n').map_or(0, |k| k + 1) + 1;
            format!("{msg} at line {line} column {column}")
        }
        None => msg,
    }
}

/// Reads a vector as JSON: a list of reals or of `[re, im]` pairs.
pub fn parse_vector(text: &str) -> Result<Vec<Complex64>> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Entry {
        Real(f64),
        Pair([f64; 2]),
    }
    let entries: Vec<Entry> = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    Ok(entries
        .into_iter()
        .map(|e| match e {
            Entry::Real(r) => Complex64::new(r, 0.0),
            Entry::Pair([re, im]) => Complex64::new(re, im),
        })
        .collect())
}

pub fn resolve(input: &ModelInput) -> Result<(String, OperatorModel, ModelDescriptor)> {
    match input {
        ModelInput::Model { id, descriptor } => Ok((id.clone(), descriptor.build()?, descriptor.clone())),
        ModelInput::Example(name) => {
            let t = build_example(name)?;
            let d = ModelDescriptor::describe(&t);
            Ok((name.clone(), t, d))
        }
        ModelInput::Generate(spec) => {
            spec.validate()?;
            let t = match spec {
                GeneratorSpec::EventuallyPositive { dim, gap, seed } => {
                    OperatorModel::dense(make_eventually_positive(*dim, *gap, *seed)?.matrix, NormKind::Ell1)?
                }
                GeneratorSpec::PositiveRandom { dim, seed } => {
                    OperatorModel::dense(positive_random(*dim, *seed)?, NormKind::Ell1)?
                }
                GeneratorSpec::CyclicBlock { k, inner_dim, seed } => {
                    OperatorModel::dense(cyclic_block(*k, *inner_dim, *seed)?, NormKind::Ell1)?
                }
                GeneratorSpec::Example { name } => build_example(name)?,
            };
            let d = ModelDescriptor::describe(&t);
            Ok((spec.label(), t, d))
        }
    }
}

fn sorted_spectrum(mut eigenvalues: Vec<Complex64>) -> Spectrum {
    eigenvalues.sort_by(|a, b| b.norm().total_cmp(&a.norm()).then(a.arg().total_cmp(&b.arg())));
    let spectral_radius = eigenvalues.first().map_or(0.0, |z| z.norm());
    Spectrum { eigenvalues, spectral_radius, solver_tolerance: 0.0 }
}

/// Closed forms where the model has one, the eigensolver otherwise. Rank-k
/// spectra list the non-zero eigenvalues and a single `0` for the kernel.
pub fn model_spectrum(t: &OperatorModel) -> Result<Spectrum> {
    Ok(match t {
        OperatorModel::Diagonal(d) => sorted_spectrum(d.symbol.clone()),
        OperatorModel::WeightedShift(s) => sorted_spectrum(vec![Complex64::new(0.0, 0.0); s.weights.len()]),
        OperatorModel::RankK(r) => {
            let mut l = r.lambdas();
            l.push(Complex64::new(0.0, 0.0));
            sorted_spectrum(l)
        }
        OperatorModel::Dense(d) => spectral::eigenvalues(&d.matrix, spectral::DEFAULT_TOL)?,
    })
}

/// A Refuted weaker notion refutes every Undetermined stronger one.
fn propagate_refutations(verdicts: &mut [PositivityVerdict]) {
    loop {
        let mut changed = false;
        for (hi, lo) in HIERARCHY {
            let Some(witness) = verdicts.iter().find(|v| v.notion == lo).and_then(|v| v.status.witness().cloned())
            else {
                continue;
            };
            if let Some(v) = verdicts.iter_mut().find(|v| v.notion == hi) {
                if matches!(v.status, Status::Undetermined { .. }) {
                    v.status = Status::Refuted { witness };
                    v.notes.push(format!("refuted by implication: {} is refuted", lo.label()));
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
}

fn failed_check(name: &str, err: &Error) -> CheckResult {
    let mut c = CheckResult::new(name, -1.0, 0.0, json!({ "error": err.to_string() }));
    c.applicable = false;
    c.flags.push(format!("solver failure: {err}"));
    c
}

fn unit_ones(dim: usize, norm: &NormKind) -> Result<LatticeVector> {
    let x = LatticeVector::from_real(&vec![1.0; dim], norm.clone())?;
    let s = norm_value(&x);
    Ok(x.scale(Complex64::new(1.0 / s, 0.0)))
}

fn resolvent_check(a: &CMatrix, norm: &NormKind) -> Result<CheckResult> {
    let (s, _) = verifier::rescale_to_unit_spr(a)?;
    let lambda = Complex64::from_polar(2.0, PI / 3.0);
    let x = unit_ones(a.dim(), norm)?;
    verifier::resolvent_estimate_check(&s, lambda, &x, verifier::omega_truncation(2.0), classifier::DEFAULT_TOL)
}

fn vacuous(name: &str, why: &str) -> CheckResult {
    let mut c = CheckResult::new(name, 0.0, 0.0, json!({}));
    c.applicable = false;
    c.flags.push(why.into());
    c
}

pub const RUN_PLAN: [&str; 6] = [
    "multiplicity-monotonicity",
    "peripheral-cyclicity",
    "positive-eigenvector",
    "resolvent-estimate",
    "spr-in-spectrum",
    "uniform-error-decay",
];

fn run_checks(a: &CMatrix, norm: &NormKind, errors: &mut Vec<String>) -> Vec<CheckResult> {
    let measured = match Measured::of(a) {
        Ok(m) => m,
        Err(e) => {
            errors.push(format!("hypothesis measurement: {e}"));
            return RUN_PLAN.iter().map(|n| failed_check(n, &e)).collect();
        }
    };
    let zero_spr = measured.asymptotic.is_none();
    let mut out = Vec::new();
    for name in RUN_PLAN {
        let result = match name {
            "multiplicity-monotonicity" => {
                verifier::multiplicity_monotonicity_check_with(a, &MONOTONICITY_NS, CHECK_TOL, &measured)
            }
            "peripheral-cyclicity" => verifier::peripheral_cyclicity_check_with(a, CYCLICITY_K, CHECK_TOL, &measured),
            "positive-eigenvector" => verifier::positive_eigenvector_check_with(a, CHECK_TOL, &measured),
            "resolvent-estimate" if zero_spr => Ok(vacuous(name, "zero spectral radius")),
            "resolvent-estimate" => resolvent_check(a, norm),
            "spr-in-spectrum" => verifier::verify_spr_in_spectrum_with(a, CHECK_TOL, &measured),
            "uniform-error-decay" => verifier::uniform_error_decay_check_with(a, norm, &ERROR_DECAY_JS, &measured),
            _ => unreachable!("run plan entry without a runner"),
        };
        out.push(result.unwrap_or_else(|e| {
            errors.push(format!("{name}: {e}"));
            failed_check(name, &e)
        }));
    }
    out
}

/// Classifies `input` under all six notions, attaches its spectrum and, for
/// dense-representable models of moderate size, every verifier check.
pub fn run_classify(input: &ModelInput, options: &ClassifyOptions) -> Result<AnalysisReport> {
    let (operator_id, t, model_descriptor) = resolve(input)?;
    let mut notes = Vec::new();
    let mut errors = Vec::new();
    let tests = ConeTestSet::canonical(t.norm_kind(), t.dim(), options.seed)?;
    let (eh, ah, tol) = (options.eventual_horizon, options.asymptotic_horizon, options.tol);

    let mut classification = Vec::new();
    let eventual: [(Notion, Result<PositivityVerdict>); 3] = [
        (Notion::UniformEventual, uniform_eventual(&t, eh, tol)),
        (Notion::IndividualEventual, individual_eventual(&t, &tests, eh, tol)),
        (Notion::WeakEventual, weak_eventual(&t, &tests, eh, tol)),
    ];
    for (notion, r) in eventual {
        match r {
            Ok(v) => classification.push(v),
            Err(e @ (Error::InvalidArgument(_) | Error::DimensionMismatch { .. })) => return Err(e),
            Err(e) => errors.push(format!("{}: {e}", notion.label())),
        }
    }
    match classify_asymptotic(&t, ah, tol, &tests) {
        Ok(v) => classification.extend([v.uniform, v.individual, v.weak]),
        Err(Error::NotClassifiable { spr }) => {
            notes.push(format!("asymptotic notions not classifiable: spectral radius {spr:e}"))
        }
        Err(e @ Error::InvalidArgument(_)) => return Err(e),
        Err(e) => errors.push(format!("asymptotic: {e}")),
    }
    propagate_refutations(&mut classification);
    let violations = hierarchy_violations(&classification);
    for (hi, lo) in &violations {
        notes.push(format!("hierarchy violation: {} confirmed while {} refuted", hi.label(), lo.label()));
    }
    let open = open_question_flag(&classification);
    if open {
        notes.push("individual-eventual confirmed with uniform-asymptotic refuted".into());
    }
    let decay_sequences = classification
        .iter()
        .filter(|v| !v.decay.is_empty())
        .map(|v| (v.notion.label().to_string(), v.decay.clone()))
        .collect();

    let spectrum = match model_spectrum(&t) {
        Ok(s) => Some(s),
        Err(Error::DimensionTooLarge { dim, cap }) => {
            notes.push(format!("spectrum omitted: dimension {dim} exceeds the eigensolver cap {cap}"));
            None
        }
        Err(e) => {
            errors.push(format!("spectrum: {e}"));
            None
        }
    };

    let mut checks = Vec::new();
    let mut run_plan = Vec::new();
    let mut power_bound = None;
    if options.checks {
        if t.dim() > CHECK_DIM_CAP {
            notes.push(format!("verifier checks skipped: dimension {} exceeds {CHECK_DIM_CAP}", t.dim()));
        } else {
            let a = t.matrix();
            run_plan = RUN_PLAN.iter().map(|s| s.to_string()).collect();
            checks = run_checks(&a, t.norm_kind(), &mut errors);
            match verifier::power_bounded_estimate(&a, verifier::POWER_HORIZON) {
                Ok(p) => {
                    if !p.power_bounded {
                        notes.push(format!(
                            "power-boundedness not observed; Abel estimate {:.6e} is data only",
                            p.abel_sup
                        ));
                    }
                    power_bound = Some(p);
                }
                Err(Error::NotClassifiable { .. }) => {}
                Err(e) => errors.push(format!("power bound: {e}")),
            }
        }
    }
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    let contradictions = verifier::contradiction_count(&checks);

    Ok(AnalysisReport {
        schema_version: SCHEMA_VERSION.into(),
        tool_version: TOOL_VERSION.into(),
        rng: RNG_ALGORITHM.into(),
        operator_id,
        model_descriptor,
        seed: options.seed,
        options: options.clone(),
        classification,
        spectrum,
        run_plan,
        checks,
        power_bound,
        decay_sequences,
        hierarchy_violations: violations,
        open_question_flag: open,
        contradictions,
        errors,
        notes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitRow {
    pub n: u64,
    pub d_plus: f64,
    pub norm: f64,
}

/// `d+(T^n x)` and `|T^n x|` for `n = 0..=n_max`.
pub fn orbit_decay(t: &OperatorModel, x: &LatticeVector, n_max: u64) -> Result<Vec<OrbitRow>> {
    if x.dim() != t.dim() {
        return Err(Error::DimensionMismatch { expected: t.dim(), actual: x.dim() });
    }
    let mut rows = Vec::with_capacity(n_max as usize + 1);
    let mut y = x.clone();
    for n in 0..=n_max {
        if n > 0 {
            y = t.apply(&y)?;
        }
        rows.push(OrbitRow { n, d_plus: cone_distance(&y), norm: norm_value(&y) });
    }
    Ok(rows)
}
