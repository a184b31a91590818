//! Batch runs: property sweeps, the example catalog, random instances.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, RngCore};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classifier::{seeded_rng, Notion};
use crate::error::Result;
use crate::lattice::{cone_distance, cone_distance_oracle, LatticeVector, NormKind};
use crate::matrix::CMatrix;
use crate::rates::decreasing_rearrangement;
use crate::verifier::{self, Measured};

use super::{
    catalog, make_eventually_positive, run_classify, AnalysisReport, ClassifyOptions, GeneratorSpec, ModelInput,
    EXIT_CONTRADICTION, EXIT_OK, EXIT_SOLVER,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteKind {
    Properties,
    Catalog,
    Random,
}

impl SuiteKind {
    pub fn label(self) -> &'static str {
        match self {
            SuiteKind::Properties => "properties",
            SuiteKind::Catalog => "catalog",
            SuiteKind::Random => "random",
        }
    }
}

/// Resolution of the brute-force cone-distance oracle in the sweeps.
pub const ORACLE_RESOLUTION: f64 = 1e-3;
pub const ORACLE_MAX_DIM: usize = 4;
pub const SWEEP_MAX_DIM: usize = 16;
/// Every `MATRIX_EVERY`-th sweep trial also runs the matrix-level properties.
pub const MATRIX_EVERY: u64 = 10;
/// `r = 1 + 2^-j` exponents for the error-decay property.
pub const SWEEP_JS: [i32; 10] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub suite: SuiteKind,
    pub seed: u64,
    pub trials: u64,
    pub instances: u64,
    pub checks_run: u64,
    /// Expectation mismatches and failed properties, one line each.
    pub failures: Vec<String>,
    pub contradictions: usize,
    pub hierarchy_violations: usize,
    pub solver_failures: usize,
    pub elapsed_ms: u128,
}

impl SuiteSummary {
    pub fn exit_code(&self) -> i32 {
        if self.contradictions > 0 || !self.failures.is_empty() {
            EXIT_CONTRADICTION
        } else if self.solver_failures > 0 {
            EXIT_SOLVER
        } else {
            EXIT_OK
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub reports: Vec<AnalysisReport>,
    pub summary: SuiteSummary,
}

struct Tally {
    summary: SuiteSummary,
}

impl Tally {
    fn new(suite: SuiteKind, seed: u64, trials: u64) -> Self {
        Self {
            summary: SuiteSummary {
                suite,
                seed,
                trials,
                instances: 0,
                checks_run: 0,
                failures: Vec::new(),
                contradictions: 0,
                hierarchy_violations: 0,
                solver_failures: 0,
                elapsed_ms: 0,
            },
        }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.summary.checks_run += 1;
        if !ok {
            self.summary.failures.push(what());
        }
    }

    fn absorb(&mut self, r: &AnalysisReport) {
        self.summary.instances += 1;
        self.summary.checks_run += r.checks.len() as u64;
        self.summary.contradictions += r.contradictions;
        self.summary.hierarchy_violations += r.hierarchy_violations.len();
        self.summary.solver_failures += r.errors.len();
        for (hi, lo) in &r.hierarchy_violations {
            self.summary.failures.push(format!("{}: {} above refuted {}", r.operator_id, hi.label(), lo.label()));
        }
    }
}

pub fn run_suite(kind: SuiteKind, seed: u64, trials: u64) -> Result<SuiteOutcome> {
    let start = Instant::now();
    let mut tally = Tally::new(kind, seed, trials);
    let reports = match kind {
        SuiteKind::Properties => {
            property_sweep(seed, trials, &mut tally)?;
            Vec::new()
        }
        SuiteKind::Catalog => catalog_suite(seed, &mut tally)?,
        SuiteKind::Random => random_suite(seed, trials, &mut tally)?,
    };
    tally.summary.elapsed_ms = start.elapsed().as_millis();
    Ok(SuiteOutcome { reports, summary: tally.summary })
}

fn catalog_suite(seed: u64, tally: &mut Tally) -> Result<Vec<AnalysisReport>> {
    let options = ClassifyOptions { seed, ..Default::default() };
    let mut reports = Vec::new();
    for entry in catalog::catalog() {
        let r = run_classify(&ModelInput::Example(entry.name.into()), &options)?;
        tally.absorb(&r);
        for (notion, want) in entry.expected {
            let got = r.verdict(notion).map(|v| v.status.label());
            tally.expect(got == want, || format!("{}: {} is {got:?}, expected {want:?}", entry.name, notion.label()));
        }
        for &(name, pass) in entry.expected_checks {
            let got = r.check(name).map(|c| c.pass);
            tally.expect(got == Some(pass), || format!("{}: check {name} gave {got:?}, expected {pass}", entry.name));
        }
        reports.push(r);
    }
    Ok(reports)
}

/// Dimension in `2..=12` and gap in `[0.3, 0.8)` for random trial `trial`.
pub fn random_trial_spec(seed: u64, trial: u64) -> GeneratorSpec {
    let mut rng = seeded_rng(seed, trial);
    let trial_seed = rng.next_u64();
    let dim = 2 + (rng.next_u64() % 11) as usize;
    let gap = 0.3 + 0.5 * rng.random::<f64>();
    GeneratorSpec::EventuallyPositive { dim, gap, seed: trial_seed }
}

fn random_suite(seed: u64, trials: u64, tally: &mut Tally) -> Result<Vec<AnalysisReport>> {
    let mut reports = Vec::new();
    for trial in 0..trials {
        let spec = random_trial_spec(seed, trial);
        let GeneratorSpec::EventuallyPositive { dim, gap, seed: s } = spec else { unreachable!() };
        let bound = make_eventually_positive(dim, gap, s)?.n0_bound;
        let r = run_classify(&ModelInput::Generate(spec), &ClassifyOptions { seed: s, ..Default::default() })?;
        tally.absorb(&r);
        let id = r.operator_id.clone();
        let n0 = r.verdict(Notion::UniformEventual).and_then(|v| v.status.n0());
        tally.expect(n0.is_some_and(|n| n <= bound), || format!("{id}: uniform-eventual n0 {n0:?}, bound {bound}"));
        for name in ["spr-in-spectrum", "positive-eigenvector", "peripheral-cyclicity"] {
            let c = r.check(name);
            tally.expect(c.is_some_and(|c| c.pass && c.applicable), || format!("{id}: check {name} failed"));
        }
        let singleton = r
            .check("peripheral-cyclicity")
            .and_then(|c| c.payload.get("peripheral"))
            .and_then(|p| p.as_array())
            .is_some_and(|p| p.len() == 1);
        tally.expect(singleton, || format!("{id}: peripheral spectrum is not a singleton"));
        reports.push(r);
    }
    Ok(reports)
}

fn random_complex(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
    (0..len).map(|_| Complex64::new(2.0 * rng.random::<f64>() - 1.0, 2.0 * rng.random::<f64>() - 1.0)).collect()
}

const SWEEP_NORMS: [NormKind; 3] = [NormKind::Ell1, NormKind::Ell2, NormKind::EllInf];

fn property_sweep(seed: u64, trials: u64, tally: &mut Tally) -> Result<()> {
    for trial in 0..trials {
        let mut rng = seeded_rng(seed, trial);
        let dim = 1 + (rng.next_u64() % SWEEP_MAX_DIM as u64) as usize;
        let norm = SWEEP_NORMS[(trial % 3) as usize].clone();
        let x = LatticeVector::new(random_complex(&mut rng, dim), norm)?;
        tally.summary.instances += 1;

        let c = verifier::real_modulus_bound_check(&x)?;
        tally.expect(c.pass, || format!("trial {trial}: real modulus bound margin {:e}", c.margin));

        if dim <= ORACLE_MAX_DIM {
            let exact = cone_distance(&x);
            let oracle = cone_distance_oracle(&x, ORACLE_RESOLUTION)?;
            let ok = exact <= oracle + 1e-12 && oracle - exact <= dim as f64 * ORACLE_RESOLUTION;
            tally.expect(ok, || format!("trial {trial}: cone distance {exact} vs oracle {oracle}"));
        }

        match trial % MATRIX_EVERY {
            0 => attainment_property(&mut rng, trial, tally)?,
            1 => rearrangement_property(&mut rng, trial, tally)?,
            2 => resolvent_property(&mut rng, trial, tally)?,
            _ => {}
        }
    }
    Ok(())
}

fn attainment_property(rng: &mut ChaCha8Rng, trial: u64, tally: &mut Tally) -> Result<()> {
    let dim = 1 + (rng.next_u64() % 8) as usize;
    let a = CMatrix::from_row_major(dim, random_complex(rng, dim * dim))?;
    for norm in &SWEEP_NORMS {
        let att = verifier::cone_norm_attainment(&a, norm)?;
        tally.expect(att.ratio >= 0.125 - 1e-12, || {
            format!("trial {trial}: norm attainment ratio {} on {}", att.ratio, norm.label())
        });
    }
    Ok(())
}

fn rearrangement_property(rng: &mut ChaCha8Rng, trial: u64, tally: &mut Tally) -> Result<()> {
    let len = 1 + (rng.next_u64() % 64) as usize;
    let f: Vec<f64> = {
        let mut f: Vec<f64> = (0..len).map(|_| rng.random::<f64>()).collect();
        f.sort_by(|a, b| b.total_cmp(a));
        f
    };
    // any sequence dominated entrywise by a decreasing f, in any order
    let mut a: Vec<f64> = f.iter().map(|v| v * rng.random::<f64>()).collect();
    for k in (1..len).rev() {
        a.swap(k, (rng.next_u64() % (k as u64 + 1)) as usize);
    }
    let star = decreasing_rearrangement(&a)?;
    let dominated = star.iter().zip(&f).all(|(s, v)| s <= v);
    let prefix_ok = (1..=len).all(|n| star[..n].iter().sum::<f64>() >= a[..n].iter().sum::<f64>() - 1e-12);
    let idempotent = decreasing_rearrangement(&star)? == star;
    tally.expect(dominated && prefix_ok && idempotent, || format!("trial {trial}: rearrangement domination"));
    Ok(())
}

fn resolvent_property(rng: &mut ChaCha8Rng, trial: u64, tally: &mut Tally) -> Result<()> {
    let dim = 2 + (rng.next_u64() % 5) as usize;
    let gap = 0.3 + 0.5 * rng.random::<f64>();
    let a = make_eventually_positive(dim, gap, rng.next_u64())?.matrix;
    let (s, _) = verifier::rescale_to_unit_spr(&a)?;
    let r = 1.05 + 2.0 * rng.random::<f64>();
    let lambda = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * rng.random::<f64>());
    let xs: Vec<f64> = (0..dim).map(|_| 1.0 - rng.random::<f64>()).collect();
    let x = LatticeVector::from_real(&xs, NormKind::Ell1)?;
    let c = verifier::resolvent_estimate_check(&s, lambda, &x, verifier::omega_truncation(r), 1e-10)?;
    tally.expect(c.pass, || format!("trial {trial}: resolvent estimate margin {:e}", c.margin));
    let decay = verifier::uniform_error_decay_check_with(&s, &NormKind::Ell1, &SWEEP_JS, &Measured::of(&s)?)?;
    tally.expect(decay.pass && decay.applicable, || {
        format!("trial {trial}: error decay {:?} {}", decay.flags, decay.payload)
    });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_property_sweep_is_clean() {
        let out = run_suite(SuiteKind::Properties, 1, 200).unwrap();
        assert!(out.summary.failures.is_empty(), "{:?}", out.summary.failures);
        assert_eq!(out.summary.exit_code(), EXIT_OK);
    }

    #[test]
    fn random_specs_are_in_range() {
        for t in 0..50 {
            let GeneratorSpec::EventuallyPositive { dim, gap, .. } = random_trial_spec(7, t) else { panic!() };
            assert!((2..=12).contains(&dim));
            assert!((0.3..0.8).contains(&gap));
        }
    }
}
