//! Numerical checks of the Perron-Frobenius type conclusions on dense
//! matrices. Theorem-type checks measure their own hypotheses and attach
//! them, so a failed conclusion with unmet hypotheses is not a contradiction.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::classifier::{self, AsymptoticVerdicts, ConeTestSet};
use crate::error::{Error, Result};
use crate::lattice::{complex_modulus, cone_distance, norm_value, real_part, LatticeVector, NormKind};
use crate::matrix::CMatrix;
use crate::operators::OperatorModel;
use crate::spectral::{self, Svd};

/// Omega series are truncated once `r^-N` drops below this.
pub const OMEGA_TAIL: f64 = 1e-8;
/// Horizon for the measured power-boundedness hypothesis.
pub const POWER_HORIZON: u64 = 200;
const PHASE_GRID: usize = 256;
/// Flag on a failed conclusion whose measured hypotheses do not hold.
pub const NO_CONTRADICTION: &str = "hypotheses unmet: no contradiction";
const EIGEN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    /// Signed slack; positive means satisfied with room.
    pub margin: f64,
    pub tolerance: f64,
    pub payload: Value,
    #[serde(default)]
    pub hypotheses: Vec<Hypothesis>,
    /// `false` when a precondition of the check itself is unmet.
    pub applicable: bool,
    #[serde(default)]
    pub flags: Vec<String>,
}

impl CheckResult {
    pub fn new(name: &str, margin: f64, tolerance: f64, payload: Value) -> Self {
        // keep reports JSON-representable
        let margin = if margin.is_nan() { f64::MIN } else { margin.clamp(f64::MIN, f64::MAX) };
        Self {
            name: name.to_string(),
            pass: margin >= -tolerance,
            margin,
            tolerance,
            payload,
            hypotheses: Vec::new(),
            applicable: true,
            flags: Vec::new(),
        }
    }

    fn with_hypotheses(mut self, hypotheses: Vec<Hypothesis>) -> Self {
        self.hypotheses = hypotheses;
        self
    }

    pub fn hypotheses_hold(&self) -> bool {
        self.hypotheses.iter().all(|h| h.holds)
    }

    /// Failed conclusion while every measured hypothesis holds.
    pub fn is_contradiction(&self) -> bool {
        self.applicable && !self.pass && self.hypotheses_hold()
    }
}

pub fn contradiction_count(checks: &[CheckResult]) -> usize {
    checks.iter().filter(|c| c.is_contradiction()).count()
}

fn cjson(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// `(A / spr(A), spr(A))`
pub fn rescale_to_unit_spr(a: &CMatrix) -> Result<(CMatrix, f64)> {
    let spr = spectral::eigenvalues(a, spectral::DEFAULT_TOL)?.spectral_radius;
    if spr == 0.0 {
        return Err(Error::NotClassifiable { spr });
    }
    Ok((a.scale(Complex64::new(1.0 / spr, 0.0)), spr))
}

/// Asymptotic verdicts of `a` on `l^1` with the canonical test set; the
/// notions do not depend on the (equivalent) norm in finite dimension.
pub fn measured_asymptotic(a: &CMatrix) -> Result<Option<AsymptoticVerdicts>> {
    let t = OperatorModel::dense(a.clone(), NormKind::Ell1)?;
    let tests = ConeTestSet::canonical(&NormKind::Ell1, a.dim(), 0)?;
    match classifier::classify_asymptotic(&t, classifier::DEFAULT_ASYMPTOTIC_HORIZON, classifier::DEFAULT_TOL, &tests) {
        Ok(v) => Ok(Some(v)),
        Err(Error::NotClassifiable { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn verdict_hypothesis(
    name: &str,
    verdicts: &Option<AsymptoticVerdicts>,
    pick: fn(&AsymptoticVerdicts) -> &classifier::PositivityVerdict,
) -> Hypothesis {
    match verdicts {
        Some(v) => {
            let status = &pick(v).status;
            Hypothesis { name: name.into(), holds: status.is_confirmed(), detail: status.label().into() }
        }
        None => Hypothesis { name: name.into(), holds: false, detail: "spectral radius is zero".into() },
    }
}

fn uniform_hypothesis(v: &Option<AsymptoticVerdicts>) -> Hypothesis {
    verdict_hypothesis("uniformly asymptotically positive", v, |v| &v.uniform)
}

fn weak_hypothesis(v: &Option<AsymptoticVerdicts>) -> Hypothesis {
    verdict_hypothesis("weakly asymptotically positive", v, |v| &v.weak)
}

fn power_bounded_hypothesis(a: &CMatrix) -> Result<Hypothesis> {
    Ok(match power_bounded_estimate(a, POWER_HORIZON) {
        Ok(p) => Hypothesis {
            name: "power-bounded rescaling".into(),
            holds: p.power_bounded,
            detail: format!("sup_n<={POWER_HORIZON} |S^n| = {:.6e}", p.sup_norm),
        },
        Err(Error::NotClassifiable { .. }) => Hypothesis {
            name: "power-bounded rescaling".into(),
            holds: false,
            detail: "spectral radius is zero".into(),
        },
        Err(e) => return Err(e),
    })
}

/// Hypotheses measured once per matrix and shared by several checks.
#[derive(Debug, Clone)]
pub struct Measured {
    pub asymptotic: Option<AsymptoticVerdicts>,
    pub power_bounded: Hypothesis,
}

impl Measured {
    pub fn of(a: &CMatrix) -> Result<Self> {
        Ok(Self { asymptotic: measured_asymptotic(a)?, power_bounded: power_bounded_hypothesis(a)? })
    }
}

/// `spr(A)` lies in the spectrum: distance to the nearest eigenvalue at most `tol spr`.
pub fn verify_spr_in_spectrum(a: &CMatrix, tol: f64) -> Result<CheckResult> {
    verify_spr_in_spectrum_with(a, tol, &Measured::of(a)?)
}

pub fn verify_spr_in_spectrum_with(a: &CMatrix, tol: f64, m: &Measured) -> Result<CheckResult> {
    let spec = spectral::eigenvalues(a, spectral::DEFAULT_TOL)?;
    let spr = spec.spectral_radius;
    if spr == 0.0 {
        let mut c = CheckResult::new("spr-in-spectrum", 0.0, 0.0, json!({ "spectral_radius": 0.0 }));
        c.flags.push("vacuous: zero spectral radius".into());
        return Ok(c);
    }
    let target = Complex64::new(spr, 0.0);
    let nearest = spec
        .eigenvalues
        .iter()
        .copied()
        .min_by(|x, y| (x - target).norm().total_cmp(&(y - target).norm()))
        .unwrap_or(target);
    let distance = (nearest - target).norm();
    let payload = json!({
        "spectral_radius": spr,
        "nearest_eigenvalue": cjson(nearest),
        "distance": distance,
    });
    let hyp = uniform_hypothesis(&m.asymptotic);
    let mut c = CheckResult::new("spr-in-spectrum", tol * spr - distance, 0.0, payload).with_hypotheses(vec![hyp]);
    if !c.pass && !c.hypotheses_hold() {
        c.flags.push(NO_CONTRADICTION.into());
    }
    Ok(c)
}

/// Terms needed so that `r^-N <= OMEGA_TAIL`.
pub fn omega_truncation(r: f64) -> usize {
    (OMEGA_TAIL.ln() / -r.ln()).ceil().max(1.0) as usize
}

/// `omega(r, x) = sum_{n <= N} r^-(n+1) (|A^n x| - Re A^n x)` with the tail bound
/// `2 sup_n |A^n x| r^-(N+1) / (r - 1)`. `A` should already have `spr = 1`.
pub fn omega(a: &CMatrix, r: f64, x: &LatticeVector, n_trunc: usize) -> Result<(LatticeVector, f64)> {
    Ok(omega_many(a, &[(r, n_trunc)], x)?.remove(0))
}

/// [`omega`] at several `(r, N)` pairs from a single pass over the orbit.
pub fn omega_many(a: &CMatrix, points: &[(f64, usize)], x: &LatticeVector) -> Result<Vec<(LatticeVector, f64)>> {
    if let Some(&(r, _)) = points.iter().find(|(r, _)| !(*r > 1.0 && r.is_finite())) {
        return Err(Error::Domain(format!("omega needs r > 1, got {r}")));
    }
    if x.dim() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), actual: x.dim() });
    }
    let dim = a.dim();
    let n_max = points.iter().map(|p| p.1).max().unwrap_or(0);
    let mut acc = vec![vec![0.0; dim]; points.len()];
    let mut w: Vec<f64> = points.iter().map(|p| 1.0 / p.0).collect();
    let mut sup = vec![0.0f64; points.len()];
    let mut y = x.entries().to_vec();
    let mut moduli = vec![0.0; dim];
    for n in 0..=n_max {
        if n > 0 {
            y = a.mul_vec(&y);
        }
        for (m, z) in moduli.iter_mut().zip(&y) {
            *m = z.norm();
        }
        let size = x.norm_kind().norm_of_moduli(moduli.iter().copied());
        for (k, &(r, n_trunc)) in points.iter().enumerate() {
            if n > n_trunc {
                continue;
            }
            sup[k] = sup[k].max(size);
            for ((s, z), m) in acc[k].iter_mut().zip(&y).zip(&moduli) {
                *s += w[k] * (m - z.re);
            }
            w[k] /= r;
        }
    }
    Ok(points
        .iter()
        .enumerate()
        .map(|(k, &(r, n_trunc))| {
            let tail = 2.0 * sup[k] * r.powf(-((n_trunc + 1) as f64)) / (r - 1.0);
            (x.like(acc[k].iter().map(|&v| Complex64::new(v, 0.0)).collect()), tail)
        })
        .collect())
}

/// `|R(lambda) x| <= Re R(|lambda|) x + omega(|lambda|, x)` entrywise.
pub fn resolvent_estimate_check(
    a: &CMatrix,
    lambda: Complex64,
    x: &LatticeVector,
    n_trunc: usize,
    tol: f64,
) -> Result<CheckResult> {
    let r = lambda.norm();
    if !(r > 1.0 + 1e-6) {
        return Err(Error::InvalidArgument(format!("|lambda| = {r} must exceed 1 + 1e-6")));
    }
    let lhs = spectral::resolvent_apply(a, lambda, x)?;
    let re = spectral::resolvent_apply(a, Complex64::new(r, 0.0), x)?;
    let (om, tail) = omega(a, r, x, n_trunc)?;
    let slack: Vec<f64> =
        (0..a.dim()).map(|k| re.entries()[k].re + om.entries()[k].re - lhs.entries()[k].norm()).collect();
    let margin = slack.iter().copied().fold(f64::INFINITY, f64::min);
    let payload = json!({
        "lambda": cjson(lambda),
        "tail_bound": tail,
        "truncation": n_trunc,
        "entry_slack": slack,
    });
    Ok(CheckResult::new("resolvent-estimate", margin, tol + tail, payload))
}

/// Positive vectors spanning the cone's extreme rays for the check sweeps.
fn extreme_cone_set(norm: &NormKind, dim: usize) -> Result<Vec<LatticeVector>> {
    let shared = Arc::new(norm.clone());
    let mut out = Vec::new();
    let mut push = |v: Vec<f64>| -> Result<()> {
        let x =
            LatticeVector::with_shared_norm(v.iter().map(|&t| Complex64::new(t, 0.0)).collect(), Arc::clone(&shared))?;
        let s = norm_value(&x);
        out.push(x.scale(Complex64::new(1.0 / s, 0.0)));
        Ok(())
    };
    match norm {
        NormKind::EllInf | NormKind::GridSup { .. } if dim <= 12 => {
            for mask in 1u32..(1 << dim) {
                push((0..dim).map(|j| f64::from(mask >> j & 1)).collect())?;
            }
        }
        _ => {
            for j in 0..dim {
                let mut e = vec![0.0; dim];
                e[j] = 1.0;
                push(e)?;
            }
            push(vec![1.0; dim])?;
        }
    }
    Ok(out)
}

/// `m(r) = max_x (r - 1) |omega(r, x)|` along `r = 1 + 2^-j` must decrease
/// (10% slack) to at most 1% of its first value.
pub fn uniform_error_decay_check(a: &CMatrix, norm: &NormKind, js: &[i32]) -> Result<CheckResult> {
    uniform_error_decay_check_with(a, norm, js, &Measured::of(a)?)
}

pub fn uniform_error_decay_check_with(a: &CMatrix, norm: &NormKind, js: &[i32], m: &Measured) -> Result<CheckResult> {
    if js.is_empty() {
        return Err(Error::InvalidArgument("no r values requested".into()));
    }
    let hyp = uniform_hypothesis(&m.asymptotic);
    if !hyp.holds {
        // the decay estimate needs this; skip the sweep
        let mut c = CheckResult::new("uniform-error-decay", 0.0, 0.0, json!({})).with_hypotheses(vec![hyp]);
        c.applicable = false;
        c.flags.push("not applicable: the operator is not confirmed uniformly asymptotically positive".into());
        return Ok(c);
    }
    let Ok((s, spr)) = rescale_to_unit_spr(a) else {
        let mut c = CheckResult::new("uniform-error-decay", 0.0, 0.0, json!({}));
        c.applicable = false;
        c.flags.push("zero spectral radius".into());
        return Ok(c.with_hypotheses(vec![hyp]));
    };
    let xs = extreme_cone_set(norm, a.dim())?;
    let mut m = Vec::with_capacity(js.len());
    let mut tails = Vec::with_capacity(js.len());
    let points: Vec<(f64, usize)> = js
        .iter()
        .map(|&j| {
            let r = 1.0 + 2f64.powi(-j);
            (r, omega_truncation(r))
        })
        .collect();
    m.resize(js.len(), 0.0f64);
    tails.resize(js.len(), 0.0f64);
    for x in &xs {
        for (k, (om, tail)) in omega_many(&s, &points, x)?.into_iter().enumerate() {
            let scale = points[k].0 - 1.0;
            m[k] = m[k].max(scale * norm_value(&om));
            tails[k] = tails[k].max(scale * tail);
        }
    }
    let first = m[0];
    let last = *m.last().unwrap_or(&0.0);
    let monotone = m.windows(2).map(|w| 1.1 * w[0] - w[1]).fold(f64::INFINITY, f64::min);
    let margin = (1e-2 * first - last).min(monotone);
    let payload = json!({ "r_exponents": js, "m": m, "scaled_tail_bounds": tails, "spectral_radius": spr });
    let mut c = CheckResult::new("uniform-error-decay", margin, 0.0, payload).with_hypotheses(vec![hyp]);
    if !c.hypotheses_hold() {
        c.applicable = false;
        c.flags.push("not applicable: the operator is not confirmed uniformly asymptotically positive".into());
    }
    Ok(c)
}

/// `| |x| - Re x | <= 2 d+(x)`
pub fn real_modulus_bound_check(x: &LatticeVector) -> Result<CheckResult> {
    let lhs = norm_value(&complex_modulus(x).sub(&real_part(x))?);
    let d = cone_distance(x);
    let payload = json!({ "lhs": lhs, "cone_distance": d });
    Ok(CheckResult::new("real-modulus-bound", 2.0 * d - lhs, 1e-12 * norm_value(x), payload))
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormAttainment {
    /// Positive, `|x| <= 1`.
    pub x: LatticeVector,
    /// `|A x| / |A|`
    pub ratio: f64,
    pub flags: Vec<String>,
}

/// Positive `x` in the unit ball with `|A x| >= |A| / 8`, built from a
/// near-norming vector split into its four positive parts.
pub fn cone_norm_attainment(a: &CMatrix, norm: &NormKind) -> Result<NormAttainment> {
    let n = a.dim();
    let opnorm = match norm {
        NormKind::Ell1 | NormKind::EllInf | NormKind::Ell2 => spectral::operator_norm(a, norm)?,
        other => return Err(Error::UnsupportedNorm { op: "cone_norm_attainment", norm: other.label() }),
    };
    if opnorm == 0.0 {
        return Ok(NormAttainment {
            x: LatticeVector::zeros(n, norm.clone())?,
            ratio: 1.0,
            flags: vec!["zero operator".into()],
        });
    }
    let z: Vec<Complex64> = match norm {
        NormKind::Ell1 => {
            let j = (0..n)
                .max_by(|&p, &q| {
                    let s = |j: usize| a.column(j).iter().map(|v| v.norm()).sum::<f64>();
                    s(p).total_cmp(&s(q)).then(q.cmp(&p))
                })
                .unwrap_or(0);
            (0..n).map(|k| Complex64::new(if k == j { 1.0 } else { 0.0 }, 0.0)).collect()
        }
        NormKind::EllInf => {
            let i = (0..n)
                .max_by(|&p, &q| {
                    let s = |i: usize| a.row(i).iter().map(|v| v.norm()).sum::<f64>();
                    s(p).total_cmp(&s(q)).then(q.cmp(&p))
                })
                .unwrap_or(0);
            a.row(i)
                .iter()
                .map(|v| if v.norm() == 0.0 { Complex64::new(0.0, 0.0) } else { v.conj() / v.norm() })
                .collect()
        }
        _ => {
            let svd = Svd::compute(a);
            (0..n).map(|k| svd.v[(k, 0)]).collect()
        }
    };
    let pieces: [fn(Complex64) -> f64; 4] =
        [|z| z.re.max(0.0), |z| (-z.re).max(0.0), |z| z.im.max(0.0), |z| (-z.im).max(0.0)];
    let shared = Arc::new(norm.clone());
    let mut best: Option<(f64, LatticeVector)> = None;
    for piece in pieces {
        let v: Vec<Complex64> = z.iter().map(|&c| Complex64::new(piece(c), 0.0)).collect();
        let x = LatticeVector::with_shared_norm(v, Arc::clone(&shared))?;
        let value = norm_value(&x.like(a.mul_vec(x.entries())));
        if best.as_ref().is_none_or(|b| value > b.0) {
            best = Some((value, x));
        }
    }
    let (value, x) = best.expect("four pieces");
    Ok(NormAttainment { x, ratio: value / opnorm, flags: Vec::new() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenRoute {
    Laurent,
    Eigenbasis,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositiveEigenpair {
    pub value: f64,
    /// Phase-aligned, unit `l^1` norm.
    pub primal: LatticeVector,
    pub adjoint: LatticeVector,
    pub pole_order: usize,
    pub via: EigenRoute,
    /// Relative cone distances after phase alignment.
    pub primal_cone_distance: f64,
    pub adjoint_cone_distance: f64,
}

/// Best unimodular rotation of `v` towards the positive cone (`l^1`), as
/// `(rotated, relative distance)`: a 256-point phase grid, then golden
/// section refinement around the best grid point.
pub fn phase_align(v: &[Complex64]) -> Result<(LatticeVector, f64)> {
    let x = LatticeVector::new(v.to_vec(), NormKind::Ell1)?;
    let size = norm_value(&x);
    if size == 0.0 {
        return Err(Error::InvalidArgument("cannot align the zero vector".into()));
    }
    let dist = |theta: f64| cone_distance(&x.scale(Complex64::from_polar(1.0, theta))) / size;
    let step = 2.0 * PI / PHASE_GRID as f64;
    let k = (0..PHASE_GRID).min_by(|&p, &q| dist(p as f64 * step).total_cmp(&dist(q as f64 * step))).unwrap_or(0);
    let (mut lo, mut hi) = ((k as f64 - 1.0) * step, (k as f64 + 1.0) * step);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let (m1, m2) = (hi - g * (hi - lo), lo + g * (hi - lo));
        if dist(m1) <= dist(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let theta = 0.5 * (lo + hi);
    let theta = if dist(theta) <= dist(k as f64 * step) { theta } else { k as f64 * step };
    let rotated = x.scale(Complex64::from_polar(1.0 / size, theta));
    Ok((rotated, dist(theta)))
}

fn first_image(q: &CMatrix, tol: f64) -> Option<Vec<Complex64>> {
    let n = q.dim();
    let scale = q.max_abs();
    let mut candidates: Vec<Vec<Complex64>> =
        (0..n).map(|j| (0..n).map(|k| Complex64::new(if k == j { 1.0 } else { 0.0 }, 0.0)).collect()).collect();
    candidates.push(vec![Complex64::new(1.0, 0.0); n]);
    candidates.into_iter().map(|x| q.mul_vec(&x)).find(|y| y.iter().map(|z| z.norm()).fold(0.0, f64::max) > tol * scale)
}

fn accept(a: &CMatrix, value: f64, v: &[Complex64]) -> Result<(LatticeVector, f64)> {
    let (x, d) = phase_align(v)?;
    let residual = a.shifted(Complex64::new(value, 0.0)).mul_vec(x.entries());
    let res = residual.iter().map(|z| z.norm()).sum::<f64>();
    if res > EIGEN_TOL * norm_value(&x) * value.max(1.0) || d > EIGEN_TOL {
        return Err(Error::PositiveVectorNotFound(format!(
            "candidate has eigen-residual {res:e} and phase-aligned cone distance {d:e}"
        )));
    }
    Ok((x, d))
}

/// Positive eigenvectors of `A` and `A*` for `spr(A)`, from the leading
/// Laurent coefficient at `spr`, or from the eigenbasis when the
/// extrapolation fails.
pub fn positive_eigenvector(a: &CMatrix, tol: f64) -> Result<PositiveEigenpair> {
    let spec = spectral::eigenvalues(a, spectral::DEFAULT_TOL)?;
    let spr = spec.spectral_radius;
    if spr == 0.0 {
        return Err(Error::NotClassifiable { spr });
    }
    let target = Complex64::new(spr, 0.0);
    let distance = spec.distance(target);
    if distance > EIGEN_TOL * spr {
        return Err(Error::NotAnEigenvalue { lambda: target, distance });
    }
    let m = spectral::pole_order(a, target, spectral::DEFAULT_TOL)?;
    let laurent = spectral::laurent_leading_coefficient(a, spr, m).and_then(|q| {
        let p = first_image(&q, tol).ok_or_else(|| {
            Error::PositiveVectorNotFound(
                "every canonical positive vector is annihilated by the Laurent coefficient".into(),
            )
        })?;
        let d = first_image(&q.adjoint(), tol).ok_or_else(|| {
            Error::PositiveVectorNotFound(
                "every canonical positive vector is annihilated by the adjoint coefficient".into(),
            )
        })?;
        let (primal, pd) = accept(a, spr, &p)?;
        let (adjoint, ad) = accept(&a.adjoint(), spr, &d)?;
        Ok((primal, pd, adjoint, ad))
    });
    let (primal, primal_cone_distance, adjoint, adjoint_cone_distance, via) = match laurent {
        Ok((p, pd, d, ad)) => (p, pd, d, ad, EigenRoute::Laurent),
        Err(err) => {
            let pick = |mat: &CMatrix| -> Option<(LatticeVector, f64)> {
                spectral::eigenvectors(mat, target, spectral::DEFAULT_TOL).iter().find_map(|v| accept(mat, spr, v).ok())
            };
            match (pick(a), pick(&a.adjoint())) {
                (Some((p, pd)), Some((d, ad))) => (p, pd, d, ad, EigenRoute::Eigenbasis),
                _ => return Err(err),
            }
        }
    };
    Ok(PositiveEigenpair {
        value: spr,
        primal,
        adjoint,
        pole_order: m,
        via,
        primal_cone_distance,
        adjoint_cone_distance,
    })
}

/// [`positive_eigenvector`] as a check. Its hypotheses are `spr` lying in
/// the spectrum and weak asymptotic positivity; when they fail the check is
/// not applicable and the eigenvector is not sought.
pub fn positive_eigenvector_check_with(a: &CMatrix, tol: f64, m: &Measured) -> Result<CheckResult> {
    let spr_check = verify_spr_in_spectrum_with(a, tol, m)?;
    let hyps = vec![
        Hypothesis {
            name: "spectral radius in the spectrum".into(),
            holds: spr_check.pass && spr_check.flags.is_empty(),
            detail: format!("margin {:e}", spr_check.margin),
        },
        weak_hypothesis(&m.asymptotic),
    ];
    if !hyps.iter().all(|h| h.holds) {
        let mut c = CheckResult::new("positive-eigenvector", 0.0, 0.0, json!({})).with_hypotheses(hyps);
        c.applicable = false;
        c.flags.push("not applicable: hypotheses unmet".into());
        return Ok(c);
    }
    match positive_eigenvector(a, tol) {
        Ok(p) => {
            let worst = p.primal_cone_distance.max(p.adjoint_cone_distance);
            let payload = json!({
                "value": p.value,
                "pole_order": p.pole_order,
                "via": p.via,
                "primal": p.primal.entries().iter().map(|z| cjson(*z)).collect::<Vec<_>>(),
                "adjoint": p.adjoint.entries().iter().map(|z| cjson(*z)).collect::<Vec<_>>(),
                "primal_cone_distance": p.primal_cone_distance,
                "adjoint_cone_distance": p.adjoint_cone_distance,
            });
            Ok(CheckResult::new("positive-eigenvector", EIGEN_TOL - worst, 0.0, payload).with_hypotheses(hyps))
        }
        Err(Error::PositiveVectorNotFound(msg)) => {
            let mut c = CheckResult::new("positive-eigenvector", -1.0, 0.0, json!({ "diagnostics": msg }))
                .with_hypotheses(hyps);
            c.flags.push("no positive eigenvector found".into());
            Ok(c)
        }
        Err(e) => Err(e),
    }
}

/// `spr e^{ik theta}` is (near) an eigenvalue for every peripheral
/// `spr e^{i theta}` and `|k| <= K`.
pub fn peripheral_cyclicity_check(a: &CMatrix, k_max: i64, tol: f64) -> Result<CheckResult> {
    peripheral_cyclicity_check_with(a, k_max, tol, &Measured::of(a)?)
}

pub fn peripheral_cyclicity_check_with(a: &CMatrix, k_max: i64, tol: f64, m: &Measured) -> Result<CheckResult> {
    let spec = spectral::eigenvalues(a, spectral::DEFAULT_TOL)?;
    let spr = spec.spectral_radius;
    if spr == 0.0 {
        let mut c = CheckResult::new("peripheral-cyclicity", 0.0, 0.0, json!({}));
        c.applicable = false;
        c.flags.push("zero spectral radius".into());
        return Ok(c);
    }
    let peripheral = spectral::peripheral_spectrum(&spec, tol.max(1e-9));
    let mut tests = Vec::new();
    let mut margin = f64::INFINITY;
    for &lam in &peripheral {
        let theta = lam.arg();
        for k in -k_max..=k_max {
            let target = Complex64::from_polar(spr, k as f64 * theta);
            let nearest = spec
                .eigenvalues
                .iter()
                .copied()
                .min_by(|x, y| (x - target).norm().total_cmp(&(y - target).norm()))
                .unwrap_or(target);
            let d = (nearest - target).norm();
            margin = margin.min(tol * spr - d);
            tests.push(json!({ "lambda": cjson(lam), "k": k, "nearest": cjson(nearest), "distance": d }));
        }
    }
    let hyps = vec![m.power_bounded.clone(), uniform_hypothesis(&m.asymptotic)];
    let payload = json!({ "peripheral": peripheral.iter().map(|z| cjson(*z)).collect::<Vec<_>>(), "tests": tests });
    let mut c = CheckResult::new("peripheral-cyclicity", margin, 0.0, payload).with_hypotheses(hyps);
    if !c.pass && !c.hypotheses_hold() {
        c.flags.push(NO_CONTRADICTION.into());
    }
    Ok(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerBound {
    /// `max_{n <= horizon} |(A / spr)^n|_2`
    pub sup_norm: f64,
    /// `max_j (lambda - spr) |R(lambda, A)|_2` over `lambda = spr (1 + 2^-j)`, `j = 1..=14`.
    pub abel_sup: f64,
    /// Second-half maximum within 25% of the first-half maximum.
    pub power_bounded: bool,
}

pub fn power_bounded_estimate(a: &CMatrix, horizon: u64) -> Result<PowerBound> {
    if horizon < 2 {
        return Err(Error::InvalidArgument("horizon must be at least 2".into()));
    }
    let (s, spr) = rescale_to_unit_spr(a)?;
    let mut p = CMatrix::identity(a.dim());
    let mut first: f64 = 1.0;
    let mut second: f64 = 0.0;
    for n in 1..=horizon {
        p = p.matmul(&s);
        let v = spectral::spectral_norm(&p);
        if n <= horizon / 2 {
            first = first.max(v);
        } else {
            second = second.max(v);
        }
    }
    let mut abel_sup: f64 = 0.0;
    for j in 1..=14 {
        let h = spr * 2f64.powi(-j);
        let r = spectral::resolvent_matrix(a, Complex64::new(spr + h, 0.0))?;
        abel_sup = abel_sup.max(h * spectral::spectral_norm(&r));
    }
    Ok(PowerBound { sup_norm: first.max(second), abel_sup, power_bounded: second <= 1.25 * first })
}

/// `dim ker(spr e^{i theta} - A) <= dim ker(spr e^{i n theta} - A)` for every
/// peripheral eigenvalue and every `n` in `ns`.
pub fn multiplicity_monotonicity_check(a: &CMatrix, ns: &[i64], tol: f64) -> Result<CheckResult> {
    multiplicity_monotonicity_check_with(a, ns, tol, &Measured::of(a)?)
}

pub fn multiplicity_monotonicity_check_with(a: &CMatrix, ns: &[i64], tol: f64, m: &Measured) -> Result<CheckResult> {
    let spec = spectral::eigenvalues(a, spectral::DEFAULT_TOL)?;
    let spr = spec.spectral_radius;
    if spr == 0.0 {
        let mut c = CheckResult::new("multiplicity-monotonicity", 0.0, 0.0, json!({}));
        c.applicable = false;
        c.flags.push("zero spectral radius".into());
        return Ok(c);
    }
    let peripheral = spectral::peripheral_spectrum(&spec, tol.max(1e-9));
    let mut rows = Vec::new();
    let mut margin = f64::INFINITY;
    let mut cyclicity_failures = 0usize;
    for &lam in &peripheral {
        let base = spectral::geometric_multiplicity(a, lam, spectral::DEFAULT_TOL);
        for &n in ns {
            let target = Complex64::from_polar(spr, n as f64 * lam.arg());
            let nearest = spec
                .eigenvalues
                .iter()
                .copied()
                .min_by(|x, y| (x - target).norm().total_cmp(&(y - target).norm()))
                .unwrap_or(target);
            let d = (nearest - target).norm();
            if d > tol * spr {
                cyclicity_failures += 1;
                margin = margin.min(tol * spr - d);
                rows.push(json!({ "lambda": cjson(lam), "n": n, "target": cjson(target), "cyclicity_failure": true, "distance": d }));
                continue;
            }
            let power = spectral::geometric_multiplicity(a, target, spectral::DEFAULT_TOL);
            margin = margin.min(power as f64 - base as f64);
            rows.push(json!({ "lambda": cjson(lam), "n": n, "multiplicity": base, "power_multiplicity": power }));
        }
    }
    let hyps = vec![m.power_bounded.clone(), weak_hypothesis(&m.asymptotic)];
    let payload = json!({ "rows": rows, "cyclicity_failures": cyclicity_failures });
    let mut c = CheckResult::new("multiplicity-monotonicity", margin, 0.0, payload).with_hypotheses(hyps);
    if !c.pass && !c.hypotheses_hold() {
        c.flags.push(NO_CONTRADICTION.into());
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::builtin;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn spr_membership() {
        assert!(verify_spr_in_spectrum(&builtin::complex_diagonal(), 1e-8).unwrap().pass);
        let sym: Vec<Complex64> = (1..=50).map(|j| c(-1.0 + 1.0 / j as f64, 0.0)).collect();
        let r = verify_spr_in_spectrum(&CMatrix::diagonal(&sym), 1e-8).unwrap();
        assert!(!r.pass && !r.is_contradiction());
        assert!((r.payload["distance"].as_f64().unwrap() - 0.98).abs() < 1e-12);
    }

    #[test]
    fn omega_closed_form_on_complex_diagonal() {
        let a = builtin::complex_diagonal();
        let x = LatticeVector::from_real(&[0.0, 1.0], NormKind::Ell1).unwrap();
        let (om, tail) = omega(&a, 2.0, &x, 200).unwrap();
        // sum 2^-(n+1) (2^-n - Re (i/2)^n) = 2/3 - 1/2 Re(1 / (1 - i/4))
        let expect = 2.0 / 3.0 - 0.5 * (1.0 / c(1.0, -0.25)).re;
        assert!((om.entries()[1].re - expect).abs() < 1e-15);
        assert_eq!(om.entries()[0].re, 0.0);
        assert!(tail < 1e-50);
    }

    #[test]
    fn resolvent_estimate_on_diagonal() {
        let a = builtin::complex_diagonal();
        let x = LatticeVector::from_real(&[1.0, 1.0], NormKind::Ell1).unwrap();
        let r = resolvent_estimate_check(&a, c(0.0, 2.0), &x, omega_truncation(2.0), 1e-12).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn attainment_ratio() {
        let a = CMatrix::from_real_rows(&[&[-1.0]]).unwrap();
        let r = cone_norm_attainment(&a, &NormKind::Ell1).unwrap();
        assert_eq!(r.ratio, 1.0);
        assert_eq!(r.x.entries()[0], c(1.0, 0.0));
    }

    #[test]
    fn perron_pair() {
        let a = CMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        let p = positive_eigenvector(&a, 1e-10).unwrap();
        assert!((p.value - 3.0).abs() < 1e-12);
        assert!((p.primal.entries()[0] - c(0.5, 0.0)).norm() < 1e-8);
        let d = positive_eigenvector(&builtin::complex_diagonal(), 1e-10).unwrap();
        assert_eq!(d.pole_order, 1);
        assert!(d.primal.entries()[1].norm() < 1e-8 && d.adjoint.entries()[1].norm() < 1e-8);
    }

    #[test]
    fn cyclicity_and_multiplicity() {
        let p3 = builtin::cycle_permutation(3);
        assert!(peripheral_cyclicity_check(&p3, 6, 1e-8).unwrap().pass);
        let d = CMatrix::diagonal(&[c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0)]);
        let r = peripheral_cyclicity_check(&d, 4, 1e-8).unwrap();
        assert!(!r.pass && !r.is_contradiction());
        let two = builtin::direct_sum(&p3, &p3);
        let r = multiplicity_monotonicity_check(&two, &[1, 2, 3, 4], 1e-8).unwrap();
        assert!(r.pass, "{r:?}");
        let r = multiplicity_monotonicity_check(&d, &[3], 1e-8).unwrap();
        assert!(!r.pass && !r.is_contradiction());
    }

    #[test]
    fn jordan_block_not_power_bounded() {
        let j = CMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(!power_bounded_estimate(&j, 200).unwrap().power_bounded);
        let s = CMatrix::from_real_rows(&[&[0.5, 0.5], &[0.25, 0.75]]).unwrap();
        let p = power_bounded_estimate(&s, 200).unwrap();
        assert!(p.power_bounded);
        assert!(p.abel_sup <= p.sup_norm * (1.0 + 1e-8));
    }
}
