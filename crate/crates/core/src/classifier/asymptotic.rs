//! Asymptotic positivity of the rescaled powers `S^n = (T / spr)^n`.

use num_complex::Complex64;

use super::*;
use crate::lattice::entry_cone_gap;
use crate::operators::powu;
use crate::spectral;

/// Random samples used by [`classify_asymptotic`] when no exact sup exists.
const CLASSIFY_SAMPLES: usize = 32;
const ASCENT_ROUNDS: usize = 3;
/// Relative slack allowed in the non-decreasing refutation trend.
const TREND_SLACK: f64 = 1e-9;

/// `spr(T)`: closed form for diagonal, shift and rank-k models, eigenvalues
/// otherwise.
pub fn model_spectral_radius(t: &OperatorModel) -> Result<f64> {
    Ok(match t {
        OperatorModel::Diagonal(d) => d.symbol.iter().map(|s| s.norm()).fold(0.0, f64::max),
        OperatorModel::WeightedShift(_) => 0.0,
        OperatorModel::RankK(r) => r.lambdas().iter().map(|l| l.norm()).fold(0.0, f64::max),
        OperatorModel::Dense(d) => spectral::eigenvalues(&d.matrix, spectral::DEFAULT_TOL)?.spectral_radius,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "snake_case")]
pub enum DeltaStrategy {
    ExtremePoints,
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaEstimate {
    pub value: f64,
    /// `false` for Monte Carlo lower bounds.
    pub exact: bool,
    /// Positive unit vector with `d+(S^n x) = value`.
    pub attained_by: Vec<Complex64>,
}

/// The three asymptotic verdicts plus the spectral radius used to rescale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticVerdicts {
    pub uniform: PositivityVerdict,
    pub individual: PositivityVerdict,
    pub weak: PositivityVerdict,
    pub spectral_radius: f64,
}

impl AsymptoticVerdicts {
    pub fn as_array(&self) -> [&PositivityVerdict; 3] {
        [&self.uniform, &self.individual, &self.weak]
    }
}

fn rescaled_radius(t: &OperatorModel, tol: f64) -> Result<f64> {
    let spr = model_spectral_radius(t)?;
    if spr <= tol {
        return Err(Error::NotClassifiable { spr });
    }
    Ok(spr)
}

/// Calls `f(n, S^n)` for `n = 1..=horizon` (non-diagonal models).
fn for_each_power(
    t: &OperatorModel,
    spr: f64,
    horizon: u64,
    mut f: impl FnMut(u64, &CMatrix) -> Result<()>,
) -> Result<()> {
    let inv = Complex64::new(1.0 / spr, 0.0);
    match t {
        OperatorModel::RankK(r) => {
            for n in 1..=horizon {
                // closed form, rescaled term by term to avoid overflow
                let m = r.power_matrix(n).scale(Complex64::new(spr.powi(-(n.min(i32::MAX as u64) as i32)), 0.0));
                f(n, &m)?;
            }
        }
        _ => {
            let s = t.matrix().scale(inv);
            let mut m = s.clone();
            for n in 1..=horizon {
                f(n, &m)?;
                if n < horizon {
                    m = m.matmul(&s);
                }
            }
        }
    }
    Ok(())
}

fn unit(norm: &Arc<NormKind>, entries: Vec<Complex64>) -> Result<LatticeVector> {
    let x = LatticeVector::with_shared_norm(entries, Arc::clone(norm))?;
    let size = norm_value(&x);
    Ok(x.scale(Complex64::new(1.0 / size, 0.0)))
}

fn basis(norm: &Arc<NormKind>, dim: usize, j: usize) -> Result<LatticeVector> {
    let mut e = vec![Complex64::new(0.0, 0.0); dim];
    e[j] = Complex64::new(1.0, 0.0);
    unit(norm, e)
}

/// Exact `sup d+(S^n x)` for diagonal `S^n`, attained at a normalized basis vector.
fn delta_diagonal(powers: &[Complex64], norm: &Arc<NormKind>) -> Result<DeltaEstimate> {
    let (j, value) =
        powers.iter().map(|z| entry_cone_gap(*z)).enumerate().fold((0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
    Ok(DeltaEstimate { value, exact: true, attained_by: basis(norm, powers.len(), j)?.into_entries() })
}

/// `max_x sum_j x_j m_j` gap over `x in [0, 1]^n` for one row: the support
/// function of `[0, inf)`'s polar cone turns the sup into a maximum over
/// finitely many active sets.
fn row_sup(row: &[Complex64]) -> (f64, Vec<bool>) {
    use std::f64::consts::FRAC_PI_2;
    let mut cuts = vec![-FRAC_PI_2, FRAC_PI_2];
    for z in row {
        // -cos(t) re + sin(t) im changes sign at tan(t) = re / im
        if z.im != 0.0 {
            cuts.push((z.re / z.im).atan());
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut best = (0.0, vec![false; row.len()]);
    for w in cuts.windows(2) {
        let theta = 0.5 * (w[0] + w[1]);
        let (c, s) = (theta.cos(), theta.sin());
        let active: Vec<bool> = row.iter().map(|z| -c * z.re + s * z.im > 0.0).collect();
        let sum: Complex64 = row.iter().zip(&active).filter(|(_, a)| **a).map(|(z, _)| z).sum();
        let gap = entry_cone_gap(sum);
        if gap > best.0 {
            best = (gap, active);
        }
    }
    best
}

fn extreme_basis(m: &CMatrix, norm: &Arc<NormKind>) -> Result<DeltaEstimate> {
    let dim = m.dim();
    let mut best = (0.0, 0);
    for j in 0..dim {
        let e = basis(norm, dim, j)?;
        let d = cone_distance(&e.like(m.mul_vec(e.entries())));
        if d > best.0 {
            best = (d, j);
        }
    }
    Ok(DeltaEstimate { value: best.0, exact: true, attained_by: basis(norm, dim, best.1)?.into_entries() })
}

fn delta_of_matrix(m: &CMatrix, norm: &Arc<NormKind>, strategy: DeltaStrategy) -> Result<DeltaEstimate> {
    let dim = m.dim();
    match strategy {
        DeltaStrategy::ExtremePoints => match norm.as_ref() {
            NormKind::Ell1 => extreme_basis(m, norm),
            NormKind::LpQuadrature { p, .. } if *p == 1.0 => extreme_basis(m, norm),
            NormKind::EllInf | NormKind::GridSup { .. } => {
                let mut best = (0.0, vec![false; dim]);
                for i in 0..dim {
                    let row = m.row(i);
                    let r = row_sup(row);
                    if r.0 > best.0 {
                        best = r;
                    }
                }
                let one = Complex64::new(1.0, 0.0);
                let x: Vec<Complex64> =
                    best.1.iter().map(|&a| if a { one } else { Complex64::new(0.0, 0.0) }).collect();
                // re-evaluate on the attaining vector
                let value = if best.0 > 0.0 {
                    cone_distance(&LatticeVector::with_shared_norm(m.mul_vec(&x), Arc::clone(norm))?)
                } else {
                    0.0
                };
                let attained_by = if best.0 > 0.0 { x } else { vec![one; dim] };
                Ok(DeltaEstimate { value, exact: true, attained_by })
            }
            other => Err(Error::StrategyUnavailable(format!(
                "no finite extreme-point set for the positive unit ball of {}",
                other.label()
            ))),
        },
        DeltaStrategy::MonteCarlo { samples, seed } => monte_carlo(m, norm, samples, seed),
    }
}

fn monte_carlo(m: &CMatrix, norm: &Arc<NormKind>, samples: usize, seed: u64) -> Result<DeltaEstimate> {
    let dim = m.dim();
    let eval = |x: &[f64]| -> Result<(f64, LatticeVector)> {
        let v = unit(norm, x.iter().map(|&t| Complex64::new(t, 0.0)).collect())?;
        let d = cone_distance(&v.like(m.mul_vec(v.entries())));
        Ok((d, v))
    };
    let mut best: (f64, Vec<f64>) = (-1.0, vec![1.0; dim]);
    let mut candidates: Vec<Vec<f64>> = (0..dim)
        .map(|j| {
            let mut e = vec![0.0; dim];
            e[j] = 1.0;
            e
        })
        .collect();
    for k in 0..samples {
        let mut rng = seeded_rng(seed, k as u64);
        candidates.push((0..dim).map(|_| 1.0 - rng.random::<f64>()).collect());
    }
    for x in candidates {
        let (d, _) = eval(&x)?;
        if d > best.0 {
            best = (d, x);
        }
    }
    // coordinate ascent on the best sample
    for _ in 0..ASCENT_ROUNDS {
        let mut improved = false;
        for j in 0..dim {
            let cur = best.1[j];
            for trial in [0.0, 2.0 * cur + 0.5, 0.5 * cur] {
                if trial == cur {
                    continue;
                }
                let mut x = best.1.clone();
                x[j] = trial;
                if x.iter().all(|&t| t == 0.0) {
                    continue;
                }
                let (d, _) = eval(&x)?;
                if d > best.0 * (1.0 + 1e-12) {
                    best = (d, x);
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
    let (value, v) = eval(&best.1)?;
    Ok(DeltaEstimate { value, exact: false, attained_by: v.into_entries() })
}

/// `delta_n = sup { d+(S^n x) : x >= 0, |x| <= 1 }` with `S = T / spr(T)`.
pub fn delta_n(t: &OperatorModel, n: u64, strategy: DeltaStrategy) -> Result<DeltaEstimate> {
    let spr = rescaled_radius(t, 0.0)?;
    let norm = Arc::new(t.norm_kind().clone());
    if let OperatorModel::Diagonal(d) = t {
        let p: Vec<Complex64> = d.symbol.iter().map(|s| powu(s / spr, n)).collect();
        return delta_diagonal(&p, &norm);
    }
    if n == 0 {
        return delta_of_matrix(&CMatrix::identity(t.dim()), &norm, strategy);
    }
    let m = match t {
        OperatorModel::RankK(r) => r.power_matrix(n).scale(Complex64::new(spr.powf(-(n as f64)), 0.0)),
        _ => t.matrix().scale(Complex64::new(1.0 / spr, 0.0)).pow(n),
    };
    delta_of_matrix(&m, &norm, strategy)
}

/// `delta_0..=delta_horizon`.
pub fn delta_sequence(t: &OperatorModel, horizon: u64, strategy: DeltaStrategy) -> Result<Vec<DeltaEstimate>> {
    let spr = rescaled_radius(t, 0.0)?;
    let norm = Arc::new(t.norm_kind().clone());
    if let OperatorModel::Diagonal(d) = t {
        return (0..=horizon)
            .map(|n| {
                let p: Vec<Complex64> = d.symbol.iter().map(|s| powu(s / spr, n)).collect();
                delta_diagonal(&p, &norm)
            })
            .collect();
    }
    let mut out = vec![delta_of_matrix(&CMatrix::identity(t.dim()), &norm, strategy)?];
    for_each_power(t, spr, horizon, |_, m| {
        out.push(delta_of_matrix(m, &norm, strategy)?);
        Ok(())
    })?;
    Ok(out)
}

/// Upper bound `|G(S^n)|` from the entrywise gap matrix (sublinearity of
/// the entry gap plus monotonicity of the lattice norm).
fn gap_matrix_bound(m: &CMatrix, norm: &NormKind) -> f64 {
    let n = m.dim();
    let g = CMatrix::from_fn(n, |i, j| Complex64::new(entry_cone_gap(m[(i, j)]), 0.0));
    let col = |g: &CMatrix| (0..n).map(|j| (0..n).map(|i| g[(i, j)].re).sum::<f64>()).fold(0.0, f64::max);
    let row = |g: &CMatrix| (0..n).map(|i| (0..n).map(|j| g[(i, j)].re).sum::<f64>()).fold(0.0, f64::max);
    match norm {
        NormKind::Ell1 => col(&g),
        NormKind::EllInf | NormKind::GridSup { .. } => row(&g),
        NormKind::Ell2 => spectral::spectral_norm(&g),
        NormKind::LpQuadrature { p, weights, .. } => {
            // |G|_{L^p(w)} = |D G D^-1|_p with D = diag(w^(1/p)), then Riesz-Thorin
            let d: Vec<f64> = weights.iter().map(|w| w.powf(1.0 / p)).collect();
            let h = CMatrix::from_fn(n, |i, j| g[(i, j)] * (d[i] / d[j]));
            let (c1, ci) = (col(&h), row(&h));
            c1.powf(1.0 / p) * ci.powf(1.0 - 1.0 / p)
        }
    }
}

/// Verdict from a decay sequence: Confirmed when the last quarter stays
/// below `tol`, Refuted when the block maxima of the last half stay above
/// `REFUTE_FACTOR * tol` without decreasing.
fn decide(decay: &[f64], tol: f64, horizon: u64) -> (Status, Option<Vec<(u64, f64)>>) {
    let h = horizon as usize;
    let quarter_start = h - h / 4;
    if decay[quarter_start..].iter().all(|&d| d <= tol) {
        let n0 = decay.iter().rposition(|&d| d > tol).map_or(0, |k| k + 1) as u64;
        return (Status::Confirmed { n0 }, None);
    }
    let half = h / 2 + 1;
    let tail = &decay[half..];
    if tail.len() >= 4 {
        let block = tail.len() / 4;
        let maxima: Vec<f64> = (0..4)
            .map(|b| {
                let end = if b == 3 { tail.len() } else { (b + 1) * block };
                tail[b * block..end].iter().copied().fold(0.0, f64::max)
            })
            .collect();
        let high = maxima.iter().all(|&m| m >= REFUTE_FACTOR * tol);
        let trend = maxima.windows(2).all(|w| w[1] >= w[0] * (1.0 - TREND_SLACK));
        if high && trend {
            let pts = tail.iter().enumerate().map(|(k, &d)| ((half + k) as u64, d)).collect();
            return (Status::Undetermined { horizon }, Some(pts));
        }
    }
    (Status::Undetermined { horizon }, None)
}

pub fn classify_asymptotic(
    t: &OperatorModel,
    horizon: u64,
    tol: f64,
    tests: &ConeTestSet,
) -> Result<AsymptoticVerdicts> {
    if horizon < 4 {
        return Err(Error::InvalidArgument("asymptotic horizon must be at least 4".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    if tests.vectors.is_empty() || tests.functionals.is_empty() {
        return Err(Error::InvalidArgument("the cone test set needs vectors and functionals".into()));
    }
    for x in &tests.vectors {
        if x.dim() != t.dim() {
            return Err(Error::DimensionMismatch { expected: t.dim(), actual: x.dim() });
        }
    }
    let spr = rescaled_radius(t, tol)?;
    let norm = Arc::new(t.norm_kind().clone());
    let h = horizon as usize;

    // uniform: exact where the geometry allows, else bracketed
    let mut uniform_decay = vec![0.0; h + 1];
    let mut upper = vec![0.0; h + 1];
    let mut attained: Vec<Vec<Complex64>> = vec![Vec::new(); h + 1];
    let exact_uniform = match norm.as_ref() {
        NormKind::Ell1 | NormKind::EllInf | NormKind::GridSup { .. } => true,
        NormKind::LpQuadrature { p, .. } => *p == 1.0,
        NormKind::Ell2 => false,
    };
    let mut notes = Vec::new();
    if let OperatorModel::Diagonal(d) = t {
        for n in 1..=horizon {
            let p: Vec<Complex64> = d.symbol.iter().map(|s| powu(s / spr, n)).collect();
            let e = delta_diagonal(&p, &norm)?;
            uniform_decay[n as usize] = e.value;
            attained[n as usize] = e.attained_by;
        }
    } else if exact_uniform {
        for_each_power(t, spr, horizon, |n, m| {
            let e = delta_of_matrix(m, &norm, DeltaStrategy::ExtremePoints)?;
            uniform_decay[n as usize] = e.value;
            attained[n as usize] = e.attained_by;
            Ok(())
        })?;
    } else {
        for_each_power(t, spr, horizon, |n, m| {
            upper[n as usize] = gap_matrix_bound(m, &norm);
            Ok(())
        })?;
        let quarter = h - h / 4;
        if upper[quarter..].iter().all(|&d| d <= tol) {
            uniform_decay = upper.clone();
            notes.push("uniform decay is the gap-matrix upper bound".to_string());
        } else {
            for_each_power(t, spr, horizon, |n, m| {
                let e = monte_carlo(m, &norm, CLASSIFY_SAMPLES, n)?;
                uniform_decay[n as usize] = e.value;
                attained[n as usize] = e.attained_by;
                Ok(())
            })?;
            notes.push("uniform decay is a Monte Carlo lower bound".to_string());
        }
    }
    let uniform_status = match decide(&uniform_decay, tol, horizon) {
        (s, None) => s,
        (_, Some(tail)) => {
            // fix the vector attaining the latest tail maximum and report its own orbit
            let peak = tail.iter().rev().max_by(|a, b| a.1.total_cmp(&b.1)).map_or(h, |p| p.0 as usize);
            let x = LatticeVector::with_shared_norm(attained[peak].clone(), Arc::clone(&norm))?;
            let size = norm_value(&x);
            let tail = tail
                .iter()
                .map(|&(n, _)| {
                    let y = t.power_apply(n, &x)?.scale(Complex64::new(spr.powf(-(n as f64)), 0.0));
                    Ok((n, cone_distance(&y) / size))
                })
                .collect::<Result<Vec<_>>>()?;
            Status::Refuted { witness: Witness::Decay { vector: x.into_entries(), functional: None, tail } }
        }
    };
    let mut uniform = PositivityVerdict::new(Notion::UniformAsymptotic, uniform_status, uniform_decay, tol, horizon);
    uniform.notes = notes;

    // individual and weak from the orbits of the test vectors
    let inv = Complex64::new(1.0 / spr, 0.0);
    let duals = match t {
        OperatorModel::RankK(r) => Some(super::rank_k_duals(r, &tests.functionals)?),
        _ => None,
    };
    let mut ind_rows = Vec::with_capacity(tests.vectors.len());
    let mut weak_rows: Vec<Vec<f64>> = Vec::new();
    for x in &tests.vectors {
        let mut d = vec![cone_distance(x) / norm_value(x)];
        let mut w: Vec<Vec<f64>> =
            tests.functionals.iter().map(|f| f.apply(x).map(|p| vec![entry_cone_gap(p)])).collect::<Result<_>>()?;
        let mut y = x.clone();
        for n in 1..=horizon {
            y = match t {
                OperatorModel::RankK(_) => t.power_apply(n, x)?.scale(Complex64::new(spr.powf(-(n as f64)), 0.0)),
                _ => t.apply(&y)?.scale(inv),
            };
            d.push(cone_distance(&y) / norm_value(x));
            if let (OperatorModel::RankK(r), Some(duals)) = (t, &duals) {
                // <x', S^n x> = spr^-n sum_i c_i lambda_i^(n-1) <x', f_i>
                let scale = spr.powf(-(n as f64));
                let kappa: Vec<Complex64> = r
                    .lambdas()
                    .into_iter()
                    .zip(r.coefficients(x.entries()))
                    .map(|(lam, c)| c * powu(lam, n - 1) * scale)
                    .collect();
                for (l, row) in duals.iter().enumerate() {
                    w[l].push(entry_cone_gap(kappa.iter().zip(row).map(|(k, d)| k * d).sum()));
                }
            } else {
                for (l, f) in tests.functionals.iter().enumerate() {
                    w[l].push(entry_cone_gap(f.apply(&y)?));
                }
            }
        }
        ind_rows.push(d);
        weak_rows.extend(w);
    }
    let worst =
        |rows: &[Vec<f64>]| -> Vec<f64> { (0..=h).map(|n| rows.iter().map(|r| r[n]).fold(0.0, f64::max)).collect() };
    let witness_row = |rows: &[Vec<f64>]| -> usize {
        // the row with the largest tail maximum
        (0..rows.len())
            .max_by(|&a, &b| {
                let ta = rows[a][h / 2 + 1..].iter().copied().fold(0.0, f64::max);
                let tb = rows[b][h / 2 + 1..].iter().copied().fold(0.0, f64::max);
                ta.total_cmp(&tb).then(b.cmp(&a))
            })
            .unwrap_or(0)
    };
    let ind_decay = worst(&ind_rows);
    let ind_status = match decide(&ind_decay, tol, horizon) {
        (s, None) => s,
        (_, Some(_)) => {
            let k = witness_row(&ind_rows);
            let tail = ind_rows[k].iter().enumerate().skip(h / 2 + 1).map(|(n, &v)| (n as u64, v)).collect();
            Status::Refuted {
                witness: Witness::Decay { vector: tests.vectors[k].entries().to_vec(), functional: None, tail },
            }
        }
    };
    let mut individual = PositivityVerdict::new(Notion::IndividualAsymptotic, ind_status, ind_decay, tol, horizon);
    individual.per_test_n0 = ind_rows
        .iter()
        .map(|r| {
            let (s, _) = decide(r, tol, horizon);
            s.n0()
        })
        .collect();

    let weak_decay = worst(&weak_rows);
    let weak_status = match decide(&weak_decay, tol, horizon) {
        (s, None) => s,
        (_, Some(_)) => {
            let k = witness_row(&weak_rows);
            let nf = tests.functionals.len();
            let tail = weak_rows[k].iter().enumerate().skip(h / 2 + 1).map(|(n, &v)| (n as u64, v)).collect();
            Status::Refuted {
                witness: Witness::Decay {
                    vector: tests.vectors[k / nf].entries().to_vec(),
                    functional: Some(tests.functionals[k % nf].entries().to_vec()),
                    tail,
                },
            }
        }
    };
    let weak = PositivityVerdict::new(Notion::WeakAsymptotic, weak_status, weak_decay, tol, horizon);
    Ok(AsymptoticVerdicts { uniform, individual, weak, spectral_radius: spr })
}
