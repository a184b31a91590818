//! Eventual positivity: uniform, individual and weak.

use num_complex::Complex64;

use super::*;
use crate::lattice::entry_cone_gap;
use crate::operators::{analyze_real, powu};
use crate::spectral;

/// Diagonal symbol of a diagonal model or of a dense matrix with zero
/// off-diagonal part.
fn diagonal_symbol(t: &OperatorModel) -> Option<Vec<Complex64>> {
    match t {
        OperatorModel::Diagonal(d) => Some(d.symbol.clone()),
        OperatorModel::Dense(d) => {
            let m = &d.matrix;
            let n = m.dim();
            let off = (0..n).any(|i| (0..n).any(|j| i != j && m[(i, j)] != Complex64::new(0.0, 0.0)));
            (!off).then(|| (0..n).map(|i| m[(i, i)]).collect())
        }
        _ => None,
    }
}

/// `s` lies in `[0, inf)` up to `tol * scale`.
fn nonneg(s: Complex64, tol: f64, scale: f64) -> bool {
    s.re >= -tol * scale && s.im.abs() <= tol * scale
}

/// Sign of `sum_i w_i mu_i^n` for large `n`, from its dominant terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum EventualSign {
    Positive,
    NotPositive,
    Unknown,
}

pub(crate) fn eventual_sign(terms: &[(Complex64, Complex64)], tol: f64) -> EventualSign {
    let wmax = terms.iter().map(|(_, w)| w.norm()).fold(0.0, f64::max);
    let same = |a: Complex64, b: Complex64| (a - b).norm() <= 1e-12 * a.norm().max(b.norm());
    let mut merged: Vec<(Complex64, Complex64)> = Vec::new();
    for &(mu, w) in terms {
        if mu.norm() == 0.0 {
            continue;
        }
        match merged.iter_mut().find(|(m, _)| same(*m, mu)) {
            Some(entry) => entry.1 += w,
            None => merged.push((mu, w)),
        }
    }
    merged.retain(|(_, w)| w.norm() > tol * wmax);
    // the sum is real for all large n only if the terms come in conjugate pairs
    for &(mu, w) in &merged {
        let partner = merged.iter().find(|(m, _)| same(*m, mu.conj())).map_or(Complex64::new(0.0, 0.0), |p| p.1);
        if (w - partner.conj()).norm() > tol * wmax.max(f64::MIN_POSITIVE) {
            return EventualSign::NotPositive;
        }
    }
    let Some(r) = merged.iter().map(|(m, _)| m.norm()).reduce(f64::max) else {
        return EventualSign::Positive;
    };
    let dominant: Vec<&(Complex64, Complex64)> = merged.iter().filter(|(m, _)| m.norm() >= r * (1.0 - 1e-12)).collect();
    match dominant.as_slice() {
        [(mu, w)] => {
            // a single dominant term is real here; its sign decides
            if mu.re > 0.0 && w.re > 0.0 {
                EventualSign::Positive
            } else {
                EventualSign::NotPositive
            }
        }
        // one conjugate pair: 2|w| r^n cos(n theta + phi) changes sign forever
        [(a, _), (b, _)] if same(*a, b.conj()) && a.im != 0.0 => EventualSign::NotPositive,
        _ => EventualSign::Unknown,
    }
}

/// `(spr, nearest eigenvalue distance)` when the spectral radius is not an
/// eigenvalue, which rules out eventual positivity of every kind.
fn spectral_obstruction(t: &OperatorModel) -> Option<(f64, f64)> {
    if !matches!(t, OperatorModel::Dense(_) | OperatorModel::WeightedShift(_)) {
        return None;
    }
    let spec = spectral::eigenvalues(&t.matrix(), spectral::DEFAULT_TOL).ok()?;
    let r = spec.spectral_radius;
    if r <= 1e-12 {
        return None;
    }
    let d = spec.distance(Complex64::new(r, 0.0));
    (d > 1e-6 * r).then_some((r, d))
}

fn obstruction_reason(spr: f64, distance: f64) -> String {
    format!(
        "spr = {spr:.12e} is not an eigenvalue (nearest distance {distance:.3e}); an eventually positive matrix has its spectral radius in the spectrum"
    )
}

fn check_horizon(horizon: u64) -> Result<()> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    Ok(())
}

fn unit_vector(dim: usize, j: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); dim];
    v[j] = Complex64::new(1.0, 0.0);
    v
}

pub fn uniform_eventual(t: &OperatorModel, horizon: u64, tol: f64) -> Result<PositivityVerdict> {
    check_horizon(horizon)?;
    let notion = Notion::UniformEventual;
    if let Some(symbol) = diagonal_symbol(t) {
        let smax = symbol.iter().map(|s| s.norm()).fold(0.0, f64::max);
        let decay = (0..=horizon)
            .map(|n| {
                let pw: Vec<Complex64> = symbol.iter().map(|s| powu(*s, n)).collect();
                let scale = pw.iter().map(|z| z.norm()).fold(0.0, f64::max);
                if scale == 0.0 {
                    0.0
                } else {
                    pw.iter().map(|z| entry_cone_gap(*z)).fold(0.0, f64::max) / scale
                }
            })
            .collect();
        let bad = (0..symbol.len())
            .filter(|&j| !nonneg(symbol[j], tol, smax))
            .max_by(|&a, &b| symbol[a].norm().total_cmp(&symbol[b].norm()).then(b.cmp(&a)));
        let status = match bad {
            None => Status::Confirmed { n0: 0 },
            Some(j) => Status::Refuted { witness: diagonal_orbit(&symbol, j, horizon, tol) },
        };
        return Ok(PositivityVerdict::new(notion, status, decay, tol, horizon));
    }
    if let OperatorModel::RankK(r) = t {
        return rank_k_uniform(t, r, horizon, tol);
    }
    let a = t.matrix();
    let mut m = a.clone();
    let mut ok = vec![true];
    let mut decay = vec![0.0];
    let mut worst = Vec::new();
    for _ in 1..=horizon {
        let scale = m.max_abs();
        let w = worst_entry(&m);
        ok.push(scale == 0.0 || matrix_is_positive(&m, tol * scale));
        decay.push(if scale == 0.0 { 0.0 } else { w.3 / scale });
        worst.push(w);
        m = m.matmul(&a);
    }
    let n0 = first_stable(&ok) as u64;
    let status = if confirms(n0, horizon) {
        Status::Confirmed { n0 }
    } else if let Some((spr, dist)) = spectral_obstruction(t) {
        // entry of the last violation, tracked over the whole horizon
        let last = ok.iter().rposition(|b| !b).unwrap_or(1);
        let (row, col, _, _) = worst[last - 1];
        let mut samples = Vec::new();
        let mut p = a.clone();
        for n in 1..=horizon {
            let z = p[(row, col)];
            if !nonneg(z, tol, p.max_abs()) {
                samples.push(OrbitSample { n, value: z, gap: entry_cone_gap(z) });
            }
            p = p.matmul(&a);
        }
        Status::Refuted {
            witness: Witness::Orbit {
                vector: unit_vector(a.dim(), col),
                functional: None,
                row: Some(row),
                samples,
                reason: obstruction_reason(spr, dist),
            },
        }
    } else {
        Status::Undetermined { horizon }
    };
    Ok(PositivityVerdict::new(notion, status, decay, tol, horizon))
}

/// Orbit witness `T^n e_j = s_j^n e_j`.
fn diagonal_orbit(symbol: &[Complex64], j: usize, horizon: u64, tol: f64) -> Witness {
    let samples = (1..=horizon)
        .filter_map(|n| {
            let z = powu(symbol[j], n);
            let gap = entry_cone_gap(z);
            (gap > tol * z.norm()).then_some(OrbitSample { n, value: z, gap })
        })
        .collect();
    Witness::Orbit {
        vector: unit_vector(symbol.len(), j),
        functional: None,
        row: Some(j),
        samples,
        reason: format!(
            "diagonal entry {} = {} is not in [0, inf), so its powers leave the cone infinitely often",
            j, symbol[j]
        ),
    }
}

fn rank_k_uniform(t: &OperatorModel, r: &RankKModel, horizon: u64, tol: f64) -> Result<PositivityVerdict> {
    let notion = Notion::UniformEventual;
    let peaks = hat_peaks(r);
    // a peak whose hat family violates positivity at every n, structurally
    for &peak in &peaks {
        let mut samples = Vec::new();
        let mut point = None;
        for n in 1..=horizon {
            let eps = 2f64.powi(-(n.min(1000) as i32) - 1);
            let Some((_, x, value)) = hat_violation(r, &[peak], n, eps)? else { break };
            let half = r.power_value(&r.coefficients_hat(&Hat { peak, width: eps / 2.0 })?, n, x)?.re;
            if half > value * (1.0 - 1e-12) {
                break;
            }
            if point.is_some_and(|p: f64| p != x) {
                break;
            }
            point = Some(x);
            samples.push(HatSample { n, eps, value, value_half_width: half });
        }
        if samples.len() as u64 == horizon {
            let decay = std::iter::once(0.0).chain(samples.iter().map(|s| -s.value)).collect();
            let witness = Witness::HatFamily { peak, evaluation_point: point.unwrap_or(peak), samples };
            return Ok(PositivityVerdict::new(notion, Status::Refuted { witness }, decay, tol, horizon));
        }
    }
    let mut ok = vec![true];
    let mut decay = vec![0.0];
    for n in 1..=horizon {
        let m = t.power_matrix(n);
        let scale = m.max_abs();
        let mut good = scale == 0.0 || matrix_is_positive(&m, tol * scale);
        let mut gap = if scale == 0.0 { 0.0 } else { worst_entry(&m).3 / scale };
        let eps = 2f64.powi(-(n.min(1000) as i32) - 1);
        if let Some((_, _, v)) = hat_violation(r, &peaks, n, eps)? {
            good = false;
            gap = gap.max(-v);
        }
        ok.push(good);
        decay.push(gap);
    }
    let n0 = first_stable(&ok) as u64;
    let status = if confirms(n0, horizon) { Status::Confirmed { n0 } } else { Status::Undetermined { horizon } };
    Ok(PositivityVerdict::new(notion, status, decay, tol, horizon))
}

/// Orbit samples of `T^n x` for `n = 1..=horizon`.
fn orbit(t: &OperatorModel, x: &LatticeVector, horizon: u64) -> Result<Vec<LatticeVector>> {
    let mut out = Vec::with_capacity(horizon as usize);
    match t {
        OperatorModel::RankK(_) => {
            for n in 1..=horizon {
                out.push(t.power_apply(n, x)?);
            }
        }
        _ => {
            let mut y = x.clone();
            for _ in 1..=horizon {
                y = t.apply(&y)?;
                out.push(y.clone());
            }
        }
    }
    Ok(out)
}

fn worst_coordinate(y: &LatticeVector) -> (usize, Complex64, f64) {
    y.entries()
        .iter()
        .enumerate()
        .map(|(k, z)| (k, *z, entry_cone_gap(*z)))
        .fold((0, Complex64::new(0.0, 0.0), 0.0), |a, b| if b.2 > a.2 { b } else { a })
}

fn check_tests(t: &OperatorModel, tests: &ConeTestSet) -> Result<()> {
    if tests.vectors.is_empty() {
        return Err(Error::InvalidArgument("the cone test set has no vectors".into()));
    }
    for x in &tests.vectors {
        if x.dim() != t.dim() {
            return Err(Error::DimensionMismatch { expected: t.dim(), actual: x.dim() });
        }
    }
    for f in &tests.functionals {
        if f.dim() != t.dim() {
            return Err(Error::DimensionMismatch { expected: t.dim(), actual: f.dim() });
        }
    }
    Ok(())
}

pub fn individual_eventual(
    t: &OperatorModel,
    tests: &ConeTestSet,
    horizon: u64,
    tol: f64,
) -> Result<PositivityVerdict> {
    check_horizon(horizon)?;
    check_tests(t, tests)?;
    let notion = Notion::IndividualEventual;
    let symbol = diagonal_symbol(t);
    let smax = symbol.as_ref().map_or(0.0, |s| s.iter().map(|z| z.norm()).fold(0.0, f64::max));
    let mut decay = vec![0.0f64; horizon as usize + 1];
    let mut per_test = Vec::with_capacity(tests.vectors.len());
    let mut analytic_refutation = None;
    let mut exact_refutation = None;
    let mut orbit_violations: Vec<(usize, Vec<OrbitSample>, usize)> = Vec::new();
    for (idx, x) in tests.vectors.iter().enumerate() {
        let ys = orbit(t, x, horizon)?;
        let mut ok = vec![true];
        let mut points = Vec::new();
        let coef = match t {
            OperatorModel::RankK(r) => Some(r.coefficients(x.entries())),
            _ => None,
        };
        for (k, y) in ys.iter().enumerate() {
            let n = k as u64 + 1;
            let size = norm_value(y);
            let d = cone_distance(y);
            let mut good = d <= tol * size;
            let mut rel = if size == 0.0 { 0.0 } else { d / size };
            if let (OperatorModel::RankK(r), Some(c)) = (t, &coef) {
                if let Some(terms) = r.power_terms(c, n) {
                    let scale: f64 = terms.iter().map(|t| t.coef.norm()).sum();
                    let analysis = analyze_real(&terms);
                    if analysis.infimum < -tol * scale {
                        good = false;
                        rel = rel.max(if analysis.infimum.is_finite() { -analysis.infimum / scale } else { 1.0 });
                    }
                    if let Some((pt, _)) = analysis.witness {
                        let value = r.power_value(c, n, pt)?.re;
                        if value < -REFUTE_FACTOR * tol * scale {
                            points.push(PointSample { n, x: pt, value });
                        }
                    }
                }
            }
            ok.push(good);
            decay[k + 1] = decay[k + 1].max(rel);
        }
        per_test.push(Some(first_stable(&ok) as u64));
        if analytic_refutation.is_none() && points.len() as u64 == horizon {
            analytic_refutation = Some(Witness::AnalyticPoints {
                test_index: idx,
                coefficients: coef.clone().unwrap_or_default(),
                points,
            });
        }
        if let (Some(sym), None) = (&symbol, &exact_refutation) {
            let bad = (0..sym.len())
                .filter(|&j| x.entries()[j].norm() > 0.0 && !nonneg(sym[j], tol, smax))
                .max_by(|&a, &b| sym[a].norm().total_cmp(&sym[b].norm()).then(b.cmp(&a)));
            if let Some(j) = bad {
                let samples: Vec<OrbitSample> = ys
                    .iter()
                    .enumerate()
                    .filter_map(|(k, y)| {
                        let z = y.entries()[j];
                        let gap = entry_cone_gap(z);
                        let size = y.entries().iter().map(|v| v.norm()).fold(0.0, f64::max);
                        (gap > tol * size).then_some(OrbitSample { n: k as u64 + 1, value: z, gap })
                    })
                    .collect();
                exact_refutation = Some(Witness::Orbit {
                    vector: x.entries().to_vec(),
                    functional: None,
                    row: Some(j),
                    samples,
                    reason: format!(
                        "test vector {idx} charges diagonal entry {j} = {}, which is not in [0, inf)",
                        sym[j]
                    ),
                });
            }
        }
        let violations: Vec<(usize, OrbitSample)> = ys
            .iter()
            .enumerate()
            .filter(|(_, y)| cone_distance(y) > tol * norm_value(y))
            .map(|(k, y)| {
                let (row, z, gap) = worst_coordinate(y);
                (row, OrbitSample { n: k as u64 + 1, value: z, gap })
            })
            .collect();
        if let Some(&(row, _)) = violations.last() {
            orbit_violations.push((idx, violations.into_iter().map(|v| v.1).collect(), row));
        }
    }
    let n0 = per_test.iter().flatten().copied().max().unwrap_or(0);
    let status = if let Some(w) = analytic_refutation {
        Status::Refuted { witness: w }
    } else if let Some(w) = exact_refutation {
        Status::Refuted { witness: w }
    } else if confirms(n0, horizon) {
        Status::Confirmed { n0 }
    } else if let (Some((spr, dist)), Some((idx, samples, row))) = (
        spectral_obstruction(t),
        orbit_violations.iter().max_by_key(|(i, s, _)| (s.last().map(|v| v.n), std::cmp::Reverse(*i))),
    ) {
        let row_samples = samples.clone();
        Status::Refuted {
            witness: Witness::Orbit {
                vector: tests.vectors[*idx].entries().to_vec(),
                functional: None,
                row: None,
                samples: row_samples,
                reason: format!("{} (worst coordinate {row} at the last violation)", obstruction_reason(spr, dist)),
            },
        }
    } else {
        Status::Undetermined { horizon }
    };
    let mut verdict = PositivityVerdict::new(notion, status, decay, tol, horizon);
    verdict.per_test_n0 = per_test;
    Ok(verdict)
}

pub fn weak_eventual(t: &OperatorModel, tests: &ConeTestSet, horizon: u64, tol: f64) -> Result<PositivityVerdict> {
    check_horizon(horizon)?;
    check_tests(t, tests)?;
    if tests.functionals.is_empty() {
        return Err(Error::InvalidArgument("the cone test set has no functionals".into()));
    }
    let notion = Notion::WeakEventual;
    let symbol = diagonal_symbol(t);
    let quad: Option<Vec<f64>> = match t.norm_kind() {
        NormKind::LpQuadrature { weights, .. } => Some(weights.clone()),
        _ => None,
    };
    // dual pairings <x', f_i> for rank-k models
    let rank_k_duals = match t {
        OperatorModel::RankK(r) => Some(super::rank_k_duals(r, &tests.functionals)?),
        _ => None,
    };
    let mut decay = vec![0.0f64; horizon as usize + 1];
    let mut per_test = Vec::with_capacity(tests.vectors.len());
    let mut exact_refutation: Option<Witness> = None;
    let mut undecided_exact = false;
    let mut worst_pair: Option<(usize, usize, Vec<OrbitSample>)> = None;
    for (i, x) in tests.vectors.iter().enumerate() {
        let ys = orbit(t, x, horizon)?;
        let sizes: Vec<f64> = ys.iter().map(norm_value).collect();
        // rank-k pairings in closed form: <x', T^n x> = sum_i c_i lambda_i^(n-1) <x', f_i>
        let rank_k_terms = match t {
            OperatorModel::RankK(r) => {
                let c = r.coefficients(x.entries());
                Some(r.lambdas().into_iter().zip(c).collect::<Vec<_>>())
            }
            _ => None,
        };
        let mut test_n0 = 0u64;
        for (l, f) in tests.functionals.iter().enumerate() {
            let mut ok = vec![true];
            let mut samples = Vec::new();
            for (k, y) in ys.iter().enumerate() {
                let p = match (&rank_k_terms, &rank_k_duals) {
                    (Some(terms), Some(duals)) => {
                        terms.iter().zip(&duals[l]).map(|(&(lam, ci), di)| ci * powu(lam, k as u64) * di).sum()
                    }
                    _ => f.apply(y)?,
                };
                let size = sizes[k];
                let good = nonneg(p, tol, size);
                ok.push(good);
                let gap = entry_cone_gap(p);
                if size > 0.0 {
                    decay[k + 1] = decay[k + 1].max(gap / size);
                }
                if !good {
                    samples.push(OrbitSample { n: k as u64 + 1, value: p, gap });
                }
            }
            test_n0 = test_n0.max(first_stable(&ok) as u64);
            // exact eventual sign of the pairing sequence
            let terms: Option<Vec<(Complex64, Complex64)>> = if let Some(sym) = &symbol {
                Some(
                    (0..sym.len())
                        .map(|j| {
                            let w = match (f, &quad) {
                                (Functional::Vector(_), Some(q)) => q[j],
                                _ => 1.0,
                            };
                            (sym[j], f.entries()[j] * x.entries()[j] * w)
                        })
                        .collect(),
                )
            } else if let (OperatorModel::RankK(r), Some(duals)) = (t, &rank_k_duals) {
                let c = r.coefficients(x.entries());
                Some(r.lambdas().into_iter().zip(c).zip(&duals[l]).map(|((lam, ci), di)| (lam, ci * di)).collect())
            } else {
                None
            };
            if let Some(terms) = terms {
                match eventual_sign(&terms, 1e-12) {
                    EventualSign::NotPositive if exact_refutation.is_none() => {
                        let all: Vec<OrbitSample> = ys
                            .iter()
                            .enumerate()
                            .filter_map(|(k, y)| {
                                let p = f.apply(y).ok()?;
                                let gap = entry_cone_gap(p);
                                (gap > tol * norm_value(y)).then_some(OrbitSample { n: k as u64 + 1, value: p, gap })
                            })
                            .collect();
                        if !all.is_empty() {
                            exact_refutation = Some(Witness::Orbit {
                                vector: x.entries().to_vec(),
                                functional: Some(f.entries().to_vec()),
                                row: None,
                                samples: all,
                                reason: format!(
                                    "pairing of test vector {i} with functional {l} is a power sum whose dominant term is not eventually in [0, inf)"
                                ),
                            });
                        }
                    }
                    EventualSign::Unknown => undecided_exact = true,
                    _ => {}
                }
            }
            if let Some(last) = samples.last() {
                let better = worst_pair.as_ref().is_none_or(|(_, _, s)| s.last().is_none_or(|v| v.n < last.n));
                if better {
                    worst_pair = Some((i, l, samples));
                }
            }
        }
        per_test.push(Some(test_n0));
    }
    let n0 = per_test.iter().flatten().copied().max().unwrap_or(0);
    let status = if let Some(w) = exact_refutation {
        Status::Refuted { witness: w }
    } else if confirms(n0, horizon) {
        Status::Confirmed { n0 }
    } else if let (Some((spr, dist)), Some((i, l, samples))) = (spectral_obstruction(t), worst_pair) {
        Status::Refuted {
            witness: Witness::Orbit {
                vector: tests.vectors[i].entries().to_vec(),
                functional: Some(tests.functionals[l].entries().to_vec()),
                row: None,
                samples,
                reason: obstruction_reason(spr, dist),
            },
        }
    } else {
        Status::Undetermined { horizon }
    };
    let mut verdict = PositivityVerdict::new(notion, status, decay, tol, horizon);
    verdict.per_test_n0 = per_test;
    if undecided_exact {
        verdict
            .notes
            .push("some pairings have several dominant terms; their eventual sign was not decided exactly".into());
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::builtin;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn dominant_term_sign() {
        assert_eq!(eventual_sign(&[(c(1.0), c(1.0)), (c(-0.5), c(10.0))], 1e-12), EventualSign::Positive);
        assert_eq!(eventual_sign(&[(c(-0.98), c(1.0)), (c(0.5), c(1.0))], 1e-12), EventualSign::NotPositive);
        assert_eq!(eventual_sign(&[(c(1.0), c(1.0)), (c(-1.0), c(1.0))], 1e-12), EventualSign::Unknown);
        assert_eq!(eventual_sign(&[(c(0.0), c(-1.0))], 1e-12), EventualSign::Positive);
        let half_i = Complex64::new(0.0, 0.5);
        assert_eq!(eventual_sign(&[(c(1.0), c(1.0)), (half_i, c(1.0))], 1e-12), EventualSign::NotPositive);
        let pair = [(c(1.0), c(1.0)), (half_i, c(1.0)), (half_i.conj(), c(1.0))];
        assert_eq!(eventual_sign(&pair, 1e-12), EventualSign::Positive);
    }

    #[test]
    fn positive_matrix_confirms_at_zero() {
        let a = CMatrix::from_real_rows(&[&[1.0, 2.0], &[0.5, 0.1]]).unwrap();
        let t = OperatorModel::dense(a, NormKind::Ell1).unwrap();
        let tests = ConeTestSet::canonical(&NormKind::Ell1, 2, 1).unwrap();
        assert_eq!(uniform_eventual(&t, 30, 1e-10).unwrap().status, Status::Confirmed { n0: 0 });
        assert_eq!(individual_eventual(&t, &tests, 30, 1e-10).unwrap().status, Status::Confirmed { n0: 0 });
        assert_eq!(weak_eventual(&t, &tests, 30, 1e-10).unwrap().status, Status::Confirmed { n0: 0 });
    }

    #[test]
    fn alternating_diagonal_is_refuted_weakly() {
        let n = 50;
        let t = builtin::alternating_multiplication(n, NormKind::Ell1).unwrap();
        let mut en = vec![0.0; n];
        en[n - 1] = 1.0;
        let tests = ConeTestSet::user(&NormKind::Ell1, &[en.clone()], &[en]).unwrap();
        let v = weak_eventual(&t, &tests, 30, 1e-10).unwrap();
        let Status::Refuted { witness: Witness::Orbit { samples, .. } } = &v.status else { panic!("{v:?}") };
        assert!(samples.iter().all(|s| s.n % 2 == 1));
        assert_eq!(samples.len(), 15);
    }

    #[test]
    fn continuous_rank2_uniform_refuted_with_hat_bound() {
        let t = builtin::rank2_continuous(201).unwrap();
        let v = uniform_eventual(&t, 30, 1e-10).unwrap();
        let Status::Refuted { witness: Witness::HatFamily { peak, evaluation_point, samples } } = &v.status else {
            panic!("{:?}", v.status)
        };
        assert_eq!(*peak, -1.0);
        assert_eq!(*evaluation_point, 1.0);
        for s in samples {
            let bound = s.eps / 2.0 - 2f64.powi(-(s.n as i32 + 1));
            assert!(s.value <= bound + 1e-12 && s.value < 0.0);
        }
    }
    #[test]
    fn continuous_rank2_individual_confirmed_on_random_functions() {
        let t = builtin::rank2_continuous(201).unwrap();
        let tests = ConeTestSet::random(t.norm_kind(), 201, 20, 11).unwrap();
        let v = individual_eventual(&t, &tests, 30, 1e-10).unwrap();
        assert!(v.status.is_confirmed(), "{:?}", v.status);
        assert_eq!(v.per_test_n0.len(), 20);
    }

    #[test]
    fn lp_rank2_individual_refuted_weak_confirmed() {
        let t = builtin::rank2_lp(2.0, 200).unwrap();
        let OperatorModel::RankK(r) = &t else { panic!() };
        let g: Vec<f64> = r.nodes().iter().map(|x| 1.0 + x).collect();
        let tests = ConeTestSet::user(t.norm_kind(), &[g], &[vec![1.0; 200]]).unwrap();
        let v = individual_eventual(&t, &tests, 30, 1e-10).unwrap();
        let Some(w @ Witness::AnalyticPoints { points, .. }) = v.status.witness() else { panic!("{:?}", v.status) };
        assert_eq!(points.len(), 30);
        assert!(super::super::recheck_witness(&t, w, 1e-10).unwrap());
        let pairs = ConeTestSet::random(t.norm_kind(), 200, 20, 5).unwrap();
        let v = weak_eventual(&t, &pairs, 30, 1e-10).unwrap();
        assert!(v.status.is_confirmed(), "{:?}", v.status);
    }

    #[test]
    fn witnesses_recheck() {
        let t = builtin::rank2_continuous(201).unwrap();
        let v = uniform_eventual(&t, 30, 1e-10).unwrap();
        assert!(super::super::recheck_witness(&t, v.status.witness().unwrap(), 1e-10).unwrap());
        let a = builtin::alternating_multiplication(50, NormKind::Ell1).unwrap();
        let v = uniform_eventual(&a, 30, 1e-10).unwrap();
        assert!(super::super::recheck_witness(&a, v.status.witness().unwrap(), 1e-10).unwrap());
        let rot = OperatorModel::dense(builtin::cycle_permutation(3).scale(Complex64::new(-1.0, 0.0)), NormKind::Ell1)
            .unwrap();
        let v = uniform_eventual(&rot, 30, 1e-10).unwrap();
        assert!(v.status.is_refuted(), "{:?}", v.status);
        assert!(super::super::recheck_witness(&rot, v.status.witness().unwrap(), 1e-10).unwrap());
    }
}
