//! Decay-rate tools on finite truncations: rearrangements, domination by a
//! majorant, summability trends and the `alpha(r)` series.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncation length used when none is given.
pub const DEFAULT_TRUNCATION: usize = 200;
/// Log-log exponent below which increments count as summable.
const SUMMABLE_EXPONENT: f64 = -1.1;
/// Log-log exponent at or above which increments count as divergent.
const DIVERGENT_EXPONENT: f64 = -1.02;

fn check_nonneg(values: &[f64], what: &str) -> Result<()> {
    if let Some((k, v)) = values.iter().enumerate().find(|(_, v)| !(**v >= 0.0 && v.is_finite())) {
        return Err(Error::Domain(format!("{what} entry {k} is {v}; entries must be finite and non-negative")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecaySequence {
    pub values: Vec<f64>,
    /// Identifiers of the vector and functional behind the sequence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<(String, String)>,
}

impl DecaySequence {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        check_nonneg(&values, "decay sequence")?;
        Ok(Self { values, source: None })
    }

    pub fn with_source(mut self, vector: impl Into<String>, functional: impl Into<String>) -> Self {
        self.source = Some((vector.into(), functional.into()));
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorantSequence {
    pub values: Vec<f64>,
}

impl MajorantSequence {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        check_nonneg(&values, "majorant")?;
        Ok(Self { values })
    }

    pub fn from_fn(len: usize, f: impl Fn(usize) -> f64) -> Result<Self> {
        Self::new((0..len).map(f).collect())
    }

    /// Tail maximum over the last quarter at most `1e-6` times the head maximum.
    pub fn is_decaying(&self) -> bool {
        let n = self.values.len();
        if n == 0 {
            return true;
        }
        let head = self.values.iter().copied().fold(0.0, f64::max);
        let tail = self.values[n - n / 4 - 1..].iter().copied().fold(0.0, f64::max);
        tail <= 1e-6 * head
    }

    fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RateFunction {
    /// `t^q`
    Power { q: f64 },
    /// `max(t - c, 0)`; diagnostic only.
    Threshold { c: f64 },
    /// Piecewise linear through `(t, phi(t))`, constant after the last point.
    UserTable { breakpoints: Vec<(f64, f64)> },
}

impl RateFunction {
    pub fn validate(&self) -> Result<()> {
        match self {
            RateFunction::Power { q } if !(*q > 0.0 && q.is_finite()) => {
                Err(Error::Domain(format!("power exponent must be positive, got {q}")))
            }
            RateFunction::Threshold { c } if !(*c > 0.0 && c.is_finite()) => {
                Err(Error::Domain(format!("threshold must be positive, got {c}")))
            }
            RateFunction::UserTable { breakpoints } => {
                if breakpoints.is_empty() {
                    return Err(Error::Domain("rate table needs at least one breakpoint".into()));
                }
                if breakpoints[0].0 != 0.0 {
                    return Err(Error::Domain("rate table must start at t = 0".into()));
                }
                for w in breakpoints.windows(2) {
                    if !(w[1].0 > w[0].0) || w[1].1 < w[0].1 {
                        return Err(Error::Domain(
                            "rate table must have increasing t and non-decreasing values".into(),
                        ));
                    }
                }
                check_nonneg(&breakpoints.iter().map(|b| b.1).collect::<Vec<_>>(), "rate table")
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            RateFunction::Power { q } => t.powf(*q),
            RateFunction::Threshold { c } => (t - c).max(0.0),
            RateFunction::UserTable { breakpoints } => {
                let k = breakpoints.partition_point(|b| b.0 <= t);
                if k == breakpoints.len() {
                    return breakpoints[k - 1].1;
                }
                let (a, b) = (breakpoints[k - 1], breakpoints[k]);
                a.1 + (b.1 - a.1) * (t - a.0) / (b.0 - a.0)
            }
        }
    }

    /// Positive on `(0, inf)`, as the summability theorem requires.
    pub fn is_admissible(&self) -> bool {
        match self {
            RateFunction::Power { .. } => true,
            RateFunction::Threshold { .. } => false,
            RateFunction::UserTable { breakpoints } => breakpoints.iter().skip(1).all(|b| b.1 > 0.0),
        }
    }

    pub fn label(&self) -> String {
        match self {
            RateFunction::Power { q } => format!("t^{q}"),
            RateFunction::Threshold { c } => format!("max(t - {c}, 0)"),
            RateFunction::UserTable { breakpoints } => format!("table({} points)", breakpoints.len()),
        }
    }
}

pub fn decreasing_rearrangement(a: &[f64]) -> Result<Vec<f64>> {
    check_nonneg(a, "sequence")?;
    let mut out = a.to_vec();
    out.sort_by(|x, y| y.total_cmp(x));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Governance {
    Governed { c: f64 },
    NotGoverned { index: usize },
}

/// Least `c` with `a*_n <= c f_n` on the truncation, or the first index
/// where `f_n = 0` but `a*_n > 0`.
pub fn governs(f: &MajorantSequence, a: &DecaySequence) -> Result<Governance> {
    if f.values.len() != a.values.len() {
        return Err(Error::DimensionMismatch { expected: f.values.len(), actual: a.values.len() });
    }
    let star = decreasing_rearrangement(&a.values)?;
    let mut c: f64 = 0.0;
    for (n, (&s, &fv)) in star.iter().zip(&f.values).enumerate() {
        if fv == 0.0 {
            if s > 0.0 {
                return Ok(Governance::NotGoverned { index: n });
            }
        } else {
            c = c.max(s / fv);
        }
    }
    Ok(Governance::Governed { c })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    SummableTrend,
    DivergentTrend,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummabilityEntry {
    pub phi: RateFunction,
    pub admissible: bool,
    pub partial_sums: Vec<f64>,
    /// Least-squares slope of `log(increment)` against `n` over the last half.
    pub tail_slope: Option<f64>,
    /// Least-squares slope of `log(increment)` against `log(n + 1)` over the last half.
    pub tail_exponent: Option<f64>,
    pub trend: Trend,
    /// Geometric extrapolation of the tail beyond the truncation, when the slope is negative.
    pub tail_estimate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummabilityReport {
    pub entries: Vec<SummabilityEntry>,
    /// Smallest plausible `p` with `a` in `l^p`, from a log-log fit of the
    /// decreasing rearrangement. A heuristic, not a certificate.
    pub lp_exponent_heuristic: Option<f64>,
    pub truncation: usize,
}

fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 3 {
        return None;
    }
    let m = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / m, sy / m);
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn tail_points(values: &[f64], x: impl Fn(usize) -> f64) -> Vec<(f64, f64)> {
    let start = values.len() / 2;
    values[start..].iter().enumerate().filter(|(_, v)| **v > 0.0).map(|(k, v)| (x(start + k), v.ln())).collect()
}

pub fn summability_report(a: &DecaySequence, phis: &[RateFunction]) -> Result<SummabilityReport> {
    for phi in phis {
        phi.validate()?;
    }
    let n = a.values.len();
    let mut entries = Vec::with_capacity(phis.len());
    for phi in phis {
        let inc: Vec<f64> = a.values.iter().map(|&t| phi.eval(t)).collect();
        let partial_sums: Vec<f64> = inc
            .iter()
            .scan(0.0, |s, v| {
                *s += v;
                Some(*s)
            })
            .collect();
        let tail = &inc[n / 2..];
        let tail_slope = least_squares_slope(&tail_points(&inc, |k| k as f64));
        let tail_exponent = least_squares_slope(&tail_points(&inc, |k| ((k + 1) as f64).ln()));
        let trend = if !tail.is_empty() && tail.iter().all(|&v| v == 0.0) {
            Trend::SummableTrend
        } else {
            match tail_exponent {
                Some(e) if e < SUMMABLE_EXPONENT => Trend::SummableTrend,
                Some(e) if e >= DIVERGENT_EXPONENT => Trend::DivergentTrend,
                _ => Trend::Inconclusive,
            }
        };
        let tail_estimate = match (trend, tail_slope, inc.last()) {
            (Trend::SummableTrend, Some(s), Some(&last)) if s < 0.0 => {
                let q = s.exp();
                Some(last * q / (1.0 - q))
            }
            (Trend::SummableTrend, _, Some(&0.0)) => Some(0.0),
            _ => None,
        };
        entries.push(SummabilityEntry {
            phi: phi.clone(),
            admissible: phi.is_admissible(),
            partial_sums,
            tail_slope,
            tail_exponent,
            trend,
            tail_estimate,
        });
    }
    let star = decreasing_rearrangement(&a.values)?;
    let lp_exponent_heuristic = match least_squares_slope(&tail_points(&star, |k| ((k + 1) as f64).ln())) {
        Some(e) if e < 0.0 => Some(-1.0 / e),
        _ if star.iter().all(|&v| v == 0.0) => Some(0.0),
        _ => None,
    };
    Ok(SummabilityReport { entries, lp_exponent_heuristic, truncation: n })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaValue {
    /// `sum_{n < N} f_n / r^(n+1)`
    pub value: f64,
    /// `f_{N-1} r^-N / (r - 1)`: the remaining series if `f` stays below its last entry.
    pub tail_bound: f64,
}

pub fn alpha(f: &MajorantSequence, r: f64) -> Result<AlphaValue> {
    if !(r > 1.0 && r.is_finite()) {
        return Err(Error::Domain(format!("alpha needs r > 1, got {r}")));
    }
    let mut value = 0.0;
    let mut w = 1.0 / r;
    for &v in &f.values {
        value += v * w;
        w /= r;
    }
    let last = f.values.last().copied().unwrap_or(0.0);
    let tail_bound = last * r.powf(-(f.values.len() as f64)) / (r - 1.0);
    Ok(AlphaValue { value, tail_bound })
}

/// `sum_j f^(j) / (2^j max f^(j))`, `j = 1, 2, ...`
pub fn countable_family_reduce(fs: &[MajorantSequence]) -> Result<MajorantSequence> {
    let Some(first) = fs.first() else {
        return Err(Error::Domain("the family is empty".into()));
    };
    let len = first.values.len();
    let mut out = vec![0.0; len];
    let mut weight = 1.0;
    for (j, f) in fs.iter().enumerate() {
        if f.values.len() != len {
            return Err(Error::DimensionMismatch { expected: len, actual: f.values.len() });
        }
        let m = f.max();
        if m == 0.0 {
            return Err(Error::Domain(format!("member {j} of the family is the zero sequence")));
        }
        weight *= 0.5;
        for (o, v) in out.iter_mut().zip(&f.values) {
            *o += weight * v / m;
        }
    }
    MajorantSequence::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rearrangement() {
        assert_eq!(decreasing_rearrangement(&[0.0, 3.0, 1.0, 3.0]).unwrap(), vec![3.0, 3.0, 1.0, 0.0]);
        assert!(matches!(decreasing_rearrangement(&[1.0, -1.0]), Err(Error::Domain(_))));
    }

    #[test]
    fn governs_examples() {
        let f = MajorantSequence::from_fn(32, |n| 1.0 / (n + 1) as f64).unwrap();
        let a = DecaySequence::new((0..32).rev().map(|n| 0.5f64.powi(n)).collect()).unwrap();
        assert_eq!(governs(&f, &a).unwrap(), Governance::Governed { c: 1.0 });
        let zero = DecaySequence::new(vec![0.0; 32]).unwrap();
        assert_eq!(governs(&f, &zero).unwrap(), Governance::Governed { c: 0.0 });
        let cut = MajorantSequence::from_fn(10, |n| if n <= 5 { 1.0 } else { 0.0 }).unwrap();
        let a = DecaySequence::new(vec![1.0; 10]).unwrap();
        assert_eq!(governs(&cut, &a).unwrap(), Governance::NotGoverned { index: 6 });
    }

    #[test]
    fn summability_examples() {
        let geo = DecaySequence::new((0..200).map(|n| 0.5f64.powi(n)).collect()).unwrap();
        let harm = DecaySequence::new((0..200).map(|n| 1.0 / (n + 1) as f64).collect()).unwrap();
        let r = summability_report(&geo, &[RateFunction::Power { q: 1.0 }]).unwrap();
        assert_eq!(r.entries[0].trend, Trend::SummableTrend);
        assert!((r.entries[0].partial_sums.last().unwrap() - 2.0).abs() < 1e-12);
        let r = summability_report(&harm, &[RateFunction::Power { q: 1.0 }, RateFunction::Power { q: 2.0 }]).unwrap();
        assert_eq!(r.entries[0].trend, Trend::DivergentTrend);
        assert_eq!(r.entries[1].trend, Trend::SummableTrend);
        let s = *r.entries[1].partial_sums.last().unwrap();
        // tail of sum 1/k^2 beyond k = 200 lies in (1/201, 1/200)
        let gap = std::f64::consts::PI.powi(2) / 6.0 - s;
        assert!(gap > 1.0 / 201.0 && gap < 1.0 / 200.0);
        assert!((r.lp_exponent_heuristic.unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn alpha_examples() {
        let f = MajorantSequence::from_fn(200, |n| 0.5f64.powi(n as i32)).unwrap();
        assert!((alpha(&f, 2.0).unwrap().value - 2.0 / 3.0).abs() < 1e-15);
        let e = MajorantSequence::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert_eq!(alpha(&e, 4.0).unwrap().value, 0.25);
        assert!(alpha(&f, 1.0).is_err());
        let mut prev = f64::INFINITY;
        for j in 1..=12 {
            let r = 1.0 + 2f64.powi(-j);
            let v = (r - 1.0) * alpha(&f, r).unwrap().value;
            assert!(v < prev);
            prev = v;
        }
        assert!(prev < 1e-3);
    }

    #[test]
    fn family_reduction() {
        let f = MajorantSequence::new(vec![2.0, 1.0, 0.5]).unwrap();
        let one = countable_family_reduce(std::slice::from_ref(&f)).unwrap();
        assert_eq!(one.values, vec![0.5, 0.25, 0.125]);
        let two = countable_family_reduce(&[f.clone(), f.clone()]).unwrap();
        assert_eq!(two.values, vec![0.75, 0.375, 0.1875]);
        let zero = MajorantSequence::new(vec![0.0; 3]).unwrap();
        assert!(countable_family_reduce(&[f, zero]).is_err());
    }
}
