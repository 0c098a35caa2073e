use serde::Serialize;

use crate::{DixmierError, SingularValueSeq};

/// Compensated (Neumaier) running sum.
#[derive(Clone, Copy, Default)]
pub(crate) struct Accumulator {
    sum: f64,
    compensation: f64,
}

impl Accumulator {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// `Σ_{n=0}^{N} μₙ` for each `N` in an ascending list, in one pass over the runs.
pub(crate) fn partial_sums(s: &SingularValueSeq, points: &[u64]) -> Result<Vec<f64>, DixmierError> {
    debug_assert!(points.windows(2).all(|w| w[0] <= w[1]));
    let mut out = Vec::with_capacity(points.len());
    let mut acc = Accumulator::default();
    let mut pending = points.iter().copied().peekable();
    for item in s.validated() {
        let Some(&next) = pending.peek() else { break };
        let (start, run) = item?;
        let end = start + run.multiplicity;
        let mut target = next;
        while target < end {
            let mut at = acc;
            at.add(run.value * (target - start + 1) as f64);
            out.push(at.value());
            pending.next();
            match pending.peek() {
                Some(&t) => target = t,
                None => break,
            }
        }
        acc.add(run.value * run.multiplicity as f64);
    }
    out.extend(pending.map(|_| acc.value()));
    Ok(out)
}

/// `(1/log N) Σ_{n=0}^{N} μₙ`.
pub fn partial_ratio(s: &SingularValueSeq, n: u64) -> Result<f64, DixmierError> {
    if n < 2 {
        return Err(DixmierError::NTooSmall(n));
    }
    Ok(partial_sums(s, &[n])?[0] / (n as f64).ln())
}

/// Extrapolated Dixmier trace with its fit diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceEstimate {
    /// Fitted limit `c₀`.
    pub value: f64,
    /// Largest absolute fit residual.
    pub error_bar: f64,
    pub schedule: Vec<u64>,
    /// Fitted coefficient `c₁` of `1/log N`.
    pub slope: f64,
    pub model: String,
    pub ratios: Vec<f64>,
}

/// Least-squares fit of the ratio at each `N` to `c₀ + c₁/log N`.
pub fn dixmier_estimate(s: &SingularValueSeq, schedule: &[u64]) -> Result<TraceEstimate, DixmierError> {
    if schedule.len() < 3 || schedule[0] < 2 || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(DixmierError::BadSchedule);
    }
    let sums = partial_sums(s, schedule)?;
    let xs: Vec<f64> = schedule.iter().map(|&n| 1.0 / (n as f64).ln()).collect();
    let ratios: Vec<f64> = sums.iter().zip(schedule).map(|(sum, &n)| sum / (n as f64).ln()).collect();
    let k = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / k;
    let mean_y = ratios.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ratios).map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    let slope = sxy / sxx;
    let value = mean_y - slope * mean_x;
    let error_bar = xs.iter().zip(&ratios).map(|(x, y)| (y - value - slope * x).abs()).fold(0.0, f64::max);
    Ok(TraceEstimate {
        value,
        error_bar,
        schedule: schedule.to_vec(),
        slope,
        model: "c0 + c1/log N".to_string(),
        ratios,
    })
}

/// Estimates on two interleaved dyadic schedules and the verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Measurability {
    pub even: TraceEstimate,
    pub odd: TraceEstimate,
    /// `|c₀(even) - c₀(odd)| + max(error bars)`.
    pub discrepancy: f64,
    pub measurable: bool,
}

/// Schedule `2^8, 2^10, …, 2^24` against `2^9, 2^11, …, 2^23`.
///
/// The discrepancy adds the larger error bar to the gap between the two
/// limits, so a sequence whose ratio does not follow the extrapolation
/// model is rejected even when both fits happen to land close together.
pub fn measurability(s: &SingularValueSeq, tol: f64) -> Result<Measurability, DixmierError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(DixmierError::BadTolerance(tol));
    }
    let even: Vec<u64> = (4..=12).map(|k| 1u64 << (2 * k)).collect();
    let odd: Vec<u64> = (4..=11).map(|k| 1u64 << (2 * k + 1)).collect();
    let even = dixmier_estimate(s, &even)?;
    let odd = dixmier_estimate(s, &odd)?;
    let discrepancy = (even.value - odd.value).abs() + even.error_bar.max(odd.error_bar);
    Ok(Measurability { measurable: discrepancy <= tol, discrepancy, even, odd })
}

pub fn is_measurable(s: &SingularValueSeq, tol: f64) -> Result<bool, DixmierError> {
    Ok(measurability(s, tol)?.measurable)
}
