use crate::estimate::Accumulator;
use crate::{DixmierError, SingularValueSeq};

/// `sup_{1 ≤ M ≤ N} M^{-(1-1/p)} Σ_{n=0}^{M} μₙ`.
///
/// On a run of value `v` the partial sum is affine in `M`, so the supremum
/// over the run is attained at an endpoint or next to the interior critical
/// point `M* = α C / (v (1 - α))`, with `α = 1 - 1/p` and `C` the affine
/// intercept. The cost is one step per run.
pub fn pinfty_norm(s: &SingularValueSeq, p: f64, n: u64) -> Result<f64, DixmierError> {
    if p.is_nan() || p <= 1.0 {
        return Err(DixmierError::BadExponent(p));
    }
    let alpha = 1.0 - 1.0 / p;
    let mut acc = Accumulator::default();
    let mut best = 0.0f64;
    for item in s.validated() {
        let (start, run) = item?;
        let lo = start.max(1);
        let hi = (start + run.multiplicity - 1).min(n);
        if lo <= hi {
            let before = acc.value();
            let sum_at = |m: u64| before + run.value * (m - start + 1) as f64;
            let intercept = before + run.value * (1.0 - start as f64);
            let critical = alpha * intercept / (run.value * (1.0 - alpha));
            let mut candidates = vec![lo, hi];
            if critical.is_finite() && critical > lo as f64 && critical < hi as f64 {
                candidates.extend([critical.floor() as u64, critical.ceil() as u64]);
            }
            for m in candidates {
                best = best.max(sum_at(m) / (m as f64).powf(alpha));
            }
        }
        acc.add(run.value * run.multiplicity as f64);
        if start + run.multiplicity > n {
            break;
        }
    }
    Ok(best)
}

/// `Σ_{n=0}^{N} w(n) μₙ` with `w(n) = n^{1/p - 1}`.
///
/// The weight is infinite at `n = 0`; that term is taken with weight 1.
pub fn p1_norm(s: &SingularValueSeq, p: f64, n: u64) -> Result<f64, DixmierError> {
    if p.is_nan() || p <= 1.0 {
        return Err(DixmierError::BadExponent(p));
    }
    let beta = 1.0 / p - 1.0;
    let mut acc = Accumulator::default();
    for item in s.validated() {
        let (start, run) = item?;
        if start > n {
            break;
        }
        let end = (start + run.multiplicity - 1).min(n);
        let mut weights = Accumulator::default();
        for k in start..=end {
            weights.add(if k == 0 { 1.0 } else { (k as f64).powf(beta) });
        }
        acc.add(run.value * weights.value());
    }
    Ok(acc.value())
}
