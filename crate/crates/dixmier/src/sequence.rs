use std::sync::Arc;

use crate::DixmierError;

/// A value repeated `multiplicity` times.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Run {
    pub value: f64,
    pub multiplicity: u64,
}

impl Run {
    pub fn new(value: f64, multiplicity: u64) -> Self {
        Self { value, multiplicity }
    }
}

type RunIter = Box<dyn Iterator<Item = Run> + Send>;
type Source = Arc<dyn Fn() -> RunIter + Send + Sync>;

/// Lazily generated singular values `μ₀ ≥ μ₁ ≥ ⋯ > 0` stored as runs.
///
/// Operators with a kernel contribute no modes for it; `kernel_dim` only
/// records how many were dropped.
#[derive(Clone)]
pub struct SingularValueSeq {
    name: String,
    source: Source,
    kernel_dim: u64,
}

impl std::fmt::Debug for SingularValueSeq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SingularValueSeq").field("name", &self.name).field("kernel_dim", &self.kernel_dim).finish()
    }
}

impl SingularValueSeq {
    /// Sequence from a restartable run iterator.
    pub fn from_source<F, I>(name: impl Into<String>, make: F) -> Self
    where
        F: Fn() -> I + Send + Sync + 'static,
        I: Iterator<Item = Run> + Send + 'static,
    {
        Self { name: name.into(), source: Arc::new(move || Box::new(make()) as RunIter), kernel_dim: 0 }
    }

    /// Finite-rank sequence.
    pub fn from_runs(name: impl Into<String>, runs: Vec<Run>) -> Self {
        let runs = Arc::new(runs);
        Self::from_source(name, move || {
            let runs = Arc::clone(&runs);
            (0..runs.len()).map(move |k| runs[k])
        })
    }

    /// Infinite sequence whose `k`-th run is `f(k)`.
    pub fn from_run_fn(name: impl Into<String>, f: impl Fn(u64) -> Run + Send + Sync + 'static) -> Self {
        let f = Arc::new(f);
        Self::from_source(name, move || {
            let f = Arc::clone(&f);
            (0..).map(move |k| f(k))
        })
    }

    /// `μₙ = 1/(n+1)`.
    pub fn harmonic() -> Self {
        Self::from_run_fn("harmonic", |k| Run::new(1.0 / (k as f64 + 1.0), 1))
    }

    /// `μₙ = log((n+2)/(n+1))`, whose partial sums telescope to `log(N+2)`.
    pub fn telescoping() -> Self {
        Self::from_run_fn("telescoping", |k| Run::new((1.0 / (k as f64 + 1.0)).ln_1p(), 1))
    }

    /// `μₙ = ratioⁿ` with `0 < ratio < 1`, ending where `f64` underflows.
    pub fn geometric(ratio: f64) -> Self {
        assert!(ratio > 0.0 && ratio < 1.0, "ratio must lie in (0, 1)");
        Self::from_source("geometric", move || {
            (0..).map(move |k| Run::new(ratio.powf(k as f64), 1)).take_while(|r| r.value > 0.0)
        })
    }

    /// `μₙ = (n+1)^(-2)`, a trace-class sequence.
    pub fn inverse_square() -> Self {
        Self::from_run_fn("inverse_square", |k| Run::new((k as f64 + 1.0).powi(-2), 1))
    }

    /// `μₙ = (n+1)^(-1/p)`.
    pub fn power(p: f64) -> Self {
        Self::from_run_fn("power", move |k| Run::new((k as f64 + 1.0).powf(-1.0 / p), 1))
    }

    /// `1/(k+1)` repeated once or twice, the multiplicity flipping whenever
    /// `log(k+2)` crosses a power of two. The logarithmic ratio drifts toward
    /// the current multiplicity on each block, so it keeps oscillating.
    pub fn oscillating() -> Self {
        Self::from_run_fn("oscillating", |k| {
            let block = ((k as f64 + 2.0).ln().log2().floor() as i64).max(0);
            Run::new(1.0 / (k as f64 + 1.0), if block % 2 == 0 { 1 } else { 2 })
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kernel_dim(&self) -> u64 {
        self.kernel_dim
    }

    pub fn with_kernel_dim(mut self, dim: u64) -> Self {
        self.kernel_dim = dim;
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Raw run stream; validation happens in [`Self::validated`].
    pub fn runs(&self) -> RunIter {
        (self.source)()
    }

    /// Run stream paired with the index of each run's first term, checked for
    /// positivity, finiteness, unit-or-more multiplicity and monotonicity.
    pub fn validated(&self) -> impl Iterator<Item = Result<(u64, Run), DixmierError>> {
        let mut start = 0u64;
        let mut previous = f64::INFINITY;
        self.runs().map(move |run| {
            let index = start;
            let reason = if !(run.value.is_finite() && run.value > 0.0) {
                Some(format!("value {} is not finite and positive", run.value))
            } else if run.multiplicity == 0 {
                Some("zero multiplicity".to_string())
            } else if run.value > previous {
                Some(format!("value {} exceeds its predecessor {previous}", run.value))
            } else {
                None
            };
            if let Some(reason) = reason {
                return Err(DixmierError::InvalidSequence { index, reason });
            }
            previous = run.value;
            start += run.multiplicity;
            Ok((index, run))
        })
    }

    /// Every multiplicity multiplied by `m`.
    pub fn with_multiplicity(&self, m: u64) -> Self {
        let inner = self.clone();
        Self::from_source(format!("{}*{m}", self.name), move || {
            inner.runs().map(move |r| Run::new(r.value, r.multiplicity * m))
        })
    }

    /// Every value multiplied by `lambda > 0`.
    pub fn scaled(&self, lambda: f64) -> Self {
        assert!(lambda > 0.0, "scale must be positive");
        let inner = self.clone();
        Self::from_source(format!("{}x{lambda}", self.name), move || {
            inner.runs().map(move |r| Run::new(r.value * lambda, r.multiplicity))
        })
    }

    /// Every value raised to the power `exponent > 0`, which keeps the order.
    pub fn powered(&self, exponent: f64) -> Self {
        assert!(exponent > 0.0, "exponent must be positive");
        let inner = self.clone();
        Self::from_source(format!("{}^{exponent}", self.name), move || {
            inner.runs().map(move |r| Run::new(r.value.powf(exponent), r.multiplicity))
        })
    }

    /// The first `prefix.len()` terms replaced by `prefix`, in order.
    pub fn with_prefix(&self, prefix: Vec<f64>) -> Self {
        let inner = self.clone();
        let prefix = Arc::new(prefix);
        Self::from_source(format!("{}+prefix", self.name), move || {
            let skip = prefix.len() as u64;
            let head: Vec<Run> = prefix.iter().map(|&v| Run::new(v, 1)).collect();
            let mut seen = 0u64;
            let tail = inner.runs().filter_map(move |r| {
                let end = seen + r.multiplicity;
                let kept = end.saturating_sub(seen.max(skip));
                seen = end;
                (kept > 0).then(|| Run::new(r.value, kept))
            });
            head.into_iter().chain(tail)
        })
    }

    /// Decreasing merge of two sequences (the singular values of `S ⊕ T`).
    pub fn merged(&self, other: &Self) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::from_source(format!("{}+{}", self.name, other.name), move || Merge {
            left: a.runs().peekable(),
            right: b.runs().peekable(),
        })
    }
}

struct Merge {
    left: std::iter::Peekable<RunIter>,
    right: std::iter::Peekable<RunIter>,
}

impl Iterator for Merge {
    type Item = Run;

    fn next(&mut self) -> Option<Run> {
        match (self.left.peek().copied(), self.right.peek().copied()) {
            (Some(l), Some(r)) if l.value == r.value => {
                self.left.next();
                self.right.next();
                Some(Run::new(l.value, l.multiplicity + r.multiplicity))
            }
            (Some(l), Some(r)) if l.value > r.value => self.left.next(),
            (Some(_), Some(_)) | (None, Some(_)) => self.right.next(),
            (Some(_), None) => self.left.next(),
            (None, None) => None,
        }
    }
}
