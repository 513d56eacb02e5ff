//! Compensated (Neumaier) accumulation.
//!
//! Row sums, double sums and power sums feed slack checks that must be
//! trusted at 1e-9 relative near equality cases, so every accumulation in
//! this crate goes through [`Accumulator`] instead of a bare `+=`.

/// Running Neumaier-compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct Accumulator {
    sum: f64,
    compensation: f64,
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        // compensation is meaningless once the running sum leaves the
        // finite range; skipping it keeps inf from turning into NaN
        if t.is_finite() {
            if self.sum.abs() >= value.abs() {
                self.compensation += (self.sum - t) + value;
            } else {
                self.compensation += (value - t) + self.sum;
            }
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Compensated sum of an iterator of terms.
pub fn compensated<I>(terms: I) -> f64
where
    I: IntoIterator<Item = f64>,
{
    let mut acc = Accumulator::new();
    for t in terms {
        acc.add(t);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_tail() {
        let mut acc = Accumulator::new();
        for x in [1e200, 0.1, 0.2, 0.3, -1e200] {
            acc.add(x);
        }
        assert!((acc.value() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn matches_exact_sum_on_integers() {
        let v: Vec<f64> = (1..=1000).map(f64::from).collect();
        assert_eq!(compensated(v), 500_500.0);
    }

    #[test]
    fn overflow_stays_infinite_not_nan() {
        let mut acc = Accumulator::new();
        acc.add(1.0);
        acc.add(f64::INFINITY);
        acc.add(1.0);
        assert_eq!(acc.value(), f64::INFINITY);
    }
}
