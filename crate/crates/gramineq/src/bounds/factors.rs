//! Canonical factor products.
//!
//! Every branch bound is a product of primitive factors `base^exponent`,
//! where the base is one of a handful of instance quantities (max
//! coefficient modulus, coefficient power sums, total/max/powered row sums).
//! Both the derived compositions and the printed transcriptions are
//! assembled as factor lists and evaluated through the same canonical
//! routine — sort, merge repeated bases, evaluate — so that branches whose
//! two forms agree algebraically agree bit for bit.

use crate::gram::{Complex, GramData};
use crate::sum::Accumulator;

/// Identity of a primitive factor base. Power-sum kinds carry their inner
/// exponent; two bases merge only when the kinds (and inner exponents)
/// match exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum FactorKind {
    /// `(sum_i |a_i|^t r_i)`, the weighted power sum of the middle bound
    WeightedPowerSum(f64),
    /// `max_i |a_i|`
    MaxAbsCoeff,
    /// `sum_i |a_i|^t`
    CoeffPowerSum(f64),
    /// `S = sum_ij |G_ij|`
    TotalAbsSum,
    /// `max_i r_i`
    MaxRowSum,
    /// `sum_i r_i^t`
    RowPowerSum(f64),
}

impl FactorKind {
    fn sort_key(&self) -> (u8, u64) {
        match self {
            FactorKind::WeightedPowerSum(t) => (0, t.to_bits()),
            FactorKind::MaxAbsCoeff => (1, 0),
            FactorKind::CoeffPowerSum(t) => (2, t.to_bits()),
            FactorKind::TotalAbsSum => (3, 0),
            FactorKind::MaxRowSum => (4, 0),
            FactorKind::RowPowerSum(t) => (5, t.to_bits()),
        }
    }

    fn same(&self, other: &FactorKind) -> bool {
        self.sort_key() == other.sort_key()
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Factor {
    pub kind: FactorKind,
    pub base: f64,
    pub exponent: f64,
}

impl Factor {
    pub fn new(kind: FactorKind, base: f64, exponent: f64) -> Self {
        Self {
            kind,
            base,
            exponent,
        }
    }
}

/// Bases below this are flushed to zero at factor construction. Values this
/// small only arise from extreme-exponent underflow, where subnormal terms
/// carry only a few bits of precision — at huge exponents like
/// `|a|^(gamma q)` a subnormal base costs ~1e-5 relative error after the
/// root, far beyond the 1e-9 slack budget. A flushed base zeroes the
/// product, which consumers count as a numeric skip rather than a value.
pub(crate) const BASE_FLUSH_THRESHOLD: f64 = 1e-290;

/// Exponent sums that are exact by conjugacy (`1/p + 1/q = 1` and its
/// halved/doubled variants) are snapped back to their algebraic value so
/// merged factors reproduce the closed forms exactly.
fn snap(e: f64) -> f64 {
    for target in [0.5, 1.0, 1.5, 2.0] {
        if (e - target).abs() <= 1e-12 {
            return target;
        }
    }
    e
}

fn pow_canonical(base: f64, exponent: f64) -> f64 {
    if exponent == 1.0 {
        base
    } else if exponent == 2.0 {
        base * base
    } else {
        base.powf(exponent)
    }
}

/// Sort, merge repeated bases, and evaluate the product.
///
/// All exponents are positive, so a zero base annihilates the product; that
/// short-circuit also keeps an overflowed companion factor from turning
/// `0 * inf` into NaN.
pub(crate) fn canonical_product(mut factors: Vec<Factor>) -> f64 {
    factors.sort_by_key(|f| f.kind.sort_key());
    let mut merged: Vec<Factor> = Vec::with_capacity(factors.len());
    for f in factors {
        match merged.last_mut() {
            Some(last) if last.kind.same(&f.kind) => {
                last.exponent = snap(last.exponent + f.exponent);
            }
            _ => merged.push(f),
        }
    }
    if merged.iter().any(|f| f.base == 0.0) {
        return 0.0;
    }
    let mut product = 1.0;
    for f in &merged {
        product *= pow_canonical(f.base, f.exponent);
    }
    product
}

/// Precomputed instance quantities from which factors draw their bases.
pub(crate) struct FactorContext<'a> {
    abs_coeffs: Vec<f64>,
    gram: &'a GramData,
}

impl<'a> FactorContext<'a> {
    pub fn new(coeffs: &[Complex], gram: &'a GramData) -> Self {
        Self {
            abs_coeffs: coeffs.iter().map(|z| z.norm()).collect(),
            gram,
        }
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.abs_coeffs.iter().copied().fold(0.0, f64::max)
    }

    /// `sum_i |a_i|^t` (plain, unweighted).
    pub fn coeff_power_sum(&self, t: f64) -> f64 {
        let mut acc = Accumulator::new();
        for &a in &self.abs_coeffs {
            acc.add(a.powf(t));
        }
        acc.value()
    }

    /// `sum_i r_i^t`.
    pub fn row_power_sum(&self, t: f64) -> f64 {
        let mut acc = Accumulator::new();
        for &r in self.gram.abs_row_sums() {
            acc.add(r.powf(t));
        }
        acc.value()
    }

    /// `sum_i |a_i|^t r_i`.
    pub fn weighted_power_sum(&self, t: f64) -> f64 {
        let mut acc = Accumulator::new();
        for (&a, &r) in self.abs_coeffs.iter().zip(self.gram.abs_row_sums()) {
            acc.add(a.powf(t) * r);
        }
        acc.value()
    }

    pub fn total_abs_sum(&self) -> f64 {
        self.gram.total_abs_sum()
    }

    pub fn max_row_sum(&self) -> f64 {
        self.gram.max_row_sum()
    }

    pub fn factor(&self, kind: FactorKind, exponent: f64) -> Factor {
        let base = match kind {
            FactorKind::WeightedPowerSum(t) => self.weighted_power_sum(t),
            FactorKind::MaxAbsCoeff => self.max_abs_coeff(),
            FactorKind::CoeffPowerSum(t) => self.coeff_power_sum(t),
            FactorKind::TotalAbsSum => self.total_abs_sum(),
            FactorKind::MaxRowSum => self.max_row_sum(),
            FactorKind::RowPowerSum(t) => self.row_power_sum(t),
        };
        let base = if base < BASE_FLUSH_THRESHOLD {
            0.0
        } else {
            base
        };
        Factor::new(kind, base, exponent)
    }
}
