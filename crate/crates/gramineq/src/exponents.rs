//! Holder conjugate-exponent parameters, branch selectors and validation.
//!
//! Each branch bound majorizes the p-side and q-side Holder factors in one of
//! three ways; the `(p_side, q_side)` pair enumerates the nine branches.
//! Double-Holder reductions additionally require a secondary conjugate pair:
//! `(alpha, beta)` on the p-side, `(gamma, delta)` on the q-side.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Numeric domain for every exponent: limits `p -> 1+` and `p -> inf` are
/// excluded because the max-form branch variants already cover them.
pub const MIN_EXPONENT: f64 = 1.01;
pub const MAX_EXPONENT: f64 = 100.0;

/// Conjugacy defect `|1/p + 1/q - 1|` admitted by [`ConjugatePair::new`].
pub const CONJUGACY_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum ExponentError {
    #[error("exponent must be finite and > 1, got {value}")]
    NotAboveOne { value: f64 },
    #[error("exponent {value} outside domain [{MIN_EXPONENT}, {MAX_EXPONENT}]")]
    OutOfDomain { value: f64 },
    #[error("({p}, {q}) is not a conjugate pair: |1/p + 1/q - 1| = {defect:e}")]
    NotConjugate { p: f64, q: f64, defect: f64 },
}

/// `q = p / (p - 1)`, the Holder conjugate. Involution on `(1, inf)`.
pub fn conjugate(p: f64) -> Result<f64, ExponentError> {
    if !p.is_finite() || p <= 1.0 {
        return Err(ExponentError::NotAboveOne { value: p });
    }
    Ok(p / (p - 1.0))
}

/// A validated pair `p, q > 1` with `1/p + 1/q = 1`, both within
/// `[MIN_EXPONENT, MAX_EXPONENT]`.
///
/// Because the domain caps both members, the feasible `p` range is
/// effectively `[conjugate(MAX_EXPONENT), MAX_EXPONENT]`; see
/// [`feasible_low`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PairRepr", into = "PairRepr")]
pub struct ConjugatePair {
    p: f64,
    q: f64,
}

#[derive(Serialize, Deserialize, Clone, Copy)]
struct PairRepr {
    p: f64,
    q: f64,
}

impl From<ConjugatePair> for PairRepr {
    fn from(c: ConjugatePair) -> Self {
        PairRepr { p: c.p, q: c.q }
    }
}

impl TryFrom<PairRepr> for ConjugatePair {
    type Error = ExponentError;
    fn try_from(r: PairRepr) -> Result<Self, Self::Error> {
        ConjugatePair::new(r.p, r.q)
    }
}

/// Smallest `p` whose conjugate still fits in the domain.
pub fn feasible_low() -> f64 {
    MAX_EXPONENT / (MAX_EXPONENT - 1.0)
}

impl ConjugatePair {
    pub fn new(p: f64, q: f64) -> Result<Self, ExponentError> {
        for v in [p, q] {
            if !v.is_finite() || v <= 1.0 {
                return Err(ExponentError::NotAboveOne { value: v });
            }
            if !(MIN_EXPONENT..=MAX_EXPONENT).contains(&v) {
                return Err(ExponentError::OutOfDomain { value: v });
            }
        }
        let defect = (1.0 / p + 1.0 / q - 1.0).abs();
        if defect > CONJUGACY_TOL {
            return Err(ExponentError::NotConjugate { p, q, defect });
        }
        Ok(Self { p, q })
    }

    /// Pair from `p` alone, with `q = conjugate(p)`.
    pub fn from_p(p: f64) -> Result<Self, ExponentError> {
        Self::new(p, conjugate(p)?)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// The pair with the roles of `p` and `q` exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            p: self.q,
            q: self.p,
        }
    }
}

/// How one Holder factor `(sum_i |a_i|^t r_i)^(1/t)` is majorized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorReduction {
    /// `max_i |a_i| * S^(1/t)`
    MaxAll,
    /// `(sum |a_i|^(ut))^(1/(ut)) * (sum r_i^v)^(1/(vt))` for a secondary
    /// conjugate pair `(u, v)`
    DoubleHolder,
    /// `(sum |a_i|^t)^(1/t) * (max_i r_i)^(1/t)`
    MaxRow,
}

impl FactorReduction {
    pub const ALL: [FactorReduction; 3] = [
        FactorReduction::MaxAll,
        FactorReduction::DoubleHolder,
        FactorReduction::MaxRow,
    ];

    fn ordinal(self) -> u8 {
        match self {
            FactorReduction::MaxAll => 0,
            FactorReduction::DoubleHolder => 1,
            FactorReduction::MaxRow => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            FactorReduction::MaxAll => "max-all",
            FactorReduction::DoubleHolder => "double-holder",
            FactorReduction::MaxRow => "max-row",
        }
    }
}

/// One of the nine branch bounds, as a pair of factor reductions.
///
/// Branch indices 1..=9 enumerate `(p_side, q_side)` with the p-side
/// varying slowest: branches 1-3 have `p_side = MaxAll` with `q_side`
/// running through `MaxAll, DoubleHolder, MaxRow`, and so on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct BranchSelector {
    pub p_side: FactorReduction,
    pub q_side: FactorReduction,
}

impl BranchSelector {
    pub fn new(p_side: FactorReduction, q_side: FactorReduction) -> Self {
        Self { p_side, q_side }
    }

    /// Branch from its 1-based index in listing order.
    pub fn from_index(index: u8) -> Option<Self> {
        if !(1..=9).contains(&index) {
            return None;
        }
        let z = index - 1;
        Some(Self {
            p_side: FactorReduction::ALL[(z / 3) as usize],
            q_side: FactorReduction::ALL[(z % 3) as usize],
        })
    }

    /// 1-based index in listing order.
    pub fn index(&self) -> u8 {
        3 * self.p_side.ordinal() + self.q_side.ordinal() + 1
    }

    /// All nine branches in index order.
    pub fn all() -> [BranchSelector; 9] {
        let mut out = [BranchSelector::new(FactorReduction::MaxAll, FactorReduction::MaxAll); 9];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = BranchSelector::from_index(i as u8 + 1).unwrap();
        }
        out
    }
}

impl std::fmt::Display for BranchSelector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "branch {} ({} x {})",
            self.index(),
            self.p_side.label(),
            self.q_side.label()
        )
    }
}

impl From<BranchSelector> for u8 {
    fn from(b: BranchSelector) -> u8 {
        b.index()
    }
}

impl TryFrom<u8> for BranchSelector {
    type Error = String;
    fn try_from(v: u8) -> Result<Self, Self::Error> {
        BranchSelector::from_index(v).ok_or_else(|| format!("branch index {v} not in 1..=9"))
    }
}

/// Violations reported by [`HolderParams::validate`], all collected rather
/// than failing on the first.
#[derive(Debug, Error, PartialEq)]
pub enum ParamIssue {
    #[error("secondary pair {pair} is required by the {side}-side double-Holder reduction")]
    MissingSecondary {
        pair: &'static str,
        side: &'static str,
    },
    #[error("secondary pair {pair} supplied but the {side}-side reduction does not use it")]
    SuperfluousSecondary {
        pair: &'static str,
        side: &'static str,
    },
}

/// The primary conjugate pair `(p, q)` plus the optional secondary pairs
/// `(alpha, beta)` (p-side) and `(gamma, delta)` (q-side).
///
/// Domain and conjugacy are enforced by [`ConjugatePair`] at construction;
/// [`validate`](Self::validate) checks that exactly the pairs a branch needs
/// are present.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderParams {
    pq: ConjugatePair,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    ab: Option<ConjugatePair>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    gd: Option<ConjugatePair>,
}

impl HolderParams {
    pub fn new(pq: ConjugatePair) -> Self {
        Self {
            pq,
            ab: None,
            gd: None,
        }
    }

    pub fn with_ab(mut self, ab: ConjugatePair) -> Self {
        self.ab = Some(ab);
        self
    }

    pub fn with_gd(mut self, gd: ConjugatePair) -> Self {
        self.gd = Some(gd);
        self
    }

    pub fn pq(&self) -> ConjugatePair {
        self.pq
    }

    pub fn ab(&self) -> Option<ConjugatePair> {
        self.ab
    }

    pub fn gd(&self) -> Option<ConjugatePair> {
        self.gd
    }

    /// Ok iff every pair the branch requires is present and no superfluous
    /// pair is supplied. Returns the full list of violations.
    pub fn validate(&self, branch: BranchSelector) -> Result<(), Vec<ParamIssue>> {
        let mut issues = Vec::new();
        let needs_ab = branch.p_side == FactorReduction::DoubleHolder;
        let needs_gd = branch.q_side == FactorReduction::DoubleHolder;
        match (needs_ab, self.ab.is_some()) {
            (true, false) => issues.push(ParamIssue::MissingSecondary {
                pair: "ab",
                side: "p",
            }),
            (false, true) => issues.push(ParamIssue::SuperfluousSecondary {
                pair: "ab",
                side: "p",
            }),
            _ => {}
        }
        match (needs_gd, self.gd.is_some()) {
            (true, false) => issues.push(ParamIssue::MissingSecondary {
                pair: "gd",
                side: "q",
            }),
            (false, true) => issues.push(ParamIssue::SuperfluousSecondary {
                pair: "gd",
                side: "q",
            }),
            _ => {}
        }
        if issues.is_empty() {
            Ok(())
        } else {
            Err(issues)
        }
    }

    /// The subset of these parameters a given branch consumes, dropping
    /// unused secondary pairs. Errors if a required pair is missing.
    pub fn for_branch(&self, branch: BranchSelector) -> Result<HolderParams, Vec<ParamIssue>> {
        let mut out = HolderParams::new(self.pq);
        let mut issues = Vec::new();
        if branch.p_side == FactorReduction::DoubleHolder {
            match self.ab {
                Some(ab) => out.ab = Some(ab),
                None => issues.push(ParamIssue::MissingSecondary {
                    pair: "ab",
                    side: "p",
                }),
            }
        }
        if branch.q_side == FactorReduction::DoubleHolder {
            match self.gd {
                Some(gd) => out.gd = Some(gd),
                None => issues.push(ParamIssue::MissingSecondary {
                    pair: "gd",
                    side: "q",
                }),
            }
        }
        if issues.is_empty() {
            Ok(out)
        } else {
            Err(issues)
        }
    }
}
