//! Instance files and evaluation reports.
//!
//! Instances are structured JSON, UTF-8, with complex numbers as `[re, im]`
//! pairs (no `"a+bi"` string parsing — unambiguous and locale-free). A file
//! holds exactly one of two shapes:
//!
//! ```json
//! {"x": [[1,0],[0,0]], "ys": [[[1,0],[0,0]], [[0,0],[1,0]]], "c": [[1,0],[1,0]]}
//! {"gram": [[[1,0],[0,1]],[[0,-1],[1,0]]], "proj": [[1,0],[0,0]], "norm_x_sq": 1.0}
//! ```
//!
//! `c` is optional in both. Parsing rejects NaN/Inf and dimension
//! mismatches. Reports round-trip through serde losslessly (f64 values use
//! shortest-exact decimal representation); the flat tabular export prints
//! 17 significant digits so values replay exactly.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::Form;
use crate::exponents::HolderParams;
use crate::gram::{Complex, GramData, GramError, ProjectionData, VectorFamily};
use crate::instance::{Instance, InstanceSource};

#[derive(Debug, Error)]
pub enum InstanceFileError {
    #[error("instance file must have exactly one shape: either x+ys or gram+proj+norm_x_sq")]
    AmbiguousShape,
    #[error("missing field {0}")]
    MissingField(&'static str),
    #[error("non-finite value in field {0}")]
    NonFinite(&'static str),
    #[error(transparent)]
    Gram(#[from] GramError),
}

/// On-disk instance schema; see the module docs for the two shapes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub x: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ys: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gram: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub proj: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub norm_x_sq: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub c: Option<Vec<[f64; 2]>>,
}

fn to_complex(pairs: &[[f64; 2]]) -> Vec<Complex> {
    pairs.iter().map(|&[re, im]| Complex::new(re, im)).collect()
}

fn from_complex(values: &[Complex]) -> Vec<[f64; 2]> {
    values.iter().map(|z| [z.re, z.im]).collect()
}

fn check_pairs(name: &'static str, pairs: &[[f64; 2]]) -> Result<(), InstanceFileError> {
    if pairs.iter().flatten().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(InstanceFileError::NonFinite(name))
    }
}

impl InstanceFile {
    pub fn into_instance(self) -> Result<Instance, InstanceFileError> {
        let coords = self.x.is_some() || self.ys.is_some();
        let direct = self.gram.is_some() || self.proj.is_some() || self.norm_x_sq.is_some();
        if coords == direct {
            return Err(InstanceFileError::AmbiguousShape);
        }
        let c = match &self.c {
            Some(pairs) => {
                check_pairs("c", pairs)?;
                Some(to_complex(pairs))
            }
            None => None,
        };
        if coords {
            let x = self.x.ok_or(InstanceFileError::MissingField("x"))?;
            let ys = self.ys.ok_or(InstanceFileError::MissingField("ys"))?;
            check_pairs("x", &x)?;
            for row in &ys {
                check_pairs("ys", row)?;
            }
            let family = VectorFamily::new(ys.iter().map(|v| to_complex(v)).collect())?;
            Ok(Instance::from_coordinates(to_complex(&x), family, c)?)
        } else {
            let gram = self.gram.ok_or(InstanceFileError::MissingField("gram"))?;
            let proj = self.proj.ok_or(InstanceFileError::MissingField("proj"))?;
            let norm_x_sq = self
                .norm_x_sq
                .ok_or(InstanceFileError::MissingField("norm_x_sq"))?;
            for row in &gram {
                check_pairs("gram", row)?;
            }
            check_pairs("proj", &proj)?;
            if !norm_x_sq.is_finite() {
                return Err(InstanceFileError::NonFinite("norm_x_sq"));
            }
            let gram = GramData::from_matrix(gram.iter().map(|v| to_complex(v)).collect())?;
            let proj = ProjectionData::new(to_complex(&proj), norm_x_sq)?;
            Ok(Instance::from_gram_parts(gram, proj, c)?)
        }
    }

    pub fn from_instance(instance: &Instance) -> Self {
        let c = instance.c().map(from_complex);
        match instance.source() {
            InstanceSource::Coordinates { x, family } => InstanceFile {
                x: Some(from_complex(x)),
                ys: Some(family.iter().map(from_complex).collect()),
                c,
                ..Default::default()
            },
            InstanceSource::GramDirect => InstanceFile {
                gram: Some(
                    instance
                        .gram()
                        .rows()
                        .iter()
                        .map(|row| from_complex(row))
                        .collect(),
                ),
                proj: Some(from_complex(instance.proj().proj())),
                norm_x_sq: Some(instance.proj().norm_x_sq()),
                c,
                ..Default::default()
            },
        }
    }
}

/// One bound evaluation, flattened for reporting. `lhs` is the left-hand
/// side of the chain the bound belongs to; `tightness` is `value / lhs`,
/// absent when the lhs vanishes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub branch: Option<u8>,
    pub form: Form,
    pub p: f64,
    pub q: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub delta: Option<f64>,
    pub value: f64,
    pub lhs: f64,
    pub slack: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tightness: Option<f64>,
}

impl BoundRow {
    pub fn new(name: impl Into<String>, value: f64, lhs: f64, params: &HolderParams) -> Self {
        BoundRow {
            name: name.into(),
            branch: None,
            form: Form::Derived,
            p: params.pq().p(),
            q: params.pq().q(),
            alpha: params.ab().map(|x| x.p()),
            beta: params.ab().map(|x| x.q()),
            gamma: params.gd().map(|x| x.p()),
            delta: params.gd().map(|x| x.q()),
            value,
            lhs,
            slack: value - lhs,
            tightness: (lhs > 0.0).then(|| value / lhs),
        }
    }

    pub fn from_bound(bound: &crate::bounds::BoundValue, lhs: f64) -> Self {
        let mut row = BoundRow::new(bound.name.clone(), bound.value, lhs, &bound.params);
        row.branch = bound.branch.map(|b| b.index());
        row.form = bound.form;
        row
    }
}

/// Basic facts about the instance under evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSummary {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d: Option<usize>,
    pub gram_direct: bool,
    pub has_coefficients: bool,
    /// `max_ij |G_ij - delta_ij|`: 0 for an exactly orthonormal family.
    pub orthonormal_deviation: f64,
    /// Notes whether Bessel's inequality applies (orthonormal family) and
    /// hence whether the Bombieri bound collapses to `||x||^2`.
    pub bessel_note: String,
}

impl InstanceSummary {
    pub fn from_instance(instance: &Instance) -> Self {
        let gram = instance.gram();
        let n = gram.len();
        let mut dev = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((gram.entry(i, j) - Complex::new(target, 0.0)).norm());
            }
        }
        let bessel_note = if dev <= 1e-9 {
            "family is orthonormal within 1e-9: Bombieri's bound equals ||x||^2 \
             (Bessel's inequality applies)"
                .to_string()
        } else {
            format!(
                "family is not orthonormal (deviation {dev:.3e}): Bessel's inequality \
                 does not apply directly; Bombieri's bound is ||x||^2 max_i r_i"
            )
        };
        let d = match instance.source() {
            InstanceSource::Coordinates { family, .. } => Some(family.dim()),
            InstanceSource::GramDirect => None,
        };
        InstanceSummary {
            n,
            d,
            gram_direct: instance.is_gram_direct(),
            has_coefficients: instance.c().is_some(),
            orthonormal_deviation: dev,
            bessel_note,
        }
    }
}

/// The structured evaluation report: the full bound ladder as rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub instance: InstanceSummary,
    pub params: HolderParams,
    pub rows: Vec<BoundRow>,
}

/// Fixed column order of the flat tabular export.
pub const TABULAR_COLUMNS: [&str; 13] = [
    "name",
    "branch",
    "form",
    "p",
    "q",
    "alpha",
    "beta",
    "gamma",
    "delta",
    "value",
    "lhs",
    "slack",
    "tightness",
];

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt17).unwrap_or_default()
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One CSV row per bound, 17 significant digits, columns as in
    /// [`TABULAR_COLUMNS`].
    pub fn to_tabular(&self) -> String {
        let mut out = TABULAR_COLUMNS.join(",");
        out.push('\n');
        for row in &self.rows {
            let form = match row.form {
                Form::Derived => "derived",
                Form::Printed => "printed",
            };
            let branch = row.branch.map(|b| b.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                row.name,
                branch,
                form,
                fmt17(row.p),
                fmt17(row.q),
                fmt_opt(row.alpha),
                fmt_opt(row.beta),
                fmt_opt(row.gamma),
                fmt_opt(row.delta),
                fmt17(row.value),
                fmt17(row.lhs),
                fmt17(row.slack),
                fmt_opt(row.tightness),
            ));
        }
        out
    }
}
