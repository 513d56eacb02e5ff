//! A concrete problem instance: Gram data, projections of a fixed vector
//! `x`, and optional coefficients `c`.
//!
//! Instances come either from coordinates (the family and `x` are kept for
//! re-serialization) or directly from a Hermitian matrix plus projection
//! values. Coordinate instances satisfy the geometric consistency every
//! chain link relies on; Gram-direct instances only guarantee the links
//! that are pure majorizations of nonnegative data (see the audit).

use crate::gram::{Complex, GramData, GramError, ProjectionData, VectorFamily};

#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSource {
    Coordinates {
        x: Vec<Complex>,
        family: VectorFamily,
    },
    GramDirect,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    source: InstanceSource,
    gram: GramData,
    proj: ProjectionData,
    c: Option<Vec<Complex>>,
}

fn check_coefficients(c: &Option<Vec<Complex>>, n: usize) -> Result<(), GramError> {
    if let Some(c) = c {
        if c.len() != n {
            return Err(GramError::DimensionMismatch {
                left: c.len(),
                right: n,
            });
        }
        if !c.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(GramError::NonFinite {
                context: "coefficients",
            });
        }
    }
    Ok(())
}

impl Instance {
    pub fn from_coordinates(
        x: Vec<Complex>,
        family: VectorFamily,
        c: Option<Vec<Complex>>,
    ) -> Result<Self, GramError> {
        check_coefficients(&c, family.len())?;
        let gram = GramData::from_family(&family);
        let proj = ProjectionData::from_coordinates(&x, &family)?;
        Ok(Self {
            source: InstanceSource::Coordinates { x, family },
            gram,
            proj,
            c,
        })
    }

    pub fn from_gram_parts(
        gram: GramData,
        proj: ProjectionData,
        c: Option<Vec<Complex>>,
    ) -> Result<Self, GramError> {
        if proj.len() != gram.len() {
            return Err(GramError::DimensionMismatch {
                left: proj.len(),
                right: gram.len(),
            });
        }
        check_coefficients(&c, gram.len())?;
        Ok(Self {
            source: InstanceSource::GramDirect,
            gram,
            proj,
            c,
        })
    }

    pub fn source(&self) -> &InstanceSource {
        &self.source
    }

    pub fn is_gram_direct(&self) -> bool {
        matches!(self.source, InstanceSource::GramDirect)
    }

    /// Family size `n`.
    pub fn len(&self) -> usize {
        self.gram.len()
    }

    pub fn is_empty(&self) -> bool {
        false // n >= 1 by construction
    }

    pub fn gram(&self) -> &GramData {
        &self.gram
    }

    pub fn proj(&self) -> &ProjectionData {
        &self.proj
    }

    pub fn c(&self) -> Option<&[Complex]> {
        self.c.as_deref()
    }
}
