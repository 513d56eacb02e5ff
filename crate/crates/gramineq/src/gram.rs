//! Vector families, inner products, Gram matrices and their absolute row sums.
//!
//! The inner product is linear in the **first** argument and conjugate-linear
//! in the second: `(u, v) = sum_k u_k * conj(v_k)`. Every bound downstream
//! consumes only the derived nonnegative data: `|G_ij|`, the absolute row
//! sums `r_i = sum_j |G_ij|`, their total `S = sum_i r_i`, and `max_i r_i`.
//!
//! All types are immutable after construction and reject non-finite entries
//! at the boundary.

use num_complex::Complex64;
use thiserror::Error;

use crate::sum::Accumulator;

/// Scalar type for all coordinates, coefficients and Gram entries.
pub type Complex = Complex64;

#[derive(Debug, Error, PartialEq)]
pub enum GramError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },
    #[error("vector family must contain at least one vector")]
    EmptyFamily,
    #[error("vectors must have dimension >= 1")]
    EmptyVector,
    #[error("matrix is not square: {rows} rows but row {row} has {cols} entries")]
    NotSquare {
        rows: usize,
        row: usize,
        cols: usize,
    },
    #[error(
        "matrix is not Hermitian: entry ({i},{j}) deviates from conj(entry ({j},{i})) \
         by {deviation:e} (allowed {allowed:e})"
    )]
    NotHermitian {
        i: usize,
        j: usize,
        deviation: f64,
        allowed: f64,
    },
    #[error("Gram diagonal entry ({i},{i}) is negative: {value}")]
    NegativeDiagonal { i: usize, value: f64 },
    #[error("norm_x_sq must be nonnegative, got {value}")]
    NegativeNorm { value: f64 },
}

fn check_finite(values: &[Complex], context: &'static str) -> Result<(), GramError> {
    if values.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(GramError::NonFinite { context })
    }
}

/// `(u, v) = sum_k u_k * conj(v_k)`, compensated per component.
///
/// Conjugate-symmetric bit-for-bit: `inner_product(v, u)` equals
/// `conj(inner_product(u, v))` exactly, because each term's real part is the
/// same product sum and the imaginary parts are term-wise negations.
pub fn inner_product(u: &[Complex], v: &[Complex]) -> Result<Complex, GramError> {
    if u.len() != v.len() {
        return Err(GramError::DimensionMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    check_finite(u, "inner_product left argument")?;
    check_finite(v, "inner_product right argument")?;
    let mut re = Accumulator::new();
    let mut im = Accumulator::new();
    for (a, b) in u.iter().zip(v) {
        let term = a * b.conj();
        re.add(term.re);
        im.add(term.im);
    }
    Ok(Complex::new(re.value(), im.value()))
}

/// A finite family of `n >= 1` coordinate vectors sharing dimension `d >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorFamily {
    vectors: Vec<Vec<Complex>>,
}

impl VectorFamily {
    pub fn new(vectors: Vec<Vec<Complex>>) -> Result<Self, GramError> {
        let first = vectors.first().ok_or(GramError::EmptyFamily)?;
        let d = first.len();
        if d == 0 {
            return Err(GramError::EmptyVector);
        }
        for v in &vectors {
            if v.len() != d {
                return Err(GramError::DimensionMismatch {
                    left: d,
                    right: v.len(),
                });
            }
            check_finite(v, "vector family entry")?;
        }
        Ok(Self { vectors })
    }

    /// Number of vectors `n`.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        false // n >= 1 by construction
    }

    /// Shared coordinate dimension `d`.
    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn vector(&self, i: usize) -> &[Complex] {
        &self.vectors[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[Complex]> {
        self.vectors.iter().map(Vec::as_slice)
    }

    pub fn into_vectors(self) -> Vec<Vec<Complex>> {
        self.vectors
    }
}

/// Hermitian Gram matrix `G_ij = (y_i, y_j)` with its absolute row sums
/// `r_i = sum_j |G_ij|` and total `S = sum_i r_i`.
///
/// Positive semidefiniteness is *not* enforced for matrix-direct input: the
/// branch bounds consume only `|G_ij|`, and the audit deliberately probes
/// arbitrary Hermitian data.
#[derive(Debug, Clone, PartialEq)]
pub struct GramData {
    n: usize,
    entries: Vec<Complex>, // row-major n*n
    abs_row_sums: Vec<f64>,
    total_abs_sum: f64,
}

/// Relative Hermitian deviation admitted by [`GramData::from_matrix`] before
/// symmetrization is refused.
pub const HERMITIAN_REL_TOL: f64 = 1e-9;

impl GramData {
    /// Gram matrix of a coordinate family.
    ///
    /// The upper triangle is computed with [`inner_product`] and mirrored by
    /// conjugation, so Hermitian symmetry holds exactly.
    pub fn from_family(family: &VectorFamily) -> Self {
        let n = family.len();
        let mut entries = vec![Complex::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in i..n {
                let g = inner_product(family.vector(i), family.vector(j))
                    .expect("family vectors share dimension and are finite");
                entries[i * n + j] = g;
                entries[j * n + i] = g.conj();
            }
            // (y_i, y_i) has exactly zero imaginary part term by term.
            entries[i * n + i].im = 0.0;
        }
        Self::with_entries(n, entries)
    }

    /// Accepts a raw Hermitian matrix, symmetrizing `G <- (G + G^H)/2`.
    ///
    /// Rejects non-square input, non-finite entries, a Hermitian deviation
    /// above [`HERMITIAN_REL_TOL`] relative to the largest entry magnitude
    /// (the error names the worst entry), and negative diagonal values.
    #[allow(clippy::needless_range_loop)] // i and j both index rows for the mirrored entry
    pub fn from_matrix(rows: Vec<Vec<Complex>>) -> Result<Self, GramError> {
        let n = rows.len();
        if n == 0 {
            return Err(GramError::EmptyFamily);
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GramError::NotSquare {
                    rows: n,
                    row: i,
                    cols: row.len(),
                });
            }
            check_finite(row, "gram matrix entry")?;
        }
        let scale = rows
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0_f64, f64::max);
        let allowed = HERMITIAN_REL_TOL * scale;
        let mut worst = (0usize, 0usize, 0.0_f64);
        for i in 0..n {
            for j in i..n {
                let dev = (rows[i][j] - rows[j][i].conj()).norm();
                if dev > worst.2 {
                    worst = (i, j, dev);
                }
            }
        }
        if worst.2 > allowed {
            return Err(GramError::NotHermitian {
                i: worst.0,
                j: worst.1,
                deviation: worst.2,
                allowed,
            });
        }
        let mut entries = vec![Complex::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = (rows[i][j] + rows[j][i].conj()) / 2.0;
            }
        }
        for i in 0..n {
            let diag = entries[i * n + i].re;
            if diag < 0.0 {
                return Err(GramError::NegativeDiagonal { i, value: diag });
            }
            entries[i * n + i].im = 0.0;
        }
        Ok(Self::with_entries(n, entries))
    }

    fn with_entries(n: usize, entries: Vec<Complex>) -> Self {
        let mut abs_row_sums = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = Accumulator::new();
            for j in 0..n {
                acc.add(entries[i * n + j].norm());
            }
            abs_row_sums.push(acc.value());
        }
        let mut total = Accumulator::new();
        for &r in &abs_row_sums {
            total.add(r);
        }
        Self {
            n,
            entries,
            total_abs_sum: total.value(),
            abs_row_sums,
        }
    }

    /// Number of vectors `n`.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false // n >= 1 by construction
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex {
        self.entries[i * self.n + j]
    }

    /// `r_i = sum_j |G_ij|`.
    pub fn abs_row_sums(&self) -> &[f64] {
        &self.abs_row_sums
    }

    /// `S = sum_ij |G_ij|`.
    pub fn total_abs_sum(&self) -> f64 {
        self.total_abs_sum
    }

    /// `max_i r_i`.
    pub fn max_row_sum(&self) -> f64 {
        self.abs_row_sums.iter().copied().fold(0.0, f64::max)
    }

    /// Rows as owned vectors, e.g. for serialization.
    pub fn rows(&self) -> Vec<Vec<Complex>> {
        (0..self.n)
            .map(|i| self.entries[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }
}

/// The inner products `(x, y_i)` and `||x||^2` for a fixed vector `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionData {
    proj: Vec<Complex>,
    norm_x_sq: f64,
}

impl ProjectionData {
    /// Builds from explicit values (the Gram-direct input path).
    pub fn new(proj: Vec<Complex>, norm_x_sq: f64) -> Result<Self, GramError> {
        if proj.is_empty() {
            return Err(GramError::EmptyFamily);
        }
        check_finite(&proj, "projection entry")?;
        if !norm_x_sq.is_finite() {
            return Err(GramError::NonFinite {
                context: "norm_x_sq",
            });
        }
        if norm_x_sq < 0.0 {
            return Err(GramError::NegativeNorm { value: norm_x_sq });
        }
        Ok(Self { proj, norm_x_sq })
    }

    /// `proj_i = (x, y_i)`, `norm_x_sq = (x, x)`.
    pub fn from_coordinates(x: &[Complex], family: &VectorFamily) -> Result<Self, GramError> {
        if x.len() != family.dim() {
            return Err(GramError::DimensionMismatch {
                left: x.len(),
                right: family.dim(),
            });
        }
        let proj = family
            .iter()
            .map(|y| inner_product(x, y))
            .collect::<Result<Vec<_>, _>>()?;
        let norm_x_sq = inner_product(x, x)?.re;
        Ok(Self { proj, norm_x_sq })
    }

    pub fn len(&self) -> usize {
        self.proj.len()
    }

    pub fn is_empty(&self) -> bool {
        false // n >= 1 by construction
    }

    pub fn proj(&self) -> &[Complex] {
        &self.proj
    }

    pub fn norm_x_sq(&self) -> f64 {
        self.norm_x_sq
    }
}
