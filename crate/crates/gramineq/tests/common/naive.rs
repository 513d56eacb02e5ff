//! Independent direct-loop reimplementation of every bound, used as the
//! cross-checking oracle. Deliberately plain: no compensated summation, no
//! factor canonicalization, no exponent merging — just the formulas. The
//! only numeric policy shared with the crate is the underflow flush: power
//! sums below 1e-290 count as zero, and a zero factor zeroes a product (at
//! such points both implementations report the point as degenerate the
//! same way).

use gramineq::exponents::{BranchSelector, FactorReduction, HolderParams};
use gramineq::instance::{Instance, InstanceSource};
use gramineq::Complex;

const FLUSH: f64 = 1e-290;

fn flush(v: f64) -> f64 {
    if v < FLUSH {
        0.0
    } else {
        v
    }
}

fn product(factors: &[f64]) -> f64 {
    if factors.contains(&0.0) {
        return 0.0;
    }
    factors.iter().product()
}

pub fn inner(u: &[Complex], v: &[Complex]) -> Complex {
    let mut acc = Complex::new(0.0, 0.0);
    for (a, b) in u.iter().zip(v) {
        acc += a * b.conj();
    }
    acc
}

/// All instance quantities recomputed with plain loops.
pub struct Naive {
    pub n: usize,
    pub g: Vec<Vec<Complex>>,
    pub r: Vec<f64>,
    pub s: f64,
    pub r_max: f64,
    pub proj: Vec<Complex>,
    pub norm_x_sq: f64,
    pub c: Option<Vec<Complex>>,
}

impl Naive {
    pub fn from_instance(instance: &Instance) -> Naive {
        let (g, proj, norm_x_sq) = match instance.source() {
            InstanceSource::Coordinates { x, family } => {
                let vectors: Vec<&[Complex]> = family.iter().collect();
                let n = vectors.len();
                let mut g = vec![vec![Complex::new(0.0, 0.0); n]; n];
                for i in 0..n {
                    for j in 0..n {
                        g[i][j] = inner(vectors[i], vectors[j]);
                    }
                }
                let proj: Vec<Complex> = vectors.iter().map(|y| inner(x, y)).collect();
                (g, proj, inner(x, x).re)
            }
            InstanceSource::GramDirect => (
                instance.gram().rows(),
                instance.proj().proj().to_vec(),
                instance.proj().norm_x_sq(),
            ),
        };
        let n = g.len();
        let r: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| g[i][j].norm()).sum())
            .collect();
        let s = r.iter().sum();
        let r_max = r.iter().cloned().fold(0.0, f64::max);
        Naive {
            n,
            g,
            r,
            s,
            r_max,
            proj,
            norm_x_sq,
            c: instance.c().map(|c| c.to_vec()),
        }
    }

    pub fn abs_c(&self) -> Vec<f64> {
        self.c
            .as_ref()
            .expect("oracle instance has c")
            .iter()
            .map(|z| z.norm())
            .collect()
    }

    pub fn abs_proj(&self) -> Vec<f64> {
        self.proj.iter().map(|z| z.norm()).collect()
    }

    pub fn expansion(&self, a: &[Complex]) -> f64 {
        let mut acc = Complex::new(0.0, 0.0);
        for i in 0..self.n {
            for j in 0..self.n {
                acc += a[i] * a[j].conj() * self.g[i][j];
            }
        }
        acc.re
    }

    pub fn double_sum(&self, a: &[Complex]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                acc += a[i].norm() * a[j].norm() * self.g[i][j].norm();
            }
        }
        acc
    }

    pub fn wps(&self, abs: &[f64], t: f64) -> f64 {
        flush(abs.iter().zip(&self.r).map(|(a, ri)| a.powf(t) * ri).sum())
    }

    pub fn cps(&self, abs: &[f64], t: f64) -> f64 {
        flush(abs.iter().map(|a| a.powf(t)).sum())
    }

    pub fn rps(&self, t: f64) -> f64 {
        flush(self.r.iter().map(|ri| ri.powf(t)).sum())
    }

    pub fn max_abs(&self, abs: &[f64]) -> f64 {
        flush(abs.iter().cloned().fold(0.0, f64::max))
    }

    pub fn holder(&self, abs: &[f64], p: f64, q: f64) -> f64 {
        product(&[
            self.wps(abs, p).powf(1.0 / p),
            self.wps(abs, q).powf(1.0 / q),
        ])
    }

    pub fn side_factor(
        &self,
        abs: &[f64],
        t: f64,
        reduction: FactorReduction,
        secondary: Option<(f64, f64)>,
    ) -> f64 {
        match reduction {
            FactorReduction::MaxAll => product(&[self.max_abs(abs), flush(self.s).powf(1.0 / t)]),
            FactorReduction::DoubleHolder => {
                let (u, v) = secondary.expect("secondary pair supplied");
                product(&[
                    self.cps(abs, u * t).powf(1.0 / (u * t)),
                    self.rps(v).powf(1.0 / (v * t)),
                ])
            }
            FactorReduction::MaxRow => product(&[
                self.cps(abs, t).powf(1.0 / t),
                flush(self.r_max).powf(1.0 / t),
            ]),
        }
    }

    /// Derived (composed) branch bound on the combination chain.
    pub fn branch(&self, abs: &[f64], params: &HolderParams, branch: BranchSelector) -> f64 {
        let p = params.pq().p();
        let q = params.pq().q();
        let ab = params.ab().map(|x| (x.p(), x.q()));
        let gd = params.gd().map(|x| (x.p(), x.q()));
        product(&[
            self.side_factor(abs, p, branch.p_side, ab),
            self.side_factor(abs, q, branch.q_side, gd),
        ])
    }

    /// Printed (literal transcription) branch bound for the two squared
    /// chains; `combination_form` picks the combination display's branch-4
    /// exponent `1/(beta q)` over the Pecaric-type display's `1/(p beta)`.
    pub fn printed_squared(
        &self,
        abs: &[f64],
        params: &HolderParams,
        branch: BranchSelector,
        combination_form: bool,
    ) -> f64 {
        let p = params.pq().p();
        let q = params.pq().q();
        let m = self.max_abs(abs);
        let s = flush(self.s);
        let rm = flush(self.r_max);
        let ab = params.ab().map(|x| (x.p(), x.q()));
        let gd = params.gd().map(|x| (x.p(), x.q()));
        match branch.index() {
            1 => product(&[m * m, s]),
            2 => {
                let (g, d) = gd.unwrap();
                product(&[
                    m,
                    self.cps(abs, g * q).powf(1.0 / (g * q)),
                    s.powf(1.0 / p),
                    self.rps(d).powf(1.0 / (d * q)),
                ])
            }
            3 => product(&[
                m,
                self.cps(abs, q).powf(1.0 / q),
                s.powf(1.0 / p),
                rm.powf(1.0 / q),
            ]),
            4 => {
                let (a, b) = ab.unwrap();
                let row_exp = if combination_form {
                    1.0 / (b * q)
                } else {
                    1.0 / (p * b)
                };
                product(&[
                    m,
                    self.cps(abs, a * p).powf(1.0 / (a * p)),
                    s.powf(1.0 / q),
                    self.rps(b).powf(row_exp),
                ])
            }
            5 => {
                let (a, b) = ab.unwrap();
                let (g, d) = gd.unwrap();
                product(&[
                    self.cps(abs, a * p).powf(1.0 / (a * p)),
                    self.cps(abs, g * q).powf(1.0 / (g * q)),
                    self.rps(b).powf(1.0 / (b * p)),
                    self.rps(d).powf(1.0 / (d * q)),
                ])
            }
            6 => {
                let (a, b) = ab.unwrap();
                product(&[
                    self.cps(abs, q).powf(1.0 / q),
                    self.cps(abs, a * p).powf(1.0 / (a * p)),
                    rm.powf(1.0 / q),
                    self.rps(b).powf(1.0 / (b * p)),
                ])
            }
            7 => product(&[
                m,
                self.cps(abs, p).powf(1.0 / p),
                rm.powf(1.0 / p),
                s.powf(1.0 / q),
            ]),
            8 => {
                let (g, d) = gd.unwrap();
                product(&[
                    self.cps(abs, p).powf(1.0 / p),
                    self.cps(abs, g * q).powf(1.0 / (g * q)),
                    rm.powf(1.0 / p),
                    self.rps(d).powf(1.0 / (d * q)),
                ])
            }
            9 => product(&[
                self.cps(abs, p).powf(1.0 / p),
                self.cps(abs, q).powf(1.0 / q),
                rm,
            ]),
            _ => unreachable!(),
        }
    }

    /// Printed branch bound of the square-rooted chain (Bombieri-type),
    /// coefficients `|(x, y_i)|`, including the `||x||` prefactor.
    pub fn printed_rooted(&self, params: &HolderParams, branch: BranchSelector) -> f64 {
        let abs = self.abs_proj();
        let p = params.pq().p();
        let q = params.pq().q();
        let m = self.max_abs(&abs);
        let s = flush(self.s);
        let rm = flush(self.r_max);
        let ab = params.ab().map(|x| (x.p(), x.q()));
        let gd = params.gd().map(|x| (x.p(), x.q()));
        let norm_x = self.norm_x_sq.sqrt();
        let core = match branch.index() {
            1 => product(&[m, s.powf(0.5)]),
            2 => {
                let (g, d) = gd.unwrap();
                product(&[
                    m.powf(0.5),
                    self.cps(&abs, g * q).powf(1.0 / (2.0 * g * q)),
                    s.powf(1.0 / (2.0 * p)),
                    self.rps(d).powf(1.0 / (2.0 * d * q)),
                ])
            }
            3 => product(&[
                m.powf(0.5),
                self.cps(&abs, q).powf(1.0 / (2.0 * q)),
                s.powf(1.0 / (2.0 * p)),
                rm.powf(1.0 / (2.0 * q)),
            ]),
            4 => {
                let (a, b) = ab.unwrap();
                product(&[
                    m.powf(0.5),
                    self.cps(&abs, a * p).powf(1.0 / (2.0 * a * b)),
                    s.powf(1.0 / (2.0 * q)),
                    self.rps(b).powf(1.0 / (p * b)),
                ])
            }
            5 => {
                let (a, b) = ab.unwrap();
                let (g, d) = gd.unwrap();
                product(&[
                    self.cps(&abs, a * p).powf(1.0 / (2.0 * a * p)),
                    self.cps(&abs, g * q).powf(1.0 / (2.0 * g * q)),
                    self.rps(b).powf(1.0 / (2.0 * b * p)),
                    self.rps(d).powf(1.0 / (2.0 * d * q)),
                ])
            }
            6 => {
                let (a, b) = ab.unwrap();
                product(&[
                    self.cps(&abs, q).powf(1.0 / (2.0 * q)),
                    self.cps(&abs, a * p).powf(1.0 / (2.0 * a * p)),
                    rm.powf(1.0 / (2.0 * p)),
                    self.rps(b).powf(1.0 / (2.0 * b * p)),
                ])
            }
            7 => product(&[
                m.powf(0.5),
                self.cps(&abs, p).powf(1.0 / (2.0 * p)),
                rm.powf(1.0 / (2.0 * p)),
                s.powf(1.0 / (2.0 * q)),
            ]),
            8 => {
                let (g, d) = gd.unwrap();
                product(&[
                    self.cps(&abs, p).powf(1.0 / (2.0 * p)),
                    self.cps(&abs, g * q).powf(1.0 / (2.0 * g * q)),
                    rm.powf(1.0 / (2.0 * p)),
                    self.rps(d).powf(1.0 / (2.0 * d * q)),
                ])
            }
            9 => product(&[
                self.cps(&abs, p).powf(1.0 / (2.0 * p)),
                self.cps(&abs, q).powf(1.0 / (2.0 * q)),
                rm.powf(0.5),
            ]),
            _ => unreachable!(),
        };
        norm_x * core
    }

    pub fn pecaric_lhs(&self) -> f64 {
        let c = self.c.as_ref().expect("oracle instance has c");
        let mut acc = Complex::new(0.0, 0.0);
        for (ci, pi) in c.iter().zip(&self.proj) {
            acc += ci * pi;
        }
        acc.norm_sqr()
    }

    pub fn pecaric_bounds(&self) -> (f64, f64) {
        let abs = self.abs_c();
        let weighted: f64 = abs.iter().zip(&self.r).map(|(a, ri)| a * a * ri).sum();
        let plain: f64 = abs.iter().map(|a| a * a).sum();
        (
            self.norm_x_sq * weighted,
            self.norm_x_sq * plain * self.r_max,
        )
    }

    pub fn pecaric_self(&self) -> (f64, f64, f64) {
        let abs = self.abs_proj();
        let total: f64 = abs.iter().map(|a| a * a).sum();
        let weighted: f64 = abs.iter().zip(&self.r).map(|(a, ri)| a * a * ri).sum();
        (
            total * total,
            self.norm_x_sq * weighted,
            self.norm_x_sq * total * self.r_max,
        )
    }

    pub fn bombieri(&self) -> (f64, f64) {
        let energy: f64 = self.proj.iter().map(|z| z.norm_sqr()).sum();
        (energy, self.norm_x_sq * self.r_max)
    }

    pub fn ratio(&self, p: f64, q: f64) -> (f64, f64) {
        let abs = self.abs_proj();
        let (energy, bound) = self.bombieri();
        let denom = product(&[
            self.cps(&abs, p).powf(1.0 / p),
            self.cps(&abs, q).powf(1.0 / q),
        ]);
        let lhs = if denom == 0.0 {
            0.0
        } else {
            energy * energy / denom
        };
        (lhs, bound)
    }

    /// Middle bound of the square-rooted chain.
    pub fn rooted_middle(&self, p: f64, q: f64) -> f64 {
        let abs = self.abs_proj();
        self.norm_x_sq.sqrt()
            * product(&[
                self.wps(&abs, p).powf(1.0 / (2.0 * p)),
                self.wps(&abs, q).powf(1.0 / (2.0 * q)),
            ])
    }
}
