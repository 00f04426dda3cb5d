//! Frank–Wolfe minimization of `f(x) = lse(η·(h0 − T·Aᵀx))` over the simplex.
//!
//! Every linear minimization oracle call on the simplex returns a vertex, so
//! iterates stay sparse convex combinations of pure strategies.

use crate::error::{Error, Result};
use crate::matrix::{Matrix, SimplexVector};
use crate::softmax::{log_sum_exp, softmax};

/// Step-size rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepRule {
    /// `γ_s = 2/(s+2)`; carries the `O(1/s)` guarantee.
    Classic,
    /// Exact minimization along the Frank–Wolfe segment.
    LineSearch,
    /// Away-step variant with exact line search.
    AwayStep,
}

/// `f(x) = lse(base + scale·(−Aᵀx))` with `base = η·h0` and `scale = η·T`.
#[derive(Debug, Clone)]
pub struct LseObjective<'a> {
    a: &'a Matrix,
    base: Vec<f64>,
    scale: f64,
}

impl<'a> LseObjective<'a> {
    pub fn new(a: &'a Matrix, h0: &[f64], horizon: f64, eta: f64) -> Result<Self> {
        if h0.len() != a.cols() {
            return Err(Error::dim("initial history (m)", a.cols(), h0.len()));
        }
        Ok(LseObjective {
            a,
            base: h0.iter().map(|v| eta * v).collect(),
            scale: eta * horizon,
        })
    }

    /// Exponent vector `z(x)`.
    pub fn exponents(&self, x: &[f64]) -> Vec<f64> {
        let ax = self.a.left_mul(x);
        self.base.iter().zip(&ax).map(|(b, v)| b - self.scale * v).collect()
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        log_sum_exp(&self.exponents(x))
    }

    /// `∇f(x) = −η·T·A·softmax(z(x))`.
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let p = softmax(&self.exponents(x));
        self.a.right_mul(&p).into_iter().map(|v| -self.scale * v).collect()
    }

    /// Upper bound `β·R²` on the curvature constant, with `R = 2` the ℓ1
    /// diameter of the simplex and `β = (η·T·max|A|)²` the ℓ1 smoothness of `f`.
    pub fn curvature_bound(&self) -> f64 {
        let beta = (self.scale * self.a.max_abs()).powi(2);
        4.0 * beta
    }
}

#[derive(Debug, Clone)]
pub struct FwOptions {
    pub rule: StepRule,
    /// Stop once the Frank–Wolfe duality gap drops to this level.
    pub gap_tol: f64,
    pub max_iter: u64,
    pub start: Option<SimplexVector>,
    /// Record `(s, f(x_s), gap_s)` for every iteration when set.
    pub log: bool,
}

#[derive(Debug, Clone)]
pub struct FwResult {
    pub x: SimplexVector,
    pub value: f64,
    /// Duality gap `∇f(x)·(x − s)` at the returned point; bounds `f(x) − f*`.
    pub gap: f64,
    pub iterations: u64,
    pub converged: bool,
    pub trace: Vec<(u64, f64, f64)>,
}

pub fn minimize(obj: &LseObjective<'_>, opts: &FwOptions) -> Result<FwResult> {
    let n = obj.a.rows();
    let mut x = match &opts.start {
        Some(s) if s.dim() != n => return Err(Error::dim("warm start", n, s.dim())),
        Some(s) => s.weights().to_vec(),
        None => vec![1.0 / n as f64; n],
    };
    let mut trace = Vec::new();
    let mut s = 0u64;
    loop {
        let g = obj.gradient(&x);
        let fw_vertex = argmin(&g);
        let gx: f64 = g.iter().zip(&x).map(|(a, b)| a * b).sum();
        let gap = (gx - g[fw_vertex]).max(0.0);
        if opts.log {
            trace.push((s, obj.value(&x), gap));
        }
        if gap <= opts.gap_tol || s >= opts.max_iter {
            let converged = gap <= opts.gap_tol;
            return Ok(FwResult {
                value: obj.value(&x),
                x: SimplexVector::normalized(x)?,
                gap,
                iterations: s,
                converged,
                trace,
            });
        }
        match opts.rule {
            StepRule::Classic => {
                let gamma = 2.0 / (s as f64 + 2.0);
                step_towards(&mut x, fw_vertex, gamma);
            }
            StepRule::LineSearch => {
                let gamma = line_search(obj, &x, &direction_to_vertex(&x, fw_vertex), 1.0);
                step_towards(&mut x, fw_vertex, gamma);
            }
            StepRule::AwayStep => {
                let away = (0..n)
                    .filter(|&i| x[i] > 0.0)
                    .max_by(|&i, &j| g[i].total_cmp(&g[j]).then(j.cmp(&i)))
                    .expect("iterate has non-empty support");
                let away_gap = g[away] - gx;
                if gap >= away_gap || x[away] >= 1.0 {
                    let gamma = line_search(obj, &x, &direction_to_vertex(&x, fw_vertex), 1.0);
                    step_towards(&mut x, fw_vertex, gamma);
                } else {
                    let gmax = x[away] / (1.0 - x[away]);
                    let d: Vec<f64> = (0..n)
                        .map(|i| x[i] - if i == away { 1.0 } else { 0.0 })
                        .collect();
                    let gamma = line_search(obj, &x, &d, gmax);
                    for (xi, di) in x.iter_mut().zip(&d) {
                        *xi += gamma * di;
                    }
                    if gamma >= gmax {
                        x[away] = 0.0;
                    }
                    x.iter_mut().for_each(|v| *v = v.max(0.0));
                    let sum: f64 = x.iter().sum();
                    x.iter_mut().for_each(|v| *v /= sum);
                }
            }
        }
        s += 1;
    }
}

fn argmin(v: &[f64]) -> usize {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i] < v[best] {
            best = i;
        }
    }
    best
}

fn direction_to_vertex(x: &[f64], vertex: usize) -> Vec<f64> {
    (0..x.len())
        .map(|i| if i == vertex { 1.0 } else { 0.0 } - x[i])
        .collect()
}

fn step_towards(x: &mut [f64], vertex: usize, gamma: f64) {
    for (i, xi) in x.iter_mut().enumerate() {
        *xi *= 1.0 - gamma;
        if i == vertex {
            *xi += gamma;
        }
    }
}

/// Minimizes `φ(γ) = f(x + γ·d)` over `[0, gmax]`. `φ` is convex with
/// `φ'(γ) = softmax(z + γ·w)·w` and `φ'' = Var(w)`, where `w = −η·T·Aᵀd`.
fn line_search(obj: &LseObjective<'_>, x: &[f64], d: &[f64], gmax: f64) -> f64 {
    let z = obj.exponents(x);
    let w: Vec<f64> = obj.a.left_mul(d).into_iter().map(|v| -obj.scale * v).collect();
    let deriv = |gamma: f64| -> (f64, f64) {
        let zz: Vec<f64> = z.iter().zip(&w).map(|(a, b)| a + gamma * b).collect();
        let p = softmax(&zz);
        let mean: f64 = p.iter().zip(&w).map(|(p, w)| p * w).sum();
        let var: f64 = p.iter().zip(&w).map(|(p, w)| p * (w - mean).powi(2)).sum();
        (mean, var)
    };
    if deriv(0.0).0 >= 0.0 {
        return 0.0;
    }
    if deriv(gmax).0 <= 0.0 {
        return gmax;
    }
    // Safeguarded Newton on φ' inside a shrinking bracket.
    let wscale = w.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    let (mut lo, mut hi) = (0.0, gmax);
    let mut gamma = 0.5 * gmax;
    for _ in 0..200 {
        let (d1, d2) = deriv(gamma);
        if d1.abs() <= 1e-15 * wscale {
            break;
        }
        if d1 > 0.0 {
            hi = gamma;
        } else {
            lo = gamma;
        }
        if hi - lo <= 1e-16 * gmax {
            break;
        }
        let newton = gamma - d1 / d2;
        gamma = if d2 > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    gamma
}
