use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use super::{PhasePoint, SpinRep};
use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on [-1, 1], nodes in descending order.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..(n + 1) / 2 {
        // Tricomi initial guess, then Newton on P_n
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = x;
        nodes[n - 1 - i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Gauss-Legendre rule in double-double precision: the f64 nodes of
/// [`gauss_legendre`] polished by one more round of Newton steps.
///
/// Used where a projection has to resolve coefficients far below unit size,
/// e.g. the high-L overlap coefficients, whose f64 quadrature error floor is
/// about 1e-15 absolute.
pub fn gauss_legendre_dd(n: usize) -> (Vec<TwoFloat>, Vec<TwoFloat>) {
    let (x0, _) = gauss_legendre(n);
    let one = TwoFloat::from(1.0);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for xf in x0 {
        let mut x = TwoFloat::from(xf);
        for _ in 0..3 {
            let (p, d) = legendre_with_derivative_dd(n, x);
            if p == 0.0 {
                break;
            }
            x -= dd_div(p, d);
        }
        let (_, d) = legendre_with_derivative_dd(n, x);
        nodes.push(x);
        weights.push(dd_div(TwoFloat::from(2.0), (one - x * x) * d * d));
    }
    (nodes, weights)
}

/// `a / b` to double-double accuracy. twofloat's `TwoFloat / TwoFloat` only
/// delivers f64 accuracy, so the residual is divided once more.
fn dd_div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q = TwoFloat::from(a.hi() / b.hi());
    q + (a - b * q) / b.hi()
}

/// `P_L(x)` for `L = 0..=lmax` in double-double precision.
pub fn legendre_dd(lmax: usize, x: TwoFloat) -> Vec<TwoFloat> {
    let mut p = vec![TwoFloat::from(1.0); lmax + 1];
    if lmax >= 1 {
        p[1] = x;
    }
    for k in 2..=lmax {
        let kf = k as f64;
        p[k] = (x * p[k - 1] * (2.0 * kf - 1.0) - p[k - 2] * (kf - 1.0)) / kf;
    }
    p
}

fn legendre_with_derivative_dd(n: usize, x: TwoFloat) -> (TwoFloat, TwoFloat) {
    if n == 0 {
        return (TwoFloat::from(1.0), TwoFloat::from(0.0));
    }
    let p = legendre_dd(n, x);
    let nf = n as f64;
    (p[n], dd_div((x * p[n] - p[n - 1]) * nf, x * x - 1.0))
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

/// Product quadrature on the sphere for the measure
/// `dμ = (2j+1)/(4π) sinθ dθ dφ`, whose total mass is `Tr I = 2j+1`.
///
/// Nodes are stored θ-major: index `i * n_phi + k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    pub rep: SpinRep,
    pub n_theta: usize,
    pub n_phi: usize,
    pub nodes: Vec<PhasePoint>,
    pub weights: Vec<f64>,
}

impl QuadratureGrid {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate(&self, values: &[Complex64]) -> Complex64 {
        self.weights.iter().zip(values).map(|(w, v)| v * *w).sum()
    }

    /// Checks that the grid integrates products of two band-limited functions
    /// of degree ≤ 2j exactly.
    pub fn check_exact_for_products(&self) -> Result<()> {
        let twice_j = self.rep.twice_j() as usize;
        if self.n_theta < twice_j + 1 || self.n_phi < 2 * twice_j + 1 {
            return Err(Error::GridTooCoarse(format!(
                "{}x{} grid cannot integrate degree-{} products exactly for j = {} \
                 (need n_theta >= {}, n_phi >= {})",
                self.n_theta,
                self.n_phi,
                2 * twice_j,
                self.rep,
                twice_j + 1,
                2 * twice_j + 1
            )));
        }
        Ok(())
    }
}

/// Minimum θ and φ node counts accepted by [`sphere_grid`].
pub fn grid_thresholds(rep: &SpinRep) -> (usize, usize) {
    let tj = rep.twice_j() as usize;
    (2 * tj + 3, 2 * tj + 1)
}

/// Gauss-Legendre in cos θ × uniform φ grid.
///
/// Defaults are `n_theta = 4j+3`, `n_phi = 4j+5`; smaller counts than
/// `4j+3` / `4j+1` are rejected.
pub fn sphere_grid(
    rep: &SpinRep,
    n_theta: Option<usize>,
    n_phi: Option<usize>,
) -> Result<QuadratureGrid> {
    let tj = rep.twice_j() as usize;
    let (min_theta, min_phi) = grid_thresholds(rep);
    let n_theta = n_theta.unwrap_or(min_theta);
    let n_phi = n_phi.unwrap_or(2 * tj + 5);
    if n_theta < min_theta || n_phi < min_phi {
        return Err(Error::GridTooCoarse(format!(
            "{n_theta}x{n_phi} requested for j = {rep}; need n_theta >= {min_theta} and n_phi >= {min_phi}"
        )));
    }
    let (x, w) = gauss_legendre(n_theta);
    let scale = rep.dim() as f64 / (4.0 * PI) * (2.0 * PI / n_phi as f64);
    let mut nodes = Vec::with_capacity(n_theta * n_phi);
    let mut weights = Vec::with_capacity(n_theta * n_phi);
    for (xi, wi) in x.iter().zip(&w) {
        let theta = xi.clamp(-1.0, 1.0).acos();
        for k in 0..n_phi {
            let phi = 2.0 * PI * k as f64 / n_phi as f64;
            nodes.push(PhasePoint { theta, phi });
            weights.push(scale * wi);
        }
    }
    Ok(QuadratureGrid {
        rep: *rep,
        n_theta,
        n_phi,
        nodes,
        weights,
    })
}
