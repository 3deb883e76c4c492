//! Heisenberg-Weyl phase space (the complex plane) on a truncated Fock space.
//!
//! The kernels are the closed-form s-ordered family
//! `Δ^(s)(α) = 2/(1+s) · D(α) r^N D(α)†` with `r = (s−1)/(s+1)`, using the same
//! orientation as the sphere: `s = 1` is the Q function and `Δ^(1)(α) = |α⟩⟨α|`,
//! `s = 0` is the Wigner function (twice the displaced parity).
//!
//! The phase-space measure is `d²α/π`, so the Q function of a normalized state
//! integrates to one.
//!
//! For `s < 0` the factor `|r|^n` grows with `n`, so the number-basis product
//! [`HwKernel::cg_kernel`] is ill-conditioned there. Distribution values go
//! through [`HwKernel::kernel_block`] instead, which evaluates the kernel on
//! the support of the operator in closed form; they converge as the cutoff
//! grows and stay accurate for `s < 0`.

use std::f64::consts::PI;

use log::warn;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::SValue;
use crate::linalg::OperatorMatrix;
use crate::qpd::{GridSpec, Quadrature, QpdGrid, System};

/// A phase-space point `α ∈ ℂ` (quadrature units where `|α|²` is a mean photon number).
pub type PlanePoint = Complex64;

/// Truncated Fock space spanned by `|0⟩ … |n_max⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FockRep {
    n_max: usize,
}

impl FockRep {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidCutoff(n_max));
        }
        Ok(Self { n_max })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.n_max + 1
    }

    /// Annihilation operator.
    pub fn annihilation(&self) -> OperatorMatrix {
        let d = self.dim();
        OperatorMatrix::from_fn(d, d, |r, c| {
            if c == r + 1 {
                Complex64::new((c as f64).sqrt(), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn fock(&self, n: usize) -> Result<Vec<Complex64>> {
        if n > self.n_max {
            return Err(Error::InvalidState(format!(
                "Fock state |{n}⟩ exceeds the cutoff n_max = {}",
                self.n_max
            )));
        }
        let mut v = vec![Complex64::new(0.0, 0.0); self.dim()];
        v[n] = Complex64::new(1.0, 0.0);
        Ok(v)
    }
}

/// `(s−1)/(s+1)`, the geometric ratio of the s-ordered kernel in the number basis.
pub fn kernel_ratio(s: SValue) -> f64 {
    (s.value() - 1.0) / (s.value() + 1.0)
}

/// Weight `2/(1+s) Σ_{n > n_max} |r|^n` that truncation removes from the unit
/// trace of `Δ^(s)`. Finite only for `s > 0`; for `s ≤ 0` the number-basis trace
/// series does not converge absolutely and the trace is not a meaningful check.
pub fn kernel_trace_tail(rep: &FockRep, s: SValue) -> f64 {
    let ratio = kernel_ratio(s).abs();
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    2.0 / (1.0 + s.value()) * ratio.powi(rep.dim() as i32) / (1.0 - ratio)
}

fn check_s(s: SValue) -> Result<()> {
    if s.value() <= -1.0 {
        return Err(Error::Unsupported(
            "the s = -1 (P function) kernel is singular on the plane".into(),
        ));
    }
    if s.value() <= -0.9 {
        warn!("s = {s} kernel is ill-conditioned on a truncated Fock space");
    }
    Ok(())
}

/// Displacement operators and s-ordered kernels for a fixed cutoff.
///
/// Two representations of the displacement are provided. [`HwKernel::displacement`]
/// is the matrix exponential of the truncated generator, exactly unitary on the
/// truncated space. [`HwKernel::displacement_element`] is a matrix element of the
/// untruncated operator,
/// `⟨p|D(α)|n⟩ = √(n!/p!) α^{p−n} e^{−|α|²/2} L_n^{(p−n)}(|α|²)` for `p ≥ n`.
/// The two agree on the low-photon block up to the truncation tail.
///
/// Distribution values use [`HwKernel::kernel_block`], the normal-ordered
/// closed form of the kernel restricted to the support of the operator. It is
/// the cutoff-independent limit of `⟨p|Δ^(s)|q⟩` and stays accurate for `s < 0`,
/// where the `|r|^n` weights of the number-basis form amplify round-off.
#[derive(Debug, Clone)]
pub struct HwKernel {
    rep: FockRep,
    ln_fact: Vec<f64>,
}

impl HwKernel {
    pub fn new(rep: FockRep) -> Self {
        let mut ln_fact = Vec::with_capacity(rep.dim());
        let mut acc = 0.0;
        for n in 0..rep.dim() {
            if n > 0 {
                acc += (n as f64).ln();
            }
            ln_fact.push(acc);
        }
        Self { rep, ln_fact }
    }

    pub fn rep(&self) -> &FockRep {
        &self.rep
    }

    fn warn_if_far(&self, alpha: PlanePoint) {
        if alpha.norm_sqr() > self.rep.n_max as f64 / 4.0 {
            warn!(
                "|α|² = {:.3} exceeds n_max/4 = {:.3}; truncation error may be significant",
                alpha.norm_sqr(),
                self.rep.n_max as f64 / 4.0
            );
        }
    }

    /// `⟨p|D(α)|n⟩` of the untruncated displacement operator.
    pub fn displacement_element(&self, alpha: PlanePoint, p: usize, n: usize) -> Complex64 {
        let u = alpha.norm_sqr();
        let (lo, hi) = (p.min(n), p.max(n));
        let k = hi - lo;
        if u == 0.0 {
            return if k == 0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
        }
        let (r, phi) = alpha.to_polar();
        let log_mag = 0.5 * (self.ln_fact[lo] - self.ln_fact[hi]) + k as f64 * r.ln() - 0.5 * u;
        let value = log_mag.exp() * assoc_laguerre(lo, k as f64, u);
        let kf = k as f64;
        if p >= n {
            Complex64::from_polar(value, kf * phi)
        } else {
            // ⟨p|D(α)|n⟩ = ⟨n|D(−α)|p⟩*
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            Complex64::from_polar(sign * value, -kf * phi)
        }
    }

    /// `D(α) = exp(α a† − α* a)` with the generator truncated to `|0⟩ … |n_max⟩`.
    pub fn displacement(&self, alpha: PlanePoint) -> OperatorMatrix {
        self.warn_if_far(alpha);
        let d = self.rep.dim();
        if alpha.norm_sqr() == 0.0 {
            return OperatorMatrix::identity(d, d);
        }
        // i(α a† − α* a) is Hermitian; exponentiate through its eigenbasis
        let a = self.rep.annihilation();
        let i = Complex64::new(0.0, 1.0);
        let gen = (a.adjoint() * alpha - &a * alpha.conj()) * i;
        let eig = SymmetricEigen::new(gen);
        let phases = eig.eigenvalues.map(|l| Complex64::from_polar(1.0, -l));
        let v = eig.eigenvectors;
        let scaled = DMatrix::from_fn(d, d, |r, c| v[(r, c)] * phases[c]);
        scaled * v.adjoint()
    }

    /// `Δ^(s)(α) = 2/(1+s) · D(α) diag(r^n) D(α)†`, `r = (s−1)/(s+1)`.
    pub fn cg_kernel(&self, s: SValue, alpha: PlanePoint) -> Result<OperatorMatrix> {
        check_s(s)?;
        let disp = self.displacement(alpha);
        let diag = self.kernel_diagonal(s);
        let scaled = DMatrix::from_fn(self.rep.dim(), self.rep.dim(), |p, n| disp[(p, n)] * diag[n]);
        Ok(scaled * disp.adjoint())
    }

    fn kernel_diagonal(&self, s: SValue) -> Vec<f64> {
        let ratio = kernel_ratio(s);
        let pref = 2.0 / (1.0 + s.value());
        (0..self.rep.dim()).map(|n| pref * ratio.powi(n as i32)).collect()
    }

    /// `Tr[A Δ^(s)(α)]`, touching only the Fock levels on which `A` is supported.
    pub fn qpd_value(&self, a: &OperatorMatrix, s: SValue, alpha: PlanePoint) -> Result<Complex64> {
        check_s(s)?;
        self.check_operator(a)?;
        Ok(trace_block(a, &self.block_unchecked(s, alpha, support(a))))
    }

    /// The leading `rows × rows` block of `Δ^(s)(α)`.
    ///
    /// Normal ordering gives `Δ^(s)(α) = c e^{−c|α|²} e^{cα a†} r^N e^{cα* a}`,
    /// `c = 2/(1+s)`, whose matrix elements collapse to a Laguerre polynomial:
    /// `⟨p|Δ|q⟩ = c e^{−c|α|²} (cα)^{p−q} √(q!/p!) r^q L_q^{(p−q)}(−c²|α|²/r)`
    /// for `p ≥ q`. This is the `n_max → ∞` limit of `D r^N D†` on the block.
    /// The scaled polynomial `M_q = r^q L_q^{(p−q)}(−c²|α|²/r)` is generated by
    /// its three-term recurrence, which has a positive Laguerre argument for
    /// every `s < 1` and stays finite at `s = 1` (`r = 0`).
    pub fn kernel_block(&self, s: SValue, alpha: PlanePoint, rows: usize) -> Result<OperatorMatrix> {
        check_s(s)?;
        Ok(self.block_unchecked(s, alpha, rows.min(self.rep.dim())))
    }

    fn block_unchecked(&self, s: SValue, alpha: PlanePoint, rows: usize) -> OperatorMatrix {
        const RESCALE: f64 = 1e150;
        let c = 2.0 / (1.0 + s.value());
        let r = kernel_ratio(s);
        let u = alpha.norm_sqr();
        let cu2 = c * c * u;
        let (mag, phi) = alpha.to_polar();
        let base = c.ln() - c * u;
        let lf = &self.ln_fact;
        let mut out = OperatorMatrix::zeros(rows, rows);
        for a in 0..rows {
            if a > 0 && u == 0.0 {
                break;
            }
            let af = a as f64;
            let shift = if a > 0 { af * (c * mag).ln() } else { 0.0 };
            let rot = Complex64::from_polar(1.0, af * phi);
            let (mut m0, mut m1) = (1.0, r * (1.0 + af) + cu2);
            let mut log_scale = 0.0;
            for q in 0..rows - a {
                let mq = match q {
                    0 => m0,
                    1 => m1,
                    _ => {
                        let k = (q - 1) as f64;
                        let m2 = (((2.0 * k + 1.0 + af) * r + cu2) * m1 - (k + af) * r * r * m0) / (k + 1.0);
                        m0 = m1;
                        m1 = m2;
                        if m1.abs() > RESCALE {
                            m0 /= RESCALE;
                            m1 /= RESCALE;
                            log_scale += RESCALE.ln();
                        }
                        m1
                    }
                };
                let p = q + a;
                let v = rot * (mq * (base + shift + 0.5 * (lf[q] - lf[p]) + log_scale).exp());
                out[(p, q)] = v;
                out[(q, p)] = v.conj();
            }
        }
        out
    }

    fn check_operator(&self, a: &OperatorMatrix) -> Result<()> {
        let d = self.rep.dim();
        if a.nrows() != d || a.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: a.nrows().max(a.ncols()),
            });
        }
        Ok(())
    }
}

/// `Tr(A B)` where `B` covers only the leading block of `A`.
fn trace_block(a: &OperatorMatrix, block: &OperatorMatrix) -> Complex64 {
    let rows = block.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..rows {
        for q in 0..rows {
            acc += a[(p, q)] * block[(q, p)];
        }
    }
    acc
}

/// One past the highest Fock level touched by a nonzero entry of `a`.
pub fn support(a: &OperatorMatrix) -> usize {
    let mut top = 0;
    for r in 0..a.nrows() {
        for c in 0..a.ncols() {
            if a[(r, c)] != Complex64::new(0.0, 0.0) {
                top = top.max(r + 1).max(c + 1);
            }
        }
    }
    top
}

/// Polar product rule for `d²α/π`: Gauss-Laguerre in `u = |α|²` scaled by
/// `scale` (exact for `e^{−scale·u}` × polynomial integrands) times a uniform
/// angular rule. Nodes are radial-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneGrid {
    pub n_radial: usize,
    pub n_angular: usize,
    pub scale: f64,
    pub nodes: Vec<PlanePoint>,
    pub weights: Vec<f64>,
}

impl PlaneGrid {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, values: &[Complex64]) -> Complex64 {
        self.weights.iter().zip(values).map(|(w, v)| v * *w).sum()
    }
}

/// Generalized Laguerre polynomial `L_n^{(a)}(x)` by upward recurrence.
fn assoc_laguerre(n: usize, a: f64, x: f64) -> f64 {
    let mut l0 = 1.0;
    if n == 0 {
        return l0;
    }
    let mut l1 = 1.0 + a - x;
    for i in 1..n {
        let fi = i as f64;
        let l2 = ((2.0 * fi + 1.0 + a - x) * l1 - (fi + a) * l0) / (fi + 1.0);
        l0 = l1;
        l1 = l2;
    }
    l1
}

fn laguerre(n: usize, t: f64) -> (f64, f64) {
    let mut l0 = 1.0;
    let mut l1 = 1.0 - t;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let l2 = ((2.0 * kf + 1.0 - t) * l1 - kf * l0) / (kf + 1.0);
        l0 = l1;
        l1 = l2;
    }
    (l1, l0)
}

/// Gauss-Laguerre nodes `t_i` and the weights `w_i e^{t_i}`, so that
/// `∫_0^∞ g(t) dt ≈ Σ_i (w_i e^{t_i}) g(t_i)`.
pub fn gauss_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    // Golub-Welsch for starting values, then Newton polish
    let jac = DMatrix::from_fn(n, n, |r, c| {
        if r == c {
            2.0 * r as f64 + 1.0
        } else if r.abs_diff(c) == 1 {
            r.max(c) as f64
        } else {
            0.0
        }
    });
    let mut nodes: Vec<f64> = SymmetricEigen::new(jac).eigenvalues.iter().copied().collect();
    nodes.sort_by(f64::total_cmp);
    let nf = n as f64;
    let mut weights = Vec::with_capacity(n);
    for t in &mut nodes {
        for _ in 0..4 {
            let (ln, lm1) = laguerre(n, *t);
            let deriv = nf * (ln - lm1) / *t;
            let step = ln / deriv;
            *t -= step;
            if step.abs() < 1e-15 * t.abs() {
                break;
            }
        }
        let (_, lm1) = laguerre(n, *t);
        // w_i = t_i / ((n+1)² L_{n+1}(t_i)²) and L_{n+1}(t_i) = −n/(n+1) L_{n−1}(t_i)
        let ln1 = -nf / (nf + 1.0) * lm1;
        let w = *t / ((nf + 1.0).powi(2) * ln1 * ln1);
        weights.push(w * t.exp());
    }
    (nodes, weights)
}

/// Builds a [`PlaneGrid`]. `scale > 0` sets the Gaussian decay rate the radial
/// rule is tuned for.
pub fn plane_grid(n_radial: usize, n_angular: usize, scale: f64) -> Result<PlaneGrid> {
    if n_radial == 0 || n_angular == 0 || !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::GridTooCoarse(format!(
            "plane grid needs positive node counts and scale, got {n_radial}x{n_angular}, scale {scale}"
        )));
    }
    let (t, w) = gauss_laguerre(n_radial);
    let mut nodes = Vec::with_capacity(n_radial * n_angular);
    let mut weights = Vec::with_capacity(n_radial * n_angular);
    for (ti, wi) in t.iter().zip(&w) {
        let r = (ti / scale).sqrt();
        for k in 0..n_angular {
            let phi = 2.0 * PI * k as f64 / n_angular as f64;
            nodes.push(Complex64::from_polar(r, phi));
            weights.push(wi / scale / n_angular as f64);
        }
    }
    Ok(PlaneGrid {
        n_radial,
        n_angular,
        scale,
        nodes,
        weights,
    })
}

/// Samples `F_A^(s)(α) = Tr[A Δ^(s)(α)]` on a plane grid.
pub fn hw_weyl_map(
    kernel: &HwKernel,
    a: &OperatorMatrix,
    s: SValue,
    grid: &PlaneGrid,
) -> Result<QpdGrid> {
    check_s(s)?;
    kernel.check_operator(a)?;
    if let Some(far) = grid.nodes.iter().map(|z| z.norm_sqr()).reduce(f64::max) {
        kernel.warn_if_far(Complex64::new(far.sqrt(), 0.0));
    }
    let rows = support(a);
    let values = grid
        .nodes
        .iter()
        .map(|z| trace_block(a, &kernel.block_unchecked(s, *z, rows)))
        .collect();
    Ok(QpdGrid {
        system: System::hw(&kernel.rep),
        s,
        grid: GridSpec::plane(grid),
        nodes: grid.nodes.iter().map(|z| [z.re, z.im]).collect(),
        values,
    })
}

/// Gaussian transfer function on the plane,
/// `K_{s,s′}(α, β) = 2/(s−s′) · exp(−2|α−β|²/(s−s′))` for `s > s′`.
pub fn gaussian_transfer(s: SValue, s_prime: SValue, alpha: PlanePoint, beta: PlanePoint) -> f64 {
    let width = s.value() - s_prime.value();
    2.0 / width * (-2.0 * (alpha - beta).norm_sqr() / width).exp()
}

/// Smooths a plane distribution to a larger ordering parameter by convolving
/// with [`gaussian_transfer`] on its own grid. Lowering `s` (sharpening) is not
/// supported.
pub fn hw_smooth(f: &QpdGrid, s_target: SValue) -> Result<QpdGrid> {
    let grid = match f.quadrature()? {
        Quadrature::Plane(g) => g,
        Quadrature::Sphere(_) => {
            return Err(Error::SystemMismatch("expected a plane distribution".into()))
        }
    };
    if s_target.value() < f.s.value() {
        return Err(Error::Unsupported(format!(
            "cannot sharpen a plane distribution from s = {} to s = {s_target}",
            f.s
        )));
    }
    if s_target == f.s {
        return Ok(f.clone());
    }
    let values = grid
        .nodes
        .iter()
        .map(|alpha| {
            grid.nodes
                .iter()
                .zip(&grid.weights)
                .zip(&f.values)
                .map(|((beta, w), v)| v * (w * gaussian_transfer(s_target, f.s, *alpha, *beta)))
                .sum()
        })
        .collect();
    Ok(QpdGrid {
        s: s_target,
        values,
        ..f.clone()
    })
}
