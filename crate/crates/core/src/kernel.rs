//! The s-parametrized Stratonovich-Weyl kernel family on the sphere.
//!
//! The construction runs in three steps:
//!
//! 1. expand the coherent-state overlap `|⟨Ω|Ω′⟩|² = Σ_ν τ_ν Y*_ν(Ω) Y_ν(Ω′)`
//!    and read off the positive coefficients `τ_L` ([`compute_tau`]);
//! 2. integrate the harmonics against coherent-state projectors to obtain the
//!    orthonormal tensor operators `D_ν = ω_ν ∫dμ Y_ν |Ω⟩⟨Ω|`, `ω_ν = τ_ν^{-1/2}`
//!    ([`tensor_operators`]);
//! 3. assemble `Δ^(s)(Ω) = Σ_ν τ_ν^{s/2} Y*_ν(Ω) D_ν` ([`sw_kernel_at`]).
//!
//! Harmonics with `L > 2j` have `τ_L = 0` and no tensor operator, so every sum
//! runs over `L ≤ 2j`.
//!
//! Distributions are evaluated spectrally through `𝒜_ν = Tr(A D_ν†)`:
//! `F_A^(s)(Ω) = Σ_ν τ_ν^{s/2} 𝒜_ν Y_ν(Ω)`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::linalg::{hs_inner, OperatorMatrix};
use crate::qpd::{GridSpec, Quadrature, QpdGrid, System};
use crate::su2::{
    coherent_state, gauss_legendre_dd, harmonics_at, legendre_dd, sphere_grid, HarmonicIndex,
    PhasePoint, QuadratureGrid,
    SpinRep,
};

/// Tolerance on `Tr(D_ν D_ν′†) = δ_νν′` before the construction is rejected.
pub const ORTHONORMALITY_TOL: f64 = 1e-10;
/// Agreement required between quadrature-extracted and closed-form `τ_L`.
pub const TAU_TOL: f64 = 1e-10;

/// Ordering parameter `s ∈ [-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct SValue(f64);

impl SValue {
    /// Husimi Q function.
    pub const Q: SValue = SValue(1.0);
    /// Wigner function.
    pub const W: SValue = SValue(0.0);
    /// Glauber-Sudarshan P function.
    pub const P: SValue = SValue(-1.0);

    pub fn new(s: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&s) {
            return Err(Error::SOutOfRange(s));
        }
        Ok(Self(s))
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    /// The dual ordering `-s`.
    pub fn dual(&self) -> Self {
        Self(-self.0)
    }
}

impl TryFrom<f64> for SValue {
    type Error = Error;
    fn try_from(s: f64) -> Result<Self> {
        Self::new(s)
    }
}

impl From<SValue> for f64 {
    fn from(s: SValue) -> f64 {
        s.0
    }
}

impl fmt::Display for SValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `τ_L = (2j+1) ((2j)!)² / ((2j−L)! (2j+L+1)!)`, via the ratio
/// `τ_L / τ_{L−1} = (2j−L+1) / (2j+L+1)`.
pub fn closed_form_tau(rep: &SpinRep) -> Vec<f64> {
    let n = f64::from(rep.twice_j());
    let mut tau = Vec::with_capacity(rep.dim());
    let mut t = 1.0;
    tau.push(t);
    for l in 1..rep.dim() {
        let lf = l as f64;
        t *= (n - lf + 1.0) / (n + lf + 1.0);
        tau.push(t);
    }
    tau
}

fn project_overlap(
    rep: &SpinRep,
    grid: &QuadratureGrid,
    center: &PhasePoint,
    node_harmonics: &[Vec<Complex64>],
) -> Vec<Complex64> {
    let c0 = coherent_state(rep, center);
    let mut proj = vec![Complex64::new(0.0, 0.0); rep.dim() * rep.dim()];
    for ((node, w), y) in grid.nodes.iter().zip(&grid.weights).zip(node_harmonics) {
        let c = coherent_state(rep, node);
        let ov: Complex64 = c0.iter().zip(&c).map(|(a, b)| a.conj() * b).sum();
        let f = ov.norm_sqr() * w;
        for (p, yv) in proj.iter_mut().zip(y) {
            *p += yv.conj() * f;
        }
    }
    proj
}

/// Expansion coefficients `τ_L`, `L = 0..=2j`, of the coherent-state overlap.
///
/// Extracted by projecting `|⟨N|Ω′⟩|² = ((1+x)/2)^{2j}` (N = north pole,
/// x = cos θ′) onto `Y_L0` with the θ-part of the exact default quadrature; the
/// φ-part is trivial for M = 0. The projection runs in double-double precision
/// because τ_2j is as small as ~1e-7 at j = 6, and ω_L = τ_L^{−1/2} needs it to
/// full relative precision. The M-independence is then checked over the full
/// grid at a generic center, and the result is compared with [`closed_form_tau`].
pub fn compute_tau(rep: &SpinRep) -> Result<Vec<f64>> {
    let grid = sphere_grid(rep, None, None)?;
    let node_harmonics: Vec<_> = grid.nodes.iter().map(|p| harmonics_at(rep, p)).collect();

    let lmax = rep.max_degree() as usize;
    let (x, w) = gauss_legendre_dd(grid.n_theta);
    let mut acc = vec![TwoFloat::from(0.0); lmax + 1];
    for (xi, wi) in x.iter().zip(&w) {
        let half = (*xi + 1.0) / 2.0;
        let mut overlap = TwoFloat::from(1.0);
        for _ in 0..rep.twice_j() {
            overlap *= half;
        }
        for (a, p) in acc.iter_mut().zip(legendre_dd(lmax, *xi)) {
            *a += *wi * overlap * p;
        }
    }
    // Y_L0(Ω′)/Y_L0(N) = P_L(cos θ′); ∫dμ over φ leaves (2j+1)/2 ∫dx
    let tau: Vec<f64> = acc.iter().map(|a| f64::from(*a * (rep.dim() as f64 / 2.0))).collect();

    // ∫dμ(Ω′) |⟨Ω|Ω′⟩|² Y*_ν(Ω′) = τ_L Y*_ν(Ω) for every M
    let probe = PhasePoint::new(1.0, 0.7);
    let y_probe = harmonics_at(rep, &probe);
    let proj = project_overlap(rep, &grid, &probe, &node_harmonics);
    for nu in HarmonicIndex::all(rep) {
        let resid = (proj[nu.flat()] - y_probe[nu.flat()].conj() * tau[nu.l as usize]).norm();
        if resid > TAU_TOL {
            return Err(Error::Numerical(format!(
                "overlap coefficient for (L={}, M={}) is not M-independent (residual {resid:e})",
                nu.l, nu.m
            )));
        }
    }

    if let Some((l, t)) = tau.iter().enumerate().find(|(_, t)| **t <= 0.0) {
        return Err(Error::Numerical(format!("non-positive τ_{l} = {t:e}")));
    }
    for (l, (t, c)) in tau.iter().zip(closed_form_tau(rep)).enumerate() {
        if (t - c).abs() > TAU_TOL {
            return Err(Error::Numerical(format!(
                "τ_{l} = {t} disagrees with closed form {c}"
            )));
        }
    }
    Ok(tau)
}

/// Tensor operators `D_ν = ω_L Σ_k w_k Y_ν(Ω_k) |Ω_k⟩⟨Ω_k|`, flat index order.
///
/// `D_{LM}` can only have entries on the `M`-th superdiagonal (`m_a − m_b = M`),
/// so only those are accumulated.
pub fn tensor_operators(
    rep: &SpinRep,
    tau: &[f64],
    grid: &QuadratureGrid,
) -> Result<Vec<OperatorMatrix>> {
    if grid.rep != *rep {
        return Err(Error::SystemMismatch(format!(
            "grid built for j = {}, kernel for j = {rep}",
            grid.rep
        )));
    }
    grid.check_exact_for_products()?;
    if tau.len() != rep.dim() {
        return Err(Error::DimensionMismatch {
            expected: rep.dim(),
            found: tau.len(),
        });
    }
    let d = rep.dim();
    let indices = HarmonicIndex::all(rep);
    let mut ops = vec![OperatorMatrix::zeros(d, d); indices.len()];
    for (node, w) in grid.nodes.iter().zip(&grid.weights) {
        let c = coherent_state(rep, node);
        let y = harmonics_at(rep, node);
        for nu in &indices {
            let yw = y[nu.flat()] * *w;
            let op = &mut ops[nu.flat()];
            let shift = nu.m as i64;
            for a in 0..d as i64 {
                let b = a + shift;
                if (0..d as i64).contains(&b) {
                    op[(a as usize, b as usize)] += yw * c[a as usize] * c[b as usize].conj();
                }
            }
        }
    }
    for nu in &indices {
        let omega = 1.0 / tau[nu.l as usize].sqrt();
        ops[nu.flat()] *= Complex64::new(omega, 0.0);
    }

    let worst = gram_deviation(&indices, &ops);
    if worst > ORTHONORMALITY_TOL {
        return Err(Error::Numerical(format!(
            "tensor operators are not orthonormal: max |Tr(D D'†) − δ| = {worst:e}"
        )));
    }
    Ok(ops)
}

/// `max |Tr(D_ν D_ν′†) − δ_νν′|`. Pairs with different `M` live on disjoint
/// diagonals and are orthogonal by construction, so only equal-`M` pairs are
/// formed.
fn gram_deviation(indices: &[HarmonicIndex], ops: &[OperatorMatrix]) -> f64 {
    let mut worst: f64 = 0.0;
    for a in indices {
        for b in indices.iter().filter(|b| b.m == a.m) {
            let g = hs_inner(&ops[a.flat()], &ops[b.flat()]);
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((g - target).norm());
        }
    }
    worst
}

/// Precomputed per-spin tables for the kernel family.
#[derive(Debug, Clone)]
pub struct KernelData {
    rep: SpinRep,
    grid: QuadratureGrid,
    tau: Vec<f64>,
    omega: Vec<f64>,
    tensor_ops: Vec<OperatorMatrix>,
}

impl KernelData {
    /// Builds the tables on the default exact grid for `rep`.
    pub fn new(rep: SpinRep) -> Result<Self> {
        let tau = compute_tau(&rep)?;
        let grid = sphere_grid(&rep, None, None)?;
        let tensor_ops = tensor_operators(&rep, &tau, &grid)?;
        let omega = tau.iter().map(|t| 1.0 / t.sqrt()).collect();
        Ok(Self {
            rep,
            grid,
            tau,
            omega,
            tensor_ops,
        })
    }

    pub fn rep(&self) -> &SpinRep {
        &self.rep
    }

    /// The default quadrature grid the tables were built on.
    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    pub fn tau(&self) -> &[f64] {
        &self.tau
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn tensor_op(&self, nu: &HarmonicIndex) -> &OperatorMatrix {
        &self.tensor_ops[nu.flat()]
    }

    pub fn tensor_ops(&self) -> &[OperatorMatrix] {
        &self.tensor_ops
    }

    pub fn indices(&self) -> Vec<HarmonicIndex> {
        HarmonicIndex::all(&self.rep)
    }

    /// `τ_L^{power}` for every flat index.
    fn tau_power(&self, power: f64) -> Vec<f64> {
        self.indices()
            .iter()
            .map(|nu| self.tau[nu.l as usize].powf(power))
            .collect()
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

    fn check_grid(&self, grid: &QuadratureGrid) -> Result<()> {
        if grid.rep != self.rep {
            return Err(Error::SystemMismatch(format!(
                "grid built for j = {}, kernel for j = {}",
                grid.rep, self.rep
            )));
        }
        Ok(())
    }

    fn qpd_quadrature(&self, f: &QpdGrid) -> Result<QuadratureGrid> {
        if f.system != System::su2(&self.rep) {
            return Err(Error::SystemMismatch(format!(
                "distribution for {}, kernel for j = {}",
                f.system, self.rep
            )));
        }
        match f.quadrature()? {
            Quadrature::Sphere(g) => {
                g.check_exact_for_products()?;
                Ok(g)
            }
            Quadrature::Plane(_) => Err(Error::SystemMismatch("plane grid on the sphere".into())),
        }
    }

    /// `Σ_k w_k F(Ω_k) Y*_ν(Ω_k)` for every ν, i.e. `τ^{s/2} 𝒜_ν` for band-limited F.
    fn project(&self, grid: &QuadratureGrid, values: &[Complex64]) -> Vec<Complex64> {
        let n = self.rep.dim() * self.rep.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for ((node, w), v) in grid.nodes.iter().zip(&grid.weights).zip(values) {
            let y = harmonics_at(&self.rep, node);
            let fw = v * *w;
            for (o, yv) in out.iter_mut().zip(&y) {
                *o += yv.conj() * fw;
            }
        }
        out
    }

    fn synthesize(&self, coeffs: &[Complex64], grid: &QuadratureGrid) -> Vec<Complex64> {
        grid.nodes
            .iter()
            .map(|p| {
                harmonics_at(&self.rep, p)
                    .iter()
                    .zip(coeffs)
                    .map(|(y, c)| y * c)
                    .sum()
            })
            .collect()
    }
}

/// `Δ^(s)(Ω) = Σ_ν τ_L^{s/2} Y*_ν(Ω) D_ν`.
pub fn sw_kernel_at(kd: &KernelData, s: SValue, omega: &PhasePoint) -> OperatorMatrix {
    let d = kd.rep.dim();
    let y = harmonics_at(&kd.rep, omega);
    let f = kd.tau_power(s.value() / 2.0);
    let mut out = OperatorMatrix::zeros(d, d);
    for ((op, yv), fv) in kd.tensor_ops.iter().zip(&y).zip(&f) {
        out += op * (yv.conj() * *fv);
    }
    out
}

/// `K_{s,s′}(Ω, Ω′) = Σ_ν τ_L^{(s−s′)/2} Y*_ν(Ω) Y_ν(Ω′)`; `s = s′` gives the
/// reproducing kernel `K(Ω, Ω′)` of the band-limited subspace.
pub fn transfer_kernel(
    kd: &KernelData,
    s: SValue,
    s_prime: SValue,
    omega: &PhasePoint,
    omega_prime: &PhasePoint,
) -> Complex64 {
    let a = harmonics_at(&kd.rep, omega);
    let b = harmonics_at(&kd.rep, omega_prime);
    let f = kd.tau_power((s.value() - s_prime.value()) / 2.0);
    a.iter()
        .zip(&b)
        .zip(&f)
        .map(|((ya, yb), fv)| ya.conj() * yb * *fv)
        .sum()
}

/// Harmonic coefficients `𝒜_ν = Tr(A D_ν†)`, flat order.
pub fn harmonic_coefficients(kd: &KernelData, a: &OperatorMatrix) -> Result<Vec<Complex64>> {
    kd.check_operator(a)?;
    Ok(kd.tensor_ops.iter().map(|d| hs_inner(a, d)).collect())
}

/// `F^(s)(Ω) = Σ_ν τ_L^{s/2} 𝒜_ν Y_ν(Ω)` from precomputed coefficients.
pub fn qpd_from_coefficients(
    kd: &KernelData,
    coeffs: &[Complex64],
    s: SValue,
    omega: &PhasePoint,
) -> Complex64 {
    let f = kd.tau_power(s.value() / 2.0);
    harmonics_at(&kd.rep, omega)
        .iter()
        .zip(coeffs)
        .zip(&f)
        .map(|((y, c), fv)| y * c * *fv)
        .sum()
}

/// `F_A^(s)(Ω)` at a single point.
pub fn qpd_at(kd: &KernelData, a: &OperatorMatrix, s: SValue, omega: &PhasePoint) -> Result<Complex64> {
    let coeffs = harmonic_coefficients(kd, a)?;
    Ok(qpd_from_coefficients(kd, &coeffs, s, omega))
}

/// Generalized Weyl rule: samples `F_A^(s)(Ω) = Tr[A Δ^(s)(Ω)]` on `grid`.
pub fn weyl_map(
    kd: &KernelData,
    a: &OperatorMatrix,
    s: SValue,
    grid: &QuadratureGrid,
) -> Result<QpdGrid> {
    kd.check_grid(grid)?;
    let coeffs = harmonic_coefficients(kd, a)?;
    let f = kd.tau_power(s.value() / 2.0);
    let scaled: Vec<Complex64> = coeffs.iter().zip(&f).map(|(c, fv)| c * *fv).collect();
    Ok(QpdGrid {
        system: System::su2(&kd.rep),
        s,
        grid: GridSpec::sphere(grid),
        nodes: grid.nodes.iter().map(|p| [p.theta, p.phi]).collect(),
        values: kd.synthesize(&scaled, grid),
    })
}

/// Inverse map `A = Σ_k w_k F(Ω_k) Δ^(−s)(Ω_k)`, evaluated as
/// `Σ_ν τ_L^{−s/2} [Σ_k w_k F(Ω_k) Y*_ν(Ω_k)] D_ν`.
pub fn inverse_weyl(kd: &KernelData, f: &QpdGrid) -> Result<OperatorMatrix> {
    let grid = kd.qpd_quadrature(f)?;
    let proj = kd.project(&grid, &f.values);
    let inv = kd.tau_power(-f.s.value() / 2.0);
    let d = kd.rep.dim();
    let mut out = OperatorMatrix::zeros(d, d);
    for ((op, p), t) in kd.tensor_ops.iter().zip(&proj).zip(&inv) {
        out += op * (p * *t);
    }
    Ok(out)
}

/// Moves a distribution from its ordering `s′` to `s_target` by rescaling each
/// harmonic component with `τ_L^{(s−s′)/2}`; equivalent to integrating against
/// [`transfer_kernel`].
pub fn transform_qpd(kd: &KernelData, f: &QpdGrid, s_target: SValue) -> Result<QpdGrid> {
    let grid = kd.qpd_quadrature(f)?;
    let proj = kd.project(&grid, &f.values);
    let factor = kd.tau_power((s_target.value() - f.s.value()) / 2.0);
    let scaled: Vec<Complex64> = proj.iter().zip(&factor).map(|(c, t)| c * *t).collect();
    Ok(QpdGrid {
        system: f.system,
        s: s_target,
        grid: f.grid,
        nodes: f.nodes.clone(),
        values: kd.synthesize(&scaled, &grid),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, max_abs_diff};
    use crate::su2::coherent_projector;

    fn kd(twice_j: u32) -> KernelData {
        KernelData::new(SpinRep::new(twice_j).unwrap()).unwrap()
    }

    #[test]
    fn s_range() {
        assert!(SValue::new(1.0).is_ok());
        assert!(SValue::new(-1.0).is_ok());
        assert!(matches!(SValue::new(1.01), Err(Error::SOutOfRange(_))));
        assert!(SValue::new(f64::NAN).is_err());
        let parsed: std::result::Result<SValue, _> = serde_json::from_str("-1.5");
        assert!(parsed.is_err());
    }

    #[test]
    fn monopole_operator_is_scaled_identity() {
        for tj in 1..=6 {
            let k = kd(tj);
            let d = k.rep().dim();
            let d00 = k.tensor_op(&HarmonicIndex { l: 0, m: 0 });
            let expect = identity(d) / Complex64::new((d as f64).sqrt(), 0.0);
            assert!(max_abs_diff(d00, &expect) < 1e-12);
        }
    }

    #[test]
    fn spin_half_dipole_operator() {
        // ∫dμ cosθ |Ω⟩⟨Ω| = diag(1/3, −1/3); times Y_10 = √(3/2) cosθ and ω_1 = √3
        let k = kd(1);
        let d10 = k.tensor_op(&HarmonicIndex { l: 1, m: 0 });
        let r = std::f64::consts::SQRT_2 * 0.5;
        let expect = OperatorMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(r, 0.0),
            Complex64::new(-r, 0.0),
        ]));
        assert!(max_abs_diff(d10, &expect) < 1e-14);
    }

    #[test]
    fn diagonal_element_relation() {
        // ω_ν ⟨Ω|D_ν|Ω⟩ = Y_ν(Ω)
        let k = kd(4);
        let p = PhasePoint::new(1.3, 4.4);
        let c = nalgebra::DVector::from_vec(coherent_state(k.rep(), &p));
        let y = harmonics_at(k.rep(), &p);
        for nu in k.indices() {
            let expval = (c.adjoint() * k.tensor_op(&nu) * &c)[(0, 0)];
            let lhs = expval * k.omega()[nu.l as usize];
            assert!((lhs - y[nu.flat()]).norm() < 1e-12, "{nu:?}");
        }
    }

    #[test]
    fn tensor_operator_adjoint_symmetry() {
        // D_ν† = (−1)^M D_ν̃
        let k = kd(3);
        for nu in k.indices() {
            let sign = if nu.m % 2 == 0 { 1.0 } else { -1.0 };
            let lhs = k.tensor_op(&nu).adjoint();
            let rhs = k.tensor_op(&nu.conjugate()) * Complex64::new(sign, 0.0);
            assert!(max_abs_diff(&lhs, &rhs) < 1e-13);
        }
    }

    #[test]
    fn kernel_at_s_one_is_projector() {
        let k = kd(5);
        for p in [PhasePoint::north(), PhasePoint::new(0.3, 1.0), PhasePoint::new(2.9, 5.5)] {
            let delta = sw_kernel_at(&k, SValue::Q, &p);
            assert!(max_abs_diff(&delta, &coherent_projector(k.rep(), &p)) < 1e-12);
        }
    }

    #[test]
    fn spin_half_wigner_kernel_at_north_pole() {
        let k = kd(1);
        let delta = sw_kernel_at(&k, SValue::W, &PhasePoint::north());
        let r3 = 3f64.sqrt();
        let expect = OperatorMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new((1.0 + r3) / 2.0, 0.0),
            Complex64::new((1.0 - r3) / 2.0, 0.0),
        ]));
        assert!(max_abs_diff(&delta, &expect) < 1e-14);
    }

    #[test]
    fn dimension_and_system_mismatch() {
        let k = kd(2);
        let a = identity(2);
        assert!(matches!(harmonic_coefficients(&k, &a), Err(Error::DimensionMismatch { .. })));
        let other = sphere_grid(&SpinRep::new(3).unwrap(), None, None).unwrap();
        assert!(matches!(weyl_map(&k, &identity(3), SValue::W, &other), Err(Error::SystemMismatch(_))));
    }

    #[test]
    fn inverse_rejects_coarse_grid() {
        let k = kd(2);
        let mut f = weyl_map(&k, &identity(3), SValue::W, k.grid()).unwrap();
        f.grid = GridSpec::Sphere { n_theta: 3, n_phi: 3 };
        f.nodes.truncate(9);
        f.values.truncate(9);
        assert!(matches!(inverse_weyl(&k, &f), Err(Error::GridTooCoarse(_))));
    }
}
