//! Randomized numerical checks of the Stratonovich-Weyl correspondence.
//!
//! Each suite draws its random operators, rotations and probe points from a
//! ChaCha8 stream seeded by [`SuiteConfig::seed`], so a report is reproducible
//! from its recorded seed. Deviations are maxima over everything drawn.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hw::{gaussian_transfer, plane_grid, FockRep, HwKernel, PlanePoint};
use crate::kernel::{
    harmonic_coefficients, qpd_from_coefficients, sw_kernel_at, transfer_kernel, weyl_map,
    KernelData, SValue,
};
use crate::linalg::{max_abs_diff, random_complex, random_hermitian, trace_product, OperatorMatrix};
use crate::qpd::System;
use crate::su2::{rotate_point, rotation_operator, EulerAngles, PhasePoint, SpinRep};

/// Tolerances for the spin suites.
pub mod su2_tol {
    pub const REALITY: f64 = 1e-10;
    pub const STANDARDIZATION: f64 = 1e-10;
    pub const COVARIANCE: f64 = 1e-9;
    /// Relative to `max(1, |Tr AB|)`.
    pub const TRACIALITY: f64 = 1e-10;
    pub const DELTA: f64 = 1e-10;
}

/// Tolerances for the truncated Heisenberg-Weyl suites.
pub mod hw_tol {
    pub const REALITY: f64 = 1e-9;
    pub const STANDARDIZATION: f64 = 1e-6;
    pub const COVARIANCE: f64 = 1e-8;
    pub const TRACIALITY: f64 = 1e-6;
    pub const DELTA: f64 = 1e-6;
}

/// Random plane operators live on `|0⟩ … |HW_PHOTONS⟩`.
pub const HW_PHOTONS: usize = 5;
/// Probe points per covariance trial.
pub const SU2_COVARIANCE_PROBES: usize = 50;
pub const HW_COVARIANCE_PROBES: usize = 5;
/// Radius of the disc plane probes are drawn from.
pub const HW_PROBE_RADIUS: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Reality,
    Standardization,
    Covariance,
    Traciality,
    Delta,
}

impl Axiom {
    pub const ALL: [Axiom; 5] = [
        Axiom::Reality,
        Axiom::Standardization,
        Axiom::Covariance,
        Axiom::Traciality,
        Axiom::Delta,
    ];
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Axiom::Reality => "reality",
            Axiom::Standardization => "standardization",
            Axiom::Covariance => "covariance",
            Axiom::Traciality => "traciality",
            Axiom::Delta => "delta",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub system: String,
    pub s_values: Vec<f64>,
    pub trials: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub seed: u64,
}

impl AxiomReport {
    fn new(axiom: Axiom, system: &TestSystem, cfg: &SuiteConfig, max_deviation: f64, tolerance: f64) -> Self {
        Self {
            axiom,
            system: system.descriptor().to_string(),
            s_values: cfg.s_values.iter().map(SValue::value).collect(),
            trials: cfg.trials,
            max_deviation,
            tolerance,
            // NaN never passes
            passed: max_deviation <= tolerance,
            seed: cfg.seed,
        }
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<16} {:<14} max_dev={:.3e} tol={:.0e} trials={} seed={}",
            if self.passed { "PASS" } else { "FAIL" },
            self.axiom.to_string(),
            self.system,
            self.max_deviation,
            self.tolerance,
            self.trials,
            self.seed
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub s_values: Vec<SValue>,
    pub trials: usize,
    pub seed: u64,
}

impl SuiteConfig {
    pub const DEFAULT_SEED: u64 = 20_240_917;
    pub const DEFAULT_TRIALS: usize = 100;

    pub fn new(s_values: Vec<SValue>, trials: usize, seed: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::Unsupported("at least one trial is required".into()));
        }
        if s_values.is_empty() {
            return Err(Error::Unsupported("at least one s value is required".into()));
        }
        Ok(Self {
            s_values,
            trials,
            seed,
        })
    }

    /// `s ∈ {−1, −½, 0, ½, 1}` for the sphere, `{−½, 0, ½}` for the plane.
    pub fn default_for(system: &TestSystem) -> Self {
        let s: &[f64] = match system {
            TestSystem::Su2(_) => &[-1.0, -0.5, 0.0, 0.5, 1.0],
            TestSystem::Hw(_) => &[-0.5, 0.0, 0.5],
        };
        Self {
            s_values: s.iter().map(|v| SValue::new(*v).expect("in range")).collect(),
            trials: Self::DEFAULT_TRIALS,
            seed: Self::DEFAULT_SEED,
        }
    }

    fn rng(&self, axiom: Axiom) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(axiom as u64);
        rng
    }
}

/// A system under test.
#[derive(Debug, Clone)]
pub enum TestSystem {
    Su2(Box<KernelData>),
    Hw(HwKernel),
}

impl TestSystem {
    pub fn su2(rep: SpinRep) -> Result<Self> {
        Ok(TestSystem::Su2(Box::new(KernelData::new(rep)?)))
    }

    pub fn hw(n_max: usize) -> Result<Self> {
        let rep = FockRep::new(n_max)?;
        if n_max < HW_PHOTONS {
            return Err(Error::InvalidCutoff(n_max));
        }
        Ok(TestSystem::Hw(HwKernel::new(rep)))
    }

    pub fn descriptor(&self) -> System {
        match self {
            TestSystem::Su2(kd) => System::su2(kd.rep()),
            TestSystem::Hw(k) => System::hw(k.rep()),
        }
    }

    fn check_config(&self, cfg: &SuiteConfig) -> Result<()> {
        if cfg.trials == 0 {
            return Err(Error::Unsupported("at least one trial is required".into()));
        }
        if let TestSystem::Hw(_) = self {
            if let Some(bad) = cfg.s_values.iter().find(|s| s.value().abs() >= 1.0) {
                return Err(Error::Unsupported(format!(
                    "plane suites need |s| < 1 (the s = ±1 pairing involves the singular P kernel), got {bad}"
                )));
            }
        }
        Ok(())
    }
}

/// Runs all five suites.
pub fn verify_all(system: &TestSystem, cfg: &SuiteConfig) -> Result<Vec<AxiomReport>> {
    Ok(vec![
        verify_reality(system, cfg)?,
        verify_standardization(system, cfg)?,
        verify_covariance(system, cfg)?,
        verify_traciality(system, cfg)?,
        verify_delta(system, cfg)?,
    ])
}

fn random_low_photon<R: Rng + ?Sized>(rng: &mut R, dim: usize, hermitian: bool) -> OperatorMatrix {
    let block = if hermitian {
        random_hermitian(rng, HW_PHOTONS + 1)
    } else {
        random_complex(rng, HW_PHOTONS + 1)
    };
    let mut a = OperatorMatrix::zeros(dim, dim);
    a.view_mut((0, 0), (HW_PHOTONS + 1, HW_PHOTONS + 1)).copy_from(&block);
    a
}

fn random_plane_point<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> PlanePoint {
    let r = radius * rng.random::<f64>().sqrt();
    Complex64::from_polar(r, 2.0 * PI * rng.random::<f64>())
}

fn random_sphere_point<R: Rng + ?Sized>(rng: &mut R) -> PhasePoint {
    let z: f64 = 2.0 * rng.random::<f64>() - 1.0;
    PhasePoint::new(z.acos(), 2.0 * PI * rng.random::<f64>())
}

/// `F_{A†} = (F_A)*` for random complex `A`, and `Im F_H = 0` for its Hermitian part.
pub fn verify_reality(system: &TestSystem, cfg: &SuiteConfig) -> Result<AxiomReport> {
    system.check_config(cfg)?;
    let mut rng = cfg.rng(Axiom::Reality);
    let mut worst: f64 = 0.0;
    match system {
        TestSystem::Su2(kd) => {
            let d = kd.rep().dim();
            for _ in 0..cfg.trials {
                let a = random_complex(&mut rng, d);
                let h = (&a + a.adjoint()).scale(0.5);
                for s in &cfg.s_values {
                    let fa = weyl_map(kd, &a, *s, kd.grid())?;
                    let fad = weyl_map(kd, &a.adjoint(), *s, kd.grid())?;
                    for (x, y) in fa.values.iter().zip(&fad.values) {
                        worst = worst.max((y - x.conj()).norm());
                    }
                    worst = worst.max(weyl_map(kd, &h, *s, kd.grid())?.max_imag());
                }
            }
            Ok(AxiomReport::new(Axiom::Reality, system, cfg, worst, su2_tol::REALITY))
        }
        TestSystem::Hw(k) => {
            let d = k.rep().dim();
            for _ in 0..cfg.trials {
                let a = random_low_photon(&mut rng, d, false);
                let alpha = random_plane_point(&mut rng, HW_PROBE_RADIUS);
                for s in &cfg.s_values {
                    let fa = k.qpd_value(&a, *s, alpha)?;
                    let fad = k.qpd_value(&a.adjoint(), *s, alpha)?;
                    worst = worst.max((fad - fa.conj()).norm());
                }
            }
            Ok(AxiomReport::new(Axiom::Reality, system, cfg, worst, hw_tol::REALITY))
        }
    }
}

/// `∫dμ F_A^(s) = Tr A`.
pub fn verify_standardization(system: &TestSystem, cfg: &SuiteConfig) -> Result<AxiomReport> {
    system.check_config(cfg)?;
    let mut rng = cfg.rng(Axiom::Standardization);
    let mut worst: f64 = 0.0;
    match system {
        TestSystem::Su2(kd) => {
            let d = kd.rep().dim();
            for _ in 0..cfg.trials {
                let a = random_complex(&mut rng, d);
                for s in &cfg.s_values {
                    let f = weyl_map(kd, &a, *s, kd.grid())?;
                    worst = worst.max((f.integral()? - a.trace()).norm());
                }
            }
            Ok(AxiomReport::new(Axiom::Standardization, system, cfg, worst, su2_tol::STANDARDIZATION))
        }
        TestSystem::Hw(k) => {
            let d = k.rep().dim();
            // F^(s) of a low-photon operator is e^{−2|α|²/(1+s)} × a polynomial of
            // degree ≤ 2·HW_PHOTONS in (α, α*)
            let grids: Vec<_> = cfg
                .s_values
                .iter()
                .map(|s| plane_grid(HW_PHOTONS + 2, 2 * HW_PHOTONS + 2, 2.0 / (1.0 + s.value())))
                .collect::<Result<_>>()?;
            let basis = basis_blocks(k, &cfg.s_values, &grids)?;
            for _ in 0..cfg.trials {
                let a = random_low_photon(&mut rng, d, false);
                for (blocks, grid) in basis.iter().zip(&grids) {
                    let total: Complex64 = blocks
                        .iter()
                        .zip(&grid.weights)
                        .map(|(b, w)| trace_low(&a, b) * *w)
                        .sum();
                    worst = worst.max((total - a.trace()).norm());
                }
            }
            Ok(AxiomReport::new(Axiom::Standardization, system, cfg, worst, hw_tol::STANDARDIZATION))
        }
    }
}

/// Low-photon kernel blocks at every node of each grid, one grid per s.
fn basis_blocks(
    k: &HwKernel,
    s_values: &[SValue],
    grids: &[crate::hw::PlaneGrid],
) -> Result<Vec<Vec<OperatorMatrix>>> {
    s_values
        .iter()
        .zip(grids)
        .map(|(s, g)| {
            g.nodes
                .iter()
                .map(|z| k.kernel_block(*s, *z, HW_PHOTONS + 1))
                .collect()
        })
        .collect()
}

fn trace_low(a: &OperatorMatrix, block: &OperatorMatrix) -> Complex64 {
    let n = block.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..n {
        for q in 0..n {
            acc += a[(p, q)] * block[(q, p)];
        }
    }
    acc
}

/// `F_{T(g) A T(g)⁻¹}(Ω) = F_A(g⁻¹Ω)`.
///
/// On the plane `g` is a displacement by a random `β`, built from untruncated
/// matrix elements; the displaced operator spreads over the whole cutoff, so the
/// check needs `n_max` well above the photon numbers `D(β)` reaches.
pub fn verify_covariance(system: &TestSystem, cfg: &SuiteConfig) -> Result<AxiomReport> {
    system.check_config(cfg)?;
    let mut rng = cfg.rng(Axiom::Covariance);
    let mut worst: f64 = 0.0;
    match system {
        TestSystem::Su2(kd) => {
            let rep = kd.rep();
            for _ in 0..cfg.trials {
                let g = EulerAngles::random(&mut rng);
                let a = random_complex(&mut rng, rep.dim());
                let t = rotation_operator(rep, &g);
                let moved = &t * &a * t.adjoint();
                let ca = harmonic_coefficients(kd, &a)?;
                let cm = harmonic_coefficients(kd, &moved)?;
                let inv = g.inverse();
                for _ in 0..SU2_COVARIANCE_PROBES {
                    let p = random_sphere_point(&mut rng);
                    let back = rotate_point(&inv, &p);
                    for s in &cfg.s_values {
                        let lhs = qpd_from_coefficients(kd, &cm, *s, &p);
                        let rhs = qpd_from_coefficients(kd, &ca, *s, &back);
                        worst = worst.max((lhs - rhs).norm());
                    }
                }
            }
            Ok(AxiomReport::new(Axiom::Covariance, system, cfg, worst, su2_tol::COVARIANCE))
        }
        TestSystem::Hw(k) => {
            let d = k.rep().dim();
            let rows = HW_PHOTONS + 1;
            for _ in 0..cfg.trials {
                let beta = random_plane_point(&mut rng, HW_PROBE_RADIUS);
                let a = random_low_photon(&mut rng, d, false);
                // D(β) A D(β)† from the untruncated displacement elements
                let cols = DMatrix::from_fn(d, rows, |p, q| k.displacement_element(beta, p, q));
                let small = a.view((0, 0), (rows, rows)).into_owned();
                let moved = &cols * small * cols.adjoint();
                for _ in 0..HW_COVARIANCE_PROBES {
                    let alpha = random_plane_point(&mut rng, HW_PROBE_RADIUS);
                    for s in &cfg.s_values {
                        let lhs = k.qpd_value(&moved, *s, alpha)?;
                        let rhs = k.qpd_value(&a, *s, alpha - beta)?;
                        worst = worst.max((lhs - rhs).norm());
                    }
                }
            }
            Ok(AxiomReport::new(Axiom::Covariance, system, cfg, worst, hw_tol::COVARIANCE))
        }
    }
}

/// `∫dμ F_A^(s) F_B^(−s) = Tr(AB)`, relative to `max(1, |Tr AB|)`.
pub fn verify_traciality(system: &TestSystem, cfg: &SuiteConfig) -> Result<AxiomReport> {
    system.check_config(cfg)?;
    let mut rng = cfg.rng(Axiom::Traciality);
    let mut worst: f64 = 0.0;
    match system {
        TestSystem::Su2(kd) => {
            let d = kd.rep().dim();
            for _ in 0..cfg.trials {
                let a = random_hermitian(&mut rng, d);
                let b = random_hermitian(&mut rng, d);
                let target = trace_product(&a, &b);
                for s in &cfg.s_values {
                    let fa = weyl_map(kd, &a, *s, kd.grid())?;
                    let fb = weyl_map(kd, &b, s.dual(), kd.grid())?;
                    let pairing: Complex64 = kd
                        .grid()
                        .weights
                        .iter()
                        .zip(fa.values.iter().zip(&fb.values))
                        .map(|(w, (x, y))| x * y * *w)
                        .sum();
                    worst = worst.max((pairing - target).norm() / target.norm().max(1.0));
                }
            }
            Ok(AxiomReport::new(Axiom::Traciality, system, cfg, worst, su2_tol::TRACIALITY))
        }
        TestSystem::Hw(k) => {
            let d = k.rep().dim();
            // product decays like e^{−4|α|²/(1−s²)} times a polynomial of degree
            // ≤ 2·HW_PHOTONS in |α|² and angular order ≤ 2·HW_PHOTONS
            let grids: Vec<_> = cfg
                .s_values
                .iter()
                .map(|s| {
                    let v = s.value();
                    plane_grid(HW_PHOTONS + 3, 2 * HW_PHOTONS + 2, 4.0 / (1.0 - v * v))
                })
                .collect::<Result<_>>()?;
            let plus = basis_blocks(k, &cfg.s_values, &grids)?;
            let duals: Vec<SValue> = cfg.s_values.iter().map(SValue::dual).collect();
            let minus = basis_blocks(k, &duals, &grids)?;
            for _ in 0..cfg.trials {
                let a = random_low_photon(&mut rng, d, true);
                let b = random_low_photon(&mut rng, d, true);
                let target = trace_product(&a, &b);
                for ((bp, bm), grid) in plus.iter().zip(&minus).zip(&grids) {
                    let pairing: Complex64 = bp
                        .iter()
                        .zip(bm)
                        .zip(&grid.weights)
                        .map(|((x, y), w)| trace_low(&a, x) * trace_low(&b, y) * *w)
                        .sum();
                    worst = worst.max((pairing - target).norm() / target.norm().max(1.0));
                }
            }
            Ok(AxiomReport::new(Axiom::Traciality, system, cfg, worst, hw_tol::TRACIALITY))
        }
    }
}

/// Reproducing property of the transfer kernels.
///
/// Sphere: `Σ_k w_k K(Ω, Ω_k) Δ^(s)(Ω_k) = Δ^(s)(Ω)` and `Σ_k w_k K(Ω, Ω_k) = 1`
/// at random probes. Plane: the Gaussian transfer kernel carries `Δ^(s)` to
/// `Δ^(1)` (the coherent-state projector) on the low-photon block.
pub fn verify_delta(system: &TestSystem, cfg: &SuiteConfig) -> Result<AxiomReport> {
    system.check_config(cfg)?;
    let mut rng = cfg.rng(Axiom::Delta);
    let mut worst: f64 = 0.0;
    match system {
        TestSystem::Su2(kd) => {
            let grid = kd.grid();
            let kernels: Vec<Vec<OperatorMatrix>> = cfg
                .s_values
                .iter()
                .map(|s| grid.nodes.iter().map(|p| sw_kernel_at(kd, *s, p)).collect())
                .collect();
            for _ in 0..cfg.trials {
                let probe = random_sphere_point(&mut rng);
                let k_row: Vec<Complex64> = grid
                    .nodes
                    .iter()
                    .map(|p| transfer_kernel(kd, SValue::W, SValue::W, &probe, p))
                    .collect();
                let mass: Complex64 = k_row.iter().zip(&grid.weights).map(|(k, w)| k * *w).sum();
                worst = worst.max((mass - 1.0).norm());
                for (s, node_kernels) in cfg.s_values.iter().zip(&kernels) {
                    let d = kd.rep().dim();
                    let mut acc = OperatorMatrix::zeros(d, d);
                    for ((kv, w), delta) in k_row.iter().zip(&grid.weights).zip(node_kernels) {
                        acc += delta * (kv * *w);
                    }
                    worst = worst.max(max_abs_diff(&acc, &sw_kernel_at(kd, *s, &probe)));
                }
            }
            Ok(AxiomReport::new(Axiom::Delta, system, cfg, worst, su2_tol::DELTA))
        }
        TestSystem::Hw(k) => {
            let rows = HW_PHOTONS + 1;
            let mut per_s = Vec::with_capacity(cfg.s_values.len());
            for s in &cfg.s_values {
                let width = 1.0 - s.value();
                let grid = plane_grid(40, 48, 2.0 / width + 2.0 / (1.0 + s.value()))?;
                let blocks = grid
                    .nodes
                    .iter()
                    .map(|z| k.kernel_block(*s, *z, rows))
                    .collect::<Result<Vec<_>>>()?;
                per_s.push((*s, grid, blocks));
            }
            for _ in 0..cfg.trials {
                let alpha = random_plane_point(&mut rng, HW_PROBE_RADIUS);
                let target = k.kernel_block(SValue::Q, alpha, rows)?;
                for (s, grid, blocks) in &per_s {
                    let mut acc = OperatorMatrix::zeros(rows, rows);
                    for ((beta, w), b) in grid.nodes.iter().zip(&grid.weights).zip(blocks) {
                        acc += b * Complex64::new(w * gaussian_transfer(SValue::Q, *s, alpha, *beta), 0.0);
                    }
                    worst = worst.max(max_abs_diff(&acc, &target));
                }
            }
            Ok(AxiomReport::new(Axiom::Delta, system, cfg, worst, hw_tol::DELTA))
        }
    }
}
