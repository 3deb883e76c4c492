//! Named quantum states, described by small JSON documents.
//!
//! ```json
//! {"kind": "dicke", "m": 0.5}
//! {"kind": "coherent", "theta": 1.2, "phi": 0.3}
//! {"kind": "cat", "first": {"re": 1.0, "im": 0.0}, "second": {"re": -1.0, "im": 0.0}, "phase": 0.0}
//! {"kind": "random_mixed", "seed": 7, "rank": 2}
//! {"kind": "matrix", "re": [[0.5, 0.0], [0.0, 0.5]]}
//! ```

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hw::HwKernel;
use crate::linalg::{hermiticity_defect, projector, random_density, random_unit_vector, OperatorMatrix};
use crate::qpd::System;
use crate::su2::{coherent_state, PhasePoint};

/// Hermiticity, trace and positivity are enforced to this tolerance.
pub const STATE_TOL: f64 = 1e-12;

/// Photon numbers `0..HW_RANDOM_SUPPORT` carry random plane states unless
/// `support` is given.
pub const HW_RANDOM_SUPPORT: usize = 6;

/// A coherent-state label: `(θ, φ)` on the sphere or `α = re + i·im` on the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoherentPoint {
    Sphere { theta: f64, phi: f64 },
    Plane { re: f64, im: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateSpec {
    /// `|j, m⟩` (SU(2) only).
    Dicke { m: f64 },
    /// `|n⟩` (plane only).
    Fock { n: usize },
    Coherent {
        #[serde(flatten)]
        point: CoherentPoint,
    },
    /// `|first⟩ + e^{i·phase}|second⟩`, normalized.
    Cat {
        first: CoherentPoint,
        second: CoherentPoint,
        #[serde(default)]
        phase: f64,
    },
    RandomPure {
        seed: u64,
        #[serde(default)]
        support: Option<usize>,
    },
    /// `G G†/Tr(G G†)` with Gaussian `G` of shape `support × rank`.
    RandomMixed {
        seed: u64,
        #[serde(default)]
        rank: Option<usize>,
        #[serde(default)]
        support: Option<usize>,
    },
    MaximallyMixed,
    /// Explicit density matrix; `im` defaults to zero.
    Matrix {
        re: Vec<Vec<f64>>,
        #[serde(default)]
        im: Option<Vec<Vec<f64>>>,
    },
}

/// A validated density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedState {
    pub rho: OperatorMatrix,
    /// `Tr ρ² = 1` to [`STATE_TOL`].
    pub pure: bool,
}

impl StateSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("state spec: {e}")))
    }

    pub fn density_matrix(&self, system: &System) -> Result<PreparedState> {
        let rho = match self {
            StateSpec::Dicke { m } => projector(&system.spin_rep()?.dicke(*m)?),
            StateSpec::Fock { n } => projector(&system.fock_rep()?.fock(*n)?),
            StateSpec::Coherent { point } => projector(&coherent_vector(system, point)?),
            StateSpec::Cat { first, second, phase } => {
                let a = coherent_vector(system, first)?;
                let b = coherent_vector(system, second)?;
                let rel = Complex64::from_polar(1.0, *phase);
                let v: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x + rel * y).collect();
                projector(&normalized(v)?)
            }
            StateSpec::RandomPure { seed, support } => {
                let n = random_support(system, *support)?;
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let mut v = random_unit_vector(&mut rng, n);
                v.resize(system.dim(), Complex64::new(0.0, 0.0));
                projector(&v)
            }
            StateSpec::RandomMixed { seed, rank, support } => {
                let n = random_support(system, *support)?;
                let rank = rank.unwrap_or(n);
                if rank == 0 {
                    return Err(Error::InvalidState("rank must be at least 1".into()));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let small = random_density(&mut rng, n, rank);
                let mut rho = OperatorMatrix::zeros(system.dim(), system.dim());
                rho.view_mut((0, 0), (n, n)).copy_from(&small);
                rho
            }
            StateSpec::MaximallyMixed => {
                let d = system.dim();
                OperatorMatrix::identity(d, d) / Complex64::new(d as f64, 0.0)
            }
            StateSpec::Matrix { re, im } => matrix_from_parts(system.dim(), re, im.as_deref())?,
        };
        validate_density(rho)
    }
}

fn random_support(system: &System, support: Option<usize>) -> Result<usize> {
    let default = match system {
        System::Su2 { .. } => system.dim(),
        System::Hw { .. } => HW_RANDOM_SUPPORT.min(system.dim()),
    };
    let n = support.unwrap_or(default);
    if n == 0 || n > system.dim() {
        return Err(Error::InvalidState(format!(
            "support {n} must lie in 1..={}",
            system.dim()
        )));
    }
    Ok(n)
}

fn coherent_vector(system: &System, point: &CoherentPoint) -> Result<Vec<Complex64>> {
    match (system, point) {
        (System::Su2 { .. }, CoherentPoint::Sphere { theta, phi }) => {
            Ok(coherent_state(&system.spin_rep()?, &PhasePoint::new(*theta, *phi)))
        }
        (System::Hw { .. }, CoherentPoint::Plane { re, im }) => {
            let k = HwKernel::new(system.fock_rep()?);
            let alpha = Complex64::new(*re, *im);
            let v: Vec<Complex64> = (0..system.dim()).map(|n| k.displacement_element(alpha, n, 0)).collect();
            let lost = 1.0 - v.iter().map(|c| c.norm_sqr()).sum::<f64>();
            if lost > 1e-10 {
                log::warn!("coherent state α = {alpha} loses {lost:.2e} of its norm to the cutoff");
            }
            normalized(v)
        }
        (System::Su2 { .. }, _) => Err(Error::InvalidState(
            "spin coherent states are labelled by theta and phi".into(),
        )),
        (System::Hw { .. }, _) => Err(Error::InvalidState(
            "plane coherent states are labelled by re and im".into(),
        )),
    }
}

fn normalized(v: Vec<Complex64>) -> Result<Vec<Complex64>> {
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if !(norm > 1e-12) {
        return Err(Error::InvalidState("state vector has zero norm".into()));
    }
    Ok(v.into_iter().map(|c| c / norm).collect())
}

fn matrix_from_parts(dim: usize, re: &[Vec<f64>], im: Option<&[Vec<f64>]>) -> Result<OperatorMatrix> {
    let check = |rows: &[Vec<f64>]| -> Result<()> {
        if rows.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: rows.len(),
            });
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        Ok(())
    };
    check(re)?;
    if let Some(im) = im {
        check(im)?;
    }
    Ok(OperatorMatrix::from_fn(dim, dim, |r, c| {
        Complex64::new(re[r][c], im.map_or(0.0, |m| m[r][c]))
    }))
}

/// Checks Hermiticity, unit trace and positivity to [`STATE_TOL`].
pub fn validate_density(rho: OperatorMatrix) -> Result<PreparedState> {
    if rho.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::InvalidState("matrix has non-finite entries".into()));
    }
    let defect = hermiticity_defect(&rho);
    if defect > STATE_TOL {
        return Err(Error::InvalidState(format!("not Hermitian (defect {defect:.2e})")));
    }
    let tr = rho.trace();
    if (tr - 1.0).norm() > STATE_TOL {
        return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
    }
    let herm = (&rho + rho.adjoint()).scale(0.5);
    let min_eig = SymmetricEigen::new(herm.clone()).eigenvalues.min();
    if min_eig < -STATE_TOL {
        return Err(Error::InvalidState(format!(
            "not positive semidefinite (eigenvalue {min_eig:.3e})"
        )));
    }
    let purity = (&herm * &herm).trace().re;
    Ok(PreparedState {
        rho: herm,
        pure: (purity - 1.0).abs() <= STATE_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su2::SpinRep;

    fn spin(twice_j: u32) -> System {
        System::su2(&SpinRep::new(twice_j).unwrap())
    }

    #[test]
    fn parses_documented_examples() {
        let cases = [
            r#"{"kind": "dicke", "m": 0.5}"#,
            r#"{"kind": "coherent", "theta": 1.2, "phi": 0.3}"#,
            r#"{"kind": "cat", "first": {"re": 1.0, "im": 0.0}, "second": {"re": -1.0, "im": 0.0}, "phase": 0.0}"#,
            r#"{"kind": "random_mixed", "seed": 7, "rank": 2}"#,
            r#"{"kind": "matrix", "re": [[0.5, 0.0], [0.0, 0.5]]}"#,
            r#"{"kind": "maximally_mixed"}"#,
        ];
        for c in cases {
            let spec = StateSpec::from_json(c).unwrap();
            let back: StateSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
            assert_eq!(back, spec);
        }
        assert!(StateSpec::from_json(r#"{"kind": "squeezed"}"#).is_err());
    }

    #[test]
    fn spin_states_are_valid() {
        let sys = spin(3);
        for spec in [
            StateSpec::Dicke { m: -0.5 },
            StateSpec::Coherent { point: CoherentPoint::Sphere { theta: 0.4, phi: 2.0 } },
            StateSpec::Cat {
                first: CoherentPoint::Sphere { theta: 0.0, phi: 0.0 },
                second: CoherentPoint::Sphere { theta: std::f64::consts::PI, phi: 0.0 },
                phase: 1.0,
            },
            StateSpec::RandomPure { seed: 1, support: None },
        ] {
            let st = spec.density_matrix(&sys).unwrap();
            assert!(st.pure, "{spec:?}");
            assert_eq!(st.rho.nrows(), 4);
        }
        let mixed = StateSpec::RandomMixed { seed: 2, rank: Some(2), support: None };
        assert!(!mixed.density_matrix(&sys).unwrap().pure);
        assert!(StateSpec::Dicke { m: 2.5 }.density_matrix(&sys).is_err());
        assert!(StateSpec::Fock { n: 0 }.density_matrix(&sys).is_err());
    }

    #[test]
    fn plane_states_are_valid() {
        let sys = System::Hw { n_max: 30 };
        let st = StateSpec::Coherent { point: CoherentPoint::Plane { re: 0.5, im: -0.2 } }
            .density_matrix(&sys)
            .unwrap();
        assert!(st.pure);
        let r = StateSpec::RandomMixed { seed: 4, rank: None, support: None }.density_matrix(&sys).unwrap();
        assert!(r.rho[(HW_RANDOM_SUPPORT, HW_RANDOM_SUPPORT)].norm() == 0.0);
        assert!(StateSpec::Coherent { point: CoherentPoint::Sphere { theta: 0.1, phi: 0.0 } }
            .density_matrix(&sys)
            .is_err());
    }

    #[test]
    fn matrix_validation() {
        let sys = spin(1);
        let bad_trace = StateSpec::Matrix { re: vec![vec![1.0, 0.0], vec![0.0, 1.0]], im: None };
        assert!(bad_trace.density_matrix(&sys).is_err());
        let not_psd = StateSpec::Matrix { re: vec![vec![1.5, 0.0], vec![0.0, -0.5]], im: None };
        assert!(not_psd.density_matrix(&sys).is_err());
        let not_herm = StateSpec::Matrix {
            re: vec![vec![0.5, 0.0], vec![0.0, 0.5]],
            im: Some(vec![vec![0.0, 0.1], vec![0.1, 0.0]]),
        };
        assert!(not_herm.density_matrix(&sys).is_err());
        let wrong_dim = StateSpec::Matrix { re: vec![vec![1.0]], im: None };
        assert!(matches!(wrong_dim.density_matrix(&sys), Err(Error::DimensionMismatch { .. })));
        let ok = StateSpec::Matrix {
            re: vec![vec![0.5, 0.0], vec![0.0, 0.5]],
            im: Some(vec![vec![0.0, 0.1], vec![-0.1, 0.0]]),
        };
        let st = ok.density_matrix(&sys).unwrap();
        assert!(!st.pure);
    }
}
