//! Spin-j representation machinery on the sphere S² = SU(2)/U(1).
//!
//! Basis convention: index `k = 0..2j` labels `|j, m⟩` with `m = j - k`, so the
//! highest-weight state comes first. The reference state `|j, j⟩` sits at the
//! north pole.

mod coherent;
mod harmonics;
mod quadrature;
mod rotation;

pub use coherent::{coherent_overlap, coherent_projector, coherent_state, overlap_sq_closed_form};
pub use harmonics::{harmonic, harmonics_at, spherical_harmonics, HarmonicIndex};
pub use quadrature::{gauss_legendre, gauss_legendre_dd, legendre_dd, sphere_grid, QuadratureGrid};
pub use rotation::{rotate_point, rotation_operator, EulerAngles};

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::OperatorMatrix;

/// Irreducible spin-j representation, stored as the integer `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinRep {
    twice_j: u32,
}

impl SpinRep {
    pub fn new(twice_j: u32) -> Result<Self> {
        if twice_j == 0 {
            return Err(Error::InvalidSpin(0));
        }
        Ok(Self { twice_j })
    }

    /// Parses a spin given as a real number such as `0.5` or `3`.
    pub fn from_j(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        let rounded = twice.round();
        if !twice.is_finite() || (twice - rounded).abs() > 1e-9 || rounded < 1.0 {
            return Err(Error::InvalidSpin(rounded as i64));
        }
        Self::new(rounded as u32)
    }

    pub fn twice_j(&self) -> u32 {
        self.twice_j
    }

    pub fn j(&self) -> f64 {
        f64::from(self.twice_j) / 2.0
    }

    pub fn dim(&self) -> usize {
        self.twice_j as usize + 1
    }

    /// Magnetic quantum number of basis index `k`.
    pub fn m(&self, k: usize) -> f64 {
        self.j() - k as f64
    }

    /// Largest harmonic degree carried by operators on this space.
    pub fn max_degree(&self) -> u32 {
        self.twice_j
    }

    /// `J_z` in the `|j, m⟩` basis.
    pub fn jz(&self) -> OperatorMatrix {
        let d = self.dim();
        OperatorMatrix::from_fn(d, d, |r, c| {
            if r == c {
                Complex64::new(self.m(r), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Raising operator `J_+`.
    pub fn jplus(&self) -> OperatorMatrix {
        let d = self.dim();
        let j = self.j();
        OperatorMatrix::from_fn(d, d, |r, c| {
            // ⟨m+1|J+|m⟩ with m = m(c), row index c-1
            if c >= 1 && r == c - 1 {
                let m = self.m(c);
                Complex64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn jx(&self) -> OperatorMatrix {
        let p = self.jplus();
        (&p + p.adjoint()).scale(0.5)
    }

    pub fn jy(&self) -> OperatorMatrix {
        let p = self.jplus();
        (&p - p.adjoint()) * Complex64::new(0.0, -0.5)
    }

    /// The Dicke state `|j, m⟩` as a basis vector.
    pub fn dicke(&self, m: f64) -> Result<Vec<Complex64>> {
        let k = self.j() - m;
        let kr = k.round();
        if (k - kr).abs() > 1e-9 || kr < 0.0 || kr as usize >= self.dim() {
            return Err(Error::InvalidState(format!(
                "m = {m} is not a valid projection for j = {}",
                self.j()
            )));
        }
        let mut v = vec![Complex64::new(0.0, 0.0); self.dim()];
        v[kr as usize] = Complex64::new(1.0, 0.0);
        Ok(v)
    }
}

impl fmt::Display for SpinRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice_j % 2 == 0 {
            write!(f, "{}", self.twice_j / 2)
        } else {
            write!(f, "{}/2", self.twice_j)
        }
    }
}

/// A point Ω = (θ, φ) on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub theta: f64,
    pub phi: f64,
}

impl PhasePoint {
    /// Builds a point, folding the angles into θ ∈ [0, π] and φ ∈ [0, 2π).
    pub fn new(theta: f64, phi: f64) -> Self {
        if (0.0..=PI).contains(&theta) {
            Self {
                theta,
                phi: canonical_phi(phi),
            }
        } else {
            let (st, ct) = theta.sin_cos();
            let (sp, cp) = phi.sin_cos();
            Self::from_unit_vector([st * cp, st * sp, ct])
        }
    }

    pub fn north() -> Self {
        Self { theta: 0.0, phi: 0.0 }
    }

    pub fn south() -> Self {
        Self { theta: PI, phi: 0.0 }
    }

    pub fn from_unit_vector(v: [f64; 3]) -> Self {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let z = (v[2] / norm).clamp(-1.0, 1.0);
        let theta = z.acos();
        let phi = if v[0] == 0.0 && v[1] == 0.0 {
            0.0
        } else {
            canonical_phi(v[1].atan2(v[0]))
        };
        Self { theta, phi }
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Cosine of the great-circle angle between two points.
    pub fn cos_angle(&self, other: &PhasePoint) -> f64 {
        let a = self.unit_vector();
        let b = other.unit_vector();
        (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).clamp(-1.0, 1.0)
    }
}

fn canonical_phi(phi: f64) -> f64 {
    let p = phi.rem_euclid(TAU);
    if p >= TAU {
        0.0
    } else {
        p
    }
}
