use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{PhasePoint, SpinRep};
use crate::linalg::OperatorMatrix;

/// z-y-z Euler angles; the rotation is `R_z(α) R_y(β) R_z(γ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl EulerAngles {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self { alpha, beta, gamma }
    }

    pub fn identity() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    pub fn inverse(&self) -> Self {
        Self::new(-self.gamma, -self.beta, -self.alpha)
    }

    /// SO(3) matrix, row-major.
    pub fn so3(&self) -> [[f64; 3]; 3] {
        let (sa, ca) = self.alpha.sin_cos();
        let (sb, cb) = self.beta.sin_cos();
        let (sg, cg) = self.gamma.sin_cos();
        [
            [ca * cb * cg - sa * sg, -ca * cb * sg - sa * cg, ca * sb],
            [sa * cb * cg + ca * sg, -sa * cb * sg + ca * cg, sa * sb],
            [-sb * cg, sb * sg, cb],
        ]
    }

    /// Euler angles of a rotation matrix.
    pub fn from_so3(r: &[[f64; 3]; 3]) -> Self {
        let beta = r[2][2].clamp(-1.0, 1.0).acos();
        if beta.sin().abs() < 1e-12 {
            // gimbal lock: only α ± γ is defined
            let alpha = if r[2][2] > 0.0 {
                r[1][0].atan2(r[0][0])
            } else {
                (-r[1][0]).atan2(-r[0][0])
            };
            return Self::new(alpha, beta, 0.0);
        }
        Self::new(r[1][2].atan2(r[0][2]), beta, r[2][1].atan2(-r[2][0]))
    }

    /// Rotation from a (not necessarily normalized) quaternion `w + xi + yj + zk`.
    pub fn from_quaternion(q: [f64; 4]) -> Self {
        let n = q.iter().map(|c| c * c).sum::<f64>().sqrt();
        let [w, x, y, z] = q.map(|c| c / n);
        let r = [
            [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
            [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
            [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
        ];
        Self::from_so3(&r)
    }

    /// Haar-random rotation via a normalized Gaussian quaternion.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let q = [(); 4].map(|_| rng.sample::<f64, _>(StandardNormal));
        Self::from_quaternion(q)
    }
}

/// Wigner-D matrix `T(g) = e^{−iαJ_z} e^{−iβJ_y} e^{−iγJ_z}`.
pub fn rotation_operator(rep: &SpinRep, g: &EulerAngles) -> OperatorMatrix {
    let d = small_d(rep, g.beta);
    OperatorMatrix::from_fn(rep.dim(), rep.dim(), |r, c| {
        let phase = -rep.m(r) * g.alpha - rep.m(c) * g.gamma;
        d[(r, c)] * Complex64::from_polar(1.0, phase)
    })
}

/// `e^{−iβJ_y}` from the spectral decomposition of `J_y`.
fn small_d(rep: &SpinRep, beta: f64) -> OperatorMatrix {
    let eig = SymmetricEigen::new(rep.jy());
    let v = &eig.eigenvectors;
    let phases = eig
        .eigenvalues
        .map(|lambda| Complex64::from_polar(1.0, -beta * lambda));
    let scaled = OperatorMatrix::from_fn(rep.dim(), rep.dim(), |r, c| v[(r, c)] * phases[c]);
    scaled * v.adjoint()
}

/// Image of a point under the rotation `g`.
pub fn rotate_point(g: &EulerAngles, omega: &PhasePoint) -> PhasePoint {
    let r = g.so3();
    let v = omega.unit_vector();
    let w = [0, 1, 2].map(|i| r[i][0] * v[0] + r[i][1] * v[1] + r[i][2] * v[2]);
    PhasePoint::from_unit_vector(w)
}
