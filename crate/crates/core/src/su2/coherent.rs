use num_complex::Complex64;

use super::{PhasePoint, SpinRep};
use crate::linalg::{projector, OperatorMatrix};

fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// Spin coherent state |Ω⟩ in the `|j, m⟩` basis (m = j first).
///
/// `c_m = √C(2j, j+m) cos^{j+m}(θ/2) sin^{j−m}(θ/2) e^{−imφ}`.
pub fn coherent_state(rep: &SpinRep, omega: &PhasePoint) -> Vec<Complex64> {
    let n = rep.twice_j();
    let (s, c) = (omega.theta / 2.0).sin_cos();
    (0..rep.dim())
        .map(|k| {
            let up = n - k as u32; // j + m
            let down = k as u32; // j - m
            let amp = binomial(n, up).sqrt() * c.powi(up as i32) * s.powi(down as i32);
            Complex64::from_polar(amp, -rep.m(k) * omega.phi)
        })
        .collect()
}

/// `|Ω⟩⟨Ω|`.
pub fn coherent_projector(rep: &SpinRep, omega: &PhasePoint) -> OperatorMatrix {
    projector(&coherent_state(rep, omega))
}

/// `⟨Ω|Ω′⟩`.
pub fn coherent_overlap(rep: &SpinRep, omega: &PhasePoint, other: &PhasePoint) -> Complex64 {
    let a = coherent_state(rep, omega);
    let b = coherent_state(rep, other);
    a.iter().zip(&b).map(|(x, y)| x.conj() * y).sum()
}

/// `cos^{4j}(Θ/2)` where Θ is the angle between the two points.
pub fn overlap_sq_closed_form(rep: &SpinRep, omega: &PhasePoint, other: &PhasePoint) -> f64 {
    ((1.0 + omega.cos_angle(other)) / 2.0).powi(rep.twice_j() as i32)
}
