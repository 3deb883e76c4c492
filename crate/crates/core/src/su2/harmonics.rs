use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{PhasePoint, SpinRep};
use crate::error::{Error, Result};

/// Harmonic multi-index ν = (L, M), `0 ≤ L ≤ 2j`, `|M| ≤ L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HarmonicIndex {
    pub l: u32,
    pub m: i32,
}

impl HarmonicIndex {
    pub fn new(rep: &SpinRep, l: i64, m: i64) -> Result<Self> {
        if l < 0 || l > i64::from(rep.max_degree()) || m.abs() > l {
            return Err(Error::HarmonicIndex {
                l,
                m,
                twice_j: rep.twice_j(),
            });
        }
        Ok(Self {
            l: l as u32,
            m: m as i32,
        })
    }

    /// Position in the flat `L² + L + M` ordering.
    pub fn flat(&self) -> usize {
        let l = self.l as i64;
        (l * l + l + i64::from(self.m)) as usize
    }

    pub fn from_flat(i: usize) -> Self {
        let l = (i as f64).sqrt().floor() as u32;
        let l = if (l + 1) * (l + 1) <= i as u32 { l + 1 } else { l };
        Self {
            l,
            m: i as i32 - (l * l + l) as i32,
        }
    }

    /// The conjugate index ν̃ = (L, −M).
    pub fn conjugate(&self) -> Self {
        Self { l: self.l, m: -self.m }
    }

    /// All indices for a representation, in flat order. There are (2j+1)² of them.
    pub fn all(rep: &SpinRep) -> Vec<Self> {
        let n = rep.dim() * rep.dim();
        (0..n).map(Self::from_flat).collect()
    }
}

/// Orthonormal spherical harmonics `Y_LM(θ, φ)` (Condon-Shortley phase) for all
/// `L ≤ lmax`, in flat `L² + L + M` order.
pub fn spherical_harmonics(lmax: u32, theta: f64, phi: f64) -> Vec<Complex64> {
    let lmax = lmax as usize;
    let n = (lmax + 1) * (lmax + 1);
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let (st, x) = theta.sin_cos();
    let flat = |l: usize, m: i64| (l * l + l) as i64 + m;

    // Normalized associated Legendre functions, one column of fixed M at a time.
    let mut pmm = (1.0 / (4.0 * PI)).sqrt();
    for m in 0..=lmax {
        if m > 0 {
            let mf = m as f64;
            pmm *= -((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * st;
        }
        let mut p_prev = 0.0;
        let mut p_cur = pmm;
        let phase = Complex64::from_polar(1.0, m as f64 * phi);
        for l in m..=lmax {
            if l == m + 1 {
                let next = (2.0 * m as f64 + 3.0).sqrt() * x * pmm;
                p_prev = pmm;
                p_cur = next;
            } else if l > m + 1 {
                let (lf, mf) = (l as f64, m as f64);
                let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                let lp = lf - 1.0;
                let a_prev = ((4.0 * lp * lp - 1.0) / (lp * lp - mf * mf)).sqrt();
                let next = a * (x * p_cur - p_prev / a_prev);
                p_prev = p_cur;
                p_cur = next;
            }
            let y = phase * p_cur;
            out[flat(l, m as i64) as usize] = y;
            if m > 0 {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                out[flat(l, -(m as i64)) as usize] = y.conj() * sign;
            }
        }
    }
    out
}

fn harmonic_scale(rep: &SpinRep) -> f64 {
    (4.0 * PI / rep.dim() as f64).sqrt()
}

/// All `Y_ν(Ω) = √(4π/(2j+1)) Y_LM(θ, φ)` for the representation, flat order.
/// These are orthonormal under `dμ`.
pub fn harmonics_at(rep: &SpinRep, omega: &PhasePoint) -> Vec<Complex64> {
    let scale = harmonic_scale(rep);
    let mut y = spherical_harmonics(rep.max_degree(), omega.theta, omega.phi);
    for v in &mut y {
        *v *= scale;
    }
    y
}

/// Single harmonic `Y_ν(Ω)`.
pub fn harmonic(rep: &SpinRep, nu: &HarmonicIndex, omega: &PhasePoint) -> Result<Complex64> {
    if nu.l > rep.max_degree() || nu.m.unsigned_abs() > nu.l {
        return Err(Error::HarmonicIndex {
            l: i64::from(nu.l),
            m: i64::from(nu.m),
            twice_j: rep.twice_j(),
        });
    }
    let y = spherical_harmonics(nu.l, omega.theta, omega.phi);
    Ok(y[nu.flat()] * harmonic_scale(rep))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    /// Explicit-sum associated Legendre function with Condon-Shortley phase.
    fn legendre_explicit(l: u32, m: u32, x: f64) -> f64 {
        // P_l^m(x) = (-1)^m (1-x²)^{m/2} d^m/dx^m P_l(x), with
        // P_l(x) = 2^{-l} Σ_k (-1)^k C(l,k) C(2l-2k, l) x^{l-2k}
        let mut deriv = 0.0;
        for k in 0..=(l / 2) {
            let pow = l - 2 * k;
            if pow < m {
                continue;
            }
            let coeff = (-1f64).powi(k as i32) * factorial(2 * l - 2 * k)
                / (factorial(k) * factorial(l - k) * factorial(l - 2 * k));
            let falling = factorial(pow) / factorial(pow - m);
            deriv += coeff * falling * x.powi((pow - m) as i32);
        }
        deriv /= 2f64.powi(l as i32);
        (-1f64).powi(m as i32) * (1.0 - x * x).powf(m as f64 / 2.0) * deriv
    }

    #[test]
    fn matches_explicit_formula() {
        let (theta, phi) = (1.1, 0.4);
        let y = spherical_harmonics(8, theta, phi);
        for l in 0..=8u32 {
            for m in 0..=l {
                let norm = ((2 * l + 1) as f64 / (4.0 * PI) * factorial(l - m) / factorial(l + m)).sqrt();
                let expect = Complex64::from_polar(norm * legendre_explicit(l, m, theta.cos()), m as f64 * phi);
                let got = y[(l * l + l + m) as usize];
                assert!((got - expect).norm() < 1e-12, "L={l} M={m}: {got} vs {expect}");
            }
        }
    }

    #[test]
    fn low_order_closed_forms() {
        let (theta, phi) = (0.8, 2.3);
        let y = spherical_harmonics(1, theta, phi);
        assert!((y[0].re - (1.0 / (4.0 * PI)).sqrt()).abs() < 1e-15);
        assert!((y[2].re - (3.0 / (4.0 * PI)).sqrt() * theta.cos()).abs() < 1e-15);
        let y11 = Complex64::from_polar(-(3.0 / (8.0 * PI)).sqrt() * theta.sin(), phi);
        assert!((y[3] - y11).norm() < 1e-15);
    }

    #[test]
    fn index_round_trip_and_validation() {
        let rep = SpinRep::new(3).unwrap();
        let all = HarmonicIndex::all(&rep);
        assert_eq!(all.len(), 16);
        for (i, nu) in all.iter().enumerate() {
            assert_eq!(nu.flat(), i);
            assert!(nu.m.unsigned_abs() <= nu.l && nu.l <= 3);
        }
        assert!(HarmonicIndex::new(&rep, 4, 0).is_err());
        assert!(HarmonicIndex::new(&rep, 2, -3).is_err());
        let bad = HarmonicIndex { l: 5, m: 0 };
        assert!(harmonic(&rep, &bad, &PhasePoint::north()).is_err());
    }

    #[test]
    fn spin_half_monopole_and_pole_zeros() {
        let rep = SpinRep::new(1).unwrap();
        let y00 = harmonic(&rep, &HarmonicIndex { l: 0, m: 0 }, &PhasePoint::new(2.0, 1.0)).unwrap();
        assert!((y00.re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        let rep = SpinRep::new(6).unwrap();
        let y = harmonics_at(&rep, &PhasePoint::north());
        for nu in HarmonicIndex::all(&rep) {
            if nu.m != 0 {
                assert!(y[nu.flat()].norm() < 1e-15);
            }
        }
    }
}
