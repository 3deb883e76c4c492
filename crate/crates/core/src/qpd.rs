//! Sampled quasiprobability distributions and the metadata needed to rebuild
//! their quadrature grids.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hw::{plane_grid, FockRep, PlaneGrid};
use crate::kernel::SValue;
use crate::su2::{sphere_grid, QuadratureGrid, SpinRep};

/// Which group / representation a distribution belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "group", rename_all = "lowercase")]
pub enum System {
    Su2 { twice_j: u32 },
    Hw { n_max: usize },
}

impl System {
    pub fn su2(rep: &SpinRep) -> Self {
        System::Su2 {
            twice_j: rep.twice_j(),
        }
    }

    pub fn hw(rep: &FockRep) -> Self {
        System::Hw { n_max: rep.n_max() }
    }

    pub fn dim(&self) -> usize {
        match self {
            System::Su2 { twice_j } => *twice_j as usize + 1,
            System::Hw { n_max } => n_max + 1,
        }
    }

    pub fn spin_rep(&self) -> Result<SpinRep> {
        match self {
            System::Su2 { twice_j } => SpinRep::new(*twice_j),
            System::Hw { .. } => Err(Error::SystemMismatch(
                "expected an SU(2) system, found Heisenberg-Weyl".into(),
            )),
        }
    }

    pub fn fock_rep(&self) -> Result<FockRep> {
        match self {
            System::Hw { n_max } => FockRep::new(*n_max),
            System::Su2 { .. } => Err(Error::SystemMismatch(
                "expected a Heisenberg-Weyl system, found SU(2)".into(),
            )),
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            System::Su2 { twice_j } => write!(f, "su2 j={}", SpinRep::new(*twice_j).map_err(|_| fmt::Error)?),
            System::Hw { n_max } => write!(f, "hw n_max={n_max}"),
        }
    }
}

/// Parameters of the quadrature grid a distribution was sampled on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GridSpec {
    /// Gauss-Legendre in cos θ × uniform φ.
    Sphere { n_theta: usize, n_phi: usize },
    /// Scaled Gauss-Laguerre in |α|² × uniform arg α.
    Plane {
        n_radial: usize,
        n_angular: usize,
        scale: f64,
    },
}

impl GridSpec {
    pub fn sphere(grid: &QuadratureGrid) -> Self {
        GridSpec::Sphere {
            n_theta: grid.n_theta,
            n_phi: grid.n_phi,
        }
    }

    pub fn plane(grid: &PlaneGrid) -> Self {
        GridSpec::Plane {
            n_radial: grid.n_radial,
            n_angular: grid.n_angular,
            scale: grid.scale,
        }
    }
}

/// Rebuilt quadrature for a [`QpdGrid`].
pub enum Quadrature {
    Sphere(QuadratureGrid),
    Plane(PlaneGrid),
}

impl Quadrature {
    pub fn coordinates(&self) -> Vec<[f64; 2]> {
        match self {
            Quadrature::Sphere(g) => g.nodes.iter().map(|p| [p.theta, p.phi]).collect(),
            Quadrature::Plane(g) => g.nodes.iter().map(|a| [a.re, a.im]).collect(),
        }
    }

    pub fn weights(&self) -> &[f64] {
        match self {
            Quadrature::Sphere(g) => &g.weights,
            Quadrature::Plane(g) => &g.weights,
        }
    }
}

/// Values of `F_A^(s)` at the nodes of a quadrature grid.
#[derive(Debug, Clone, PartialEq)]
pub struct QpdGrid {
    pub system: System,
    pub s: SValue,
    pub grid: GridSpec,
    /// Node coordinates: `(θ, φ)` on the sphere, `(Re α, Im α)` on the plane.
    pub nodes: Vec<[f64; 2]>,
    pub values: Vec<Complex64>,
}

impl QpdGrid {
    /// Reconstructs the quadrature rule and checks it against the stored nodes.
    pub fn quadrature(&self) -> Result<Quadrature> {
        let quad = match (self.system, self.grid) {
            (System::Su2 { twice_j }, GridSpec::Sphere { n_theta, n_phi }) => {
                let rep = SpinRep::new(twice_j)?;
                Quadrature::Sphere(sphere_grid(&rep, Some(n_theta), Some(n_phi))?)
            }
            (System::Hw { .. }, GridSpec::Plane { n_radial, n_angular, scale }) => {
                Quadrature::Plane(plane_grid(n_radial, n_angular, scale)?)
            }
            (sys, grid) => {
                return Err(Error::SystemMismatch(format!(
                    "grid {grid:?} does not belong to system {sys}"
                )))
            }
        };
        let coords = quad.coordinates();
        if coords.len() != self.values.len() || coords.len() != self.nodes.len() {
            return Err(Error::DimensionMismatch {
                expected: coords.len(),
                found: self.values.len(),
            });
        }
        let worst = coords
            .iter()
            .zip(&self.nodes)
            .map(|(a, b)| (a[0] - b[0]).abs().max((a[1] - b[1]).abs()))
            .fold(0.0, f64::max);
        if worst > 1e-12 {
            return Err(Error::SystemMismatch(format!(
                "stored nodes deviate from the grid rule by {worst:e}"
            )));
        }
        Ok(quad)
    }

    /// `Σ_k w_k F(Ω_k)`.
    pub fn integral(&self) -> Result<Complex64> {
        let quad = self.quadrature()?;
        Ok(quad
            .weights()
            .iter()
            .zip(&self.values)
            .map(|(w, v)| v * *w)
            .sum())
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }
}
