//! Coupling constants, reduced parameters and the region classification of
//! the (g1, g2) plane.

use serde::Serialize;

use crate::error::{domain, Result};

/// g1 closer than this to −1/4 is treated as exactly κ = 0.
pub const KAPPA_ZERO_SNAP: f64 = 1e-14;

/// Physical couplings of `-d²/dx² + g1/x² + g2·x²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Couplings {
    pub g1: f64,
    pub g2: f64,
}

impl Couplings {
    pub fn new(g1: f64, g2: f64) -> Self {
        Couplings { g1, g2 }
    }
}

/// Dimensionless parameters of the reduced problem.
///
/// * `kappa = sqrt(g1 + 1/4)`
/// * `upsilon = g2^{1/4}`
/// * `w0 = -(1 + kappa)/2`, the admissibility floor for `w = u/(4 upsilon²)`
/// * `u0 = 4 upsilon² w0`
/// * `beta = 1 + kappa`
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedParams {
    pub kappa: f64,
    pub upsilon: f64,
    pub w0: f64,
    pub u0: f64,
    pub beta: f64,
}

impl ReducedParams {
    /// Builds the reduced set directly from κ ≥ 0 and υ > 0.
    pub fn from_kappa_upsilon(kappa: f64, upsilon: f64) -> Result<Self> {
        if !(kappa >= 0.0) || !kappa.is_finite() {
            return domain(format!("kappa must be finite and >= 0, got {kappa}"));
        }
        if !(upsilon > 0.0) || !upsilon.is_finite() {
            return domain(format!("upsilon must be finite and > 0, got {upsilon}"));
        }
        let w0 = -0.5 * (1.0 + kappa);
        Ok(ReducedParams {
            kappa,
            upsilon,
            w0,
            u0: 4.0 * upsilon * upsilon * w0,
            beta: 1.0 + kappa,
        })
    }

    /// α(w) = (1 + κ)/2 + w; positive exactly when w > w0.
    pub fn alpha_of(&self, w: f64) -> f64 {
        0.5 * (1.0 + self.kappa) + w
    }

    /// ρ(x) = (υx)².
    pub fn rho(&self, x: f64) -> f64 {
        let y = self.upsilon * x;
        y * y
    }

    pub fn upsilon_sq(&self) -> f64 {
        self.upsilon * self.upsilon
    }

    pub fn g1(&self) -> f64 {
        self.kappa * self.kappa - 0.25
    }

    pub fn g2(&self) -> f64 {
        self.upsilon_sq() * self.upsilon_sq()
    }

    pub fn couplings(&self) -> Couplings {
        Couplings::new(self.g1(), self.g2())
    }

    /// u = 4υ²w.
    pub fn u_of_w(&self, w: f64) -> f64 {
        4.0 * self.upsilon_sq() * w
    }

    /// w = u/(4υ²).
    pub fn w_of_u(&self, u: f64) -> f64 {
        u / (4.0 * self.upsilon_sq())
    }

    /// Lowest Friedrichs/unique level 2υ²(1 + κ) (equal to −u0).
    pub fn friedrichs_ground(&self) -> f64 {
        2.0 * self.upsilon_sq() * (1.0 + self.kappa)
    }

    /// True when the origin admits a one-parameter family of extensions.
    pub fn has_extension_family(&self) -> bool {
        self.kappa < 1.0
    }
}

/// Maps couplings in the quadrant g1 ≥ −1/4, g2 > 0 to reduced parameters.
pub fn reduce(c: Couplings) -> Result<ReducedParams> {
    if !c.g1.is_finite() || !c.g2.is_finite() {
        return domain(format!("couplings must be finite, got g1={}, g2={}", c.g1, c.g2));
    }
    let shifted = c.g1 + 0.25;
    if shifted < -KAPPA_ZERO_SNAP {
        return domain(format!("g1 = {} < -1/4 admits no factorized representation", c.g1));
    }
    if !(c.g2 > 0.0) {
        return domain(format!("g2 = {} must be positive", c.g2));
    }
    let kappa = if shifted.abs() < KAPPA_ZERO_SNAP {
        0.0
    } else {
        shifted.sqrt()
    };
    ReducedParams::from_kappa_upsilon(kappa, c.g2.sqrt().sqrt())
}

/// Region of the coupling plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegionClass {
    /// g1 < −1/4. `also_fall_to_infinity` is set when g2 < 0 as well.
    FallToCenter { also_fall_to_infinity: bool },
    /// g2 < 0 with g1 ≥ −1/4.
    FallToInfinity,
    /// g2 = 0: the pure Calogero problem, not treated numerically here.
    CalogeroOnly,
    /// g1 ≥ 3/4, g2 > 0: a single self-adjoint Hamiltonian.
    UniqueExtension,
    /// −1/4 < g1 < 3/4, g2 > 0.
    FamilyKappaPositive,
    /// g1 = −1/4, g2 > 0.
    FamilyKappaZero,
}

impl RegionClass {
    pub fn admits_representation(&self) -> bool {
        matches!(
            self,
            RegionClass::UniqueExtension | RegionClass::FamilyKappaPositive | RegionClass::FamilyKappaZero
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            RegionClass::FallToCenter {
                also_fall_to_infinity: false,
            } => "fall-to-center",
            RegionClass::FallToCenter {
                also_fall_to_infinity: true,
            } => "fall-to-center+fall-to-infinity",
            RegionClass::FallToInfinity => "fall-to-infinity",
            RegionClass::CalogeroOnly => "calogero-only",
            RegionClass::UniqueExtension => "unique-extension",
            RegionClass::FamilyKappaPositive => "family-kappa-positive",
            RegionClass::FamilyKappaZero => "family-kappa-zero",
        }
    }
}

/// Total classification of (g1, g2). Non-finite couplings are reported as a
/// fall to the center.
pub fn classify(c: Couplings) -> RegionClass {
    let shifted = c.g1 + 0.25;
    if !(shifted >= -KAPPA_ZERO_SNAP) {
        return RegionClass::FallToCenter {
            also_fall_to_infinity: c.g2 < 0.0,
        };
    }
    if c.g2 < 0.0 {
        return RegionClass::FallToInfinity;
    }
    if !(c.g2 > 0.0) {
        return RegionClass::CalogeroOnly;
    }
    if shifted.abs() < KAPPA_ZERO_SNAP {
        RegionClass::FamilyKappaZero
    } else if c.g1 >= 0.75 {
        RegionClass::UniqueExtension
    } else {
        RegionClass::FamilyKappaPositive
    }
}
