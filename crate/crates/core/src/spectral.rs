//! Boundary angles, ground states and discrete spectra of the self-adjoint
//! extensions.
//!
//! Energies are located through z = (1+κ)/2 − E/(4υ²), so that
//! E = υ²(2(1+κ) − 4z). For κ ∈ (0,1) and ν ∈ (−π/2, π/2) the levels solve
//!
//! ```text
//! G(z) = R(z) cos ν + sin ν = 0,   R(z) = Γ(1−κ)Γ(z) / (Γ(1+κ)Γ(z−κ)),
//! ```
//!
//! and for κ = 0 they solve G(z) = (ψ(z) − 2ψ(1)) cos ν − sin ν = 0. Level n
//! lies in the gap z ∈ (−n, −n+1) (the ground state in z > 0), where G rises
//! from −∞ to +∞.

use std::f64::consts::FRAC_PI_2;

use log::warn;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::factorization::{asymptotic_coeffs, gamma_quotient, make_phi, EvaluableSolution, RepresentationParams};
use crate::params::ReducedParams;
use crate::quad::{self, Tolerance};
use crate::specfun::{digamma, gamma};

/// |ν ∓ π/2| below this selects the Friedrichs extension.
pub const FRIEDRICHS_SNAP: f64 = 1e-12;

/// Interior sample count used to confirm monotonicity before bisection.
const MONOTONE_SAMPLES: usize = 8;

/// Which self-adjoint Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "nu", rename_all = "snake_case")]
pub enum ExtensionLabel {
    /// g1 ≥ 3/4: the only self-adjoint realization.
    Unique,
    /// Boundary parameter ν ∈ [−π/2, π/2] with −π/2 ∼ π/2, for −1/4 ≤ g1 < 3/4.
    Nu(f64),
}

impl ExtensionLabel {
    /// The Friedrichs member ν = π/2 of the family.
    pub fn friedrichs() -> Self {
        ExtensionLabel::Nu(FRAC_PI_2)
    }

    /// True for Unique and for ν = ±π/2.
    pub fn is_friedrichs(&self) -> bool {
        match *self {
            ExtensionLabel::Unique => true,
            ExtensionLabel::Nu(nu) => (nu.abs() - FRAC_PI_2).abs() < FRIEDRICHS_SNAP,
        }
    }
}

/// Checks a label against the reduced parameters. Any ν supplied for κ ≥ 1
/// is mapped to Unique with a warning.
pub fn resolve_extension(rp: &ReducedParams, ext: ExtensionLabel) -> Result<ExtensionLabel> {
    match ext {
        ExtensionLabel::Unique if rp.kappa < 1.0 => domain(format!(
            "the extension is not unique for kappa = {} < 1 (g1 < 3/4); give nu",
            rp.kappa
        )),
        ExtensionLabel::Unique => Ok(ext),
        ExtensionLabel::Nu(nu) => {
            if !(nu.abs() <= FRAC_PI_2 + FRIEDRICHS_SNAP) {
                return domain(format!("nu = {nu} outside [-pi/2, pi/2]"));
            }
            if rp.kappa >= 1.0 {
                warn!("g1 >= 3/4 has a unique self-adjoint extension; ignoring nu = {nu}");
                return Ok(ExtensionLabel::Unique);
            }
            Ok(ext)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumMethod {
    PoleEnumeration,
    BracketedRoot,
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub energies: Vec<f64>,
    pub n_max: usize,
    pub residuals: Vec<f64>,
    pub method: SpectrumMethod,
}

fn energy_of_z(rp: &ReducedParams, z: f64) -> f64 {
    rp.upsilon_sq() * (2.0 * (1.0 + rp.kappa) - 4.0 * z)
}

fn require_family(rp: &ReducedParams) -> Result<()> {
    if rp.kappa >= 1.0 {
        return domain(format!("boundary angles exist only for kappa < 1 (got {})", rp.kappa));
    }
    Ok(())
}

/// θ(μ,w): tan θ = tan μ − R(α) for κ ∈ (0,1); tan θ = ψ(α) − 2ψ(1) − tan μ for κ = 0.
pub fn theta_of(mu: f64, w: f64, rp: &ReducedParams) -> Result<f64> {
    require_family(rp)?;
    if !(0.0..FRAC_PI_2).contains(&mu) {
        return domain(format!("theta requires mu in [0, pi/2), got {mu}"));
    }
    let p = RepresentationParams::new(mu, w, *rp)?;
    Ok(asymptotic_coeffs(p)?.theta)
}

/// Bisection on a sign change lo < hi with G(lo) < 0 < G(hi) known from the
/// analysis (the endpoints themselves are never evaluated). Runs until the
/// midpoint coincides with an endpoint.
fn bisect<F: Fn(f64) -> Result<f64>>(g: F, mut lo: f64, mut hi: f64) -> Result<f64> {
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let v = g(mid)?;
        if v == 0.0 {
            return Ok(mid);
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Smallest `lo + d` with d = 2^k·d0 at which `g` is positive.
fn expand_upper<F: Fn(f64) -> Result<f64>>(g: &F, lo: f64, d0: f64, what: &'static str) -> Result<f64> {
    let mut d = d0;
    while (lo + d).is_finite() && d < 1e300 {
        if g(lo + d)? > 0.0 {
            return Ok(lo + d);
        }
        d *= 2.0;
    }
    Err(Error::Bracket(what))
}

/// w(μ,ν): the unique w > w0 with θ(μ,w) = ν.
pub fn solve_w(mu: f64, nu: f64, rp: &ReducedParams) -> Result<f64> {
    require_family(rp)?;
    if !(0.0..FRAC_PI_2).contains(&mu) {
        return domain(format!("solve_w requires mu in [0, pi/2), got {mu}"));
    }
    if !(nu.abs() < FRAC_PI_2) {
        return domain(format!("solve_w requires nu in (-pi/2, pi/2), got {nu}"));
    }
    let kappa = rp.kappa;
    let (sm, cm) = mu.sin_cos();
    let (sn, cn) = nu.sin_cos();
    let w0 = rp.w0;
    let g = |w: f64| -> Result<f64> {
        let alpha = rp.alpha_of(w);
        if kappa > 0.0 {
            Ok(gamma_quotient(kappa, alpha)? * cm * cn - (mu - nu).sin())
        } else {
            Ok((digamma(alpha)? - 2.0 * digamma(1.0)?) * cm * cn - (sm * cn + sn * cm))
        }
    };
    let hi = expand_upper(&g, w0, 1.0, "theta(mu, w) = nu")?;
    bisect(g, w0, hi)
}

/// G(z) for the extension Nu(ν), ν ∈ (−π/2, π/2).
fn level_function(rp: &ReducedParams, nu: f64, z: f64) -> Result<f64> {
    let (sn, cn) = nu.sin_cos();
    if rp.kappa > 0.0 {
        Ok(gamma_quotient(rp.kappa, z)? * cn + sn)
    } else {
        Ok((digamma(z)? - 2.0 * digamma(1.0)?) * cn - sn)
    }
}

/// |G| / (|G'|·max(1,|z|)) with G' from a central difference kept inside the gap.
fn scaled_residual(rp: &ReducedParams, nu: f64, z: f64, gap_lo: f64, gap_hi: f64) -> Result<f64> {
    let gz = level_function(rp, nu, z)?;
    if gz == 0.0 {
        return Ok(0.0);
    }
    let room = (z - gap_lo).min(gap_hi - z);
    let h = (1e-6 * z.abs().max(1.0)).min(0.25 * room);
    let d = (level_function(rp, nu, z + h)? - level_function(rp, nu, z - h)?) / (2.0 * h);
    Ok(gz.abs() / (d.abs() * z.abs().max(1.0)))
}

/// Root of G in the open gap (lo, hi), after checking that G increases across
/// the gap's interior samples.
fn gap_root(rp: &ReducedParams, nu: f64, lo: f64, hi: f64) -> Result<f64> {
    let g = |z: f64| level_function(rp, nu, z);
    let mut prev = f64::NEG_INFINITY;
    for k in 1..=MONOTONE_SAMPLES {
        let z = lo + (hi - lo) * k as f64 / (MONOTONE_SAMPLES + 1) as f64;
        let v = g(z)?;
        if !(v > prev) {
            return Err(Error::NonMonotone {
                what: "spectral equation",
                lo,
                hi,
            });
        }
        prev = v;
    }
    bisect(g, lo, hi)
}

/// Ground-state energy of the extension.
pub fn ground_state_energy(rp: &ReducedParams, ext: ExtensionLabel) -> Result<f64> {
    let ext = resolve_extension(rp, ext)?;
    if ext.is_friedrichs() {
        return Ok(rp.friedrichs_ground());
    }
    let ExtensionLabel::Nu(nu) = ext else { unreachable!() };
    Ok(-rp.u_of_w(solve_w(0.0, nu, rp)?))
}

/// The first `n_max` eigenvalues of the extension, increasing.
pub fn spectrum(rp: &ReducedParams, ext: ExtensionLabel, n_max: usize) -> Result<SpectrumResult> {
    let ext = resolve_extension(rp, ext)?;
    if ext.is_friedrichs() {
        let energies = (0..n_max).map(|n| energy_of_z(rp, -(n as f64))).collect();
        return Ok(SpectrumResult {
            energies,
            n_max,
            residuals: vec![0.0; n_max],
            method: SpectrumMethod::PoleEnumeration,
        });
    }
    let ExtensionLabel::Nu(nu) = ext else { unreachable!() };
    let kappa = rp.kappa;
    let mut energies = Vec::with_capacity(n_max);
    let mut residuals = Vec::with_capacity(n_max);
    if nu == 0.0 && kappa > 0.0 {
        for n in 0..n_max {
            let nf = n as f64;
            let z = kappa - nf;
            energies.push(energy_of_z(rp, z));
            residuals.push(scaled_residual(rp, nu, z, -nf, 1.0 - nf)?);
        }
        return Ok(SpectrumResult {
            energies,
            n_max,
            residuals,
            method: SpectrumMethod::ClosedForm,
        });
    }
    for n in 0..n_max {
        let (lo, hi) = if n == 0 {
            let g = |z: f64| level_function(rp, nu, z);
            (0.0, expand_upper(&g, 0.0, 1.0, "spectral equation")?)
        } else {
            let nf = n as f64;
            (-nf, 1.0 - nf)
        };
        let z = gap_root(rp, nu, lo, hi)?;
        energies.push(energy_of_z(rp, z));
        let gap_hi = if n == 0 { f64::INFINITY } else { hi };
        residuals.push(scaled_residual(rp, nu, z, lo, gap_hi)?);
    }
    Ok(SpectrumResult {
        energies,
        n_max,
        residuals,
        method: SpectrumMethod::BracketedRoot,
    })
}

/// Lower end (in units of 1/υ) of the numerical normalization integral; the
/// piece below it is integrated from the small-x expansion.
const NORM_LEFT: f64 = 1e-4;
/// Upper end (in units of 1/υ); e^{−80} is below double precision.
const NORM_RIGHT_SQ: f64 = 80.0;

/// ∫₀^∞ φ² dx for φ(0, w) with w > w0 and κ < 1.
fn norm_squared(phi: &EvaluableSolution) -> Result<f64> {
    let p = *phi.params();
    let rp = p.rp;
    let ups = rp.upsilon;
    let kappa = rp.kappa;
    let c = asymptotic_coeffs(p)?;
    let (a, b) = (c.a_tilde, c.b_tilde);
    let s0 = NORM_LEFT;
    let s0sq = s0 * s0;
    let tail = if kappa > 0.0 {
        a * a * s0.powf(2.0 + 2.0 * kappa) / (2.0 + 2.0 * kappa)
            + a * b * s0sq
            + b * b * s0.powf(2.0 - 2.0 * kappa) / (2.0 - 2.0 * kappa)
    } else {
        let l = s0.ln();
        let i0 = s0sq / 2.0;
        let i1 = s0sq * (l / 2.0 - 0.25);
        let i2 = s0sq * (l * l / 2.0 - l / 2.0 + 0.25);
        a * a * i0 + 2.0 * a * b * i1 + b * b * i2
    } / ups;
    let scale = phi.scale();
    let lo = (s0 / ups).ln();
    let hi = (NORM_RIGHT_SQ.sqrt() / ups).ln();
    let body = quad::integrate(
        |t: f64| {
            let x = t.exp();
            match phi.value_at(x) {
                Ok(v) => v * v * x,
                Err(_) => f64::NAN,
            }
        },
        lo,
        hi,
        Tolerance::new(0.0, 1e-12),
    )?;
    Ok(body.value + tail * scale * scale)
}

/// The L²-normalized ground state. For ν ∈ (−π/2, π/2) this is the optimum
/// representation φ(0, w(0,ν)) divided by its norm.
pub fn ground_state_wavefunction(rp: &ReducedParams, ext: ExtensionLabel) -> Result<EvaluableSolution> {
    let ext = resolve_extension(rp, ext)?;
    if ext.is_friedrichs() {
        let q = (2.0 * rp.upsilon / gamma(1.0 + rp.kappa)?).sqrt();
        return Ok(make_phi(RepresentationParams::minimal(*rp))?.scaled(q));
    }
    let ExtensionLabel::Nu(nu) = ext else { unreachable!() };
    let w = solve_w(0.0, nu, rp)?;
    let phi = make_phi(RepresentationParams::new(0.0, w, *rp)?)?;
    let n2 = norm_squared(&phi)?;
    if !(n2 > 0.0) || !n2.is_finite() {
        return Err(Error::NonConvergence {
            what: "ground-state normalization",
            detail: format!("norm^2 = {n2}"),
        });
    }
    Ok(phi.scaled(1.0 / n2.sqrt()))
}
