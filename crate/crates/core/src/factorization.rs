//! Positive solutions φ(μ,w;x) of `φ'' = (g1/x² + g2·x² + u)φ`, the
//! superpotential h = φ'/φ and the ladder operations ǎ = d/dx − h,
//! b̌ = −d/dx − h, with Ȟ = b̌ǎ − u.
//!
//! In reduced variables ρ = (υx)², α = (1+κ)/2 + w, β = 1+κ,
//!
//! ```text
//! φ = e^{-ρ/2} ρ^{1/4+κ/2} [ sin μ · Φ(α,β;ρ) + cos μ · N · Ψ(α,β;ρ) ]
//! ```
//!
//! with N = Γ(α)/Γ(κ) for κ > 0 and N = Γ(α) for κ = 0. At w = w0 (α = 0)
//! the solution is unique and μ plays no role.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::params::ReducedParams;
use crate::specfun::{digamma, gamma, gamma_ratio, gamma_ratio_shift, kummer_phi, tricomi_psi, SeriesControl};

/// |μ − π/2| below this is treated as μ = π/2 exactly (cos μ = 0).
pub const MU_HALF_PI_SNAP: f64 = 1e-15;

/// Selects one member (μ, w) of the factorization family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RepresentationParams {
    pub mu: f64,
    pub w: f64,
    pub rp: ReducedParams,
}

impl RepresentationParams {
    pub fn new(mu: f64, w: f64, rp: ReducedParams) -> Result<Self> {
        if !(0.0..=FRAC_PI_2 + MU_HALF_PI_SNAP).contains(&mu) {
            return domain(format!("mu = {mu} outside [0, pi/2]"));
        }
        if !(w >= rp.w0) || !w.is_finite() {
            return domain(format!("w = {w} below the admissibility floor w0 = {}", rp.w0));
        }
        Ok(RepresentationParams { mu, w, rp })
    }

    /// The unique representation at w = w0.
    pub fn minimal(rp: ReducedParams) -> Self {
        RepresentationParams {
            mu: FRAC_PI_2,
            w: rp.w0,
            rp,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.rp.alpha_of(self.w)
    }

    /// u = 4υ²w.
    pub fn u(&self) -> f64 {
        self.rp.u_of_w(self.w)
    }

    pub fn is_minimal(&self) -> bool {
        self.alpha() <= 0.0
    }
}

/// Value and first two derivatives of a function at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

/// A function that can be evaluated together with its first two derivatives.
pub trait Differentiable {
    fn jet(&self, x: f64) -> Result<Jet>;
}

/// Smooth decaying test functions with closed-form derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFunction {
    /// x² e^{−x²}
    QuadraticGaussian,
    /// x³ e^{−x}
    CubicExponential,
    /// sin²(x) e^{−x²}
    SineSquaredGaussian,
}

impl TestFunction {
    pub const ALL: [TestFunction; 3] = [
        TestFunction::QuadraticGaussian,
        TestFunction::CubicExponential,
        TestFunction::SineSquaredGaussian,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TestFunction::QuadraticGaussian => "x^2 exp(-x^2)",
            TestFunction::CubicExponential => "x^3 exp(-x)",
            TestFunction::SineSquaredGaussian => "sin^2(x) exp(-x^2)",
        }
    }
}

impl Differentiable for TestFunction {
    fn jet(&self, x: f64) -> Result<Jet> {
        let x2 = x * x;
        Ok(match self {
            TestFunction::QuadraticGaussian => {
                let g = (-x2).exp();
                Jet {
                    value: x2 * g,
                    d1: (2.0 * x - 2.0 * x * x2) * g,
                    d2: (2.0 - 10.0 * x2 + 4.0 * x2 * x2) * g,
                }
            }
            TestFunction::CubicExponential => {
                let g = (-x).exp();
                Jet {
                    value: x * x2 * g,
                    d1: (3.0 * x2 - x * x2) * g,
                    d2: (6.0 * x - 6.0 * x2 + x * x2) * g,
                }
            }
            TestFunction::SineSquaredGaussian => {
                let g = (-x2).exp();
                let s = x.sin();
                let s2 = s * s;
                let sin2 = (2.0 * x).sin();
                Jet {
                    value: s2 * g,
                    d1: (sin2 - 2.0 * x * s2) * g,
                    d2: (2.0 * (2.0 * x).cos() - 4.0 * x * sin2 + (4.0 * x2 - 2.0) * s2) * g,
                }
            }
        })
    }
}

/// An evaluable positive solution φ(μ,w;x), optionally multiplied by a
/// constant `scale` (used for normalized wavefunctions).
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluableSolution {
    params: RepresentationParams,
    sin_mu: f64,
    cos_mu: f64,
    psi_weight: f64,
    scale: f64,
    ctrl: SeriesControl,
}

/// F(ρ) = sinμ·Φ + cosμ·N·Ψ and its first two ρ-derivatives.
#[derive(Debug, Clone, Copy)]
struct Bracket {
    f: f64,
    f1: f64,
    f2: f64,
}

impl EvaluableSolution {
    pub fn params(&self) -> &RepresentationParams {
        &self.params
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Same function multiplied by `factor`.
    pub fn scaled(mut self, factor: f64) -> Self {
        self.scale *= factor;
        self
    }

    /// Weight N multiplying cos μ · Ψ.
    pub fn psi_weight(&self) -> f64 {
        self.psi_weight
    }

    fn check_x(x: f64) -> Result<()> {
        if !(x > 0.0) || !x.is_finite() {
            return domain(format!("x = {x} must be positive and finite"));
        }
        Ok(())
    }

    fn bracket(&self, rho: f64) -> Result<Bracket> {
        let alpha = self.params.alpha();
        let beta = self.params.rp.beta;
        if alpha <= 0.0 {
            return Ok(Bracket {
                f: 1.0,
                f1: 0.0,
                f2: 0.0,
            });
        }
        let mut out = Bracket {
            f: 0.0,
            f1: 0.0,
            f2: 0.0,
        };
        if self.sin_mu != 0.0 {
            let c = &self.ctrl;
            let p0 = kummer_phi(alpha, beta, rho, c)?;
            let p1 = kummer_phi(alpha + 1.0, beta + 1.0, rho, c)?;
            let p2 = kummer_phi(alpha + 2.0, beta + 2.0, rho, c)?;
            out.f += self.sin_mu * p0;
            out.f1 += self.sin_mu * alpha / beta * p1;
            out.f2 += self.sin_mu * alpha * (alpha + 1.0) / (beta * (beta + 1.0)) * p2;
        }
        if self.cos_mu != 0.0 {
            let k = self.cos_mu * self.psi_weight;
            let q0 = tricomi_psi(alpha, beta, rho)?;
            let q1 = tricomi_psi(alpha + 1.0, beta + 1.0, rho)?;
            let q2 = tricomi_psi(alpha + 2.0, beta + 2.0, rho)?;
            out.f += k * q0;
            out.f1 -= k * alpha * q1;
            out.f2 += k * alpha * (alpha + 1.0) * q2;
        }
        Ok(out)
    }

    fn exponent(&self) -> f64 {
        0.25 + 0.5 * self.params.rp.kappa
    }

    /// φ(x) together with φ'(x) and φ''(x); every derivative is analytic.
    pub fn eval(&self, x: f64) -> Result<Jet> {
        Self::check_x(x)?;
        let rp = &self.params.rp;
        let rho = rp.rho(x);
        let b = self.bracket(rho)?;
        let p = self.exponent();
        let base = self.scale * (-0.5 * rho).exp() * rho.powf(p);
        let l = -0.5 + p / rho;
        let f_rho = b.f1 + l * b.f;
        let f_rhorho = b.f2 + 2.0 * l * b.f1 + (l * l - p / (rho * rho)) * b.f;
        let drho = 2.0 * rp.upsilon_sq() * x;
        Ok(Jet {
            value: base * b.f,
            d1: base * f_rho * drho,
            d2: base * (f_rhorho * drho * drho + 2.0 * rp.upsilon_sq() * f_rho),
        })
    }

    fn bracket_value(&self, rho: f64) -> Result<f64> {
        let alpha = self.params.alpha();
        if alpha <= 0.0 {
            return Ok(1.0);
        }
        let mut f = 0.0;
        if self.sin_mu != 0.0 {
            f += self.sin_mu * kummer_phi(alpha, self.params.rp.beta, rho, &self.ctrl)?;
        }
        if self.cos_mu != 0.0 {
            f += self.cos_mu * self.psi_weight * tricomi_psi(alpha, self.params.rp.beta, rho)?;
        }
        Ok(f)
    }

    pub fn value_at(&self, x: f64) -> Result<f64> {
        Self::check_x(x)?;
        let rho = self.params.rp.rho(x);
        let f = self.bracket_value(rho)?;
        Ok(self.scale * (-0.5 * rho).exp() * rho.powf(self.exponent()) * f)
    }

    pub fn derivative_at(&self, x: f64) -> Result<f64> {
        Ok(self.eval(x)?.d1)
    }

    /// (h, φ''/φ) computed from ratios, free of overflow in φ itself.
    pub fn log_derivatives(&self, x: f64) -> Result<(f64, f64)> {
        Self::check_x(x)?;
        let rp = &self.params.rp;
        let rho = rp.rho(x);
        let b = self.bracket(rho)?;
        let p = self.exponent();
        let l = -0.5 + p / rho;
        let r1 = b.f1 / b.f;
        let r2 = b.f2 / b.f;
        let drho = 2.0 * rp.upsilon_sq() * x;
        let g1 = r1 + l;
        let g2 = r2 + 2.0 * l * r1 + l * l - p / (rho * rho);
        Ok((g1 * drho, g2 * drho * drho + 2.0 * rp.upsilon_sq() * g1))
    }

    /// h(x) = φ'(x)/φ(x).
    pub fn superpotential_at(&self, x: f64) -> Result<f64> {
        Ok(self.log_derivatives(x)?.0)
    }

    /// 1/φ as a differentiable function.
    pub fn reciprocal(&self) -> Reciprocal<'_> {
        Reciprocal(self)
    }
}

impl Differentiable for EvaluableSolution {
    fn jet(&self, x: f64) -> Result<Jet> {
        self.eval(x)
    }
}

/// 1/φ, which spans the kernel of b̌.
#[derive(Debug, Clone, Copy)]
pub struct Reciprocal<'a>(&'a EvaluableSolution);

impl Differentiable for Reciprocal<'_> {
    fn jet(&self, x: f64) -> Result<Jet> {
        let j = self.0.eval(x)?;
        let v = 1.0 / j.value;
        Ok(Jet {
            value: v,
            d1: -j.d1 * v * v,
            d2: (2.0 * j.d1 * j.d1 - j.value * j.d2) * v * v * v,
        })
    }
}

/// Builds φ(μ,w;x). Any κ ≥ 0 is accepted.
pub fn make_phi(p: RepresentationParams) -> Result<EvaluableSolution> {
    make_phi_with(p, SeriesControl::default())
}

pub fn make_phi_with(p: RepresentationParams, ctrl: SeriesControl) -> Result<EvaluableSolution> {
    let alpha = p.alpha();
    let (sin_mu, cos_mu) = if alpha <= 0.0 || (p.mu - FRAC_PI_2).abs() < MU_HALF_PI_SNAP {
        (1.0, 0.0)
    } else {
        p.mu.sin_cos()
    };
    let psi_weight = if cos_mu == 0.0 {
        0.0
    } else if p.rp.kappa > 0.0 {
        gamma_ratio(alpha, p.rp.kappa)?
    } else {
        gamma(alpha)?
    };
    Ok(EvaluableSolution {
        params: p,
        sin_mu,
        cos_mu,
        psi_weight,
        scale: 1.0,
        ctrl,
    })
}

/// h(x) = φ'/φ for the representation `p`.
pub fn superpotential(p: RepresentationParams, x: f64) -> Result<f64> {
    make_phi(p)?.superpotential_at(x)
}

/// ǎf = f' − h f.
pub fn apply_a(phi: &EvaluableSolution, f: &impl Differentiable, x: f64) -> Result<f64> {
    let j = f.jet(x)?;
    Ok(j.d1 - phi.superpotential_at(x)? * j.value)
}

/// b̌f = −f' − h f.
pub fn apply_b(phi: &EvaluableSolution, f: &impl Differentiable, x: f64) -> Result<f64> {
    let j = f.jet(x)?;
    Ok(-j.d1 - phi.superpotential_at(x)? * j.value)
}

/// Uniform grid of `n` points on [lo, hi].
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// The default residual grid: 200 points on [0.1, 5].
pub fn default_grid() -> Vec<f64> {
    uniform_grid(0.1, 5.0, 200)
}

/// Location and size of the worst residual.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    pub max_residual: f64,
    pub at_x: f64,
}

/// Compares the composition b̌(ǎf), built step by step from h, h' and the
/// derivatives of f, with (Ȟ + u)f = −f'' + (g1/x² + g2x² + 4υ²w) f.
/// `h_shift` replaces h by h + ε (a sensitivity probe; 0 for the identity).
///
/// Each point's residual is scaled by |f''| + |(g1/x² + g2x²)f| + |uf|.
pub fn factorization_residual_shifted(
    phi: &EvaluableSolution,
    f: &impl Differentiable,
    grid: &[f64],
    h_shift: f64,
) -> Result<ResidualReport> {
    let p = phi.params();
    let g1 = p.rp.g1();
    let g2 = p.rp.g2();
    let u = p.u();
    let mut worst = ResidualReport {
        max_residual: 0.0,
        at_x: f64::NAN,
    };
    for &x in grid {
        let j = f.jet(x)?;
        let (h0, phi2) = phi.log_derivatives(x)?;
        let dh = phi2 - h0 * h0;
        let h = h0 + h_shift;
        // g = ǎf, g' = f'' − h'f − hf'
        let g = j.d1 - h * j.value;
        let dg = j.d2 - dh * j.value - h * j.d1;
        let ba = -dg - h * g;
        let pot = (g1 / (x * x) + g2 * x * x) * j.value;
        let target = -j.d2 + pot + u * j.value;
        let scale = j.d2.abs() + pot.abs() + (u * j.value).abs();
        let r = if scale > 0.0 {
            (ba - target).abs() / scale
        } else {
            (ba - target).abs()
        };
        if r > worst.max_residual || worst.at_x.is_nan() {
            worst = ResidualReport {
                max_residual: r,
                at_x: x,
            };
        }
    }
    Ok(worst)
}

pub fn factorization_residual(
    phi: &EvaluableSolution,
    f: &impl Differentiable,
    grid: &[f64],
) -> Result<ResidualReport> {
    factorization_residual_shifted(phi, f, grid, 0.0)
}

/// Small-x coefficients and the boundary angle θ of a representation.
///
/// For κ ∈ (0,1): φ ≈ Ã(υx)^{1/2+κ} + B̃(υx)^{1/2−κ} = c[(υx)^{1/2+κ} sin θ + (υx)^{1/2−κ} cos θ].
/// For κ = 0: φ ≈ Ã(υx)^{1/2} + B̃(υx)^{1/2} ln(υx) = c[(υx)^{1/2} sin θ + 2(υx)^{1/2} ln(υx) cos θ].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticCoefficients {
    pub a_tilde: f64,
    pub b_tilde: f64,
    pub theta: f64,
    pub c_norm: f64,
}

/// Γ(1−κ)Γ(α)/(Γ(1+κ)Γ(α−κ)); zero when α − κ is a pole of Γ.
pub(crate) fn gamma_quotient(kappa: f64, alpha: f64) -> Result<f64> {
    Ok(gamma_ratio(1.0 - kappa, 1.0 + kappa)? * gamma_ratio_shift(alpha, kappa)?)
}

pub fn asymptotic_coeffs(p: RepresentationParams) -> Result<AsymptoticCoefficients> {
    let kappa = p.rp.kappa;
    if kappa >= 1.0 {
        return domain(format!(
            "asymptotic coefficients are defined only for kappa < 1 (got {kappa})"
        ));
    }
    if (p.mu - FRAC_PI_2).abs() < MU_HALF_PI_SNAP {
        return domain("asymptotic coefficients undefined at mu = pi/2 (pure regular solution)");
    }
    let alpha = p.alpha();
    if !(alpha > 0.0) {
        return domain(format!("asymptotic coefficients require w > w0 (alpha = {alpha})"));
    }
    let (s, c) = p.mu.sin_cos();
    if kappa > 0.0 {
        let a_tilde = s - c * gamma_quotient(kappa, alpha)?;
        let b_tilde = c;
        let theta = (a_tilde / b_tilde).atan();
        Ok(AsymptoticCoefficients {
            a_tilde,
            b_tilde,
            theta,
            c_norm: b_tilde / theta.cos(),
        })
    } else {
        let psi1 = digamma(1.0)?;
        let a_tilde = s + c * (2.0 * psi1 - digamma(alpha)?);
        let b_tilde = -2.0 * c;
        let theta = (-a_tilde).atan2(c);
        Ok(AsymptoticCoefficients {
            a_tilde,
            b_tilde,
            theta,
            c_norm: -c / theta.cos(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{reduce, Couplings};

    fn rp(kappa: f64, upsilon: f64) -> ReducedParams {
        ReducedParams::from_kappa_upsilon(kappa, upsilon).unwrap()
    }

    #[test]
    fn minimal_solution_closed_form() {
        let r = rp(1.0, 1.0);
        let phi = make_phi(RepresentationParams::minimal(r)).unwrap();
        assert!((phi.value_at(1.0).unwrap() - (-0.5f64).exp()).abs() < 1e-15);
        assert!((phi.superpotential_at(1.0).unwrap() - 0.5).abs() < 1e-14);
        let r0 = rp(0.0, 1.0);
        let phi0 = make_phi(RepresentationParams::new(0.3, r0.w0, r0).unwrap()).unwrap();
        assert!((phi0.superpotential_at(1.0).unwrap() + 0.5).abs() < 1e-14);
    }

    #[test]
    fn regular_branch_is_pure_phi() {
        let r = reduce(Couplings::new(0.0, 1.0)).unwrap();
        let p = RepresentationParams::new(FRAC_PI_2, 0.4, r).unwrap();
        let phi = make_phi(p).unwrap();
        let x = 1.3f64;
        let rho = x * x;
        let want =
            (-rho / 2.0).exp() * rho.powf(0.5) * kummer_phi(p.alpha(), 1.5, rho, &SeriesControl::default()).unwrap();
        assert!(((phi.value_at(x).unwrap() - want) / want).abs() < 1e-14);
    }

    #[test]
    fn kernel_of_a_and_b() {
        let r = rp(0.5, 1.2);
        let phi = make_phi(RepresentationParams::new(0.4, 0.3, r).unwrap()).unwrap();
        for x in [0.05, 0.5, 1.0, 3.0] {
            let a_phi = apply_a(&phi, &phi, x).unwrap();
            assert!(a_phi.abs() <= 1e-12 * phi.derivative_at(x).unwrap().abs().max(phi.value_at(x).unwrap()));
            let rec = phi.reciprocal();
            let b_rec = apply_b(&phi, &rec, x).unwrap();
            assert!(b_rec.abs() <= 1e-12 / phi.value_at(x).unwrap());
            let a_rec = apply_a(&phi, &rec, x).unwrap();
            let h = phi.superpotential_at(x).unwrap();
            let want = -2.0 * h / phi.value_at(x).unwrap();
            assert!((a_rec - want).abs() <= 1e-12 * want.abs().max(1.0));
        }
    }

    #[test]
    fn asymptotic_coefficient_examples() {
        let r = rp(0.5, 1.0);
        let p = RepresentationParams::new(0.0, -0.25 + 1e-10, r).unwrap();
        let c = asymptotic_coeffs(p).unwrap();
        assert!(c.a_tilde.abs() < 1e-8 && c.theta.abs() < 1e-8);
        let r0 = rp(0.0, 1.0);
        let c0 = asymptotic_coeffs(RepresentationParams::new(std::f64::consts::FRAC_PI_4, 0.1, r0).unwrap()).unwrap();
        assert!((c0.b_tilde + 2f64.sqrt()).abs() < 1e-15);
        assert!(asymptotic_coeffs(RepresentationParams::new(0.2, 0.1, rp(1.0, 1.0)).unwrap()).is_err());
        assert!(asymptotic_coeffs(RepresentationParams::new(FRAC_PI_2, 0.1, r).unwrap()).is_err());
    }

    #[test]
    fn invalid_params_rejected() {
        let r = rp(0.5, 1.0);
        assert!(RepresentationParams::new(-0.1, 0.0, r).is_err());
        assert!(RepresentationParams::new(2.0, 0.0, r).is_err());
        assert!(RepresentationParams::new(0.0, r.w0 - 0.01, r).is_err());
        let phi = make_phi(RepresentationParams::minimal(r)).unwrap();
        assert!(phi.value_at(0.0).is_err());
        assert!(phi.value_at(-1.0).is_err());
    }

    #[test]
    fn shifted_superpotential_breaks_identity() {
        let r = rp(0.5, 1.0);
        let phi = make_phi(RepresentationParams::new(0.7, 0.2, r).unwrap()).unwrap();
        let grid = default_grid();
        let f = TestFunction::QuadraticGaussian;
        let base = factorization_residual(&phi, &f, &grid).unwrap();
        let bad = factorization_residual_shifted(&phi, &f, &grid, 1e-3).unwrap();
        assert!(base.max_residual < 1e-9, "{base:?}");
        assert!(bad.max_residual > 10.0 * base.max_residual.max(1e-12));
    }
}
