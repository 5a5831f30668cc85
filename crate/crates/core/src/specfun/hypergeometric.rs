//! Confluent hypergeometric functions Φ(α,β;ρ) (Kummer) and Ψ(α,β;ρ) (Tricomi).
//!
//! Ψ has two evaluation routes. Away from integer β and for moderate ρ it is
//! the two-Φ combination
//!
//! ```text
//! Ψ = Γ(1-β)/Γ(α-β+1) Φ(α,β;ρ) + Γ(β-1)/Γ(α) ρ^{1-β} Φ(α-β+1,2-β;ρ)
//! ```
//!
//! Near integer β (where that combination is 0/0) and at large ρ (where it
//! cancels catastrophically) the Laplace integral
//! `Ψ = Γ(α)^{-1} ∫₀^∞ t^{α-1}(1+t)^{β-α-1} e^{-ρt} dt` is used instead.

use super::dd::{kummer_series_dd, rgamma_dd, Dd, DD_GAMMA_MAX_ARG};
use super::gamma::{digamma, gamma, rgamma};
use crate::error::{domain, Error, Result};
use crate::quad::{self, Tolerance};

/// Truncation control for the Kummer series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            rel_tol: 1e-15,
            max_terms: 10_000,
        }
    }
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return domain(format!("series rel_tol must lie in (0, 1), got {rel_tol}"));
        }
        if max_terms < 100 {
            return domain(format!("series max_terms must be at least 100, got {max_terms}"));
        }
        Ok(SeriesControl { rel_tol, max_terms })
    }
}

/// β is routed to the integral representation when it lies this close to an integer.
pub const INTEGER_BETA_WINDOW: f64 = 1e-3;
/// Above this ρ the two-Φ combination loses too many digits to cancellation.
pub const FORMULA_RHO_MAX: f64 = 12.0;
/// The formula result is rejected when its two terms exceed the sum by more than this factor.
const FORMULA_CANCELLATION_MAX: f64 = 1e3;
const FORMULA_CANCELLATION_MAX_DD: f64 = 1e12;

const PSI_QUAD_TOL: f64 = 1e-13;

/// Σ (a)_k/(b)_k z^k/k! for arbitrary real a and b (b not a nonpositive
/// integer). Stops once three consecutive terms fall below `rel_tol` of the
/// partial sum while the terms are shrinking.
pub(crate) fn kummer_series(a: f64, b: f64, z: f64, ctrl: &SeriesControl) -> Result<f64> {
    if b <= 0.0 && b == b.floor() {
        return domain(format!("Kummer series undefined for b = {b}"));
    }
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut small = 0;
    for k in 0..ctrl.max_terms {
        let kf = k as f64;
        let ratio = (a + kf) / (b + kf) * z / (kf + 1.0);
        term *= ratio;
        if term == 0.0 {
            return Ok(sum);
        }
        sum += term;
        if !sum.is_finite() {
            return Err(Error::NonConvergence {
                what: "kummer series",
                detail: format!("overflow at a={a}, b={b}, z={z}"),
            });
        }
        if term.abs() <= ctrl.rel_tol * sum.abs() && ratio.abs() < 1.0 {
            small += 1;
            if small >= 3 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergence {
        what: "kummer series",
        detail: format!("{} terms insufficient at a={a}, b={b}, z={z}", ctrl.max_terms),
    })
}

/// Kummer's function Φ(α, β; ρ) for α ≥ 0, β ≥ 1, ρ ≥ 0.
pub fn kummer_phi(alpha: f64, beta: f64, rho: f64, ctrl: &SeriesControl) -> Result<f64> {
    if !(alpha >= 0.0) || !(beta >= 1.0) || !(rho >= 0.0) {
        return domain(format!(
            "kummer_phi requires alpha >= 0, beta >= 1, rho >= 0 (got {alpha}, {beta}, {rho})"
        ));
    }
    if alpha == 0.0 {
        return Ok(1.0);
    }
    kummer_series(alpha, beta, rho, ctrl)
}

fn near_integer(x: f64, window: f64) -> bool {
    (x - x.round()).abs() < window
}

/// Tricomi's function Ψ(α, β; ρ) for α > 0, β ≥ 1, ρ > 0.
pub fn tricomi_psi(alpha: f64, beta: f64, rho: f64) -> Result<f64> {
    check_psi_domain(alpha, beta, rho)?;
    if near_integer(beta, INTEGER_BETA_WINDOW) || rho > FORMULA_RHO_MAX {
        return tricomi_psi_integral(alpha, beta, rho);
    }
    let (value, cancellation, extended) = formula_eval(alpha, beta, rho, &SeriesControl::default())?;
    let limit = if extended {
        FORMULA_CANCELLATION_MAX_DD
    } else {
        FORMULA_CANCELLATION_MAX
    };
    if !(cancellation <= limit) {
        return tricomi_psi_integral(alpha, beta, rho);
    }
    Ok(value)
}

fn check_psi_domain(alpha: f64, beta: f64, rho: f64) -> Result<()> {
    if !(alpha > 0.0) {
        return domain(format!(
            "tricomi_psi requires alpha > 0 (got {alpha}); use psi_exceptional for alpha = 0"
        ));
    }
    if !(beta >= 1.0) {
        return domain(format!("tricomi_psi requires beta >= 1 (got {beta})"));
    }
    if !(rho > 0.0) {
        return domain(format!("tricomi_psi requires rho > 0 (got {rho})"));
    }
    Ok(())
}

/// The two-Φ combination for Ψ. Undefined at integer β.
pub fn tricomi_psi_formula(alpha: f64, beta: f64, rho: f64, ctrl: &SeriesControl) -> Result<f64> {
    check_psi_domain(alpha, beta, rho)?;
    if beta == beta.floor() {
        return domain(format!("two-Phi formula is singular at integer beta = {beta}"));
    }
    Ok(formula_eval(alpha, beta, rho, ctrl)?.0)
}

/// The two-Φ combination as (value, cancellation factor), where the factor is
/// the larger term magnitude over |value|. Evaluated in double-double when the
/// arguments allow it, since the terms can exceed Ψ by eight orders of
/// magnitude at moderate ρ.
fn formula_eval(alpha: f64, beta: f64, rho: f64, ctrl: &SeriesControl) -> Result<(f64, f64, bool)> {
    if alpha.abs().max(beta.abs()) + 1.0 < DD_GAMMA_MAX_ARG {
        let (a, b, r) = (Dd::new(alpha), Dd::new(beta), Dd::new(rho));
        let one = Dd::ONE;
        let a1 = a - b + one;
        let b1 = Dd::new(2.0) - b;
        let c1 = rgamma_dd(a1)? / rgamma_dd(one - b)?;
        let c2 = rgamma_dd(a)? / rgamma_dd(b - one)?;
        let tol = ctrl.rel_tol.min(1e-31);
        let first = if c1.hi == 0.0 {
            Dd::ZERO
        } else {
            c1 * kummer_series_dd(a, b, r, tol, ctrl.max_terms)?
        };
        let second = c2 * r.powd(one - b) * kummer_series_dd(a1, b1, r, tol, ctrl.max_terms)?;
        let sum = (first + second).to_f64();
        return Ok((sum, first.hi.abs().max(second.hi.abs()) / sum.abs(), true));
    }
    let c1 = gamma(1.0 - beta)? * rgamma(alpha - beta + 1.0);
    let c2 = gamma(beta - 1.0)? * rgamma(alpha);
    let first = if c1 == 0.0 {
        0.0
    } else {
        c1 * kummer_series(alpha, beta, rho, ctrl)?
    };
    let second = c2 * rho.powf(1.0 - beta) * kummer_series(alpha - beta + 1.0, 2.0 - beta, rho, ctrl)?;
    let sum = first + second;
    Ok((sum, first.abs().max(second.abs()) / sum.abs(), false))
}

/// Coefficients of the Taylor series of (1+t)^c e^{-ρt} around t = 0.
fn taylor_binomial_exp(c: f64, rho: f64, n: usize) -> Vec<f64> {
    let mut binom = vec![0.0; n];
    let mut expo = vec![0.0; n];
    binom[0] = 1.0;
    expo[0] = 1.0;
    for k in 1..n {
        let kf = k as f64;
        binom[k] = binom[k - 1] * (c - kf + 1.0) / kf;
        expo[k] = expo[k - 1] * (-rho) / kf;
    }
    (0..n).map(|k| (0..=k).map(|j| binom[j] * expo[k - j]).sum()).collect()
}

/// ∫₀^∞ t^{α-1}(1+t)^{β-α-1} e^{-ρt} dt, i.e. Γ(α)·Ψ(α,β;ρ).
///
/// The piece `[0, τ]` is integrated term by term from the Taylor expansion of
/// the smooth factor; the rest is integrated in `s = ln t`.
fn laplace_integral(alpha: f64, beta: f64, rho: f64) -> Result<f64> {
    let c = beta - alpha - 1.0;
    let tau = 0.05 / (1.0 + rho + c.abs());
    let coeffs = taylor_binomial_exp(c, rho, 24);
    let ln_tau = tau.ln();
    let head: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let p = alpha + k as f64;
            a * (p * ln_tau).exp() / p
        })
        .sum();

    // Upper cut: ρt ≥ 60 + 2(|α|+|β|) ln(2+t) makes the integrand negligible.
    let spread = 2.0 * (alpha.abs() + beta.abs());
    let mut t_hi = 60.0 / rho;
    for _ in 0..8 {
        t_hi = (60.0 + spread * (2.0 + t_hi).ln()) / rho;
    }
    let t_hi = t_hi.max(10.0 * tau);

    let integrand = |s: f64| {
        let t = s.exp();
        (alpha * s + c * t.ln_1p() - rho * t).exp()
    };
    let tail = quad::integrate(integrand, ln_tau, t_hi.ln(), Tolerance::new(0.0, PSI_QUAD_TOL))?;
    Ok(head + tail.value)
}

/// Ψ from its Laplace-integral representation (valid for every β ≥ 1).
pub fn tricomi_psi_integral(alpha: f64, beta: f64, rho: f64) -> Result<f64> {
    check_psi_domain(alpha, beta, rho)?;
    Ok(laplace_integral(alpha, beta, rho)? * rgamma(alpha))
}

/// Ψ(α, 1; ρ) from the logarithmic series at β = 1:
/// `Γ(α)⁻¹ { Φ(α,1;ρ) ln(1/ρ) + Σ_r (α)_r/(r!)² [2ψ(1+r) - ψ(α+r)] ρ^r }`.
///
/// The two pieces grow like e^ρ while Ψ decays, so this is only accurate for
/// ρ of order one or less.
pub fn tricomi_psi_log_series(alpha: f64, rho: f64, ctrl: &SeriesControl) -> Result<f64> {
    check_psi_domain(alpha, 1.0, rho)?;
    let phi = kummer_series(alpha, 1.0, rho, ctrl)?;
    let mut coeff = 1.0; // (α)_r / (r!)² ρ^r
    let mut psi_one = digamma(1.0)?;
    let mut psi_a = digamma(alpha)?;
    let mut sum = coeff * (2.0 * psi_one - psi_a);
    let mut small = 0;
    for r in 0..ctrl.max_terms {
        let rf = r as f64;
        coeff *= (alpha + rf) * rho / ((rf + 1.0) * (rf + 1.0));
        psi_one += 1.0 / (rf + 1.0);
        psi_a += 1.0 / (alpha + rf);
        let term = coeff * (2.0 * psi_one - psi_a);
        sum += term;
        if term.abs() <= ctrl.rel_tol * sum.abs().max(phi.abs()) && rf > rho {
            small += 1;
            if small >= 3 {
                return Ok((phi * (-rho.ln()) + sum) * rgamma(alpha));
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergence {
        what: "tricomi log series",
        detail: format!("alpha={alpha}, rho={rho}"),
    })
}

/// Default lower limit parameter `a` of the exceptional solution.
pub const PSI_EXCEPTIONAL_DEFAULT_A: f64 = 1.0;

/// The second solution at α = 0: ∫_{a²}^{ρ} τ^{-β} e^{τ} dτ.
pub fn psi_exceptional(beta: f64, rho: f64, a: f64) -> Result<f64> {
    if !(rho > 0.0) || !(a > 0.0) {
        return domain(format!("psi_exceptional requires rho > 0 and a > 0 (got {rho}, {a})"));
    }
    if !(beta >= 1.0) {
        return domain(format!("psi_exceptional requires beta >= 1 (got {beta})"));
    }
    let lo = a * a;
    if rho == lo {
        return Ok(0.0);
    }
    // τ = e^s: integrand e^{(1-β)s + e^s}.
    let est = quad::integrate(
        |s: f64| ((1.0 - beta) * s + s.exp()).exp(),
        lo.ln(),
        rho.ln(),
        Tolerance::new(0.0, 1e-12),
    )?;
    Ok(est.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn phi_trivial_values() {
        let c = SeriesControl::default();
        assert_eq!(kummer_phi(0.7, 1.3, 0.0, &c).unwrap(), 1.0);
        assert_eq!(kummer_phi(0.0, 1.3, 5.0, &c).unwrap(), 1.0);
        for rho in [0.1, 1.0, 7.5, 30.0] {
            assert!(rel(kummer_phi(1.0, 1.0, rho, &c).unwrap(), f64::exp(rho)) < 1e-14);
        }
    }

    #[test]
    fn phi_one_two() {
        // Σ ρ^k/(k+1)! = (e^ρ - 1)/ρ, by direct summation of the closed form's series.
        let direct: f64 = (0..60)
            .map(|k| 2f64.powi(k) / (1..=k + 1).map(|j| j as f64).product::<f64>())
            .sum();
        let v = kummer_phi(1.0, 2.0, 2.0, &SeriesControl::default()).unwrap();
        assert!(rel(v, direct) < 1e-14);
        assert!((v - 3.194_528_049_465_325).abs() < 1e-12);
    }

    #[test]
    fn phi_domain_and_convergence_errors() {
        let c = SeriesControl::default();
        assert!(kummer_phi(-0.1, 1.0, 1.0, &c).is_err());
        assert!(kummer_phi(1.0, 0.5, 1.0, &c).is_err());
        let tiny = SeriesControl::new(1e-15, 100).unwrap();
        assert!(matches!(
            kummer_phi(1.0, 1.0, 500.0, &tiny),
            Err(Error::NonConvergence { .. })
        ));
        assert!(SeriesControl::new(1e-3, 50).is_err());
    }

    #[test]
    fn psi_one_two_is_reciprocal() {
        for rho in [0.01, 0.5, 1.0, 3.0, 40.0] {
            let v = tricomi_psi(1.0, 2.0, rho).unwrap();
            assert!(rel(v, 1.0 / rho) < 1e-11, "rho={rho}: {v}");
        }
    }

    #[test]
    fn psi_branches_agree() {
        let ctrl = SeriesControl::default();
        for alpha in [0.3, 1.0, 2.5] {
            for beta in [1.25, 1.5, 1.75] {
                for rho in [0.1, 1.0, 10.0] {
                    let v1 = tricomi_psi_formula(alpha, beta, rho, &ctrl).unwrap();
                    let v2 = tricomi_psi_integral(alpha, beta, rho).unwrap();
                    assert!(rel(v1, v2) < 1e-10, "({alpha},{beta},{rho}): {v1} vs {v2}");
                }
            }
        }
    }

    #[test]
    fn psi_log_series_matches_integral() {
        for alpha in [0.2, 0.72, 1.0, 3.5] {
            for rho in [1e-6, 0.3, 2.0] {
                let a = tricomi_psi_log_series(alpha, rho, &SeriesControl::default()).unwrap();
                let b = tricomi_psi_integral(alpha, 1.0, rho).unwrap();
                assert!(rel(a, b) < 1e-10, "alpha={alpha} rho={rho}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn psi_reference_values() {
        // (α, β, ρ, Ψ) to 30 digits from an arbitrary-precision evaluation.
        let cases = [
            (0.75, 1.5, 1.0, 0.893_277_955_139_367_3),
            (0.3, 1.25, 0.1, 1.912_007_783_579_403_6),
            (2.5, 1.75, 10.0, 0.002_213_200_540_673_915_7),
            (1.0, 1.5, 12.5, 0.077_123_241_886_126_3),
            (0.5, 1.0, 0.01, 3.069_997_114_428_207_8),
            (0.5, 1.0, 50.0, 0.140_729_534_057_072_26),
            (0.25, 2.0, 100.0, 0.316_819_775_160_490_7),
            (0.72, 1.0, 1e-6, 10.908_070_904_670_272),
            (1.7, 2.0, 3.0, 0.117_175_184_254_524),
            (3.5, 1.0, 9.0, 1.680_924_976_317_059_3e-4),
        ];
        for (a, b, r, want) in cases {
            let got = tricomi_psi(a, b, r).unwrap();
            assert!(rel(got, want) < 1e-10, "Psi({a},{b},{r}) = {got}, want {want}");
        }
    }

    #[test]
    fn phi_reference_values() {
        let c = SeriesControl::default();
        assert!(rel(kummer_phi(0.75, 1.5, 100.0, &c).unwrap(), 6.159_308_457_647_976e41) < 1e-12);
        assert!(rel(kummer_phi(0.3, 1.25, 10.0, &c).unwrap(), 811.025_508_816_983_1) < 1e-13);
    }

    #[test]
    fn psi_domain_errors() {
        assert!(tricomi_psi(0.0, 1.5, 1.0).is_err());
        assert!(tricomi_psi(1.0, 1.5, 0.0).is_err());
        assert!(tricomi_psi_formula(1.0, 2.0, 1.0, &SeriesControl::default()).is_err());
    }

    #[test]
    fn exceptional_solution_signs() {
        assert_eq!(psi_exceptional(1.7, 1.0, 1.0).unwrap(), 0.0);
        assert!(psi_exceptional(2.0, 4.0, 1.0).unwrap() > 0.0);
        assert!(psi_exceptional(2.0, 0.5, 1.0).unwrap() < 0.0);
        assert!(psi_exceptional(1.0, 1e-6, 1.0).unwrap() < -10.0);
    }
}
