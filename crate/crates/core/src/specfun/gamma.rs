//! Γ, 1/Γ, ln|Γ|, ψ and the Pochhammer symbol for real arguments.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicBool, Ordering};

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_P: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

static GAMMA_FAULT: AtomicBool = AtomicBool::new(false);

/// Test hook: when enabled, Γ returns a deliberately wrong value
/// (multiplied by `1 + z/100`) so that verification runs can prove they
/// detect a broken special-function layer.
#[doc(hidden)]
pub fn set_gamma_fault(enabled: bool) {
    GAMMA_FAULT.store(enabled, Ordering::SeqCst);
}

#[inline]
fn fault_factor(z: f64) -> f64 {
    if GAMMA_FAULT.load(Ordering::Relaxed) {
        1.0 + z / 100.0
    } else {
        1.0
    }
}

pub(crate) fn is_nonpositive_integer(z: f64) -> bool {
    z <= 0.0 && z == z.floor()
}

/// sin(πx) with exact zeros at the integers.
pub(crate) fn sin_pi(x: f64) -> f64 {
    if x == x.floor() {
        return 0.0;
    }
    let r = x - 2.0 * (x / 2.0).floor(); // r ∈ [0, 2)
    let (r, sign) = if r > 1.0 { (r - 1.0, -1.0) } else { (r, 1.0) };
    let r = if r > 0.5 { 1.0 - r } else { r };
    sign * (PI * r).sin()
}

/// cos(πx) with exact zeros at the half-integers.
pub(crate) fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

fn lanczos_sum(x: f64) -> f64 {
    // x is the shifted argument (z - 1).
    let mut a = LANCZOS_P[0];
    for (i, p) in LANCZOS_P.iter().enumerate().skip(1) {
        a += p / (x + i as f64);
    }
    a
}

fn gamma_positive(z: f64) -> f64 {
    debug_assert!(z >= 0.5);
    let x = z - 1.0;
    let t = x + LANCZOS_G + 0.5;
    let half = t.powf(0.5 * (x + 0.5));
    (2.0 * PI).sqrt() * half * (half * (-t).exp()) * lanczos_sum(x)
}

fn ln_gamma_positive(z: f64) -> f64 {
    debug_assert!(z >= 0.5);
    let x = z - 1.0;
    let t = x + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (x + 0.5) * t.ln() - t + lanczos_sum(x).ln()
}

/// Γ(z) for real z. Nonpositive integers are poles.
pub fn gamma(z: f64) -> Result<f64> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole { function: "gamma", z });
    }
    let g = if z < 0.5 {
        PI / (sin_pi(z) * gamma_positive(1.0 - z))
    } else {
        gamma_positive(z)
    };
    Ok(g * fault_factor(z))
}

/// 1/Γ(z): entire, exactly zero at the nonpositive integers.
pub fn rgamma(z: f64) -> f64 {
    if is_nonpositive_integer(z) {
        return 0.0;
    }
    let r = if z < 0.5 {
        sin_pi(z) * gamma_positive(1.0 - z) / PI
    } else if z > 171.0 {
        (-ln_gamma_positive(z)).exp()
    } else {
        1.0 / gamma_positive(z)
    };
    r / fault_factor(z)
}

/// (ln|Γ(z)|, sign Γ(z)).
pub fn ln_gamma_abs(z: f64) -> Result<(f64, f64)> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole {
            function: "ln_gamma",
            z,
        });
    }
    let f = fault_factor(z);
    if z >= 0.5 {
        return Ok((ln_gamma_positive(z) + f.abs().ln(), f.signum()));
    }
    let s = sin_pi(z);
    let lg = PI.ln() - s.abs().ln() - ln_gamma_positive(1.0 - z) + f.abs().ln();
    Ok((lg, s.signum() * f.signum()))
}

/// Γ(a)/Γ(b). Zero when b is a pole and a is not; a pole of the numerator
/// is an error.
pub fn gamma_ratio(a: f64, b: f64) -> Result<f64> {
    if is_nonpositive_integer(a) {
        return Err(Error::Pole {
            function: "gamma_ratio",
            z: a,
        });
    }
    if is_nonpositive_integer(b) {
        return Ok(0.0);
    }
    if a.abs() < 140.0 && b.abs() < 140.0 {
        return Ok(gamma(a)? * rgamma(b));
    }
    if a.min(b) >= STIRLING_RATIO_MIN {
        return Ok(ln_gamma_difference(a, a - b).exp() * fault_factor(a) / fault_factor(b));
    }
    let (la, sa) = ln_gamma_abs(a)?;
    let (lb, sb) = ln_gamma_abs(b)?;
    Ok(sa * sb * (la - lb).exp())
}

/// Γ(a)/Γ(a − d) with the shift passed exactly, so that it survives when
/// a − d rounds to a.
pub fn gamma_ratio_shift(a: f64, d: f64) -> Result<f64> {
    let b = a - d;
    if a.min(b) >= STIRLING_RATIO_MIN && a.max(b) >= 140.0 {
        return Ok(ln_gamma_difference(a, d).exp() * fault_factor(a) / fault_factor(b));
    }
    gamma_ratio(a, b)
}

/// Below this the Stirling series is not used for Γ ratios.
const STIRLING_RATIO_MIN: f64 = 20.0;

/// B_{2k} / (2k(2k−1)) for k = 1..8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// ln Γ(a) − ln Γ(a − d) for a, a − d ≥ 20, written so that nothing large cancels.
fn ln_gamma_difference(a: f64, d: f64) -> f64 {
    let b = a - d;
    let mut v = (b - 0.5) * (d / b).ln_1p() + d * a.ln() - d;
    let (ia, ib) = (1.0 / a, 1.0 / b);
    let (ia2, ib2) = (ia * ia, ib * ib);
    let (mut pa, mut pb) = (ia, ib);
    for c in STIRLING {
        v += c * (pa - pb);
        pa *= ia2;
        pb *= ib2;
    }
    v
}

/// Digamma ψ(z) = Γ'(z)/Γ(z).
pub fn digamma(z: f64) -> Result<f64> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole { function: "digamma", z });
    }
    if z < 0.0 {
        // Reflection: ψ(z) = ψ(1 - z) - π cot(πz).
        return Ok(digamma(1.0 - z)? - PI * cos_pi(z) / sin_pi(z));
    }
    let mut x = z;
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // Bernoulli tail: Σ B_{2k} / (2k x^{2k}).
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    Ok(acc + x.ln() - 0.5 / x - tail)
}

/// Rising factorial (a)_k = a(a+1)…(a+k-1), (a)_0 = 1.
pub fn pochhammer(a: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (a + j as f64))
}
