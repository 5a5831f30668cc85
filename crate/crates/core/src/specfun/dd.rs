//! Double-double arithmetic (about 32 significant digits) for the two-Φ
//! representation of Ψ, whose terms cancel by many orders of magnitude at
//! moderate ρ.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    const LN2: Dd = Dd {
        hi: std::f64::consts::LN_2,
        lo: 2.319_046_813_846_299_6e-17,
    };

    pub fn new(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }

    fn ldexp(self, k: i32) -> Dd {
        let s = 2f64.powi(k);
        Dd {
            hi: self.hi * s,
            lo: self.lo * s,
        }
    }

    /// e^x.
    pub fn exp(self) -> Dd {
        if self.hi > 709.0 {
            return Dd::new(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        let k = (self.hi / Dd::LN2.hi).round();
        let r = (self - Dd::LN2.mul_f64(k)).ldexp(-10);
        // Taylor series of e^r - 1 for |r| < 2^-10·ln2/2.
        let mut term = r;
        let mut sum = r;
        for n in 2..=14 {
            term = term * r / Dd::new(n as f64);
            sum = sum + term;
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        // (1+s)^(2^10) via s ← 2s + s².
        for _ in 0..10 {
            sum = sum.ldexp(1) + sum * sum;
        }
        (sum + Dd::ONE).ldexp(k as i32)
    }

    /// Natural logarithm of a positive number by one Newton step on exp.
    pub fn ln(self) -> Dd {
        let y0 = Dd::new(self.hi.ln());
        y0 + self * (-y0).exp() - Dd::ONE
    }

    /// self^p for self > 0.
    pub fn powd(self, p: Dd) -> Dd {
        (p * self.ln()).exp()
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let (hi, lo) = quick_two_sum(p, e + (self.hi * b.lo + self.lo * b.hi));
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::new(q3)
    }
}

/// Taylor coefficients of 1/Γ(1+z) about z = 0, as (hi, lo) pairs.
const RGAMMA_TAYLOR: [(f64, f64); 36] = [
    (1.0, 0.0),
    (0.5772156649015329, -4.942915152430645e-18),
    (-0.6558780715202539, 2.137185197068536e-17),
    (-0.04200263503409524, 1.4920306285650505e-18),
    (0.16653861138229148, 1.0189144546842026e-17),
    (-0.04219773455554433, -3.3579992682480134e-18),
    (-0.009621971527876973, -5.300031368830263e-19),
    (0.0072189432466631, -3.6006537063394283e-19),
    (-0.0011651675918590652, 5.659947853880981e-20),
    (-0.00021524167411495098, 2.3758686180729364e-21),
    (0.0001280502823881162, -9.359124499198967e-21),
    (-2.013485478078824e-05, 3.0488773972037385e-23),
    (-1.2504934821426706e-06, -2.66214092271898e-23),
    (1.133027231981696e-06, -4.622235212104869e-23),
    (-2.056338416977607e-07, -3.0061601618645134e-24),
    (6.116095104481416e-09, -2.693458298171306e-25),
    (5.002007644469223e-09, -1.538123614056751e-26),
    (-1.18127457048702e-09, -1.0052356155716208e-25),
    (1.0434267116911005e-10, -2.9298419956825035e-27),
    (7.782263439905071e-12, 4.397255556595848e-28),
    (-3.696805618642206e-12, 2.7050034921703885e-28),
    (5.100370287454476e-13, 2.253001461085878e-29),
    (-2.0583260535665066e-14, -1.4747481491954336e-30),
    (-5.348122539423018e-15, -1.6208384686356568e-31),
    (1.2267786282382608e-15, -5.072915146023867e-32),
    (-1.1812593016974588e-16, 6.422257838149681e-33),
    (1.1866922547516004e-18, -4.2037265494226014e-35),
    (1.4123806553180319e-18, -7.576946701116294e-35),
    (-2.29874568443537e-19, 1.3335481917069145e-36),
    (1.7144063219273374e-20, 5.230715150426935e-38),
    (1.337351730493693e-22, 2.6434059649079228e-39),
    (-2.0542335517666728e-22, 3.6856892424568953e-39),
    (2.736030048608e-23, -2.8599315416397774e-39),
    (-1.7323564459105165e-24, -1.7540883508197598e-40),
    (-2.3606190244992872e-26, -1.260225016995785e-42),
    (1.8649829417172943e-26, 8.774775617290965e-43),
];

/// Largest |x| accepted by the double-double Γ (recurrence length bound).
pub(crate) const DD_GAMMA_MAX_ARG: f64 = 150.0;

/// 1/Γ(x) in double-double: shift to x ∈ [0.5, 1.5) by recurrence, then the
/// Taylor series of 1/Γ(1+z) with |z| ≤ 1/2.
pub(crate) fn rgamma_dd(x: Dd) -> Result<Dd> {
    if x.hi.abs() > DD_GAMMA_MAX_ARG {
        return domain(format!("double-double gamma argument {} out of range", x.hi));
    }
    if x.lo == 0.0 && x.hi <= 0.0 && x.hi == x.hi.floor() {
        return Ok(Dd::ZERO);
    }
    let shift = (x.hi - 0.5).floor();
    let z = x - Dd::new(shift) - Dd::ONE;
    // 1/Γ(1+z) by Horner.
    let mut poly = Dd::ZERO;
    for &(hi, lo) in RGAMMA_TAYLOR.iter().rev() {
        poly = poly * z + Dd { hi, lo };
    }
    // x = 1 + z + shift. For shift > 0: Γ(x) = Γ(1+z)·Π_{j=1..shift}(z+j),
    // for shift < 0: Γ(x) = Γ(1+z) / Π_{j=shift+1..0}(z+j).
    let n = shift as i64;
    let mut factor = Dd::ONE;
    if n > 0 {
        for j in 1..=n {
            factor = factor * (z + Dd::new(j as f64));
        }
        Ok(poly / factor)
    } else {
        for j in (n + 1)..=0 {
            factor = factor * (z + Dd::new(j as f64));
        }
        Ok(poly * factor)
    }
}

/// Kummer series Σ (a)_k/(b)_k z^k/k! in double-double.
pub(crate) fn kummer_series_dd(a: Dd, b: Dd, z: Dd, rel_tol: f64, max_terms: usize) -> Result<Dd> {
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut small = 0;
    for k in 0..max_terms {
        let kf = Dd::new(k as f64);
        term = term * (a + kf) * z / ((b + kf) * Dd::new((k + 1) as f64));
        if term.hi == 0.0 {
            return Ok(sum);
        }
        sum = sum + term;
        if !sum.is_finite() {
            break;
        }
        let ratio = ((a.hi + k as f64) * z.hi / ((b.hi + k as f64) * (k + 1) as f64)).abs();
        if term.hi.abs() <= rel_tol * sum.hi.abs() && ratio < 1.0 {
            small += 1;
            if small >= 3 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergence {
        what: "kummer series (double-double)",
        detail: format!("a={}, b={}, z={}", a.hi, b.hi, z.hi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_recovers_lost_digits() {
        let third = Dd::ONE / Dd::new(3.0);
        let back = third * Dd::new(3.0) - Dd::ONE;
        assert!(back.to_f64().abs() < 1e-31);
        let x = Dd::new(1.0) + Dd::new(1e-20);
        assert_eq!((x - Dd::ONE).to_f64(), 1e-20);
    }

    #[test]
    fn exp_ln_round_trip() {
        for v in [1e-5, 0.3, 1.0, 10.0, 123.456] {
            let x = Dd::new(v);
            let r = x.ln().exp() - x;
            assert!(r.to_f64().abs() < 1e-29 * v, "v={v}");
        }
        let e = Dd::ONE.exp();
        assert!(
            (e - Dd {
                hi: std::f64::consts::E,
                lo: 1.445_646_891_729_250_2e-16
            })
            .to_f64()
            .abs()
                < 1e-30
        );
    }

    #[test]
    fn rgamma_dd_values() {
        assert!(
            (rgamma_dd(Dd::new(5.0)).unwrap() * Dd::new(24.0) - Dd::ONE)
                .to_f64()
                .abs()
                < 1e-30
        );
        // 1/Γ(1/2) = 1/√π
        let r = rgamma_dd(Dd::new(0.5)).unwrap();
        let sqrt_pi = Dd {
            hi: 1.772_453_850_905_516,
            lo: -7.666_586_499_825_8e-17,
        };
        assert!((r * sqrt_pi - Dd::ONE).to_f64().abs() < 1e-30);
        assert_eq!(rgamma_dd(Dd::new(-3.0)).unwrap(), Dd::ZERO);
        // Γ(-0.5) = -2√π
        let r = rgamma_dd(Dd::new(-0.5)).unwrap();
        assert!((r * sqrt_pi * Dd::new(-2.0) - Dd::ONE).to_f64().abs() < 1e-30);
    }
}
