//! Shooting-method eigenvalue solver for
//! `−χ'' + (g1/x² + g2·x²)χ = Eχ` on (0, ∞), independent of the
//! special-function machinery.
//!
//! The left solution starts at `x_min` from the Frobenius series selected by
//! the boundary condition at the origin:
//!
//! * κ ∈ (0,1): χ ≈ (υx)^{1/2+κ} sin ν + (υx)^{1/2−κ} cos ν
//! * κ = 0:     χ ≈ (υx)^{1/2} sin ν + 2 (υx)^{1/2} ln(υx) cos ν
//! * Friedrichs / unique: the regular solution (υx)^{1/2+κ} alone.
//!
//! The right solution starts at `x_max` on the decaying tail
//! (υx)^{−1/2−2w} e^{−(υx)²/2}, w = −E/(4υ²). Eigenvalues are the zeros of
//! their normalized Wronskian at `x_match`.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::ode::{self, Options, State};
use crate::params::{reduce, Couplings, ReducedParams};
use crate::quad::simpson_uniform;
use crate::spectral::{resolve_extension, ExtensionLabel};

/// Number of samples in returned eigenfunctions.
pub const EIGENFUNCTION_SAMPLES: usize = 2001;

const SERIES_MAX_TERMS: usize = 400;
const BISECTION_STEPS: usize = 12;
const ILLINOIS_MAX_ITER: usize = 100;
/// Maximum number of times the scan floor is doubled while the left
/// solution still has nodes there.
const FLOOR_DOUBLINGS: usize = 200;
/// Scan step relative to |E|, used when it exceeds `e_step`.
const DEEP_STEP_FRACTION: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShootingConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub x_match: f64,
    pub rel_tol: f64,
    /// Energy step of the sign scan.
    pub e_step: f64,
    /// Hint for the lowest scanned energy (never above −20υ²). The floor is
    /// lowered further until the left solution has no nodes there.
    pub e_floor: Option<f64>,
    /// Relative tolerance on refined eigenvalues.
    pub root_tol: f64,
}

impl ShootingConfig {
    /// Defaults scaled to the oscillator length 1/υ.
    pub fn for_upsilon(upsilon: f64) -> Self {
        ShootingConfig {
            x_min: 0.02 / upsilon,
            x_max: 8.0 / upsilon,
            x_match: 1.0 / upsilon,
            rel_tol: 1e-10,
            e_step: 0.4 * upsilon * upsilon,
            e_floor: None,
            root_tol: 1e-12,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.x_min && self.x_min < self.x_match && self.x_match < self.x_max) || !self.x_max.is_finite() {
            return domain(format!(
                "need 0 < x_min < x_match < x_max (got {}, {}, {})",
                self.x_min, self.x_match, self.x_max
            ));
        }
        if !(self.rel_tol > 0.0) || !(self.e_step > 0.0) || !(self.root_tol > 0.0) {
            return domain("shooting tolerances and energy step must be positive");
        }
        Ok(())
    }
}

/// A function sampled on an explicit grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledFunction {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl SampledFunction {
    /// Samples `f` on `grid`.
    pub fn from_fn<F: Fn(f64) -> Result<f64>>(grid: &[f64], f: F) -> Result<Self> {
        let values = grid.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
        Ok(SampledFunction {
            grid: grid.to_vec(),
            values,
        })
    }

    /// Sign changes between consecutive nonzero samples.
    pub fn sign_changes(&self) -> usize {
        let mut prev = 0.0f64;
        let mut count = 0;
        for &v in &self.values {
            if v == 0.0 {
                continue;
            }
            if prev != 0.0 && (v > 0.0) != (prev > 0.0) {
                count += 1;
            }
            prev = v;
        }
        count
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSpectrum {
    pub energies: Vec<f64>,
    pub mismatch_residuals: Vec<f64>,
    pub eigenfunctions: Option<Vec<SampledFunction>>,
}

/// Left boundary data: the combination of Frobenius solutions fixed by the extension.
#[derive(Debug, Clone, Copy)]
enum LeftData {
    Regular,
    Mixed { sin_nu: f64, cos_nu: f64 },
}

struct Problem {
    rp: ReducedParams,
    g1: f64,
    g2: f64,
    left: LeftData,
    cfg: ShootingConfig,
}

/// x^s Σ c_k x^{2k} and its derivative, plus the coefficients used.
fn frobenius(s: f64, g2: f64, e: f64, x: f64) -> (f64, f64, Vec<f64>) {
    let x2 = x * x;
    let mut c = vec![1.0];
    let mut val = 0.0;
    let mut der = 0.0;
    let mut xp = x.powf(s);
    let mut quiet = 0;
    for k in 0..SERIES_MAX_TERMS {
        if k > 0 {
            let kf = k as f64;
            let prev2 = if k >= 2 { c[k - 2] } else { 0.0 };
            c.push((g2 * prev2 - e * c[k - 1]) / (4.0 * kf * (s + kf - 0.5)));
        }
        let p = s + 2.0 * k as f64;
        let tv = c[k] * xp;
        val += tv;
        der += c[k] * p * xp / x;
        if tv.abs() <= 1e-18 * val.abs() {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
        xp *= x2;
    }
    (val, der, c)
}

/// Second (logarithmic) solution at κ = 0: χ1 ln x + x^{1/2} Σ d_k x^{2k}.
fn frobenius_log(g2: f64, e: f64, x: f64, c: &[f64], chi1: (f64, f64)) -> (f64, f64) {
    let x2 = x * x;
    let mut d = vec![0.0];
    let mut val = 0.0;
    let mut der = 0.0;
    let mut xp = x.sqrt();
    for k in 1..c.len() {
        let kf = k as f64;
        let prev2 = if k >= 2 { d[k - 2] } else { 0.0 };
        d.push((g2 * prev2 - e * d[k - 1] - 4.0 * kf * c[k]) / (4.0 * kf * kf));
        xp *= x2;
        val += d[k] * xp;
        der += d[k] * (0.5 + 2.0 * kf) * xp / x;
    }
    let l = x.ln();
    (chi1.0 * l + val, chi1.1 * l + chi1.0 / x + der)
}

impl Problem {
    fn new(c: Couplings, ext: ExtensionLabel, cfg: ShootingConfig) -> Result<Self> {
        cfg.validate()?;
        let rp = reduce(c)?;
        let ext = resolve_extension(&rp, ext)?;
        let left = if ext.is_friedrichs() {
            LeftData::Regular
        } else {
            let ExtensionLabel::Nu(nu) = ext else { unreachable!() };
            let (sin_nu, cos_nu) = nu.sin_cos();
            LeftData::Mixed { sin_nu, cos_nu }
        };
        Ok(Problem {
            rp,
            g1: rp.g1(),
            g2: c.g2,
            left,
            cfg,
        })
    }

    fn rhs(&self, e: f64) -> impl Fn(f64, &State) -> State + '_ {
        move |x: f64, y: &State| [y[1], (self.g1 / (x * x) + self.g2 * x * x - e) * y[0]]
    }

    fn options(&self) -> Options {
        Options {
            rtol: self.cfg.rel_tol,
            atol: 1e-14 * self.cfg.rel_tol,
            ..Options::default()
        }
    }

    fn left_initial(&self, e: f64) -> State {
        self.left_series(e, self.cfg.x_min)
    }

    /// Limit of the left solution at x = 0, or `None` when it is unbounded.
    fn left_value_at_origin(&self) -> Option<f64> {
        let kappa = self.rp.kappa;
        match self.left {
            LeftData::Regular => Some(0.0),
            LeftData::Mixed { cos_nu, .. } if kappa == 0.0 || cos_nu == 0.0 || kappa < 0.5 => Some(0.0),
            LeftData::Mixed { cos_nu, .. } if kappa == 0.5 => Some(cos_nu),
            LeftData::Mixed { .. } => None,
        }
    }

    fn left_series(&self, e: f64, x: f64) -> State {
        let kappa = self.rp.kappa;
        let ups = self.rp.upsilon;
        let (vp, dp, cp) = frobenius(0.5 + kappa, self.g2, e, x);
        match self.left {
            LeftData::Regular => {
                let s = ups.powf(0.5 + kappa);
                [s * vp, s * dp]
            }
            LeftData::Mixed { sin_nu, cos_nu } => {
                if kappa > 0.0 {
                    let (vm, dm, _) = frobenius(0.5 - kappa, self.g2, e, x);
                    let a = sin_nu * ups.powf(0.5 + kappa);
                    let b = cos_nu * ups.powf(0.5 - kappa);
                    [a * vp + b * vm, a * dp + b * dm]
                } else {
                    let (vl, dl) = frobenius_log(self.g2, e, x, &cp, (vp, dp));
                    let s = ups.sqrt();
                    let lu = ups.ln();
                    [
                        s * (sin_nu * vp + 2.0 * cos_nu * (vl + lu * vp)),
                        s * (sin_nu * dp + 2.0 * cos_nu * (dl + lu * dp)),
                    ]
                }
            }
        }
    }

    fn right_initial(&self, e: f64) -> State {
        let x = self.cfg.x_max;
        let ups = self.rp.upsilon;
        let w = -e / (4.0 * self.rp.upsilon_sq());
        let y = ups * x;
        [1.0, ups * ((-0.5 - 2.0 * w) / y - y)]
    }

    /// Sign changes of the left solution on (x_min, x_max): the number of
    /// levels below `e` up to the truncation at x_max.
    fn left_nodes(&self, e: f64) -> Result<usize> {
        let opts = self.options();
        let mut last = self.left_initial(e)[0];
        let mut count = 0;
        ode::integrate(
            self.rhs(e),
            self.cfg.x_min,
            self.left_initial(e),
            self.cfg.x_max,
            &opts,
            |_, y: &State, _| {
                if y[0] != 0.0 {
                    if last != 0.0 && (y[0] > 0.0) != (last > 0.0) {
                        count += 1;
                    }
                    last = y[0];
                }
            },
        )?;
        Ok(count)
    }

    /// Normalized Wronskian χ_L χ_R' − χ_L' χ_R at x_match.
    fn mismatch(&self, e: f64) -> Result<f64> {
        let opts = self.options();
        let f = self.rhs(e);
        let l = ode::integrate(
            &f,
            self.cfg.x_min,
            self.left_initial(e),
            self.cfg.x_match,
            &opts,
            |_, _, _| {},
        )?;
        let r = ode::integrate(
            &f,
            self.cfg.x_max,
            self.right_initial(e),
            self.cfg.x_match,
            &opts,
            |_, _, _| {},
        )?;
        let (a, b) = (l.y, r.y);
        let norm = a[0].hypot(a[1]) * b[0].hypot(b[1]);
        Ok((a[0] * b[1] - a[1] * b[0]) / norm)
    }

    /// Refines a sign change on [lo, hi] by bisection, then Illinois.
    fn refine(&self, mut lo: f64, mut hi: f64, mut flo: f64, mut fhi: f64) -> Result<(f64, f64)> {
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            let fm = self.mismatch(mid)?;
            if fm == 0.0 {
                return Ok((mid, 0.0));
            }
            if (fm > 0.0) == (flo > 0.0) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
                fhi = fm;
            }
        }
        let mut side = 0i8;
        let mut best = if flo.abs() < fhi.abs() { (lo, flo) } else { (hi, fhi) };
        for _ in 0..ILLINOIS_MAX_ITER {
            if (hi - lo).abs() <= self.cfg.root_tol * hi.abs().max(lo.abs()).max(self.rp.upsilon_sq()) {
                break;
            }
            let x = (lo * fhi - hi * flo) / (fhi - flo);
            let x = if x > lo && x < hi { x } else { 0.5 * (lo + hi) };
            let fx = self.mismatch(x)?;
            if fx.abs() < best.1.abs() {
                best = (x, fx);
            }
            if fx == 0.0 {
                break;
            }
            if (fx > 0.0) == (fhi > 0.0) {
                hi = x;
                fhi = fx;
                if side == -1 {
                    flo *= 0.5;
                }
                side = -1;
            } else {
                lo = x;
                flo = fx;
                if side == 1 {
                    fhi *= 0.5;
                }
                side = 1;
            }
        }
        Ok(best)
    }

    fn eigenfunction(&self, e: f64) -> Result<SampledFunction> {
        let cfg = &self.cfg;
        let n = EIGENFUNCTION_SAMPLES;
        let origin = self.left_value_at_origin();
        let x0 = if origin.is_some() { 0.0 } else { cfg.x_min };
        let step = (cfg.x_max - x0) / (n - 1) as f64;
        let grid: Vec<f64> = (0..n).map(|i| x0 + step * i as f64).collect();
        let split = grid.partition_point(|&x| x <= cfg.x_match);
        let series_end = grid.partition_point(|&x| x < cfg.x_min);
        let opts = self.options();
        let f = self.rhs(e);

        let mut left_ts = vec![cfg.x_min];
        left_ts.extend_from_slice(&grid[series_end..split]);
        left_ts.push(cfg.x_match);
        let mut left = ode::integrate_sampled(&f, self.left_initial(e), &left_ts, &opts)?;
        left.remove(0);
        let head: Vec<(State, f64)> = grid[..series_end]
            .iter()
            .map(|&x| match (x, origin) {
                (0.0, Some(v)) => ([v, 0.0], 0.0),
                (x, _) => (self.left_series(e, x), 0.0),
            })
            .collect();
        left.splice(0..0, head);
        let mut right_ts: Vec<f64> = grid[split..].iter().rev().copied().collect();
        right_ts.insert(0, cfg.x_max);
        right_ts.push(cfg.x_match);
        let right = ode::integrate_sampled(&f, self.right_initial(e), &right_ts, &opts)?;

        let value = |s: &(State, f64), k: usize| s.0[k] * s.1.exp();
        let lm = left.last().expect("match sample");
        let rm = right.last().expect("match sample");
        let (lv, rv) = (value(lm, 0), value(rm, 0));
        let factor = if rv.abs() > 1e-8 * value(rm, 1).abs() {
            lv / rv
        } else {
            value(lm, 1) / value(rm, 1)
        };
        let mut values = Vec::with_capacity(n);
        for s in &left[..split] {
            values.push(value(s, 0));
        }
        // right samples are stored from x_max inward, after the duplicated start point.
        let tail: Vec<f64> = right[1..right.len() - 1].iter().map(|s| value(s, 0) * factor).collect();
        values.extend(tail.iter().rev());
        if grid.last() == Some(&cfg.x_max) && values.len() < n {
            values.push(factor * value(&right[0], 0));
        }
        debug_assert_eq!(values.len(), n);
        let norm = simpson_uniform(&values.iter().map(|v| v * v).collect::<Vec<_>>(), step).sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NonConvergence {
                what: "eigenfunction normalization",
                detail: format!("E = {e}"),
            });
        }
        Ok(SampledFunction {
            grid,
            values: values.into_iter().map(|v| v / norm).collect(),
        })
    }
}

/// The first `n_max` eigenvalues of the extension by shooting.
pub fn shoot_spectrum(c: Couplings, ext: ExtensionLabel, n_max: usize, cfg: ShootingConfig) -> Result<OracleSpectrum> {
    shoot(c, ext, n_max, cfg, false)
}

/// As [`shoot_spectrum`], also returning normalized eigenfunctions sampled on
/// a uniform grid over [x_min, x_max].
pub fn shoot_spectrum_with_eigenfunctions(
    c: Couplings,
    ext: ExtensionLabel,
    n_max: usize,
    cfg: ShootingConfig,
) -> Result<OracleSpectrum> {
    shoot(c, ext, n_max, cfg, true)
}

fn shoot(
    c: Couplings,
    ext: ExtensionLabel,
    n_max: usize,
    cfg: ShootingConfig,
    with_functions: bool,
) -> Result<OracleSpectrum> {
    let pb = Problem::new(c, ext, cfg)?;
    let u2 = pb.rp.upsilon_sq();
    let mut floor = cfg.e_floor.map_or(-20.0 * u2, |f| f.min(-20.0 * u2));
    for _ in 0..FLOOR_DOUBLINGS {
        if pb.left_nodes(floor)? == 0 {
            break;
        }
        floor *= 2.0;
    }
    let top = 4.0 * u2 * (n_max as f64 + 3.0) + 2.0 * u2 * pb.rp.kappa;
    let mut energies = Vec::with_capacity(n_max);
    let mut residuals = Vec::with_capacity(n_max);
    let mut e_lo = floor;
    let mut f_lo = pb.mismatch(e_lo)?;
    while energies.len() < n_max && e_lo < top {
        let e_hi = e_lo + cfg.e_step.max(DEEP_STEP_FRACTION * e_lo.abs());
        let f_hi = pb.mismatch(e_hi)?;
        if f_lo == 0.0 {
            energies.push(e_lo);
            residuals.push(0.0);
        } else if (f_lo > 0.0) != (f_hi > 0.0) && f_hi != 0.0 {
            let (e, r) = pb.refine(e_lo, e_hi, f_lo, f_hi)?;
            energies.push(e);
            residuals.push(r.abs());
        }
        e_lo = e_hi;
        f_lo = f_hi;
    }
    if energies.len() < n_max {
        return Err(Error::ScanExhausted {
            found: energies.len(),
            wanted: n_max,
            e_top: top,
        });
    }
    let eigenfunctions = if with_functions {
        Some(
            energies
                .iter()
                .map(|&e| pb.eigenfunction(e))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };
    Ok(OracleSpectrum {
        energies,
        mismatch_residuals: residuals,
        eigenfunctions,
    })
}

/// |∫ u1 u2 dx| by Simpson's rule on the shared uniform grid.
pub fn eigenfunction_overlap(u1: &SampledFunction, u2: &SampledFunction) -> Result<f64> {
    if u1.grid != u2.grid || u1.values.len() != u1.grid.len() || u2.values.len() != u2.grid.len() {
        return Err(Error::GridMismatch);
    }
    if u1.grid.len() < 3 {
        return Err(Error::GridMismatch);
    }
    let step = u1.grid[1] - u1.grid[0];
    let prod: Vec<f64> = u1.values.iter().zip(&u2.values).map(|(a, b)| a * b).collect();
    Ok(simpson_uniform(&prod, step).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frobenius_regular_solution_of_oscillator() {
        // g1 = 0 (s = 1): χ = x e^{−x²/2} at E = 3, g2 = 1.
        let x = 0.3f64;
        let (v, d, _) = frobenius(1.0, 1.0, 3.0, x);
        let want = x * (-x * x / 2.0).exp();
        assert!((v - want).abs() < 1e-15);
        assert!((d - (1.0 - x * x) * (-x * x / 2.0).exp()).abs() < 1e-15);
    }

    #[test]
    fn config_validation() {
        let mut c = ShootingConfig::for_upsilon(1.0);
        assert!(c.validate().is_ok());
        c.x_match = 10.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn unique_levels() {
        let s = shoot_spectrum(
            Couplings::new(0.75, 1.0),
            ExtensionLabel::Unique,
            3,
            ShootingConfig::for_upsilon(1.0),
        )
        .unwrap();
        for (e, want) in s.energies.iter().zip([4.0, 8.0, 12.0]) {
            assert!((e - want).abs() < 1e-6 * want, "{e}");
        }
    }

    #[test]
    fn overlap_grid_mismatch() {
        let a = SampledFunction {
            grid: vec![0.0, 1.0, 2.0],
            values: vec![1.0; 3],
        };
        let b = SampledFunction {
            grid: vec![0.0, 1.0, 3.0],
            values: vec![1.0; 3],
        };
        assert_eq!(eigenfunction_overlap(&a, &b), Err(Error::GridMismatch));
    }
}
