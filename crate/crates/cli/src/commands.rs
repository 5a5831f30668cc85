use std::f64::consts::FRAC_PI_2;

use calogero::acceptance::{monotone_direction, run_criterion, sweep_points, CRITERIA};
use calogero::factorization::{
    default_grid, factorization_residual_shifted, make_phi, RepresentationParams, TestFunction,
};
use calogero::nonexistence::{count_zeros, default_mode, InitialData, ZeroCountMode};
use calogero::oracle::{shoot_spectrum, ShootingConfig};
use calogero::spectral::{spectrum, ExtensionLabel, FRIEDRICHS_SNAP};
use calogero::{classify, reduce, Couplings, ReducedParams, RegionClass};
use log::{info, warn};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::report::{float, Check, Document};

/// Why a command stopped; maps onto the process exit code.
#[derive(Debug)]
pub enum Failure {
    /// Exit 2.
    Usage(String),
    /// Exit 3.
    NoRepresentation(String),
    /// Exit 4.
    Numerical(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::NoRepresentation(_) => 3,
            Failure::Numerical(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::NoRepresentation(m) | Failure::Numerical(m) => m,
        }
    }
}

impl From<calogero::Error> for Failure {
    fn from(e: calogero::Error) -> Self {
        match e {
            calogero::Error::Domain(m) => Failure::Usage(m),
            other => Failure::Numerical(other.to_string()),
        }
    }
}

type Outcome = Result<Document, Failure>;

/// Extension choice from the mutually exclusive --nu / --unique / --friedrichs.
#[derive(Debug, Clone, Copy)]
pub struct ExtensionChoice {
    pub nu: Option<f64>,
    pub unique: bool,
    pub friedrichs: bool,
}

impl ExtensionChoice {
    /// Defaults to the Friedrichs member (Unique for g1 ≥ 3/4).
    fn resolve(&self, rp: &ReducedParams) -> ExtensionLabel {
        match self.nu {
            _ if self.unique => ExtensionLabel::Unique,
            Some(nu) if !self.friedrichs && rp.kappa < 1.0 => ExtensionLabel::Nu(nu),
            Some(nu) if !self.friedrichs => {
                warn!("g1 >= 3/4 has a unique self-adjoint extension; ignoring --nu {nu}");
                ExtensionLabel::Unique
            }
            _ if rp.kappa >= 1.0 => ExtensionLabel::Unique,
            _ => ExtensionLabel::friedrichs(),
        }
    }
}

fn check_finite(name: &str, v: f64) -> Result<(), Failure> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("--{name} must be finite (got {v})")))
    }
}

/// Rejects couplings outside the region with positive solutions.
fn existence_region(c: Couplings) -> Result<ReducedParams, Failure> {
    check_finite("g1", c.g1)?;
    check_finite("g2", c.g2)?;
    match classify(c) {
        RegionClass::FallToCenter { also_fall_to_infinity } => {
            let extra = if also_fall_to_infinity {
                " and g2 < 0 (fall to infinity)"
            } else {
                ""
            };
            Err(Failure::NoRepresentation(format!(
                "no generalized oscillator representation: g1 < -1/4 (fall to the center){extra}"
            )))
        }
        RegionClass::FallToInfinity => Err(Failure::NoRepresentation(
            "no generalized oscillator representation: g2 < 0 (fall to infinity)".into(),
        )),
        RegionClass::CalogeroOnly => Err(Failure::Usage(
            "g2 = 0 is the pure Calogero problem; this tool needs g2 > 0".into(),
        )),
        _ => Ok(reduce(c)?),
    }
}

fn reduced_json(rp: &ReducedParams) -> Value {
    serde_json::to_value(rp).expect("reduced parameters serialize")
}

fn extension_json(ext: ExtensionLabel) -> Value {
    serde_json::to_value(ext).expect("labels serialize")
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

pub struct SpectrumArgs {
    pub couplings: Couplings,
    pub extension: ExtensionChoice,
    pub n: usize,
    pub oracle: bool,
}

pub fn spectrum_cmd(a: &SpectrumArgs) -> Outcome {
    let rp = existence_region(a.couplings)?;
    if a.n == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    let ext = a.extension.resolve(&rp);
    let s = spectrum(&rp, ext, a.n)?;
    let mut checks = vec![
        Check::at_most("root residual", s.residuals.iter().copied().fold(0.0, f64::max), 1e-8),
        Check::flag(
            "energies strictly increasing",
            s.energies.windows(2).all(|w| w[1] > w[0]),
        ),
    ];
    let mut oracle_json = Value::Null;
    let mut oracle_energies = Vec::new();
    if a.oracle {
        match shoot_spectrum(a.couplings, ext, a.n, ShootingConfig::for_upsilon(rp.upsilon)) {
            Ok(o) => {
                let worst = s
                    .energies
                    .iter()
                    .zip(&o.energies)
                    .map(|(x, y)| rel(*y, *x))
                    .fold(0.0, f64::max);
                checks.push(Check::at_most("oracle agreement (relative)", worst, 1e-3));
                oracle_json = json!({
                    "energies": o.energies,
                    "mismatch_residuals": o.mismatch_residuals,
                    "max_rel_diff": worst,
                });
                oracle_energies = o.energies;
            }
            Err(e) => checks.push(Check::flag("oracle agreement (relative)", false).with_detail(e.to_string())),
        }
    }
    let mut header: Vec<String> = ["n", "energy", "residual"].map(String::from).to_vec();
    if a.oracle {
        header.extend(["oracle_energy", "rel_diff"].map(String::from));
    }
    let rows = (0..s.energies.len())
        .map(|n| {
            let mut row = vec![n.to_string(), float(s.energies[n]), float(s.residuals[n])];
            if a.oracle {
                let o = oracle_energies.get(n).copied().unwrap_or(f64::NAN);
                row.extend([float(o), float(rel(o, s.energies[n]))]);
            }
            row
        })
        .collect();
    Ok(Document {
        inputs: json!({
            "command": "spectrum",
            "g1": a.couplings.g1,
            "g2": a.couplings.g2,
            "extension": extension_json(ext),
            "n": a.n,
            "oracle": a.oracle,
        }),
        reduced_params: reduced_json(&rp),
        results: json!({
            "energies": s.energies,
            "residuals": s.residuals,
            "method": s.method,
            "oracle": oracle_json,
        }),
        checks,
        csv_header: header,
        csv_rows: rows,
    })
}

pub struct SweepArgs {
    pub couplings: Couplings,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub levels: usize,
}

fn direction_name(d: i8) -> &'static str {
    match d {
        1 => "increasing",
        -1 => "decreasing",
        _ => "not monotone",
    }
}

pub fn sweep_cmd(a: &SweepArgs) -> Outcome {
    let rp = existence_region(a.couplings)?;
    if rp.kappa >= 1.0 {
        return Err(Failure::Usage(format!(
            "a nu sweep needs -1/4 <= g1 < 3/4 (kappa < 1); got kappa = {}",
            rp.kappa
        )));
    }
    if a.count < 2 || a.levels == 0 {
        return Err(Failure::Usage("--sweep needs COUNT >= 2 and --n >= 1".into()));
    }
    for v in [a.lo, a.hi] {
        if !(v.abs() <= FRAC_PI_2 + FRIEDRICHS_SNAP) {
            return Err(Failure::Usage(format!(
                "sweep bounds must lie in [-pi/2, pi/2], got {v}"
            )));
        }
    }
    let nus = sweep_points(a.lo, a.hi, a.count);
    let rows: Vec<Vec<f64>> = nus
        .par_iter()
        .map(|&nu| spectrum(&rp, ExtensionLabel::Nu(nu), a.levels).map(|s| s.energies))
        .collect::<calogero::Result<_>>()?;

    // The family is a circle with -pi/2 ~ pi/2: monotonicity is judged on the open interval.
    let interior: Vec<usize> = (0..nus.len())
        .filter(|&i| !ExtensionLabel::Nu(nus[i]).is_friedrichs())
        .collect();
    let expected: i8 = if rp.kappa > 0.0 { 1 } else { -1 };
    let mut checks = Vec::new();
    let mut flags = Vec::new();
    #[allow(clippy::needless_range_loop)] // `level` names the check as well as indexing rows
    for level in 0..a.levels {
        let column: Vec<f64> = interior.iter().map(|&i| rows[i][level]).collect();
        let dir = if column.len() >= 2 {
            monotone_direction(&column)
        } else {
            expected
        };
        flags.push(json!({"level": level, "direction": direction_name(dir)}));
        checks.push(Check::flag(
            format!("E{level} {}", direction_name(expected)),
            dir == expected,
        ));
    }
    let ceiling = rp.friedrichs_ground();
    for i in (0..nus.len()).filter(|i| !interior.contains(i)) {
        checks.push(Check::at_most(
            format!("E0 at nu = {} equals 2 upsilon^2 (1 + kappa)", nus[i]),
            (rows[i][0] - ceiling).abs(),
            0.0,
        ));
    }
    info!("swept {} points, {} levels", nus.len(), a.levels);

    let mut header = vec!["nu".to_string()];
    header.extend((0..a.levels).map(|k| format!("E{k}")));
    let csv_rows = nus
        .iter()
        .zip(&rows)
        .map(|(nu, es)| {
            std::iter::once(float(*nu))
                .chain(es.iter().map(|e| float(*e)))
                .collect()
        })
        .collect();
    Ok(Document {
        inputs: json!({
            "command": "sweep",
            "g1": a.couplings.g1,
            "g2": a.couplings.g2,
            "sweep": {"lo": a.lo, "hi": a.hi, "count": a.count},
            "n": a.levels,
        }),
        reduced_params: reduced_json(&rp),
        results: json!({"nu": nus, "energies": rows, "monotone": flags}),
        checks,
        csv_header: header,
        csv_rows,
    })
}

pub struct FactorizeArgs {
    pub couplings: Couplings,
    pub mu: f64,
    pub w: f64,
    pub perturb_h: f64,
}

pub fn factorize_cmd(a: &FactorizeArgs) -> Outcome {
    let rp = existence_region(a.couplings)?;
    check_finite("mu", a.mu)?;
    check_finite("w", a.w)?;
    let p = RepresentationParams::new(a.mu, a.w, rp)?;
    let phi = make_phi(p)?;
    let grid = default_grid();
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for f in TestFunction::ALL {
        let r = factorization_residual_shifted(&phi, &f, &grid, a.perturb_h)?;
        checks.push(
            Check::at_most(
                format!("factorization residual, f = {}", f.name()),
                r.max_residual,
                1e-8,
            )
            .with_detail(format!("max {:e} at x = {}", r.max_residual, r.at_x)),
        );
        rows.push(vec![f.name().to_string(), float(r.max_residual), float(r.at_x)]);
    }
    if p.is_minimal() {
        let mut worst = (0.0f64, f64::NAN);
        for &x in &grid {
            let j = phi.eval(x)?;
            let h = phi.superpotential_at(x)? + a.perturb_h;
            let v = (j.d1 - h * j.value).abs() / (j.d1.abs() + j.value.abs());
            if v > worst.0 || worst.1.is_nan() {
                worst = (v, x);
            }
        }
        checks.push(
            Check::at_most("kernel nontrivial: ǎφ=0", worst.0, 1e-10)
                .with_detail(format!("max {:e} at x = {}", worst.0, worst.1)),
        );
        rows.push(vec!["kernel".into(), float(worst.0), float(worst.1)]);
    }
    let lo = 1e-6 / rp.upsilon;
    let hi = 10.0 / rp.upsilon;
    let mut first_bad = None;
    for i in 0..200 {
        let x = lo * (hi / lo).powf(i as f64 / 199.0);
        if !(phi.value_at(x)? > 0.0) {
            first_bad = Some(x);
            break;
        }
    }
    checks.push(match first_bad {
        None => Check::flag("positivity on [1e-6, 10]/upsilon", true),
        Some(x) => Check::flag("positivity on [1e-6, 10]/upsilon", false).with_detail(format!("phi <= 0 at x = {x}")),
    });
    rows.push(vec![
        "positivity".into(),
        float(first_bad.map_or(0.0, |_| 1.0)),
        float(first_bad.unwrap_or(f64::NAN)),
    ]);
    Ok(Document {
        inputs: json!({
            "command": "factorize-check",
            "g1": a.couplings.g1,
            "g2": a.couplings.g2,
            "mu": a.mu,
            "w": a.w,
        }),
        reduced_params: reduced_json(&rp),
        results: json!({
            "u": p.u(),
            "alpha": p.alpha(),
            "minimal": p.is_minimal(),
            "grid": {"lo": grid[0], "hi": grid[grid.len() - 1], "points": grid.len()},
        }),
        checks,
        csv_header: ["check", "value", "at_x"].map(String::from).to_vec(),
        csv_rows: rows,
    })
}

pub struct NonexistenceArgs {
    pub couplings: Couplings,
    pub interval: Option<(f64, f64)>,
    pub u: f64,
    pub phase: f64,
    pub mode: Option<ZeroCountMode>,
    pub force: bool,
}

pub fn nonexistence_cmd(a: &NonexistenceArgs) -> Outcome {
    let c = a.couplings;
    check_finite("g1", c.g1)?;
    check_finite("g2", c.g2)?;
    let class = classify(c);
    if class.admits_representation() && !a.force {
        return Err(Failure::Usage(format!(
            "g1 = {}, g2 = {} lies in the existence region ({}); pass --force to count zeros anyway",
            c.g1,
            c.g2,
            class.name()
        )));
    }
    let mode = a.mode.unwrap_or_else(|| default_mode(c));
    let interval = a.interval.unwrap_or(match mode {
        ZeroCountMode::Origin => (1e-8, 1e-2),
        ZeroCountMode::Infinity => (10.0, 20.0),
    });
    let r = count_zeros(c, a.u, interval, InitialData::Phase(a.phase), mode)?;
    let check = Check::at_most(
        "zero count within 1 + 10% of prediction",
        (r.observed_zeros as f64 - r.predicted_zeros).abs(),
        1.0 + 0.1 * r.predicted_zeros,
    )
    .with_detail(format!(
        "observed {}, predicted {:.2}",
        r.observed_zeros, r.predicted_zeros
    ));
    let mode_name = match mode {
        ZeroCountMode::Origin => "origin",
        ZeroCountMode::Infinity => "infinity",
    };
    Ok(Document {
        inputs: json!({
            "command": "nonexistence",
            "g1": c.g1,
            "g2": c.g2,
            "interval": [interval.0, interval.1],
            "u": a.u,
            "phase": a.phase,
            "mode": mode_name,
            "force": a.force,
        }),
        reduced_params: reduce(c).map_or(Value::Null, |rp| reduced_json(&rp)),
        results: json!({"region": class.name(), "report": r}),
        checks: vec![check],
        csv_header: [
            "mode",
            "lo",
            "hi",
            "observed_zeros",
            "predicted_zeros",
            "sigma_or_omega",
            "within_tolerance",
        ]
        .map(String::from)
        .to_vec(),
        csv_rows: vec![vec![
            mode_name.into(),
            float(interval.0),
            float(interval.1),
            r.observed_zeros.to_string(),
            float(r.predicted_zeros),
            float(r.sigma_or_omega),
            r.within_tolerance.to_string(),
        ]],
    })
}

pub fn verify_cmd(quick: bool) -> Outcome {
    let reports: Vec<_> = CRITERIA.par_iter().map(|&(id, _)| run_criterion(id, quick)).collect();
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    let mut criteria = Vec::new();
    for r in &reports {
        let status = if r.passed { "PASS" } else { "FAIL" };
        eprintln!("criterion {:>2} {status}  {} ({:.2} s)", r.id, r.title, r.elapsed_s);
        let mut check = Check::flag(format!("criterion {}: {}", r.id, r.title), r.passed);
        if let Some(f) = r.first_failure() {
            check = check.with_detail(f);
        }
        checks.push(check);
        criteria.push(json!({
            "id": r.id,
            "title": r.title,
            "passed": r.passed,
            "time_limit_s": r.time_limit_s,
            "failure": r.failure,
            "rows": r.rows,
        }));
        for row in &r.rows {
            rows.push(vec![
                row.criterion.to_string(),
                row.case.clone(),
                float(row.value),
                float(row.reference),
                float(row.error),
                float(row.tolerance),
                row.passed.to_string(),
            ]);
        }
        if let Some(f) = &r.failure {
            rows.push(vec![
                r.id.to_string(),
                f.clone(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                "false".into(),
            ]);
        }
    }
    Ok(Document {
        inputs: json!({"command": "verify", "quick": quick}),
        reduced_params: Value::Null,
        results: json!({"criteria": criteria}),
        checks,
        csv_header: [
            "criterion",
            "case",
            "value",
            "reference",
            "error",
            "tolerance",
            "passed",
        ]
        .map(String::from)
        .to_vec(),
        csv_rows: rows,
    })
}
