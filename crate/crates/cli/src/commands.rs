use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use entwalk::asymptotics::{
    distributions_at, fit_decay_exponent, locate_spikes, measured_spike_height, origin_convergence,
    spike_height_prediction, Classification, ExponentFit, Regime, RegimeBands, MIN_SPIKE_TIME,
};
use entwalk::limit::{
    limiting_probability, localization_sum, tail_coefficient, FourierCoefficients,
};
use entwalk::spectral::{eigen_system, group_velocity_extremum, is_trivial_beta};
use entwalk::walk::simulate;
use entwalk::weak_limit::{density_coefficients, empirical_vs_limit, SUPPORT_EDGE};
use entwalk::{CoinOperator, InitialCoinState, PositionDistribution, HADAMARD_BETA};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::config::{Command, RunConfig};
use crate::error::CliError;
use crate::format::Cell;

/// Largest tolerated `|Σ p - 1|` after a simulation.
pub const NORM_TOLERANCE: f64 = 1e-10;
pub const DENSITY_SAMPLES: usize = 1024;
pub const DENSITY_ORDERS: [u32; 5] = [0, 1, 2, 3, 4];

pub const SPIKE_EXPONENT_BAND: (f64, f64) = (-0.78, -0.55);
pub const INTERIOR_EXPONENT_BAND: (f64, f64) = (-1.3, -0.7);
pub const ORIGIN_EXPONENT_MAX: f64 = -0.3;
pub const SPIKE_DRIFT_TOLERANCE: f64 = 0.01;
pub const EXTERIOR_MAX: f64 = 1e-4;
pub const PREDICTION_RATIO_BAND: (f64, f64) = (0.1, 4.0);

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub metadata: Map<String, Value>,
}

impl ResultTable {
    pub fn new(headers: &[&str]) -> Self {
        ResultTable {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
            metadata: Map::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.headers.len(),
            "row arity must match the header"
        );
        self.rows.push(row);
    }
}

/// Everything a command produces; `failures` lists numerical checks that
/// did not hold.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub table: ResultTable,
    pub summary: Value,
    pub failures: Vec<String>,
}

pub fn run(config: &RunConfig) -> Result<RunOutput, CliError> {
    config.validate()?;
    let mut output = match config.command {
        Command::Simulate => run_simulate(config)?,
        Command::Limit => run_limit(config)?,
        Command::Density => run_density(config)?,
        Command::Verify => run_verify(config)?,
        Command::Spectrum => run_spectrum(config)?,
    };
    let mut metadata = config_echo(config);
    metadata.append(&mut output.table.metadata);
    output.table.metadata = metadata;
    Ok(output)
}

fn config_echo(config: &RunConfig) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("program".into(), json!(env!("CARGO_PKG_NAME")));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("command".into(), json!(config.command.name()));
    m.insert("beta".into(), json!(config.beta));
    m.insert("alpha".into(), json!(config.alpha.spinor().to_re_im()));
    let t = match config.command {
        Command::Verify => Some(config.verify_t()),
        _ => config.t,
    };
    m.insert("t".into(), json!(t));
    m.insert("n_points".into(), json!(config.n_points));
    m.insert("eps".into(), json!(config.eps));
    m.insert("delta".into(), json!(config.delta));
    m.insert("x_max".into(), json!(config.x_max));
    m.insert("format".into(), json!(config.format.name()));
    m.insert(
        "out".into(),
        json!(config.output_path.as_ref().map(|p| p.display().to_string())),
    );
    m
}

fn fit_json(fit: &Option<ExponentFit>) -> Value {
    match fit {
        Some(f) => json!({
            "exponent": f.exponent,
            "intercept": f.intercept,
            "r_squared": f.r_squared,
            "samples": f.samples,
        }),
        None => Value::Null,
    }
}

fn is_bell_hadamard(config: &RunConfig) -> bool {
    let bell = InitialCoinState::bell_phi_plus().as_vector();
    (config.beta - HADAMARD_BETA).abs() < 1e-12 && (config.alpha.as_vector() - bell).norm() < 1e-9
}

fn run_simulate(config: &RunConfig) -> Result<RunOutput, CliError> {
    let t = config.t.expect("validated");
    let dist = simulate(&config.alpha, &CoinOperator::new(config.beta), t).position_distribution();
    let mut table = ResultTable::new(&["x", "probability"]);
    for (x, p) in dist.iter() {
        table.push(vec![x.into(), p.into()]);
    }
    let total = dist.total();
    let mut failures = Vec::new();
    if (total - 1.0).abs() > NORM_TOLERANCE {
        failures.push(format!("total probability {total} drifted from 1"));
    }
    let spikes = if t >= MIN_SPIKE_TIME {
        match locate_spikes(&dist, t)?.found() {
            Some(s) => json!({
                "x_left": s.x_left,
                "x_right": s.x_right,
                "height_left": s.height_left,
                "height_right": s.height_right,
            }),
            None => json!("absent"),
        }
    } else {
        Value::Null
    };
    let summary = json!({
        "p0": dist.get(0),
        "total_probability": total,
        "spikes": spikes,
    });
    Ok(RunOutput {
        table,
        summary,
        failures,
    })
}

fn run_limit(config: &RunConfig) -> Result<RunOutput, CliError> {
    let cfg = config.quadrature();
    let coeffs = FourierCoefficients::compute(&config.alpha, config.beta, cfg.n_points);
    let mut table = ResultTable::new(&["x", "limit_probability"]);
    for x in -config.x_max..=config.x_max {
        table.push(vec![x.into(), coeffs.probability(x).into()]);
    }
    let p0 = limiting_probability(0, &config.alpha, config.beta, &cfg)?;
    let sum = localization_sum(&config.alpha, config.beta, &cfg)?;
    let tail = tail_coefficient(&config.alpha, config.beta, &cfg)?;

    let mut failures = Vec::new();
    if !(0.0..=1.0 + 1e-9).contains(&sum.value) {
        failures.push(format!("localization sum {} outside [0, 1]", sum.value));
    }
    if (sum.value - sum.partial_sum).abs() > 1e-8 {
        failures.push(format!(
            "localization sum {} and windowed sum {} disagree",
            sum.value, sum.partial_sum
        ));
    }
    let summary = json!({
        "p0": p0,
        "localization_sum": sum.value,
        "partial_sum": sum.partial_sum,
        "partial_sum_window": sum.window,
        "tail_coefficient": tail.coefficient,
        "empirical_tail_exponent": tail.empirical_fit.as_ref().map(|f| f.exponent),
        "empirical_tail_r_squared": tail.empirical_fit.as_ref().map(|f| f.r_squared),
        "exponential_tail_rate": tail.exponential_rate,
    });
    table
        .metadata
        .insert("alias_limit".into(), json!(cfg.alias_limit()));
    Ok(RunOutput {
        table,
        summary,
        failures,
    })
}

fn run_density(config: &RunConfig) -> Result<RunOutput, CliError> {
    let c = density_coefficients(&config.alpha);
    let moments = DENSITY_ORDERS
        .iter()
        .map(|&n| c.moment(n))
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = ResultTable::new(&["y", "density"]);
    let mut failures = Vec::new();
    for j in 0..DENSITY_SAMPLES {
        let y = SUPPORT_EDGE * (2.0 * (j as f64 + 0.5) / DENSITY_SAMPLES as f64 - 1.0);
        let f = c.eval(y)?;
        if f < -1e-12 {
            failures.push(format!("density is negative at y = {y}: {f}"));
        }
        table.push(vec![y.into(), f.into()]);
    }
    if (moments[0] - 1.0).abs() > 1e-8 {
        failures.push(format!("total mass {} differs from 1", moments[0]));
    }
    let empirical = match config.t {
        Some(t) => {
            let report = empirical_vs_limit(&config.alpha, config.beta, t, &DENSITY_ORDERS[1..])?;
            json!({
                "t": t,
                "orders": report.orders,
                "moments": report.moments,
                "empirical_moments": report.empirical_moments,
                "max_moment_gap": report.max_moment_gap,
            })
        }
        None => Value::Null,
    };
    let summary = json!({
        "c00": c.c00,
        "c0": c.c0,
        "c1": c.c1,
        "c2": c.c2,
        "continuous_mass": moments[0] - c.c00,
        "moment_orders": DENSITY_ORDERS,
        "moments": moments,
        "empirical": empirical,
    });
    table
        .metadata
        .insert("samples".into(), json!(DENSITY_SAMPLES));
    Ok(RunOutput {
        table,
        summary,
        failures,
    })
}

fn run_spectrum(config: &RunConfig) -> Result<RunOutput, CliError> {
    let n = config.n_points;
    let beta = config.beta;
    let rows: Vec<(Vec<Cell>, f64)> = (0..n)
        .into_par_iter()
        .map(|j| {
            let k = TAU * j as f64 / (n - 1) as f64;
            let s = eigen_system(k, beta);
            let p = s.projector;
            let defect = (p * p - p).iter().map(|z| z.norm()).fold(0.0, f64::max);
            let mut row: Vec<Cell> = vec![k.into(), s.phi.into(), s.dphi.into(), s.d2phi.into()];
            for l in s.lambdas {
                row.push(l.re.into());
                row.push(l.im.into());
            }
            row.push(Cell::Int(s.near_degenerate as i64));
            (row, defect)
        })
        .collect();

    let mut table = ResultTable::new(&[
        "k",
        "phi",
        "dphi",
        "d2phi",
        "Lambda1_re",
        "Lambda1_im",
        "Lambda2_re",
        "Lambda2_im",
        "Lambda3_re",
        "Lambda3_im",
        "Lambda4_re",
        "Lambda4_im",
        "near_degenerate",
    ]);
    let mut worst = 0.0f64;
    for (row, defect) in rows {
        worst = worst.max(defect);
        table.push(row);
    }
    let mut failures = Vec::new();
    if worst > 1e-12 {
        failures.push(format!("projector idempotence defect {worst}"));
    }
    let front = if is_trivial_beta(beta) {
        Value::Null
    } else {
        let r = group_velocity_extremum(beta)?;
        json!({"k0": r.k0, "m": r.m})
    };
    let summary = json!({
        "theta": entwalk::spectral::THETA,
        "front": front,
        "max_projector_defect": worst,
    });
    Ok(RunOutput {
        table,
        summary,
        failures,
    })
}

/// Measurements at one time of the verify schedule.
struct Snapshot {
    t: usize,
    x_left: Option<i64>,
    x_right: Option<i64>,
    peak_height: Option<f64>,
    band_height: f64,
    predicted: Option<f64>,
    interior_x: i64,
    interior_p: f64,
    exterior_max: f64,
    total: f64,
}

fn snapshot(
    t: usize,
    dist: &PositionDistribution,
    bands: &RegimeBands,
    m: f64,
    delta: f64,
    predict: bool,
) -> Result<Snapshot, CliError> {
    let spikes = locate_spikes(dist, t)?.found();
    let smooth = dist.smoothed();
    // t·M/√2 is the point x = t/2 for the Hadamard coin
    let interior_x = (t as f64 * m * FRAC_1_SQRT_2).round() as i64;
    let mut exterior_max = 0.0f64;
    for (x, p) in dist.iter() {
        if bands.classify(x, t)? == Classification::Regime(Regime::Exterior) {
            exterior_max = exterior_max.max(p);
        }
    }
    Ok(Snapshot {
        t,
        x_left: spikes.map(|s| s.x_left),
        x_right: spikes.map(|s| s.x_right),
        peak_height: spikes.map(|s| s.height_left.max(s.height_right)),
        band_height: measured_spike_height(dist, t, m, delta),
        predicted: if predict {
            Some(spike_height_prediction(t)?)
        } else {
            None
        },
        interior_x,
        interior_p: smooth.get(interior_x),
        exterior_max,
        total: dist.total(),
    })
}

fn fit_of(samples: Vec<(f64, f64)>) -> Option<ExponentFit> {
    fit_decay_exponent(&samples).ok()
}

fn run_verify(config: &RunConfig) -> Result<RunOutput, CliError> {
    let t = config.verify_t();
    let cfg = config.quadrature();
    let front = group_velocity_extremum(config.beta)?;
    let m = front.m;
    let bands = RegimeBands::new(m, config.eps, config.delta)?;
    let predict = is_bell_hadamard(config);

    let spike_times = [t / 8, t / 4, t / 2, t];
    let even_times = [t / 16, t / 8, t / 4, t / 2, t, 2 * t].map(|s| s - s % 2);
    let origin_times: Vec<usize> = even_times.iter().flat_map(|&s| [s, s + 1]).collect();

    let (dists, origin) = rayon::join(
        || distributions_at(&config.alpha, config.beta, &spike_times),
        || origin_convergence(&config.alpha, config.beta, &origin_times, &cfg),
    );
    let origin = origin?;
    let snapshots = dists
        .par_iter()
        .map(|(s, d)| snapshot(*s, d, &bands, m, config.delta, predict))
        .collect::<Result<Vec<_>, _>>()?;

    let mut failures = Vec::new();
    let mut table = ResultTable::new(&[
        "t",
        "x_left",
        "x_right",
        "band_height",
        "peak_height",
        "predicted_height",
        "interior_x",
        "interior_p",
        "exterior_max",
    ]);
    let opt_int = |v: Option<i64>| v.map_or(Cell::Float(f64::NAN), Cell::Int);
    let opt_float = |v: Option<f64>| Cell::Float(v.unwrap_or(f64::NAN));
    for s in &snapshots {
        table.push(vec![
            Cell::Int(s.t as i64),
            opt_int(s.x_left),
            opt_int(s.x_right),
            s.band_height.into(),
            opt_float(s.peak_height),
            opt_float(s.predicted),
            s.interior_x.into(),
            s.interior_p.into(),
            s.exterior_max.into(),
        ]);
        if (s.total - 1.0).abs() > NORM_TOLERANCE {
            failures.push(format!(
                "total probability at t = {} drifted to {}",
                s.t, s.total
            ));
        }
    }

    let mut checks = Vec::new();
    let mut check = |name: &str, passed: bool, detail: Value| {
        if !passed {
            failures.push(format!("{name}: {detail}"));
        }
        checks.push(json!({"name": name, "passed": passed, "detail": detail}));
    };

    let drifts: Vec<Option<f64>> = snapshots
        .iter()
        .map(|s| s.x_right.map(|x| x as f64 / s.t as f64 - m))
        .collect();
    check(
        "spike_drift",
        drifts
            .iter()
            .all(|d| d.is_some_and(|d| d.abs() < SPIKE_DRIFT_TOLERANCE)),
        json!(drifts),
    );

    let band_fit = fit_of(
        snapshots
            .iter()
            .map(|s| (s.t as f64, s.band_height))
            .collect(),
    );
    let peak_fit = fit_of(
        snapshots
            .iter()
            .filter_map(|s| s.peak_height.map(|h| (s.t as f64, h)))
            .collect(),
    );
    let in_band = |fit: &Option<ExponentFit>, (lo, hi): (f64, f64)| {
        fit.as_ref()
            .is_some_and(|f| (lo..=hi).contains(&f.exponent))
    };
    check(
        "spike_exponent",
        in_band(&band_fit, SPIKE_EXPONENT_BAND),
        json!(band_fit.as_ref().map(|f| f.exponent)),
    );

    if predict {
        let ratios: Vec<f64> = snapshots
            .iter()
            .filter_map(|s| s.predicted.map(|p| s.band_height / p))
            .collect();
        let (lo, hi) = PREDICTION_RATIO_BAND;
        check(
            "spike_prediction_ratio",
            ratios.iter().all(|r| (lo..=hi).contains(r)),
            json!(ratios),
        );
    }

    let interior_fit = fit_of(
        snapshots
            .iter()
            .map(|s| (s.t as f64, s.interior_p))
            .collect(),
    );
    check(
        "interior_exponent",
        in_band(&interior_fit, INTERIOR_EXPONENT_BAND),
        json!(interior_fit.as_ref().map(|f| f.exponent)),
    );

    let exterior_worst = snapshots.iter().map(|s| s.exterior_max).fold(0.0, f64::max);
    check(
        "exterior_small",
        exterior_worst < EXTERIOR_MAX,
        json!(exterior_worst),
    );

    let as_fit_samples = |v: Vec<(usize, f64)>| {
        v.into_iter()
            .map(|(t, r)| (t as f64, r))
            .collect::<Vec<_>>()
    };
    let even_fit = fit_of(as_fit_samples(origin.even()));
    let odd_fit = fit_of(as_fit_samples(origin.odd()));
    check(
        "origin_exponent",
        even_fit
            .as_ref()
            .is_some_and(|f| f.exponent <= ORIGIN_EXPONENT_MAX),
        json!(even_fit.as_ref().map(|f| f.exponent)),
    );

    let fitted = |r: Regime| -> Value {
        match r {
            Regime::Origin => json!(even_fit.as_ref().map(|f| f.exponent)),
            Regime::MinorSpike => json!(band_fit.as_ref().map(|f| f.exponent)),
            Regime::InteriorBallistic => json!(interior_fit.as_ref().map(|f| f.exponent)),
            _ => Value::Null,
        }
    };
    let regimes: Vec<Value> = Regime::ALL
        .iter()
        .map(|&r| {
            json!({
                "tag": r.tag(),
                "predicted_exponent": r.predicted_exponent(),
                "fitted_exponent": fitted(r),
            })
        })
        .collect();
    let split = |v: Vec<(usize, f64)>| -> Vec<Value> {
        v.into_iter().map(|(t, r)| json!([t, r])).collect()
    };
    let summary = json!({
        "front": {"k0": front.k0, "m": m},
        "regimes": regimes,
        "spike_times": spike_times,
        "spike_band_fit": fit_json(&band_fit),
        "spike_peak_fit": fit_json(&peak_fit),
        "interior_fit": fit_json(&interior_fit),
        "exterior_max": exterior_worst,
        "origin": {
            "limit": origin.limit,
            "even": split(origin.even()),
            "odd": split(origin.odd()),
            "even_fit": fit_json(&even_fit),
            "odd_fit": fit_json(&odd_fit),
        },
        "checks": checks,
        "all_passed": failures.is_empty(),
    });
    table
        .metadata
        .insert("origin_times".into(), json!(origin_times));
    Ok(RunOutput {
        table,
        summary,
        failures,
    })
}
