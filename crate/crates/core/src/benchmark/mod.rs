//! Monte-Carlo estimation of erasure failure rates.
//!
//! A trial samples an i.i.d. erasure and records whether it covers a
//! non-trivial cycle of the primal (a logical Z, counted in `fail_z`) or of
//! the dual (a logical X, counted in `fail_x`). Trials run in parallel on a
//! rayon pool; every trial owns a counter-derived random stream and the
//! per-worker tallies are integer sums, so results do not depend on the
//! number of workers.

mod rng;
mod stats;

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use rand::distr::Bernoulli;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cellulation::{DualSurface, Surface};
use crate::homology::{logical_qubit_count, Decider, ErasurePattern};

pub use rng::{mix64, sample_erasure, sample_into, trial_seed, trial_stream, TrialRng};
pub use stats::{wilson_interval, z_score};

/// Confidence level of every reported interval.
pub const CONFIDENCE: f64 = 0.95;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum BenchmarkError {
    #[error("invalid sweep config: {0}")]
    InvalidConfig(String),
    #[error("cancelled")]
    Cancelled,
    #[error("worker pool: {0}")]
    Pool(String),
}

/// Which logical sectors a trial checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Both,
    ZOnly,
    XOnly,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Mode, String> {
        match s {
            "both" => Ok(Mode::Both),
            "z_only" => Ok(Mode::ZOnly),
            "x_only" => Ok(Mode::XOnly),
            other => Err(format!(
                "unknown mode `{other}` (expected both, z_only or x_only)"
            )),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Both => "both",
            Mode::ZOnly => "z_only",
            Mode::XOnly => "x_only",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub p_values: Vec<f64>,
    pub trials_per_point: u64,
    pub master_seed: u64,
    #[serde(default)]
    pub mode: Mode,
}

impl SweepConfig {
    pub fn check(&self) -> Result<(), BenchmarkError> {
        if self.trials_per_point == 0 {
            return Err(BenchmarkError::InvalidConfig(
                "trials_per_point must be at least 1".into(),
            ));
        }
        if let Some(p) = self.p_values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(BenchmarkError::InvalidConfig(format!(
                "p = {p} lies outside [0, 1]"
            )));
        }
        if self.p_values.windows(2).any(|w| w[0] > w[1]) {
            return Err(BenchmarkError::InvalidConfig(
                "p_values must be sorted ascending".into(),
            ));
        }
        Ok(())
    }

    pub fn total_trials(&self) -> u64 {
        self.trials_per_point
            .saturating_mul(self.p_values.len() as u64)
    }
}

/// `steps` evenly spaced probabilities from `p_min` to `p_max` inclusive.
pub fn linear_grid(p_min: f64, p_max: f64, steps: usize) -> Result<Vec<f64>, BenchmarkError> {
    if !(0.0..=1.0).contains(&p_min) || !(0.0..=1.0).contains(&p_max) || p_min > p_max {
        return Err(BenchmarkError::InvalidConfig(format!(
            "need 0 <= p_min <= p_max <= 1, got {p_min} and {p_max}"
        )));
    }
    match steps {
        0 => Err(BenchmarkError::InvalidConfig(
            "steps must be at least 1".into(),
        )),
        1 => Ok(vec![p_min]),
        _ => {
            let span = p_max - p_min;
            let last = (steps - 1) as f64;
            let mut grid: Vec<f64> = (0..steps).map(|i| p_min + span * i as f64 / last).collect();
            grid[steps - 1] = p_max;
            Ok(grid)
        }
    }
}

/// An estimated rate with its Wilson interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rate {
    pub value: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl Rate {
    pub fn from_counts(failures: u64, trials: u64) -> Rate {
        let (ci_lo, ci_hi) = wilson_interval(failures, trials, CONFIDENCE);
        Rate {
            value: failures as f64 / trials as f64,
            ci_lo,
            ci_hi,
        }
    }

    /// Whether the two intervals are disjoint.
    pub fn separated_from(&self, other: &Rate) -> bool {
        self.ci_hi < other.ci_lo || other.ci_hi < self.ci_lo
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub p: f64,
    pub trials: u64,
    pub fail_any: u64,
    pub fail_z: u64,
    pub fail_x: u64,
    pub mean_erasure_weight: f64,
    pub rate_any: Rate,
    pub rate_z: Rate,
    pub rate_x: Rate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceMeta {
    pub name: String,
    pub n: usize,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config: SweepConfig,
    pub surface: SurfaceMeta,
    pub points: Vec<PointResult>,
    /// Seconds spent running trials. Not part of the canonical form.
    #[serde(default)]
    pub wall_time: f64,
}

impl SweepResult {
    /// Sorted-key JSON without `wall_time`, byte-stable for a given config.
    pub fn canonical_json(&self) -> String {
        let mut value = serde_json::to_value(self).expect("sweep results serialize");
        if let serde_json::Value::Object(map) = &mut value {
            map.remove("wall_time");
        }
        serde_json::to_string(&value).expect("json values serialize")
    }
}

/// Optional hooks for long runs: a trial counter and a cancel flag.
#[derive(Debug, Clone, Copy, Default)]
pub struct Control<'a> {
    pub progress: Option<&'a AtomicU64>,
    pub cancel: Option<&'a AtomicBool>,
}

impl Control<'_> {
    fn cancelled(&self) -> bool {
        self.cancel.is_some_and(|c| c.load(Ordering::Relaxed))
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    fail_any: u64,
    fail_z: u64,
    fail_x: u64,
    weight: u64,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally {
            fail_any: self.fail_any + o.fail_any,
            fail_z: self.fail_z + o.fail_z,
            fail_x: self.fail_x + o.fail_x,
            weight: self.weight + o.weight,
        }
    }
}

/// Trials between cancel checks and progress updates.
const CHUNK: u64 = 64;

/// A surface prepared for repeated sampling on a fixed worker pool.
pub struct Benchmark {
    decider: Decider,
    meta: SurfaceMeta,
    pool: rayon::ThreadPool,
}

impl Benchmark {
    /// `workers = 0` picks the machine's parallelism.
    pub fn new(
        s: &Surface,
        dual: &DualSurface,
        workers: usize,
    ) -> Result<Benchmark, BenchmarkError> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| BenchmarkError::Pool(e.to_string()))?;
        Ok(Benchmark {
            decider: Decider::new(s, dual),
            meta: SurfaceMeta {
                name: s.name().to_string(),
                n: s.num_qubits(),
                k: logical_qubit_count(s, dual),
            },
            pool,
        })
    }

    pub fn meta(&self) -> &SurfaceMeta {
        &self.meta
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }

    pub fn run_point(
        &self,
        p: f64,
        trials: u64,
        master_seed: u64,
        point_index: u64,
        mode: Mode,
        control: Control<'_>,
    ) -> Result<PointResult, BenchmarkError> {
        if trials == 0 {
            return Err(BenchmarkError::InvalidConfig(
                "trials must be at least 1".into(),
            ));
        }
        let coin = Bernoulli::new(p)
            .map_err(|_| BenchmarkError::InvalidConfig(format!("p = {p} lies outside [0, 1]")))?;
        let decider = &self.decider;
        let chunks = trials.div_ceil(CHUNK);
        let tally = self.pool.install(|| {
            (0..chunks)
                .into_par_iter()
                .map_init(
                    || {
                        (
                            decider.scratch(),
                            ErasurePattern::empty(decider.num_qubits()),
                        )
                    },
                    |(scratch, pattern), chunk| {
                        if control.cancelled() {
                            return Tally::default();
                        }
                        let end = ((chunk + 1) * CHUNK).min(trials);
                        let mut tally = Tally::default();
                        for t in chunk * CHUNK..end {
                            let mut stream = trial_stream(master_seed, point_index, t);
                            sample_into(pattern, &coin, &mut stream);
                            let z = mode != Mode::XOnly
                                && !decider
                                    .h1_primal(pattern, scratch)
                                    .expect("pattern sized to surface")
                                    .is_trivial();
                            let x = mode != Mode::ZOnly
                                && !decider
                                    .h1_dual(pattern, scratch)
                                    .expect("pattern sized to surface")
                                    .is_trivial();
                            tally.fail_z += z as u64;
                            tally.fail_x += x as u64;
                            tally.fail_any += (z || x) as u64;
                            tally.weight += pattern.weight() as u64;
                        }
                        if let Some(progress) = control.progress {
                            progress.fetch_add(end - chunk * CHUNK, Ordering::Relaxed);
                        }
                        tally
                    },
                )
                .reduce(Tally::default, Tally::merge)
        });
        if control.cancelled() {
            return Err(BenchmarkError::Cancelled);
        }
        Ok(PointResult {
            p,
            trials,
            fail_any: tally.fail_any,
            fail_z: tally.fail_z,
            fail_x: tally.fail_x,
            mean_erasure_weight: tally.weight as f64 / trials as f64,
            rate_any: Rate::from_counts(tally.fail_any, trials),
            rate_z: Rate::from_counts(tally.fail_z, trials),
            rate_x: Rate::from_counts(tally.fail_x, trials),
        })
    }

    pub fn run_sweep(
        &self,
        config: &SweepConfig,
        control: Control<'_>,
    ) -> Result<SweepResult, BenchmarkError> {
        config.check()?;
        let start = Instant::now();
        let points = config
            .p_values
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                self.run_point(
                    p,
                    config.trials_per_point,
                    config.master_seed,
                    i as u64,
                    config.mode,
                    control,
                )
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SweepResult {
            config: config.clone(),
            surface: self.meta.clone(),
            points,
            wall_time: start.elapsed().as_secs_f64(),
        })
    }
}

/// Runs one point in mode `both` on the default pool.
pub fn run_point(
    s: &Surface,
    dual: &DualSurface,
    p: f64,
    trials: u64,
    master_seed: u64,
    point_index: u64,
) -> Result<PointResult, BenchmarkError> {
    Benchmark::new(s, dual, 0)?.run_point(
        p,
        trials,
        master_seed,
        point_index,
        Mode::Both,
        Control::default(),
    )
}

pub fn run_sweep(
    s: &Surface,
    dual: &DualSurface,
    config: &SweepConfig,
) -> Result<SweepResult, BenchmarkError> {
    Benchmark::new(s, dual, 0)?.run_sweep(config, Control::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_toric;

    #[test]
    fn grid_hits_both_ends() {
        let g = linear_grid(0.0, 1.0, 11).unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[10], 1.0);
        assert!((g[3] - 0.3).abs() < 1e-15);
        assert_eq!(linear_grid(0.2, 0.2, 1).unwrap(), vec![0.2]);
        assert!(linear_grid(0.5, 0.1, 3).is_err());
        assert!(linear_grid(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn config_checks() {
        let mut c = SweepConfig {
            p_values: vec![0.1, 0.2],
            trials_per_point: 1,
            master_seed: 0,
            mode: Mode::Both,
        };
        assert!(c.check().is_ok());
        c.p_values = vec![0.2, 0.1];
        assert!(c.check().is_err());
        c.p_values = vec![1.5];
        assert!(c.check().is_err());
        c.p_values = vec![];
        c.trials_per_point = 0;
        assert!(c.check().is_err());
    }

    #[test]
    fn endpoints_are_exact() {
        let (s, d) = gen_toric(3).unwrap();
        let b = Benchmark::new(&s, &d, 1).unwrap();
        let zero = b
            .run_point(0.0, 200, 5, 0, Mode::Both, Control::default())
            .unwrap();
        assert_eq!((zero.fail_any, zero.mean_erasure_weight), (0, 0.0));
        let one = b
            .run_point(1.0, 200, 5, 1, Mode::Both, Control::default())
            .unwrap();
        assert_eq!((one.fail_any, one.fail_z, one.fail_x), (200, 200, 200));
        assert_eq!(one.mean_erasure_weight, 18.0);
    }

    #[test]
    fn cancel_flag_stops_the_run() {
        let (s, d) = gen_toric(3).unwrap();
        let b = Benchmark::new(&s, &d, 1).unwrap();
        let cancel = AtomicBool::new(true);
        let control = Control {
            progress: None,
            cancel: Some(&cancel),
        };
        assert_eq!(
            b.run_point(0.5, 1000, 1, 0, Mode::Both, control),
            Err(BenchmarkError::Cancelled)
        );
    }

    #[test]
    fn progress_counts_every_trial() {
        let (s, d) = gen_toric(3).unwrap();
        let b = Benchmark::new(&s, &d, 1).unwrap();
        let progress = AtomicU64::new(0);
        let config = SweepConfig {
            p_values: vec![0.1, 0.5, 0.9],
            trials_per_point: 150,
            master_seed: 3,
            mode: Mode::Both,
        };
        b.run_sweep(
            &config,
            Control {
                progress: Some(&progress),
                cancel: None,
            },
        )
        .unwrap();
        assert_eq!(progress.load(Ordering::Relaxed), 450);
    }

    #[test]
    fn canonical_json_drops_wall_time() {
        let (s, d) = gen_toric(2).unwrap();
        let config = SweepConfig {
            p_values: vec![0.5],
            trials_per_point: 10,
            master_seed: 1,
            mode: Mode::ZOnly,
        };
        let r = run_sweep(&s, &d, &config).unwrap();
        let json = r.canonical_json();
        assert!(!json.contains("wall_time"));
        assert!(json.contains("\"mode\":\"z_only\""));
    }
}
