//! Scaling measurements: one tuple per directed edge against one angle per
//! two-hop triplet.
//!
//! Tuple counts are exact. Wall times cover featurization only (the tuple
//! transform versus the two-hop geometry pass), not network layers or
//! training, and are the median of the timed repetitions after one
//! discarded warm-up run.

mod counts;
mod fit;
mod generators;

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

pub use counts::{comenet_count, dmp_baseline_count, dmp_geometry_pass, torsion_count_comparison};
pub use fit::{fit_power_law, ExponentFit};
pub use generators::{mean_degree, BenchScenario, Generator, DEGREE_BAND};

use crate::error::{Error, Result};
use crate::geometry::transform;
use crate::graph::Graph3D;

pub const REPORT_HEADER: &str = "featurization-only timing: tuple transform vs two-hop geometry pass; \
network layers, backpropagation and data loading are not measured";

pub const DEFAULT_REPETITIONS: usize = 7;

/// Median wall time in seconds of `f` over `repetitions` runs after one
/// warm-up, plus the raw samples.
pub fn time_median<T>(repetitions: usize, mut f: impl FnMut() -> T) -> (f64, Vec<f64>) {
    std::hint::black_box(f());
    let mut samples: Vec<f64> = (0..repetitions.max(1))
        .map(|_| {
            let start = Instant::now();
            std::hint::black_box(f());
            start.elapsed().as_secs_f64()
        })
        .collect();
    let raw = samples.clone();
    samples.sort_unstable_by(f64::total_cmp);
    let mid = samples.len() / 2;
    let median = if samples.len() % 2 == 1 {
        samples[mid]
    } else {
        0.5 * (samples[mid - 1] + samples[mid])
    };
    (median, raw)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub comenet_s: f64,
    pub dmp_s: f64,
    /// `dmp_s / comenet_s`.
    pub ratio: f64,
    pub comenet_samples: Vec<f64>,
    pub dmp_samples: Vec<f64>,
}

/// Times the tuple transform and the two-hop pass on the same graph.
pub fn time_featurization(g: &Graph3D, repetitions: usize) -> Result<Timing> {
    transform(g)?;
    let (comenet_s, comenet_samples) = time_median(repetitions, || transform(g).map(|ts| ts.len()));
    let (dmp_s, dmp_samples) = time_median(repetitions, || dmp_geometry_pass(g));
    Ok(Timing {
        comenet_s,
        dmp_s,
        ratio: dmp_s / comenet_s,
        comenet_samples,
        dmp_samples,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioResult {
    pub scenario: BenchScenario,
    pub achieved_degree: f64,
    pub comenet_count: u64,
    pub dmp_count: u64,
    pub timing: Option<Timing>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepFit {
    /// `"n"` or `"k"`.
    pub variable: String,
    pub comenet_count: ExponentFit,
    pub dmp_count: ExponentFit,
    pub comenet_time: Option<ExponentFit>,
    pub dmp_time: Option<ExponentFit>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorsionRow {
    pub n1: u64,
    pub n2: u64,
    pub ours: u64,
    pub pairwise: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub header: String,
    pub n_sweep: Vec<ScenarioResult>,
    pub k_sweep: Vec<ScenarioResult>,
    pub fits: Vec<SweepFit>,
    pub torsion: Vec<TorsionRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingPlan {
    pub generator: Generator,
    /// Sizes for the sweep in `n` at degree `k_fixed`.
    pub n_values: Vec<usize>,
    pub k_fixed: usize,
    /// Degrees for the sweep in `k` at size `n_fixed`.
    pub k_values: Vec<usize>,
    pub n_fixed: usize,
    pub seed: u64,
    pub repetitions: usize,
    pub timing: bool,
    pub parallel_counts: bool,
}

impl Default for ScalingPlan {
    fn default() -> Self {
        Self {
            generator: Generator::Chain,
            n_values: vec![1000, 2000, 4000, 8000],
            k_fixed: 8,
            k_values: vec![8, 16, 32, 64],
            n_fixed: 2000,
            seed: 0,
            repetitions: DEFAULT_REPETITIONS,
            timing: true,
            parallel_counts: false,
        }
    }
}

impl ScalingPlan {
    fn scenarios(&self, sweep_n: bool) -> Vec<BenchScenario> {
        let make = |n, k| BenchScenario {
            generator: self.generator,
            n,
            target_degree: k,
            seed: self.seed,
            repetitions: self.repetitions,
        };
        if sweep_n {
            self.n_values.iter().map(|&n| make(n, self.k_fixed)).collect()
        } else {
            self.k_values.iter().map(|&k| make(self.n_fixed, k)).collect()
        }
    }
}

fn count_scenario(s: &BenchScenario) -> Result<(Graph3D, ScenarioResult)> {
    let g = s.generate()?;
    let result = ScenarioResult {
        scenario: *s,
        achieved_degree: mean_degree(&g),
        comenet_count: comenet_count(&g),
        dmp_count: dmp_baseline_count(&g),
        timing: None,
    };
    Ok((g, result))
}

fn run_sweep(plan: &ScalingPlan, sweep_n: bool) -> Result<Vec<ScenarioResult>> {
    let scenarios = plan.scenarios(sweep_n);
    let counted: Vec<(Graph3D, ScenarioResult)> = if plan.parallel_counts {
        scenarios.par_iter().map(count_scenario).collect::<Result<_>>()?
    } else {
        scenarios.iter().map(count_scenario).collect::<Result<_>>()?
    };
    let mut results = Vec::with_capacity(counted.len());
    for (g, mut r) in counted {
        if plan.timing {
            r.timing = Some(time_featurization(&g, plan.repetitions)?);
        }
        results.push(r);
    }
    Ok(results)
}

fn fit_sweep(results: &[ScenarioResult], variable: &str) -> Result<SweepFit> {
    let xs: Vec<f64> = results
        .iter()
        .map(|r| {
            if variable == "n" {
                r.scenario.n as f64
            } else {
                r.achieved_degree
            }
        })
        .collect();
    let series = |f: &dyn Fn(&ScenarioResult) -> f64| -> Vec<f64> { results.iter().map(f).collect() };
    let timed = results.iter().all(|r| r.timing.is_some());
    let time_fit = |f: &dyn Fn(&Timing) -> f64| -> Result<Option<ExponentFit>> {
        if !timed {
            return Ok(None);
        }
        let ys = series(&|r| f(r.timing.as_ref().expect("checked")));
        fit_power_law(&xs, &ys).map(Some)
    };
    Ok(SweepFit {
        variable: variable.to_string(),
        comenet_count: fit_power_law(&xs, &series(&|r| r.comenet_count as f64))?,
        dmp_count: fit_power_law(&xs, &series(&|r| r.dmp_count as f64))?,
        comenet_time: time_fit(&|t| t.comenet_s)?,
        dmp_time: time_fit(&|t| t.dmp_s)?,
    })
}

/// Runs both sweeps and fits exponents. Each sweep needs at least four
/// sizes.
pub fn run_scaling(plan: &ScalingPlan) -> Result<BenchReport> {
    if plan.n_values.len() < 4 || plan.k_values.len() < 4 {
        return Err(Error::invalid("sweep", "each sweep needs at least four sizes"));
    }
    let n_sweep = run_sweep(plan, true)?;
    let k_sweep = run_sweep(plan, false)?;
    let fits = vec![fit_sweep(&n_sweep, "n")?, fit_sweep(&k_sweep, "k")?];
    let torsion = [(1, 1), (3, 3), (10, 10)]
        .into_iter()
        .map(|(n1, n2)| {
            let (ours, pairwise) = torsion_count_comparison(n1, n2);
            TorsionRow { n1, n2, ours, pairwise }
        })
        .collect();
    Ok(BenchReport {
        header: REPORT_HEADER.to_string(),
        n_sweep,
        k_sweep,
        fits,
        torsion,
    })
}

impl BenchReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Human-readable summary.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.header);
        let _ = writeln!(
            out,
            "{:<11} {:>7} {:>4} {:>7} {:>10} {:>12} {:>11} {:>11} {:>7}",
            "generator", "n", "k", "deg", "tuples", "triplets", "comenet_s", "dmp_s", "ratio"
        );
        for r in self.n_sweep.iter().chain(&self.k_sweep) {
            let (c, d, ratio) = match &r.timing {
                Some(t) => (
                    format!("{:.3e}", t.comenet_s),
                    format!("{:.3e}", t.dmp_s),
                    format!("{:.2}", t.ratio),
                ),
                None => ("-".into(), "-".into(), "-".into()),
            };
            let _ = writeln!(
                out,
                "{:<11} {:>7} {:>4} {:>7.2} {:>10} {:>12} {:>11} {:>11} {:>7}",
                r.scenario.generator.to_string(),
                r.scenario.n,
                r.scenario.target_degree,
                r.achieved_degree,
                r.comenet_count,
                r.dmp_count,
                c,
                d,
                ratio
            );
        }
        for f in &self.fits {
            let show = |fit: &ExponentFit| format!("{:.3} [{:.3}, {:.3}]", fit.exponent, fit.ci_low, fit.ci_high);
            let _ = writeln!(
                out,
                "exponent vs {}: tuples {}  triplets {}",
                f.variable,
                show(&f.comenet_count),
                show(&f.dmp_count)
            );
            if let (Some(c), Some(d)) = (&f.comenet_time, &f.dmp_time) {
                let _ = writeln!(out, "  time vs {}: comenet {}  dmp {}", f.variable, show(c), show(d));
            }
        }
        for t in &self.torsion {
            let _ = writeln!(
                out,
                "torsions for groups ({}, {}): ours {}  pairwise {}",
                t.n1, t.n2, t.ours, t.pairwise
            );
        }
        out
    }

    /// Raw timing samples: `sweep,generator,n,k,method,rep,seconds`.
    pub fn samples_csv(&self) -> String {
        let mut out = String::from("sweep,generator,n,k,method,rep,seconds\n");
        for (sweep, results) in [("n", &self.n_sweep), ("k", &self.k_sweep)] {
            for r in results {
                let Some(t) = &r.timing else { continue };
                for (method, samples) in [("comenet", &t.comenet_samples), ("dmp", &t.dmp_samples)] {
                    for (rep, s) in samples.iter().enumerate() {
                        let _ = writeln!(
                            out,
                            "{sweep},{},{},{},{method},{rep},{s:.9e}",
                            r.scenario.generator, r.scenario.n, r.scenario.target_degree
                        );
                    }
                }
            }
        }
        out
    }
}
