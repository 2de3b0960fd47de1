//! Machine-readable reports. Field names and meanings are listed in
//! `docs/report-schema.json`; every report carries a `command` tag.

use std::fmt::Write;

use serde::Serialize;
use tversky_core::simulation::{HistogramSummary, ScoreModel, SimulationReport};
use tversky_core::{BoundIntermediates64, ConfusionCounts, TverskyParams64};

#[derive(Debug, Clone, Serialize)]
pub struct ParamsOut {
    pub a: f64,
    pub b: f64,
    /// Present when the weights came from `--beta`.
    pub beta: Option<f64>,
}

impl ParamsOut {
    pub fn new(params: &TverskyParams64, beta: Option<f64>) -> Self {
        Self {
            a: params.a(),
            b: params.b(),
            beta,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Records,
    Counts,
    Summary,
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimateOut {
    pub command: &'static str,
    pub source: Source,
    pub params: ParamsOut,
    pub n: u64,
    pub counts: Option<ConfusionCounts>,
    pub tau: f64,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CiOut {
    pub command: &'static str,
    pub source: Source,
    pub params: ParamsOut,
    pub n: u64,
    pub counts: Option<ConfusionCounts>,
    pub tau: f64,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub nu: f64,
    pub se: f64,
    pub level: f64,
    pub z: f64,
    pub half_width: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
    pub boundary: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PlanOut {
    pub command: &'static str,
    pub params: ParamsOut,
    pub delta: f64,
    pub ez: Option<f64>,
    pub v_exact: f64,
    pub v_planning: f64,
    pub required_events: u64,
    pub required_total: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundRow {
    pub max_weight: f64,
    pub c: f64,
    pub tau_o: f64,
    pub v: f64,
    /// `v` rounded to 4 decimals.
    pub v_rounded: f64,
}

impl From<&BoundIntermediates64> for BoundRow {
    fn from(b: &BoundIntermediates64) -> Self {
        Self {
            max_weight: b.max_weight,
            c: b.c,
            tau_o: b.tau_o,
            v: b.v,
            v_rounded: (b.v * 1e4).round() / 1e4,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundTableOut {
    pub command: &'static str,
    pub rows: Vec<BoundRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulationSetup {
    pub model: ScoreModel,
    pub params: ParamsOut,
    pub n: u64,
    pub replications: u64,
    pub level: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulateOut {
    pub command: &'static str,
    pub config: SimulationSetup,
    pub report: SimulationReport,
    pub histogram: HistogramSummary,
}

#[derive(Debug, Clone, Serialize)]
pub struct BootstrapCheckOut {
    pub command: &'static str,
    pub params: ParamsOut,
    pub n: u64,
    pub counts: ConfusionCounts,
    pub tau: f64,
    pub analytic_se: f64,
    pub bootstrap_se: f64,
    /// `analytic_se / bootstrap_se − 1`.
    pub relative_gap: f64,
    pub resamples: u64,
    pub skipped: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Report {
    Estimate(EstimateOut),
    Ci(CiOut),
    Plan(PlanOut),
    BoundTable(BoundTableOut),
    Simulate(SimulateOut),
    BootstrapCheck(BootstrapCheckOut),
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "n/a".to_string(), |v| format!("{v:.6}"))
}

fn params_line(p: &ParamsOut) -> String {
    match p.beta {
        Some(beta) => format!("beta = {beta} (a = {:.6}, b = {:.6})", p.a, p.b),
        None => format!("a = {}, b = {}", p.a, p.b),
    }
}

impl Report {
    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        // Writing to a String cannot fail.
        let _ = self.write_text(&mut s);
        s
    }

    fn write_text(&self, s: &mut String) -> std::fmt::Result {
        match self {
            Report::Estimate(r) => {
                writeln!(s, "weights:    {}", params_line(&r.params))?;
                writeln!(s, "n:          {}", r.n)?;
                writeln!(s, "index:      {:.6}", r.tau)?;
                writeln!(s, "precision:  {}", opt(r.precision))?;
                writeln!(s, "recall:     {}", opt(r.recall))?;
            }
            Report::Ci(r) => {
                writeln!(s, "weights:    {}", params_line(&r.params))?;
                writeln!(s, "n:          {}", r.n)?;
                writeln!(s, "index:      {:.6}", r.tau)?;
                if r.precision.is_some() {
                    writeln!(s, "precision:  {}", opt(r.precision))?;
                    writeln!(s, "recall:     {}", opt(r.recall))?;
                }
                writeln!(s, "variance:   {:.6}", r.nu)?;
                writeln!(s, "std error:  {:.6}", r.se)?;
                writeln!(
                    s,
                    "{:.1}% CI:   {:.6} ± {:.6} = [{:.6}, {:.6}]",
                    r.level * 100.0,
                    r.tau,
                    r.half_width,
                    r.ci_lower,
                    r.ci_upper
                )?;
            }
            Report::Plan(r) => {
                writeln!(s, "weights:          {}", params_line(&r.params))?;
                writeln!(s, "target std error: {}", r.delta)?;
                writeln!(s, "V (exact):        {:.6}", r.v_exact)?;
                writeln!(s, "V (planning):     {:.4}", r.v_planning)?;
                writeln!(s, "events (Z = 1):   {}", r.required_events)?;
                if let (Some(ez), Some(total)) = (r.ez, r.required_total) {
                    writeln!(s, "total at EZ = {ez}: {total}")?;
                }
            }
            Report::BoundTable(r) => {
                writeln!(s, "max(a,b)  V(max(a,b))  tau_o")?;
                for row in &r.rows {
                    writeln!(
                        s,
                        "{:<8.1}  {:<11.4}  {:.6}",
                        row.max_weight, row.v, row.tau_o
                    )?;
                }
            }
            Report::Simulate(r) => {
                let (c, rep) = (&r.config, &r.report);
                writeln!(
                    s,
                    "model:          p_z = {}, mu = {}, threshold = {}",
                    c.model.p_z, c.model.mu, c.model.threshold
                )?;
                writeln!(s, "weights:        {}", params_line(&c.params))?;
                writeln!(
                    s,
                    "design:         n = {}, replications = {}, seed = {}",
                    c.n, c.replications, c.seed
                )?;
                writeln!(s, "true index:     {:.7}", rep.true_tau)?;
                writeln!(s, "mean estimate:  {:.7}", rep.mean_estimate)?;
                writeln!(s, "sd estimates:   {:.8}", rep.sd_estimates)?;
                writeln!(s, "mean std error: {:.8}", rep.mean_se)?;
                writeln!(
                    s,
                    "coverage:       {}/{} = {:.4} at level {}",
                    rep.covered, rep.valid_replications, rep.coverage, c.level
                )?;
                writeln!(s, "degenerate:     {}", rep.degenerate_count)?;
                writeln!(s, "skewness:       {}", opt(r.histogram.skewness))?;
                writeln!(s, "excess kurt.:   {}", opt(r.histogram.excess_kurtosis))?;
            }
            Report::BootstrapCheck(r) => {
                writeln!(s, "weights:       {}", params_line(&r.params))?;
                writeln!(s, "n:             {}", r.n)?;
                writeln!(s, "index:         {:.6}", r.tau)?;
                writeln!(s, "analytic se:   {:.6}", r.analytic_se)?;
                writeln!(
                    s,
                    "bootstrap se:  {:.6} ({} resamples, {} skipped)",
                    r.bootstrap_se, r.resamples, r.skipped
                )?;
                writeln!(s, "relative gap:  {:+.4}", r.relative_gap)?;
            }
        }
        Ok(())
    }
}
