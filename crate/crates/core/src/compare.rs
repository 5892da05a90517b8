//! Protocol comparisons, multi-seed sweeps and plot-data output.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::engine::{run_simulation, SimulationConfig};
use crate::error::{Error, Result};
use crate::metrics::{format_sig9, MetricsTrace};
use crate::protocol::ProtocolKind;

/// A finished run together with the configuration that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub config: SimulationConfig,
    pub trace: MetricsTrace,
}

impl RunResult {
    pub fn run(config: SimulationConfig) -> Result<Self> {
        let trace = run_simulation(&config)?;
        Ok(RunResult { config, trace })
    }
}

/// Runs every (protocol, seed) cell of `base` in parallel. Results come back
/// protocol-major in the order given.
pub fn sweep(
    base: &SimulationConfig,
    protocols: &[ProtocolKind],
    seeds: &[u64],
) -> Vec<(ProtocolKind, u64, Result<RunResult>)> {
    let cells: Vec<(ProtocolKind, u64)> = protocols
        .iter()
        .flat_map(|&p| seeds.iter().map(move |&s| (p, s)))
        .collect();
    cells
        .into_par_iter()
        .map(|(protocol, seed)| {
            let cfg = SimulationConfig {
                protocol,
                seed,
                ..base.clone()
            };
            (protocol, seed, RunResult::run(cfg))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundDiff {
    pub round: u64,
    pub alive_a: usize,
    pub alive_b: usize,
    pub residual_a: f64,
    pub residual_b: f64,
    pub packets_cum_a: u64,
    pub packets_cum_b: u64,
}

/// Head-to-head comparison of two runs that differ only in protocol.
/// Deltas are `a − b`; a lifetime delta is `None` when either side is undefined.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub protocol_a: ProtocolKind,
    pub protocol_b: ProtocolKind,
    pub fnd_delta: Option<i64>,
    pub hnd_delta: Option<i64>,
    pub lnd_delta: Option<i64>,
    pub packets_delta: i64,
    pub per_round: Vec<RoundDiff>,
}

fn delta(a: Option<u64>, b: Option<u64>) -> Option<i64> {
    Some(a? as i64 - b? as i64)
}

pub fn compare_summaries(a: &RunResult, b: &RunResult) -> Result<ComparisonReport> {
    let aligned = SimulationConfig {
        protocol: b.config.protocol,
        ..a.config.clone()
    };
    if aligned != b.config {
        return Err(Error::Mismatch(
            "configurations differ in more than the protocol".into(),
        ));
    }
    let (sa, sb) = (&a.trace.summary, &b.trace.summary);
    let len = a.trace.rows.len().max(b.trace.rows.len());
    let per_round = (0..len)
        .map(|i| RoundDiff {
            round: i as u64,
            alive_a: a.trace.held(i, |r| r.alive()).unwrap_or(0),
            alive_b: b.trace.held(i, |r| r.alive()).unwrap_or(0),
            residual_a: a.trace.held(i, |r| r.residual_j).unwrap_or(0.0),
            residual_b: b.trace.held(i, |r| r.residual_j).unwrap_or(0.0),
            packets_cum_a: a.trace.held(i, |r| r.packets_cum).unwrap_or(0),
            packets_cum_b: b.trace.held(i, |r| r.packets_cum).unwrap_or(0),
        })
        .collect();
    Ok(ComparisonReport {
        protocol_a: a.config.protocol,
        protocol_b: b.config.protocol,
        fnd_delta: delta(sa.fnd, sb.fnd),
        hnd_delta: delta(sa.hnd, sb.hnd),
        lnd_delta: delta(sa.lnd, sb.lnd),
        packets_delta: sa.total_packets as i64 - sb.total_packets as i64,
        per_round,
    })
}

impl ComparisonReport {
    pub fn render(&self) -> String {
        let show = |d: Option<i64>| d.map_or("undefined".to_string(), |v| format!("{v:+}"));
        let mut out = String::new();
        let _ = writeln!(out, "{} vs {}", self.protocol_a, self.protocol_b);
        let _ = writeln!(out, "fnd delta      {}", show(self.fnd_delta));
        let _ = writeln!(out, "hnd delta      {}", show(self.hnd_delta));
        let _ = writeln!(out, "lnd delta      {}", show(self.lnd_delta));
        let _ = writeln!(out, "packets delta  {:+}", self.packets_delta);
        out
    }

    /// Per-round alive, residual and throughput columns for both runs.
    pub fn write_plot_data(&self, path: impl AsRef<Path>) -> Result<()> {
        let a = self.protocol_a.name();
        let b = self.protocol_b.name();
        let header = [
            "round".to_string(),
            format!("alive_{a}"),
            format!("alive_{b}"),
            format!("residual_{a}"),
            format!("residual_{b}"),
            format!("packets_cum_{a}"),
            format!("packets_cum_{b}"),
        ];
        let rows = self.per_round.iter().map(|d| {
            vec![
                d.round.to_string(),
                d.alive_a.to_string(),
                d.alive_b.to_string(),
                format_sig9(d.residual_a),
                format_sig9(d.residual_b),
                d.packets_cum_a.to_string(),
                d.packets_cum_b.to_string(),
            ]
        });
        write_columns(path, &header, rows)
    }
}

/// Writes whitespace-separated columns under a `#`-prefixed header.
pub fn write_columns<I, S>(path: impl AsRef<Path>, header: &[S], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
    S: AsRef<str>,
{
    let path = path.as_ref();
    let mut out = String::from("#");
    for h in header {
        out.push(' ');
        out.push_str(h.as_ref());
    }
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Sample mean and (n − 1) standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
    pub count: usize,
}

pub fn mean_std(values: &[f64]) -> Option<MeanStd> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    Some(MeanStd {
        mean,
        std,
        count: values.len(),
    })
}

/// Cross-seed statistics for one protocol. Lifetime statistics are taken
/// over runs where the event happened; `censored` counts the rest.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateSummary {
    pub runs: usize,
    pub fnd: Option<MeanStd>,
    pub hnd: Option<MeanStd>,
    pub lnd: Option<MeanStd>,
    pub total_packets: Option<MeanStd>,
    pub censored_lnd: usize,
}

pub fn aggregate<'a>(traces: impl IntoIterator<Item = &'a MetricsTrace>) -> AggregateSummary {
    let traces: Vec<&MetricsTrace> = traces.into_iter().collect();
    let collect = |f: &dyn Fn(&MetricsTrace) -> Option<u64>| -> Vec<f64> {
        traces.iter().filter_map(|t| f(t)).map(|v| v as f64).collect()
    };
    let lnd = collect(&|t| t.summary.lnd);
    AggregateSummary {
        runs: traces.len(),
        fnd: mean_std(&collect(&|t| t.summary.fnd)),
        hnd: mean_std(&collect(&|t| t.summary.hnd)),
        censored_lnd: traces.len() - lnd.len(),
        lnd: mean_std(&lnd),
        total_packets: mean_std(&collect(&|t| Some(t.summary.total_packets))),
    }
}

/// Per-round means across seeds, each trace held at its final row once it ends.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanCurve {
    pub alive: Vec<f64>,
    pub residual: Vec<f64>,
    pub packets_cum: Vec<f64>,
    pub ch_count: Vec<f64>,
}

pub fn mean_curve(traces: &[&MetricsTrace], rounds: usize) -> MeanCurve {
    let n = traces.len().max(1) as f64;
    let avg = |i: usize, f: &dyn Fn(&crate::metrics::TraceRow) -> f64| {
        traces.iter().filter_map(|t| t.held(i, f)).sum::<f64>() / n
    };
    let mut c = MeanCurve {
        alive: Vec::with_capacity(rounds),
        residual: Vec::with_capacity(rounds),
        packets_cum: Vec::with_capacity(rounds),
        ch_count: Vec::with_capacity(rounds),
    };
    for i in 0..rounds {
        c.alive.push(avg(i, &|r| r.alive() as f64));
        c.residual.push(avg(i, &|r| r.residual_j));
        c.packets_cum.push(avg(i, &|r| r.packets_cum as f64));
        // a finished run has no heads
        c.ch_count.push(
            traces
                .iter()
                .filter_map(|t| t.rows.get(i).map(|r| r.ch_count as f64))
                .sum::<f64>()
                / n,
        );
    }
    c
}

/// First round from which `a`'s residual energy is never below `b`'s and is
/// strictly above it at least once. `None` if `a` never dominates.
pub fn residual_dominance(a: &MetricsTrace, b: &MetricsTrace) -> Option<u64> {
    let len = a.rows.len().max(b.rows.len());
    let res = |t: &MetricsTrace, i| t.held(i, |r| r.residual_j).unwrap_or(0.0);
    let mut start = None;
    let mut strict_since_start = false;
    for i in 0..len {
        let (ra, rb) = (res(a, i), res(b, i));
        if ra < rb {
            start = None;
            strict_since_start = false;
        } else {
            if start.is_none() {
                start = Some(i as u64);
            }
            strict_since_start |= ra > rb;
        }
    }
    start.filter(|_| strict_since_start)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::TraceRow;

    fn trace(residuals: &[f64]) -> MetricsTrace {
        let rows = residuals
            .iter()
            .enumerate()
            .map(|(i, &r)| TraceRow {
                round: i as u64,
                alive_normal: if r > 0.0 { 1 } else { 0 },
                alive_advanced: 0,
                alive_super: 0,
                ch_count: 0,
                sleeping: 0,
                packets_round: 1,
                packets_cum: i as u64 + 1,
                residual_j: r,
            })
            .collect();
        MetricsTrace::from_rows(1, rows)
    }

    #[test]
    fn mean_std_hand_example() {
        // three seeds with lnd 10, 12, 17: mean 13, var (9 + 1 + 16)/2 = 13
        let s = mean_std(&[10.0, 12.0, 17.0]).unwrap();
        assert_eq!(s.mean, 13.0);
        assert!((s.std - 13f64.sqrt()).abs() < 1e-15);
        assert_eq!(s.count, 3);
        assert_eq!(mean_std(&[4.0]).unwrap().std, 0.0);
        assert!(mean_std(&[]).is_none());
    }

    #[test]
    fn aggregate_skips_censored() {
        let a = trace(&[1.0, 0.5, 0.0]);
        let b = trace(&[1.0, 0.9, 0.8, 0.7]);
        let agg = aggregate([&a, &b]);
        assert_eq!(agg.runs, 2);
        assert_eq!(agg.censored_lnd, 1);
        assert_eq!(agg.lnd.unwrap().mean, 2.0);
        assert_eq!(agg.total_packets.unwrap().mean, 3.5);
    }

    #[test]
    fn dominance() {
        let a = trace(&[1.0, 0.9, 0.8, 0.7, 0.6]);
        let b = trace(&[1.0, 0.95, 0.7, 0.0]);
        assert_eq!(residual_dominance(&a, &b), Some(2));
        assert_eq!(residual_dominance(&b, &a), None);
        assert_eq!(residual_dominance(&a, &a), None);
    }

    #[test]
    fn mean_curve_holds_finished_runs() {
        let a = trace(&[2.0, 0.0]);
        let b = trace(&[4.0, 2.0, 1.0]);
        let c = mean_curve(&[&a, &b], 3);
        assert_eq!(c.residual, vec![3.0, 1.0, 0.5]);
        assert_eq!(c.packets_cum, vec![1.0, 2.0, 2.5]);
    }
}
