//! Per-round traces, lifetime metrics and the CSV trace format.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Bit-exact CSV header.
pub const CSV_HEADER: &str =
    "round,alive_normal,alive_advanced,alive_super,ch_count,sleeping,packets_round,packets_cum,residual_j";

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub round: u64,
    pub alive_normal: usize,
    pub alive_advanced: usize,
    pub alive_super: usize,
    pub ch_count: usize,
    pub sleeping: usize,
    pub packets_round: u64,
    pub packets_cum: u64,
    pub residual_j: f64,
}

impl TraceRow {
    pub fn alive(&self) -> usize {
        self.alive_normal + self.alive_advanced + self.alive_super
    }
}

/// First, half and last node death rounds. `None` if it never happened.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LifetimeSummary {
    pub fnd: Option<u64>,
    pub hnd: Option<u64>,
    pub lnd: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TraceSummary {
    pub fnd: Option<u64>,
    pub hnd: Option<u64>,
    pub lnd: Option<u64>,
    pub total_packets: u64,
    pub rounds_simulated: u64,
}

impl TraceSummary {
    pub fn lifetime(&self) -> LifetimeSummary {
        LifetimeSummary {
            fnd: self.fnd,
            hnd: self.hnd,
            lnd: self.lnd,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsTrace {
    /// Population at round 0, the reference for death thresholds.
    pub initial_nodes: usize,
    pub rows: Vec<TraceRow>,
    pub summary: TraceSummary,
}

impl MetricsTrace {
    pub fn from_rows(initial_nodes: usize, rows: Vec<TraceRow>) -> Self {
        let lifetime = lifetime_of(initial_nodes, &rows);
        let summary = TraceSummary {
            fnd: lifetime.fnd,
            hnd: lifetime.hnd,
            lnd: lifetime.lnd,
            total_packets: rows.last().map_or(0, |r| r.packets_cum),
            rounds_simulated: rows.len() as u64,
        };
        MetricsTrace {
            initial_nodes,
            rows,
            summary,
        }
    }

    /// Value of `f` at `round`; past the end of the trace the final row is
    /// held (the network state no longer changes once everyone is dead).
    pub fn held<T>(&self, round: usize, f: impl Fn(&TraceRow) -> T) -> Option<T> {
        self.rows.get(round).or(self.rows.last()).map(f)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(48 * (self.rows.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.round,
                r.alive_normal,
                r.alive_advanced,
                r.alive_super,
                r.ch_count,
                r.sleeping,
                r.packets_round,
                r.packets_cum,
                format_sig9(r.residual_j)
            );
        }
        out
    }
}

fn lifetime_of(n: usize, rows: &[TraceRow]) -> LifetimeSummary {
    let first = |pred: &dyn Fn(usize) -> bool| rows.iter().find(|r| pred(r.alive())).map(|r| r.round);
    LifetimeSummary {
        fnd: first(&|a| a < n),
        hnd: first(&|a| a <= n / 2),
        lnd: first(&|a| a == 0),
    }
}

pub fn lifetime_summary(trace: &MetricsTrace) -> Result<LifetimeSummary> {
    if trace.rows.is_empty() {
        return Err(Error::EmptyTrace);
    }
    Ok(lifetime_of(trace.initial_nodes, &trace.rows))
}

/// Formats like C's `%.9g`: nine significant digits, trailing zeros dropped,
/// exponent form outside `[1e-5, 1e9)`.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        trim_fraction(&fixed).to_string()
    } else {
        format!("{}e{}{:02}", trim_fraction(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Parses trace CSV text. `origin` is only used in error messages.
pub fn parse_csv(text: &str, origin: &Path) -> Result<Vec<TraceRow>> {
    let err = |line: usize, reason: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        reason,
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == CSV_HEADER => {}
        Some((_, h)) => return Err(err(1, format!("unexpected header `{h}`"))),
        None => return Err(err(1, "missing header".into())),
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let lineno = i + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(err(lineno, format!("expected 9 fields, found {}", fields.len())));
        }
        let int = |k: usize| -> Result<u64> {
            fields[k]
                .parse::<u64>()
                .map_err(|e| err(lineno, format!("field {}: {e}", k + 1)))
        };
        rows.push(TraceRow {
            round: int(0)?,
            alive_normal: int(1)? as usize,
            alive_advanced: int(2)? as usize,
            alive_super: int(3)? as usize,
            ch_count: int(4)? as usize,
            sleeping: int(5)? as usize,
            packets_round: int(6)?,
            packets_cum: int(7)?,
            residual_j: fields[8]
                .parse::<f64>()
                .map_err(|e| err(lineno, format!("field 9: {e}")))?,
        });
    }
    Ok(rows)
}

pub fn export_csv(trace: &MetricsTrace, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, trace.to_csv()).map_err(|e| Error::io(path, e))
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<TraceRow>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv(&text, path)
}
