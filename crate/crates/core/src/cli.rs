//! The `meecda` command line.
//!
//! ```text
//! meecda run     [--preset case1|case2] [--config FILE] [--protocol P] [--seed S] [--rounds N] [--out DIR]
//! meecda compare [--preset case1|case2] [--config FILE] [--protocol P,Q,...] [--seeds N | --seed S] [--rounds N] [--out DIR]
//! ```
//!
//! Outputs land in `<out>/<protocol>/<seed>/trace.csv`; `run` adds a
//! `summary.txt` next to the trace, `compare` writes `<out>/report.txt` and
//! plot-data files under `<out>/plots/`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::compare::{aggregate, compare_summaries, mean_curve, residual_dominance, sweep, write_columns, MeanStd, RunResult};
use crate::error::{Error, Result};
use crate::metrics::{export_csv, format_sig9, MetricsTrace, TraceSummary};
use crate::protocol::ProtocolKind;
use crate::scenario::{Overrides, Scenario, ScenarioFile};
use crate::engine::SimulationConfig;

#[derive(Debug, Parser)]
#[command(name = "meecda", version, about = "Heterogeneous WSN clustering simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one simulation and write its trace.
    Run(CommonArgs),
    /// Run every protocol × seed cell and write a comparison report.
    Compare(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Built-in parameter set (case1, case2).
    #[arg(long)]
    pub preset: Option<String>,
    /// TOML scenario file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Protocol(s): meecda, eecda-approx, leach. Repeat or comma-separate.
    #[arg(long, value_delimiter = ',')]
    pub protocol: Vec<ProtocolKind>,
    #[arg(long, conflicts_with = "seeds")]
    pub seed: Option<u64>,
    /// Use seeds 0..N.
    #[arg(long)]
    pub seeds: Option<u64>,
    /// Maximum number of rounds.
    #[arg(long)]
    pub rounds: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl CommonArgs {
    pub fn scenario(&self) -> Result<Scenario> {
        let file = self.config.as_ref().map(ScenarioFile::load).transpose()?;
        let flags = Overrides {
            preset: self.preset.clone(),
            protocols: self.protocol.clone(),
            seed: self.seed,
            seed_count: self.seeds,
            max_rounds: self.rounds,
            out: self.out.clone(),
        };
        Scenario::resolve(file.as_ref(), &flags)
    }
}

pub fn cell_dir(out: &Path, protocol: ProtocolKind, seed: u64) -> PathBuf {
    out.join(protocol.name()).join(seed.to_string())
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn show(v: Option<u64>) -> String {
    v.map_or_else(|| "undefined".into(), |v| v.to_string())
}

pub fn render_summary(cfg: &SimulationConfig, s: &TraceSummary) -> String {
    format!(
        "protocol {}\nseed {}\nfnd {}\nhnd {}\nlnd {}\ntotal_packets {}\nrounds {}\n",
        cfg.protocol,
        cfg.seed,
        show(s.fnd),
        show(s.hnd),
        show(s.lnd),
        s.total_packets,
        s.rounds_simulated
    )
}

/// Runs a single simulation. Returns the printed summary.
pub fn cmd_run(scenario: &Scenario) -> Result<String> {
    if scenario.protocols_explicit && scenario.protocols.len() != 1 {
        return Err(Error::config("protocol", "run takes exactly one protocol"));
    }
    if scenario.seeds.len() != 1 {
        return Err(Error::config("seeds", "run takes exactly one seed"));
    }
    let cfg = &scenario.config;
    let result = RunResult::run(cfg.clone())?;
    let dir = cell_dir(&scenario.out, cfg.protocol, cfg.seed);
    create_dir(&dir)?;
    export_csv(&result.trace, dir.join("trace.csv"))?;
    let summary = render_summary(cfg, &result.trace.summary);
    let path = dir.join("summary.txt");
    fs::write(&path, &summary).map_err(|e| Error::io(&path, e))?;
    Ok(summary)
}

/// What `compare` produced.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareOutcome {
    pub report: String,
    pub trace_files: Vec<PathBuf>,
    pub failed: Vec<(ProtocolKind, u64, String)>,
}

fn fmt_stat(s: Option<MeanStd>) -> String {
    match s {
        Some(s) => format!("{:.1} ± {:.1} (n={})", s.mean, s.std, s.count),
        None => "undefined".into(),
    }
}

/// Runs all protocol × seed cells and writes traces, report and plot data.
pub fn cmd_compare(scenario: &Scenario) -> Result<CompareOutcome> {
    if scenario.protocols.len() < 2 {
        return Err(Error::config("protocols", "compare requires ≥2 protocols"));
    }
    let protocols = &scenario.protocols;
    let cells = sweep(&scenario.config, protocols, &scenario.seeds);

    let mut trace_files = Vec::new();
    let mut failed = Vec::new();
    let mut done: Vec<(ProtocolKind, u64, RunResult)> = Vec::new();
    for (protocol, seed, result) in cells {
        match result {
            Ok(run) => {
                let dir = cell_dir(&scenario.out, protocol, seed);
                create_dir(&dir)?;
                let path = dir.join("trace.csv");
                export_csv(&run.trace, &path)?;
                trace_files.push(path);
                done.push((protocol, seed, run));
            }
            Err(e) => failed.push((protocol, seed, e.to_string())),
        }
    }

    let traces_of = |p: ProtocolKind| -> Vec<&MetricsTrace> {
        done.iter().filter(|c| c.0 == p).map(|c| &c.2.trace).collect()
    };

    let mut report = String::new();
    let cfg = &scenario.config;
    let _ = writeln!(
        report,
        "# comparison: n={} m={} m0={} alpha={} beta={} e0={} p_opt={} seeds={}",
        cfg.het.n,
        cfg.het.m,
        cfg.het.m0,
        cfg.het.alpha,
        cfg.het.beta,
        cfg.het.e0,
        cfg.het.p_opt,
        scenario.seeds.len()
    );
    let _ = writeln!(report);
    for &p in protocols {
        let agg = aggregate(traces_of(p));
        let _ = writeln!(report, "[{p}] runs={}", agg.runs);
        let _ = writeln!(report, "  fnd            {}", fmt_stat(agg.fnd));
        let _ = writeln!(report, "  hnd            {}", fmt_stat(agg.hnd));
        let _ = writeln!(report, "  lnd            {} censored={}", fmt_stat(agg.lnd), agg.censored_lnd);
        let _ = writeln!(report, "  mean lnd       {}", agg.lnd.map_or("undefined".into(), |s| format!("{:.1}", s.mean)));
        let _ = writeln!(report, "  total_packets  {}", fmt_stat(agg.total_packets));
    }

    let reference = protocols[0];
    for &other in &protocols[1..] {
        let _ = writeln!(report);
        let _ = writeln!(report, "[{reference} vs {other}] per seed (deltas are {reference} − {other})");
        let _ = writeln!(report, "  seed  fnd  hnd  lnd  packets  residual_dominates_from");
        for &seed in &scenario.seeds {
            let find = |p| done.iter().find(|c| c.0 == p && c.1 == seed).map(|c| &c.2);
            let (Some(a), Some(b)) = (find(reference), find(other)) else {
                continue;
            };
            let cmp = compare_summaries(a, b)?;
            let d = |v: Option<i64>| v.map_or("-".into(), |v| format!("{v:+}"));
            let dom = residual_dominance(&a.trace, &b.trace).map_or("-".into(), |r| r.to_string());
            let _ = writeln!(
                report,
                "  {seed}  {}  {}  {}  {:+}  {dom}",
                d(cmp.fnd_delta),
                d(cmp.hnd_delta),
                d(cmp.lnd_delta),
                cmp.packets_delta
            );
        }
    }
    if !failed.is_empty() {
        let _ = writeln!(report);
        let _ = writeln!(report, "[failed cells]");
        for (p, s, e) in &failed {
            let _ = writeln!(report, "  {p} seed {s}: {e}");
        }
    }

    create_dir(&scenario.out)?;
    let path = scenario.out.join("report.txt");
    fs::write(&path, &report).map_err(|e| Error::io(&path, e))?;
    write_plots(&scenario.out.join("plots"), protocols, &traces_of)?;

    Ok(CompareOutcome {
        report,
        trace_files,
        failed,
    })
}

fn write_plots<'a>(
    dir: &Path,
    protocols: &[ProtocolKind],
    traces_of: &dyn Fn(ProtocolKind) -> Vec<&'a MetricsTrace>,
) -> Result<()> {
    create_dir(dir)?;
    let rounds = protocols
        .iter()
        .flat_map(|&p| traces_of(p))
        .map(|t| t.rows.len())
        .max()
        .unwrap_or(0);
    let curves: Vec<_> = protocols
        .iter()
        .map(|&p| mean_curve(&traces_of(p), rounds))
        .collect();
    let mut header = vec!["round".to_string()];
    header.extend(protocols.iter().map(|p| p.name().to_string()));

    type Series = fn(&crate::compare::MeanCurve) -> &Vec<f64>;
    let series: [(&str, Series); 4] = [
        ("alive.dat", |c| &c.alive),
        ("throughput.dat", |c| &c.packets_cum),
        ("residual.dat", |c| &c.residual),
        ("ch_count.dat", |c| &c.ch_count),
    ];
    for (file, pick) in series {
        let rows = (0..rounds).map(|i| {
            let mut row = vec![i.to_string()];
            row.extend(curves.iter().map(|c| format_sig9(pick(c)[i])));
            row
        });
        write_columns(dir.join(file), &header, rows)?;
    }

    let mut header = vec!["metric".to_string()];
    header.extend(protocols.iter().map(|p| p.name().to_string()));
    let aggs: Vec<_> = protocols.iter().map(|&p| aggregate(traces_of(p))).collect();
    let bars = [
        ("fnd", aggs.iter().map(|a| a.fnd).collect::<Vec<_>>()),
        ("hnd", aggs.iter().map(|a| a.hnd).collect()),
        ("lnd", aggs.iter().map(|a| a.lnd).collect()),
    ]
    .into_iter()
    .map(|(name, stats)| {
        let mut row = vec![name.to_string()];
        row.extend(stats.iter().map(|s| s.map_or("nan".into(), |s| format_sig9(s.mean))));
        row
    });
    write_columns(dir.join("lifetime.dat"), &header, bars)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_cli<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let mut stdout = std::io::stdout().lock();
    let result = match &cli.command {
        Command::Run(args) => args.scenario().and_then(|s| cmd_run(&s)).map(|summary| {
            let _ = stdout.write_all(summary.as_bytes());
            true
        }),
        Command::Compare(args) => args.scenario().and_then(|s| cmd_compare(&s)).map(|out| {
            let _ = stdout.write_all(out.report.as_bytes());
            for (p, s, e) in &out.failed {
                eprintln!("error: {p} seed {s}: {e}");
            }
            out.failed.is_empty()
        }),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
