use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use trilevel::harness::{
    compare_scenario, emit, parse_scenario, run_scenario, sweep, EmitFormat, Mode, RunOutput,
    Scenario,
};
use trilevel::theorem::{area_theorem_refeed, conservation_residual};
use trilevel::{Error, Result, Trajectory};

#[derive(Parser)]
#[command(
    name = "trilevel",
    version,
    about = "Three-level atoms under arbitrary pulses"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RunMode {
    Analytic,
    Numeric,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for EmitFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => EmitFormat::Csv,
            Format::Json => EmitFormat::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Emit analytic and/or numeric trajectories.
    Run {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        mode: RunMode,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Output file; both-mode writes `<stem>_analytic` and `<stem>_numeric` next to it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the analytic solution against exact propagation.
    Compare {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Repeat the comparison across values of one scenario field.
    Sweep {
        #[arg(long)]
        scenario: PathBuf,
        /// Dotted field path, e.g. `pulse_s.peak_rabi`; join several with `+`.
        #[arg(long)]
        axis: String,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        values: Vec<f64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Self-consistent thin-medium run with area theorem residuals.
    Theorem {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        message: format!("cannot read {}: {e}", path.display()),
        line: None,
    })?;
    parse_scenario(&text)
}

fn open(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn sibling(out: &Path, tag: &str, format: EmitFormat) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "trajectory".into());
    out.with_file_name(format!("{stem}_{tag}.{}", format.extension()))
}

fn metadata(s: &Scenario, source: &str) -> Result<serde_json::Value> {
    Ok(json!({
        "scenario": s.to_document()?,
        "mode": s.mode,
        "source": source,
    }))
}

fn write_traj(
    traj: &Trajectory,
    format: EmitFormat,
    meta: serde_json::Value,
    out: Option<&Path>,
) -> Result<()> {
    let mut w = open(out)?;
    emit(traj, format, meta, &mut w)?;
    w.flush()?;
    Ok(())
}

fn write_table(
    format: EmitFormat,
    out: Option<&Path>,
    value: serde_json::Value,
    csv: String,
) -> Result<()> {
    let mut w = open(out)?;
    match format {
        EmitFormat::Json => {
            serde_json::to_writer_pretty(&mut w, &value)?;
            writeln!(w)?;
        }
        EmitFormat::Csv => w.write_all(csv.as_bytes())?,
    }
    w.flush()?;
    Ok(())
}

fn report_csv_rows(prefix: &str, r: &trilevel::harness::ComparisonReport) -> String {
    r.deviations
        .iter()
        .map(|d| {
            format!(
                "{prefix}{},{},{},{}\n",
                d.observable, d.max_abs, d.rms, d.t_at_max
            )
        })
        .collect()
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            scenario,
            mode,
            format,
            out,
        } => {
            let mode = match mode {
                RunMode::Analytic => Mode::Analytic,
                RunMode::Numeric => Mode::Numeric,
                RunMode::Both => Mode::Both,
            };
            let s = load(&scenario)?.with_mode(mode)?;
            let format = EmitFormat::from(format);
            match run_scenario(&s)? {
                RunOutput::Analytic(t) => {
                    write_traj(&t, format, metadata(&s, "analytic")?, out.as_deref())
                }
                RunOutput::Numeric(t) => {
                    write_traj(&t, format, metadata(&s, "numeric")?, out.as_deref())
                }
                RunOutput::Both { analytic, numeric } => {
                    let out = out.ok_or_else(|| {
                        Error::invalid("out", "both mode writes two files and needs --out")
                    })?;
                    write_traj(
                        &analytic,
                        format,
                        metadata(&s, "analytic")?,
                        Some(&sibling(&out, "analytic", format)),
                    )?;
                    write_traj(
                        &numeric,
                        format,
                        metadata(&s, "numeric")?,
                        Some(&sibling(&out, "numeric", format)),
                    )
                }
                RunOutput::Theorem(_) => unreachable!("run never selects theorem mode"),
            }
        }
        Command::Compare {
            scenario,
            format,
            out,
        } => {
            let s = load(&scenario)?;
            let report = compare_scenario(&s)?;
            let csv = format!(
                "observable,max_abs,rms,t_at_max\n{}",
                report_csv_rows("", &report)
            );
            let value = json!({ "scenario": s.to_document()?, "report": report });
            write_table(format.into(), out.as_deref(), value, csv)
        }
        Command::Sweep {
            scenario,
            axis,
            values,
            format,
            out,
        } => {
            if values.is_empty() {
                return Err(Error::invalid("values", "need at least one value"));
            }
            let s = load(&scenario)?;
            let points = sweep(&s, &axis, &values)?;
            let mut csv = String::from("value,observable,max_abs,rms,t_at_max\n");
            for p in &points {
                csv.push_str(&report_csv_rows(&format!("{},", p.value), &p.report));
            }
            let value = json!({ "scenario": s.to_document()?, "axis": axis, "points": points });
            write_table(format.into(), out.as_deref(), value, csv)
        }
        Command::Theorem {
            scenario,
            format,
            out,
        } => {
            let s = load(&scenario)?.with_mode(Mode::Theorem)?;
            let RunOutput::Theorem(run) = run_scenario(&s)? else {
                unreachable!("theorem mode yields a theorem trajectory")
            };
            let residual = conservation_residual(&run);
            let refeed = area_theorem_refeed(&run);
            let offset = refeed.first().copied().unwrap_or(0.0);
            let refeed_drift = refeed
                .iter()
                .map(|d| (d - offset).abs())
                .fold(0.0, f64::max);
            eprintln!(
                "conservation residual max = {:e}; field-energy offset C0 = {offset:e}; drift = {refeed_drift:e}",
                residual.max()
            );
            let mut meta = metadata(&s, "theorem")?;
            meta["max_conservation_residual"] = json!(residual.max());
            meta["conservation_offset"] = json!(offset);
            write_traj(&run.trajectory, format.into(), meta, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
