use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use avspoof_sim::config::{ScenarioConfig, ScenarioKind};
use avspoof_sim::cost::{self, AircraftType, CostEvent};
use avspoof_sim::detect::{self, DetectConfig, DetectionStats};
use avspoof_sim::{emit, summary, Runner, SimError};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "avspoof",
    version,
    about = "Monte-Carlo simulation of wireless attacks on approach and en-route avionics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write logs, summary and report.
    Run {
        /// Scenario configuration (JSON).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Scenario to run with default settings, or to override the config's.
        #[arg(long, value_enum, ignore_case = true)]
        scenario: Option<ScenarioKind>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory [default: the config's, else ./out].
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record every surveillance message (TCAS).
        #[arg(long)]
        messages: bool,
        /// State sample interval in seconds for altitude traces.
        #[arg(long)]
        trace_interval: Option<f64>,
    },
    /// Summarize existing trial logs.
    Summarize {
        /// Directory of trial logs (or a run directory containing logs/).
        logs: PathBuf,
        /// Write summary.csv, summary.json and report.txt here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fuel cost of a disruption.
    Cost {
        /// B737_800 or B777_200; all types when omitted.
        #[arg(long)]
        aircraft: Option<String>,
        /// MISSED_APPROACH, SECOND_APPROACH or DIVERSION; all when omitted.
        #[arg(long)]
        event: Option<String>,
        /// US cents per gallon.
        #[arg(long, default_value_t = cost::DEFAULT_PRICE_CENTS_PER_GAL)]
        price: f64,
        /// kg per US gallon.
        #[arg(long, default_value_t = cost::DEFAULT_DENSITY_KG_PER_GAL)]
        density: f64,
        /// Print JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Check logged surveillance replies against ground-sensor timing.
    Detect {
        /// Directory of TCAS trial logs recorded with messages.
        logs: PathBuf,
        /// Sensor network and thresholds from this TCAS config [default: built-in].
        #[arg(long)]
        config: Option<PathBuf>,
        /// Write verdicts.csv here [default: the logs directory].
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a scenario configuration and report the first problem.
    ValidateConfig {
        #[arg(long = "config", value_name = "CONFIG")]
        config_flag: Option<PathBuf>,
        #[arg(value_name = "PATH", required_unless_present = "config_flag")]
        path: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<SimError>().map_or(3, SimError::exit_code);
            ExitCode::from(code as u8)
        }
    }
}

fn config_error(field: &str, e: impl std::fmt::Display) -> anyhow::Error {
    SimError::config(field, e.to_string()).into()
}

fn dispatch(cmd: Command) -> anyhow::Result<()> {
    match cmd {
        Command::Run { config, scenario, trials, seed, out, messages, trace_interval } => {
            let mut cfg = match (&config, scenario) {
                (Some(p), _) => ScenarioConfig::load(p)?,
                (None, Some(kind)) => ScenarioConfig::new(kind),
                (None, None) => return Err(config_error("scenario", "pass --config or --scenario")),
            };
            if let Some(kind) = scenario {
                cfg.scenario = kind;
            }
            if let Some(n) = trials {
                cfg.trials = n;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if messages {
                cfg.output.messages = true;
            }
            if let Some(i) = trace_interval {
                cfg.output.trace_interval_s = i;
            }
            let dir = out.or_else(|| cfg.output.dir.clone()).unwrap_or_else(|| PathBuf::from("out"));
            let runner = Runner::new(cfg)?;
            let logs = runner.run()?;
            let s = summary::summarize(&logs)?;
            let derived = runner.derived();
            let w = emit::write_run(&dir, Some(runner.config()), Some(&derived), &logs, &s)?;
            print!("{}", s.to_text());
            println!("\nWrote {} logs, {} and {}", w.logs.len(), w.summary_csv.display(), w.report.display());
        }
        Command::Summarize { logs, out } => {
            let all = emit::read_logs(&logs)?;
            let s = summary::summarize(&all)?;
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir).map_err(|e| SimError::io(&dir, e))?;
                let write = |name: &str, text: String| -> Result<(), SimError> {
                    let p = dir.join(name);
                    std::fs::write(&p, text).map_err(|e| SimError::io(&p, e))
                };
                write("summary.csv", s.to_csv())?;
                write("summary.json", serde_json::to_string_pretty(&s)?)?;
                write("report.txt", emit::report_text(&s, None, None))?;
            }
            print!("{}", s.to_text());
        }
        Command::Cost { aircraft, event, price, density, json } => {
            let types = match aircraft {
                Some(a) => vec![a.parse::<AircraftType>().map_err(|e| config_error("aircraft", e))?],
                None => AircraftType::ALL.to_vec(),
            };
            let events = match event {
                Some(e) => vec![e.parse::<CostEvent>().map_err(|e| config_error("event", e))?],
                None => CostEvent::ALL.to_vec(),
            };
            let mut reports = Vec::new();
            for &a in &types {
                for &e in &events {
                    reports.push(cost::disruption_cost(e, a, price, density).map_err(|e| config_error("cost", e))?);
                }
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&reports)?);
            } else {
                for r in &reports {
                    println!("{}", r.to_text());
                }
            }
        }
        Command::Detect { logs, config, out } => {
            let dc = match &config {
                Some(p) => DetectConfig::from_scenario(&ScenarioConfig::load(p)?.tcas),
                None => DetectConfig::from_scenario(&Default::default()),
            };
            let dir = out.unwrap_or_else(|| logs.clone());
            std::fs::create_dir_all(&dir).map_err(|e| SimError::io(&dir, e))?;
            let p = dir.join("verdicts.csv");
            let file = std::fs::File::create(&p).map_err(|e| SimError::io(&p, e))?;
            let mut csv = std::io::BufWriter::new(file);
            let stats = detect::check_dir(&logs, &dc, &mut csv)?;
            csv.flush().map_err(|e| SimError::io(&p, e))?;
            print_detection(&stats, &p);
        }
        Command::ValidateConfig { config_flag, path } => {
            let p = config_flag.or(path).expect("clap requires one");
            let cfg = ScenarioConfig::load(&p)?;
            println!("{}: ok ({} scenario, {} trials)", p.display(), cfg.scenario.as_str(), cfg.trials);
        }
    }
    Ok(())
}

fn print_detection(s: &DetectionStats, path: &Path) {
    let rate = |r: Option<f64>| r.map_or("n/a".to_string(), |r| format!("{:.2}%", 100.0 * r));
    println!("Injected replies:  {:>8}  flagged {}", s.adversarial, rate(s.detection_rate()));
    println!("Genuine replies:   {:>8}  flagged {}", s.genuine, rate(s.false_alarm_rate()));
    println!("Undetermined:      {:>8}", s.undetermined);
    println!("Wrote {}", path.display());
}
