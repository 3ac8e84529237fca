//! Command-line BER sweep driver.

use mcsim::config::{parse_config, AppConfig};
use mcsim::csvout::write_csv;
use mcsim::plot::emit_plot_script;
use mcsim_core::modem::Modulation;
use mcsim_core::sim::{gain_vs_reference, run_sweep, Coding, Detector, SnrGrid};
use std::path::PathBuf;
use std::process::ExitCode;

/// Gain figures published for a comparable convolutionally coded 2x4
/// MIMO MC-CDMA system, relative to 64-QAM; printed beside the measured
/// gains for context. Only the ordering is expected to reproduce.
const PUBLISHED_GAINS_DB_VS_64QAM: [(Modulation, f64); 6] = [
    (Modulation::Qpsk, 17.56),
    (Modulation::Qam8, 5.25),
    (Modulation::Psk8, 2.946),
    (Modulation::Qam16, 1.867),
    (Modulation::Qam32, 0.486),
    (Modulation::Qam64, 0.0),
];

const USAGE: &str = "\
Usage: mcsim [OPTIONS]

Link-level BER sweep for a convolutionally coded 2x4 MIMO MC-CDMA system.

Options:
  --config PATH          read key = value configuration
  --modulation LIST      comma list: qpsk,8psk,8qam,16qam,32qam,64qam
  --snr START:STEP:STOP  SNR grid in dB (default -10:1:20)
  --frames N             frames per point before the stop rule applies
  --min-errors N         bit-error target per point
  --seed N               master seed for the deterministic sweep
  --subcarriers N        OFDM subcarriers (default 6400)
  --cp-len N             cyclic prefix length (default 1280)
  --spread-factor N      chips per coded bit (default 8)
  --users N              simultaneous users (Walsh codes when > 1)
  --detector KIND        zf | real-ls | ml
  --uncoded              bypass the convolutional code
  --output PATH          CSV output path (default ber.csv)
  --emit-plot PATH       write a Python plot script referencing the CSV
";

enum AppError {
    Config(String),
    Runtime(String),
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(args: &[String]) -> Result<(), AppError> {
    let mut config_path: Option<PathBuf> = None;
    let mut output = PathBuf::from("ber.csv");
    let mut plot_path: Option<PathBuf> = None;

    // The config file loads first so that flags override it.
    let mut iter = args.iter();
    let mut overrides: Vec<(String, String)> = Vec::new();
    while let Some(flag) = iter.next() {
        let mut take_value = |name: &str| -> Result<String, AppError> {
            iter.next()
                .cloned()
                .ok_or_else(|| AppError::Config(format!("{name} needs a value")))
        };
        match flag.as_str() {
            "--help" | "-h" => {
                print!("{USAGE}");
                return Ok(());
            }
            "--config" => config_path = Some(PathBuf::from(take_value("--config")?)),
            "--output" => output = PathBuf::from(take_value("--output")?),
            "--emit-plot" => plot_path = Some(PathBuf::from(take_value("--emit-plot")?)),
            "--uncoded" => overrides.push(("uncoded".into(), String::new())),
            "--modulation" | "--snr" | "--frames" | "--min-errors" | "--seed" | "--subcarriers"
            | "--cp-len" | "--spread-factor" | "--users" | "--detector" => {
                let value = take_value(flag)?;
                overrides.push((flag.trim_start_matches("--").to_string(), value));
            }
            other => return Err(AppError::Config(format!("unknown flag '{other}'"))),
        }
    }

    let mut cfg = match &config_path {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| AppError::Config(format!("{}: {e}", path.display())))?;
            parse_config(&text).map_err(|e| AppError::Config(e.to_string()))?
        }
        None => AppConfig::default(),
    };
    apply_overrides(&mut cfg, &overrides).map_err(AppError::Config)?;
    cfg.sim
        .validate()
        .map_err(|e| AppError::Config(e.to_string()))?;

    let records =
        run_sweep::<mcsim_core::Real>(&cfg.sim).map_err(|e| AppError::Runtime(e.to_string()))?;
    write_csv(&records, &output)
        .map_err(|e| AppError::Runtime(format!("{}: {e}", output.display())))?;
    println!("wrote {} records to {}", records.len(), output.display());

    if let Some(path) = &plot_path {
        emit_plot_script(&records, &output, path)
            .map_err(|e| AppError::Runtime(format!("{}: {e}", path.display())))?;
        println!("wrote plot script to {}", path.display());
    }

    if let Some(reference) = cfg.gain_reference {
        let gains = gain_vs_reference(&records, reference, cfg.gain_at_ber);
        println!();
        println!(
            "gain vs {reference} at BER {:.2e} (measured | published):",
            cfg.gain_at_ber
        );
        for entry in gains {
            let published = PUBLISHED_GAINS_DB_VS_64QAM
                .iter()
                .find(|(m, _)| *m == entry.modulation)
                .map(|(_, g)| *g);
            let measured = match entry.gain_db {
                Some(g) => format!("{g:8.3} dB"),
                None => "not reached".to_string(),
            };
            match (reference, published) {
                (Modulation::Qam64, Some(p)) => {
                    println!("  {:>6}  {measured} | {p:.3} dB", entry.modulation)
                }
                _ => println!("  {:>6}  {measured}", entry.modulation),
            }
        }
    }
    Ok(())
}

fn apply_overrides(cfg: &mut AppConfig, overrides: &[(String, String)]) -> Result<(), String> {
    for (key, value) in overrides {
        let parse_err = |e: mcsim_core::Error| e.to_string();
        match key.as_str() {
            "modulation" => {
                cfg.sim.modulations = value
                    .split(',')
                    .map(|m| m.parse::<Modulation>())
                    .collect::<mcsim_core::Result<_>>()
                    .map_err(parse_err)?;
            }
            "snr" => {
                let parts: Vec<&str> = value.split(':').collect();
                if parts.len() != 3 {
                    return Err(format!("--snr: expected start:step:stop, got '{value}'"));
                }
                let nums: Vec<f64> = parts
                    .iter()
                    .map(|p| p.trim().parse())
                    .collect::<Result<_, _>>()
                    .map_err(|_| format!("--snr: invalid value '{value}'"))?;
                cfg.sim.snr_grid = SnrGrid::new(nums[0], nums[1], nums[2]);
            }
            "frames" => cfg.sim.frames = num(key, value)?,
            "min-errors" => cfg.sim.min_bit_errors = num(key, value)?,
            "seed" => cfg.sim.master_seed = num(key, value)?,
            "subcarriers" => cfg.sim.n_subcarriers = num(key, value)?,
            "cp-len" => cfg.sim.cp_len = num(key, value)?,
            "spread-factor" => cfg.sim.spreading_factor = num(key, value)?,
            "users" => cfg.sim.users = num(key, value)?,
            "detector" => cfg.sim.detector = value.parse::<Detector>().map_err(parse_err)?,
            "uncoded" => cfg.sim.coding = Coding::None,
            _ => unreachable!("flag list is closed"),
        }
    }
    Ok(())
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
    value
        .trim()
        .parse()
        .map_err(|_| format!("--{key}: invalid value '{value}'"))
}
