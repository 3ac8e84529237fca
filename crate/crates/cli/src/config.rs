//! Flat `key = value` experiment configuration.
//!
//! Unknown keys are rejected, `#` lines are comments, and every value
//! error names the offending key. An empty file yields the defaults.

use mcsim_core::error::{Error, Result};
use mcsim_core::modem::Modulation;
use mcsim_core::sim::{Coding, Detector, SimConfig, SnrGrid};

/// Simulation config plus frontend-only reporting options.
#[derive(Debug, Clone, PartialEq)]
pub struct AppConfig {
    pub sim: SimConfig,
    /// Modulation the gain table is computed against, when set.
    pub gain_reference: Option<Modulation>,
    /// BER level the gain table is read at.
    pub gain_at_ber: f64,
}

impl Default for AppConfig {
    fn default() -> Self {
        Self {
            sim: SimConfig::default(),
            gain_reference: None,
            gain_at_ber: 1e-2,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("{key}: invalid value '{}'", value.trim())))
}

fn parse_snr(value: &str) -> Result<SnrGrid> {
    let parts: Vec<&str> = value.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Config(format!(
            "snr: expected start:step:stop, got '{value}'"
        )));
    }
    Ok(SnrGrid::new(
        parse_num("snr", parts[0])?,
        parse_num("snr", parts[1])?,
        parse_num("snr", parts[2])?,
    ))
}

fn parse_modulations(value: &str) -> Result<Vec<Modulation>> {
    value
        .split(',')
        .map(|item| item.parse::<Modulation>())
        .collect()
}

/// Parses the config text into a fully populated [`AppConfig`] and
/// validates it.
pub fn parse_config(text: &str) -> Result<AppConfig> {
    let mut cfg = AppConfig::default();
    for (index, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = index + 1;
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {lineno}: expected key = value")))?;
        let key = key.trim();
        let value = value.trim();
        match key {
            "modulation" => cfg.sim.modulations = parse_modulations(value)?,
            "snr" => cfg.sim.snr_grid = parse_snr(value)?,
            "msg_bits" => cfg.sim.msg_bits_per_frame = parse_num(key, value)?,
            "spread_factor" => cfg.sim.spreading_factor = parse_num(key, value)?,
            "subcarriers" => cfg.sim.n_subcarriers = parse_num(key, value)?,
            "cp_len" => cfg.sim.cp_len = parse_num(key, value)?,
            "rx_antennas" => cfg.sim.rx_antennas = parse_num(key, value)?,
            "tx_antennas" => cfg.sim.tx_antennas = parse_num(key, value)?,
            "users" => cfg.sim.users = parse_num(key, value)?,
            "detector" => cfg.sim.detector = value.parse::<Detector>()?,
            "coding" => cfg.sim.coding = value.parse::<Coding>()?,
            "frames" => cfg.sim.frames = parse_num(key, value)?,
            "min_errors" => cfg.sim.min_bit_errors = parse_num(key, value)?,
            "seed" => cfg.sim.master_seed = parse_num(key, value)?,
            "gain_reference" => cfg.gain_reference = Some(value.parse::<Modulation>()?),
            "gain_at_ber" => {
                let v: f64 = parse_num(key, value)?;
                if !(v > 0.0 && v < 1.0) {
                    return Err(Error::Config(format!("gain_at_ber: {v} outside (0, 1)")));
                }
                cfg.gain_at_ber = v;
            }
            other => {
                return Err(Error::Config(format!(
                    "line {lineno}: unknown key '{other}'"
                )))
            }
        }
    }
    cfg.sim.validate()?;
    Ok(cfg)
}

/// Renders a config so that `parse_config(render_config(c)) == c`.
pub fn render_config(cfg: &AppConfig) -> String {
    let mods: Vec<&str> = cfg.sim.modulations.iter().map(|m| m.name()).collect();
    let mut out = String::new();
    out.push_str(&format!("modulation = {}\n", mods.join(",")));
    out.push_str(&format!(
        "snr = {}:{}:{}\n",
        cfg.sim.snr_grid.start_db, cfg.sim.snr_grid.step_db, cfg.sim.snr_grid.stop_db
    ));
    out.push_str(&format!("msg_bits = {}\n", cfg.sim.msg_bits_per_frame));
    out.push_str(&format!("spread_factor = {}\n", cfg.sim.spreading_factor));
    out.push_str(&format!("subcarriers = {}\n", cfg.sim.n_subcarriers));
    out.push_str(&format!("cp_len = {}\n", cfg.sim.cp_len));
    out.push_str(&format!("rx_antennas = {}\n", cfg.sim.rx_antennas));
    out.push_str(&format!("tx_antennas = {}\n", cfg.sim.tx_antennas));
    out.push_str(&format!("users = {}\n", cfg.sim.users));
    out.push_str(&format!("detector = {}\n", cfg.sim.detector));
    out.push_str(&format!("coding = {}\n", cfg.sim.coding));
    out.push_str(&format!("frames = {}\n", cfg.sim.frames));
    out.push_str(&format!("min_errors = {}\n", cfg.sim.min_bit_errors));
    out.push_str(&format!("seed = {}\n", cfg.sim.master_seed));
    if let Some(reference) = cfg.gain_reference {
        out.push_str(&format!("gain_reference = {reference}\n"));
    }
    out.push_str(&format!("gain_at_ber = {}\n", cfg.gain_at_ber));
    out
}
