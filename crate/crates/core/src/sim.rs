//! End-to-end frame pipeline and the Monte-Carlo BER sweep engine.
//!
//! A frame walks the full chain: random message -> convolutional encoder
//! -> chip spreading -> M-ary mapping -> Alamouti pairing -> per-antenna
//! OFDM -> per-subcarrier-pair Rayleigh transmission -> detection ->
//! OFDM demodulation -> hard demapping -> despreading -> Viterbi.
//! Multi-user frames give each user its own Walsh code and interleave the
//! users' chip groups across the composite stream; the receiver
//! despreads each user's groups with its own code.
//!
//! Frames are keyed by (master_seed, snr_index, frame_index), so sweeps
//! are reproducible for any worker count.

use crate::bits::BitBlock;
use crate::channel::{draw_channel, NoiseSpec};
use crate::dft::Dft;
use crate::error::{Error, Result};
use crate::fec::{conv_encode, viterbi_decode, ConvCode};
use crate::mimo::{
    alamouti_encode, effective_channel, ml_detect, real_decompose, real_ls_detect, zf_detect,
    ChannelRealization,
};
use crate::modem::{demap_hard, map_bits, Modulation, ModulationScheme};
use crate::ofdm::{add_cp, ofdm_demodulate, ofdm_modulate, remove_cp, OfdmGrid};
use crate::rng::frame_rng;
use crate::scalar::Scalar;
use crate::spread::{despread, spread, SpreadingCode};
use num_complex::Complex;
use rand::Rng;
use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Detector {
    Zf,
    RealLs,
    Ml,
}

impl Detector {
    pub fn name(self) -> &'static str {
        match self {
            Detector::Zf => "zf",
            Detector::RealLs => "real-ls",
            Detector::Ml => "ml",
        }
    }
}

impl fmt::Display for Detector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Detector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "zf" => Ok(Detector::Zf),
            "real-ls" | "real_ls" => Ok(Detector::RealLs),
            "ml" => Ok(Detector::Ml),
            other => Err(Error::Config(format!("unknown detector '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coding {
    Conv,
    None,
}

impl Coding {
    pub fn name(self) -> &'static str {
        match self {
            Coding::Conv => "conv",
            Coding::None => "none",
        }
    }
}

impl fmt::Display for Coding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Coding {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "conv" => Ok(Coding::Conv),
            "none" => Ok(Coding::None),
            other => Err(Error::Config(format!("unknown coding '{other}'"))),
        }
    }
}

/// SNR sweep axis in dB: start, step, stop (inclusive).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrGrid {
    pub start_db: f64,
    pub step_db: f64,
    pub stop_db: f64,
}

impl SnrGrid {
    pub fn new(start_db: f64, step_db: f64, stop_db: f64) -> Self {
        Self {
            start_db,
            step_db,
            stop_db,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop_db - self.start_db) / self.step_db + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|k| self.start_db + k as f64 * self.step_db)
            .collect()
    }
}

impl Default for SnrGrid {
    fn default() -> Self {
        Self::new(-10.0, 1.0, 20.0)
    }
}

/// Full experiment description. Defaults follow the reference system:
/// 1040 message bits per frame, spreading factor 8, 6400 subcarriers
/// with a 1280-sample cyclic prefix, 2x4 antennas, zero-forcing
/// detection of the coded chain, SNR swept from -10 to 20 dB.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub modulations: Vec<Modulation>,
    pub snr_grid: SnrGrid,
    pub msg_bits_per_frame: usize,
    pub spreading_factor: usize,
    pub n_subcarriers: usize,
    pub cp_len: usize,
    pub rx_antennas: usize,
    pub tx_antennas: usize,
    pub users: usize,
    pub detector: Detector,
    pub coding: Coding,
    pub frames: usize,
    pub min_bit_errors: u64,
    pub master_seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            modulations: Modulation::ALL.to_vec(),
            snr_grid: SnrGrid::default(),
            msg_bits_per_frame: 1040,
            spreading_factor: 8,
            n_subcarriers: 6400,
            cp_len: 1280,
            rx_antennas: 4,
            tx_antennas: 2,
            users: 1,
            detector: Detector::Zf,
            coding: Coding::Conv,
            frames: 50,
            min_bit_errors: 100,
            master_seed: 1,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.modulations.is_empty() {
            return Err(Error::Config("modulations: empty list".into()));
        }
        let grid = &self.snr_grid;
        if !(grid.start_db.is_finite() && grid.step_db.is_finite() && grid.stop_db.is_finite()) {
            return Err(Error::Config("snr: grid values must be finite".into()));
        }
        if self.snr_grid.step_db <= 0.0 {
            return Err(Error::Config("snr: step must be positive".into()));
        }
        if self.snr_grid.start_db > self.snr_grid.stop_db {
            return Err(Error::Config("snr: start exceeds stop".into()));
        }
        if self.msg_bits_per_frame == 0 {
            return Err(Error::Config("msg_bits: must be at least 1".into()));
        }
        if self.spreading_factor == 0 {
            return Err(Error::Config("spread_factor: must be at least 1".into()));
        }
        if self.n_subcarriers < 2 || !self.n_subcarriers.is_multiple_of(2) {
            // Alamouti blocks occupy adjacent subcarriers, so rows must
            // hold a whole number of blocks.
            return Err(Error::Config(
                "subcarriers: must be even and at least 2".into(),
            ));
        }
        if self.cp_len > self.n_subcarriers {
            return Err(Error::Config("cp_len: exceeds subcarrier count".into()));
        }
        if self.tx_antennas != 2 {
            return Err(Error::Config(
                "tx antennas: Alamouti coding requires exactly 2".into(),
            ));
        }
        if self.rx_antennas == 0 {
            return Err(Error::Config("rx antennas: must be at least 1".into()));
        }
        if self.users == 0 {
            return Err(Error::Config("users: must be at least 1".into()));
        }
        if self.users > 1 {
            if self.users > self.spreading_factor {
                return Err(Error::Config(format!(
                    "users: {} exceeds the Walsh spreading factor {}",
                    self.users, self.spreading_factor
                )));
            }
            if !self.spreading_factor.is_power_of_two() {
                return Err(Error::Config(
                    "spread_factor: Walsh codes need a power of two".into(),
                ));
            }
        }
        if self.frames == 0 {
            return Err(Error::Config("frames: must be at least 1".into()));
        }
        Ok(())
    }

    fn spreading_codes(&self) -> Result<Vec<SpreadingCode>> {
        if self.users == 1 {
            Ok(vec![SpreadingCode::pn(self.spreading_factor, 0)?])
        } else {
            (0..self.users)
                .map(|u| SpreadingCode::walsh(self.spreading_factor, u))
                .collect()
        }
    }
}

/// Padding introduced by one frame; the receiver strips exactly this.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameMeta {
    /// Zero bits appended to fill the last modulation symbol.
    pub pad_chips: usize,
    /// Symbols appended for Alamouti pairing plus OFDM grid fill.
    pub pad_symbols: usize,
    /// OFDM symbols per antenna stream.
    pub ofdm_symbols: usize,
}

/// Counters produced by one frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameOutcome {
    pub bit_errors: u64,
    pub bits_sent: u64,
    pub meta: FrameMeta,
    pub channel_redraws: u64,
}

/// Accumulated counters for one (SNR, modulation) point.
#[derive(Debug, Clone, PartialEq)]
pub struct BerRecord {
    pub snr_db: f64,
    pub modulation: Modulation,
    pub detector: Detector,
    pub users: usize,
    pub frames: u64,
    pub bits_sent: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub seed: u64,
}

/// Runs one frame through the whole chain and counts decoded message-bit
/// errors against what was sent.
pub fn run_frame<T: Scalar, R: Rng + ?Sized>(
    cfg: &SimConfig,
    modulation: Modulation,
    snr_db: f64,
    rng: &mut R,
) -> Result<FrameOutcome> {
    let scheme = ModulationScheme::<T>::new(modulation);
    let codes = cfg.spreading_codes()?;
    let conv = ConvCode::default_k3(false);
    let users = cfg.users;
    let factor = cfg.spreading_factor;

    // Transmit side: per-user bits to a composite chip stream.
    let messages: Vec<BitBlock> = (0..users)
        .map(|_| BitBlock::random(cfg.msg_bits_per_frame, rng))
        .collect();
    let encoded: Vec<BitBlock> = match cfg.coding {
        Coding::Conv => messages
            .iter()
            .map(|m| conv_encode(m, &conv))
            .collect::<Result<_>>()?,
        Coding::None => messages.clone(),
    };
    let chip_streams: Vec<Vec<i8>> = encoded
        .iter()
        .zip(&codes)
        .map(|(bits, code)| spread(bits, code).chips)
        .collect();
    let groups_per_user = encoded[0].len();
    let mut composite: Vec<i8> = Vec::with_capacity(users * groups_per_user * factor);
    for g in 0..groups_per_user {
        for stream in &chip_streams {
            composite.extend_from_slice(&stream[g * factor..(g + 1) * factor]);
        }
    }
    let tx_bits: BitBlock = composite.iter().map(|&c| u8::from(c < 0)).collect();

    // Mapping and Alamouti pairing.
    let (mut symbols, pad_chips) = map_bits(&tx_bits, &scheme);
    let n_data_symbols = symbols.len();
    let pair_pad = n_data_symbols % 2;
    if pair_pad == 1 {
        symbols.push(scheme.points[0]);
    }
    let n_blocks = symbols.len() / 2;
    let stream_len = 2 * n_blocks;
    let mut antenna_streams: [Vec<Complex<T>>; 2] = [
        Vec::with_capacity(stream_len),
        Vec::with_capacity(stream_len),
    ];
    for b in 0..n_blocks {
        let block = alamouti_encode(symbols[2 * b], symbols[2 * b + 1]);
        for slot in 0..2 {
            antenna_streams[0].push(block.tx[slot][0]);
            antenna_streams[1].push(block.tx[slot][1]);
        }
    }

    // OFDM waveforms per transmit antenna.
    let grid = OfdmGrid::new(cfg.n_subcarriers, cfg.cp_len)?;
    let n = cfg.n_subcarriers;
    let (tx_time_a, grid_pad) = ofdm_modulate(&antenna_streams[0], &grid)?;
    let (tx_time_b, _) = ofdm_modulate(&antenna_streams[1], &grid)?;
    let tx_time = [tx_time_a, tx_time_b];
    let rows = stream_len.div_ceil(n);
    let meta = FrameMeta {
        pad_chips,
        pad_symbols: pair_pad + grid_pad,
        ofdm_symbols: rows,
    };

    // Channel: recover each antenna's subcarrier row from its waveform,
    // mix every block's pair of subcarriers through a fresh quasi-static
    // realization, add noise, and materialize the received waveforms.
    let noise = NoiseSpec::<T>::from_snr_db(snr_db);
    let nr = cfg.rx_antennas;
    let inv_sqrt2 = T::of(std::f64::consts::FRAC_1_SQRT_2);
    let needs_inverse = matches!(cfg.detector, Detector::Zf | Detector::RealLs);
    let plan = Dft::new(n)?;
    let sym_len = grid.symbol_len();
    let zero = Complex::new(T::zero(), T::zero());
    let mut rx_time: Vec<Vec<Complex<T>>> = vec![Vec::with_capacity(rows * sym_len); nr];
    let mut block_channels: Vec<ChannelRealization<T>> = Vec::with_capacity(n_blocks);
    let mut redraws = 0u64;

    for r in 0..rows {
        let mut tx_freq: Vec<Vec<Complex<T>>> = Vec::with_capacity(2);
        for stream in &tx_time {
            let symbol = &stream[r * sym_len..(r + 1) * sym_len];
            tx_freq.push(plan.forward(&remove_cp(symbol, cfg.cp_len)?)?);
        }
        let mut rx_freq: Vec<Vec<Complex<T>>> = vec![vec![zero; n]; nr];
        let row_start = r * n;
        let data_end = stream_len.min(row_start + n);
        let mut pos = row_start;
        while pos < data_end {
            let h = loop {
                let candidate: ChannelRealization<T> = draw_channel(nr, 2, rng);
                if !needs_inverse {
                    break candidate;
                }
                let eff = effective_channel(&candidate).scale(inv_sqrt2);
                if eff.hermitian().mul(&eff).inverse_with_cond().is_ok() {
                    break candidate;
                }
                redraws += 1;
                if redraws > 1_000 {
                    return Err(Error::Config("channel redraw budget exhausted".into()));
                }
            };
            for slot in 0..2 {
                let local = pos + slot - row_start;
                for (j, row) in rx_freq.iter_mut().enumerate() {
                    let mut acc = zero;
                    for (i, freq) in tx_freq.iter().enumerate() {
                        acc += h.gains[(j, i)] * freq[local];
                    }
                    row[local] = acc + noise.sample(rng);
                }
            }
            block_channels.push(h);
            pos += 2;
        }
        for local in (data_end - row_start)..n {
            for row in rx_freq.iter_mut() {
                row[local] = noise.sample(rng);
            }
        }
        for (j, row) in rx_freq.iter().enumerate() {
            rx_time[j].extend(add_cp(&plan.inverse(row)?, cfg.cp_len)?);
        }
    }

    // Receiver: OFDM front-end, per-block detection, demap, despread,
    // decode, count.
    let mut rx_streams: Vec<Vec<Complex<T>>> = Vec::with_capacity(nr);
    for stream in &rx_time {
        rx_streams.push(ofdm_demodulate(stream, &grid, stream_len)?);
    }
    let mut detected: Vec<Complex<T>> = Vec::with_capacity(stream_len);
    for (b, h) in block_channels.iter().enumerate() {
        let mut y = Vec::with_capacity(2 * nr);
        for stream in &rx_streams {
            y.push(stream[2 * b]);
        }
        for stream in &rx_streams {
            y.push(stream[2 * b + 1].conj());
        }
        let eff = effective_channel(h).scale(inv_sqrt2);
        let (d1, d2) = match cfg.detector {
            Detector::Zf => zf_detect(&y, &eff)?,
            Detector::RealLs => {
                let (hr, yr) = real_decompose(&eff, &y);
                real_ls_detect(&hr, &yr)?
            }
            Detector::Ml => ml_detect(&y, &eff, &scheme),
        };
        detected.push(d1);
        detected.push(d2);
    }
    detected.truncate(n_data_symbols);

    let mut rx_bits = demap_hard(&detected, &scheme);
    rx_bits.truncate(composite.len());
    let rx_bits = rx_bits.as_slice();

    let mut bit_errors = 0u64;
    for (u, (msg, code)) in messages.iter().zip(&codes).enumerate() {
        let mut user_chips: Vec<T> = Vec::with_capacity(groups_per_user * factor);
        for g in 0..groups_per_user {
            let start = (g * users + u) * factor;
            user_chips.extend(rx_bits[start..start + factor].iter().map(|&b| {
                if b == 0 {
                    T::one()
                } else {
                    -T::one()
                }
            }));
        }
        let coded_rx = despread(&user_chips, code)?;
        let decoded = match cfg.coding {
            Coding::Conv => viterbi_decode(&coded_rx, &conv)?,
            Coding::None => coded_rx,
        };
        bit_errors += msg.hamming_distance(&decoded) as u64;
    }

    Ok(FrameOutcome {
        bit_errors,
        bits_sent: (users * cfg.msg_bits_per_frame) as u64,
        meta,
        channel_redraws: redraws,
    })
}

/// Accumulates frames for one (modulation, SNR) point: at least
/// `cfg.frames`, extending in whole batches until `min_bit_errors` is
/// reached or the 10x frame cap hits. Deterministic for a fixed seed
/// regardless of worker count.
pub fn run_point<T: Scalar>(
    cfg: &SimConfig,
    modulation: Modulation,
    snr_db: f64,
    snr_index: usize,
) -> Result<BerRecord> {
    let mut frames = 0u64;
    let mut bit_errors = 0u64;
    let mut bits_sent = 0u64;
    let cap = 10 * cfg.frames as u64;
    loop {
        let batch_end = (frames + cfg.frames as u64).min(cap);
        let (e, b) = (frames..batch_end)
            .into_par_iter()
            .map(|idx| {
                let mut rng = frame_rng(cfg.master_seed, snr_index as u64, idx);
                run_frame::<T, _>(cfg, modulation, snr_db, &mut rng)
                    .map(|out| (out.bit_errors, out.bits_sent))
            })
            .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
        bit_errors += e;
        bits_sent += b;
        frames = batch_end;
        if frames >= cfg.frames as u64 && (bit_errors >= cfg.min_bit_errors || frames >= cap) {
            break;
        }
    }
    Ok(BerRecord {
        snr_db,
        modulation,
        detector: cfg.detector,
        users: cfg.users,
        frames,
        bits_sent,
        bit_errors,
        ber: bit_errors as f64 / bits_sent as f64,
        seed: cfg.master_seed,
    })
}

/// Cartesian sweep over modulations and the SNR grid, sorted by
/// (modulation, snr).
pub fn run_sweep<T: Scalar>(cfg: &SimConfig) -> Result<Vec<BerRecord>> {
    cfg.validate()?;
    let points = cfg.snr_grid.points();
    let jobs: Vec<(Modulation, usize, f64)> = cfg
        .modulations
        .iter()
        .flat_map(|&m| points.iter().enumerate().map(move |(i, &s)| (m, i, s)))
        .collect();
    let mut records: Vec<BerRecord> = jobs
        .par_iter()
        .map(|&(m, idx, snr)| run_point::<T>(cfg, m, snr, idx))
        .collect::<Result<_>>()?;
    records.sort_by(|a, b| {
        a.modulation
            .cmp(&b.modulation)
            .then(a.snr_db.partial_cmp(&b.snr_db).expect("finite snr"))
    });
    Ok(records)
}

/// SNR gain of each modulation against a reference at a target BER.
#[derive(Debug, Clone, PartialEq)]
pub struct GainEntry {
    pub modulation: Modulation,
    /// None when the curve never reaches the target BER.
    pub gain_db: Option<f64>,
}

/// Interpolated SNR at which each modulation's curve crosses `at_ber`,
/// reported as gain = snr_ref - snr_mod in dB. Curves that never reach
/// the target yield `None`.
pub fn gain_vs_reference(
    records: &[BerRecord],
    reference: Modulation,
    at_ber: f64,
) -> Vec<GainEntry> {
    let mut mods: Vec<Modulation> = Vec::new();
    for r in records {
        if !mods.contains(&r.modulation) {
            mods.push(r.modulation);
        }
    }
    mods.sort();
    let curve = |m: Modulation| -> Vec<(f64, f64)> {
        let mut c: Vec<(f64, f64)> = records
            .iter()
            .filter(|r| r.modulation == m)
            .map(|r| (r.snr_db, r.ber))
            .collect();
        c.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite snr"));
        c
    };
    let ref_snr = crossing_snr(&curve(reference), at_ber);
    mods.into_iter()
        .map(|m| {
            let gain = match (ref_snr, crossing_snr(&curve(m), at_ber)) {
                (Some(r), Some(s)) => Some(r - s),
                _ => None,
            };
            GainEntry {
                modulation: m,
                gain_db: gain,
            }
        })
        .collect()
}

/// First SNR at which the curve drops to `at_ber`, log-linear between
/// grid points. Zero-BER points are floored at 1e-12 for interpolation.
fn crossing_snr(curve: &[(f64, f64)], at_ber: f64) -> Option<f64> {
    const FLOOR: f64 = 1e-12;
    let mut prev: Option<(f64, f64)> = None;
    for &(snr, ber) in curve {
        if ber <= at_ber {
            let interpolated = match prev {
                None => snr,
                Some((prev_snr, prev_ber)) => {
                    let l0 = prev_ber.max(FLOOR).log10();
                    let l1 = ber.max(FLOOR).log10();
                    let lt = at_ber.max(FLOOR).log10();
                    if (l1 - l0).abs() < 1e-12 {
                        snr
                    } else {
                        prev_snr + (snr - prev_snr) * (lt - l0) / (l1 - l0)
                    }
                }
            };
            return Some(interpolated);
        }
        prev = Some((snr, ber));
    }
    None
}
