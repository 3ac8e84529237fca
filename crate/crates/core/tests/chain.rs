//! Cross-module integration: the full transmit/receive chain must be an
//! exact inverse of itself without noise, for every stage combination.

use mcsim_core::bits::BitBlock;
use mcsim_core::fec::{conv_encode, ml_decode_oracle, viterbi_decode, ConvCode};
use mcsim_core::modem::Modulation;
use mcsim_core::rng::frame_rng;
use mcsim_core::sim::{run_frame, run_point, run_sweep, Coding, Detector, SimConfig, SnrGrid};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_cfg() -> SimConfig {
    SimConfig {
        msg_bits_per_frame: 130,
        n_subcarriers: 64,
        cp_len: 16,
        frames: 2,
        ..SimConfig::default()
    }
}

#[test]
fn noiseless_identity_all_stage_combinations() {
    for modulation in Modulation::ALL {
        for detector in [Detector::Zf, Detector::RealLs, Detector::Ml] {
            for coding in [Coding::Conv, Coding::None] {
                for users in [1usize, 4] {
                    let mut cfg = small_cfg();
                    cfg.detector = detector;
                    cfg.coding = coding;
                    cfg.users = users;
                    for frame in 0..3 {
                        let mut rng = frame_rng(11, 0, frame);
                        let out =
                            run_frame::<f64, _>(&cfg, modulation, f64::INFINITY, &mut rng).unwrap();
                        assert_eq!(
                            out.bit_errors, 0,
                            "{modulation}/{detector}/{coding}/{users} users"
                        );
                        assert_eq!(out.bits_sent, 130 * users as u64);
                    }
                }
            }
        }
    }
}

#[test]
fn viterbi_roundtrip_a_thousand_random_messages() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for &terminated in &[false, true] {
        let code = ConvCode::default_k3(terminated);
        for _ in 0..500 {
            let len = rng.random_range(1..=1040);
            let msg = BitBlock::random(len, &mut rng);
            let decoded = viterbi_decode(&conv_encode(&msg, &code).unwrap(), &code).unwrap();
            assert_eq!(decoded, msg);
        }
    }
}

#[test]
fn viterbi_is_ml_on_noisy_short_blocks() {
    // Over a binary symmetric channel the re-encoded Viterbi decision
    // must sit at the same Hamming distance as the exhaustive optimum.
    let code = ConvCode::default_k3(true);
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for trial in 0..100 {
        let msg = BitBlock::random(12, &mut rng);
        let noisy = conv_encode(&msg, &code).unwrap().through_bsc(0.1, &mut rng);
        let viterbi = viterbi_decode(&noisy, &code).unwrap();
        let oracle = ml_decode_oracle(&noisy, &code, 12).unwrap();
        let d_viterbi = conv_encode(&viterbi, &code)
            .unwrap()
            .hamming_distance(&noisy);
        let d_oracle = conv_encode(&oracle, &code)
            .unwrap()
            .hamming_distance(&noisy);
        assert_eq!(d_viterbi, d_oracle, "trial {trial}");
    }
}

#[test]
fn channel_redraw_counter_stays_zero_in_practice() {
    // Fading matrices are essentially never singular; the redraw path is
    // an escape hatch, not a steady state.
    let cfg = small_cfg();
    let mut rng = frame_rng(99, 0, 0);
    let out = run_frame::<f64, _>(&cfg, Modulation::Qpsk, 10.0, &mut rng).unwrap();
    assert_eq!(out.channel_redraws, 0);
}

#[test]
fn f32_chain_matches_f64_noiselessly() {
    let cfg = small_cfg();
    for frame in 0..2 {
        let mut rng = frame_rng(7, 0, frame);
        let out64 = run_frame::<f64, _>(&cfg, Modulation::Qam16, f64::INFINITY, &mut rng).unwrap();
        let mut rng = frame_rng(7, 0, frame);
        let out32 = run_frame::<f32, _>(&cfg, Modulation::Qam16, f64::INFINITY, &mut rng).unwrap();
        assert_eq!(out64.bit_errors, 0);
        assert_eq!(out32.bit_errors, 0);
        assert_eq!(out64.meta, out32.meta);
    }
}

#[test]
fn coded_qpsk_is_error_free_at_high_snr() {
    let cfg = SimConfig {
        modulations: vec![Modulation::Qpsk],
        frames: 5,
        min_bit_errors: 0,
        ..small_cfg()
    };
    let rec = run_point::<f64>(&cfg, Modulation::Qpsk, 20.0, 0).unwrap();
    assert_eq!(rec.bit_errors, 0);
    assert_eq!(rec.ber, 0.0);
}

#[test]
fn single_point_sweep_yields_one_record() {
    let cfg = SimConfig {
        modulations: vec![Modulation::Qam16],
        snr_grid: SnrGrid::new(3.0, 1.0, 3.0),
        frames: 1,
        min_bit_errors: 1,
        ..small_cfg()
    };
    let records = run_sweep::<f64>(&cfg).unwrap();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0].snr_db, 3.0);
    assert_eq!(records[0].modulation, Modulation::Qam16);
}
