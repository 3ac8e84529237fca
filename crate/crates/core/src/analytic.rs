//! Closed-form reference curves for validating the Monte-Carlo engine.

/// Average BER of coherent BPSK with L-branch maximal-ratio combining
/// over i.i.d. Rayleigh fading, average branch SNR `g` (conditional BER
/// Q(sqrt(2 * combined SNR))):
///
///   P = [ (1-mu)/2 ]^L * sum_{k=0}^{L-1} C(L-1+k, k) [ (1+mu)/2 ]^k,
///   mu = sqrt(g / (1+g)).
pub fn mrc_bpsk_ber(g: f64, l: usize) -> f64 {
    assert!(l >= 1);
    let mu = (g / (1.0 + g)).sqrt();
    let a = 0.5 * (1.0 - mu);
    let b = 0.5 * (1.0 + mu);
    let mut sum = 0.0;
    let mut binom = 1.0; // C(L-1+k, k), k = 0
    for k in 0..l {
        if k > 0 {
            binom *= (l - 1 + k) as f64 / k as f64;
        }
        sum += binom * b.powi(k as i32);
    }
    a.powi(l as i32) * sum
}

/// Average bit error rate of Gray QPSK through 2x4 Alamouti with
/// zero-forcing over quasi-static Rayleigh fading at symbol SNR
/// `snr_db`.
///
/// The post-detection SNR is ||h||_F^2 * snr / 2 over 8 unit-mean
/// branches, i.e. diversity order 8 with per-branch SNR snr/2; in the
/// Q(sqrt(2x)) convention of [`mrc_bpsk_ber`] that is an average branch
/// SNR of snr/4.
pub fn qpsk_alamouti_zf_ber(snr_db: f64) -> f64 {
    let snr = 10f64.powf(snr_db / 10.0);
    mrc_bpsk_ber(snr / 4.0, 8)
}
