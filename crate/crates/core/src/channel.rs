//! BPSK over real Rayleigh fading with AWGN, and soft demodulation with
//! perfect receiver channel-state information.
//!
//! Conventions: unit symbol energy, `E_s = R * E_b` with the transmitted
//! (post-puncturing) rate, fading normalized to `E[h^2] = 1`. Punctured
//! positions cost no energy and come back as zero LLRs.

use crate::codec::TransmitMapping;
use crate::error::{Error, Result};
use rand::Rng;

/// Fading regime: a fixed number of independent blocks per codeword, or one
/// coefficient per symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Block(usize),
    Fast,
}

/// One operating point of the channel.
#[derive(Debug, Clone, Copy)]
pub struct ChannelSpec {
    pub regime: Regime,
    /// SNR per information bit, in dB.
    pub eb_n0_db: f64,
    /// Transmitted code rate k/n_tx.
    pub rate: f64,
}

impl ChannelSpec {
    pub fn new(regime: Regime, eb_n0_db: f64, rate: f64) -> Self {
        ChannelSpec {
            regime,
            eb_n0_db,
            rate,
        }
    }

    /// Noise spectral density for unit symbol energy:
    /// `N0 = 1 / (R * 10^(EbN0_dB/10))`.
    pub fn n0(&self) -> f64 {
        1.0 / (self.rate * 10f64.powf(self.eb_n0_db / 10.0))
    }
}

/// Fading coefficients drawn for one codeword: length `F` in the block
/// regime, one per transmitted symbol in the fast regime.
#[derive(Debug, Clone)]
pub struct FadingRealization {
    pub coeffs: Vec<f64>,
}

impl FadingRealization {
    /// Coefficient applied to transmit position `t` of `n_tx`.
    pub fn at(&self, t: usize, n_tx: usize) -> f64 {
        let f = self.coeffs.len();
        if f == n_tx {
            self.coeffs[t]
        } else {
            self.coeffs[t * f / n_tx]
        }
    }
}

/// BPSK mapping: bit 0 to +1, bit 1 to -1.
pub fn modulate(bits: &[u8]) -> Vec<f64> {
    bits.iter()
        .map(|&b| if b & 1 == 0 { 1.0 } else { -1.0 })
        .collect()
}

/// Standard normal via Box-Muller, consuming two uniforms.
pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>(); // (0, 1]
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Real Rayleigh coefficient normalized to unit mean-square: `h^2 ~ Exp(1)`.
pub fn rayleigh_coefficient<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = 1.0 - rng.random::<f64>();
    (-u.ln()).sqrt()
}

/// Draws the fading coefficients for one codeword of `n_tx` symbols.
pub fn sample_fading<R: Rng + ?Sized>(
    spec: &ChannelSpec,
    n_tx: usize,
    rng: &mut R,
) -> FadingRealization {
    let count = match spec.regime {
        Regime::Block(f) => f,
        Regime::Fast => n_tx,
    };
    FadingRealization {
        coeffs: (0..count).map(|_| rayleigh_coefficient(rng)).collect(),
    }
}

/// Applies fading and additive noise: `r_t = h_f(t) * s_t + n_t` with
/// `n_t ~ N(0, N0/2)`, symbols mapped to blocks contiguously.
pub fn transmit<R: Rng + ?Sized>(
    s: &[f64],
    fading: &FadingRealization,
    spec: &ChannelSpec,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if let Regime::Fast = spec.regime {
        if fading.coeffs.len() != s.len() {
            return Err(Error::LengthMismatch {
                expected: s.len(),
                got: fading.coeffs.len(),
            });
        }
    } else if s.len() % fading.coeffs.len() != 0 {
        return Err(Error::LengthMismatch {
            expected: fading.coeffs.len(),
            got: s.len(),
        });
    }
    let sigma = (spec.n0() / 2.0).sqrt();
    let n_tx = s.len();
    Ok(s.iter()
        .enumerate()
        .map(|(t, &x)| fading.at(t, n_tx) * x + sigma * standard_normal(rng))
        .collect())
}

/// Per-bit LLR `log P(bit=0)/P(bit=1) = 4 h r / N0` with perfect CSI,
/// re-indexed to pre-puncture column order; punctured positions erase to 0.
pub fn llr(
    r: &[f64],
    fading: &FadingRealization,
    spec: &ChannelSpec,
    mapping: &TransmitMapping<'_>,
) -> Result<Vec<f64>> {
    if r.len() != mapping.transmit_cols.len() {
        return Err(Error::LengthMismatch {
            expected: mapping.transmit_cols.len(),
            got: r.len(),
        });
    }
    let n0 = spec.n0();
    let n_tx = r.len();
    let mut out = vec![0.0; mapping.n_pre];
    for (t, (&col, &rt)) in mapping.transmit_cols.iter().zip(r).enumerate() {
        out[col] = 4.0 * fading.at(t, n_tx) * rt / n0;
    }
    Ok(out)
}
