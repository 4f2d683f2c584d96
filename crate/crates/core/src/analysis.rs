//! Outage-probability estimation, frame-error-rate sweeps and diversity
//! slope fitting.
//!
//! Every frame derives its own random stream from `(master_seed, SNR point,
//! frame index)`, so results are bit-identical for any worker count and any
//! execution order. Stopping decisions are taken on fixed-size batch
//! boundaries, which keeps the frame count itself worker-independent.

use crate::channel::{llr, modulate, sample_fading, transmit, ChannelSpec, Regime};
use crate::codec::LinearCode;
use crate::decoder::{DecodeScratch, SpaDecoder};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Frame counters at one SNR point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FerPoint {
    pub eb_n0_db: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    /// Sum of decoder iterations over all frames (exact, for merging).
    pub iter_sum: u64,
}

impl FerPoint {
    pub fn new(eb_n0_db: f64) -> Self {
        FerPoint {
            eb_n0_db,
            frames: 0,
            frame_errors: 0,
            bit_errors: 0,
            iter_sum: 0,
        }
    }

    pub fn fer(&self) -> f64 {
        if self.frames == 0 {
            0.0
        } else {
            self.frame_errors as f64 / self.frames as f64
        }
    }

    /// Bit error rate over the information bits.
    pub fn ber(&self, k: usize) -> f64 {
        if self.frames == 0 {
            0.0
        } else {
            self.bit_errors as f64 / (self.frames * k as u64) as f64
        }
    }

    pub fn avg_iterations(&self) -> f64 {
        if self.frames == 0 {
            0.0
        } else {
            self.iter_sum as f64 / self.frames as f64
        }
    }

    fn merge(&mut self, other: &FerPoint) {
        self.frames += other.frames;
        self.frame_errors += other.frame_errors;
        self.bit_errors += other.bit_errors;
        self.iter_sum += other.iter_sum;
    }
}

/// Monte-Carlo outage counters at one SNR point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutagePoint {
    pub eb_n0_db: f64,
    pub samples: u64,
    pub outages: u64,
}

impl OutagePoint {
    pub fn estimate(&self) -> f64 {
        if self.samples == 0 {
            0.0
        } else {
            self.outages as f64 / self.samples as f64
        }
    }
}

/// Average mutual information across fading blocks for Gaussian channel
/// inputs: `(1/F) sum 0.5 log2(1 + 2 R (Eb/N0) h_f^2)`.
pub fn mutual_info_gaussian(h: &[f64], rate: f64, eb_n0_db: f64) -> f64 {
    let snr = 10f64.powf(eb_n0_db / 10.0);
    let sum: f64 = h
        .iter()
        .map(|&hf| 0.5 * (1.0 + 2.0 * rate * snr * hf * hf).log2())
        .sum();
    sum / h.len() as f64
}

/// Closed-form single-block Rayleigh outage (`h^2 ~ Exp(1)`): the mutual
/// information falls below the rate iff `h^2 < (2^(2R) - 1)/(2 R snr)`.
pub fn outage_closed_form_single_block(rate: f64, eb_n0_db: f64) -> f64 {
    let snr = 10f64.powf(eb_n0_db / 10.0);
    let threshold = (2f64.powf(2.0 * rate) - 1.0) / (2.0 * rate * snr);
    1.0 - (-threshold).exp()
}

/// Monte-Carlo outage probability estimate, drawing fading through the same
/// sampler the transmission channel uses.
pub fn outage_probability(
    fading_blocks: usize,
    rate: f64,
    eb_n0_db: f64,
    n_samples: u64,
    seed: u64,
) -> OutagePoint {
    let spec = ChannelSpec::new(Regime::Block(fading_blocks), eb_n0_db, rate);
    let mut rng = derive_rng(seed, point_key(eb_n0_db), 0);
    let mut outages = 0u64;
    for _ in 0..n_samples {
        let fading = sample_fading(&spec, fading_blocks, &mut rng);
        if mutual_info_gaussian(&fading.coeffs, rate, eb_n0_db) < rate {
            outages += 1;
        }
    }
    OutagePoint {
        eb_n0_db,
        samples: n_samples,
        outages,
    }
}

/// Stop rule for a FER point: finish a batch once `min_frame_errors` have
/// been seen, or stop unconditionally at `max_frames`.
#[derive(Debug, Clone, Copy)]
pub struct StopRule {
    pub min_frame_errors: u64,
    pub max_frames: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            min_frame_errors: 100,
            max_frames: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SimOptions {
    pub stop: StopRule,
    pub max_iter: usize,
    pub master_seed: u64,
    pub workers: usize,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            stop: StopRule::default(),
            max_iter: 20,
            master_seed: 0,
            workers: 1,
        }
    }
}

/// Frames per stopping-decision batch. Fixed so that the processed frame
/// count depends only on the counters, never on the worker split.
const FRAMES_PER_BATCH: u64 = 1024;

/// Runs encode, puncture, fade, decode, compare for one SNR point.
pub fn fer_point(
    code: &LinearCode,
    regime: Regime,
    eb_n0_db: f64,
    opts: &SimOptions,
) -> FerPoint {
    let decoder = SpaDecoder::new(code.h());
    let spec = ChannelSpec::new(regime, eb_n0_db, code.rate());
    let key = point_key(eb_n0_db);
    let workers = opts.workers.max(1);
    let mut acc = FerPoint::new(eb_n0_db);
    while acc.frames < opts.stop.max_frames && acc.frame_errors < opts.stop.min_frame_errors {
        let start = acc.frames;
        let end = (start + FRAMES_PER_BATCH).min(opts.stop.max_frames);
        let partials = run_batch(code, &decoder, &spec, opts, key, start..end, workers);
        for p in partials {
            acc.merge(&p);
        }
    }
    acc
}

/// Runs `fer_point` across a list of SNR values.
pub fn fer_sweep(
    code: &LinearCode,
    regime: Regime,
    eb_n0_dbs: &[f64],
    opts: &SimOptions,
) -> Vec<FerPoint> {
    eb_n0_dbs
        .iter()
        .map(|&db| fer_point(code, regime, db, opts))
        .collect()
}

fn run_batch(
    code: &LinearCode,
    decoder: &SpaDecoder,
    spec: &ChannelSpec,
    opts: &SimOptions,
    key: u64,
    frames: std::ops::Range<u64>,
    workers: usize,
) -> Vec<FerPoint> {
    let total = frames.end - frames.start;
    let workers = workers.min(total.max(1) as usize).max(1);
    let chunk = total.div_ceil(workers as u64);
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let lo = frames.start + w as u64 * chunk;
                let hi = (lo + chunk).min(frames.end);
                scope.spawn(move || {
                    let mut part = FerPoint::new(spec.eb_n0_db);
                    let mut scratch = DecodeScratch::default();
                    for frame in lo..hi {
                        let (err_bits, iters) =
                            run_frame(code, decoder, spec, opts, key, frame, &mut scratch);
                        part.frames += 1;
                        part.bit_errors += err_bits as u64;
                        part.frame_errors += (err_bits > 0) as u64;
                        part.iter_sum += iters as u64;
                    }
                    part
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    })
}

fn run_frame(
    code: &LinearCode,
    decoder: &SpaDecoder,
    spec: &ChannelSpec,
    opts: &SimOptions,
    key: u64,
    frame: u64,
    scratch: &mut DecodeScratch,
) -> (usize, usize) {
    let mut rng = derive_rng(opts.master_seed, key, frame);
    let k = code.k();
    let u: Vec<u8> = (0..k).map(|_| rng.random_range(0..2u8)).collect();
    let c = code.encode(&u).expect("encoder accepts k bits");
    let tx = code.puncture(&c).expect("codeword length");
    let s = modulate(&tx);
    let fading = sample_fading(spec, s.len(), &mut rng);
    let r = transmit(&s, &fading, spec, &mut rng).expect("length");
    let llrs = llr(&r, &fading, spec, &code.transmit_mapping()).expect("length");
    let (iters, _converged) = decoder
        .decode(&llrs, opts.max_iter, scratch)
        .expect("length");
    let err_bits = scratch_bits(scratch, k)
        .iter()
        .zip(&u)
        .filter(|(a, b)| a != b)
        .count();
    (err_bits, iters)
}

fn scratch_bits(scratch: &DecodeScratch, k: usize) -> &[u8] {
    &scratch.bits()[..k]
}

/// Least-squares slope of `log10(FER)` against `Eb/N0` over the top SNR
/// points with nonzero FER, reported as decades per 10 dB. A diversity-`d`
/// code shows a slope near `d`.
pub fn diversity_slope(points: &[FerPoint]) -> Result<f64> {
    let mut pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.frame_errors > 0 && p.frames > 0)
        .map(|p| (p.eb_n0_db, p.fer().log10()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::InsufficientData(
            "diversity fit needs at least two points with nonzero FER".into(),
        ));
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let top = &pts[pts.len().saturating_sub(3)..];
    let n = top.len() as f64;
    let sx: f64 = top.iter().map(|p| p.0).sum();
    let sy: f64 = top.iter().map(|p| p.1).sum();
    let sxx: f64 = top.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = top.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return Err(Error::InsufficientData(
            "diversity fit needs distinct SNR values".into(),
        ));
    }
    let slope = (n * sxy - sx * sy) / denom;
    Ok(-10.0 * slope)
}

/// Interpolated SNR at which a curve crosses the given error rate, linear in
/// `(dB, log10 rate)` space. Points must be sorted by SNR; `None` when the
/// curve never crosses.
pub fn snr_at_rate(points: &[(f64, f64)], target: f64) -> Option<f64> {
    let lt = target.log10();
    for w in points.windows(2) {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        if y0 <= 0.0 || y1 <= 0.0 {
            continue;
        }
        let (l0, l1) = (y0.log10(), y1.log10());
        if (l0 - lt) * (l1 - lt) <= 0.0 && l0 != l1 {
            return Some(x0 + (x1 - x0) * (lt - l0) / (l1 - l0));
        }
    }
    None
}

/// Seed derivation: a splitmix64 chain absorbing the master seed, the SNR
/// point key and the frame index, expanded to a ChaCha seed. Stable across
/// platforms and rand versions.
pub fn derive_rng(master: u64, stream: u64, index: u64) -> ChaCha8Rng {
    let mut s = splitmix64(master ^ 0x243f_6a88_85a3_08d3);
    s = splitmix64(s ^ stream);
    s = splitmix64(s ^ index);
    let mut seed = [0u8; 32];
    for word in 0..4 {
        s = splitmix64(s);
        seed[word * 8..word * 8 + 8].copy_from_slice(&s.to_le_bytes());
    }
    ChaCha8Rng::from_seed(seed)
}

/// Key identifying an SNR point independently of sweep order.
pub fn point_key(eb_n0_db: f64) -> u64 {
    (eb_n0_db * 1000.0).round() as i64 as u64
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// CSV surface shared by the command-line tool and the test suite.
pub const FER_CSV_HEADER: &str = "eb_n0_db,frames,frame_errors,fer,bit_errors,ber,avg_iterations";

pub fn fer_csv_row(p: &FerPoint, k: usize) -> String {
    format!(
        "{},{},{},{:.6e},{},{:.6e},{:.4}",
        p.eb_n0_db,
        p.frames,
        p.frame_errors,
        p.fer(),
        p.bit_errors,
        p.ber(k),
        p.avg_iterations()
    )
}

pub const OUTAGE_CSV_HEADER: &str = "eb_n0_db,samples,outages,outage";

pub fn outage_csv_row(p: &OutagePoint) -> String {
    format!(
        "{},{},{},{:.6e}",
        p.eb_n0_db,
        p.samples,
        p.outages,
        p.estimate()
    )
}
