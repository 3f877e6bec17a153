//! Iterative binary decoding: flooding sum-product and min-sum over
//! BSC / BPSK-AWGN channels, with Monte-Carlo statistics.
//!
//! Redundant parity rows are kept in the decoding graph on purpose: the
//! extra check nodes are exactly what speeds up convergence, which the
//! Monte-Carlo harness measures via mean iteration counts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::matrix::BinaryMatrix;

/// Magnitude clip for log-likelihood ratios and messages.
const LLR_CLIP: f64 = 30.0;

/// A parity-check matrix prepared for message passing: the matrix itself
/// plus variable/check adjacency lists kept bit-exactly consistent with it.
#[derive(Debug, Clone)]
pub struct CodeInstance {
    h: BinaryMatrix,
    /// Per check: adjacent variables.
    check_vars: Vec<Vec<u32>>,
    /// Per variable: edge indices into the flat message arrays.
    var_edges: Vec<Vec<u32>>,
    /// Per check: first edge index (edges are grouped by check).
    check_offsets: Vec<u32>,
    edges: usize,
}

impl CodeInstance {
    pub fn new(h: BinaryMatrix) -> CodeInstance {
        let mut check_vars = Vec::with_capacity(h.rows());
        let mut var_edges = vec![Vec::new(); h.cols()];
        let mut check_offsets = Vec::with_capacity(h.rows() + 1);
        let mut edge = 0u32;
        for c in 0..h.rows() {
            check_offsets.push(edge);
            let vars: Vec<u32> = h.row_positions(c).iter().map(|&v| v as u32).collect();
            for &v in &vars {
                var_edges[v as usize].push(edge);
                edge += 1;
            }
            check_vars.push(vars);
        }
        check_offsets.push(edge);
        CodeInstance {
            h,
            check_vars,
            var_edges,
            check_offsets,
            edges: edge as usize,
        }
    }

    /// Code length (number of variables).
    pub fn n(&self) -> usize {
        self.h.cols()
    }

    /// Number of parity checks (rows, including redundant ones).
    pub fn m(&self) -> usize {
        self.h.rows()
    }

    pub fn h(&self) -> &BinaryMatrix {
        &self.h
    }

    /// Number of unsatisfied checks for a hard-decision word.
    pub fn syndrome_weight(&self, word: &[bool]) -> usize {
        self.check_vars
            .iter()
            .filter(|vars| vars.iter().fold(false, |acc, &v| acc ^ word[v as usize]))
            .count()
    }
}

/// Decoder selection for the Monte-Carlo harness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecoderKind {
    SumProduct,
    /// Min-sum with a normalization factor (1.0 = plain min-sum).
    MinSum { scale: f64 },
}

/// Outcome of one decoding attempt.
#[derive(Debug, Clone)]
pub struct DecodeResult {
    /// Hard-decision word after the last iteration.
    pub bits: Vec<bool>,
    /// Whether the syndrome reached zero. Converged results always satisfy
    /// `H * bits = 0`.
    pub converged: bool,
    /// Message-passing iterations used (0 when the channel word is already
    /// a codeword).
    pub iterations: usize,
    /// Syndrome weight before decoding and after each iteration.
    pub syndrome_trace: Vec<usize>,
}

/// Flooding sum-product decoding. Deterministic given its inputs; stops as
/// soon as the syndrome is zero.
pub fn decode_spa(code: &CodeInstance, llr: &[f64], max_iters: usize) -> DecodeResult {
    decode(code, llr, max_iters, DecoderKind::SumProduct)
}

/// Flooding min-sum decoding with check-message normalization.
pub fn decode_msa(code: &CodeInstance, llr: &[f64], max_iters: usize, scale: f64) -> DecodeResult {
    decode(code, llr, max_iters, DecoderKind::MinSum { scale })
}

fn clip(x: f64) -> f64 {
    x.clamp(-LLR_CLIP, LLR_CLIP)
}

/// Shared flooding schedule. Messages live in flat per-edge arrays grouped
/// by check; variable v's edges are listed in `var_edges[v]`.
pub fn decode(
    code: &CodeInstance,
    llr: &[f64],
    max_iters: usize,
    kind: DecoderKind,
) -> DecodeResult {
    assert_eq!(llr.len(), code.n(), "LLR length must match code length");
    let mut bits: Vec<bool> = llr.iter().map(|&l| l < 0.0).collect();
    let mut trace = vec![code.syndrome_weight(&bits)];
    if trace[0] == 0 {
        return DecodeResult {
            bits,
            converged: true,
            iterations: 0,
            syndrome_trace: trace,
        };
    }
    let mut var_to_chk: Vec<f64> = vec![0.0; code.edges];
    for (v, edges) in code.var_edges.iter().enumerate() {
        for &e in edges {
            var_to_chk[e as usize] = clip(llr[v]);
        }
    }
    let mut chk_to_var: Vec<f64> = vec![0.0; code.edges];
    let mut tanhs: Vec<f64> = Vec::new();
    let mut back: Vec<f64> = Vec::new();
    for iteration in 1..=max_iters {
        // Check update.
        for c in 0..code.m() {
            let lo = code.check_offsets[c] as usize;
            let hi = code.check_offsets[c + 1] as usize;
            match kind {
                DecoderKind::SumProduct => {
                    // Forward/backward tanh products avoid dividing by
                    // near-zero terms.
                    let d = hi - lo;
                    tanhs.clear();
                    tanhs.extend(var_to_chk[lo..hi].iter().map(|&m| (m / 2.0).tanh()));
                    back.clear();
                    back.resize(d + 1, 1.0);
                    for i in (0..d).rev() {
                        back[i] = back[i + 1] * tanhs[i];
                    }
                    let mut fwd = 1.0;
                    for i in 0..d {
                        let prod: f64 = fwd * back[i + 1];
                        let bounded = prod.clamp(-0.999_999_999_999, 0.999_999_999_999);
                        chk_to_var[lo + i] = clip(2.0 * bounded.atanh());
                        fwd *= tanhs[i];
                    }
                }
                DecoderKind::MinSum { scale } => {
                    let mut sign = 1.0f64;
                    let (mut min1, mut min2) = (f64::INFINITY, f64::INFINITY);
                    let mut argmin = lo;
                    for (e, &m) in var_to_chk[lo..hi].iter().enumerate() {
                        if m < 0.0 {
                            sign = -sign;
                        }
                        let mag = m.abs();
                        if mag < min1 {
                            min2 = min1;
                            min1 = mag;
                            argmin = lo + e;
                        } else if mag < min2 {
                            min2 = mag;
                        }
                    }
                    for e in lo..hi {
                        let m = var_to_chk[e];
                        let self_sign = if m < 0.0 { -1.0 } else { 1.0 };
                        let mag = if e == argmin { min2 } else { min1 };
                        chk_to_var[e] = clip(scale * sign * self_sign * mag);
                    }
                }
            }
        }
        // Variable update and hard decision.
        let mut totals: Vec<f64> = llr.iter().map(|&l| clip(l)).collect();
        for c in 0..code.m() {
            let lo = code.check_offsets[c] as usize;
            for (i, &v) in code.check_vars[c].iter().enumerate() {
                totals[v as usize] += chk_to_var[lo + i];
            }
        }
        for (v, edges) in code.var_edges.iter().enumerate() {
            for &e in edges {
                var_to_chk[e as usize] = clip(totals[v] - chk_to_var[e as usize]);
            }
            bits[v] = totals[v] < 0.0;
        }
        let weight = code.syndrome_weight(&bits);
        trace.push(weight);
        if weight == 0 {
            return DecodeResult {
                bits,
                converged: true,
                iterations: iteration,
                syndrome_trace: trace,
            };
        }
    }
    DecodeResult {
        bits,
        converged: false,
        iterations: max_iters,
        syndrome_trace: trace,
    }
}

/// Channel model for Monte-Carlo runs. The all-zero codeword is transmitted
/// with the BPSK mapping 0 -> +1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Channel {
    /// Binary symmetric channel with the given crossover probability.
    Bsc { crossover: f64 },
    /// BPSK over AWGN at the given Eb/N0 (dB); `rate` converts information
    /// SNR to symbol SNR.
    AwgnBpsk { ebn0_db: f64, rate: f64 },
}

impl Channel {
    /// Samples one frame of channel LLRs for the all-zero codeword.
    fn sample(&self, n: usize, rng: &mut ChaCha12Rng) -> Vec<f64> {
        match *self {
            Channel::Bsc { crossover } => {
                let magnitude = if crossover <= 0.0 {
                    LLR_CLIP
                } else {
                    clip(((1.0 - crossover) / crossover).ln())
                };
                (0..n)
                    .map(|_| {
                        if crossover > 0.0 && rng.gen_bool(crossover) {
                            -magnitude
                        } else {
                            magnitude
                        }
                    })
                    .collect()
            }
            Channel::AwgnBpsk { ebn0_db, rate } => {
                let sigma2 = 1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0));
                let sigma = sigma2.sqrt();
                (0..n)
                    .map(|_| {
                        let noise: f64 = rng.sample(StandardNormal);
                        2.0 * (1.0 + sigma * noise) / sigma2
                    })
                    .collect()
            }
        }
    }
}

/// Aggregate statistics of a Monte-Carlo run.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloReport {
    pub frames: usize,
    pub bit_errors: usize,
    pub block_errors: usize,
    pub ber: f64,
    pub bler: f64,
    /// Mean iterations over all frames (non-converged frames count the
    /// iteration cap).
    pub mean_iterations: f64,
    pub converged_frames: usize,
}

/// Runs `frames` independent all-zero-codeword transmissions. Frame f uses
/// a sub-seed derived from `seed` and f, so runs are reproducible and
/// frames could be distributed across workers without changing results.
/// Every converged output is verified to be a codeword.
pub fn monte_carlo(
    code: &CodeInstance,
    channel: Channel,
    frames: usize,
    max_iters: usize,
    seed: u64,
    kind: DecoderKind,
) -> MonteCarloReport {
    assert!(frames >= 1, "at least one frame");
    let mut bit_errors = 0;
    let mut block_errors = 0;
    let mut total_iterations = 0usize;
    let mut converged_frames = 0;
    for frame in 0..frames {
        let mut rng = ChaCha12Rng::seed_from_u64(frame_seed(seed, frame as u64));
        let llr = channel.sample(code.n(), &mut rng);
        let result = decode(code, &llr, max_iters, kind);
        if result.converged {
            converged_frames += 1;
            assert_eq!(
                code.syndrome_weight(&result.bits),
                0,
                "converged decode must satisfy every parity check"
            );
        }
        let errors = result.bits.iter().filter(|&&b| b).count();
        bit_errors += errors;
        if errors > 0 || !result.converged {
            block_errors += 1;
        }
        total_iterations += result.iterations;
    }
    MonteCarloReport {
        frames,
        bit_errors,
        block_errors,
        ber: bit_errors as f64 / (frames * code.n()) as f64,
        bler: block_errors as f64 / frames as f64,
        mean_iterations: total_iterations as f64 / frames as f64,
        converged_frames,
    }
}

/// SplitMix-style mixing of the master seed and frame index.
fn frame_seed(seed: u64, frame: u64) -> u64 {
    let mut z = seed ^ frame.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;

    /// Parity-check matrix of the (7, 4) Hamming code.
    fn hamming_code() -> CodeInstance {
        let h = BinaryMatrix::from_fn(3, 7, |i, j| (j + 1) >> i & 1 == 1);
        CodeInstance::new(h)
    }

    fn noiseless_llr(word: &[bool]) -> Vec<f64> {
        word.iter().map(|&b| if b { -20.0 } else { 20.0 }).collect()
    }

    #[test]
    fn adjacency_matches_matrix() {
        let code = hamming_code();
        for c in 0..code.m() {
            for v in 0..code.n() {
                let adjacent = code.check_vars[c].contains(&(v as u32));
                assert_eq!(adjacent, code.h().get(c, v));
            }
        }
    }

    #[test]
    fn noiseless_all_zero_converges_immediately() {
        let code = hamming_code();
        let result = decode_spa(&code, &noiseless_llr(&[false; 7]), 10);
        assert!(result.converged);
        assert_eq!(result.iterations, 0);
        assert!(result.bits.iter().all(|&b| !b));
    }

    #[test]
    fn noiseless_codeword_converges_immediately() {
        let code = hamming_code();
        // 1110000 is a Hamming codeword.
        let word = [true, true, true, false, false, false, false];
        assert_eq!(code.syndrome_weight(&word), 0);
        let result = decode_spa(&code, &noiseless_llr(&word), 10);
        assert!(result.converged);
        assert_eq!(result.iterations, 0);
        assert_eq!(result.bits, word);
    }

    #[test]
    fn single_flip_corrected() {
        let code = hamming_code();
        for flip in 0..7 {
            let mut llr = noiseless_llr(&[false; 7]);
            llr[flip] = -llr[flip];
            for decoder in [DecoderKind::SumProduct, DecoderKind::MinSum { scale: 0.75 }] {
                let result = decode(&code, &llr, 20, decoder);
                assert!(result.converged, "flip {flip} with {decoder:?}");
                assert!(result.iterations <= 5);
                assert!(result.bits.iter().all(|&b| !b));
            }
        }
    }

    #[test]
    fn converged_word_satisfies_every_check() {
        let code = hamming_code();
        let mut rng = <StdRng as SeedableRng>::seed_from_u64(79);
        for _ in 0..200 {
            let llr: Vec<f64> = (0..7).map(|_| rng.gen_range(-4.0..4.0)).collect();
            let result = decode_spa(&code, &llr, 30);
            if result.converged {
                assert_eq!(code.syndrome_weight(&result.bits), 0);
                assert_eq!(*result.syndrome_trace.last().unwrap(), 0);
            }
        }
    }

    #[test]
    fn llr_sign_flip_complements_decisions() {
        // With every check degree even, the all-ones word is a codeword and
        // flipping all LLR signs complements the decoded word exactly.
        let h = BinaryMatrix::from_fn(4, 8, |i, j| j % 4 == i || (j + 1) % 4 == i);
        let code = CodeInstance::new(h);
        assert!(code.check_vars.iter().all(|v| v.len() % 2 == 0));
        let mut rng = <StdRng as SeedableRng>::seed_from_u64(83);
        for _ in 0..100 {
            let llr: Vec<f64> = (0..8).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let flipped: Vec<f64> = llr.iter().map(|&l| -l).collect();
            let a = decode_spa(&code, &llr, 15);
            let b = decode_spa(&code, &flipped, 15);
            assert_eq!(a.converged, b.converged);
            assert_eq!(a.iterations, b.iterations);
            let complemented: Vec<bool> = a.bits.iter().map(|&x| !x).collect();
            assert_eq!(b.bits, complemented);
        }
    }

    #[test]
    fn spa_equals_msa_on_degree_two_checks() {
        // Degree-2 check messages are identical under both rules.
        let mut h = BinaryMatrix::zeros(4, 5);
        for i in 0..4 {
            h.set(i, i, true);
            h.set(i, i + 1, true);
        }
        let code = CodeInstance::new(h);
        let mut rng = <StdRng as SeedableRng>::seed_from_u64(89);
        for _ in 0..100 {
            let llr: Vec<f64> = (0..5).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let spa = decode_spa(&code, &llr, 8);
            let msa = decode_msa(&code, &llr, 8, 1.0);
            assert_eq!(spa.bits, msa.bits);
            assert_eq!(spa.iterations, msa.iterations);
        }
    }

    #[test]
    fn zero_crossover_is_error_free() {
        let code = hamming_code();
        let report = monte_carlo(
            &code,
            Channel::Bsc { crossover: 0.0 },
            50,
            10,
            1,
            DecoderKind::SumProduct,
        );
        assert_eq!(report.ber, 0.0);
        assert_eq!(report.bler, 0.0);
        assert_eq!(report.mean_iterations, 0.0);
        assert_eq!(report.converged_frames, 50);
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let code = hamming_code();
        let channel = Channel::AwgnBpsk {
            ebn0_db: 3.0,
            rate: 4.0 / 7.0,
        };
        let a = monte_carlo(&code, channel, 200, 20, 42, DecoderKind::SumProduct);
        let b = monte_carlo(&code, channel, 200, 20, 42, DecoderKind::SumProduct);
        assert_eq!(a, b);
        let c = monte_carlo(&code, channel, 200, 20, 43, DecoderKind::SumProduct);
        assert_ne!(a, c);
    }

    #[test]
    fn bsc_magnitudes_follow_crossover() {
        let channel = Channel::Bsc { crossover: 0.1 };
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let llr = channel.sample(1000, &mut rng);
        let expected = (0.9f64 / 0.1).ln();
        let flips = llr.iter().filter(|&&l| l < 0.0).count();
        assert!(llr.iter().all(|&l| (l.abs() - expected).abs() < 1e-12));
        // 100 +- 30 flips out of 1000 at p = 0.1.
        assert!((70..=130).contains(&flips), "{flips}");
    }
}
