//! Channel models and the channel transform induced by inner ML decoding.
//!
//! Randomness comes from ChaCha8 with a 256-bit key whose first 8 bytes are
//! the little-endian seed (rest zero) and whose 64-bit stream number is the
//! stream id. Monte-Carlo trial `t` always uses stream `t`, so results do not
//! depend on thread count. Derived draws:
//!
//! * Bernoulli(p): one `next_u64` value `u`, success iff `u < floor(p * 2^64)`;
//! * uniform below `n`: `(u * n) >> 64` on one `next_u64` value;
//! * random bits: successive `next_u64` values, least significant bit first.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use thiserror::Error;

use crate::linearcode::{mask, BinaryLinearCode, CosetPartition, DecodeOutcome, PackedWord, TernaryWord, Trit};
use crate::rscode::{Symbol, SymbolWord};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("crossover probability {0} outside [0, 0.5]")]
    BadCrossover(f64),
    #[error("invalid error/erasure probabilities ({p_err}, {p_eras})")]
    BadErrorErasure { p_err: f64, p_eras: f64 },
    #[error("at least one trial is required")]
    NoTrials,
}

/// A reproducible random stream identified by (seed, stream id).
pub struct RngStream {
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(stream_id);
        RngStream { rng }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform integer in 0..n.
    #[inline]
    pub fn below(&mut self, n: u64) -> u64 {
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }

    #[inline]
    pub fn bernoulli(&mut self, threshold: u128) -> bool {
        (self.next_u64() as u128) < threshold
    }

    /// `bits` random bits packed LSB first.
    pub fn bits_u128(&mut self, bits: usize) -> u128 {
        let lo = self.next_u64() as u128;
        let hi = if bits > 64 { self.next_u64() as u128 } else { 0 };
        (lo | hi << 64) & mask(bits)
    }

    pub fn bits(&mut self, n: usize) -> Vec<bool> {
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let w = self.next_u64();
            out.extend((0..64.min(n - out.len())).map(|i| w >> i & 1 == 1));
        }
        out
    }
}

/// floor(p * 2^64) as a comparison threshold for [`RngStream::bernoulli`].
pub fn threshold(p: f64) -> u128 {
    (p * 18446744073709551616.0) as u128
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bsc {
    p: f64,
}

impl Bsc {
    pub fn new(p: f64) -> Result<Self, ChannelError> {
        if !(0.0..=0.5).contains(&p) {
            return Err(ChannelError::BadCrossover(p));
        }
        Ok(Bsc { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Error pattern for `n <= 128` bits, one Bernoulli draw per bit in order.
    pub fn error_u128(&self, n: usize, rng: &mut RngStream) -> u128 {
        let t = threshold(self.p);
        (0..n).fold(0, |acc, i| acc | (rng.bernoulli(t) as u128) << i)
    }

    pub fn sample(&self, word: &[bool], rng: &mut RngStream) -> Vec<bool> {
        let t = threshold(self.p);
        word.iter().map(|&b| b ^ rng.bernoulli(t)).collect()
    }
}

pub fn bsc_sample(word: &[bool], p: f64, rng: &mut RngStream) -> Result<Vec<bool>, ChannelError> {
    Ok(Bsc::new(p)?.sample(word, rng))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorErasureChannel {
    p_err: f64,
    p_eras: f64,
}

impl ErrorErasureChannel {
    pub fn new(p_err: f64, p_eras: f64) -> Result<Self, ChannelError> {
        let ok = p_err >= 0.0 && p_eras >= 0.0 && p_err + p_eras <= 1.0;
        if !ok {
            return Err(ChannelError::BadErrorErasure { p_err, p_eras });
        }
        Ok(ErrorErasureChannel { p_err, p_eras })
    }

    pub fn p_err(&self) -> f64 {
        self.p_err
    }

    pub fn p_eras(&self) -> f64 {
        self.p_eras
    }

    /// Per symbol one draw `u`: erase if u < t_eras, corrupt if
    /// t_eras <= u < t_eras + t_err, pass otherwise.
    fn event(&self, rng: &mut RngStream) -> Trit {
        let te = threshold(self.p_eras);
        let tx = threshold(self.p_eras + self.p_err);
        let u = rng.next_u64() as u128;
        if u < te {
            Trit::Erased
        } else if u < tx {
            Trit::One
        } else {
            Trit::Zero
        }
    }

    /// Symbols over GF(2^m); a corrupted symbol is XORed with a uniform nonzero value.
    pub fn sample_symbols(&self, word: &[u16], q: usize, rng: &mut RngStream) -> SymbolWord {
        word.iter()
            .map(|&s| -> Symbol {
                match self.event(rng) {
                    Trit::Erased => None,
                    Trit::One => Some(s ^ (1 + rng.below(q as u64 - 1)) as u16),
                    Trit::Zero => Some(s),
                }
            })
            .collect()
    }

    pub fn sample_bits(&self, word: &[bool], rng: &mut RngStream) -> TernaryWord {
        TernaryWord::new(
            word.iter()
                .map(|&b| match self.event(rng) {
                    Trit::Erased => Trit::Erased,
                    Trit::One => Trit::from_bit(!b),
                    Trit::Zero => Trit::from_bit(b),
                })
                .collect(),
        )
    }

    /// Count of (errors, erasures) over n symbols, without materializing a word.
    pub fn sample_counts(&self, n: usize, rng: &mut RngStream) -> (usize, usize) {
        (0..n).fold((0, 0), |(t, d), _| match self.event(rng) {
            Trit::Erased => (t, d + 1),
            Trit::One => (t + 1, d),
            Trit::Zero => (t, d),
        })
    }
}

pub fn eec_sample(word: &[u16], q: usize, ch: &ErrorErasureChannel, rng: &mut RngStream) -> SymbolWord {
    ch.sample_symbols(word, q, rng)
}

/// Wilson score interval for `k` successes out of `n` at confidence z.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let (k, n) = (k as f64, n as f64);
    let p = k / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if k == 0.0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if k == n { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

pub const Z95: f64 = 1.959963984540054;

/// Frequencies of the three row outcomes after inner decoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TransformCounts {
    pub trials: u64,
    pub correct: u64,
    pub errors: u64,
    pub erasures: u64,
}

impl TransformCounts {
    fn merge(self, o: Self) -> Self {
        TransformCounts {
            trials: self.trials + o.trials,
            correct: self.correct + o.correct,
            errors: self.errors + o.errors,
            erasures: self.erasures + o.erasures,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransformEstimate {
    pub counts: TransformCounts,
    pub p_err: f64,
    pub p_eras: f64,
    /// Half-widths of the 95% Wilson intervals.
    pub err_radius: f64,
    pub eras_radius: f64,
}

impl TransformEstimate {
    fn from_counts(c: TransformCounts) -> Self {
        let half = |k| {
            let (lo, hi) = wilson_interval(k, c.trials, Z95);
            (hi - lo) / 2.0
        };
        TransformEstimate {
            counts: c,
            p_err: c.errors as f64 / c.trials as f64,
            p_eras: c.erasures as f64 / c.trials as f64,
            err_radius: half(c.errors),
            eras_radius: half(c.erasures),
        }
    }
}

/// Which decision counts as an error.
#[derive(Clone, Copy)]
enum Target<'a> {
    Codeword(&'a BinaryLinearCode),
    Label(&'a CosetPartition),
}

impl Target<'_> {
    fn code(&self) -> &BinaryLinearCode {
        match self {
            Target::Codeword(c) => c,
            Target::Label(p) => p.parent(),
        }
    }

    fn classify(&self, sent: u128, decided: DecodeOutcome<u128>) -> Trit {
        match decided {
            DecodeOutcome::Failure => Trit::Erased,
            DecodeOutcome::Decoded(c) => {
                let wrong = match self {
                    Target::Codeword(_) => c != sent,
                    Target::Label(p) => p.label_of(c) != p.label_of(sent),
                };
                if wrong {
                    Trit::One
                } else {
                    Trit::Zero
                }
            }
        }
    }
}

fn estimate(target: Target<'_>, p: f64, trials: u64, seed: u64) -> Result<TransformEstimate, ChannelError> {
    if trials == 0 {
        return Err(ChannelError::NoTrials);
    }
    let bsc = Bsc::new(p)?;
    let code = target.code();
    let (n, k) = (code.n(), code.k());
    let words = code.codewords();
    let counts = (0..trials)
        .into_par_iter()
        .fold(TransformCounts::default, |mut acc, t| {
            let mut rng = RngStream::new(seed, t);
            let sent = words[rng.bits_u128(k) as usize];
            let y = sent ^ bsc.error_u128(n, &mut rng);
            let decided = code.ml_decode_packed(PackedWord::clean(y)).expect("k <= 16").map(|d| d.codeword);
            acc.trials += 1;
            match target.classify(sent, decided) {
                Trit::Zero => acc.correct += 1,
                Trit::One => acc.errors += 1,
                Trit::Erased => acc.erasures += 1,
            }
            acc
        })
        .reduce(TransformCounts::default, TransformCounts::merge);
    Ok(TransformEstimate::from_counts(counts))
}

/// Monte-Carlo estimate of the (error, erasure) channel seen after ML
/// decoding of `code` on a BSC(p), with random transmitted codewords.
pub fn estimate_transform(code: &BinaryLinearCode, p: f64, trials: u64, seed: u64) -> Result<TransformEstimate, ChannelError> {
    estimate(Target::Codeword(code), p, trials, seed)
}

/// As [`estimate_transform`], but an outcome is an error only if the coset
/// label of the decision is wrong. ML runs over the partition's parent,
/// i.e. conditioned on all earlier partition levels being decoded correctly.
pub fn estimate_label_transform(
    partition: &CosetPartition,
    p: f64,
    trials: u64,
    seed: u64,
) -> Result<TransformEstimate, ChannelError> {
    estimate(Target::Label(partition), p, trials, seed)
}

/// Largest length for which exact transforms enumerate all error patterns.
pub const EXACT_MAX_LEN: usize = 20;

/// Exact (p_err, p_eras) for label decisions, when cheap to compute:
/// repetition parents by the binomial tail, otherwise full enumeration of
/// error patterns for n <= 20 (ML with ties is translation invariant, so the
/// zero codeword suffices).
pub fn exact_label_transform(partition: &CosetPartition, p: f64) -> Option<(f64, f64)> {
    let code = partition.parent();
    let n = code.n();
    if code.k() == 1 && code.rows()[0] == mask(n) {
        let pmf = |i: usize| binomial_f64(n, i) * p.powi(i as i32) * (1.0 - p).powi((n - i) as i32);
        let err: f64 = (0..=n).filter(|&i| 2 * i > n).map(pmf).sum();
        let eras = if n.is_multiple_of(2) { pmf(n / 2) } else { 0.0 };
        return Some((err, eras));
    }
    if n > EXACT_MAX_LEN {
        return None;
    }
    let target = Target::Label(partition);
    let mut err = 0.0;
    let mut eras = 0.0;
    for e in 0u128..1 << n {
        let w = e.count_ones() as i32;
        let prob = p.powi(w) * (1.0 - p).powi(n as i32 - w);
        let decided = code.ml_decode_packed(PackedWord::clean(e)).expect("k <= 16").map(|d| d.codeword);
        match target.classify(0, decided) {
            Trit::One => err += prob,
            Trit::Erased => eras += prob,
            Trit::Zero => {}
        }
    }
    Some((err, eras))
}

pub fn binomial_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k.min(n - k)).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
