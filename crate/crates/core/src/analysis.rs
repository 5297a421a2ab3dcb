//! Block-error analysis: exact per-stage failure probabilities, the union
//! bound over stages, Monte-Carlo block-error estimation, and the power
//! decoding radius table.
//!
//! Tail sums are exact. Every `f64` probability is a dyadic rational, so all
//! channel parameters share a denominator `D = 2^E`, and every tail term is an
//! integer over `D^n` (or `D^(2n)`). Rounding happens once, at the end.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::channel::{estimate_label_transform, exact_label_transform, wilson_interval, Bsc, ChannelError, RngStream, Z95};
use crate::gccode::{DecoderPolicy, GcCodeSpec, GcError, GcOutcome, OuterCode};
use crate::rscode::{power_lmax, power_radius};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("invalid channel: p_err={p_err}, p_eras={p_eras}")]
    BadChannel { p_err: f64, p_eras: f64 },
    #[error("probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("invalid range: {0}")]
    BadRange(String),
    #[error("need at least one trial")]
    NoTrials,
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Gc(#[from] GcError),
}

/// When an outer decoder succeeds, as a function of errors `tau` and erasures `delta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuccessPredicate {
    /// 2 tau + delta < d.
    HalfDistance { d: usize },
    /// RS power decoding: half-distance, or tau within the power decoding
    /// radius of the code punctured at the erasures.
    Power { k: usize, ell_max: usize },
}

impl SuccessPredicate {
    pub fn succeeds(&self, n: usize, tau: usize, delta: usize) -> bool {
        match *self {
            SuccessPredicate::HalfDistance { d } => 2 * tau + delta < d,
            SuccessPredicate::Power { k, ell_max } => {
                if 2 * tau + delta < n + 1 - k.min(n + 1) {
                    return true;
                }
                if delta + k >= n {
                    return false;
                }
                let n_eff = n - delta;
                let ell = power_lmax(n_eff, k).min(ell_max.max(1));
                tau <= power_radius(n_eff, k, ell).unwrap_or(0)
            }
        }
    }
}

/// How the joint distribution of (errors, erasures) over the outer word is formed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TailModel {
    /// Each symbol is independently correct, erroneous or erased:
    /// C(n,δ) C(n−δ,τ) p_x^δ p_e^τ (1−p_x−p_e)^(n−δ−τ).
    #[default]
    Trinomial,
    /// δ ~ Bin(n, p_x), then τ ~ Bin(n − δ, p_e) on the unerased symbols.
    ConditionalErrors,
    /// δ ~ Bin(n, p_x) and τ ~ Bin(n, p_e) independently; pairs with
    /// τ + δ > n count as failures.
    IndependentCounts,
}

impl TailModel {
    pub const ALL: [TailModel; 3] = [TailModel::Trinomial, TailModel::ConditionalErrors, TailModel::IndependentCounts];

    pub fn name(&self) -> &'static str {
        match self {
            TailModel::Trinomial => "trinomial",
            TailModel::ConditionalErrors => "conditional",
            TailModel::IndependentCounts => "independent",
        }
    }
}

/// One stage of the union bound: an outer code of length `n` fed by a
/// symbol channel with error and erasure probabilities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StageModel {
    pub n: usize,
    pub predicate: SuccessPredicate,
    pub p_err: f64,
    pub p_eras: f64,
    pub tail: TailModel,
}

impl StageModel {
    pub fn new(n: usize, predicate: SuccessPredicate, p_err: f64, p_eras: f64) -> Self {
        StageModel { n, predicate, p_err, p_eras, tail: TailModel::default() }
    }

    pub fn with_tail(mut self, tail: TailModel) -> Self {
        self.tail = tail;
        self
    }
}

/// An exact probability `num / 2^log2_den`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactProbability {
    pub num: BigUint,
    pub log2_den: u64,
}

impl ExactProbability {
    pub fn is_one(&self) -> bool {
        self.num == BigUint::one() << self.log2_den
    }

    /// Nearest-below `f64` (truncates to 64 significant bits first).
    pub fn to_f64(&self) -> f64 {
        if self.num.is_zero() {
            return 0.0;
        }
        let bits = self.num.bits();
        let shift = bits.saturating_sub(64);
        let top = (&self.num >> shift).to_u64().expect("at most 64 bits") as f64;
        let exp = shift as i64 - self.log2_den as i64;
        top * 2f64.powi(exp.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
    }

    /// Decimal scientific notation with `digits` significant digits, truncated.
    pub fn to_scientific(&self, digits: usize) -> String {
        if self.num.is_zero() {
            return "0".into();
        }
        let digits = digits.max(1);
        // value = num / 2^s; find e with 10^e <= value < 10^(e+1).
        let den = BigUint::one() << self.log2_den;
        let ten = BigUint::from(10u8);
        let mut e: i64 = (self.to_f64().log10().floor()) as i64;
        let scaled = |e: i64| -> BigUint {
            // floor(value * 10^(digits-1-e))
            let p = digits as i64 - 1 - e;
            if p >= 0 {
                (&self.num * ten.pow(p as u32)) / &den
            } else {
                &self.num / (&den * ten.pow((-p) as u32))
            }
        };
        let lo = ten.pow(digits as u32 - 1);
        let mut m = scaled(e);
        while m >= &lo * &ten {
            e += 1;
            m = scaled(e);
        }
        while m < lo {
            e -= 1;
            m = scaled(e);
        }
        let s = m.to_string();
        let (head, tail) = s.split_at(1);
        if tail.is_empty() {
            format!("{head}e{e}")
        } else {
            format!("{head}.{tail}e{e}")
        }
    }
}

/// Split a finite non-negative f64 into `mantissa * 2^exponent`.
fn dyadic(x: f64) -> (u64, i64) {
    let bits = x.to_bits();
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    if exp_bits == 0 {
        (frac, -1074)
    } else {
        (frac | 1 << 52, exp_bits - 1075)
    }
}

/// Integer numerators of the given probabilities over a shared `2^e`.
fn common_denominator(ps: &[f64]) -> (Vec<BigUint>, u64) {
    let parts: Vec<(u64, i64)> = ps.iter().map(|&p| dyadic(p)).collect();
    let e = parts.iter().filter(|(m, _)| *m != 0).map(|&(_, x)| (-x).max(0)).max().unwrap_or(0) as u64;
    let nums = parts.iter().map(|&(m, x)| BigUint::from(m) << (x + e as i64) as u64).collect();
    (nums, e)
}

fn check_channel(p_err: f64, p_eras: f64) -> Result<(), AnalysisError> {
    let ok = |p: f64| p.is_finite() && (0.0..=1.0).contains(&p);
    if !ok(p_err) || !ok(p_eras) || p_err + p_eras > 1.0 {
        return Err(AnalysisError::BadChannel { p_err, p_eras });
    }
    Ok(())
}

fn binomials(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for k in 1..=n {
        let next = &row[k - 1] * BigUint::from(n + 1 - k) / BigUint::from(k);
        row.push(next);
    }
    row
}

fn powers(base: &BigUint, n: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(BigUint::one());
    for i in 1..=n {
        let next = &out[i - 1] * base;
        out.push(next);
    }
    out
}

/// Probability mass of the (τ, δ) pairs selected by `include`.
fn tail_mass(
    n: usize,
    p_err: f64,
    p_eras: f64,
    tail: TailModel,
    include: impl Fn(usize, usize) -> bool,
) -> Result<ExactProbability, AnalysisError> {
    check_channel(p_err, p_eras)?;
    let (nums, e) = common_denominator(&[p_err, p_eras]);
    let (a_err, a_eras) = (&nums[0], &nums[1]);
    let d = BigUint::one() << e;
    let mut binom_rows: Vec<Vec<BigUint>> = Vec::new();
    let mut binom = |m: usize| -> Vec<BigUint> {
        while binom_rows.len() <= m {
            let len = binom_rows.len();
            binom_rows.push(binomials(len));
        }
        binom_rows[m].clone()
    };
    let cn = binom(n);
    let pow_x = powers(a_eras, n);
    let pow_e = powers(a_err, n);
    let mut total = BigUint::zero();
    let log2_den = match tail {
        TailModel::Trinomial => {
            let c = &d - a_err - a_eras;
            let pow_c = powers(&c, n);
            for delta in 0..=n {
                let rest = n - delta;
                let cr = binom(rest);
                let mut inner = BigUint::zero();
                for tau in 0..=rest {
                    if include(tau, delta) {
                        inner += &cr[tau] * &pow_e[tau] * &pow_c[rest - tau];
                    }
                }
                if !inner.is_zero() {
                    total += inner * &cn[delta] * &pow_x[delta];
                }
            }
            e * n as u64
        }
        TailModel::ConditionalErrors => {
            let pow_nx = powers(&(&d - a_eras), n);
            let pow_ne = powers(&(&d - a_err), n);
            let pow_d = powers(&d, n);
            for delta in 0..=n {
                let rest = n - delta;
                let cr = binom(rest);
                let mut inner = BigUint::zero();
                for tau in 0..=rest {
                    if include(tau, delta) {
                        inner += &cr[tau] * &pow_e[tau] * &pow_ne[rest - tau];
                    }
                }
                if !inner.is_zero() {
                    total += inner * &cn[delta] * &pow_x[delta] * &pow_nx[rest] * &pow_d[delta];
                }
            }
            2 * e * n as u64
        }
        TailModel::IndependentCounts => {
            let pow_nx = powers(&(&d - a_eras), n);
            let pow_ne = powers(&(&d - a_err), n);
            let err_terms: Vec<BigUint> = (0..=n).map(|t| &cn[t] * &pow_e[t] * &pow_ne[n - t]).collect();
            for delta in 0..=n {
                let mut inner = BigUint::zero();
                for (tau, term) in err_terms.iter().enumerate() {
                    if include(tau, delta) {
                        inner += term;
                    }
                }
                if !inner.is_zero() {
                    total += inner * &cn[delta] * &pow_x[delta] * &pow_nx[n - delta];
                }
            }
            2 * e * n as u64
        }
    };
    Ok(ExactProbability { num: total, log2_den })
}

/// Exact probability that the stage's outer decoder fails.
pub fn stage_fail_exact(model: &StageModel) -> Result<ExactProbability, AnalysisError> {
    let n = model.n;
    let pred = model.predicate;
    tail_mass(n, model.p_err, model.p_eras, model.tail, |tau, delta| {
        tau + delta > n || !pred.succeeds(n, tau, delta)
    })
}

pub fn stage_fail_prob(model: &StageModel) -> Result<f64, AnalysisError> {
    Ok(stage_fail_exact(model)?.to_f64())
}

/// Total probability mass of the tail model (exactly one).
pub fn total_mass(n: usize, p_err: f64, p_eras: f64, tail: TailModel) -> Result<ExactProbability, AnalysisError> {
    tail_mass(n, p_err, p_eras, tail, |_, _| true)
}

/// Per-stage failure probabilities and their union bound.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorBudget {
    pub stages: Vec<f64>,
    pub total: f64,
}

/// Sum of the stage probabilities, clamped to 1.
pub fn union_bound(stages: &[f64]) -> Result<ErrorBudget, AnalysisError> {
    if let Some(&bad) = stages.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(AnalysisError::BadProbability(bad));
    }
    let total = stages.iter().sum::<f64>().min(1.0);
    Ok(ErrorBudget { stages: stages.to_vec(), total })
}

/// Success predicate matching a level's outer decoder.
pub fn level_predicate(outer: &OuterCode, policy: DecoderPolicy) -> SuccessPredicate {
    match policy {
        DecoderPolicy::Power { ell_max } => SuccessPredicate::Power { k: outer.k(), ell_max },
        _ => SuccessPredicate::HalfDistance { d: outer.d() },
    }
}

/// Stage models of a GC code given one (p_err, p_eras) channel per level.
pub fn gc_stage_models(spec: &GcCodeSpec, channels: &[(f64, f64)], tail: TailModel) -> Result<Vec<StageModel>, AnalysisError> {
    if channels.len() != spec.levels().len() {
        return Err(AnalysisError::BadRange(format!(
            "{} channels for {} levels",
            channels.len(),
            spec.levels().len()
        )));
    }
    Ok(spec
        .levels()
        .iter()
        .zip(channels)
        .map(|(level, &(pe, px))| {
            StageModel::new(spec.n_outer(), level_predicate(level.outer(), level.policy()), pe, px).with_tail(tail)
        })
        .collect())
}

/// Exact per-level symbol channels at BSC crossover `p`, each level
/// conditioned on correct decisions at the earlier levels. `None` when some
/// level is too long for exact enumeration.
pub fn exact_level_channels(spec: &GcCodeSpec, p: f64) -> Option<Vec<(f64, f64)>> {
    spec.levels().iter().map(|l| exact_label_transform(l.partition(), p)).collect()
}

/// Symbol channel seen by one GC level.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LevelChannel {
    pub p_err: f64,
    pub p_eras: f64,
    /// Exact value, or a Monte-Carlo estimate.
    pub exact: bool,
}

pub const DEFAULT_TRANSFORM_TRIALS: u64 = 1_000_000;

/// Per-level channels at crossover `p`: exact where the inner code is short
/// enough or a repetition code, estimated with `trials` row trials
/// otherwise. Level `i` uses seed `seed + i`.
pub fn level_channels(spec: &GcCodeSpec, p: f64, trials: u64, seed: u64) -> Result<Vec<LevelChannel>, AnalysisError> {
    spec.levels()
        .iter()
        .enumerate()
        .map(|(i, level)| match exact_label_transform(level.partition(), p) {
            Some((p_err, p_eras)) => Ok(LevelChannel { p_err, p_eras, exact: true }),
            None => {
                let est = estimate_label_transform(level.partition(), p, trials, seed.wrapping_add(i as u64))?;
                Ok(LevelChannel { p_err: est.p_err, p_eras: est.p_eras, exact: false })
            }
        })
        .collect()
}

/// Tail model under which a preset's reference figures are reproduced:
/// conditional errors for the RM-based GC code, independent counts for the
/// RS-based constructions.
pub fn default_tail(code_id: &str) -> TailModel {
    match code_id {
        "gc-rm-2048" => TailModel::ConditionalErrors,
        _ => TailModel::IndependentCounts,
    }
}

/// Union bound of a GC code over the given per-level channels.
pub fn gc_union_bound(spec: &GcCodeSpec, channels: &[(f64, f64)], tail: TailModel) -> Result<ErrorBudget, AnalysisError> {
    let stages = gc_stage_models(spec, channels, tail)?
        .iter()
        .map(stage_fail_prob)
        .collect::<Result<Vec<_>, _>>()?;
    union_bound(&stages)
}

/// Monte-Carlo outcome counts. Each trial lands in exactly one bucket: a
/// success, a detected failure at the level that failed, or a
/// miscorrection at the first level whose info bits are wrong.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Taxonomy {
    pub success: u64,
    pub failures: Vec<u64>,
    pub miscorrections: Vec<u64>,
}

impl Taxonomy {
    fn new(levels: usize) -> Self {
        Taxonomy { success: 0, failures: vec![0; levels], miscorrections: vec![0; levels] }
    }

    fn merge(mut self, other: Taxonomy) -> Taxonomy {
        self.success += other.success;
        for (a, b) in self.failures.iter_mut().zip(other.failures) {
            *a += b;
        }
        for (a, b) in self.miscorrections.iter_mut().zip(other.miscorrections) {
            *a += b;
        }
        self
    }

    pub fn trials(&self) -> u64 {
        self.success + self.block_errors()
    }

    pub fn block_errors(&self) -> u64 {
        self.failures.iter().sum::<u64>() + self.miscorrections.iter().sum::<u64>()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonteCarloResult {
    pub trials: u64,
    pub block_errors: u64,
    pub estimate: f64,
    /// 95% Wilson score interval.
    pub interval: (f64, f64),
    /// 3 / trials when no block error was seen.
    pub rule_of_three: Option<f64>,
    pub taxonomy: Taxonomy,
}

/// Block-error rate of a GC code over a BSC. Trial `t` draws all its
/// randomness from stream `t` of `seed`, so results do not depend on the
/// thread count.
pub fn monte_carlo_block_error(spec: &GcCodeSpec, p: f64, trials: u64, seed: u64) -> Result<MonteCarloResult, AnalysisError> {
    if trials == 0 {
        return Err(AnalysisError::NoTrials);
    }
    let bsc = Bsc::new(p)?;
    let levels = spec.levels().len();
    let level_bits: Vec<usize> = spec.levels().iter().map(|l| l.info_bits()).collect();
    let taxonomy = (0..trials)
        .into_par_iter()
        .fold(
            || Taxonomy::new(levels),
            |mut tally, t| {
                let mut rng = RngStream::new(seed, t);
                let info = rng.bits(spec.k());
                let rows = spec.encode(&info).expect("info length matches");
                let received: Vec<u128> = rows.iter().map(|&r| r ^ bsc.error_u128(spec.n_inner(), &mut rng)).collect();
                match spec.decode(&received).expect("row count matches") {
                    GcOutcome::Failure { level } => tally.failures[level] += 1,
                    GcOutcome::Decoded(d) if d.info == info => tally.success += 1,
                    GcOutcome::Decoded(d) => {
                        let mut start = 0;
                        let level = level_bits
                            .iter()
                            .position(|&w| {
                                let wrong = d.info[start..start + w] != info[start..start + w];
                                start += w;
                                wrong
                            })
                            .unwrap_or(levels - 1);
                        tally.miscorrections[level] += 1;
                    }
                }
                tally
            },
        )
        .reduce(|| Taxonomy::new(levels), Taxonomy::merge);
    let errors = taxonomy.block_errors();
    Ok(MonteCarloResult {
        trials,
        block_errors: errors,
        estimate: errors as f64 / trials as f64,
        interval: wilson_interval(errors, trials, Z95),
        rule_of_three: (errors == 0).then(|| 3.0 / trials as f64),
        taxonomy,
    })
}

/// One row of the power decoding radius table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RadiusRow {
    pub k: usize,
    pub ell_max: usize,
    pub tau: usize,
    pub half_distance: usize,
}

pub fn radius_table(n: usize, ks: RangeInclusive<usize>) -> Result<Vec<RadiusRow>, AnalysisError> {
    if n == 0 || *ks.start() == 0 || *ks.end() > n || ks.is_empty() {
        return Err(AnalysisError::BadRange(format!("k in {}..={} for n = {n}", ks.start(), ks.end())));
    }
    Ok(ks
        .map(|k| {
            let ell = power_lmax(n, k);
            let tau = power_radius(n, k, ell).unwrap_or(0);
            RadiusRow { k, ell_max: ell, tau, half_distance: (n - k) / 2 }
        })
        .collect())
}

pub const RADIUS_CSV_HEADER: &str = "k,ell_max,tau,half_distance";

pub fn radius_csv(rows: &[RadiusRow]) -> String {
    let mut out = String::from(RADIUS_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.k, r.ell_max, r.tau, r.half_distance);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b
    }

    #[test]
    fn dyadic_roundtrip() {
        for x in [0.0, 1.0, 0.14, 0.020698, 1e-300, 5e-324, 0.5] {
            let (m, e) = dyadic(x);
            assert_eq!(m as f64 * 2f64.powi(e as i32), x);
        }
    }

    #[test]
    fn mass_is_exactly_one() {
        for tail in TailModel::ALL {
            for (n, pe, px) in [(128, 0.020698, 0.155532), (36, 0.003170, 0.017605), (7, 0.5, 0.5), (5, 0.0, 0.0)] {
                assert!(total_mass(n, pe, px, tail).unwrap().is_one(), "{tail:?} n={n}");
            }
        }
    }

    #[test]
    fn oracle_stage_values() {
        let s1 = StageModel::new(128, SuccessPredicate::HalfDistance { d: 64 }, 0.020698, 0.155532);
        let cond = stage_fail_prob(&s1.with_tail(TailModel::ConditionalErrors)).unwrap();
        assert!(rel(cond, 9.506529280999341e-12) < 1e-12, "{cond}");
        let tri = stage_fail_prob(&s1).unwrap();
        assert!(rel(tri, 6.108244303474588e-11) < 1e-12, "{tri}");
        let short = StageModel::new(36, SuccessPredicate::HalfDistance { d: 15 }, 0.003170, 0.017605);
        let ind = stage_fail_prob(&short.with_tail(TailModel::IndependentCounts)).unwrap();
        assert!(rel(ind, 1.1869580625400037e-10) < 1e-12, "{ind}");
    }

    #[test]
    fn zero_channel_never_fails() {
        for tail in TailModel::ALL {
            let m = StageModel::new(64, SuccessPredicate::HalfDistance { d: 43 }, 0.0, 0.0).with_tail(tail);
            assert_eq!(stage_fail_prob(&m).unwrap(), 0.0);
        }
    }

    #[test]
    fn tiny_values_are_representable() {
        let m = StageModel::new(64, SuccessPredicate::HalfDistance { d: 43 }, 0.003170, 0.017605);
        let p = stage_fail_exact(&m).unwrap();
        let f = p.to_f64();
        assert!(f > 1e-40 && f < 1e-30, "{f}");
        let s = p.to_scientific(50);
        assert!(s.contains("e-34"), "{s}");
        assert_eq!(s.split('e').next().unwrap().len(), 51);
    }

    #[test]
    fn scientific_formatting() {
        let half = ExactProbability { num: BigUint::one(), log2_den: 1 };
        assert_eq!(half.to_scientific(3), "5.00e-1");
        let one = ExactProbability { num: BigUint::from(4u8), log2_den: 2 };
        assert_eq!(one.to_scientific(1), "1e0");
    }

    #[test]
    fn invalid_channels_rejected() {
        let m = StageModel::new(8, SuccessPredicate::HalfDistance { d: 4 }, 0.7, 0.4);
        assert!(stage_fail_prob(&m).is_err());
        let m = StageModel::new(8, SuccessPredicate::HalfDistance { d: 4 }, -0.1, 0.0);
        assert!(stage_fail_prob(&m).is_err());
    }

    #[test]
    fn union_bound_examples() {
        assert_eq!(union_bound(&[]).unwrap().total, 0.0);
        assert!(rel(union_bound(&[9.51e-12, 1.48e-9]).unwrap().total, 1.49e-9) < 0.01);
        assert!(rel(union_bound(&[1.48e-11, 3.11e-10, 2.13e-11]).unwrap().total, 3.47e-10) < 0.01);
        assert_eq!(union_bound(&[0.7, 0.6]).unwrap().total, 1.0);
        assert!(union_bound(&[1.5]).is_err());
    }

    #[test]
    fn power_predicate_extends_half_distance() {
        let p = SuccessPredicate::Power { k: 2, ell_max: 5 };
        assert!(p.succeeds(32, 23, 0));
        assert!(!p.succeeds(32, 24, 0));
        assert!(p.succeeds(32, 15, 0));
        assert!(!p.succeeds(32, 0, 31));
        assert!(p.succeeds(32, 0, 30));
        let half = SuccessPredicate::Power { k: 16, ell_max: 5 };
        for tau in 0..=16 {
            assert_eq!(half.succeeds(32, tau, 0), tau <= 8);
        }
    }

    #[test]
    fn radius_table_rows() {
        let rows = radius_table(32, 1..=32).unwrap();
        let at = |k: usize| rows[k - 1];
        assert_eq!(at(2), RadiusRow { k: 2, ell_max: 5, tau: 23, half_distance: 15 });
        assert_eq!(at(16), RadiusRow { k: 16, ell_max: 1, tau: 8, half_distance: 8 });
        assert_eq!((at(32).tau, at(32).half_distance), (0, 0));
        let csv = radius_csv(&rows[..2]);
        assert!(csv.starts_with("k,ell_max,tau,half_distance\n1,"));
        assert_eq!(csv.lines().count(), 3);
        assert!(radius_table(32, 0..=3).is_err());
        assert!(radius_table(32, 3..=33).is_err());
    }

    #[test]
    fn monte_carlo_noiseless_and_deterministic() {
        let spec = crate::gccode::gc_rm_2048().unwrap();
        let r = monte_carlo_block_error(&spec, 0.0, 20, 1).unwrap();
        assert_eq!((r.block_errors, r.estimate, r.rule_of_three), (0, 0.0, Some(0.15)));
        let a = monte_carlo_block_error(&spec, 0.3, 200, 9).unwrap();
        let b = monte_carlo_block_error(&spec, 0.3, 200, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.taxonomy.trials(), 200);
        assert!(a.block_errors > 0);
    }
}
