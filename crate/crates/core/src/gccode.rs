//! Generalized concatenated codes: a chain of coset partitions of an inner
//! code, one outer code per partition level, multistage decoding, GMD, and
//! the preset constructions.
//!
//! Layout conventions (fixed, since helper data depends on them):
//!
//! * A codeword is `n_o` rows of `n_i` bits; flattened row-major, so bit
//!   `row * n_i + col` of the flat vector is column `col` of row `row`.
//! * Level `i` has label width `w_i` bits, split into `w_i / s_i` columns of
//!   an outer code over GF(2^s_i) (`s_i = 1` for binary RM outer codes).
//!   Column `c` carries label bits `c*s_i .. (c+1)*s_i`, bit `j` of the
//!   group being bit `j` of the field symbol (polynomial basis).
//! * Info bits: level by level, within a level column by column, within a
//!   column symbol by symbol, each symbol least significant bit first.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::gfield::Field;
use crate::linearcode::{
    coset_partition, extended_bch_32_11, extended_cyclic_rm1_32, mask, repetition_code, simplex_code,
    zero_code, BinaryLinearCode, CodeError, CosetPartition, DecodeOutcome, PackedWord, INFINITE_DISTANCE,
};
use crate::rmcode::{RmCode, RmError};
use crate::rscode::{RsCode, RsError, Symbol};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GcError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Rm(#[from] RmError),
    #[error(transparent)]
    Rs(#[from] RsError),
    #[error("invalid GC construction: {0}")]
    Invalid(String),
    #[error("expected {expected} {what}, got {got}")]
    LengthMismatch { what: &'static str, expected: usize, got: usize },
    #[error("unknown code id {id:?}; valid ids: {ids}", id = .0, ids = PRESET_IDS.join(", "))]
    UnknownPreset(String),
    #[error("{0} is a reference entry with parameters only")]
    ParametersOnly(String),
}

/// Outer code of one level.
#[derive(Clone, Debug)]
pub enum OuterCode {
    Rm(RmCode),
    Rs(RsCode),
}

impl OuterCode {
    pub fn n(&self) -> usize {
        match self {
            OuterCode::Rm(c) => c.n(),
            OuterCode::Rs(c) => c.n(),
        }
    }

    /// Dimension in symbols.
    pub fn k(&self) -> usize {
        match self {
            OuterCode::Rm(c) => c.k(),
            OuterCode::Rs(c) => c.k(),
        }
    }

    pub fn d(&self) -> usize {
        match self {
            OuterCode::Rm(c) => c.d(),
            OuterCode::Rs(c) => c.d(),
        }
    }

    /// Bits per symbol.
    pub fn symbol_bits(&self) -> usize {
        match self {
            OuterCode::Rm(_) => 1,
            OuterCode::Rs(c) => c.field().m() as usize,
        }
    }

    pub fn name(&self) -> String {
        match self {
            OuterCode::Rm(c) => format!("RM({},{}) = ({},{},{})", c.r(), c.m(), c.n(), c.k(), c.d()),
            OuterCode::Rs(c) => format!("RS(2^{};{},{},{})", c.field().m(), c.n(), c.k(), c.d()),
        }
    }

    pub fn encode(&self, info: &[u16]) -> Result<Vec<u16>, GcError> {
        match self {
            OuterCode::Rm(c) => {
                let bits: Vec<bool> = info.iter().map(|&s| s & 1 == 1).collect();
                Ok(c.encode(&bits)?.into_iter().map(u16::from).collect())
            }
            OuterCode::Rs(c) => Ok(c.encode(info)?),
        }
    }

    pub fn info_extract(&self, codeword: &[u16]) -> Result<Vec<u16>, GcError> {
        match self {
            OuterCode::Rm(c) => {
                let bits: Vec<bool> = codeword.iter().map(|&s| s & 1 == 1).collect();
                Ok(c.info_extract(&bits)?.into_iter().map(u16::from).collect())
            }
            OuterCode::Rs(c) => Ok(c.info_extract(codeword)?),
        }
    }

    /// Plain error/erasure decoding.
    pub fn decode_ee(&self, y: &[Symbol]) -> DecodeOutcome<Vec<u16>> {
        match self {
            OuterCode::Rm(c) => {
                let mut w = PackedWord::default();
                for (i, s) in y.iter().enumerate() {
                    match s {
                        None => w.erased |= 1 << i,
                        Some(v) => w.value |= ((v & 1) as u128) << i,
                    }
                }
                c.decode_packed(w).map(|cw| (0..c.n()).map(|i| (cw >> i & 1) as u16).collect())
            }
            OuterCode::Rs(c) => c.decode_ee(y).expect("length checked by caller"),
        }
    }
}

/// How an outer level is decoded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecoderPolicy {
    HalfDistance,
    Gmd,
    /// Power decoding with at most `ell_max` powers (RS outer codes only).
    Power { ell_max: usize },
}

/// GMD decoding: trials erase the j = 0, 2, 4, ... least reliable
/// non-erased positions (stable order, up to d - 1 extra erasures) and run
/// the error/erasure decoder. The winner has the fewest disagreements with
/// `y` over its non-erased positions, then the smallest reliability sum on
/// those disagreements; the first trial wins remaining ties. A candidate with
/// 2 * disagreements + erasures < d is accepted at once.
pub fn gmd_decode(outer: &OuterCode, y: &[Symbol], reliabilities: &[i64]) -> Result<DecodeOutcome<Vec<u16>>, GcError> {
    if y.len() != outer.n() || reliabilities.len() != y.len() {
        return Err(GcError::LengthMismatch { what: "symbols", expected: outer.n(), got: y.len() });
    }
    let d = outer.d();
    let delta = y.iter().filter(|s| s.is_none()).count();
    let mut order: Vec<usize> = (0..y.len()).filter(|&i| y[i].is_some()).collect();
    order.sort_by_key(|&i| reliabilities[i]);
    let mut best: Option<((usize, i64), Vec<u16>)> = None;
    let mut trial = y.to_vec();
    let mut j = 0;
    while j <= d.saturating_sub(1) && j <= order.len() {
        for &p in &order[j.saturating_sub(2)..j] {
            trial[p] = None;
        }
        if let DecodeOutcome::Decoded(c) = outer.decode_ee(&trial) {
            let mut disagree = 0usize;
            let mut weight = 0i64;
            for (i, s) in y.iter().enumerate() {
                if let Some(v) = s {
                    if *v != c[i] {
                        disagree += 1;
                        weight = weight.saturating_add(reliabilities[i]);
                    }
                }
            }
            if 2 * disagree + delta < d {
                return Ok(DecodeOutcome::Decoded(c));
            }
            let key = (disagree, weight);
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((key, c));
            }
        }
        j += 2;
    }
    Ok(best.map(|(_, c)| c).into())
}

/// One partition level with its outer code.
#[derive(Clone)]
pub struct GcLevel {
    partition: Arc<CosetPartition>,
    outer: OuterCode,
    policy: DecoderPolicy,
}

impl GcLevel {
    pub fn partition(&self) -> &Arc<CosetPartition> {
        &self.partition
    }

    pub fn outer(&self) -> &OuterCode {
        &self.outer
    }

    pub fn policy(&self) -> DecoderPolicy {
        self.policy
    }

    pub fn label_bits(&self) -> usize {
        self.partition.label_bits()
    }

    pub fn columns(&self) -> usize {
        self.label_bits() / self.outer.symbol_bits()
    }

    /// Info bits carried by this level.
    pub fn info_bits(&self) -> usize {
        self.outer.k() * self.label_bits()
    }
}

/// A GC code: inner partition chain plus outer codes.
#[derive(Clone)]
pub struct GcCodeSpec {
    id: String,
    levels: Vec<GcLevel>,
    inner: Arc<BinaryLinearCode>,
}

impl fmt::Debug for GcCodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GcCodeSpec({}, n={}, k={})", self.id, self.n(), self.k())
    }
}

/// A GC codeword or received word: `n_o` packed rows.
pub type GcRows = Vec<u128>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GcDecoded {
    pub info: Vec<bool>,
    pub rows: GcRows,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GcOutcome {
    Decoded(GcDecoded),
    /// Outer decoding failed at this level (0-based).
    Failure { level: usize },
}

impl GcOutcome {
    pub fn decoded(self) -> Option<GcDecoded> {
        match self {
            GcOutcome::Decoded(d) => Some(d),
            GcOutcome::Failure { .. } => None,
        }
    }
}

impl GcCodeSpec {
    /// Build from nested inner codes `chain[0] ⊃ chain[1] ⊃ ...` (the last
    /// level is partitioned down to single words) and one outer code and
    /// policy per level.
    pub fn new(
        id: impl Into<String>,
        chain: Vec<BinaryLinearCode>,
        outers: Vec<(OuterCode, DecoderPolicy)>,
    ) -> Result<Self, GcError> {
        if chain.is_empty() || chain.len() != outers.len() {
            return Err(GcError::Invalid("need one outer code per partition level".into()));
        }
        let n_i = chain[0].n();
        let n_o = outers[0].0.n();
        for w in chain.windows(2) {
            if w[0].d() >= w[1].d() {
                return Err(GcError::Invalid("subcode distances must increase strictly".into()));
            }
        }
        // Partition bottom-up so each parent is re-based on the level below.
        let mut sub = Arc::new(zero_code(n_i)?);
        let mut partitions = Vec::with_capacity(chain.len());
        for code in chain.iter().rev() {
            let p = Arc::new(coset_partition(code, Arc::clone(&sub))?);
            sub = Arc::clone(p.parent());
            partitions.push(p);
        }
        partitions.reverse();
        let mut levels = Vec::new();
        for (partition, (outer, policy)) in partitions.into_iter().zip(outers) {
            let s = outer.symbol_bits();
            let w = partition.label_bits();
            if outer.n() != n_o {
                return Err(GcError::Invalid("outer codes must share one length".into()));
            }
            let ok = match outer {
                OuterCode::Rm(_) => w >= 1,
                OuterCode::Rs(_) => w == s,
            };
            if !ok {
                return Err(GcError::Invalid(format!("label width {w} does not fit {}", outer.name())));
            }
            if matches!(policy, DecoderPolicy::Power { .. }) && !matches!(outer, OuterCode::Rs(_)) {
                return Err(GcError::Invalid("power decoding needs an RS outer code".into()));
            }
            levels.push(GcLevel { partition, outer, policy });
        }
        let inner = Arc::clone(levels[0].partition.parent());
        Ok(GcCodeSpec { id: id.into(), levels, inner })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn levels(&self) -> &[GcLevel] {
        &self.levels
    }

    pub fn inner(&self) -> &Arc<BinaryLinearCode> {
        &self.inner
    }

    pub fn n_inner(&self) -> usize {
        self.inner.n()
    }

    pub fn n_outer(&self) -> usize {
        self.levels[0].outer.n()
    }

    pub fn n(&self) -> usize {
        self.n_inner() * self.n_outer()
    }

    pub fn k(&self) -> usize {
        self.levels.iter().map(GcLevel::info_bits).sum()
    }

    /// Largest extension degree among the outer alphabets (1 for binary).
    pub fn largest_field_m(&self) -> usize {
        self.levels.iter().map(|l| l.outer.symbol_bits()).max().unwrap_or(1)
    }

    /// Same construction with GMD switched on or off on the levels that use
    /// GMD or half-distance decoding.
    pub fn with_gmd(&self, on: bool) -> Self {
        let mut spec = self.clone();
        for level in &mut spec.levels {
            level.policy = match level.policy {
                DecoderPolicy::Power { ell_max } => DecoderPolicy::Power { ell_max },
                _ if on => DecoderPolicy::Gmd,
                _ => DecoderPolicy::HalfDistance,
            };
        }
        spec
    }

    pub fn encode(&self, info: &[bool]) -> Result<GcRows, GcError> {
        if info.len() != self.k() {
            return Err(GcError::LengthMismatch { what: "info bits", expected: self.k(), got: info.len() });
        }
        let n_o = self.n_outer();
        let mut labels = vec![0u128; n_o];
        let mut shift = 0;
        let mut cursor = 0;
        for level in &self.levels {
            let s = level.outer.symbol_bits();
            for col in 0..level.columns() {
                let syms: Vec<u16> = (0..level.outer.k())
                    .map(|_| {
                        let v = (0..s).fold(0u16, |acc, b| acc | (info[cursor + b] as u16) << b);
                        cursor += s;
                        v
                    })
                    .collect();
                let cw = level.outer.encode(&syms)?;
                for (row, &sym) in cw.iter().enumerate() {
                    labels[row] |= (sym as u128) << (shift + col * s);
                }
            }
            shift += level.label_bits();
        }
        Ok(labels.into_iter().map(|l| self.inner.encode_packed(l)).collect())
    }

    /// Multistage decoding of received rows (erasure-free BSC output).
    pub fn decode(&self, received: &[u128]) -> Result<GcOutcome, GcError> {
        let n_o = self.n_outer();
        if received.len() != n_o {
            return Err(GcError::LengthMismatch { what: "rows", expected: n_o, got: received.len() });
        }
        let row_mask = mask(self.n_inner());
        let mut offsets = vec![0u128; n_o];
        let mut info = Vec::with_capacity(self.k());
        for (li, level) in self.levels.iter().enumerate() {
            let part = &level.partition;
            let s = level.outer.symbol_bits();
            // Row-wise ML in the coset fixed by earlier levels.
            let mut row_labels: Vec<Option<u128>> = Vec::with_capacity(n_o);
            let mut reliab: Vec<i64> = Vec::with_capacity(n_o);
            for (j, &y) in received.iter().enumerate() {
                match part.ml_decode_shifted(offsets[j], PackedWord::clean(y & row_mask)) {
                    DecodeOutcome::Decoded(dec) => {
                        row_labels.push(Some(dec.info & mask(part.label_bits())));
                        reliab.push(-(dec.errors as i64));
                    }
                    DecodeOutcome::Failure => {
                        row_labels.push(None);
                        reliab.push(i64::MIN);
                    }
                }
            }
            let mut decided = vec![0u128; n_o];
            for col in 0..level.columns() {
                let y: Vec<Symbol> = row_labels
                    .iter()
                    .map(|l| l.map(|v| (v >> (col * s) & mask(s)) as u16))
                    .collect();
                let out = match level.policy {
                    DecoderPolicy::HalfDistance => level.outer.decode_ee(&y),
                    DecoderPolicy::Gmd => gmd_decode(&level.outer, &y, &reliab)?,
                    DecoderPolicy::Power { ell_max } => match &level.outer {
                        OuterCode::Rs(rs) => rs.decode_power(&y, ell_max)?,
                        OuterCode::Rm(_) => unreachable!("checked at construction"),
                    },
                };
                let DecodeOutcome::Decoded(cw) = out else {
                    return Ok(GcOutcome::Failure { level: li });
                };
                for sym in level.outer.info_extract(&cw)? {
                    info.extend((0..s).map(|b| sym >> b & 1 == 1));
                }
                for (row, &sym) in cw.iter().enumerate() {
                    decided[row] |= (sym as u128) << (col * s);
                }
            }
            for (off, &label) in offsets.iter_mut().zip(&decided) {
                *off ^= part.coset_offset(label);
            }
        }
        Ok(GcOutcome::Decoded(GcDecoded { info, rows: offsets }))
    }

    /// Flatten rows into the row-major bit vector.
    pub fn rows_to_bits(&self, rows: &[u128]) -> Vec<bool> {
        let n_i = self.n_inner();
        rows.iter().flat_map(|&r| (0..n_i).map(move |c| r >> c & 1 == 1)).collect()
    }

    pub fn bits_to_rows(&self, bits: &[bool]) -> Result<GcRows, GcError> {
        if bits.len() != self.n() {
            return Err(GcError::LengthMismatch { what: "bits", expected: self.n(), got: bits.len() });
        }
        Ok(bits.chunks(self.n_inner()).map(crate::linearcode::bits_to_u128).collect())
    }
}

/// Parameters of a construction kept for comparison only.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceCode {
    pub id: &'static str,
    pub description: &'static str,
    pub n: usize,
    pub k: usize,
    pub largest_field_m: usize,
    /// Stored block error probability at p = 0.14.
    pub reference_p_err: f64,
}

#[derive(Clone, Debug)]
pub enum Preset {
    Gc(GcCodeSpec),
    Reference(ReferenceCode),
}

impl Preset {
    pub fn id(&self) -> &str {
        match self {
            Preset::Gc(s) => s.id(),
            Preset::Reference(r) => r.id,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Preset::Gc(s) => s.n(),
            Preset::Reference(r) => r.n,
        }
    }

    pub fn k(&self) -> usize {
        match self {
            Preset::Gc(s) => s.k(),
            Preset::Reference(r) => r.k,
        }
    }

    pub fn largest_field_m(&self) -> usize {
        match self {
            Preset::Gc(s) => s.largest_field_m(),
            Preset::Reference(r) => r.largest_field_m,
        }
    }

    pub fn gc(self) -> Result<GcCodeSpec, GcError> {
        match self {
            Preset::Gc(s) => Ok(s),
            Preset::Reference(r) => Err(GcError::ParametersOnly(r.id.to_string())),
        }
    }
}

pub const PRESET_IDS: [&str; 5] = ["gc-rm-2048", "rs-2048", "rs-1152", "gc-rs-1024", "ref-bch-rep-2226"];

pub fn preset(id: &str) -> Result<Preset, GcError> {
    Ok(match id {
        "gc-rm-2048" => Preset::Gc(gc_rm_2048()?),
        "rs-2048" => Preset::Gc(concat_rs_2048()?),
        "rs-1152" => Preset::Gc(concat_rs_1152()?),
        "gc-rs-1024" => Preset::Gc(gc_rs_1024()?),
        "ref-bch-rep-2226" => Preset::Reference(concat_bch_rep_2226_reference()),
        other => return Err(GcError::UnknownPreset(other.to_string())),
    })
}

/// RM(1,4) ⊃ Rep(16) ⊃ {0} with outer RM(1,7) (4 columns) and RM(4,7).
pub fn gc_rm_2048() -> Result<GcCodeSpec, GcError> {
    GcCodeSpec::new(
        "gc-rm-2048",
        vec![simplex_code(4)?, repetition_code(16)?],
        vec![
            (OuterCode::Rm(RmCode::new(1, 7)?), DecoderPolicy::Gmd),
            (OuterCode::Rm(RmCode::new(4, 7)?), DecoderPolicy::Gmd),
        ],
    )
}

fn rs64_22() -> Result<RsCode, GcError> {
    let f6 = Field::new(6, None).expect("default GF(64)");
    Ok(RsCode::extended(&f6, 22)?)
}

/// RM(1,5) rows, each mapped one-to-one onto a GF(64) symbol of an extended RS(64,22).
pub fn concat_rs_2048() -> Result<GcCodeSpec, GcError> {
    GcCodeSpec::new(
        "rs-2048",
        vec![simplex_code(5)?],
        vec![(OuterCode::Rs(rs64_22()?), DecoderPolicy::HalfDistance)],
    )
}

/// As [`concat_rs_2048`] with 28 RS positions removed, leaving RS(36,22).
pub fn concat_rs_1152() -> Result<GcCodeSpec, GcError> {
    let short = rs64_22()?.shorten(&(35..63).collect::<Vec<_>>())?;
    GcCodeSpec::new(
        "rs-1152",
        vec![simplex_code(5)?],
        vec![(OuterCode::Rs(short), DecoderPolicy::HalfDistance)],
    )
}

/// eBCH(32,11,12) ⊃ RM(1,5) ⊃ Rep(32) ⊃ {0} with outer extended RS(32,2)
/// (power decoding), extended RS(32,19) and RM(3,5) = (32,26,4).
pub fn gc_rs_1024() -> Result<GcCodeSpec, GcError> {
    let f5 = Field::new(5, None).expect("default GF(32)");
    GcCodeSpec::new(
        "gc-rs-1024",
        vec![extended_bch_32_11()?, extended_cyclic_rm1_32()?, repetition_code(32)?],
        vec![
            (OuterCode::Rs(RsCode::extended(&f5, 2)?), DecoderPolicy::Power { ell_max: 5 }),
            (OuterCode::Rs(RsCode::extended(&f5, 19)?), DecoderPolicy::HalfDistance),
            (OuterCode::Rm(RmCode::new(3, 5)?), DecoderPolicy::HalfDistance),
        ],
    )
}

/// Ordinary concatenation BCH(318,174,35) x Rep(7,1,7); parameters only.
pub fn concat_bch_rep_2226_reference() -> ReferenceCode {
    ReferenceCode {
        id: "ref-bch-rep-2226",
        description: "BCH(318,174,35) x Rep(7,1,7)",
        n: 318 * 7,
        k: 174,
        largest_field_m: 8,
        reference_p_err: 1e-9,
    }
}

/// Minimum distance of each inner level code, `None` for the zero code.
pub fn chain_distances(spec: &GcCodeSpec) -> Vec<Option<usize>> {
    spec.levels
        .iter()
        .map(|l| {
            let d = l.partition.subcode().d();
            (d != INFINITE_DISTANCE).then_some(d)
        })
        .collect()
}
