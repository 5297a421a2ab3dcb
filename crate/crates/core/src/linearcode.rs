//! Binary linear block codes of length at most 128.
//!
//! Words are packed into `u128` with position `i` stored in bit `i`. A word
//! with erasures is a pair of masks: `value` (bits at erased positions are
//! ignored and kept at zero) and `erased`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::gfield::Field;

/// Largest supported code length.
pub const MAX_LEN: usize = 128;
/// Largest dimension accepted by exhaustive ML decoding.
pub const ML_MAX_K: usize = 16;
/// Minimum distance recorded for the zero code, which has no nonzero words.
pub const INFINITE_DISTANCE: usize = usize::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("length {got} does not match expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("code length {0} exceeds the supported maximum of 128")]
    TooLong(usize),
    #[error("generator matrix has rank {rank}, expected {k}")]
    RankDeficient { rank: usize, k: usize },
    #[error("declared minimum distance {declared} but the code has {actual}")]
    WrongDistance { declared: usize, actual: usize },
    #[error("dimension {0} exceeds the exhaustive ML limit of 16")]
    MlLimit(usize),
    #[error("subcode is not contained in the parent code")]
    NotSubcode,
    #[error("coset label {label} out of range for {bits} label bits")]
    BadLabel { label: u128, bits: usize },
    #[error("word is not a codeword")]
    NotACodeword,
    #[error("invalid code parameters: {0}")]
    InvalidParameters(String),
}

/// Result of a decoder that may refuse to decide.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodeOutcome<T> {
    Decoded(T),
    /// Detected failure; for ML decoding this is the tie outcome (whole-word erasure).
    Failure,
}

impl<T> DecodeOutcome<T> {
    pub fn ok(self) -> Option<T> {
        match self {
            DecodeOutcome::Decoded(t) => Some(t),
            DecodeOutcome::Failure => None,
        }
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, DecodeOutcome::Failure)
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> DecodeOutcome<U> {
        match self {
            DecodeOutcome::Decoded(t) => DecodeOutcome::Decoded(f(t)),
            DecodeOutcome::Failure => DecodeOutcome::Failure,
        }
    }
}

impl<T> From<Option<T>> for DecodeOutcome<T> {
    fn from(o: Option<T>) -> Self {
        match o {
            Some(t) => DecodeOutcome::Decoded(t),
            None => DecodeOutcome::Failure,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Trit {
    Zero,
    One,
    Erased,
}

impl Trit {
    pub fn from_bit(b: bool) -> Self {
        if b {
            Trit::One
        } else {
            Trit::Zero
        }
    }

}

/// Addition over {0, 1, erased} with erasure absorbing.
impl std::ops::Add for Trit {
    type Output = Trit;

    fn add(self, other: Trit) -> Trit {
        match (self, other) {
            (Trit::Erased, _) | (_, Trit::Erased) => Trit::Erased,
            (a, b) => Trit::from_bit((a == Trit::One) != (b == Trit::One)),
        }
    }
}

/// A word over {0, 1, erased}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TernaryWord {
    symbols: Vec<Trit>,
}

impl TernaryWord {
    pub fn new(symbols: Vec<Trit>) -> Self {
        TernaryWord { symbols }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        TernaryWord { symbols: bits.iter().map(|&b| Trit::from_bit(b)).collect() }
    }

    pub fn erased(n: usize) -> Self {
        TernaryWord { symbols: vec![Trit::Erased; n] }
    }

    pub fn from_packed(n: usize, word: PackedWord) -> Self {
        let symbols = (0..n)
            .map(|i| {
                if word.erased >> i & 1 == 1 {
                    Trit::Erased
                } else {
                    Trit::from_bit(word.value >> i & 1 == 1)
                }
            })
            .collect();
        TernaryWord { symbols }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Trit] {
        &self.symbols
    }

    pub fn get(&self, i: usize) -> Trit {
        self.symbols[i]
    }

    pub fn set(&mut self, i: usize, t: Trit) {
        self.symbols[i] = t;
    }

    /// Number of erased positions.
    pub fn erasures(&self) -> usize {
        self.symbols.iter().filter(|&&t| t == Trit::Erased).count()
    }

    /// Disagreements over positions where neither word is erased.
    pub fn distance(&self, other: &TernaryWord) -> usize {
        self.symbols
            .iter()
            .zip(&other.symbols)
            .filter(|(a, b)| **a != Trit::Erased && **b != Trit::Erased && a != b)
            .count()
    }

    /// The bits if no position is erased.
    pub fn to_bits(&self) -> Option<Vec<bool>> {
        self.symbols
            .iter()
            .map(|t| match t {
                Trit::Zero => Some(false),
                Trit::One => Some(true),
                Trit::Erased => None,
            })
            .collect()
    }

    pub fn pack(&self) -> Result<PackedWord, CodeError> {
        if self.len() > MAX_LEN {
            return Err(CodeError::TooLong(self.len()));
        }
        let mut w = PackedWord::default();
        for (i, t) in self.symbols.iter().enumerate() {
            match t {
                Trit::Zero => {}
                Trit::One => w.value |= 1 << i,
                Trit::Erased => w.erased |= 1 << i,
            }
        }
        Ok(w)
    }
}

/// A packed word of length at most 128 with an erasure mask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct PackedWord {
    pub value: u128,
    pub erased: u128,
}

impl PackedWord {
    pub fn clean(value: u128) -> Self {
        PackedWord { value, erased: 0 }
    }

    pub fn new(value: u128, erased: u128) -> Self {
        PackedWord { value: value & !erased, erased }
    }
}

pub fn mask(n: usize) -> u128 {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

pub fn bits_to_u128(bits: &[bool]) -> u128 {
    bits.iter().enumerate().fold(0, |acc, (i, &b)| acc | (b as u128) << i)
}

pub fn u128_to_bits(x: u128, n: usize) -> Vec<bool> {
    (0..n).map(|i| x >> i & 1 == 1).collect()
}

/// Outcome of a successful ML decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MlDecision {
    pub codeword: u128,
    /// Disagreements between the decision and the received word over non-erased positions.
    pub errors: u32,
    /// Information bits of the decision within the searched code (before the offset).
    pub info: u128,
}

/// A binary linear code given by a generator matrix.
pub struct BinaryLinearCode {
    name: String,
    n: usize,
    d: usize,
    rows: Vec<u128>,
    /// Pivot columns of the reduced echelon form; an information set.
    info_set: Vec<usize>,
    /// Row j maps pivot bit j of a codeword to its information-bit contribution.
    decoder_rows: Vec<u128>,
    codewords: OnceLock<Vec<u128>>,
}

impl fmt::Debug for BinaryLinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{},{})", self.name, self.n, self.k(), self.d)
    }
}

/// Row reduction of `rows` (length-n words). Returns pivots and the transform
/// T with T * G = R, where R restricted to the pivots is the identity.
fn row_reduce(rows: &[u128], n: usize) -> (Vec<usize>, Vec<u128>, usize) {
    let k = rows.len();
    let mut r: Vec<u128> = rows.to_vec();
    // t[i] is a k-bit mask of which original rows make up r[i]
    let mut t: Vec<u128> = (0..k).map(|i| 1u128 << i).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..k).find(|&i| r[i] >> col & 1 == 1) else {
            continue;
        };
        r.swap(rank, p);
        t.swap(rank, p);
        for i in 0..k {
            if i != rank && r[i] >> col & 1 == 1 {
                r[i] ^= r[rank];
                t[i] ^= t[rank];
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == k {
            break;
        }
    }
    (pivots, t, rank)
}

impl BinaryLinearCode {
    /// Build a code from generator rows. With `declared_d` given, the distance is
    /// verified exhaustively when k <= 16 and trusted otherwise; without it the
    /// distance is computed (k <= 16 required).
    pub fn from_rows(
        name: impl Into<String>,
        n: usize,
        rows: Vec<u128>,
        declared_d: Option<usize>,
    ) -> Result<Self, CodeError> {
        if n > MAX_LEN {
            return Err(CodeError::TooLong(n));
        }
        let k = rows.len();
        if rows.iter().any(|&r| r & !mask(n) != 0) {
            return Err(CodeError::InvalidParameters("generator row longer than n".into()));
        }
        let (info_set, t, rank) = row_reduce(&rows, n);
        if rank != k {
            return Err(CodeError::RankDeficient { rank, k });
        }
        let mut code = BinaryLinearCode {
            name: name.into(),
            n,
            d: 0,
            rows,
            info_set,
            decoder_rows: t,
            codewords: OnceLock::new(),
        };
        let d = if k <= ML_MAX_K {
            let actual = code.min_weight();
            if let Some(declared) = declared_d {
                if declared != actual {
                    return Err(CodeError::WrongDistance { declared, actual });
                }
            }
            actual
        } else {
            declared_d.ok_or(CodeError::MlLimit(k))?
        };
        code.d = d;
        Ok(code)
    }

    fn min_weight(&self) -> usize {
        if self.k() == 0 {
            return INFINITE_DISTANCE;
        }
        self.codewords().iter().skip(1).map(|c| c.count_ones() as usize).min().unwrap()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn rows(&self) -> &[u128] {
        &self.rows
    }

    /// Encode info bits packed as a k-bit integer (bit i selects row i).
    #[inline]
    pub fn encode_packed(&self, info: u128) -> u128 {
        let mut c = 0;
        let mut bits = info;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            c ^= self.rows[i];
            bits &= bits - 1;
        }
        c
    }

    pub fn encode(&self, info: &[bool]) -> Result<TernaryWord, CodeError> {
        if info.len() != self.k() {
            return Err(CodeError::LengthMismatch { expected: self.k(), got: info.len() });
        }
        let c = self.encode_packed(bits_to_u128(info));
        Ok(TernaryWord::from_bits(&u128_to_bits(c, self.n)))
    }

    /// Information bits of a word that is claimed to be a codeword.
    #[inline]
    pub fn coordinates(&self, c: u128) -> Option<u128> {
        let mut u = 0;
        for (j, &p) in self.info_set.iter().enumerate() {
            if c >> p & 1 == 1 {
                u ^= self.decoder_rows[j];
            }
        }
        (self.encode_packed(u) == c).then_some(u)
    }

    pub fn contains(&self, c: u128) -> bool {
        self.coordinates(c).is_some()
    }

    pub fn extract_info(&self, c: &[bool]) -> Result<Vec<bool>, CodeError> {
        if c.len() != self.n {
            return Err(CodeError::LengthMismatch { expected: self.n, got: c.len() });
        }
        let u = self.coordinates(bits_to_u128(c)).ok_or(CodeError::NotACodeword)?;
        Ok(u128_to_bits(u, self.k()))
    }

    /// All codewords, indexed by their information bits. Requires k <= 16.
    pub fn codewords(&self) -> &[u128] {
        assert!(self.k() <= ML_MAX_K, "codeword list needs k <= 16");
        self.codewords.get_or_init(|| {
            // Gray-code walk keeps this at one XOR per codeword.
            let k = self.k();
            let mut out = vec![0u128; 1 << k];
            for u in 1..(1usize << k) {
                let prev = u & (u - 1);
                let low = u.trailing_zeros() as usize;
                out[u] = out[prev] ^ self.rows[low];
            }
            out
        })
    }

    /// Exhaustive minimum-distance decoding. A tie for the minimum is reported
    /// as [`DecodeOutcome::Failure`], i.e. the whole word becomes an erasure.
    pub fn ml_decode_packed(&self, y: PackedWord) -> Result<DecodeOutcome<MlDecision>, CodeError> {
        if self.k() > ML_MAX_K {
            return Err(CodeError::MlLimit(self.k()));
        }
        Ok(ml_search(self.codewords(), y, 0))
    }

    pub fn ml_decode(&self, y: &TernaryWord) -> Result<DecodeOutcome<TernaryWord>, CodeError> {
        self.check_len(y.len())?;
        Ok(self
            .ml_decode_packed(y.pack()?)?
            .map(|dec| TernaryWord::from_bits(&u128_to_bits(dec.codeword, self.n))))
    }

    fn check_len(&self, got: usize) -> Result<(), CodeError> {
        if got != self.n {
            return Err(CodeError::LengthMismatch { expected: self.n, got });
        }
        Ok(())
    }
}

/// Minimum-distance search over `offset + candidates`.
#[inline]
fn ml_search(candidates: &[u128], y: PackedWord, offset: u128) -> DecodeOutcome<MlDecision> {
    let keep = !y.erased;
    let target = (y.value ^ offset) & keep;
    let mut best = u32::MAX;
    let mut best_index = 0;
    let mut tied = false;
    for (i, &c) in candidates.iter().enumerate() {
        let dist = ((c & keep) ^ target).count_ones();
        if dist < best {
            best = dist;
            best_index = i;
            tied = false;
        } else if dist == best {
            tied = true;
        }
    }
    if tied {
        DecodeOutcome::Failure
    } else {
        DecodeOutcome::Decoded(MlDecision {
            codeword: candidates[best_index] ^ offset,
            errors: best,
            info: best_index as u128,
        })
    }
}

/// A linear code split into cosets of a subcode.
///
/// The parent is re-based so that its generator reads `[complement; subcode]`;
/// the label of a parent codeword is then the first `label_bits` of its
/// information bits.
pub struct CosetPartition {
    parent: Arc<BinaryLinearCode>,
    subcode: Arc<BinaryLinearCode>,
    label_bits: usize,
    representatives: Vec<u128>,
}

impl fmt::Debug for CosetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} / {:?}", self.parent, self.subcode)
    }
}

pub fn coset_partition(
    parent: &BinaryLinearCode,
    subcode: Arc<BinaryLinearCode>,
) -> Result<CosetPartition, CodeError> {
    if parent.n() != subcode.n() {
        return Err(CodeError::LengthMismatch { expected: parent.n(), got: subcode.n() });
    }
    if subcode.rows().iter().any(|&r| !parent.contains(r)) {
        return Err(CodeError::NotSubcode);
    }
    if parent.k() > ML_MAX_K {
        return Err(CodeError::MlLimit(parent.k()));
    }
    // Greedily extend the subcode basis with parent rows, in order.
    let mut basis: Vec<u128> = subcode.rows().to_vec();
    let mut complement = Vec::new();
    for &r in parent.rows() {
        let mut trial = basis.clone();
        trial.push(r);
        let (_, _, rank) = row_reduce(&trial, parent.n());
        if rank == trial.len() {
            basis = trial;
            complement.push(r);
        }
    }
    let label_bits = complement.len();
    let mut rows = complement;
    rows.extend_from_slice(subcode.rows());
    let rebased = BinaryLinearCode::from_rows(parent.name(), parent.n(), rows, Some(parent.d()))?;
    let sub_words: Vec<u128> = if subcode.k() <= ML_MAX_K {
        subcode.codewords().to_vec()
    } else {
        return Err(CodeError::MlLimit(subcode.k()));
    };
    let representatives = (0..1u128 << label_bits)
        .map(|label| {
            let offset = rebased.encode_packed(label);
            sub_words
                .iter()
                .map(|&s| s ^ offset)
                .min_by_key(|&w| (w.count_ones(), lex_key(w, parent.n())))
                .unwrap()
        })
        .collect();
    Ok(CosetPartition { parent: Arc::new(rebased), subcode, label_bits, representatives })
}

/// Key ordering words lexicographically by position 0 first.
fn lex_key(w: u128, n: usize) -> u128 {
    w.reverse_bits() >> (128 - n)
}

impl CosetPartition {
    pub fn parent(&self) -> &Arc<BinaryLinearCode> {
        &self.parent
    }

    pub fn subcode(&self) -> &Arc<BinaryLinearCode> {
        &self.subcode
    }

    pub fn label_bits(&self) -> usize {
        self.label_bits
    }

    pub fn num_cosets(&self) -> usize {
        1 << self.label_bits
    }

    /// Minimum-weight member of each coset, lexicographic tie-break.
    pub fn representative(&self, label: u128) -> Result<u128, CodeError> {
        self.check_label(label)?;
        Ok(self.representatives[label as usize])
    }

    /// The word `label * complement`, which also lies in the labeled coset.
    #[inline]
    pub fn coset_offset(&self, label: u128) -> u128 {
        self.parent.encode_packed(label)
    }

    /// Label of a parent codeword.
    #[inline]
    pub fn label_of(&self, c: u128) -> Option<u128> {
        self.parent.coordinates(c).map(|u| u & mask(self.label_bits))
    }

    fn check_label(&self, label: u128) -> Result<(), CodeError> {
        if label >> self.label_bits != 0 {
            return Err(CodeError::BadLabel { label, bits: self.label_bits });
        }
        Ok(())
    }

    /// ML decoding restricted to one coset; ties give a failure (erasure).
    pub fn ml_decode_in_coset(
        &self,
        label: u128,
        y: PackedWord,
    ) -> Result<DecodeOutcome<MlDecision>, CodeError> {
        self.check_label(label)?;
        let offset = self.coset_offset(label);
        Ok(ml_search(self.subcode.codewords(), y, offset))
    }

    /// ML decoding in `offset + parent`, where `offset` is any fixed word.
    /// Used by multistage decoding after the outer levels fixed a coset.
    #[inline]
    pub fn ml_decode_shifted(&self, offset: u128, y: PackedWord) -> DecodeOutcome<MlDecision> {
        ml_search(self.parent.codewords(), y, offset)
    }
}

pub fn repetition_code(n: usize) -> Result<BinaryLinearCode, CodeError> {
    if n == 0 || n > MAX_LEN {
        return Err(CodeError::InvalidParameters(format!("repetition length {n}")));
    }
    BinaryLinearCode::from_rows(format!("Rep({n})"), n, vec![mask(n)], Some(n))
}

pub fn parity_check_code(n: usize) -> Result<BinaryLinearCode, CodeError> {
    if !(2..=MAX_LEN).contains(&n) {
        return Err(CodeError::InvalidParameters(format!("parity-check length {n}")));
    }
    let rows = (0..n - 1).map(|i| 1u128 << i | 1u128 << (n - 1)).collect();
    BinaryLinearCode::from_rows(format!("SPC({n})"), n, rows, Some(2))
}

/// The zero code of length n (dimension 0).
pub fn zero_code(n: usize) -> Result<BinaryLinearCode, CodeError> {
    BinaryLinearCode::from_rows(format!("Zero({n})"), n, Vec::new(), Some(INFINITE_DISTANCE))
}

/// First-order Reed-Muller code RM(1,m) = (2^m, m+1, 2^(m-1)); rows are the
/// all-ones word followed by the coordinate functions x_0..x_{m-1}, where
/// x_b(i) is bit b of the position index i.
pub fn simplex_code(m: usize) -> Result<BinaryLinearCode, CodeError> {
    if !(1..=7).contains(&m) {
        return Err(CodeError::InvalidParameters(format!("simplex m={m}")));
    }
    let n = 1usize << m;
    let mut rows = vec![mask(n)];
    for b in 0..m {
        rows.push((0..n).filter(|i| i >> b & 1 == 1).fold(0, |acc, i| acc | 1u128 << i));
    }
    BinaryLinearCode::from_rows(format!("RM(1,{m})"), n, rows, Some(n / 2))
}

/// Extended binary cyclic code of length 2^m with the given zeros (exponents
/// of alpha). The generator polynomial is the product of (x - alpha^j) over
/// the cyclotomic closure; an overall parity bit is appended at position 2^m - 1.
pub fn extended_cyclic_code(
    name: &str,
    field: &Arc<Field>,
    zero_reps: &[usize],
    declared_d: Option<usize>,
) -> Result<BinaryLinearCode, CodeError> {
    let n0 = field.order();
    let mut zeros = vec![false; n0];
    for &r in zero_reps {
        let mut j = r % n0;
        while !zeros[j] {
            zeros[j] = true;
            j = j * 2 % n0;
        }
    }
    let mut g: Vec<u16> = vec![1];
    for (j, _) in zeros.iter().enumerate().filter(|(_, &z)| z) {
        g = field.poly_mul(&g, &[field.alpha_pow(j as i64), 1]);
    }
    if g.iter().any(|&c| c > 1) {
        return Err(CodeError::InvalidParameters("zero set is not closed under conjugation".into()));
    }
    let deg = g.len() - 1;
    let gbits: u128 = g.iter().enumerate().fold(0, |acc, (i, &c)| acc | (c as u128) << i);
    let k = n0 - deg;
    let rows = (0..k)
        .map(|s| {
            let w = gbits << s;
            w | ((w.count_ones() as u128 & 1) << n0)
        })
        .collect();
    BinaryLinearCode::from_rows(name, n0 + 1, rows, declared_d)
}

/// Extended BCH(32,11,12): zeros at the conjugacy classes of alpha^1, alpha^3,
/// alpha^5 and alpha^7 in GF(32), plus overall parity.
pub fn extended_bch_32_11() -> Result<BinaryLinearCode, CodeError> {
    let f = Field::new(5, None).expect("default GF(32)");
    extended_cyclic_code("eBCH(32,11)", &f, &[1, 3, 5, 7], Some(12))
}

/// The (32,6,16) first-order RM code in the cyclic coordinate order of
/// [`extended_bch_32_11`], so that it is a subcode of the extended BCH code.
pub fn extended_cyclic_rm1_32() -> Result<BinaryLinearCode, CodeError> {
    let f = Field::new(5, None).expect("default GF(32)");
    extended_cyclic_code("eRM(1,5)", &f, &[1, 3, 5, 7, 11], Some(16))
}
