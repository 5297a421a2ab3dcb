//! Reed-Muller codes RM(r,m) through the Plotkin construction
//! `RM(r,m) = {(a | a+b) : a in RM(r,m-1), b in RM(r-1,m-1)}`, with the
//! recursive error/erasure decoder.
//!
//! Information bits: the first k(r,m-1) bits select `a`, the remaining
//! k(r-1,m-1) bits select `b`, recursively. The base codes are the
//! repetition code (r = 0, one bit) and the full space (r >= m, identity).
//! Positions 0..n/2 hold the `a` half.

use thiserror::Error;

use crate::linearcode::{mask, BinaryLinearCode, CodeError, DecodeOutcome, PackedWord, TernaryWord, Trit};

/// Largest m supported by the packed encoder and decoder (n = 128).
pub const RM_MAX_M: u32 = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RmError {
    #[error("order r={r} exceeds m={m}")]
    OrderTooLarge { r: u32, m: u32 },
    #[error("m={0} exceeds the supported maximum of 7")]
    LengthUnsupported(u32),
    #[error("expected {expected} symbols, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("word is not a codeword of RM({r},{m})")]
    NotACodeword { r: u32, m: u32 },
}

/// Binomial coefficient for small arguments.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Dimension of RM(r,m): sum of C(m,i) for i = 0..=r.
pub fn rm_dimension(r: u32, m: u32) -> u64 {
    (0..=r.min(m)).map(|i| binomial(m as u64, i as u64)).sum()
}

/// Minimum distance 2^(m-r).
pub fn rm_distance(r: u32, m: u32) -> u64 {
    1u64 << (m - r.min(m))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RmCode {
    r: u32,
    m: u32,
}

impl RmCode {
    pub fn new(r: u32, m: u32) -> Result<Self, RmError> {
        if r > m {
            return Err(RmError::OrderTooLarge { r, m });
        }
        if m > RM_MAX_M {
            return Err(RmError::LengthUnsupported(m));
        }
        Ok(RmCode { r, m })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> usize {
        1 << self.m
    }

    pub fn k(&self) -> usize {
        rm_dimension(self.r, self.m) as usize
    }

    pub fn d(&self) -> usize {
        rm_distance(self.r, self.m) as usize
    }

    pub fn encode_packed(&self, info: u128) -> u128 {
        encode_rec(self.r, self.m, info & mask(self.k()))
    }

    pub fn encode(&self, info: &[bool]) -> Result<Vec<bool>, RmError> {
        if info.len() != self.k() {
            return Err(RmError::LengthMismatch { expected: self.k(), got: info.len() });
        }
        let c = self.encode_packed(crate::linearcode::bits_to_u128(info));
        Ok(crate::linearcode::u128_to_bits(c, self.n()))
    }

    /// Inverse of encoding; rejects words outside the code.
    pub fn info_extract_packed(&self, c: u128) -> Result<u128, RmError> {
        extract_rec(self.r, self.m, c & mask(self.n()))
            .filter(|_| c & !mask(self.n()) == 0)
            .ok_or(RmError::NotACodeword { r: self.r, m: self.m })
    }

    pub fn info_extract(&self, c: &[bool]) -> Result<Vec<bool>, RmError> {
        if c.len() != self.n() {
            return Err(RmError::LengthMismatch { expected: self.n(), got: c.len() });
        }
        let u = self.info_extract_packed(crate::linearcode::bits_to_u128(c))?;
        Ok(crate::linearcode::u128_to_bits(u, self.k()))
    }

    /// Recursive error/erasure decoding; succeeds whenever 2*errors + erasures < d.
    pub fn decode_packed(&self, y: PackedWord) -> DecodeOutcome<u128> {
        let n = self.n();
        let erased = y.erased & mask(n);
        decode_rec(self.r, self.m, y.value & mask(n) & !erased, erased).into()
    }

    pub fn decode(&self, y: &TernaryWord) -> Result<DecodeOutcome<Vec<bool>>, RmError> {
        if y.len() != self.n() {
            return Err(RmError::LengthMismatch { expected: self.n(), got: y.len() });
        }
        let packed = y.pack().expect("n <= 128");
        Ok(self.decode_packed(packed).map(|c| crate::linearcode::u128_to_bits(c, self.n())))
    }

    /// Generator-matrix view, with rows equal to the encodings of unit vectors.
    pub fn as_linear_code(&self) -> Result<BinaryLinearCode, CodeError> {
        let rows = (0..self.k()).map(|i| self.encode_packed(1u128 << i)).collect();
        BinaryLinearCode::from_rows(format!("RM({},{})", self.r, self.m), self.n(), rows, Some(self.d()))
    }
}

fn encode_rec(r: u32, m: u32, u: u128) -> u128 {
    let n = 1usize << m;
    if r == 0 {
        return if u & 1 == 1 { mask(n) } else { 0 };
    }
    if r >= m {
        return u;
    }
    let half = n / 2;
    let ka = rm_dimension(r, m - 1) as usize;
    let a = encode_rec(r, m - 1, u & mask(ka));
    let b = encode_rec(r - 1, m - 1, u >> ka);
    a | (a ^ b) << half
}

fn extract_rec(r: u32, m: u32, c: u128) -> Option<u128> {
    let n = 1usize << m;
    if r == 0 {
        return match c {
            0 => Some(0),
            x if x == mask(n) => Some(1),
            _ => None,
        };
    }
    if r >= m {
        return Some(c);
    }
    let half = n / 2;
    let ka = rm_dimension(r, m - 1) as usize;
    let a = c & mask(half);
    let b = a ^ (c >> half);
    let ua = extract_rec(r, m - 1, a)?;
    let ub = extract_rec(r - 1, m - 1, b)?;
    Some(ua | ub << ka)
}

/// `y` has zeros at erased positions.
fn decode_rec(r: u32, m: u32, y: u128, e: u128) -> Option<u128> {
    let n = 1usize << m;
    let full = mask(n);
    if r == 0 {
        let ones = y.count_ones();
        let zeros = n as u32 - e.count_ones() - ones;
        return match ones.cmp(&zeros) {
            std::cmp::Ordering::Greater => Some(full),
            std::cmp::Ordering::Less => Some(0),
            std::cmp::Ordering::Equal => None,
        };
    }
    if r >= m {
        return (e == 0).then_some(y);
    }
    if r == m - 1 {
        let parity = y.count_ones() & 1;
        return match e.count_ones() {
            0 => (parity == 0).then_some(y),
            1 => Some(if parity == 1 { y | e } else { y }),
            _ => None,
        };
    }
    plotkin_step(r, m, y, e, &mut decode_rec)
}

/// One step of the recursive decoder on a word of RM(r, m) with `1 <= r < m`,
/// delegating the three half-length decodings to `sub(r', m - 1, y', e')`.
/// `y` must be zero at erased positions, and so are the words passed to `sub`.
///
/// [`RmCode::decode_packed`] uses the decoder itself as `sub`; supplying
/// memoized half results instead allows exhaustive checks of long codes.
pub fn plotkin_step(
    r: u32,
    m: u32,
    y: u128,
    e: u128,
    sub: &mut impl FnMut(u32, u32, u128, u128) -> Option<u128>,
) -> Option<u128> {
    debug_assert!(r >= 1 && r < m);
    let n = 1usize << m;
    let full = mask(n);
    let half = n / 2;
    let low = mask(half);
    let (ya, yb) = (y & low, y >> half);
    let (ea, eb) = (e & low, e >> half);
    // y_a + y_b lies in RM(r-1, m-1); erasures absorb.
    let es = ea | eb;
    let b_hat = sub(r - 1, m - 1, (ya ^ yb) & !es, es)?;
    // Two estimates of the left half u.
    let cand1 = sub(r, m - 1, (yb ^ b_hat) & !eb, eb);
    let cand2 = sub(r, m - 1, ya, ea);
    // Keep the candidate closer to y over non-erased positions.
    let keep = !e & full;
    let assemble = |a: u128| a | (a ^ b_hat) << half;
    let scored = |a: Option<u128>| a.map(|a| {
        let c = assemble(a);
        (((c ^ y) & keep).count_ones(), c)
    });
    match (scored(cand1), scored(cand2)) {
        (None, None) => None,
        (Some((_, c)), None) | (None, Some((_, c))) => Some(c),
        (Some((d1, c1)), Some((d2, c2))) => {
            if c1 == c2 || d1 < d2 {
                Some(c1)
            } else if d2 < d1 {
                Some(c2)
            } else {
                None
            }
        }
    }
}

/// Slice-based version of the same decoder for any m. Slower; kept as an
/// independent reference and for lengths beyond 128.
pub fn decode_reference(r: u32, m: u32, y: &[Trit]) -> Option<Vec<bool>> {
    let n = 1usize << m;
    assert_eq!(y.len(), n);
    if r == 0 {
        let ones = y.iter().filter(|&&t| t == Trit::One).count();
        let zeros = y.iter().filter(|&&t| t == Trit::Zero).count();
        return match ones.cmp(&zeros) {
            std::cmp::Ordering::Greater => Some(vec![true; n]),
            std::cmp::Ordering::Less => Some(vec![false; n]),
            std::cmp::Ordering::Equal => None,
        };
    }
    if r >= m {
        return y.iter().map(|&t| (t != Trit::Erased).then_some(t == Trit::One)).collect();
    }
    if r == m - 1 {
        let erased: Vec<usize> = (0..n).filter(|&i| y[i] == Trit::Erased).collect();
        let parity = y.iter().filter(|&&t| t == Trit::One).count() % 2 == 1;
        let mut out: Vec<bool> = y.iter().map(|&t| t == Trit::One).collect();
        return match erased.len() {
            0 => (!parity).then_some(out),
            1 => {
                out[erased[0]] = parity;
                Some(out)
            }
            _ => None,
        };
    }
    let half = n / 2;
    let (ya, yb) = y.split_at(half);
    let sum: Vec<Trit> = ya.iter().zip(yb).map(|(&a, &b)| a + b).collect();
    let b_hat = decode_reference(r - 1, m - 1, &sum)?;
    let shifted: Vec<Trit> = yb.iter().zip(&b_hat).map(|(&t, &b)| t + Trit::from_bit(b)).collect();
    let cand1 = decode_reference(r, m - 1, &shifted);
    let cand2 = decode_reference(r, m - 1, ya);
    let assemble = |a: Vec<bool>| {
        let mut c = a.clone();
        c.extend(a.iter().zip(&b_hat).map(|(x, y)| x ^ y));
        c
    };
    let dist = |c: &[bool]| {
        c.iter()
            .zip(y)
            .filter(|(&b, &t)| t != Trit::Erased && (t == Trit::One) != b)
            .count()
    };
    match (cand1.map(assemble), cand2.map(assemble)) {
        (None, None) => None,
        (Some(c), None) | (None, Some(c)) => Some(c),
        (Some(c1), Some(c2)) => {
            let (d1, d2) = (dist(&c1), dist(&c2));
            if c1 == c2 || d1 < d2 {
                Some(c1)
            } else if d2 < d1 {
                Some(c2)
            } else {
                None
            }
        }
    }
}
