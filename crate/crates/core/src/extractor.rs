//! Code-offset fuzzy extractor: helper-data generation, key reproduction,
//! key hashing, and the helper-data file format.
//!
//! Bit vectors are stored MSB-first: bit `i` lands in byte `i / 8` at
//! position `7 - i % 8`, and the last byte is zero-padded. Response files,
//! helper offsets and the hash input all use this packing.

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::channel::RngStream;
use crate::gccode::{preset, GcCodeSpec, GcError, GcOutcome};
use crate::linearcode::DecodeOutcome;

pub const HELPER_MAGIC: &[u8; 4] = b"PUFH";
pub const HELPER_VERSION: u8 = 0x01;
pub const KEY_BYTES: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtractorError {
    #[error("expected {expected} response bits, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("helper data is for code {helper:?}, not {code:?}")]
    CodeMismatch { helper: String, code: String },
    #[error("not a helper-data file (bad magic)")]
    BadMagic,
    #[error("unsupported helper-data version {0}")]
    UnsupportedVersion(u8),
    #[error("helper data truncated")]
    Truncated,
    #[error("helper data has {0} trailing bytes")]
    TrailingBytes(usize),
    #[error("helper data CRC mismatch: stored {stored:08x}, computed {computed:08x}")]
    CrcMismatch { stored: u32, computed: u32 },
    #[error("code id must be 1 to 255 ASCII bytes")]
    BadCodeId,
    #[error("nonzero padding bits after the offset")]
    NonzeroPadding,
    #[error(transparent)]
    Code(#[from] GcError),
}

/// Pack bits MSB-first into bytes.
pub fn pack_bits(bits: &[bool]) -> Vec<u8> {
    bits.chunks(8)
        .map(|chunk| chunk.iter().enumerate().fold(0u8, |acc, (j, &b)| acc | (b as u8) << (7 - j)))
        .collect()
}

/// Unpack the first `n` bits; the remaining bits of the last byte must be zero.
pub fn unpack_bits(bytes: &[u8], n: usize) -> Result<Vec<bool>, ExtractorError> {
    if bytes.len() != n.div_ceil(8) {
        return Err(ExtractorError::LengthMismatch { expected: n, got: bytes.len() * 8 });
    }
    let bits: Vec<bool> = (0..bytes.len() * 8).map(|i| bytes[i / 8] >> (7 - i % 8) & 1 == 1).collect();
    if bits[n..].iter().any(|&b| b) {
        return Err(ExtractorError::NonzeroPadding);
    }
    Ok(bits[..n].to_vec())
}

/// A hash turning a reproduced response into key bytes.
pub trait KeyHash: Send + Sync {
    /// Stable identifier stored alongside keys.
    fn id(&self) -> &'static str;
    fn digest(&self, bits: &[bool]) -> [u8; KEY_BYTES];
}

/// SHA-256 over the 64-bit big-endian bit count followed by the packed
/// bits, truncated to the first 16 bytes.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sha256Trunc128;

impl KeyHash for Sha256Trunc128 {
    fn id(&self) -> &'static str {
        "sha256-128"
    }

    fn digest(&self, bits: &[bool]) -> [u8; KEY_BYTES] {
        let mut h = Sha256::new();
        h.update((bits.len() as u64).to_be_bytes());
        h.update(pack_bits(bits));
        let full = h.finalize();
        let mut out = [0u8; KEY_BYTES];
        out.copy_from_slice(&full[..KEY_BYTES]);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyMaterial {
    pub key: [u8; KEY_BYTES],
    pub hash_id: &'static str,
}

/// Public helper data: the offset `e = r XOR c` and the code it belongs to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HelperData {
    pub code_id: String,
    pub offset: Vec<bool>,
}

impl HelperData {
    pub fn n(&self) -> usize {
        self.offset.len()
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, ExtractorError> {
        let id = self.code_id.as_bytes();
        if id.is_empty() || id.len() > 255 || !self.code_id.is_ascii() {
            return Err(ExtractorError::BadCodeId);
        }
        let n = u32::try_from(self.n()).map_err(|_| ExtractorError::LengthMismatch { expected: u32::MAX as usize, got: self.n() })?;
        let mut out = Vec::with_capacity(14 + id.len() + self.n().div_ceil(8));
        out.extend_from_slice(HELPER_MAGIC);
        out.push(HELPER_VERSION);
        out.push(id.len() as u8);
        out.extend_from_slice(id);
        out.extend_from_slice(&n.to_be_bytes());
        out.extend_from_slice(&pack_bits(&self.offset));
        let crc = crc32fast::hash(&out);
        out.extend_from_slice(&crc.to_be_bytes());
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, ExtractorError> {
        let take = |at: usize, len: usize| bytes.get(at..at + len).ok_or(ExtractorError::Truncated);
        if take(0, 4)? != HELPER_MAGIC {
            return Err(ExtractorError::BadMagic);
        }
        let version = take(4, 1)?[0];
        if version != HELPER_VERSION {
            return Err(ExtractorError::UnsupportedVersion(version));
        }
        let id_len = take(5, 1)?[0] as usize;
        let id = take(6, id_len)?;
        let mut at = 6 + id_len;
        let n = u32::from_be_bytes(take(at, 4)?.try_into().unwrap()) as usize;
        at += 4;
        let packed = take(at, n.div_ceil(8))?;
        at += packed.len();
        let stored = u32::from_be_bytes(take(at, 4)?.try_into().unwrap());
        let computed = crc32fast::hash(&bytes[..at]);
        at += 4;
        if at != bytes.len() {
            return Err(ExtractorError::TrailingBytes(bytes.len() - at));
        }
        if stored != computed {
            return Err(ExtractorError::CrcMismatch { stored, computed });
        }
        if id_len == 0 || !id.is_ascii() {
            return Err(ExtractorError::BadCodeId);
        }
        let code_id = String::from_utf8(id.to_vec()).map_err(|_| ExtractorError::BadCodeId)?;
        Ok(HelperData { code_id, offset: unpack_bits(packed, n)? })
    }
}

fn check_len(spec: &GcCodeSpec, bits: &[bool]) -> Result<(), ExtractorError> {
    if bits.len() != spec.n() {
        return Err(ExtractorError::LengthMismatch { expected: spec.n(), got: bits.len() });
    }
    Ok(())
}

/// Helper-data generation with the default hash.
pub fn gen(response: &[bool], spec: &GcCodeSpec, rng: &mut RngStream) -> Result<(HelperData, KeyMaterial), ExtractorError> {
    gen_with_hash(response, spec, rng, &Sha256Trunc128)
}

pub fn gen_with_hash(
    response: &[bool],
    spec: &GcCodeSpec,
    rng: &mut RngStream,
    hash: &dyn KeyHash,
) -> Result<(HelperData, KeyMaterial), ExtractorError> {
    check_len(spec, response)?;
    let info = rng.bits(spec.k());
    let c = spec.rows_to_bits(&spec.encode(&info)?);
    let offset = response.iter().zip(&c).map(|(r, c)| r ^ c).collect();
    let key = KeyMaterial { key: hash.digest(response), hash_id: hash.id() };
    Ok((HelperData { code_id: spec.id().to_string(), offset }, key))
}

/// Key reproduction, resolving the code from the helper's code id.
pub fn rep(response: &[bool], helper: &HelperData) -> Result<DecodeOutcome<KeyMaterial>, ExtractorError> {
    let spec = preset(&helper.code_id)?.gc()?;
    rep_with(response, helper, &spec, &Sha256Trunc128)
}

/// Key reproduction with an already constructed code.
pub fn rep_with(
    response: &[bool],
    helper: &HelperData,
    spec: &GcCodeSpec,
    hash: &dyn KeyHash,
) -> Result<DecodeOutcome<KeyMaterial>, ExtractorError> {
    if helper.code_id != spec.id() {
        return Err(ExtractorError::CodeMismatch { helper: helper.code_id.clone(), code: spec.id().to_string() });
    }
    check_len(spec, &helper.offset)?;
    check_len(spec, response)?;
    let shifted: Vec<bool> = response.iter().zip(&helper.offset).map(|(r, e)| r ^ e).collect();
    let GcOutcome::Decoded(decoded) = spec.decode(&spec.bits_to_rows(&shifted)?)? else {
        return Ok(DecodeOutcome::Failure);
    };
    let r_hat: Vec<bool> = spec.rows_to_bits(&decoded.rows).iter().zip(&helper.offset).map(|(c, e)| c ^ e).collect();
    Ok(DecodeOutcome::Decoded(KeyMaterial { key: hash.digest(&r_hat), hash_id: hash.id() }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gccode::{gc_rm_2048, gc_rs_1024};

    fn hex(bytes: &[u8]) -> String {
        bytes.iter().map(|b| format!("{b:02x}")).collect()
    }

    #[test]
    fn hash_vectors() {
        let h = Sha256Trunc128;
        assert_eq!(hex(&h.digest(&[])), "af5570f5a1810b7af78caf4bc70a660f");
        assert_eq!(hex(&h.digest(&[true, false, true])), "494a55b0c2414e26135318af3b66e5f7");
        let bits: Vec<bool> = (0..2048).map(|i| (i * 7 + 3) % 5 < 2).collect();
        assert_eq!(hex(&h.digest(&bits)), "88b25fba9c0ed1688fd9fb78d69f6601");
        let mut flipped = bits.clone();
        flipped[1000] ^= true;
        assert_ne!(h.digest(&flipped), h.digest(&bits));
    }

    #[test]
    fn helper_format_vector() {
        let helper = HelperData {
            code_id: "x".into(),
            offset: vec![true, false, true, true, false, false, false, false, true, true],
        };
        let bytes = helper.to_bytes().unwrap();
        assert_eq!(hex(&bytes), "505546480101780000000ab0c067d6ab58");
        assert_eq!(HelperData::from_bytes(&bytes).unwrap(), helper);
    }

    #[test]
    fn helper_parse_errors() {
        let helper = HelperData { code_id: "gc-rm-2048".into(), offset: vec![true; 2048] };
        let bytes = helper.to_bytes().unwrap();
        assert_eq!(bytes.len(), 4 + 1 + 1 + 10 + 4 + 256 + 4);
        let mut bad = bytes.clone();
        bad[30] ^= 1;
        assert!(matches!(HelperData::from_bytes(&bad), Err(ExtractorError::CrcMismatch { .. })));
        assert_eq!(HelperData::from_bytes(&bytes[..100]), Err(ExtractorError::Truncated));
        let mut long = bytes.clone();
        long.push(0);
        assert_eq!(HelperData::from_bytes(&long), Err(ExtractorError::TrailingBytes(1)));
        let mut magic = bytes.clone();
        magic[0] = b'X';
        assert_eq!(HelperData::from_bytes(&magic), Err(ExtractorError::BadMagic));
        let mut version = bytes;
        version[4] = 2;
        assert_eq!(HelperData::from_bytes(&version), Err(ExtractorError::UnsupportedVersion(2)));
    }

    #[test]
    fn roundtrip_and_key_independence() {
        let spec = gc_rm_2048().unwrap();
        let mut src = RngStream::new(42, 0);
        let response = src.bits(2048);
        let (h1, k1) = gen(&response, &spec, &mut RngStream::new(1, 0)).unwrap();
        let (h2, k2) = gen(&response, &spec, &mut RngStream::new(2, 0)).unwrap();
        assert_ne!(h1.offset, h2.offset);
        assert_eq!(k1, k2);
        assert_eq!(rep(&response, &h1).unwrap().ok(), Some(k1.clone()));
        assert_eq!(rep_with(&response, &h2, &spec, &Sha256Trunc128).unwrap().ok(), Some(k1));
    }

    #[test]
    fn codeword_response_has_zero_offset() {
        let spec = gc_rs_1024().unwrap();
        let mut rng = RngStream::new(5, 3);
        let info = RngStream::new(5, 3).bits(spec.k());
        let c = spec.rows_to_bits(&spec.encode(&info).unwrap());
        let (helper, _) = gen(&c, &spec, &mut rng).unwrap();
        assert!(helper.offset.iter().all(|&b| !b));
    }

    #[test]
    fn mismatches_are_errors() {
        let spec = gc_rm_2048().unwrap();
        assert!(matches!(
            gen(&[false; 100], &spec, &mut RngStream::new(0, 0)),
            Err(ExtractorError::LengthMismatch { expected: 2048, got: 100 })
        ));
        let other = gc_rs_1024().unwrap();
        let (helper, _) = gen(&vec![false; 1024], &other, &mut RngStream::new(0, 0)).unwrap();
        assert!(matches!(
            rep_with(&vec![false; 2048], &helper, &spec, &Sha256Trunc128),
            Err(ExtractorError::CodeMismatch { .. })
        ));
    }

    #[test]
    fn pack_unpack() {
        let bits = vec![true, false, false, true, true];
        assert_eq!(pack_bits(&bits), vec![0b1001_1000]);
        assert_eq!(unpack_bits(&[0b1001_1000], 5).unwrap(), bits);
        assert_eq!(unpack_bits(&[0b1001_1001], 5), Err(ExtractorError::NonzeroPadding));
    }
}
