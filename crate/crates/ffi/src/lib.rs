//! C ABI for keyforge.
//!
//! Codes and helper data are opaque handles created by `kf_*_new` /
//! `kf_helper_parse` / `kf_gen` and released with the matching `*_free`.
//! Every fallible call returns a [`KfStatus`]; outputs go through pointers.
//! Bit strings (responses) are packed MSB-first, `ceil(n / 8)` bytes, with
//! zero padding in the last byte. Panics never cross the boundary; they are
//! reported as `KF_STATUS_INTERNAL`.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use keyforge::analysis::{stage_fail_prob, StageModel, SuccessPredicate, TailModel};
use keyforge::channel::RngStream;
use keyforge::extractor::{self, pack_bits, unpack_bits, ExtractorError, HelperData, Sha256Trunc128, KEY_BYTES};
use keyforge::gccode::{preset, GcCodeSpec};
use keyforge::linearcode::DecodeOutcome;
use keyforge::rscode::{power_lmax, power_radius};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KfStatus {
    Ok = 0,
    NullPointer = 1,
    UnknownCode = 2,
    LengthMismatch = 3,
    DecodeFailure = 4,
    FormatError = 5,
    BufferTooSmall = 6,
    InvalidArgument = 7,
    CodeMismatch = 8,
    Internal = 9,
}

/// A constructed GC code.
pub struct KfCode {
    spec: GcCodeSpec,
}

/// Parsed or freshly generated helper data.
pub struct KfHelper {
    data: HelperData,
}

/// Tail model selector for `kf_stage_fail_prob`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KfTail {
    Trinomial = 0,
    Conditional = 1,
    Independent = 2,
}

fn guard(f: impl FnOnce() -> Result<(), KfStatus>) -> KfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KfStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => KfStatus::Internal,
    }
}

fn extractor_status(e: ExtractorError) -> KfStatus {
    match e {
        ExtractorError::LengthMismatch { .. } => KfStatus::LengthMismatch,
        ExtractorError::CodeMismatch { .. } => KfStatus::CodeMismatch,
        ExtractorError::Code(_) => KfStatus::UnknownCode,
        _ => KfStatus::FormatError,
    }
}

/// # Safety
/// `ptr` must be null or valid for `len` bytes.
unsafe fn bytes<'a>(ptr: *const u8, len: usize) -> Result<&'a [u8], KfStatus> {
    if ptr.is_null() {
        return if len == 0 { Ok(&[]) } else { Err(KfStatus::NullPointer) };
    }
    Ok(slice::from_raw_parts(ptr, len))
}

fn response_bits(bytes: &[u8], n: usize) -> Result<Vec<bool>, KfStatus> {
    unpack_bits(bytes, n).map_err(|e| match e {
        ExtractorError::NonzeroPadding => KfStatus::FormatError,
        _ => KfStatus::LengthMismatch,
    })
}

/// Human-readable description of a status. The string is static.
#[no_mangle]
pub extern "C" fn kf_status_message(status: KfStatus) -> *const c_char {
    let s: &'static CStr = match status {
        KfStatus::Ok => c"ok",
        KfStatus::NullPointer => c"null pointer argument",
        KfStatus::UnknownCode => c"unknown or parameters-only code id",
        KfStatus::LengthMismatch => c"length mismatch",
        KfStatus::DecodeFailure => c"decoding failed",
        KfStatus::FormatError => c"malformed helper data or bit string",
        KfStatus::BufferTooSmall => c"output buffer too small",
        KfStatus::InvalidArgument => c"invalid argument",
        KfStatus::CodeMismatch => c"helper data belongs to a different code",
        KfStatus::Internal => c"internal error",
    };
    s.as_ptr()
}

/// Construct a preset code by id (for example `"gc-rm-2048"`).
///
/// # Safety
/// `id` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kf_code_new(id: *const c_char, out: *mut *mut KfCode) -> KfStatus {
    guard(|| {
        if id.is_null() || out.is_null() {
            return Err(KfStatus::NullPointer);
        }
        *out = ptr::null_mut();
        let id = CStr::from_ptr(id).to_str().map_err(|_| KfStatus::UnknownCode)?;
        let spec = preset(id).and_then(|p| p.gc()).map_err(|_| KfStatus::UnknownCode)?;
        *out = Box::into_raw(Box::new(KfCode { spec }));
        Ok(())
    })
}

/// # Safety
/// `code` must be null or a handle from `kf_code_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kf_code_free(code: *mut KfCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Code length in bits (0 for a null handle).
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kf_code_n(code: *const KfCode) -> usize {
    code.as_ref().map_or(0, |c| c.spec.n())
}

/// Code dimension in bits (0 for a null handle).
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kf_code_k(code: *const KfCode) -> usize {
    code.as_ref().map_or(0, |c| c.spec.k())
}

/// Generate helper data and a 16-byte key from a response.
///
/// # Safety
/// `response` must be valid for `response_len` bytes, `key_out` for 16
/// bytes, and `helper_out` writable.
#[no_mangle]
pub unsafe extern "C" fn kf_gen(
    code: *const KfCode,
    response: *const u8,
    response_len: usize,
    seed: u64,
    helper_out: *mut *mut KfHelper,
    key_out: *mut u8,
) -> KfStatus {
    guard(|| {
        let code = code.as_ref().ok_or(KfStatus::NullPointer)?;
        if helper_out.is_null() || key_out.is_null() {
            return Err(KfStatus::NullPointer);
        }
        *helper_out = ptr::null_mut();
        let r = response_bits(bytes(response, response_len)?, code.spec.n())?;
        let (helper, key) = extractor::gen(&r, &code.spec, &mut RngStream::new(seed, 0)).map_err(extractor_status)?;
        ptr::copy_nonoverlapping(key.key.as_ptr(), key_out, KEY_BYTES);
        *helper_out = Box::into_raw(Box::new(KfHelper { data: helper }));
        Ok(())
    })
}

/// Reproduce the key from a noisy response. Returns
/// `KF_STATUS_DECODE_FAILURE` without touching `key_out` when decoding fails.
///
/// # Safety
/// Handles must be live, `response` valid for `response_len` bytes and
/// `key_out` for 16 bytes.
#[no_mangle]
pub unsafe extern "C" fn kf_rep(
    code: *const KfCode,
    helper: *const KfHelper,
    response: *const u8,
    response_len: usize,
    key_out: *mut u8,
) -> KfStatus {
    guard(|| {
        let code = code.as_ref().ok_or(KfStatus::NullPointer)?;
        let helper = helper.as_ref().ok_or(KfStatus::NullPointer)?;
        if key_out.is_null() {
            return Err(KfStatus::NullPointer);
        }
        let r = response_bits(bytes(response, response_len)?, code.spec.n())?;
        match extractor::rep_with(&r, &helper.data, &code.spec, &Sha256Trunc128).map_err(extractor_status)? {
            DecodeOutcome::Decoded(key) => {
                ptr::copy_nonoverlapping(key.key.as_ptr(), key_out, KEY_BYTES);
                Ok(())
            }
            DecodeOutcome::Failure => Err(KfStatus::DecodeFailure),
        }
    })
}

/// Serialize helper data. `*written` receives the required size; with a
/// null or short buffer the call returns `KF_STATUS_BUFFER_TOO_SMALL`.
///
/// # Safety
/// `buf` must be null or valid for `cap` bytes; `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kf_helper_serialize(helper: *const KfHelper, buf: *mut u8, cap: usize, written: *mut usize) -> KfStatus {
    guard(|| {
        let helper = helper.as_ref().ok_or(KfStatus::NullPointer)?;
        if written.is_null() {
            return Err(KfStatus::NullPointer);
        }
        let out = helper.data.to_bytes().map_err(extractor_status)?;
        *written = out.len();
        if buf.is_null() || cap < out.len() {
            return Err(KfStatus::BufferTooSmall);
        }
        ptr::copy_nonoverlapping(out.as_ptr(), buf, out.len());
        Ok(())
    })
}

/// Parse serialized helper data.
///
/// # Safety
/// `buf` must be valid for `len` bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kf_helper_parse(buf: *const u8, len: usize, out: *mut *mut KfHelper) -> KfStatus {
    guard(|| {
        if out.is_null() {
            return Err(KfStatus::NullPointer);
        }
        *out = ptr::null_mut();
        let data = HelperData::from_bytes(bytes(buf, len)?).map_err(|_| KfStatus::FormatError)?;
        *out = Box::into_raw(Box::new(KfHelper { data }));
        Ok(())
    })
}

/// Offset length in bits (0 for a null handle).
///
/// # Safety
/// `helper` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kf_helper_n(helper: *const KfHelper) -> usize {
    helper.as_ref().map_or(0, |h| h.data.n())
}

/// # Safety
/// `helper` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kf_helper_free(helper: *mut KfHelper) {
    if !helper.is_null() {
        drop(Box::from_raw(helper));
    }
}

/// Power decoding radius of an RS(n, k) code with `ell` powers.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kf_power_radius(n: usize, k: usize, ell: usize, out: *mut usize) -> KfStatus {
    guard(|| {
        if out.is_null() {
            return Err(KfStatus::NullPointer);
        }
        *out = power_radius(n, k, ell).map_err(|_| KfStatus::InvalidArgument)?;
        Ok(())
    })
}

/// Largest useful number of powers for RS(n, k), `1 <= k <= n`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kf_power_lmax(n: usize, k: usize, out: *mut usize) -> KfStatus {
    guard(|| {
        if out.is_null() {
            return Err(KfStatus::NullPointer);
        }
        if k == 0 || k > n {
            return Err(KfStatus::InvalidArgument);
        }
        *out = power_lmax(n, k);
        Ok(())
    })
}

/// Failure probability of a half-distance error/erasure decoder of length
/// `n` and distance `d` over a symbol channel.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kf_stage_fail_prob(n: usize, d: usize, p_err: f64, p_eras: f64, tail: KfTail, out: *mut f64) -> KfStatus {
    guard(|| {
        if out.is_null() {
            return Err(KfStatus::NullPointer);
        }
        let tail = match tail {
            KfTail::Trinomial => TailModel::Trinomial,
            KfTail::Conditional => TailModel::ConditionalErrors,
            KfTail::Independent => TailModel::IndependentCounts,
        };
        let model = StageModel::new(n, SuccessPredicate::HalfDistance { d }, p_err, p_eras).with_tail(tail);
        *out = stage_fail_prob(&model).map_err(|_| KfStatus::InvalidArgument)?;
        Ok(())
    })
}

/// Pack bits MSB-first; exposed for tests and bindings that build responses.
pub fn pack_response(bits: &[bool]) -> Vec<u8> {
    pack_bits(bits)
}
