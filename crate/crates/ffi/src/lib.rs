//! C ABI for the noisebit simulator.
//!
//! Every function returns an [`NbStatus`]; results come back through out
//! pointers. On failure the message is kept per thread and can be read with
//! [`nb_last_error_message`]. Handles are opaque and must be released with
//! their `_free` function.
//!
//! # Safety
//!
//! Pointer arguments must be null or valid for the access their type
//! implies: handles come from the matching `_new`/`_generate` call and are
//! not used after `_free`; `bits` points to `n` readable bytes; `matrix`
//! points to 8 doubles; `buf` points to `len` writable bytes. Null pointers
//! are reported as `NB_STATUS_NULL_POINTER`. A handle must not be used from
//! two threads at once.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use noisebit::gates::{apply_gate, Gate2x2};
use noisebit::nbl::{amplitude_estimate, BitString, NoiseBitSystem, OpCount, ProductState};
use noisebit::noise::{rtw_sample, StreamId, TelegraphStream};
use noisebit::precision::Precision;
use noisebit::rng::{pack_bits, BitStream, PipelineConfig};
use noisebit::stat_tests::run_battery;
use noisebit::Error;
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfRange = 3,
    LengthMismatch = 4,
    TooShort = 5,
    PreconditionFailed = 6,
    UnknownGate = 7,
    BufferTooSmall = 8,
    Panic = 99,
}

/// Product-form noise-bit state.
pub struct NbProductState {
    inner: ProductState,
}

/// Generated bit stream.
pub struct NbBitStream {
    inner: BitStream,
}

/// Correlator readout of one string.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct NbEstimate {
    pub re: f64,
    pub im: f64,
    pub std_error: f64,
    pub half_width: f64,
    pub hoeffding_bound: f64,
    pub decision: bool,
}

/// Battery summary.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct NbBatterySummary {
    pub tests: usize,
    pub failures: usize,
    pub min_p_value: f64,
    pub pass: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(msg: &str) {
    LAST_ERROR.with(|e| {
        let mut e = e.borrow_mut();
        e.clear();
        e.extend(msg.bytes().filter(|&b| b != 0));
    });
}

fn status_of(err: &Error) -> NbStatus {
    match err {
        Error::InvalidOu(_) | Error::InvalidArgument(_) | Error::NotProductForm => NbStatus::InvalidArgument,
        Error::IndexOutOfRange { .. } | Error::TooManyBits { .. } => NbStatus::OutOfRange,
        Error::LengthMismatch { .. } => NbStatus::LengthMismatch,
        Error::TooShort { .. } => NbStatus::TooShort,
        Error::Precondition { .. } => NbStatus::PreconditionFailed,
        Error::UnknownGate(_) => NbStatus::UnknownGate,
    }
}

struct Fail(NbStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(NbStatus::NullPointer, format!("`{what}` is null"))
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> NbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NbStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            NbStatus::Panic
        }
    }
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn bit_string(bits: *const u8, n: usize) -> Result<BitString, Fail> {
    if n > 0 && bits.is_null() {
        return Err(null("bits"));
    }
    let slice = if n == 0 { &[][..] } else { std::slice::from_raw_parts(bits, n) };
    if let Some(b) = slice.iter().find(|&&b| b > 1) {
        return Err(Fail(NbStatus::InvalidArgument, format!("bit value {b} is not 0 or 1")));
    }
    Ok(BitString::new(slice.iter().map(|&b| b == 1).collect()))
}

/// Copies the calling thread's last error message, NUL-terminated, into
/// `buf`. Returns the buffer size needed including the terminator; nothing
/// is written when `buf` is null or `len` is too small.
#[no_mangle]
pub unsafe extern "C" fn nb_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let needed = e.len() + 1;
        if !buf.is_null() && len >= needed {
            std::ptr::copy_nonoverlapping(e.as_ptr(), buf.cast::<u8>(), e.len());
            *buf.add(e.len()) = 0;
        }
        needed
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn nb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Reference-noise sample `R_bit^value(t)` of the system seeded with
/// `master_seed`; writes -1 or +1.
#[no_mangle]
pub unsafe extern "C" fn nb_rtw_sample(
    master_seed: u64,
    bit: usize,
    value: u8,
    t: u64,
    out_sample: *mut i8,
) -> NbStatus {
    guard(|| {
        let o = out(out_sample, "out_sample")?;
        if value > 1 {
            return Err(Fail(NbStatus::InvalidArgument, format!("logic value {value} is not 0 or 1")));
        }
        *o = rtw_sample(&TelegraphStream::new(master_seed, StreamId::new(bit, value)), t);
        Ok(())
    })
}

/// `k_B T ln(1/epsilon)` in joules.
#[no_mangle]
pub unsafe extern "C" fn nb_dissipation_bound(
    temperature: f64,
    epsilon: f64,
    out_joules: *mut f64,
) -> NbStatus {
    guard(|| {
        let o = out(out_joules, "out_joules")?;
        *o = noisebit::noise::dissipation_bound(temperature, epsilon)?;
        Ok(())
    })
}

/// New `n`-bit state with every bit in logic value 0.
#[no_mangle]
pub unsafe extern "C" fn nb_product_state_new(n: usize, out_state: *mut *mut NbProductState) -> NbStatus {
    guard(|| {
        let o = out(out_state, "out_state")?;
        if n == 0 {
            return Err(Fail(NbStatus::InvalidArgument, "state needs at least one bit".into()));
        }
        *o = Box::into_raw(Box::new(NbProductState { inner: ProductState::basis_zero(n) }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn nb_product_state_free(state: *mut NbProductState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

#[no_mangle]
pub unsafe extern "C" fn nb_product_state_len(state: *const NbProductState, out_n: *mut usize) -> NbStatus {
    guard(|| {
        let s = state.as_ref().ok_or_else(|| null("state"))?;
        *out(out_n, "out_n")? = s.inner.n();
        Ok(())
    })
}

/// 0 selects automatic, 1 double, 2 extended precision.
#[no_mangle]
pub unsafe extern "C" fn nb_product_state_set_precision(
    state: *mut NbProductState,
    precision: u32,
) -> NbStatus {
    guard(|| {
        let s = out(state, "state")?;
        let p = match precision {
            0 => Precision::Auto,
            1 => Precision::Double,
            2 => Precision::Extended,
            other => return Err(Fail(NbStatus::InvalidArgument, format!("unknown precision {other}"))),
        };
        s.inner = s.inner.clone().with_precision(p);
        Ok(())
    })
}

/// Sets the coefficient pair `(a, b)` of one bit.
#[no_mangle]
pub unsafe extern "C" fn nb_product_state_set_pair(
    state: *mut NbProductState,
    bit: usize,
    a_re: f64,
    a_im: f64,
    b_re: f64,
    b_im: f64,
) -> NbStatus {
    guard(|| {
        let s = out(state, "state")?;
        let n = s.inner.n();
        let mut pairs = s.inner.pairs().to_vec();
        let slot = pairs.get_mut(bit).ok_or(Error::IndexOutOfRange { index: bit, n })?;
        *slot = [Complex64::new(a_re, a_im), Complex64::new(b_re, b_im)];
        s.inner = ProductState::from_pairs(pairs)?.with_precision(s.inner.precision());
        Ok(())
    })
}

/// Applies a catalog gate (`X`, `Z`, `H`, `S`, `T`) to one bit.
#[no_mangle]
pub unsafe extern "C" fn nb_product_state_apply_gate(
    state: *mut NbProductState,
    name: *const c_char,
    bit: usize,
) -> NbStatus {
    guard(|| {
        let s = out(state, "state")?;
        if name.is_null() {
            return Err(null("name"));
        }
        let name = CStr::from_ptr(name)
            .to_str()
            .map_err(|_| Fail(NbStatus::InvalidArgument, "gate name is not UTF-8".into()))?;
        apply_gate(&mut s.inner, bit, &Gate2x2::by_name(name)?)?;
        Ok(())
    })
}

/// Applies a unitary 2x2 matrix given as 8 doubles, row-major, each entry
/// as `re, im`.
#[no_mangle]
pub unsafe extern "C" fn nb_product_state_apply_matrix(
    state: *mut NbProductState,
    matrix: *const f64,
    bit: usize,
) -> NbStatus {
    guard(|| {
        let s = out(state, "state")?;
        if matrix.is_null() {
            return Err(null("matrix"));
        }
        let v = std::slice::from_raw_parts(matrix, 8);
        let e = |k: usize| Complex64::new(v[2 * k], v[2 * k + 1]);
        let gate = Gate2x2::unitary("matrix", [[e(0), e(1)], [e(2), e(3)]])?;
        apply_gate(&mut s.inner, bit, &gate)?;
        Ok(())
    })
}

/// Exact amplitude of the string given as `n` bytes of 0 or 1.
#[no_mangle]
pub unsafe extern "C" fn nb_product_state_amplitude(
    state: *const NbProductState,
    bits: *const u8,
    n: usize,
    out_re: *mut f64,
    out_im: *mut f64,
) -> NbStatus {
    guard(|| {
        let s = state.as_ref().ok_or_else(|| null("state"))?;
        let c = bit_string(bits, n)?;
        let re = out(out_re, "out_re")?;
        let im = out(out_im, "out_im")?;
        let a = s.inner.amplitude(&c, &mut OpCount::default())?;
        (*re, *im) = (a.re, a.im);
        Ok(())
    })
}

/// `log2 |amplitude|`, finite even where the amplitude leaves the double range.
#[no_mangle]
pub unsafe extern "C" fn nb_product_state_log2_amplitude(
    state: *const NbProductState,
    bits: *const u8,
    n: usize,
    out_log2: *mut f64,
) -> NbStatus {
    guard(|| {
        let s = state.as_ref().ok_or_else(|| null("state"))?;
        let c = bit_string(bits, n)?;
        *out(out_log2, "out_log2")? = s.inner.amplitude_ext(&c, &mut OpCount::default())?.log2_abs();
        Ok(())
    })
}

/// Correlator estimate of the amplitude over `steps` time steps.
#[no_mangle]
pub unsafe extern "C" fn nb_product_state_estimate(
    state: *const NbProductState,
    master_seed: u64,
    bits: *const u8,
    n: usize,
    steps: u64,
    out_estimate: *mut NbEstimate,
) -> NbStatus {
    guard(|| {
        let s = state.as_ref().ok_or_else(|| null("state"))?;
        let c = bit_string(bits, n)?;
        let o = out(out_estimate, "out_estimate")?;
        let system = NoiseBitSystem::new(s.inner.n(), master_seed)?;
        let est = amplitude_estimate(&system, &s.inner, &c, steps)?;
        *o = NbEstimate {
            re: est.value.re,
            im: est.value.im,
            std_error: est.std_error,
            half_width: est.half_width,
            hoeffding_bound: est.bound,
            decision: est.decision,
        };
        Ok(())
    })
}

/// Runs the combined generator; `decimation` 0 selects the default spacing.
#[no_mangle]
pub unsafe extern "C" fn nb_bitstream_generate(
    generators: usize,
    samples: usize,
    rho: f64,
    sigma: f64,
    decimation: usize,
    master_seed: u64,
    out_stream: *mut *mut NbBitStream,
) -> NbStatus {
    guard(|| {
        let o = out(out_stream, "out_stream")?;
        let cfg = PipelineConfig {
            generators,
            rho,
            sigma,
            decimation: (decimation > 0).then_some(decimation),
            master_seed,
        };
        *o = Box::into_raw(Box::new(NbBitStream { inner: cfg.run(samples)? }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn nb_bitstream_free(stream: *mut NbBitStream) {
    if !stream.is_null() {
        drop(Box::from_raw(stream));
    }
}

#[no_mangle]
pub unsafe extern "C" fn nb_bitstream_len(stream: *const NbBitStream, out_len: *mut usize) -> NbStatus {
    guard(|| {
        let s = stream.as_ref().ok_or_else(|| null("stream"))?;
        *out(out_len, "out_len")? = s.inner.len();
        Ok(())
    })
}

/// Packs the bits LSB-first into `buf`. `out_written` receives the byte
/// count needed, also when the buffer is too small.
#[no_mangle]
pub unsafe extern "C" fn nb_bitstream_pack(
    stream: *const NbBitStream,
    buf: *mut u8,
    len: usize,
    out_written: *mut usize,
) -> NbStatus {
    guard(|| {
        let s = stream.as_ref().ok_or_else(|| null("stream"))?;
        let written = out(out_written, "out_written")?;
        let packed = pack_bits(&s.inner.bits);
        *written = packed.len();
        if packed.is_empty() {
            return Ok(());
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        if len < packed.len() {
            return Err(Fail(NbStatus::BufferTooSmall, format!("need {} bytes, got {len}", packed.len())));
        }
        std::ptr::copy_nonoverlapping(packed.as_ptr(), buf, packed.len());
        Ok(())
    })
}

/// Runs the randomness battery at significance `alpha`.
#[no_mangle]
pub unsafe extern "C" fn nb_battery_run(
    stream: *const NbBitStream,
    alpha: f64,
    out_summary: *mut NbBatterySummary,
) -> NbStatus {
    guard(|| {
        let s = stream.as_ref().ok_or_else(|| null("stream"))?;
        let o = out(out_summary, "out_summary")?;
        let report = run_battery(&s.inner.bits, alpha)?;
        *o = NbBatterySummary {
            tests: report.results.len(),
            failures: report.failures().count() + report.errors.len(),
            min_p_value: report.results.iter().map(|r| r.p_value).fold(1.0, f64::min),
            pass: report.pass,
        };
        Ok(())
    })
}
