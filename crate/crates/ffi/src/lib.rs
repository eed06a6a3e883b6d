//! C ABI for `netseed`.
//!
//! Networks are opaque handles created by the `ns_network_*` constructors and
//! released with [`ns_network_free`]. Parameters travel by value in
//! [`NsParams`]. Every fallible call returns an [`NsStatus`]; on failure the
//! message of the last error on the calling thread is available from
//! [`ns_last_error_message`]. Output buffers are caller-allocated and their
//! lengths are checked. Agent indices are 0-based.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use nalgebra::DVector;
use netseed::allocation::{self, Regime};
use netseed::centrality;
use netseed::dynamics::DynamicsOperator;
use netseed::{Error, Firm, ModelParams, Network};

/// Opaque influence network.
pub struct NsNetwork {
    inner: Network,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NsParams {
    pub alpha: f64,
    pub delta: f64,
    pub q_a: f64,
    pub q_b: f64,
    pub c_s: f64,
    pub c_q: f64,
    pub budget_a: f64,
    pub budget_b: f64,
}

impl From<NsParams> for ModelParams {
    fn from(p: NsParams) -> Self {
        ModelParams {
            alpha: p.alpha,
            delta: p.delta,
            q_a: p.q_a,
            q_b: p.q_b,
            c_s: p.c_s,
            c_q: p.c_q,
            budget_a: p.budget_a,
            budget_b: p.budget_b,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParam = 2,
    Size = 3,
    NotSquare = 4,
    RowSum = 5,
    Diagonal = 6,
    NegativeWeight = 7,
    Dimension = 8,
    Bounds = 9,
    Capacity = 10,
    Solve = 11,
    Regime = 12,
    Parse = 13,
    SelfCheck = 14,
    BufferTooSmall = 15,
    Panic = 16,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NsFirm {
    A = 0,
    B = 1,
}

impl From<NsFirm> for Firm {
    fn from(f: NsFirm) -> Self {
        match f {
            NsFirm::A => Firm::A,
            NsFirm::B => Firm::B,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NsRegime {
    NoneSeedable = 0,
    AllSeedable = 1,
    GraphDependent = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> NsStatus {
    match e {
        Error::NotSquare { .. } => NsStatus::NotSquare,
        Error::RowSum { .. } => NsStatus::RowSum,
        Error::Diagonal { .. } => NsStatus::Diagonal,
        Error::NegativeWeight { .. } => NsStatus::NegativeWeight,
        Error::Size(_) => NsStatus::Size,
        Error::InvalidParam { .. } => NsStatus::InvalidParam,
        Error::Dimension { .. } => NsStatus::Dimension,
        Error::Bounds { .. } => NsStatus::Bounds,
        Error::Capacity { .. } => NsStatus::Capacity,
        Error::Solve(_) => NsStatus::Solve,
        Error::Regime { .. } => NsStatus::Regime,
        Error::Parse { .. } => NsStatus::Parse,
        Error::SelfCheck { .. } => NsStatus::SelfCheck,
    }
}

struct Failure(NsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(NsStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, records any error message and converts panics to [`NsStatus::Panic`].
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> NsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => NsStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside netseed".into());
            NsStatus::Panic
        }
    }
}

unsafe fn network_ref<'a>(net: *const NsNetwork) -> Result<&'a Network, Failure> {
    net.as_ref().map(|n| &n.inner).ok_or_else(|| null("network"))
}

unsafe fn params_ref(params: *const NsParams) -> Result<ModelParams, Failure> {
    params
        .as_ref()
        .map(|p| ModelParams::from(*p))
        .ok_or_else(|| null("params"))
}

unsafe fn input<'a>(data: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(data, len))
}

unsafe fn output<'a>(data: *mut f64, len: usize, needed: usize, what: &str) -> Result<&'a mut [f64], Failure> {
    if len < needed {
        return Err(Failure(
            NsStatus::BufferTooSmall,
            format!("{what} holds {len} values, {needed} needed"),
        ));
    }
    if needed == 0 {
        return Ok(&mut []);
    }
    if data.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts_mut(data, needed))
}

unsafe fn store<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn store_network(out: *mut *mut NsNetwork, net: Result<Network, Error>) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(ptr::null_mut());
    let handle = Box::into_raw(Box::new(NsNetwork { inner: net? }));
    out.write(handle);
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ns_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn ns_status_name(status: NsStatus) -> *const c_char {
    let name: &'static CStr = match status {
        NsStatus::Ok => c"ok",
        NsStatus::NullPointer => c"null pointer",
        NsStatus::InvalidParam => c"invalid parameter",
        NsStatus::Size => c"invalid size",
        NsStatus::NotSquare => c"matrix not square",
        NsStatus::RowSum => c"row does not sum to 1",
        NsStatus::Diagonal => c"nonzero self-influence",
        NsStatus::NegativeWeight => c"negative weight",
        NsStatus::Dimension => c"length mismatch",
        NsStatus::Bounds => c"consumption out of bounds",
        NsStatus::Capacity => c"initial consumption out of bounds",
        NsStatus::Solve => c"linear solve failed",
        NsStatus::Regime => c"threshold below 1",
        NsStatus::Parse => c"parse error",
        NsStatus::SelfCheck => c"self-check failed",
        NsStatus::BufferTooSmall => c"output buffer too small",
        NsStatus::Panic => c"internal panic",
    };
    name.as_ptr()
}

/// Parameters of the 15-agent worked example.
#[no_mangle]
pub extern "C" fn ns_params_example1() -> NsParams {
    let p = ModelParams::example1();
    NsParams {
        alpha: p.alpha,
        delta: p.delta,
        q_a: p.q_a,
        q_b: p.q_b,
        c_s: p.c_s,
        c_q: p.c_q,
        budget_a: p.budget_a,
        budget_b: p.budget_b,
    }
}

/// # Safety
/// `params` must be NULL or point to a valid `NsParams`.
#[no_mangle]
pub unsafe extern "C" fn ns_params_validate(params: *const NsParams) -> NsStatus {
    guard(|| Ok(params_ref(params)?.validate()?))
}

/// Builds a network from `n * n` row-major weights.
///
/// # Safety
/// `weights` must point to `n * n` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ns_network_from_weights(n: usize, weights: *const f64, out: *mut *mut NsNetwork) -> NsStatus {
    guard(|| {
        let len = n
            .checked_mul(n)
            .ok_or_else(|| Failure(NsStatus::Size, "n * n overflows".into()))?;
        let w = input(weights, len, "weights")?;
        let rows: Vec<Vec<f64>> = w.chunks(n.max(1)).map(<[f64]>::to_vec).collect();
        store_network(out, Network::from_rows(&rows))
    })
}

/// Parses the text graph format.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ns_network_parse(text: *const c_char, normalize: bool, out: *mut *mut NsNetwork) -> NsStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| Failure(NsStatus::Parse, e.to_string()))?;
        store_network(out, Network::parse(text, normalize))
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ns_network_star(n: usize, out: *mut *mut NsNetwork) -> NsStatus {
    guard(|| store_network(out, Network::star(n)))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ns_network_balanced_ring(n: usize, d: usize, out: *mut *mut NsNetwork) -> NsStatus {
    guard(|| store_network(out, Network::balanced_ring(n, d)))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ns_network_k_star(n: usize, k: usize, out: *mut *mut NsNetwork) -> NsStatus {
    guard(|| store_network(out, Network::k_star(n, k)))
}

/// Releases a network. NULL is ignored.
///
/// # Safety
/// `net` must be NULL or a handle from an `ns_network_*` constructor that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn ns_network_free(net: *mut NsNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// Number of agents, or 0 for NULL.
///
/// # Safety
/// `net` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ns_network_size(net: *const NsNetwork) -> usize {
    net.as_ref().map_or(0, |n| n.inner.n())
}

/// Writes the `n * n` row-major weights.
///
/// # Safety
/// `net` must be a live handle; `out` must hold `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ns_network_weights(net: *const NsNetwork, out: *mut f64, out_len: usize) -> NsStatus {
    guard(|| {
        let net = network_ref(net)?;
        let n = net.n();
        let buf = output(out, out_len, n * n, "out")?;
        for i in 0..n {
            for j in 0..n {
                buf[i * n + j] = net.weight(i, j);
            }
        }
        Ok(())
    })
}

/// Centrality of every agent into `out` (length at least n).
///
/// # Safety
/// `net` must be a live handle, `params` valid, `out` must hold `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ns_centrality(
    net: *const NsNetwork,
    params: *const NsParams,
    out: *mut f64,
    out_len: usize,
) -> NsStatus {
    guard(|| {
        let net = network_ref(net)?;
        let profile = centrality::centrality(net, &params_ref(params)?)?;
        output(out, out_len, net.n(), "out")?.copy_from_slice(&profile.v);
        Ok(())
    })
}

/// `lambda` for an `n`-agent network; NaN when `params` is NULL.
///
/// # Safety
/// `params` must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn ns_lambda(params: *const NsParams, n: usize) -> f64 {
    params
        .as_ref()
        .map_or(f64::NAN, |p| allocation::lambda(&ModelParams::from(*p), n))
}

/// # Safety
/// `params` must be valid; `out_a` and `out_b` writable.
#[no_mangle]
pub unsafe extern "C" fn ns_thresholds(
    params: *const NsParams,
    n: usize,
    out_a: *mut f64,
    out_b: *mut f64,
) -> NsStatus {
    guard(|| {
        let p = params_ref(params)?;
        p.validate()?;
        let t = allocation::thresholds(&p, n);
        store(out_a, t.a, "out_a")?;
        store(out_b, t.b, "out_b")
    })
}

/// Closed-form firm payoffs from the initial state `y0` (length n).
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn ns_firm_utilities(
    net: *const NsNetwork,
    params: *const NsParams,
    y0: *const f64,
    y0_len: usize,
    out_a: *mut f64,
    out_b: *mut f64,
) -> NsStatus {
    guard(|| {
        let u = allocation::firm_utilities(network_ref(net)?, &params_ref(params)?, input(y0, y0_len, "y0")?)?;
        store(out_a, u.a, "out_a")?;
        store(out_b, u.b, "out_b")
    })
}

/// Simulates `horizon` steps from `y0`; writes `(horizon + 1) * n` values,
/// state `t` at offset `t * n`.
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn ns_simulate(
    net: *const NsNetwork,
    params: *const NsParams,
    y0: *const f64,
    y0_len: usize,
    horizon: usize,
    out: *mut f64,
    out_len: usize,
) -> NsStatus {
    guard(|| {
        let net = network_ref(net)?;
        let op = DynamicsOperator::new(net, &params_ref(params)?)?;
        let y0 = DVector::from_column_slice(input(y0, y0_len, "y0")?);
        let n = net.n();
        let needed = (horizon + 1)
            .checked_mul(n)
            .ok_or_else(|| Failure(NsStatus::Size, "horizon too large".into()))?;
        let buf = output(out, out_len, needed, "out")?;
        for (state, chunk) in op.trajectory(&y0, horizon)?.iter().zip(buf.chunks_mut(n)) {
            chunk.copy_from_slice(state.y.as_slice());
        }
        Ok(())
    })
}

/// Optimal allocation of `firm`'s budget: seeds into `out_seeds` (length n)
/// and the quality increment into `out_dq`.
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn ns_optimal_allocation(
    net: *const NsNetwork,
    params: *const NsParams,
    y0: *const f64,
    y0_len: usize,
    firm: NsFirm,
    out_seeds: *mut f64,
    out_seeds_len: usize,
    out_dq: *mut f64,
) -> NsStatus {
    guard(|| {
        let net = network_ref(net)?;
        let alloc = allocation::optimal_allocation(net, &params_ref(params)?, input(y0, y0_len, "y0")?, firm.into())?;
        output(out_seeds, out_seeds_len, net.n(), "out_seeds")?.copy_from_slice(&alloc.seeds);
        store(out_dq, alloc.dq, "out_dq")
    })
}

/// Seeding capacity of `firm` with an unlimited budget.
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn ns_seeding_capacity(
    net: *const NsNetwork,
    params: *const NsParams,
    y0: *const f64,
    y0_len: usize,
    firm: NsFirm,
    out_capacity: *mut f64,
) -> NsStatus {
    guard(|| {
        let report = allocation::seeding_capacity(
            network_ref(net)?,
            &params_ref(params)?,
            input(y0, y0_len, "y0")?,
            firm.into(),
        )?;
        store(out_capacity, report.capacity, "out_capacity")
    })
}

/// Maximal number of seedable agents over all `n`-agent graphs. Returns
/// [`NsStatus::Regime`] with `*out_k = n` when every agent is seedable.
///
/// # Safety
/// `params` must be valid; `out_k` writable.
#[no_mangle]
pub unsafe extern "C" fn ns_max_seed_count(
    params: *const NsParams,
    n: usize,
    firm: NsFirm,
    out_k: *mut usize,
) -> NsStatus {
    guard(|| {
        let p = params_ref(params)?;
        match allocation::max_seed_count(&p, n, firm.into()) {
            Ok(k) => store(out_k, k, "out_k"),
            Err(e @ Error::Regime { n, .. }) => {
                store(out_k, n, "out_k")?;
                Err(e.into())
            }
            Err(e) => Err(e.into()),
        }
    })
}

/// # Safety
/// `params` must be valid; `out_regime` writable.
#[no_mangle]
pub unsafe extern "C" fn ns_classify_regime(
    params: *const NsParams,
    n: usize,
    firm: NsFirm,
    out_regime: *mut NsRegime,
) -> NsStatus {
    guard(|| {
        let regime = match allocation::classify_regime(&params_ref(params)?, n, firm.into())? {
            Regime::NoneSeedable => NsRegime::NoneSeedable,
            Regime::AllSeedable => NsRegime::AllSeedable,
            Regime::GraphDependent => NsRegime::GraphDependent,
        };
        store(out_regime, regime, "out_regime")
    })
}
