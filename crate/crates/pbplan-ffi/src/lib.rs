//! C ABI over the pbplan library.
//!
//! Handles are opaque pointers created and released by this library; every
//! fallible call returns a [`PbpStatus`] and leaves a message retrievable
//! via [`pbp_last_error`] on failure. Structured data crosses the boundary
//! as the same JSON documents the CLI reads and writes; strings returned by
//! this library must be released with [`pbp_string_free`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::ptr;

use pbplan::agent::{
    is_motivating_fixed, is_motivating_uncertain, is_motivating_variable, verdict_report, Verdict,
};
use pbplan::bias::{parse_bias_set, serialize_bias_set, BiasSet};
use pbplan::families::{gen_alice_bob, gen_pou_family, gen_pov_family, gen_random_dag};
use pbplan::graph::{
    parse_configuration, parse_graph, serialize_configuration, serialize_graph, TaskGraph,
};
use pbplan::incentives::{cns_configuration, cns_threshold, decide_cns, uncertain_approx, variable_approx};
use pbplan::num::{decimal_string, format_rational, parse_rational, Rational};

/// Opaque task graph handle.
pub struct PbpGraph(TaskGraph);

/// Opaque bias set handle.
pub struct PbpBiasSet(BiasSet);

/// Opaque cost configuration handle.
pub struct PbpConfig(pbplan::graph::CostConfiguration);

/// Status of a call. `Ok` doubles as "motivating"/"feasible"; `Negative`
/// is the well-defined negative verdict (not motivating, infeasible).
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PbpStatus {
    Ok = 0,
    Negative = 1,
    InvalidArgument = 2,
    ParseError = 3,
    DomainError = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let message = CString::new(message).unwrap_or_else(|_| CString::new("invalid error").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

fn fail(status: PbpStatus, message: impl Into<String>) -> PbpStatus {
    set_error(message.into());
    status
}

fn domain_error(err: pbplan::Error) -> PbpStatus {
    let status = match &err {
        pbplan::Error::Parse(_) => PbpStatus::ParseError,
        _ => PbpStatus::DomainError,
    };
    fail(status, err.to_string())
}

/// Message of the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pbp_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|message| message.as_ptr())
            .unwrap_or(ptr::null())
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `text` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pbp_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(unsafe { CString::from_raw(text) });
    }
}

unsafe fn read_str<'a>(text: *const c_char, what: &str) -> Result<&'a str, PbpStatus> {
    if text.is_null() {
        return Err(fail(PbpStatus::InvalidArgument, format!("{what} is null")));
    }
    unsafe { CStr::from_ptr(text) }
        .to_str()
        .map_err(|_| fail(PbpStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn read_rational(text: *const c_char, what: &str) -> Result<Rational, PbpStatus> {
    let text = unsafe { read_str(text, what) }?;
    parse_rational(text).map_err(|e| fail(PbpStatus::ParseError, e.to_string()))
}

unsafe fn deref<'a, T>(handle: *const T, what: &str) -> Result<&'a T, PbpStatus> {
    if handle.is_null() {
        Err(fail(PbpStatus::InvalidArgument, format!("{what} is null")))
    } else {
        Ok(unsafe { &*handle })
    }
}

unsafe fn put<T>(out: *mut *mut T, value: T, what: &str) -> PbpStatus {
    if out.is_null() {
        return fail(PbpStatus::InvalidArgument, format!("{what} out pointer is null"));
    }
    unsafe { *out = Box::into_raw(Box::new(value)) };
    PbpStatus::Ok
}

fn give_string(text: String) -> *mut c_char {
    CString::new(text)
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

unsafe fn put_string(out: *mut *mut c_char, text: String) {
    if !out.is_null() {
        unsafe { *out = give_string(text) };
    }
}

// --- graphs ---------------------------------------------------------------

/// Parses a graph document.
///
/// # Safety
/// `json` must be a valid NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pbp_graph_parse(json: *const c_char, out: *mut *mut PbpGraph) -> PbpStatus {
    let json = match unsafe { read_str(json, "graph document") } {
        Ok(json) => json,
        Err(status) => return status,
    };
    match parse_graph(json) {
        Ok(graph) => unsafe { put(out, PbpGraph(graph), "graph") },
        Err(err) => domain_error(err),
    }
}

/// Serializes a graph to its document form; release with `pbp_string_free`.
///
/// # Safety
/// `graph` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn pbp_graph_serialize(graph: *const PbpGraph) -> *mut c_char {
    match unsafe { deref(graph, "graph") } {
        Ok(graph) => give_string(serialize_graph(&graph.0)),
        Err(_) => ptr::null_mut(),
    }
}

/// # Safety
/// `graph` must be a live handle; it is consumed.
#[no_mangle]
pub unsafe extern "C" fn pbp_graph_free(graph: *mut PbpGraph) {
    if !graph.is_null() {
        drop(unsafe { Box::from_raw(graph) });
    }
}

/// # Safety
/// `graph` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pbp_graph_node_count(graph: *const PbpGraph) -> usize {
    unsafe { deref(graph, "graph") }.map(|g| g.0.node_count()).unwrap_or(0)
}

/// # Safety
/// `graph` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pbp_graph_edge_count(graph: *const PbpGraph) -> usize {
    unsafe { deref(graph, "graph") }.map(|g| g.0.edge_count()).unwrap_or(0)
}

/// Restricts the graph to nodes on some source-target path.
///
/// # Safety
/// `graph` must be a live handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pbp_graph_normalize(
    graph: *const PbpGraph,
    out: *mut *mut PbpGraph,
) -> PbpStatus {
    let graph = match unsafe { deref(graph, "graph") } {
        Ok(graph) => graph,
        Err(status) => return status,
    };
    match graph.0.normalize() {
        Ok(normalized) => unsafe { put(out, PbpGraph(normalized), "graph") },
        Err(err) => domain_error(err),
    }
}

/// Adds a configuration's extra costs onto a graph.
///
/// # Safety
/// Both handles must be live, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pbp_graph_apply(
    graph: *const PbpGraph,
    config: *const PbpConfig,
    out: *mut *mut PbpGraph,
) -> PbpStatus {
    let (graph, config) = match (unsafe { deref(graph, "graph") }, unsafe { deref(config, "config") }) {
        (Ok(graph), Ok(config)) => (graph, config),
        (Err(status), _) | (_, Err(status)) => return status,
    };
    match graph.0.apply(&config.0) {
        Ok(applied) => unsafe { put(out, PbpGraph(applied), "graph") },
        Err(err) => domain_error(err),
    }
}

// --- bias sets and configurations ------------------------------------------

/// Parses a bias set document (a list of `[lo, hi]` rational strings).
///
/// # Safety
/// `json` must be a valid NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pbp_bias_parse(json: *const c_char, out: *mut *mut PbpBiasSet) -> PbpStatus {
    let json = match unsafe { read_str(json, "bias document") } {
        Ok(json) => json,
        Err(status) => return status,
    };
    match parse_bias_set(json) {
        Ok(set) => unsafe { put(out, PbpBiasSet(set), "bias set") },
        Err(err) => domain_error(err),
    }
}

/// Builds the degenerate bias set `{beta}`.
///
/// # Safety
/// `beta` must be a valid NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pbp_bias_singleton(
    beta: *const c_char,
    out: *mut *mut PbpBiasSet,
) -> PbpStatus {
    let beta = match unsafe { read_rational(beta, "beta") } {
        Ok(beta) => beta,
        Err(status) => return status,
    };
    match BiasSet::singleton(beta) {
        Ok(set) => unsafe { put(out, PbpBiasSet(set), "bias set") },
        Err(err) => domain_error(err),
    }
}

/// # Safety
/// `set` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pbp_bias_serialize(set: *const PbpBiasSet) -> *mut c_char {
    match unsafe { deref(set, "bias set") } {
        Ok(set) => give_string(serialize_bias_set(&set.0)),
        Err(_) => ptr::null_mut(),
    }
}

/// # Safety
/// `set` must be a live handle; it is consumed.
#[no_mangle]
pub unsafe extern "C" fn pbp_bias_free(set: *mut PbpBiasSet) {
    if !set.is_null() {
        drop(unsafe { Box::from_raw(set) });
    }
}

/// Parses a cost configuration document (a list of `{edge, extra}` records).
///
/// # Safety
/// `json` must be a valid NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pbp_config_parse(json: *const c_char, out: *mut *mut PbpConfig) -> PbpStatus {
    let json = match unsafe { read_str(json, "configuration document") } {
        Ok(json) => json,
        Err(status) => return status,
    };
    match parse_configuration(json) {
        Ok(config) => unsafe { put(out, PbpConfig(config), "configuration") },
        Err(err) => domain_error(err),
    }
}

/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pbp_config_serialize(config: *const PbpConfig) -> *mut c_char {
    match unsafe { deref(config, "configuration") } {
        Ok(config) => give_string(serialize_configuration(&config.0)),
        Err(_) => ptr::null_mut(),
    }
}

/// # Safety
/// `config` must be a live handle; it is consumed.
#[no_mangle]
pub unsafe extern "C" fn pbp_config_free(config: *mut PbpConfig) {
    if !config.is_null() {
        drop(unsafe { Box::from_raw(config) });
    }
}

// --- verification ----------------------------------------------------------

fn verdict_out(graph: &TaskGraph, verdict: Verdict, report_out: *mut *mut c_char) -> PbpStatus {
    let status = if verdict.motivating {
        PbpStatus::Ok
    } else {
        PbpStatus::Negative
    };
    unsafe { put_string(report_out, verdict_report(graph, &verdict)) };
    status
}

/// Fixed-bias motivation check. Returns `Ok` when motivating, `Negative`
/// otherwise; `report_out` (nullable) receives the verdict report JSON.
///
/// # Safety
/// `graph` must be a live handle; strings valid and NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn pbp_verify_fixed(
    graph: *const PbpGraph,
    beta: *const c_char,
    reward: *const c_char,
    report_out: *mut *mut c_char,
) -> PbpStatus {
    let graph = match unsafe { deref(graph, "graph") } {
        Ok(graph) => graph,
        Err(status) => return status,
    };
    let beta = match unsafe { read_rational(beta, "beta") } {
        Ok(beta) => beta,
        Err(status) => return status,
    };
    let reward = match unsafe { read_rational(reward, "reward") } {
        Ok(reward) => reward,
        Err(status) => return status,
    };
    match is_motivating_fixed(&graph.0, &beta, &reward) {
        Ok(verdict) => verdict_out(&graph.0, verdict, report_out),
        Err(err) => domain_error(err),
    }
}

/// Uncertain-bias motivation check over a bias set.
///
/// # Safety
/// As [`pbp_verify_fixed`], plus `set` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pbp_verify_uncertain(
    graph: *const PbpGraph,
    set: *const PbpBiasSet,
    reward: *const c_char,
    report_out: *mut *mut c_char,
) -> PbpStatus {
    let (graph, set) = match (unsafe { deref(graph, "graph") }, unsafe { deref(set, "bias set") }) {
        (Ok(graph), Ok(set)) => (graph, set),
        (Err(status), _) | (_, Err(status)) => return status,
    };
    let reward = match unsafe { read_rational(reward, "reward") } {
        Ok(reward) => reward,
        Err(status) => return status,
    };
    match is_motivating_uncertain(&graph.0, &set.0, &reward) {
        Ok(verdict) => verdict_out(&graph.0, verdict, report_out),
        Err(err) => domain_error(err),
    }
}

/// Variable-bias motivation check over a bias set.
///
/// # Safety
/// As [`pbp_verify_uncertain`].
#[no_mangle]
pub unsafe extern "C" fn pbp_verify_variable(
    graph: *const PbpGraph,
    set: *const PbpBiasSet,
    reward: *const c_char,
    report_out: *mut *mut c_char,
) -> PbpStatus {
    let (graph, set) = match (unsafe { deref(graph, "graph") }, unsafe { deref(set, "bias set") }) {
        (Ok(graph), Ok(set)) => (graph, set),
        (Err(status), _) | (_, Err(status)) => return status,
    };
    let reward = match unsafe { read_rational(reward, "reward") } {
        Ok(reward) => reward,
        Err(status) => return status,
    };
    match is_motivating_variable(&graph.0, &set.0, &reward) {
        Ok(verdict) => verdict_out(&graph.0, verdict, report_out),
        Err(err) => domain_error(err),
    }
}

/// Exact minimal motivating reward at a fixed bias, as a `"p/q"` string.
///
/// # Safety
/// As [`pbp_verify_fixed`].
#[no_mangle]
pub unsafe extern "C" fn pbp_required_reward_fixed(
    graph: *const PbpGraph,
    beta: *const c_char,
    out: *mut *mut c_char,
) -> PbpStatus {
    let graph = match unsafe { deref(graph, "graph") } {
        Ok(graph) => graph,
        Err(status) => return status,
    };
    let beta = match unsafe { read_rational(beta, "beta") } {
        Ok(beta) => beta,
        Err(status) => return status,
    };
    match pbplan::agent::required_reward_fixed(&graph.0, &beta) {
        Ok(required) => {
            unsafe { put_string(out, format_rational(&required)) };
            PbpStatus::Ok
        }
        Err(err) => domain_error(err),
    }
}

// --- incentive algorithms ---------------------------------------------------

/// Runs the 2-approximation (`variable` = false) or the (1+tau) variant
/// (`variable` = true). `config_out` receives the certified configuration;
/// `summary_out` (nullable) a JSON object with alpha, the lower bound and
/// the certified reward.
///
/// # Safety
/// Handles must be live; out pointers valid.
#[no_mangle]
pub unsafe extern "C" fn pbp_approx(
    graph: *const PbpGraph,
    set: *const PbpBiasSet,
    variable: bool,
    config_out: *mut *mut PbpConfig,
    summary_out: *mut *mut c_char,
) -> PbpStatus {
    let (graph, set) = match (unsafe { deref(graph, "graph") }, unsafe { deref(set, "bias set") }) {
        (Ok(graph), Ok(set)) => (graph, set),
        (Err(status), _) | (_, Err(status)) => return status,
    };
    let result = if variable {
        variable_approx(&graph.0, &set.0)
    } else {
        uncertain_approx(&graph.0, &set.0)
    };
    match result {
        Ok(result) => {
            let summary = format!(
                "{{\"alpha\": \"{}\", \"lower\": \"{}\", \"reward\": \"{}\", \"reward_decimal\": \"{}\"}}",
                format_rational(&result.alpha),
                format_rational(&result.lower),
                format_rational(&result.reward),
                decimal_string(&result.reward),
            );
            unsafe { put_string(summary_out, summary) };
            unsafe { put(config_out, PbpConfig(result.configuration), "configuration") }
        }
        Err(err) => domain_error(err),
    }
}

/// Decides critical-node-set feasibility at a reward (`1` must be in the
/// bias set). Returns `Ok` when feasible, `Negative` when not;
/// `config_out` (nullable) receives the fencing configuration when feasible.
///
/// # Safety
/// Handles must be live; strings valid and NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn pbp_cns_decide(
    graph: *const PbpGraph,
    set: *const PbpBiasSet,
    reward: *const c_char,
    config_out: *mut *mut PbpConfig,
) -> PbpStatus {
    let (graph, set) = match (unsafe { deref(graph, "graph") }, unsafe { deref(set, "bias set") }) {
        (Ok(graph), Ok(set)) => (graph, set),
        (Err(status), _) | (_, Err(status)) => return status,
    };
    let reward = match unsafe { read_rational(reward, "reward") } {
        Ok(reward) => reward,
        Err(status) => return status,
    };
    let table = match decide_cns(&graph.0, &set.0, &reward) {
        Ok(table) => table,
        Err(err) => return domain_error(err),
    };
    if !table.feasible {
        return PbpStatus::Negative;
    }
    if !config_out.is_null() {
        match cns_configuration(&graph.0, &table.witness(), &reward) {
            Ok(config) => return unsafe { put(config_out, PbpConfig(config), "configuration") },
            Err(err) => return domain_error(err),
        }
    }
    PbpStatus::Ok
}

/// Optimal occasionally-unbiased reward as a JSON object
/// `{lo, hi, exact?}`, searched to the given tolerance.
///
/// # Safety
/// Handles must be live; strings valid and NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn pbp_cns_threshold(
    graph: *const PbpGraph,
    set: *const PbpBiasSet,
    tol: *const c_char,
    out: *mut *mut c_char,
) -> PbpStatus {
    let (graph, set) = match (unsafe { deref(graph, "graph") }, unsafe { deref(set, "bias set") }) {
        (Ok(graph), Ok(set)) => (graph, set),
        (Err(status), _) | (_, Err(status)) => return status,
    };
    let tol = match unsafe { read_rational(tol, "tolerance") } {
        Ok(tol) => tol,
        Err(status) => return status,
    };
    match cns_threshold(&graph.0, &set.0, &tol) {
        Ok(result) => {
            let exact = result
                .exact
                .as_ref()
                .map(|e| format!(", \"exact\": \"{}\"", format_rational(e)))
                .unwrap_or_default();
            let json = format!(
                "{{\"lo\": \"{}\", \"hi\": \"{}\"{exact}}}",
                format_rational(&result.lo),
                format_rational(&result.hi),
            );
            unsafe { put_string(out, json) };
            PbpStatus::Ok
        }
        Err(err) => domain_error(err),
    }
}

// --- generators --------------------------------------------------------------

/// The running two-runner scenario for a bias offset `eps`.
///
/// # Safety
/// `eps` must be a valid NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pbp_gen_alice_bob(eps: *const c_char, out: *mut *mut PbpGraph) -> PbpStatus {
    let eps = match unsafe { read_rational(eps, "eps") } {
        Ok(eps) => eps,
        Err(status) => return status,
    };
    match gen_alice_bob(&eps) {
        Ok(graph) => unsafe { put(out, PbpGraph(graph), "graph") },
        Err(err) => domain_error(err),
    }
}

/// Price-of-uncertainty family member for parameter `a`.
///
/// # Safety
/// As [`pbp_gen_alice_bob`].
#[no_mangle]
pub unsafe extern "C" fn pbp_gen_pou(a: *const c_char, out: *mut *mut PbpGraph) -> PbpStatus {
    let a = match unsafe { read_rational(a, "a") } {
        Ok(a) => a,
        Err(status) => return status,
    };
    match gen_pou_family(&a) {
        Ok(graph) => unsafe { put(out, PbpGraph(graph), "graph") },
        Err(err) => domain_error(err),
    }
}

/// Price-of-variability family member for parameter `a`.
///
/// # Safety
/// As [`pbp_gen_alice_bob`].
#[no_mangle]
pub unsafe extern "C" fn pbp_gen_pov(a: *const c_char, out: *mut *mut PbpGraph) -> PbpStatus {
    let a = match unsafe { read_rational(a, "a") } {
        Ok(a) => a,
        Err(status) => return status,
    };
    match gen_pov_family(&a) {
        Ok(graph) => unsafe { put(out, PbpGraph(graph), "graph") },
        Err(err) => domain_error(err),
    }
}

/// Seeded random normalized DAG.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pbp_gen_random(
    seed: u64,
    nodes: usize,
    cost_den: u32,
    out: *mut *mut PbpGraph,
) -> PbpStatus {
    match gen_random_dag(seed, nodes, cost_den) {
        Ok(graph) => unsafe { put(out, PbpGraph(graph), "graph") },
        Err(err) => domain_error(err),
    }
}
