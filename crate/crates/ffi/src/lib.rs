//! C interface.
//!
//! Objects are opaque handles created by `palms_*_new`/`_load`/`_simulate`
//! functions and released with the matching `_free`. Fallible calls return a
//! [`PalmsStatus`]; on failure [`palms_last_error`] describes the problem for
//! the calling thread. Handles are not synchronised: share one across
//! threads only for concurrent reads.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use palms::cli::RunConfig;
use palms::dynamics::{DynamicsDataset, KuramotoConfig, ModelTag};
use palms::graph::{er_generate, load_edge_list, AdjacencyMatrix, Directedness};
use palms::recon::{reconstruct_palms, ReconReport};
use palms::{bench, metrics, Error};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PalmsStatus {
    Ok = 0,
    /// A required pointer was null, or a string was not UTF-8.
    InvalidArgument = 1,
    /// A configuration value is out of range.
    Config = 2,
    /// Input data could not be read or is malformed.
    Data = 3,
    /// A regression failed.
    Solver = 4,
    /// An unexpected internal failure.
    Internal = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PalmsModel {
    Gaussian = 0,
    Ultimatum = 1,
    Kuramoto = 2,
}

/// Reconstruction quality. A rate is NaN when its `_defined` flag is 0.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PalmsMetrics {
    pub mse: f64,
    pub srnl: f64,
    pub srel: f64,
    pub srnl_defined: c_int,
    pub srel_defined: c_int,
}

pub struct PalmsNetwork(AdjacencyMatrix);
pub struct PalmsDataset(DynamicsDataset);
pub struct PalmsConfig(RunConfig);
pub struct PalmsReport(ReconReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: PalmsStatus, msg: impl Into<String>) -> PalmsStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> PalmsStatus {
    let status = match e.exit_code() {
        2 => PalmsStatus::Config,
        3 => PalmsStatus::Data,
        4 => PalmsStatus::Solver,
        _ => PalmsStatus::Internal,
    };
    fail(status, e.to_string())
}

/// Run `f`, converting library errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), PalmsStatus>) -> PalmsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PalmsStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(PalmsStatus::Internal, "internal panic"),
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, PalmsStatus>;
}

impl<T> OrStatus<T> for Result<T, Error> {
    fn or_status(self) -> Result<T, PalmsStatus> {
        self.map_err(from_error)
    }
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, PalmsStatus> {
    if s.is_null() {
        return Err(fail(PalmsStatus::InvalidArgument, format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(PalmsStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, PalmsStatus> {
    p.as_ref()
        .ok_or_else(|| fail(PalmsStatus::InvalidArgument, format!("{what} is null")))
}

fn out_arg<T>(out: *mut *mut T) -> Result<(), PalmsStatus> {
    if out.is_null() {
        return Err(fail(PalmsStatus::InvalidArgument, "output pointer is null"));
    }
    Ok(())
}

unsafe fn emit<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn palms_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Erdős–Rényi network on `n` nodes with edge probability `p`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn palms_network_random(n: usize, p: f64, seed: u64, out: *mut *mut PalmsNetwork) -> PalmsStatus {
    guard(|| {
        out_arg(out)?;
        let a = er_generate(n, p, seed).or_status()?;
        emit(out, PalmsNetwork(a));
        Ok(())
    })
}

/// Read a whitespace-separated edge list; ids are renumbered densely in
/// increasing order.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` as in [`palms_network_random`].
#[no_mangle]
pub unsafe extern "C" fn palms_network_load(path: *const c_char, directed: c_int, out: *mut *mut PalmsNetwork) -> PalmsStatus {
    guard(|| {
        out_arg(out)?;
        let path = str_arg(path, "path")?;
        let d = if directed != 0 {
            Directedness::Directed
        } else {
            Directedness::Undirected
        };
        let el = load_edge_list(&PathBuf::from(path), d).or_status()?;
        emit(out, PalmsNetwork(el.adjacency));
        Ok(())
    })
}

/// # Safety
/// `net` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn palms_network_free(net: *mut PalmsNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// Node count, or 0 for a null handle.
///
/// # Safety
/// `net` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn palms_network_nodes(net: *const PalmsNetwork) -> usize {
    net.as_ref().map_or(0, |n| n.0.n_nodes())
}

/// Edge count (unordered pairs for undirected networks), or 0 for null.
///
/// # Safety
/// `net` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn palms_network_edges(net: *const PalmsNetwork) -> usize {
    net.as_ref().map_or(0, |n| n.0.edge_count())
}

/// 1 if `i → j` is an edge, 0 otherwise or when out of range.
///
/// # Safety
/// `net` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn palms_network_has_edge(net: *const PalmsNetwork, i: usize, j: usize) -> c_int {
    match net.as_ref() {
        Some(n) if i < n.0.n_nodes() && j < n.0.n_nodes() => n.0.get(i, j) as c_int,
        _ => 0,
    }
}

/// Simulate `rounds` of dynamics on `net` with Gaussian noise of `noise_std`.
/// Kuramoto uses the library's default step and coupling.
///
/// # Safety
/// `net` must be a live handle; `out` as in [`palms_network_random`].
#[no_mangle]
pub unsafe extern "C" fn palms_dataset_simulate(
    net: *const PalmsNetwork,
    model: PalmsModel,
    rounds: usize,
    noise_std: f64,
    seed: u64,
    out: *mut *mut PalmsDataset,
) -> PalmsStatus {
    guard(|| {
        out_arg(out)?;
        let net = ref_arg(net, "network")?;
        let model = match model {
            PalmsModel::Gaussian => ModelTag::Gaussian,
            PalmsModel::Ultimatum => ModelTag::Ultimatum,
            PalmsModel::Kuramoto => ModelTag::Kuramoto,
        };
        let d = bench::simulate(&net.0, model, rounds, noise_std, &KuramotoConfig::default(), seed).or_status()?;
        emit(out, PalmsDataset(d));
        Ok(())
    })
}

/// # Safety
/// `dir` must be a NUL-terminated string; `out` as in [`palms_network_random`].
#[no_mangle]
pub unsafe extern "C" fn palms_dataset_load(dir: *const c_char, out: *mut *mut PalmsDataset) -> PalmsStatus {
    guard(|| {
        out_arg(out)?;
        let dir = str_arg(dir, "directory")?;
        let d = DynamicsDataset::load(&PathBuf::from(dir)).or_status()?;
        emit(out, PalmsDataset(d));
        Ok(())
    })
}

/// # Safety
/// `data` must be a live handle and `dir` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn palms_dataset_save(data: *const PalmsDataset, dir: *const c_char) -> PalmsStatus {
    guard(|| {
        let data = ref_arg(data, "dataset")?;
        let dir = str_arg(dir, "directory")?;
        data.0.save(&PathBuf::from(dir)).or_status()
    })
}

/// # Safety
/// `data` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn palms_dataset_free(data: *mut PalmsDataset) {
    if !data.is_null() {
        drop(Box::from_raw(data));
    }
}

/// # Safety
/// `data` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn palms_dataset_nodes(data: *const PalmsDataset) -> usize {
    data.as_ref().map_or(0, |d| d.0.n_nodes())
}

/// # Safety
/// `data` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn palms_dataset_rounds(data: *const PalmsDataset) -> usize {
    data.as_ref().map_or(0, |d| d.0.n_rounds())
}

/// A configuration holding the command-line defaults.
///
/// # Safety
/// `out` as in [`palms_network_random`].
#[no_mangle]
pub unsafe extern "C" fn palms_config_new(out: *mut *mut PalmsConfig) -> PalmsStatus {
    guard(|| {
        out_arg(out)?;
        emit(out, PalmsConfig(RunConfig::default()));
        Ok(())
    })
}

/// Set one key as in a configuration file, e.g. `("method", "p_lasso")`,
/// `("k", "4")`, `("lambda", "cv")`.
///
/// # Safety
/// `cfg` must be a live handle; `key` and `value` NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn palms_config_set(cfg: *mut PalmsConfig, key: *const c_char, value: *const c_char) -> PalmsStatus {
    guard(|| {
        let cfg = cfg
            .as_mut()
            .ok_or_else(|| fail(PalmsStatus::InvalidArgument, "config is null"))?;
        let key = str_arg(key, "key")?;
        let value = str_arg(value, "value")?;
        cfg.0.set(key, value).or_status()
    })
}

/// # Safety
/// `cfg` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn palms_config_free(cfg: *mut PalmsConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Reconstruct the network behind `data` with the method and settings of `cfg`.
///
/// # Safety
/// `data` and `cfg` must be live handles; `out` as in [`palms_network_random`].
#[no_mangle]
pub unsafe extern "C" fn palms_reconstruct(
    data: *const PalmsDataset,
    cfg: *const PalmsConfig,
    out: *mut *mut PalmsReport,
) -> PalmsStatus {
    guard(|| {
        out_arg(out)?;
        let data = ref_arg(data, "dataset")?;
        let cfg = ref_arg(cfg, "config")?;
        let rc = cfg.0.recon_config().or_status()?;
        let report = reconstruct_palms(&data.0, &rc).or_status()?;
        emit(out, PalmsReport(report));
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn palms_report_free(report: *mut PalmsReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn palms_report_nodes(report: *const PalmsReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.scores.n_nodes())
}

/// Wall time of the reconstruction in seconds.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn palms_report_wall_time(report: *const PalmsReport) -> f64 {
    report.as_ref().map_or(0.0, |r| r.0.wall_time_s)
}

/// Copy the row-major `N×N` continuous scores into `buf` of length `len`.
///
/// # Safety
/// `report` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn palms_report_scores(report: *const PalmsReport, buf: *mut f64, len: usize) -> PalmsStatus {
    guard(|| {
        let r = ref_arg(report, "report")?;
        let src = r.0.scores.as_slice();
        if buf.is_null() || len < src.len() {
            return Err(fail(
                PalmsStatus::InvalidArgument,
                format!("buffer needs {} entries", src.len()),
            ));
        }
        ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
        Ok(())
    })
}

/// 1 if the binarised estimate contains `i → j`.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn palms_report_has_edge(report: *const PalmsReport, i: usize, j: usize) -> c_int {
    match report.as_ref() {
        Some(r) if i < r.0.binary.n_nodes() && j < r.0.binary.n_nodes() => r.0.binary.get(i, j) as c_int,
        _ => 0,
    }
}

/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn palms_report_edges(report: *const PalmsReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.binary.edge_count())
}

/// Score a reconstruction against the true network.
///
/// # Safety
/// `truth` and `report` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn palms_evaluate(
    truth: *const PalmsNetwork,
    report: *const PalmsReport,
    out: *mut PalmsMetrics,
) -> PalmsStatus {
    guard(|| {
        let truth = ref_arg(truth, "truth")?;
        let report = ref_arg(report, "report")?;
        if out.is_null() {
            return Err(fail(PalmsStatus::InvalidArgument, "output pointer is null"));
        }
        let m = metrics::evaluate(&truth.0, &report.0.scores, &report.0.binary, None, "").or_status()?;
        *out = PalmsMetrics {
            mse: m.mse,
            srnl: m.srnl.unwrap_or(f64::NAN),
            srel: m.srel.unwrap_or(f64::NAN),
            srnl_defined: m.srnl.is_some() as c_int,
            srel_defined: m.srel.is_some() as c_int,
        };
        Ok(())
    })
}
