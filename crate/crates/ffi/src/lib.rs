//! C interface to mdmkit.
//!
//! Every function returns an [`MdmStatus`]; results come back through out
//! pointers. On failure a message is kept per thread and can be read with
//! [`mdm_last_error_message`]. Objects are opaque handles owned by the caller
//! and released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mdmkit::cli::{run_text, Command, RunConfig};
use mdmkit::geometry::{EmbeddedNetwork, Point};
use mdmkit::mdm::{self, Instance};
use mdmkit::steiner::{steiner_tree, Realization};
use mdmkit::tube;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MdmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// The computation rejected its input or failed.
    ComputationFailed = 3,
    /// The caller's buffer is too small; the required size was written.
    BufferTooSmall = 4,
    /// An `mdm_run_json` call completed and reported violations.
    Violations = 5,
    Panic = 6,
}

/// A network of straight segments in the plane or in space.
pub struct MdmNetwork {
    inner: EmbeddedNetwork,
}

/// One or more tied optimal trees.
pub struct MdmTreeSet {
    trees: Vec<Realization>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: MdmStatus, msg: impl Into<String>) -> MdmStatus {
    set_error(msg);
    status
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), MdmStatus>) -> MdmStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MdmStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(MdmStatus::Panic, "internal panic"),
    }
}

fn core_err(e: mdmkit::Error) -> MdmStatus {
    let status = match e {
        mdmkit::Error::InvalidParameter { .. }
        | mdmkit::Error::InvalidPoint(_)
        | mdmkit::Error::UnsupportedDimension(_)
        | mdmkit::Error::Schema(_) => MdmStatus::InvalidArgument,
        _ => MdmStatus::ComputationFailed,
    };
    fail(status, e.to_string())
}

fn null_check<T>(p: *const T, name: &str) -> Result<(), MdmStatus> {
    if p.is_null() {
        Err(fail(MdmStatus::NullPointer, format!("`{name}` is null")))
    } else {
        Ok(())
    }
}

/// Reads `n` points of dimension `dim` from a packed coordinate array.
///
/// # Safety
/// `coords` must point to `n * dim` readable doubles.
unsafe fn read_points(coords: *const f64, n: usize, dim: usize) -> Result<Vec<Point>, MdmStatus> {
    if !(dim == 2 || dim == 3) {
        return Err(fail(
            MdmStatus::InvalidArgument,
            format!("dimension {dim} (expected 2 or 3)"),
        ));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    null_check(coords, "coords")?;
    let flat = std::slice::from_raw_parts(coords, n * dim);
    flat.chunks_exact(dim)
        .map(Point::from_slice)
        .collect::<mdmkit::Result<Vec<_>>>()
        .map_err(core_err)
}

/// # Safety
/// `out` must be valid for writes.
unsafe fn write<T>(out: *mut T, value: T) -> Result<(), MdmStatus> {
    null_check(out, "out")?;
    out.write(value);
    Ok(())
}

/// Copies `src` into a caller buffer of `cap` elements; `len` receives the
/// required element count either way.
///
/// # Safety
/// `buf` must be writable for `cap` elements; `len` must be writable.
unsafe fn copy_out<T: Copy>(
    src: &[T],
    buf: *mut T,
    cap: usize,
    len: *mut usize,
) -> Result<(), MdmStatus> {
    write(len, src.len())?;
    if cap < src.len() {
        return Err(fail(
            MdmStatus::BufferTooSmall,
            format!("buffer holds {cap}, need {}", src.len()),
        ));
    }
    if !src.is_empty() {
        null_check(buf, "buf")?;
        ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    }
    Ok(())
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `cap` bytes). Returns the full message length without the
/// terminator, or 0 when there is no error.
///
/// # Safety
/// `buf` must be writable for `cap` bytes or null when `cap` is 0.
#[no_mangle]
pub unsafe extern "C" fn mdm_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else {
            if cap > 0 && !buf.is_null() {
                *buf = 0;
            }
            return 0;
        };
        let bytes = msg.as_bytes();
        if cap > 0 && !buf.is_null() {
            let n = bytes.len().min(cap - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mdm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a network from `n_nodes` packed points of dimension `dim` and
/// `n_edges` index pairs.
///
/// # Safety
/// `coords` must hold `n_nodes * dim` doubles, `edges` `2 * n_edges` indices,
/// and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mdm_network_new(
    coords: *const f64,
    n_nodes: usize,
    dim: usize,
    edges: *const usize,
    n_edges: usize,
    out: *mut *mut MdmNetwork,
) -> MdmStatus {
    guard(|| {
        null_check(out, "out")?;
        let nodes = read_points(coords, n_nodes, dim)?;
        let pairs = if n_edges == 0 {
            Vec::new()
        } else {
            null_check(edges, "edges")?;
            std::slice::from_raw_parts(edges, 2 * n_edges)
                .chunks_exact(2)
                .map(|e| (e[0], e[1]))
                .collect()
        };
        let inner = EmbeddedNetwork::new(nodes, pairs).map_err(core_err)?;
        write(out, Box::into_raw(Box::new(MdmNetwork { inner })))
    })
}

/// # Safety
/// `net` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mdm_network_free(net: *mut MdmNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// # Safety
/// `net` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mdm_network_length(net: *const MdmNetwork, out: *mut f64) -> MdmStatus {
    guard(|| {
        null_check(net, "net")?;
        write(out, (*net).inner.length())
    })
}

/// Node count, edge count and dimension of `net`.
///
/// # Safety
/// `net` must be a live handle; the out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn mdm_network_shape(
    net: *const MdmNetwork,
    n_nodes: *mut usize,
    n_edges: *mut usize,
    dim: *mut usize,
) -> MdmStatus {
    guard(|| {
        null_check(net, "net")?;
        let n = &(*net).inner;
        write(n_nodes, n.nodes().len())?;
        write(n_edges, n.edges().len())?;
        write(dim, n.dim())
    })
}

/// Packed node coordinates, `dim` doubles per node.
///
/// # Safety
/// `buf` must be writable for `cap` doubles and `len` writable.
#[no_mangle]
pub unsafe extern "C" fn mdm_network_nodes(
    net: *const MdmNetwork,
    buf: *mut f64,
    cap: usize,
    len: *mut usize,
) -> MdmStatus {
    guard(|| {
        null_check(net, "net")?;
        let n = &(*net).inner;
        let flat: Vec<f64> = n.nodes().iter().flat_map(|p| p.coords().to_vec()).collect();
        copy_out(&flat, buf, cap, len)
    })
}

/// Packed edge index pairs.
///
/// # Safety
/// `buf` must be writable for `cap` indices and `len` writable.
#[no_mangle]
pub unsafe extern "C" fn mdm_network_edges(
    net: *const MdmNetwork,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> MdmStatus {
    guard(|| {
        null_check(net, "net")?;
        let flat: Vec<usize> = (*net)
            .inner
            .edges()
            .iter()
            .flat_map(|&(i, j)| [i, j])
            .collect();
        copy_out(&flat, buf, cap, len)
    })
}

/// Largest distance from the `n` points to `net`.
///
/// # Safety
/// `points` must hold `n * dim` doubles where `dim` is the network's.
#[no_mangle]
pub unsafe extern "C" fn mdm_coverage_radius(
    net: *const MdmNetwork,
    points: *const f64,
    n: usize,
    out: *mut f64,
) -> MdmStatus {
    guard(|| {
        null_check(net, "net")?;
        let net = &(*net).inner;
        let m = read_points(points, n, net.dim())?;
        write(out, mdm::coverage_radius(net, &m).map_err(core_err)?)
    })
}

/// Euclidean Steiner trees of `n` points; all tied optima are returned.
///
/// # Safety
/// `points` must hold `n * dim` doubles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn mdm_steiner_tree(
    points: *const f64,
    n: usize,
    dim: usize,
    out: *mut *mut MdmTreeSet,
) -> MdmStatus {
    guard(|| {
        null_check(out, "out")?;
        let pts = read_points(points, n, dim)?;
        let trees = steiner_tree(&pts).map_err(core_err)?;
        write(out, Box::into_raw(Box::new(MdmTreeSet { trees })))
    })
}

/// Shortest connected sets whose `r`-neighborhood covers the `n` points.
///
/// # Safety
/// `points` must hold `n * dim` doubles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn mdm_solve_finite(
    points: *const f64,
    n: usize,
    dim: usize,
    r: f64,
    out: *mut *mut MdmTreeSet,
) -> MdmStatus {
    guard(|| {
        null_check(out, "out")?;
        let pts = read_points(points, n, dim)?;
        let inst = Instance::from_points(pts, r).map_err(core_err)?;
        let trees = mdm::solve_finite_m(&inst).map_err(core_err)?;
        write(out, Box::into_raw(Box::new(MdmTreeSet { trees })))
    })
}

/// # Safety
/// `set` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mdm_tree_set_free(set: *mut MdmTreeSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mdm_tree_set_count(set: *const MdmTreeSet, out: *mut usize) -> MdmStatus {
    guard(|| {
        null_check(set, "set")?;
        write(out, (*set).trees.len())
    })
}

/// Length of the optimal trees (they are tied).
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mdm_tree_set_length(set: *const MdmTreeSet, out: *mut f64) -> MdmStatus {
    guard(|| {
        null_check(set, "set")?;
        write(out, (&*set).trees[0].length)
    })
}

/// Copies tree `index` out as a new network handle.
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mdm_tree_set_network(
    set: *const MdmTreeSet,
    index: usize,
    out: *mut *mut MdmNetwork,
) -> MdmStatus {
    guard(|| {
        null_check(set, "set")?;
        null_check(out, "out")?;
        let Some(tree) = (&*set).trees.get(index) else {
            return Err(fail(
                MdmStatus::InvalidArgument,
                format!("tree index {index} out of range"),
            ));
        };
        let inner = tree.to_network();
        write(out, Box::into_raw(Box::new(MdmNetwork { inner })))
    })
}

/// Steiner tree of `n` points with every terminal edge shortened by `r`.
///
/// # Safety
/// `points` must hold `n * dim` doubles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn mdm_truncate_full_steiner(
    points: *const f64,
    n: usize,
    dim: usize,
    r: f64,
    out: *mut *mut MdmNetwork,
) -> MdmStatus {
    guard(|| {
        null_check(out, "out")?;
        let pts = read_points(points, n, dim)?;
        let inner = mdm::truncate_full_steiner(&pts, r).map_err(core_err)?;
        write(out, Box::into_raw(Box::new(MdmNetwork { inner })))
    })
}

/// Length lower bound from the measure of the covered set in `R^d`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mdm_lower_bound_volume(
    measure: f64,
    r: f64,
    d: usize,
    out: *mut f64,
) -> MdmStatus {
    guard(|| {
        write(
            out,
            mdm::lower_bound_volume(measure, r, d).map_err(core_err)?,
        )
    })
}

/// Length lower bound from the perimeter of a convex polygon of `n`
/// vertices (packed `x, y`).
///
/// # Safety
/// `polygon` must hold `2 * n` doubles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn mdm_lower_bound_perimeter(
    polygon: *const f64,
    n: usize,
    r: f64,
    out: *mut f64,
) -> MdmStatus {
    guard(|| {
        let pts = read_points(polygon, n, 2)?;
        write(out, mdm::lower_bound_perimeter(&pts, r).map_err(core_err)?)
    })
}

/// Monte Carlo volume of the closed `r`-neighborhood of `net`, with a 3σ
/// half-width.
///
/// # Safety
/// `net` must be a live handle; the out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn mdm_tube_volume_mc(
    net: *const MdmNetwork,
    r: f64,
    samples: usize,
    seed: u64,
    estimate: *mut f64,
    ci_halfwidth: *mut f64,
) -> MdmStatus {
    guard(|| {
        null_check(net, "net")?;
        let est = tube::tube_volume_mc(&(*net).inner, r, samples, seed).map_err(core_err)?;
        write(estimate, est.estimate)?;
        write(ci_halfwidth, est.ci_halfwidth)
    })
}

/// Exact area of the `r`-neighborhood of a planar network.
///
/// # Safety
/// `net` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mdm_tube_area_2d(
    net: *const MdmNetwork,
    r: f64,
    out: *mut f64,
) -> MdmStatus {
    guard(|| {
        null_check(net, "net")?;
        write(out, tube::tube_area_2d(&(*net).inner, r).map_err(core_err)?)
    })
}

/// Exact boundary length of the `r`-neighborhood of a planar network.
///
/// # Safety
/// `net` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mdm_boundary_length_2d(
    net: *const MdmNetwork,
    r: f64,
    out: *mut f64,
) -> MdmStatus {
    guard(|| {
        null_check(net, "net")?;
        write(
            out,
            tube::boundary_length_2d(&(*net).inner, r).map_err(core_err)?,
        )
    })
}

/// Runs a command-line subcommand on JSON text and returns the result
/// document in `*out`, to be released with [`mdm_string_free`]. Returns
/// [`MdmStatus::Violations`] (with the document set) when the run found
/// violations.
///
/// # Safety
/// `subcommand` and `input_json` must be NUL-terminated strings and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn mdm_run_json(
    subcommand: *const c_char,
    input_json: *const c_char,
    seed: u64,
    samples: usize,
    out: *mut *mut c_char,
) -> MdmStatus {
    let mut violations = false;
    let status = guard(|| {
        null_check(subcommand, "subcommand")?;
        null_check(input_json, "input_json")?;
        null_check(out, "out")?;
        let utf8 = |p: *const c_char, name: &str| {
            CStr::from_ptr(p)
                .to_str()
                .map_err(|_| fail(MdmStatus::InvalidArgument, format!("`{name}` is not UTF-8")))
        };
        let command: Command = utf8(subcommand, "subcommand")?
            .parse()
            .map_err(|e: mdmkit::cli::CliError| fail(MdmStatus::InvalidArgument, e.to_string()))?;
        let mut config = RunConfig::new(command);
        config.seed = seed;
        config.samples = samples;
        let (doc, outcome) = run_text(&config, utf8(input_json, "input_json")?)
            .map_err(|e| fail(MdmStatus::ComputationFailed, e.to_json().to_string()))?;
        violations = outcome.violations;
        let doc =
            CString::new(doc).map_err(|_| fail(MdmStatus::ComputationFailed, "NUL in output"))?;
        write(out, doc.into_raw())
    });
    if status == MdmStatus::Ok && violations {
        MdmStatus::Violations
    } else {
        status
    }
}

/// # Safety
/// `s` must come from [`mdm_run_json`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mdm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
