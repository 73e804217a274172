//! C interface to `comenet`.
//!
//! Objects are opaque handles created by `comenet_*_new`/`from`/`transform`
//! functions and released with the matching `*_free`. Every fallible call
//! returns a [`ComenetStatus`]; on failure a message is available from
//! [`comenet_last_error`] on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use comenet::basis::BasisConfig;
use comenet::completeness::reconstruct;
use comenet::geometry::{transform, TupleSet};
use comenet::graph::{apply_se3, build_radius_graph, Graph3D, SE3Transform, Vec3};
use comenet::io::parse_xyz;
use comenet::mpnet::{MiniNet, MiniNetConfig};
use comenet::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComenetStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    IoError = 4,
    /// Degenerate or inconsistent geometry.
    GeometryError = 5,
    /// Topologies or shapes that do not match.
    TopologyError = 6,
    /// Output buffer too small; the message names the required length.
    BufferTooSmall = 7,
    Panic = 8,
}

/// Opaque graph handle.
pub struct ComenetGraph(Graph3D);

/// Opaque tuple set handle.
pub struct ComenetTupleSet(TupleSet);

/// Opaque basis handle.
pub struct ComenetBasis(BasisConfig);

/// One directed-edge tuple. Reference indices are −1 when absent.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComenetEdgeTuple {
    pub i: usize,
    pub j: usize,
    pub d: f64,
    pub theta: f64,
    pub phi: f64,
    pub tau: f64,
    /// Bit 0: φ degenerate, bit 1: τ degenerate.
    pub flags: u8,
    pub first: i64,
    pub second: i64,
    pub source_excluding: i64,
    pub target_excluding: i64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ComenetStatus {
    match e {
        Error::Parse { .. } | Error::Json(_) => ComenetStatus::ParseError,
        Error::Io(_) => ComenetStatus::IoError,
        Error::InvalidParameter { .. }
        | Error::InvalidRotation(_)
        | Error::EmptyGraph
        | Error::OutOfCutoff { .. }
        | Error::UnknownSpecies(_)
        | Error::InvalidDegree { .. } => ComenetStatus::InvalidArgument,
        Error::TopologyMismatch(_)
        | Error::ShapeMismatch(_)
        | Error::LengthMismatch { .. }
        | Error::DisconnectedGraph { .. } => ComenetStatus::TopologyError,
        _ => ComenetStatus::GeometryError,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (ComenetStatus, String)>) -> ComenetStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ComenetStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            ComenetStatus::Panic
        }
    }
}

fn lib<T>(r: comenet::Result<T>) -> Result<T, (ComenetStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (ComenetStatus, String) {
    (ComenetStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (ComenetStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn store<T>(out: *mut T, value: T, what: &str) -> Result<(), (ComenetStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn comenet_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn comenet_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a radius graph from `n` atomic numbers and `3n` coordinates.
///
/// # Safety
/// `species` must point to `n` values and `positions` to `3n` values.
#[no_mangle]
pub unsafe extern "C" fn comenet_graph_from_arrays(
    species: *const u32,
    positions: *const f64,
    n: usize,
    cutoff: f64,
    out: *mut *mut ComenetGraph,
) -> ComenetStatus {
    guard(|| {
        if species.is_null() || positions.is_null() {
            return Err(null("input array"));
        }
        let z = std::slice::from_raw_parts(species, n).to_vec();
        let xyz = std::slice::from_raw_parts(positions, 3 * n);
        let p = xyz.chunks_exact(3).map(|c| Vec3::new(c[0], c[1], c[2])).collect();
        let g = lib(build_radius_graph(z, p, cutoff))?;
        store(out, Box::into_raw(Box::new(ComenetGraph(g))), "out")
    })
}

/// Builds a radius graph from the first frame of XYZ text.
///
/// # Safety
/// `text` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn comenet_graph_from_xyz(
    text: *const c_char,
    cutoff: f64,
    out: *mut *mut ComenetGraph,
) -> ComenetStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| (ComenetStatus::ParseError, "text is not UTF-8".to_string()))?;
        let frame = lib(parse_xyz(text))?.remove(0);
        let g = lib(build_radius_graph(frame.species, frame.positions, cutoff))?;
        store(out, Box::into_raw(Box::new(ComenetGraph(g))), "out")
    })
}

/// # Safety
/// `graph` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn comenet_graph_free(graph: *mut ComenetGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// # Safety
/// `graph` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn comenet_graph_num_nodes(graph: *const ComenetGraph, out: *mut usize) -> ComenetStatus {
    guard(|| store(out, deref(graph, "graph")?.0.num_nodes(), "out"))
}

/// Number of directed edges.
///
/// # Safety
/// `graph` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn comenet_graph_num_edges(graph: *const ComenetGraph, out: *mut usize) -> ComenetStatus {
    guard(|| store(out, deref(graph, "graph")?.0.num_edges(), "out"))
}

/// Copies the `3n` coordinates into `buffer`.
///
/// # Safety
/// `graph` must be a live handle and `buffer` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn comenet_graph_positions(
    graph: *const ComenetGraph,
    buffer: *mut f64,
    len: usize,
) -> ComenetStatus {
    guard(|| {
        let g = &deref(graph, "graph")?.0;
        let flat: Vec<f64> = g.positions().iter().flat_map(|p| [p.x, p.y, p.z]).collect();
        copy_out(&flat, buffer, len)
    })
}

unsafe fn copy_out(values: &[f64], buffer: *mut f64, len: usize) -> Result<(), (ComenetStatus, String)> {
    if len < values.len() {
        return Err((
            ComenetStatus::BufferTooSmall,
            format!("buffer holds {len} values, {} needed", values.len()),
        ));
    }
    if buffer.is_null() {
        return Err(null("buffer"));
    }
    ptr::copy_nonoverlapping(values.as_ptr(), buffer, values.len());
    Ok(())
}

/// Applies `p ↦ R p + t` with `rotation` row-major 3×3 and `translation` of
/// length 3, producing a new graph.
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn comenet_graph_apply_se3(
    graph: *const ComenetGraph,
    rotation: *const f64,
    translation: *const f64,
    out: *mut *mut ComenetGraph,
) -> ComenetStatus {
    guard(|| {
        let g = &deref(graph, "graph")?.0;
        if rotation.is_null() || translation.is_null() {
            return Err(null("rotation or translation"));
        }
        let r = std::slice::from_raw_parts(rotation, 9);
        let t = std::slice::from_raw_parts(translation, 3);
        let m = nalgebra::Matrix3::from_row_slice(r);
        let se3 = lib(SE3Transform::new(m, Vec3::new(t[0], t[1], t[2])))?;
        let moved = lib(apply_se3(g, &se3))?;
        store(out, Box::into_raw(Box::new(ComenetGraph(moved))), "out")
    })
}

/// Computes the tuple of every directed edge.
///
/// # Safety
/// `graph` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn comenet_transform(
    graph: *const ComenetGraph,
    out: *mut *mut ComenetTupleSet,
) -> ComenetStatus {
    guard(|| {
        let ts = lib(transform(&deref(graph, "graph")?.0))?;
        store(out, Box::into_raw(Box::new(ComenetTupleSet(ts))), "out")
    })
}

/// # Safety
/// `tuples` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn comenet_tuples_free(tuples: *mut ComenetTupleSet) {
    if !tuples.is_null() {
        drop(Box::from_raw(tuples));
    }
}

/// # Safety
/// `tuples` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn comenet_tuples_len(tuples: *const ComenetTupleSet, out: *mut usize) -> ComenetStatus {
    guard(|| store(out, deref(tuples, "tuples")?.0.len(), "out"))
}

fn index(r: Option<usize>) -> i64 {
    r.map_or(-1, |v| v as i64)
}

/// Tuple number `k` in `(i, j)` order.
///
/// # Safety
/// `tuples` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn comenet_tuples_get(
    tuples: *const ComenetTupleSet,
    k: usize,
    out: *mut ComenetEdgeTuple,
) -> ComenetStatus {
    guard(|| {
        let ts = &deref(tuples, "tuples")?.0;
        let t = ts.tuples.get(k).ok_or_else(|| {
            (
                ComenetStatus::InvalidArgument,
                format!("index {k} out of range for {} tuples", ts.len()),
            )
        })?;
        let value = ComenetEdgeTuple {
            i: t.i,
            j: t.j,
            d: t.d,
            theta: t.theta,
            phi: t.phi,
            tau: t.tau,
            flags: t.flags.bits(),
            first: index(t.refs.first),
            second: index(t.refs.second),
            source_excluding: index(t.refs.source_excluding),
            target_excluding: index(t.refs.target_excluding),
        };
        store(out, value, "out")
    })
}

/// Rebuilds coordinates from `tuples` using the topology of `graph`, aligns
/// them onto `graph` and writes the aligned `3n` coordinates and the RMSD.
///
/// # Safety
/// Handles must be live; `positions` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn comenet_reconstruct(
    graph: *const ComenetGraph,
    tuples: *const ComenetTupleSet,
    positions: *mut f64,
    len: usize,
    rmsd: *mut f64,
) -> ComenetStatus {
    guard(|| {
        let g = &deref(graph, "graph")?.0;
        let ts = &deref(tuples, "tuples")?.0;
        let mut result = lib(reconstruct(ts, &g.topology()))?;
        let report = lib(result.align_to(g.positions()))?;
        let flat: Vec<f64> = result
            .positions
            .iter()
            .flat_map(|p| {
                let q = report.apply(p);
                [q.x, q.y, q.z]
            })
            .collect();
        copy_out(&flat, positions, len)?;
        store(rmsd, report.rmsd, "rmsd")
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn comenet_basis_new(
    cutoff: f64,
    num_radial: usize,
    num_spherical: usize,
    out: *mut *mut ComenetBasis,
) -> ComenetStatus {
    guard(|| {
        let cfg = lib(BasisConfig::new(cutoff, num_radial, num_spherical))?;
        store(out, Box::into_raw(Box::new(ComenetBasis(cfg))), "out")
    })
}

/// # Safety
/// `basis` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn comenet_basis_free(basis: *mut ComenetBasis) {
    if !basis.is_null() {
        drop(Box::from_raw(basis));
    }
}

/// TBF length `L²N`.
///
/// # Safety
/// `basis` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn comenet_basis_tbf_len(basis: *const ComenetBasis, out: *mut usize) -> ComenetStatus {
    guard(|| store(out, deref(basis, "basis")?.0.tbf_len(), "out"))
}

/// SBF length `LN`.
///
/// # Safety
/// `basis` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn comenet_basis_sbf_len(basis: *const ComenetBasis, out: *mut usize) -> ComenetStatus {
    guard(|| store(out, deref(basis, "basis")?.0.sbf_len(), "out"))
}

/// # Safety
/// `basis` must be a live handle and `buffer` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn comenet_basis_tbf(
    basis: *const ComenetBasis,
    d: f64,
    theta: f64,
    phi: f64,
    buffer: *mut f64,
    len: usize,
) -> ComenetStatus {
    guard(|| {
        let values = lib(deref(basis, "basis")?.0.tbf(d, theta, phi))?;
        copy_out(&values, buffer, len)
    })
}

/// # Safety
/// `basis` must be a live handle and `buffer` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn comenet_basis_sbf(
    basis: *const ComenetBasis,
    d: f64,
    tau: f64,
    buffer: *mut f64,
    len: usize,
) -> ComenetStatus {
    guard(|| {
        let values = lib(deref(basis, "basis")?.0.sbf(d, tau))?;
        copy_out(&values, buffer, len)
    })
}

/// Scalar output of the fixed-weight network with default basis sizes.
///
/// # Safety
/// `graph` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn comenet_forward(
    graph: *const ComenetGraph,
    num_layers: usize,
    hidden: usize,
    seed: u64,
    use_tau: bool,
    out: *mut f64,
) -> ComenetStatus {
    guard(|| {
        let g = &deref(graph, "graph")?.0;
        let net = lib(MiniNet::new(MiniNetConfig {
            num_layers,
            hidden,
            seed,
            use_tau,
            ..MiniNetConfig::default()
        }))?;
        store(out, lib(net.forward(g))?, "out")
    })
}
