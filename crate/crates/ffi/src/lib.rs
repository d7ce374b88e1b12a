//! C ABI over `pid-core`.
//!
//! Objects cross the boundary as opaque handles created by `*_new`/`*_load`
//! functions and released with the matching `*_free`. Every fallible call
//! returns a [`PidStatus`]; on failure [`pid_last_error`] describes the cause
//! for the calling thread. Strings returned through `char **` out-parameters
//! are owned by the caller and must be released with [`pid_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use pid_core::report::{atoms_json, lattice_json};
use pid_core::{
    decompose, DecompositionResult, JointDistribution, LabelView, Lattice, Measure, PidError,
};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PidStatus {
    Ok = 0,
    NullPointer = 1,
    Capacity = 2,
    Usage = 3,
    Parse = 4,
    Distribution = 5,
    Domain = 6,
    UnknownMeasure = 7,
    Internal = 8,
    InvalidUtf8 = 9,
    IndexOutOfRange = 10,
    Panic = 11,
}

/// Node label view.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PidView {
    Antichain = 0,
    Bitstring = 1,
    Statement = 2,
}

impl From<PidView> for LabelView {
    fn from(v: PidView) -> Self {
        match v {
            PidView::Antichain => LabelView::Antichain,
            PidView::Bitstring => LabelView::Bitstring,
            PidView::Statement => LabelView::Statement,
        }
    }
}

/// Opaque lattice handle.
pub struct PidLattice(Arc<Lattice>);

/// Opaque distribution handle.
pub struct PidDistribution(JointDistribution);

/// Opaque decomposition handle.
pub struct PidDecomposition {
    result: DecompositionResult,
    labels: Vec<(Vec<String>, String)>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &PidError) -> PidStatus {
    match e {
        PidError::Capacity { .. } => PidStatus::Capacity,
        PidError::Usage(_) | PidError::NotAntichain { .. } => PidStatus::Usage,
        PidError::Parse { .. } => PidStatus::Parse,
        PidError::Distribution(_) => PidStatus::Distribution,
        PidError::Domain(_) => PidStatus::Domain,
        PidError::UnknownMeasure(_) => PidStatus::UnknownMeasure,
        PidError::Internal(_) => PidStatus::Internal,
    }
}

fn fail(status: PidStatus, msg: impl Into<String>) -> PidStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> Result<(), PidStatus>) -> PidStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PidStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(PidStatus::Panic, "panic inside pid-core"),
    }
}

fn lift<T>(r: pid_core::Result<T>) -> Result<T, PidStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, PidStatus> {
    if s.is_null() {
        return Err(fail(PidStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(PidStatus::InvalidUtf8, "string argument is not UTF-8"))
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, PidStatus> {
    p.as_ref()
        .ok_or_else(|| fail(PidStatus::NullPointer, "null handle"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), PidStatus> {
    if out.is_null() {
        return Err(fail(PidStatus::NullPointer, "null output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), PidStatus> {
    let c = CString::new(s).map_err(|_| fail(PidStatus::Internal, "interior NUL in output"))?;
    write_out(out, c.into_raw())
}

/// Message describing the last failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pid_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pid_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds the lattice for `n` sources (1 to 5).
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn pid_lattice_new(n: usize, out: *mut *mut PidLattice) -> PidStatus {
    guard(|| {
        let lattice = lift(Lattice::shared(n))?;
        write_out(out, Box::into_raw(Box::new(PidLattice(lattice))))
    })
}

/// # Safety
/// `lattice` must come from [`pid_lattice_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pid_lattice_free(lattice: *mut PidLattice) {
    if !lattice.is_null() {
        drop(Box::from_raw(lattice));
    }
}

/// Number of nodes, or 0 for a NULL handle.
///
/// # Safety
/// `lattice` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pid_lattice_node_count(lattice: *const PidLattice) -> usize {
    lattice.as_ref().map_or(0, |l| l.0.len())
}

/// Label of node `index` (canonical order) in the requested view.
///
/// # Safety
/// `lattice` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pid_lattice_node_label(
    lattice: *const PidLattice,
    index: usize,
    view: PidView,
    out: *mut *mut c_char,
) -> PidStatus {
    guard(|| {
        let l = &deref(lattice)?.0;
        if index >= l.len() {
            return Err(fail(
                PidStatus::IndexOutOfRange,
                format!("node {index} of {}", l.len()),
            ));
        }
        write_string(out, LabelView::from(view).label(l, index))
    })
}

/// Number of children (lower covers) of node `index`.
///
/// # Safety
/// `lattice` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pid_lattice_child_count(
    lattice: *const PidLattice,
    index: usize,
    out: *mut usize,
) -> PidStatus {
    guard(|| {
        let l = &deref(lattice)?.0;
        if index >= l.len() {
            return Err(fail(
                PidStatus::IndexOutOfRange,
                format!("node {index} of {}", l.len()),
            ));
        }
        write_out(out, l.children_of(index).len())
    })
}

/// DOT (`as_json == 0`) or JSON rendering of the lattice.
///
/// # Safety
/// `lattice` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pid_lattice_export(
    lattice: *const PidLattice,
    view: PidView,
    as_json: i32,
    out: *mut *mut c_char,
) -> PidStatus {
    guard(|| {
        let l = &deref(lattice)?.0;
        let text = if as_json != 0 {
            lattice_json(l, view.into()).to_string()
        } else {
            pid_core::lattice::export_dot(l, view.into())
        };
        write_string(out, text)
    })
}

/// Parses a distribution from CSV or JSON text.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pid_distribution_load(
    text: *const c_char,
    out: *mut *mut PidDistribution,
) -> PidStatus {
    guard(|| {
        let text = read_str(text)?;
        let dist = lift(JointDistribution::load(text))?;
        write_out(out, Box::into_raw(Box::new(PidDistribution(dist))))
    })
}

/// # Safety
/// `dist` must come from [`pid_distribution_load`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pid_distribution_free(dist: *mut PidDistribution) {
    if !dist.is_null() {
        drop(Box::from_raw(dist));
    }
}

/// Number of sources, or 0 for a NULL handle.
///
/// # Safety
/// `dist` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pid_distribution_source_count(dist: *const PidDistribution) -> usize {
    dist.as_ref().map_or(0, |d| d.0.n())
}

/// Runs a decomposition. `measure` is one of `sx`, `res`, `ws`, `ms`, `unq`.
///
/// # Safety
/// `dist` must be a live handle, `measure` a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pid_decompose(
    dist: *const PidDistribution,
    measure: *const c_char,
    out: *mut *mut PidDecomposition,
) -> PidStatus {
    guard(|| {
        let d = &deref(dist)?.0;
        let measure: Measure = lift(read_str(measure)?.parse())?;
        let result = lift(decompose(d, measure))?;
        let labels = result
            .pointwise
            .iter()
            .map(|p| {
                let (s, t) = d.labels(&p.realization);
                (s.into_iter().map(String::from).collect(), t.to_string())
            })
            .collect();
        write_out(
            out,
            Box::into_raw(Box::new(PidDecomposition { result, labels })),
        )
    })
}

/// # Safety
/// `dec` must come from [`pid_decompose`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pid_decomposition_free(dec: *mut PidDecomposition) {
    if !dec.is_null() {
        drop(Box::from_raw(dec));
    }
}

/// Number of atoms, or 0 for a NULL handle.
///
/// # Safety
/// `dec` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pid_decomposition_node_count(dec: *const PidDecomposition) -> usize {
    dec.as_ref().map_or(0, |d| d.result.lattice.len())
}

unsafe fn node_value(
    dec: *const PidDecomposition,
    index: usize,
    out: *mut f64,
    pick: impl Fn(&DecompositionResult, usize) -> Option<f64>,
) -> PidStatus {
    guard(|| {
        let r = &deref(dec)?.result;
        if index >= r.lattice.len() {
            return Err(fail(
                PidStatus::IndexOutOfRange,
                format!("node {index} of {}", r.lattice.len()),
            ));
        }
        let v = pick(r, index)
            .ok_or_else(|| fail(PidStatus::Usage, "value not available for this measure"))?;
        write_out(out, v)
    })
}

/// Averaged atom at node `index`.
///
/// # Safety
/// `dec` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pid_decomposition_atom(
    dec: *const PidDecomposition,
    index: usize,
    out: *mut f64,
) -> PidStatus {
    node_value(dec, index, out, |r, i| Some(r.averaged.get(i)))
}

/// Averaged measure value (redundancy for `sx`) at node `index`.
///
/// # Safety
/// `dec` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pid_decomposition_measure_value(
    dec: *const PidDecomposition,
    index: usize,
    out: *mut f64,
) -> PidStatus {
    node_value(dec, index, out, |r, i| Some(r.measure_values.get(i)))
}

/// Informative and misinformative atoms at node `index` (`sx` only).
///
/// # Safety
/// `dec` must be a live handle; `plus` and `minus` writable.
#[no_mangle]
pub unsafe extern "C" fn pid_decomposition_split(
    dec: *const PidDecomposition,
    index: usize,
    plus: *mut f64,
    minus: *mut f64,
) -> PidStatus {
    let s = node_value(dec, index, plus, |r, i| {
        r.averaged_split.as_ref().map(|(p, _)| p.get(i))
    });
    if s != PidStatus::Ok {
        return s;
    }
    node_value(dec, index, minus, |r, i| {
        r.averaged_split.as_ref().map(|(_, m)| m.get(i))
    })
}

/// Antichain label (`{1}{2}`) of node `index`.
///
/// # Safety
/// `dec` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pid_decomposition_node_label(
    dec: *const PidDecomposition,
    index: usize,
    out: *mut *mut c_char,
) -> PidStatus {
    guard(|| {
        let r = &deref(dec)?.result;
        if index >= r.lattice.len() {
            return Err(fail(
                PidStatus::IndexOutOfRange,
                format!("node {index} of {}", r.lattice.len()),
            ));
        }
        write_string(out, r.lattice.node(index).to_antichain().to_string())
    })
}

/// Largest consistency residual `|I(T:a) − Σ_{f(a)=1} Π(f)|`.
///
/// # Safety
/// `dec` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pid_decomposition_max_residual(
    dec: *const PidDecomposition,
    out: *mut f64,
) -> PidStatus {
    guard(|| write_out(out, deref(dec)?.result.diagnostics.max_abs_residual))
}

/// JSON document with averaged atoms, diagnostics and, if `pointwise != 0`,
/// the per-realization tables.
///
/// # Safety
/// `dec` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pid_decomposition_to_json(
    dec: *const PidDecomposition,
    pointwise: i32,
    out: *mut *mut c_char,
) -> PidStatus {
    guard(|| {
        let d = deref(dec)?;
        let lookup = |r: &pid_core::Realization| {
            let k = d
                .result
                .pointwise
                .iter()
                .position(|p| &p.realization == r)
                .expect("realization from this result");
            d.labels[k].clone()
        };
        let doc = atoms_json(&d.result, (pointwise != 0).then_some(&lookup as _));
        write_string(out, doc.to_string())
    })
}
