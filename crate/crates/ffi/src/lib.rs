//! C ABI over `simplex-geom`.
//!
//! Cliques and designs cross the boundary as opaque handles that must be
//! released with the matching `*_free`. Every fallible call returns an
//! [`SgStatus`]; on failure a description is available from
//! [`sg_last_error_message`] on the same thread. Text outputs use the
//! two-call pattern: pass a null buffer to learn the required size
//! (including the terminating NUL).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use simplex_geom::cliques::{classify_clique, CliqueTag};
use simplex_geom::constructions::{construct, CliqueKind};
use simplex_geom::designs::{
    automorphism_group, block_orbit_count, design_from_clique, find_isomorphism, flag_orbit_count,
    from_hadamard, to_hadamard, Design, HadamardMatrix, HadamardStyle,
};
use simplex_geom::{Clique, Error};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    InvalidDesign = 4,
    Inconsistent = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SgKind {
    C1 = 0,
    C2 = 1,
    C3 = 2,
    C4 = 3,
    NonCentered = 4,
    HyperplaneComplement = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SgTag {
    C1 = 1,
    C2 = 2,
    C3 = 3,
    C4 = 4,
    NonCentered = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SgClassification {
    /// An `SgTag` value.
    pub tag: i32,
    pub centers: u32,
    pub lines_inside: u32,
    pub fano_planes: u32,
    /// Bijection index at the smallest center, or -1 without a center.
    pub index: i32,
}

pub struct SgClique(Clique);

pub struct SgDesign(Design);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SgStatus {
    match e {
        Error::Parse(_) => SgStatus::ParseError,
        Error::InvalidDesign(_) | Error::NotHadamard(_) => SgStatus::InvalidDesign,
        Error::Inconsistent(_) => SgStatus::Inconsistent,
        _ => SgStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (SgStatus, String)>) -> SgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SgStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside simplex-geom".into());
            SgStatus::Panic
        }
    }
}

fn core<T>(r: simplex_geom::Result<T>) -> Result<T, (SgStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (SgStatus, String) {
    (SgStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (SgStatus, String)> {
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (SgStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| (SgStatus::ParseError, format!("{what} is not UTF-8")))
}

unsafe fn write_text(
    text: &str,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> Result<(), (SgStatus, String)> {
    let n = text.len() + 1;
    if let Some(out) = unsafe { needed.as_mut() } {
        *out = n;
    }
    if buf.is_null() {
        return if needed.is_null() {
            Err(null("buffer"))
        } else {
            Ok(())
        };
    }
    if cap < n {
        return Err((
            SgStatus::BufferTooSmall,
            format!("need {n} bytes, buffer holds {cap}"),
        ));
    }
    unsafe {
        ptr::copy_nonoverlapping(text.as_ptr(), buf.cast::<u8>(), text.len());
        *buf.add(text.len()) = 0;
    }
    Ok(())
}

/// Last error on this thread, or null. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn sg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds the canonical clique of kind `kind` (an `SgKind` value).
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn sg_clique_construct(kind: i32, out: *mut *mut SgClique) -> SgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let kind = match kind {
            k if k == SgKind::C1 as i32 => CliqueKind::C1,
            k if k == SgKind::C2 as i32 => CliqueKind::C2,
            k if k == SgKind::C3 as i32 => CliqueKind::C3,
            k if k == SgKind::C4 as i32 => CliqueKind::C4,
            k if k == SgKind::NonCentered as i32 => CliqueKind::NonCentered,
            k if k == SgKind::HyperplaneComplement as i32 => CliqueKind::HyperplaneComplement,
            other => {
                return Err((
                    SgStatus::InvalidArgument,
                    format!("unknown clique kind {other}"),
                ))
            }
        };
        let c = core(construct(kind))?;
        unsafe { *out = Box::into_raw(Box::new(SgClique(c))) };
        Ok(())
    })
}

/// # Safety
/// `c` must be null or a handle from `sg_clique_construct` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sg_clique_free(c: *mut SgClique) {
    if !c.is_null() {
        drop(unsafe { Box::from_raw(c) });
    }
}

/// Number of points, or 0 for a null handle.
///
/// # Safety
/// `c` must be null or a live clique handle.
#[no_mangle]
pub unsafe extern "C" fn sg_clique_len(c: *const SgClique) -> usize {
    unsafe { c.as_ref() }.map_or(0, |c| c.0.len())
}

/// Point `i` as a bitmask: element `e` is bit `e - 1`.
///
/// # Safety
/// `c` must be a live clique handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_clique_point(c: *const SgClique, i: usize, out: *mut u64) -> SgStatus {
    guard(|| {
        let c = unsafe { deref(c, "clique") }?;
        let out = unsafe { out.as_mut() }.ok_or_else(|| null("out"))?;
        let p =
            c.0.points()
                .get(i)
                .ok_or((SgStatus::InvalidArgument, format!("no point {i}")))?;
        *out = p.bits();
        Ok(())
    })
}

/// # Safety
/// `c` must be a live clique handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_clique_classify(
    c: *const SgClique,
    out: *mut SgClassification,
) -> SgStatus {
    guard(|| {
        let c = unsafe { deref(c, "clique") }?;
        let out = unsafe { out.as_mut() }.ok_or_else(|| null("out"))?;
        let class = core(classify_clique(&c.0))?;
        *out = SgClassification {
            tag: match class.tag {
                CliqueTag::C1 => SgTag::C1,
                CliqueTag::C2 => SgTag::C2,
                CliqueTag::C3 => SgTag::C3,
                CliqueTag::C4 => SgTag::C4,
                CliqueTag::NonCentered => SgTag::NonCentered,
            } as i32,
            centers: class.centers.len() as u32,
            lines_inside: class.lines_inside as u32,
            fano_planes: class.fano_planes.len() as u32,
            index: class.index.map_or(-1, i32::from),
        };
        Ok(())
    })
}

fn box_design(out: *mut *mut SgDesign, d: Design) -> Result<(), (SgStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    unsafe { *out = Box::into_raw(Box::new(SgDesign(d))) };
    Ok(())
}

/// # Safety
/// `c` must be a live clique handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_design_from_clique(
    c: *const SgClique,
    out: *mut *mut SgDesign,
) -> SgStatus {
    guard(|| {
        let c = unsafe { deref(c, "clique") }?;
        box_design(out, core(design_from_clique(&c.0))?)
    })
}

/// Parses `v` rows of `v` characters `0`/`1`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_design_from_incidence(
    text: *const c_char,
    out: *mut *mut SgDesign,
) -> SgStatus {
    guard(|| {
        let text = unsafe { read_str(text, "text") }?;
        box_design(out, core(Design::parse_incidence(text))?)
    })
}

/// Parses a normalized Hadamard matrix in `+`/`-` or `0`/`1` form.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_design_from_hadamard(
    text: *const c_char,
    out: *mut *mut SgDesign,
) -> SgStatus {
    guard(|| {
        let text = unsafe { read_str(text, "text") }?;
        let h = core(HadamardMatrix::parse(text))?;
        box_design(out, core(from_hadamard(&h))?)
    })
}

/// # Safety
/// `d` must be null or a design handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sg_design_free(d: *mut SgDesign) {
    if !d.is_null() {
        drop(unsafe { Box::from_raw(d) });
    }
}

/// Number of points, or 0 for a null handle.
///
/// # Safety
/// `d` must be null or a live design handle.
#[no_mangle]
pub unsafe extern "C" fn sg_design_points(d: *const SgDesign) -> usize {
    unsafe { d.as_ref() }.map_or(0, |d| d.0.v())
}

/// # Safety
/// `d` must be a live design handle; `buf` null or writable for `cap`
/// bytes; `needed` null or writable.
#[no_mangle]
pub unsafe extern "C" fn sg_design_incidence_text(
    d: *const SgDesign,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> SgStatus {
    guard(|| {
        let d = unsafe { deref(d, "design") }?;
        unsafe { write_text(&d.0.to_incidence_text(), buf, cap, needed) }
    })
}

/// Bordered Hadamard matrix; `binary` selects `0`/`1` over `+`/`-`.
///
/// # Safety
/// As for [`sg_design_incidence_text`].
#[no_mangle]
pub unsafe extern "C" fn sg_design_hadamard_text(
    d: *const SgDesign,
    binary: bool,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> SgStatus {
    guard(|| {
        let d = unsafe { deref(d, "design") }?;
        let h = core(to_hadamard(&d.0))?;
        let style = if binary {
            HadamardStyle::Binary
        } else {
            HadamardStyle::Signs
        };
        unsafe { write_text(&h.render(style), buf, cap, needed) }
    })
}

/// Looks for a point map from `a` to `b`. On success `*found` says whether
/// one exists; if so `perm[i]` is the image of point `i + 1` (1-based) for
/// `i < v`, and `perm` must hold `v` entries.
///
/// # Safety
/// `a`, `b` must be live design handles; `perm` writable for `cap` bytes;
/// `found` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_design_find_isomorphism(
    a: *const SgDesign,
    b: *const SgDesign,
    perm: *mut u8,
    cap: usize,
    found: *mut bool,
) -> SgStatus {
    guard(|| {
        let a = unsafe { deref(a, "a") }?;
        let b = unsafe { deref(b, "b") }?;
        let found = unsafe { found.as_mut() }.ok_or_else(|| null("found"))?;
        if perm.is_null() {
            return Err(null("perm"));
        }
        if cap < a.0.v() {
            return Err((
                SgStatus::BufferTooSmall,
                format!("need {} entries, buffer holds {cap}", a.0.v()),
            ));
        }
        *found = false;
        if let Some(p) = find_isomorphism(&a.0, &b.0) {
            for (i, x) in p.images().into_iter().enumerate() {
                unsafe { *perm.add(i) = x as u8 };
            }
            *found = true;
        }
        Ok(())
    })
}

/// Order of the full automorphism group and its orbit counts on blocks and
/// on flags. Any output pointer may be null.
///
/// # Safety
/// `d` must be a live design handle; non-null outputs writable.
#[no_mangle]
pub unsafe extern "C" fn sg_design_automorphisms(
    d: *const SgDesign,
    order: *mut u64,
    block_orbits: *mut usize,
    flag_orbits: *mut usize,
) -> SgStatus {
    guard(|| {
        let d = unsafe { deref(d, "design") }?;
        let g = core(automorphism_group(&d.0))?;
        if let Some(o) = unsafe { order.as_mut() } {
            *o = g.order();
        }
        if let Some(o) = unsafe { block_orbits.as_mut() } {
            *o = core(block_orbit_count(&d.0, &g))?;
        }
        if let Some(o) = unsafe { flag_orbits.as_mut() } {
            *o = core(flag_orbit_count(&d.0, &g))?;
        }
        Ok(())
    })
}
