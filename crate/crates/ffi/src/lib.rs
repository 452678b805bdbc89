//! C ABI over `galex`.
//!
//! Contexts, lattices and navigation sessions cross the boundary as opaque
//! handles created by `*_parse`/`*_build`/`*_start` and released by the
//! matching `*_free`. Every fallible call returns a [`GalexStatus`]; on
//! failure, [`galex_last_error_message`] describes the error for the calling
//! thread. Strings returned through `char **` outputs are owned by the caller
//! and must be released with [`galex_string_free`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use libc::{c_char, size_t};

use galex::export::{lattice_dot, DotOptions, LatticeDocument, MoveDocument, PosetDocument, ReportDocument};
use galex::subhierarchy::subhierarchy;
use galex::variability::{classify_configuration, report_for};
use galex::{
    BuildOptions, ConceptId, ConceptLattice, ConfigurationClass, ContextFormat, Error, FormalContext,
    NavigationSession, PosetKind, ReportOptions,
};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GalexStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    DuplicateName = 3,
    MalformedTable = 4,
    EmptyContext = 5,
    CapacityExceeded = 6,
    InvalidSet = 7,
    UnknownConcept = 8,
    UnknownAttribute = 9,
    UnknownObject = 10,
    InvalidThreshold = 11,
    NotAdjacent = 12,
    InvalidArgument = 13,
    Io = 14,
    Internal = 15,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GalexFormat {
    Csv = 0,
    Json = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GalexPosetKind {
    Aoc = 0,
    Ac = 1,
    Oc = 2,
    Iceberg = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GalexConfigurationClass {
    Valid = 0,
    MaximalPartial = 1,
    Partial = 2,
    Invalid = 3,
}

/// Returned in concept-id outputs when there is no concept. Declared in the
/// header as `SIZE_MAX`.
/// cbindgen:ignore
pub const GALEX_NO_CONCEPT: usize = usize::MAX;

/// Opaque formal context.
pub struct GalexContext(FormalContext);

/// Opaque concept lattice.
pub struct GalexLattice(Arc<ConceptLattice>);

/// Opaque navigation session. Keeps its lattice alive on its own.
pub struct GalexSession(NavigationSession);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(message));
}

struct Failure(GalexStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::DuplicateName { .. } => GalexStatus::DuplicateName,
            Error::MalformedTable(_) | Error::MalformedDocument(_) | Error::Json(_) => GalexStatus::MalformedTable,
            Error::EmptyContext(_) => GalexStatus::EmptyContext,
            Error::CapacityExceeded(_) => GalexStatus::CapacityExceeded,
            Error::InvalidSet(_) => GalexStatus::InvalidSet,
            Error::UnknownConcept(_) => GalexStatus::UnknownConcept,
            Error::UnknownAttribute(_) => GalexStatus::UnknownAttribute,
            Error::UnknownObject(_) => GalexStatus::UnknownObject,
            Error::InvalidThreshold(_) => GalexStatus::InvalidThreshold,
            Error::NotAdjacent { .. } => GalexStatus::NotAdjacent,
            Error::InvalidConfig(_) => GalexStatus::InvalidArgument,
            Error::Io(_) => GalexStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(GalexStatus::NullPointer, format!("`{what}` is NULL"))
}

/// Runs `body`, converting errors and panics into a status code.
fn guard<F: FnOnce() -> Result<(), Failure>>(body: F) -> GalexStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => GalexStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            GalexStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(GalexStatus::InvalidUtf8, format!("`{what}` is not valid UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

fn to_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(GalexStatus::Internal, "output contains a NUL byte".into()))
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn galex_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn galex_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a NUL-terminated CSV or JSON context.
///
/// # Safety
/// `source` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn galex_context_parse(
    source: *const c_char,
    format: GalexFormat,
    out: *mut *mut GalexContext,
) -> GalexStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let source = str_arg(source, "source")?;
        let format = match format {
            GalexFormat::Csv => ContextFormat::Csv,
            GalexFormat::Json => ContextFormat::Json,
        };
        let ctx = FormalContext::parse(source, format)?;
        *out = Box::into_raw(Box::new(GalexContext(ctx)));
        Ok(())
    })
}

/// Reads a context file; `.json` files are JSON, anything else CSV.
///
/// # Safety
/// `path` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn galex_context_load(path: *const c_char, out: *mut *mut GalexContext) -> GalexStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let path = str_arg(path, "path")?;
        let ctx = FormalContext::from_path(std::path::Path::new(path))?;
        *out = Box::into_raw(Box::new(GalexContext(ctx)));
        Ok(())
    })
}

/// # Safety
/// `ctx` must be NULL or a handle from `galex_context_parse`/`galex_context_load`.
#[no_mangle]
pub unsafe extern "C" fn galex_context_free(ctx: *mut GalexContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// # Safety
/// `ctx` must be a live context handle.
#[no_mangle]
pub unsafe extern "C" fn galex_context_object_count(ctx: *const GalexContext) -> size_t {
    ctx.as_ref().map_or(0, |c| c.0.object_count())
}

/// # Safety
/// `ctx` must be a live context handle.
#[no_mangle]
pub unsafe extern "C" fn galex_context_attribute_count(ctx: *const GalexContext) -> size_t {
    ctx.as_ref().map_or(0, |c| c.0.attribute_count())
}

/// Builds the concept lattice. `max_concepts == 0` uses the default ceiling.
///
/// # Safety
/// `ctx` must be a live context handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn galex_lattice_build(
    ctx: *const GalexContext,
    max_concepts: size_t,
    out: *mut *mut GalexLattice,
) -> GalexStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let ctx = ref_arg(ctx, "ctx")?;
        let mut options = BuildOptions::default();
        if max_concepts > 0 {
            options.max_concepts = max_concepts;
        }
        let l = ConceptLattice::build_with(&ctx.0, &options)?;
        *out = Box::into_raw(Box::new(GalexLattice(Arc::new(l))));
        Ok(())
    })
}

/// # Safety
/// `l` must be NULL or a handle from `galex_lattice_build`.
#[no_mangle]
pub unsafe extern "C" fn galex_lattice_free(l: *mut GalexLattice) {
    if !l.is_null() {
        drop(Box::from_raw(l));
    }
}

/// # Safety
/// `l` must be a live lattice handle.
#[no_mangle]
pub unsafe extern "C" fn galex_lattice_concept_count(l: *const GalexLattice) -> size_t {
    l.as_ref().map_or(0, |l| l.0.len())
}

/// # Safety
/// `l` must be a live lattice handle.
#[no_mangle]
pub unsafe extern "C" fn galex_lattice_top(l: *const GalexLattice) -> size_t {
    l.as_ref().map_or(GALEX_NO_CONCEPT, |l| l.0.top().0)
}

/// # Safety
/// `l` must be a live lattice handle.
#[no_mangle]
pub unsafe extern "C" fn galex_lattice_bottom(l: *const GalexLattice) -> size_t {
    l.as_ref().map_or(GALEX_NO_CONCEPT, |l| l.0.bottom().0)
}

/// Writes whether concept `a` is below or equal to concept `b`.
///
/// # Safety
/// `l` must be a live lattice handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn galex_lattice_leq(
    l: *const GalexLattice,
    a: size_t,
    b: size_t,
    out: *mut bool,
) -> GalexStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ref_arg(l, "l")?.0.leq(ConceptId(a), ConceptId(b))?;
        Ok(())
    })
}

unsafe fn id_slice(ids: *const size_t, len: size_t) -> Result<Vec<ConceptId>, Failure> {
    if len == 0 {
        return Err(Failure(GalexStatus::InvalidArgument, "empty concept set".into()));
    }
    if ids.is_null() {
        return Err(null("ids"));
    }
    Ok(std::slice::from_raw_parts(ids, len)
        .iter()
        .map(|&i| ConceptId(i))
        .collect())
}

/// Least upper bound of `len` concepts.
///
/// # Safety
/// `ids` must point to `len` readable ids; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn galex_lattice_join(
    l: *const GalexLattice,
    ids: *const size_t,
    len: size_t,
    out: *mut size_t,
) -> GalexStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ref_arg(l, "l")?.0.join(&id_slice(ids, len)?)?.0;
        Ok(())
    })
}

/// Greatest lower bound of `len` concepts.
///
/// # Safety
/// `ids` must point to `len` readable ids; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn galex_lattice_meet(
    l: *const GalexLattice,
    ids: *const size_t,
    len: size_t,
    out: *mut size_t,
) -> GalexStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ref_arg(l, "l")?.0.meet(&id_slice(ids, len)?)?.0;
        Ok(())
    })
}

/// # Safety
/// `attribute` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn galex_lattice_attribute_concept(
    l: *const GalexLattice,
    attribute: *const c_char,
    out: *mut size_t,
) -> GalexStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ref_arg(l, "l")?
            .0
            .attribute_concept(str_arg(attribute, "attribute")?)?
            .0;
        Ok(())
    })
}

/// # Safety
/// `object` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn galex_lattice_object_concept(
    l: *const GalexLattice,
    object: *const c_char,
    out: *mut size_t,
) -> GalexStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ref_arg(l, "l")?.0.object_concept(str_arg(object, "object")?)?.0;
        Ok(())
    })
}

/// Canonical lattice JSON.
///
/// # Safety
/// `l` must be a live lattice handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn galex_lattice_to_json(l: *const GalexLattice, out: *mut *mut c_char) -> GalexStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = to_c_string(LatticeDocument::new(&ref_arg(l, "l")?.0).to_json())?;
        Ok(())
    })
}

/// # Safety
/// `l` must be a live lattice handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn galex_lattice_to_dot(
    l: *const GalexLattice,
    full_labels: bool,
    out: *mut *mut c_char,
) -> GalexStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = to_c_string(lattice_dot(&ref_arg(l, "l")?.0, &DotOptions { full_labels }))?;
        Ok(())
    })
}

/// Variability report JSON.
///
/// # Safety
/// `l` must be a live lattice handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn galex_report_to_json(
    l: *const GalexLattice,
    exhaustive: bool,
    out: *mut *mut c_char,
) -> GalexStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let l = &ref_arg(l, "l")?.0;
        let doc = ReportDocument::new(l.context(), &report_for(l, &ReportOptions { exhaustive }));
        *out = to_c_string(doc.to_json())?;
        Ok(())
    })
}

/// Sub-hierarchy JSON. `min_extent` is only read for icebergs.
///
/// # Safety
/// `l` must be a live lattice handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn galex_subhierarchy_to_json(
    l: *const GalexLattice,
    kind: GalexPosetKind,
    min_extent: size_t,
    out: *mut *mut c_char,
) -> GalexStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let l = &ref_arg(l, "l")?.0;
        let kind = match kind {
            GalexPosetKind::Aoc => PosetKind::Aoc,
            GalexPosetKind::Ac => PosetKind::Ac,
            GalexPosetKind::Oc => PosetKind::Oc,
            GalexPosetKind::Iceberg => PosetKind::Iceberg,
        };
        let poset = subhierarchy(l, kind, Some(min_extent))?;
        *out = to_c_string(PosetDocument::new(l, &poset).to_json())?;
        Ok(())
    })
}

/// Classifies the attribute set given by `len` names. `out_concept` receives
/// the witness concept, or `GALEX_NO_CONCEPT` for invalid sets.
///
/// # Safety
/// `names` must point to `len` valid C strings; both outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn galex_classify(
    l: *const GalexLattice,
    names: *const *const c_char,
    len: size_t,
    out_class: *mut GalexConfigurationClass,
    out_concept: *mut size_t,
) -> GalexStatus {
    guard(|| {
        let out_class = out_arg(out_class, "out_class")?;
        let out_concept = out_arg(out_concept, "out_concept")?;
        let l = &ref_arg(l, "l")?.0;
        if len > 0 && names.is_null() {
            return Err(null("names"));
        }
        let names: Vec<&str> = (0..len)
            .map(|i| str_arg(*names.add(i), "names[i]"))
            .collect::<Result<_, _>>()?;
        let attrs = l.context().attributes_named(&names)?;
        let (class, concept) = match classify_configuration(l.context(), l, &attrs)? {
            ConfigurationClass::Valid { concept, .. } => (GalexConfigurationClass::Valid, concept.0),
            ConfigurationClass::MaximalPartial { concept } => (GalexConfigurationClass::MaximalPartial, concept.0),
            ConfigurationClass::Partial { concept, .. } => (GalexConfigurationClass::Partial, concept.0),
            ConfigurationClass::Invalid => (GalexConfigurationClass::Invalid, GALEX_NO_CONCEPT),
        };
        *out_class = class;
        *out_concept = concept;
        Ok(())
    })
}

/// Starts a session at `at`, or at the top concept when `at` is `GALEX_NO_CONCEPT`.
///
/// # Safety
/// `l` must be a live lattice handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn galex_session_start(
    l: *const GalexLattice,
    at: size_t,
    out: *mut *mut GalexSession,
) -> GalexStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let l = ref_arg(l, "l")?;
        let at = (at != GALEX_NO_CONCEPT).then_some(ConceptId(at));
        let session = NavigationSession::start(l.0.clone(), at)?;
        *out = Box::into_raw(Box::new(GalexSession(session)));
        Ok(())
    })
}

/// # Safety
/// `s` must be NULL or a handle from `galex_session_start`.
#[no_mangle]
pub unsafe extern "C" fn galex_session_free(s: *mut GalexSession) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be a live session handle.
#[no_mangle]
pub unsafe extern "C" fn galex_session_current(s: *const GalexSession) -> size_t {
    s.as_ref().map_or(GALEX_NO_CONCEPT, |s| s.0.current().0)
}

/// Available moves as a JSON array.
///
/// # Safety
/// `s` must be a live session handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn galex_session_moves_json(s: *const GalexSession, out: *mut *mut c_char) -> GalexStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let s = &ref_arg(s, "s")?.0;
        let ctx = s.lattice().context();
        let moves: Vec<MoveDocument> = s.available_moves().iter().map(|m| MoveDocument::new(ctx, m)).collect();
        let json = serde_json_string(&moves)?;
        *out = to_c_string(json)?;
        Ok(())
    })
}

/// History as a JSON array of `{"concept", "via"}`.
///
/// # Safety
/// `s` must be a live session handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn galex_session_history_json(s: *const GalexSession, out: *mut *mut c_char) -> GalexStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let json = serde_json_string(ref_arg(s, "s")?.0.history())?;
        *out = to_c_string(json)?;
        Ok(())
    })
}

fn serde_json_string<T: serde::Serialize + ?Sized>(value: &T) -> Result<String, Failure> {
    serde_json::to_string(value).map_err(|e| Failure(GalexStatus::Internal, e.to_string()))
}

/// Steps to a cover neighbour; fails with `NOT_ADJACENT` otherwise.
///
/// # Safety
/// `s` must be a live session handle.
#[no_mangle]
pub unsafe extern "C" fn galex_session_move(s: *mut GalexSession, target: size_t) -> GalexStatus {
    guard(|| {
        let s = out_arg(s, "s")?;
        s.0.apply_move(ConceptId(target))?;
        Ok(())
    })
}

/// Jumps to any concept.
///
/// # Safety
/// `s` must be a live session handle.
#[no_mangle]
pub unsafe extern "C" fn galex_session_jump(s: *mut GalexSession, target: size_t) -> GalexStatus {
    guard(|| {
        let s = out_arg(s, "s")?;
        s.0.jump(ConceptId(target))?;
        Ok(())
    })
}
