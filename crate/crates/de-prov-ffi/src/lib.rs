//! C ABI for the data-environment provenance toolkit.
//!
//! Documents are opaque handles created by the `deprov_parse_*` /
//! `deprov_fixture` constructors and released with [`deprov_document_free`].
//! Every fallible call returns a [`DeProvStatus`]; on failure a thread-local
//! message is available through [`deprov_last_error_message`]. Strings
//! returned through out-parameters are owned by the caller and must be
//! released with [`deprov_string_free`].
//!
//! The C header is generated into `include/deprov.h` at build time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::str::FromStr;

use de_prov::environment::{EncodingMode, EnvironmentError};
use de_prov::fixtures::{build_fixture, FixtureId};
use de_prov::model::{ProvDocument, QualifiedName};
use de_prov::notation::{
    export_flattened, parse_document, parse_json, serialize_json, serialize_provn, NotationError,
};
use de_prov::reasoning::{
    assess_document, assessment_to_json, backward_chain, controllers_of, controllers_to_json,
    forward_chain, SupportMatrix,
};
use de_prov::render::{to_dot, RenderOptions};
use de_prov::validation::validate;

/// Result codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeProvStatus {
    Ok = 0,
    /// The input text failed to parse; see the last error message.
    ParseError = 1,
    /// The JSON input violated the document schema.
    SchemaError = 2,
    /// The operation is not supported by the document's encoding mode.
    UnsupportedFeature = 3,
    /// A node or environment id does not exist in the document.
    UnknownNode = 4,
    /// A malformed argument (bad mode name, bad fixture name, bad id).
    InvalidArgument = 5,
    /// An argument was not valid UTF-8.
    Utf8Error = 6,
    /// A required pointer argument was null.
    NullPointer = 7,
}

/// Opaque provenance document handle.
pub struct DeProvDocument {
    inner: ProvDocument,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").expect("empty"));
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("nul bytes removed");
    });
}

fn fail(status: DeProvStatus, message: &str) -> DeProvStatus {
    set_error(message);
    status
}

fn notation_status(err: &NotationError) -> DeProvStatus {
    match err {
        NotationError::Parse(_) => DeProvStatus::ParseError,
        NotationError::Schema { .. } => DeProvStatus::SchemaError,
        NotationError::Environment(env) => environment_status(env),
        NotationError::Model(_) => DeProvStatus::ParseError,
        NotationError::FlattenNeedsBundlesPlus(_) => DeProvStatus::UnsupportedFeature,
    }
}

fn environment_status(err: &EnvironmentError) -> DeProvStatus {
    match err {
        EnvironmentError::NestingUnsupported { .. }
        | EnvironmentError::AttributesUnsupported { .. }
        | EnvironmentError::RelationUnsupported { .. }
        | EnvironmentError::ContractsUnsupported { .. }
        | EnvironmentError::AnnotationUnsupported { .. } => DeProvStatus::UnsupportedFeature,
        EnvironmentError::UnknownEnvironment(_) => DeProvStatus::UnknownNode,
        _ => DeProvStatus::InvalidArgument,
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, DeProvStatus> {
    if ptr.is_null() {
        return Err(fail(DeProvStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| fail(DeProvStatus::Utf8Error, "argument is not valid UTF-8"))
}

fn give_string(out: *mut *mut c_char, content: String) -> DeProvStatus {
    if out.is_null() {
        return fail(DeProvStatus::NullPointer, "null output pointer");
    }
    let sanitized = content.replace('\0', " ");
    let cstring = CString::new(sanitized).expect("nul bytes removed");
    unsafe {
        *out = cstring.into_raw();
    }
    DeProvStatus::Ok
}

fn give_document(out: *mut *mut DeProvDocument, doc: ProvDocument) -> DeProvStatus {
    if out.is_null() {
        return fail(DeProvStatus::NullPointer, "null output pointer");
    }
    let handle = Box::new(DeProvDocument { inner: doc });
    unsafe {
        *out = Box::into_raw(handle);
    }
    DeProvStatus::Ok
}

unsafe fn borrow_document<'a>(
    doc: *const DeProvDocument,
) -> Result<&'a ProvDocument, DeProvStatus> {
    if doc.is_null() {
        return Err(fail(DeProvStatus::NullPointer, "null document handle"));
    }
    Ok(&(*doc).inner)
}

fn pretty(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("valid json value");
    text.push('\n');
    text
}

/// Last error message for this thread; valid until the next failing call.
/// Never null.
#[no_mangle]
pub extern "C" fn deprov_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must be a pointer previously returned through an out-parameter of this
/// library, not yet freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn deprov_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Frees a document handle.
///
/// # Safety
/// `doc` must be a pointer previously returned by a constructor, not yet
/// freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn deprov_document_free(doc: *mut DeProvDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// Parses extended-notation text into a new document handle.
///
/// # Safety
/// `text` must be a valid NUL-terminated C string; `out` must be a valid
/// pointer to receive the handle.
#[no_mangle]
pub unsafe extern "C" fn deprov_parse_text(
    text: *const c_char,
    out: *mut *mut DeProvDocument,
) -> DeProvStatus {
    let text = match read_str(text) {
        Ok(text) => text,
        Err(status) => return status,
    };
    match parse_document(text) {
        Ok(doc) => give_document(out, doc),
        Err(err) => fail(notation_status(&err), &err.to_string()),
    }
}

/// Parses the JSON form into a new document handle.
///
/// # Safety
/// As for [`deprov_parse_text`].
#[no_mangle]
pub unsafe extern "C" fn deprov_parse_json(
    text: *const c_char,
    out: *mut *mut DeProvDocument,
) -> DeProvStatus {
    let text = match read_str(text) {
        Ok(text) => text,
        Err(status) => return status,
    };
    match parse_json(text) {
        Ok(doc) => give_document(out, doc),
        Err(err) => fail(DeProvStatus::SchemaError, &err.to_string()),
    }
}

/// Builds one of the shipped fixtures (`gond-nrds`, `clinical-trial`) in the
/// given encoding mode (`bundle`, `namespace`, `namespaces+`, `bundles+`).
///
/// # Safety
/// `name` and `mode` must be valid NUL-terminated C strings; `out` must be a
/// valid pointer to receive the handle.
#[no_mangle]
pub unsafe extern "C" fn deprov_fixture(
    name: *const c_char,
    mode: *const c_char,
    out: *mut *mut DeProvDocument,
) -> DeProvStatus {
    let name = match read_str(name) {
        Ok(name) => name,
        Err(status) => return status,
    };
    let mode = match read_str(mode) {
        Ok(mode) => mode,
        Err(status) => return status,
    };
    let id = match FixtureId::from_str(name) {
        Ok(id) => id,
        Err(err) => return fail(DeProvStatus::InvalidArgument, &err),
    };
    let mode = match mode.parse::<EncodingMode>() {
        Ok(mode) => mode,
        Err(err) => return fail(DeProvStatus::InvalidArgument, &err.to_string()),
    };
    match build_fixture(id, mode) {
        Ok((doc, _)) => give_document(out, doc),
        Err(err) => fail(environment_status(&err), &err.to_string()),
    }
}

/// The document's encoding mode name.
///
/// # Safety
/// `doc` must be a live handle; `out` receives a new string.
#[no_mangle]
pub unsafe extern "C" fn deprov_document_mode(
    doc: *const DeProvDocument,
    out: *mut *mut c_char,
) -> DeProvStatus {
    match borrow_document(doc) {
        Ok(inner) => give_string(out, inner.mode.name().to_owned()),
        Err(status) => status,
    }
}

/// Serializes to canonical extended-notation text.
///
/// # Safety
/// `doc` must be a live handle; `out` receives a new string.
#[no_mangle]
pub unsafe extern "C" fn deprov_to_provn(
    doc: *const DeProvDocument,
    out: *mut *mut c_char,
) -> DeProvStatus {
    match borrow_document(doc) {
        Ok(inner) => give_string(out, serialize_provn(inner)),
        Err(status) => status,
    }
}

/// Serializes to the canonical JSON form.
///
/// # Safety
/// `doc` must be a live handle; `out` receives a new string.
#[no_mangle]
pub unsafe extern "C" fn deprov_to_json(
    doc: *const DeProvDocument,
    out: *mut *mut c_char,
) -> DeProvStatus {
    match borrow_document(doc) {
        Ok(inner) => give_string(out, serialize_json(inner)),
        Err(status) => status,
    }
}

/// Renders DOT text with default options.
///
/// # Safety
/// `doc` must be a live handle; `out` receives a new string.
#[no_mangle]
pub unsafe extern "C" fn deprov_to_dot(
    doc: *const DeProvDocument,
    out: *mut *mut c_char,
) -> DeProvStatus {
    match borrow_document(doc) {
        Ok(inner) => give_string(out, to_dot(inner, &RenderOptions::default())),
        Err(status) => status,
    }
}

/// Exports strictly standard PROV-N; the document must be in bundles+ mode.
///
/// # Safety
/// `doc` must be a live handle; `out` receives a new string.
#[no_mangle]
pub unsafe extern "C" fn deprov_export_flattened(
    doc: *const DeProvDocument,
    out: *mut *mut c_char,
) -> DeProvStatus {
    let inner = match borrow_document(doc) {
        Ok(inner) => inner,
        Err(status) => return status,
    };
    match export_flattened(inner) {
        Ok(text) => give_string(out, text),
        Err(err) => fail(notation_status(&err), &err.to_string()),
    }
}

/// Runs inference plus all constraint checks; returns the report as JSON.
///
/// # Safety
/// `doc` must be a live handle; `out` receives a new string.
#[no_mangle]
pub unsafe extern "C" fn deprov_validate_json(
    doc: *const DeProvDocument,
    out: *mut *mut c_char,
) -> DeProvStatus {
    match borrow_document(doc) {
        Ok(inner) => give_string(out, pretty(&validate(inner).to_json())),
        Err(status) => status,
    }
}

/// Whether validation finds no error-severity findings.
///
/// # Safety
/// `doc` must be a live handle; `out_valid` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn deprov_document_is_valid(
    doc: *const DeProvDocument,
    out_valid: *mut bool,
) -> DeProvStatus {
    let inner = match borrow_document(doc) {
        Ok(inner) => inner,
        Err(status) => return status,
    };
    if out_valid.is_null() {
        return fail(DeProvStatus::NullPointer, "null output pointer");
    }
    *out_valid = validate(inner).is_valid();
    DeProvStatus::Ok
}

/// Per-requirement assessment of the document, as JSON.
///
/// # Safety
/// `doc` must be a live handle; `out` receives a new string.
#[no_mangle]
pub unsafe extern "C" fn deprov_assess_json(
    doc: *const DeProvDocument,
    out: *mut *mut c_char,
) -> DeProvStatus {
    match borrow_document(doc) {
        Ok(inner) => give_string(out, pretty(&assessment_to_json(&assess_document(inner)))),
        Err(status) => status,
    }
}

unsafe fn chain_json(
    doc: *const DeProvDocument,
    node: *const c_char,
    out: *mut *mut c_char,
    forward: bool,
) -> DeProvStatus {
    let inner = match borrow_document(doc) {
        Ok(inner) => inner,
        Err(status) => return status,
    };
    let node = match read_str(node) {
        Ok(node) => node,
        Err(status) => return status,
    };
    let id = match node.parse::<QualifiedName>() {
        Ok(id) => id,
        Err(err) => return fail(DeProvStatus::InvalidArgument, &err.to_string()),
    };
    let result = if forward {
        forward_chain(inner, &id)
    } else {
        backward_chain(inner, &id)
    };
    match result {
        Ok(chain) => give_string(out, pretty(&chain.to_json())),
        Err(err) => fail(DeProvStatus::UnknownNode, &err.to_string()),
    }
}

/// Downstream chain from `node`, as JSON.
///
/// # Safety
/// `doc` must be a live handle; `node` a valid C string; `out` receives a
/// new string.
#[no_mangle]
pub unsafe extern "C" fn deprov_forward_chain_json(
    doc: *const DeProvDocument,
    node: *const c_char,
    out: *mut *mut c_char,
) -> DeProvStatus {
    chain_json(doc, node, out, true)
}

/// Upstream chain from `node`, as JSON.
///
/// # Safety
/// As for [`deprov_forward_chain_json`].
#[no_mangle]
pub unsafe extern "C" fn deprov_backward_chain_json(
    doc: *const DeProvDocument,
    node: *const c_char,
    out: *mut *mut c_char,
) -> DeProvStatus {
    chain_json(doc, node, out, false)
}

/// Controllers of an environment (direct and inherited), as JSON.
///
/// # Safety
/// As for [`deprov_forward_chain_json`].
#[no_mangle]
pub unsafe extern "C" fn deprov_controllers_json(
    doc: *const DeProvDocument,
    env: *const c_char,
    out: *mut *mut c_char,
) -> DeProvStatus {
    let inner = match borrow_document(doc) {
        Ok(inner) => inner,
        Err(status) => return status,
    };
    let env = match read_str(env) {
        Ok(env) => env,
        Err(status) => return status,
    };
    let id = match env.parse::<QualifiedName>() {
        Ok(id) => id,
        Err(err) => return fail(DeProvStatus::InvalidArgument, &err.to_string()),
    };
    match controllers_of(inner, &id) {
        Ok(controllers) => give_string(out, pretty(&controllers_to_json(&controllers))),
        Err(err) => fail(DeProvStatus::UnknownNode, &err.to_string()),
    }
}

/// The constant 8x4 requirement-support matrix, as JSON.
///
/// # Safety
/// `out` must be a valid pointer; it receives a new string.
#[no_mangle]
pub unsafe extern "C" fn deprov_support_matrix_json(out: *mut *mut c_char) -> DeProvStatus {
    give_string(out, pretty(&SupportMatrix::to_json()))
}
