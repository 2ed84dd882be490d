//! Exercises the C ABI from Rust: handle lifecycle, error codes, and the
//! JSON query surfaces.

use std::ffi::{CStr, CString};
use std::ptr;

use de_prov_ffi::*;

fn cstring(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(ptr: *mut std::ffi::c_char) -> String {
    assert!(!ptr.is_null());
    let out = CStr::from_ptr(ptr).to_str().unwrap().to_owned();
    deprov_string_free(ptr);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(deprov_last_error_message())
        .to_str()
        .unwrap()
        .to_owned()
}

#[test]
fn fixture_round_trips_through_the_abi() {
    unsafe {
        let mut doc: *mut DeProvDocument = ptr::null_mut();
        let status = deprov_fixture(
            cstring("gond-nrds").as_ptr(),
            cstring("bundles+").as_ptr(),
            &mut doc,
        );
        assert_eq!(status, DeProvStatus::Ok);
        assert!(!doc.is_null());

        let mut text: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(deprov_to_provn(doc, &mut text), DeProvStatus::Ok);
        let provn = take_string(text);
        assert!(provn.starts_with("document"));

        let mut reparsed: *mut DeProvDocument = ptr::null_mut();
        let status = deprov_parse_text(cstring(&provn).as_ptr(), &mut reparsed);
        assert_eq!(status, DeProvStatus::Ok);

        let mut mode: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(deprov_document_mode(reparsed, &mut mode), DeProvStatus::Ok);
        assert_eq!(take_string(mode), "bundles+");

        let mut json: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(deprov_to_json(doc, &mut json), DeProvStatus::Ok);
        let json_text = take_string(json);
        let mut from_json: *mut DeProvDocument = ptr::null_mut();
        assert_eq!(
            deprov_parse_json(cstring(&json_text).as_ptr(), &mut from_json),
            DeProvStatus::Ok
        );

        deprov_document_free(doc);
        deprov_document_free(reparsed);
        deprov_document_free(from_json);
    }
}

#[test]
fn parse_error_sets_status_and_message() {
    unsafe {
        let mut doc: *mut DeProvDocument = ptr::null_mut();
        let status = deprov_parse_text(cstring("document entity(??)").as_ptr(), &mut doc);
        assert_eq!(status, DeProvStatus::ParseError);
        assert!(doc.is_null());
        assert!(last_error().contains("expected"));
    }
}

#[test]
fn schema_error_reports_json_pointer_path() {
    unsafe {
        let broken = r#"{"mode": "bundles+", "relations": [{"kind": "nope", "subject": "a:b", "object": "a:c"}], "prefixes": {"a": "http://e.com/"}}"#;
        let mut doc: *mut DeProvDocument = ptr::null_mut();
        let status = deprov_parse_json(cstring(broken).as_ptr(), &mut doc);
        assert_eq!(status, DeProvStatus::SchemaError);
        assert!(last_error().contains("/relations/0/kind"));
    }
}

#[test]
fn validation_and_queries_over_the_abi() {
    unsafe {
        let mut doc: *mut DeProvDocument = ptr::null_mut();
        assert_eq!(
            deprov_fixture(
                cstring("gond-nrds").as_ptr(),
                cstring("bundles+").as_ptr(),
                &mut doc,
            ),
            DeProvStatus::Ok
        );

        let mut valid = false;
        assert_eq!(deprov_document_is_valid(doc, &mut valid), DeProvStatus::Ok);
        assert!(valid);

        let mut report: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(deprov_validate_json(doc, &mut report), DeProvStatus::Ok);
        let report: serde_json::Value = serde_json::from_str(&take_string(report)).unwrap();
        assert_eq!(report["verdict"], "valid");

        let mut chain: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(
            deprov_backward_chain_json(doc, cstring("open:publication_lab1").as_ptr(), &mut chain),
            DeProvStatus::Ok
        );
        let chain: serde_json::Value = serde_json::from_str(&take_string(chain)).unwrap();
        assert!(chain["contracts"]
            .as_array()
            .unwrap()
            .iter()
            .any(|c| c == "ex:contract_gond_nrds"));

        let mut controllers: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(
            deprov_controllers_json(doc, cstring("ex:lab1").as_ptr(), &mut controllers),
            DeProvStatus::Ok
        );
        let controllers: serde_json::Value =
            serde_json::from_str(&take_string(controllers)).unwrap();
        assert!(controllers.as_array().unwrap().len() >= 2);

        let status = deprov_forward_chain_json(
            doc,
            cstring("ex:ghost_node").as_ptr(),
            &mut ptr::null_mut(),
        );
        assert_eq!(status, DeProvStatus::UnknownNode);

        deprov_document_free(doc);
    }
}

#[test]
fn unsupported_feature_surfaces_through_status() {
    unsafe {
        let mut doc: *mut DeProvDocument = ptr::null_mut();
        assert_eq!(
            deprov_fixture(
                cstring("gond-nrds").as_ptr(),
                cstring("namespaces+").as_ptr(),
                &mut doc,
            ),
            DeProvStatus::Ok
        );
        let mut text: *mut std::ffi::c_char = ptr::null_mut();
        let status = deprov_export_flattened(doc, &mut text);
        assert_eq!(status, DeProvStatus::UnsupportedFeature);
        deprov_document_free(doc);
    }
}

#[test]
fn null_arguments_are_rejected_not_crashed() {
    unsafe {
        let mut doc: *mut DeProvDocument = ptr::null_mut();
        assert_eq!(
            deprov_parse_text(ptr::null(), &mut doc),
            DeProvStatus::NullPointer
        );
        let mut out: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(deprov_to_provn(ptr::null(), &mut out), DeProvStatus::NullPointer);
        deprov_document_free(ptr::null_mut());
        deprov_string_free(ptr::null_mut());
        let mut matrix: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(deprov_support_matrix_json(&mut matrix), DeProvStatus::Ok);
        let matrix: serde_json::Value = serde_json::from_str(&take_string(matrix)).unwrap();
        assert_eq!(matrix["rows"].as_array().unwrap().len(), 8);
    }
}

#[test]
fn invalid_fixture_and_mode_names() {
    unsafe {
        let mut doc: *mut DeProvDocument = ptr::null_mut();
        assert_eq!(
            deprov_fixture(
                cstring("nope").as_ptr(),
                cstring("bundles+").as_ptr(),
                &mut doc
            ),
            DeProvStatus::InvalidArgument
        );
        assert_eq!(
            deprov_fixture(
                cstring("gond-nrds").as_ptr(),
                cstring("bogus-mode").as_ptr(),
                &mut doc
            ),
            DeProvStatus::InvalidArgument
        );
    }
}
