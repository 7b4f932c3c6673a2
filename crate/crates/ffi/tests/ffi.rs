//! Exercises the C surface from Rust: statuses, ownership, and the
//! JSON payloads.

use std::ffi::{CStr, CString};
use std::ptr;

use pnlogic_ffi::*;

fn c(text: &str) -> CString {
    CString::new(text).unwrap()
}

unsafe fn take_string(raw: *mut std::ffi::c_char) -> String {
    assert!(!raw.is_null());
    let text = CStr::from_ptr(raw).to_str().unwrap().to_string();
    pn_string_free(raw);
    text
}

unsafe fn last_error() -> String {
    take_string(pn_last_error_message())
}

const K_MODEL: &str = r#"{ "worlds": 3,
  "order": [[2,0]],
  "nbhd":  { "0": [[0],[0,1,2]], "1": [[1]], "2": [[0,1,2]] },
  "valuation": { "p": [0], "q": [0,1] } }"#;

unsafe fn parse_formula(text: &str) -> *mut PnFormula {
    let mut out = ptr::null_mut();
    assert_eq!(pn_formula_parse(c(text).as_ptr(), &mut out), PnStatus::Ok);
    out
}

unsafe fn parse_model(text: &str) -> *mut PnModel {
    let mut out = ptr::null_mut();
    assert_eq!(pn_model_parse_json(c(text).as_ptr(), &mut out), PnStatus::Ok);
    out
}

#[test]
fn formula_parse_print_round_trip() {
    unsafe {
        let f = parse_formula("[] p ->p");
        assert_eq!(take_string(pn_formula_print(f)), "[]p -> p");
        pn_formula_free(f);
    }
}

#[test]
fn parse_errors_set_message() {
    unsafe {
        let mut out = ptr::null_mut();
        let status = pn_formula_parse(c("p ->").as_ptr(), &mut out);
        assert_eq!(status, PnStatus::ParseError);
        assert!(last_error().contains("offset 4"));
        assert_eq!(pn_formula_parse(ptr::null(), &mut out), PnStatus::NullPointer);
        assert_eq!(pn_formula_parse(c("p").as_ptr(), ptr::null_mut()), PnStatus::NullPointer);
    }
}

#[test]
fn model_evaluation_matches_expected_pattern() {
    unsafe {
        let m = parse_model(K_MODEL);
        assert_eq!(pn_model_world_count(m), 3);

        let boxed = parse_formula("[](p -> q)");
        let mut holds = false;
        assert_eq!(
            pn_forces(m, 2, boxed, PnBoxMode::Standard, &mut holds),
            PnStatus::Ok
        );
        assert!(holds);

        let k = parse_formula("[]p -> []q");
        assert_eq!(
            pn_forces(m, 2, k, PnBoxMode::Standard, &mut holds),
            PnStatus::Ok
        );
        assert!(!holds);

        let mut mask = 0u16;
        assert_eq!(
            pn_extension(m, boxed, PnBoxMode::Standard, &mut mask),
            PnStatus::Ok
        );
        assert_eq!(mask, 0b101);

        assert_eq!(
            pn_forces(m, 9, boxed, PnBoxMode::Standard, &mut holds),
            PnStatus::EvalError
        );
        assert!(last_error().contains("out of range"));

        pn_formula_free(boxed);
        pn_formula_free(k);
        pn_model_free(m);
    }
}

#[test]
fn model_check_reports_conditions() {
    unsafe {
        let m = parse_model(K_MODEL);
        let report = take_string(pn_model_check_json(m));
        let value: serde_json::Value = serde_json::from_str(&report).unwrap();
        let reports = value.as_array().unwrap();
        assert_eq!(reports.len(), 6);
        assert_eq!(reports[0]["condition"], "order-axioms");
        assert_eq!(reports[1]["condition"], "cond1");
        assert_eq!(reports[1]["holds"], true);
        pn_model_free(m);
    }
}

#[test]
fn model_parse_rejects_bad_files() {
    unsafe {
        let mut out = ptr::null_mut();
        let status = pn_model_parse_json(c(r#"{ "worlds": 0, "nbhd": {} }"#).as_ptr(), &mut out);
        assert_eq!(status, PnStatus::ParseError);
        assert!(last_error().contains("world count"));
    }
}

#[test]
fn search_returns_structured_outcome() {
    unsafe {
        let mut out = ptr::null_mut();
        let status = pn_search_countermodel_json(
            c("[](a -> b) -> ([]a -> []b)").as_ptr(),
            3,
            3,
            PnBoxMode::Standard,
            false,
            false,
            false,
            &mut out,
        );
        assert_eq!(status, PnStatus::Ok);
        let value: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(value["verdict"], "countermodel-found");
        assert!(value["countermodel"]["witness"]["world"].is_u64());

        let mut out = ptr::null_mut();
        let status = pn_search_countermodel_json(
            c("[]a -> a").as_ptr(),
            2,
            3,
            PnBoxMode::Standard,
            false,
            false,
            false,
            &mut out,
        );
        assert_eq!(status, PnStatus::Ok);
        let value: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(value["verdict"], "exhausted-no-countermodel");
        assert!(value["countermodel"].is_null());

        let mut out = ptr::null_mut();
        let status = pn_search_countermodel_json(
            c("[]a -> a").as_ptr(),
            12,
            3,
            PnBoxMode::Standard,
            false,
            false,
            false,
            &mut out,
        );
        assert_eq!(status, PnStatus::InvalidArgument);
        assert!(last_error().contains("max_worlds"));
    }
}

#[test]
fn proof_check_reports_first_error() {
    unsafe {
        let proof = "1: []p -> p ; axiom T\n2: p -> (q -> p) ; axiom A1\n3: q -> p ; mp 1 2\n";
        let mut out = ptr::null_mut();
        assert_eq!(pn_proof_check_json(c(proof).as_ptr(), &mut out), PnStatus::Ok);
        let value: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(value["valid"], false);
        assert_eq!(value["first_error"]["line"], 3);

        let mut out = ptr::null_mut();
        let status = pn_proof_check_json(c("1 p ; axiom T").as_ptr(), &mut out);
        assert_eq!(status, PnStatus::ParseError);
    }
}

#[test]
fn replication_summary_is_complete() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(pn_replicate_all_json(&mut out), PnStatus::Ok);
        let value: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(value["total"], 9);
        assert_eq!(value["passed"], 9);
    }
}

#[test]
fn frees_accept_null() {
    unsafe {
        pn_formula_free(ptr::null_mut());
        pn_model_free(ptr::null_mut());
        pn_string_free(ptr::null_mut());
        assert!(pn_formula_print(ptr::null()).is_null());
        assert!(pn_model_check_json(ptr::null()).is_null());
        assert_eq!(pn_model_world_count(ptr::null()), -1);
    }
}
