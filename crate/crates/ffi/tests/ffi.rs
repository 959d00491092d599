use std::ffi::{c_char, CStr, CString};
use std::ptr;

use peakcount_ffi::*;

unsafe fn take_string(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    pc_string_free(s);
    out
}

fn last_error() -> String {
    unsafe { take_string(pc_last_error()) }
}

fn election(ranks: &[u16], n: usize, m: usize) -> *mut PcElection {
    let mut e = ptr::null_mut();
    assert_eq!(
        unsafe { pc_election_new(ranks.as_ptr(), n, m, &mut e) },
        PcStatus::Ok
    );
    e
}

#[test]
fn kendall_tau_and_errors() {
    let mut d = 0;
    let (a, b) = ([1u16, 2, 3, 4], [4u16, 3, 2, 1]);
    unsafe {
        assert_eq!(
            pc_kendall_tau(a.as_ptr(), b.as_ptr(), 4, &mut d),
            PcStatus::Ok
        );
        assert_eq!(d, 6);
        let bad = [1u16, 1, 3, 4];
        assert_eq!(
            pc_kendall_tau(a.as_ptr(), bad.as_ptr(), 4, &mut d),
            PcStatus::InvalidArgument
        );
        assert!(!last_error().is_empty());
        assert_eq!(
            pc_kendall_tau(ptr::null(), b.as_ptr(), 4, &mut d),
            PcStatus::NullPointer
        );
        assert_eq!(
            pc_kendall_tau(a.as_ptr(), b.as_ptr(), 4, ptr::null_mut()),
            PcStatus::NullPointer
        );
    }
}

#[test]
fn recognition_through_handles() {
    let e = election(&[4, 5, 6, 3, 2, 7, 1, 3, 5, 4, 2, 6, 1, 7], 2, 7);
    unsafe {
        assert_eq!((pc_election_n(e), pc_election_m(e)), (2, 7));
        let (mut sp, mut axis) = (0, [0u16; 7]);
        assert_eq!(pc_recognize(e, 0, &mut sp, axis.as_mut_ptr()), PcStatus::Ok);
        assert_eq!(sp, 1);
        let mut sorted = axis;
        sorted.sort();
        assert_eq!(sorted, [1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(pc_recognize(e, 1, &mut sp, ptr::null_mut()), PcStatus::Ok);
        assert_eq!(sp, 1);
        let mut v = [0u16; 7];
        assert_eq!(pc_election_vote(e, 1, v.as_mut_ptr()), PcStatus::Ok);
        assert_eq!(v, [3, 5, 4, 2, 6, 1, 7]);
        assert_eq!(
            pc_election_vote(e, 2, v.as_mut_ptr()),
            PcStatus::InvalidArgument
        );
        pc_election_free(e);
    }

    let text = CString::new("# not single-peaked\n3 3\n2 3 1\n1 3 2\n1 2 3\n").unwrap();
    let mut e = ptr::null_mut();
    unsafe {
        assert_eq!(pc_election_parse(text.as_ptr(), &mut e), PcStatus::Ok);
        let mut sp = 7;
        assert_eq!(pc_recognize(e, 0, &mut sp, ptr::null_mut()), PcStatus::Ok);
        assert_eq!(sp, 0);
        let mut s = ptr::null_mut();
        assert_eq!(pc_election_to_string(e, &mut s), PcStatus::Ok);
        assert_eq!(take_string(s), "3 3\n2 3 1\n1 3 2\n1 2 3\n");
        pc_election_free(e);
    }
}

#[test]
fn malformed_input_is_rejected() {
    let mut e = ptr::null_mut();
    unsafe {
        assert_eq!(
            pc_election_new([1u16, 2, 2].as_ptr(), 1, 3, &mut e),
            PcStatus::InvalidArgument
        );
        assert!(e.is_null());
        let text = CString::new("2 3\n1 2 3\n").unwrap();
        assert_eq!(
            pc_election_parse(text.as_ptr(), &mut e),
            PcStatus::InvalidArgument
        );
        assert!(last_error().contains("line"));
        assert_eq!(
            pc_election_parse(ptr::null(), &mut e),
            PcStatus::NullPointer
        );
        pc_election_free(ptr::null_mut());
        pc_model_free(ptr::null_mut());
        pc_string_free(ptr::null_mut());
    }
}

#[test]
fn counts_and_capability() {
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(pc_sp_count(5, 3, &mut s), PcStatus::Ok);
        assert_eq!(take_string(s), "2976");
        assert_eq!(pc_sp_count(50, 10, &mut s), PcStatus::CapabilityExceeded);
        assert!(last_error().contains("capability"));
    }
}

#[test]
fn bounds_per_model() {
    let mut b = PcBounds::default();
    unsafe {
        let ic = pc_model_ic();
        assert_eq!(pc_bounds(ic, 5, 3, &mut b), PcStatus::Ok);
        assert_eq!(b.has_exact, 1);
        assert!((b.ln_exact.exp() - 2976.0 / 7776.0).abs() < 1e-12);
        assert_eq!(pc_bounds(ic, 50, 10, &mut b), PcStatus::Ok);
        assert_eq!((b.has_lower, b.has_upper), (1, 1));
        assert!(b.ln_lower < b.ln_upper);
        // 4.6e-189 <= p <= 5.5e-187
        assert!((b.ln_lower / std::f64::consts::LN_10 + 188.34).abs() < 0.01);
        pc_model_free(ic);

        let mut polya = ptr::null_mut();
        assert_eq!(pc_model_polya(120, &mut polya), PcStatus::Ok);
        assert_eq!(pc_bounds(polya, 10, 5, &mut b), PcStatus::Ok);
        assert!((b.ln_lower.exp() - 0.2697).abs() < 1e-3);
        assert_eq!(b.has_upper, 0);
        pc_model_free(polya);
        assert_eq!(pc_model_polya(0, &mut polya), PcStatus::InvalidArgument);

        let phi = CString::new("1/10").unwrap();
        let reference = [1u16, 2, 3, 4, 5];
        let mut mallows = ptr::null_mut();
        assert_eq!(
            pc_model_mallows(phi.as_ptr(), reference.as_ptr(), 5, &mut mallows),
            PcStatus::Ok
        );
        assert_eq!(pc_bounds(mallows, 10, 5, &mut b), PcStatus::Ok);
        assert!((b.ln_lower.exp() - 0.5909).abs() < 1e-3);
        assert_eq!(pc_bounds(mallows, 10, 6, &mut b), PcStatus::InvalidArgument);
        pc_model_free(mallows);
        let too_big = CString::new("1.5").unwrap();
        assert_eq!(
            pc_model_mallows(too_big.as_ptr(), reference.as_ptr(), 5, &mut mallows),
            PcStatus::InvalidArgument
        );
    }
}

#[test]
fn sampling_is_reproducible() {
    unsafe {
        let iac = pc_model_iac();
        let draw = |stream| {
            let mut e = ptr::null_mut();
            assert_eq!(pc_sample(iac, 4, 5, 99, stream, &mut e), PcStatus::Ok);
            let mut s = ptr::null_mut();
            assert_eq!(pc_election_to_string(e, &mut s), PcStatus::Ok);
            pc_election_free(e);
            take_string(s)
        };
        assert_eq!(draw(3), draw(3));
        assert_ne!(draw(3), draw(4));
        pc_model_free(iac);
    }
}

#[test]
fn estimate_matches_across_workers() {
    unsafe {
        let ic = pc_model_ic();
        let (mut a, mut b) = (PcEstimate::default(), PcEstimate::default());
        assert_eq!(pc_estimate(ic, 5, 3, 20_000, 5, 1, &mut a), PcStatus::Ok);
        assert_eq!(pc_estimate(ic, 5, 3, 20_000, 5, 4, &mut b), PcStatus::Ok);
        assert_eq!(a, b);
        assert!(a.ci_low <= a.estimate && a.estimate <= a.ci_high);
        assert!((a.estimate - 2976.0 / 7776.0).abs() < 0.02);
        assert_eq!(
            pc_estimate(ic, 5, 3, 0, 5, 1, &mut a),
            PcStatus::InvalidArgument
        );
        pc_model_free(ic);
    }
}

#[test]
fn header_declares_the_api() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/peakcount.h"))
            .unwrap();
    for name in [
        "PcStatus",
        "PC_STATUS_CAPABILITY_EXCEEDED",
        "typedef struct PcElection PcElection",
        "pc_election_new",
        "pc_recognize",
        "pc_bounds",
        "pc_estimate",
        "pc_last_error",
        "pc_string_free",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}
