use std::ffi::{c_char, CStr, CString};
use std::ptr;

use mdmkit_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 256];
    let n = unsafe { mdm_last_error_message(buf.as_mut_ptr(), buf.len()) };
    let s = unsafe { CStr::from_ptr(buf.as_ptr()) }
        .to_str()
        .unwrap()
        .to_string();
    assert_eq!(s.len(), n.min(255));
    s
}

#[test]
fn network_round_trip() {
    let coords = [0.0, 0.0, 3.0, 0.0, 3.0, 4.0];
    let edges = [0usize, 1, 1, 2];
    let mut net = ptr::null_mut();
    unsafe {
        assert_eq!(
            mdm_network_new(coords.as_ptr(), 3, 2, edges.as_ptr(), 2, &mut net),
            MdmStatus::Ok
        );
        let mut len = 0.0;
        assert_eq!(mdm_network_length(net, &mut len), MdmStatus::Ok);
        assert_eq!(len, 7.0);
        let (mut n, mut e, mut d) = (0, 0, 0);
        assert_eq!(
            mdm_network_shape(net, &mut n, &mut e, &mut d),
            MdmStatus::Ok
        );
        assert_eq!((n, e, d), (3, 2, 2));

        let mut need = 0;
        let mut small = [0.0; 2];
        assert_eq!(
            mdm_network_nodes(net, small.as_mut_ptr(), 2, &mut need),
            MdmStatus::BufferTooSmall
        );
        assert_eq!(need, 6);
        let mut buf = [0.0; 6];
        assert_eq!(
            mdm_network_nodes(net, buf.as_mut_ptr(), 6, &mut need),
            MdmStatus::Ok
        );
        assert_eq!(buf, coords);
        let mut ebuf = [0usize; 4];
        assert_eq!(
            mdm_network_edges(net, ebuf.as_mut_ptr(), 4, &mut need),
            MdmStatus::Ok
        );
        assert_eq!(ebuf, edges);

        let m = [3.0, 5.0];
        let mut cov = 0.0;
        assert_eq!(
            mdm_coverage_radius(net, m.as_ptr(), 1, &mut cov),
            MdmStatus::Ok
        );
        assert_eq!(cov, 1.0);
        mdm_network_free(net);
    }
}

#[test]
fn errors_set_status_and_message() {
    let coords = [0.0, 0.0, 1.0, 0.0];
    let bad_edges = [0usize, 5];
    let mut net = ptr::null_mut();
    unsafe {
        let s = mdm_network_new(coords.as_ptr(), 2, 2, bad_edges.as_ptr(), 1, &mut net);
        assert_eq!(s, MdmStatus::ComputationFailed);
        assert!(net.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(
            mdm_network_new(coords.as_ptr(), 2, 4, ptr::null(), 0, &mut net),
            MdmStatus::InvalidArgument
        );
        assert!(last_error().contains("dimension"));
        assert_eq!(
            mdm_network_length(ptr::null(), ptr::null_mut()),
            MdmStatus::NullPointer
        );
        let mut x = 0.0;
        assert_eq!(
            mdm_lower_bound_volume(1.0, -1.0, 2, &mut x),
            MdmStatus::InvalidArgument
        );
        // a successful call clears the message
        assert_eq!(mdm_lower_bound_volume(1.0, 0.1, 2, &mut x), MdmStatus::Ok);
        assert_eq!(last_error(), "");
        mdm_network_free(ptr::null_mut());
        mdm_tree_set_free(ptr::null_mut());
        mdm_string_free(ptr::null_mut());
    }
}

#[test]
fn square_has_two_steiner_trees() {
    let sq = [0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0];
    let mut set = ptr::null_mut();
    unsafe {
        assert_eq!(mdm_steiner_tree(sq.as_ptr(), 4, 2, &mut set), MdmStatus::Ok);
        let mut count = 0;
        assert_eq!(mdm_tree_set_count(set, &mut count), MdmStatus::Ok);
        assert_eq!(count, 2);
        let mut len = 0.0;
        assert_eq!(mdm_tree_set_length(set, &mut len), MdmStatus::Ok);
        assert!((len - (1.0 + 3f64.sqrt())).abs() < 1e-9);
        let mut net = ptr::null_mut();
        assert_eq!(mdm_tree_set_network(set, 1, &mut net), MdmStatus::Ok);
        let mut nl = 0.0;
        assert_eq!(mdm_network_length(net, &mut nl), MdmStatus::Ok);
        assert!((nl - len).abs() < 1e-12);
        mdm_network_free(net);
        assert_eq!(
            mdm_tree_set_network(set, 2, &mut net),
            MdmStatus::InvalidArgument
        );
        mdm_tree_set_free(set);
    }
}

#[test]
fn triangle_solver_and_truncation_agree() {
    let tri = [0.0, 0.0, 1.0, 0.0, 0.5, 3f64.sqrt() / 2.0];
    let expected = 3f64.sqrt() - 0.15;
    unsafe {
        let mut set = ptr::null_mut();
        assert_eq!(
            mdm_solve_finite(tri.as_ptr(), 3, 2, 0.05, &mut set),
            MdmStatus::Ok
        );
        let mut len = 0.0;
        mdm_tree_set_length(set, &mut len);
        assert!((len - expected).abs() < 1e-6);
        mdm_tree_set_free(set);

        let mut net = ptr::null_mut();
        assert_eq!(
            mdm_truncate_full_steiner(tri.as_ptr(), 3, 2, 0.05, &mut net),
            MdmStatus::Ok
        );
        let mut cov = 0.0;
        assert_eq!(
            mdm_coverage_radius(net, tri.as_ptr(), 3, &mut cov),
            MdmStatus::Ok
        );
        assert!((cov - 0.05).abs() < 1e-9);
        mdm_network_free(net);
    }
}

#[test]
fn bounds_and_tubes() {
    let sq = [0.0, 0.0, 2.0, 0.0, 2.0, 2.0, 0.0, 2.0];
    unsafe {
        let mut b = 0.0;
        assert_eq!(
            mdm_lower_bound_perimeter(sq.as_ptr(), 4, 0.1, &mut b),
            MdmStatus::Ok
        );
        assert!((b - 3.68584).abs() < 1e-5);

        let seg = [0.0, 0.0, 1.0, 0.0];
        let mut net = ptr::null_mut();
        mdm_network_new(seg.as_ptr(), 2, 2, [0usize, 1].as_ptr(), 1, &mut net);
        let exact = 2.0 * 0.1 + std::f64::consts::PI * 0.01;
        let mut area = 0.0;
        assert_eq!(mdm_tube_area_2d(net, 0.1, &mut area), MdmStatus::Ok);
        assert!((area - exact).abs() < 1e-12);
        let mut perim = 0.0;
        assert_eq!(mdm_boundary_length_2d(net, 0.1, &mut perim), MdmStatus::Ok);
        assert!((perim - (2.0 + 0.2 * std::f64::consts::PI)).abs() < 1e-12);
        let (mut est, mut ci) = (0.0, 0.0);
        assert_eq!(
            mdm_tube_volume_mc(net, 0.1, 200_000, 42, &mut est, &mut ci),
            MdmStatus::Ok
        );
        assert!((est - exact).abs() <= ci);
        mdm_network_free(net);
    }
}

#[test]
fn json_runner() {
    let cmd = CString::new("bounds").unwrap();
    let input = CString::new(r#"{"polygon": [[0,0],[2,0],[2,2],[0,2]], "r": 0.1}"#).unwrap();
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(
            mdm_run_json(cmd.as_ptr(), input.as_ptr(), 42, 1000, &mut out),
            MdmStatus::Ok
        );
        let doc: serde_json::Value =
            serde_json::from_str(CStr::from_ptr(out).to_str().unwrap()).unwrap();
        assert_eq!(doc["seed"], 42);
        assert!((doc["result"]["perimeter_bound"].as_f64().unwrap() - 3.68584).abs() < 1e-5);
        mdm_string_free(out);

        let validate = CString::new("validate").unwrap();
        let cycle = CString::new(
            r#"{"network": {"nodes": [[0,0],[1,0],[0,1]], "edges": [[0,1],[1,2],[2,0]]}}"#,
        )
        .unwrap();
        assert_eq!(
            mdm_run_json(validate.as_ptr(), cycle.as_ptr(), 42, 1000, &mut out),
            MdmStatus::Violations
        );
        assert!(!out.is_null());
        mdm_string_free(out);

        let nope = CString::new("nope").unwrap();
        assert_eq!(
            mdm_run_json(nope.as_ptr(), input.as_ptr(), 42, 1000, &mut out),
            MdmStatus::InvalidArgument
        );
        let junk = CString::new("{").unwrap();
        assert_eq!(
            mdm_run_json(cmd.as_ptr(), junk.as_ptr(), 42, 1000, &mut out),
            MdmStatus::ComputationFailed
        );
        assert!(last_error().contains("schema"));
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(mdm_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
