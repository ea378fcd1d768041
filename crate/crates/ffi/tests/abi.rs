// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.


use std::ffi::{CStr, CString};
use std::ptr;

use lognull_ffi::*;

fn last_error() -> String {
    let p = lognull_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn karate() -> (*mut LognullGraph, *mut LognullPartition) {
    let name = CString::new("karate").unwrap();
    let (mut g, mut t) = (ptr::null_mut(), ptr::null_mut());
    let status = unsafe { lognull_graph_from_dataset(name.as_ptr(), &mut g, &mut t) };
    assert_eq!(status, LognullStatus::Ok);
    (g, t)
}

#[test]
fn loglik_on_ground_truth() {
    let (g, t) = karate();
    unsafe {
        assert_eq!(lognull_graph_vertex_count(g), 34);
        assert_eq!(lognull_graph_total_weight(g), 78.0);
        let mut value = 0.0;
        let mut params = LognullParams { p_in: 0.0, p_out: 0.0, mu: 0.0, gamma: 0.0 };
        let status = lognull_loglik(g, t, LognullModel::Ppm, &mut value, &mut params);
        assert_eq!(status, LognullStatus::Ok);
        assert!((value + 206.12).abs() < 0.01);
        assert!((params.gamma - 0.78).abs() < 0.01);
        assert!(params.mu.is_nan());
        lognull_partition_free(t);
        lognull_graph_free(g);
    }
}

#[test]
fn detect_and_compare() {
    let text = CString::new("a b\nb c\na c\nc d\nd e\ne f\nd f\n").unwrap();
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(lognull_graph_from_edge_list(text.as_ptr(), &mut g), LognullStatus::Ok);
        let mut p = ptr::null_mut();
        let mut summary = std::mem::zeroed::<LognullDetectSummary>();
        let status = lognull_detect(g, LognullModel::Ilfrs, LognullStrategy::Max, f64::NAN, 1, &mut p, &mut summary);
        assert_eq!(status, LognullStatus::Ok);
        assert_eq!(summary.communities, 2);
        assert_eq!(lognull_partition_num_communities(p), 2);
        let mut ids = [0usize; 6];
        assert_eq!(lognull_partition_assignment(p, ids.as_mut_ptr(), 6), LognullStatus::Ok);
        assert_eq!(ids, [0, 0, 0, 1, 1, 1]);
        assert_eq!(lognull_partition_assignment(p, ids.as_mut_ptr(), 5), LognullStatus::BufferTooSmall);

        let labels = [7usize, 7, 7, 3, 3, 3];
        let mut q = ptr::null_mut();
        assert_eq!(lognull_partition_from_labels(labels.as_ptr(), 6, &mut q), LognullStatus::Ok);
        let mut s = LognullSimilarity { nmi: 0.0, rand: 0.0, jaccard: 0.0 };
        assert_eq!(lognull_similarity(p, q, &mut s), LognullStatus::Ok);
        assert_eq!((s.nmi, s.rand, s.jaccard), (1.0, 1.0, 1.0));
        lognull_partition_free(p);
        lognull_partition_free(q);
        lognull_graph_free(g);
    }
}

#[test]
fn errors_carry_status_and_message() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(lognull_graph_from_edge_list(ptr::null(), &mut g), LognullStatus::NullPointer);
        let bad = CString::new("a b c\n").unwrap();
        assert_eq!(lognull_graph_from_edge_list(bad.as_ptr(), &mut g), LognullStatus::Parse);
        assert!(last_error().contains("line 1"));
        let name = CString::new("nope").unwrap();
        let status = lognull_graph_from_dataset(name.as_ptr(), &mut g, ptr::null_mut());
        assert_eq!(status, LognullStatus::Validation);

        let (kg, _) = {
            let name = CString::new("karate").unwrap();
            let mut kg = ptr::null_mut();
            assert_eq!(lognull_graph_from_dataset(name.as_ptr(), &mut kg, ptr::null_mut()), LognullStatus::Ok);
            (kg, ())
        };
        let mut p = ptr::null_mut();
        let status = lognull_detect(kg, LognullModel::Ilfr, LognullStrategy::Fixed, 1.5, 0, &mut p, ptr::null_mut());
        assert_eq!(status, LognullStatus::Domain);
        assert!(p.is_null());
        let status = lognull_detect(kg, LognullModel::Modularity, LognullStrategy::Max, 0.0, 0, &mut p, ptr::null_mut());
        assert_eq!(status, LognullStatus::Config);

        let (a, b) = ([0usize, 1], [0usize, 0, 1]);
        let (mut pa, mut pb) = (ptr::null_mut(), ptr::null_mut());
        lognull_partition_from_labels(a.as_ptr(), 2, &mut pa);
        lognull_partition_from_labels(b.as_ptr(), 3, &mut pb);
        let mut s = std::mem::zeroed::<LognullSimilarity>();
        assert_eq!(lognull_similarity(pa, pb, &mut s), LognullStatus::Domain);
        assert!(lognull_partition_from_labels(ptr::null(), 0, &mut pa) == LognullStatus::Ok);
        lognull_partition_free(pa);
        lognull_partition_free(pb);
        lognull_graph_free(kg);
        lognull_graph_free(ptr::null_mut());
    }
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(lognull_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
