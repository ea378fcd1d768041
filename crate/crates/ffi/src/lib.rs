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


//! C interface to `lognull`.
//!
//! Every function returns a [`LognullStatus`]; on failure the message is
//! available from [`lognull_last_error`] on the same thread. Objects are
//! opaque handles owned by the caller and released with the matching
//! `*_free` function. Strings are NUL-terminated UTF-8.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lognull::datasets::Dataset;
use lognull::io::{load_edge_list, load_partition, VertexLabels};
use lognull::metrics::similarity;
use lognull::models::{EstimatedParams, ModelKind};
use lognull::run::{detect, loglik_table, RunSpec, Strategy};
use lognull::{Error, Graph, Partition};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LognullStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Validation = 4,
    Domain = 5,
    DegeneratePartition = 6,
    UndefinedGamma = 7,
    Config = 8,
    NoValidPartition = 9,
    Io = 10,
    BufferTooSmall = 11,
    Panic = 12,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LognullModel {
    SimpleModularity = 0,
    Modularity = 1,
    Ppm = 2,
    Dcppm = 3,
    Ilfr = 4,
    Ilfrs = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LognullStrategy {
    Iterative = 0,
    Max = 1,
    Fixed = 2,
}

/// Fitted parameters. Values a model does not use are NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct LognullParams {
    pub p_in: f64,
    pub p_out: f64,
    pub mu: f64,
    pub gamma: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct LognullSimilarity {
    pub nmi: f64,
    pub rand: f64,
    pub jaccard: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct LognullDetectSummary {
    pub params: LognullParams,
    /// NaN for the modularities.
    pub loglik: f64,
    /// Modularity at resolution 1.
    pub modularity: f64,
    pub search_param: f64,
    pub communities: usize,
    pub evaluations: usize,
}

/// A graph together with its vertex labels.
pub struct LognullGraph {
    graph: Graph,
    labels: VertexLabels,
}

pub struct LognullPartition {
    partition: Partition,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).expect("NUL bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(message));
}

fn status_of(error: &Error) -> LognullStatus {
    match error {
        Error::Parse { .. } => LognullStatus::Parse,
        Error::Validation(_) => LognullStatus::Validation,
        Error::Domain(_) => LognullStatus::Domain,
        Error::DegeneratePartition(_) => LognullStatus::DegeneratePartition,
        Error::UndefinedGamma => LognullStatus::UndefinedGamma,
        Error::Config(_) => LognullStatus::Config,
        Error::NoValidPartition => LognullStatus::NoValidPartition,
        Error::Io(_) => LognullStatus::Io,
    }
}

struct Failure(LognullStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> LognullStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => LognullStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            LognullStatus::Panic
        }
    }
}

unsafe fn reference<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, Failure> {
    ptr.as_ref()
        .ok_or_else(|| Failure(LognullStatus::NullPointer, format!("{what} is null")))
}

unsafe fn text<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(Failure(LognullStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|e| Failure(LognullStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(LognullStatus::NullPointer, "output pointer is null".into()));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(LognullStatus::NullPointer, "output pointer is null".into()));
    }
    *out = value;
    Ok(())
}

fn model_kind(model: LognullModel) -> ModelKind {
    match model {
        LognullModel::SimpleModularity => ModelKind::SimpleModularity,
        LognullModel::Modularity => ModelKind::Modularity,
        LognullModel::Ppm => ModelKind::Ppm,
        LognullModel::Dcppm => ModelKind::Dcppm,
        LognullModel::Ilfr => ModelKind::Ilfr,
        LognullModel::Ilfrs => ModelKind::Ilfrs,
    }
}

fn params(p: EstimatedParams) -> LognullParams {
    LognullParams {
        p_in: p.p_in.unwrap_or(f64::NAN),
        p_out: p.p_out.unwrap_or(f64::NAN),
        mu: p.mu.unwrap_or(f64::NAN),
        gamma: p.gamma.unwrap_or(f64::NAN),
    }
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn lognull_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn lognull_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses an edge list (`u v` per line, `#` comments).
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lognull_graph_from_edge_list(
    text: *const c_char,
    out: *mut *mut LognullGraph,
) -> LognullStatus {
    guard(|| {
        let (graph, labels) = load_edge_list(self::text(text, "text")?)?;
        store(out, LognullGraph { graph, labels })
    })
}

/// Loads a bundled dataset: `karate`, `dolphins` or `football`. When
/// `truth` is not null it receives the ground-truth partition.
///
/// # Safety
/// `name` must be a valid NUL-terminated string; `out` must be valid and
/// `truth` valid or null.
#[no_mangle]
pub unsafe extern "C" fn lognull_graph_from_dataset(
    name: *const c_char,
    out: *mut *mut LognullGraph,
    truth: *mut *mut LognullPartition,
) -> LognullStatus {
    guard(|| {
        let name = text(name, "name")?;
        let dataset = Dataset::ALL
            .into_iter()
            .find(|d| d.name() == name)
            .ok_or_else(|| Failure(LognullStatus::Validation, format!("unknown dataset {name:?}")))?;
        let loaded = dataset.load();
        if out.is_null() {
            return Err(Failure(LognullStatus::NullPointer, "output pointer is null".into()));
        }
        if !truth.is_null() {
            store(truth, LognullPartition { partition: loaded.ground_truth })?;
        }
        store(out, LognullGraph { graph: loaded.graph, labels: loaded.labels })
    })
}

/// # Safety
/// `graph` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lognull_graph_free(graph: *mut LognullGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// # Safety
/// `graph` must be a valid handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn lognull_graph_vertex_count(graph: *const LognullGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.graph.vertex_count())
}

/// Total edge weight. NaN for a null handle.
///
/// # Safety
/// `graph` must be a valid handle or null.
#[no_mangle]
pub unsafe extern "C" fn lognull_graph_total_weight(graph: *const LognullGraph) -> f64 {
    graph.as_ref().map_or(f64::NAN, |g| g.graph.total_weight())
}

/// Parses `vertex community` lines against the graph's vertex labels.
///
/// # Safety
/// `graph` must be a valid handle, `text` a NUL-terminated string and `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lognull_partition_from_text(
    graph: *const LognullGraph,
    text: *const c_char,
    out: *mut *mut LognullPartition,
) -> LognullStatus {
    guard(|| {
        let graph = reference(graph, "graph")?;
        let partition = load_partition(self::text(text, "text")?, &graph.labels)?;
        store(out, LognullPartition { partition })
    })
}

/// Builds a partition from community labels indexed by vertex id.
///
/// # Safety
/// `labels` must point to `len` values (or be null with `len` 0) and `out`
/// must be valid.
#[no_mangle]
pub unsafe extern "C" fn lognull_partition_from_labels(
    labels: *const usize,
    len: usize,
    out: *mut *mut LognullPartition,
) -> LognullStatus {
    guard(|| {
        let labels = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(reference(labels, "labels")?, len)
        };
        store(out, LognullPartition { partition: Partition::from_assignment(labels.iter().copied()) })
    })
}

/// # Safety
/// `partition` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lognull_partition_free(partition: *mut LognullPartition) {
    if !partition.is_null() {
        drop(Box::from_raw(partition));
    }
}

/// # Safety
/// `partition` must be a valid handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn lognull_partition_len(partition: *const LognullPartition) -> usize {
    partition.as_ref().map_or(0, |p| p.partition.len())
}

/// # Safety
/// `partition` must be a valid handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn lognull_partition_num_communities(partition: *const LognullPartition) -> usize {
    partition.as_ref().map_or(0, |p| p.partition.num_communities())
}

/// Copies community ids (dense, first-appearance order) into `buffer`,
/// which must hold at least `lognull_partition_len` values.
///
/// # Safety
/// `partition` must be valid and `buffer` must point to `capacity` writable
/// values.
#[no_mangle]
pub unsafe extern "C" fn lognull_partition_assignment(
    partition: *const LognullPartition,
    buffer: *mut usize,
    capacity: usize,
) -> LognullStatus {
    guard(|| {
        let ids = reference(partition, "partition")?.partition.assignment();
        if capacity < ids.len() {
            return Err(Failure(
                LognullStatus::BufferTooSmall,
                format!("need {} values, got {capacity}", ids.len()),
            ));
        }
        if !ids.is_empty() {
            if buffer.is_null() {
                return Err(Failure(LognullStatus::NullPointer, "buffer is null".into()));
            }
            ptr::copy_nonoverlapping(ids.as_ptr(), buffer, ids.len());
        }
        Ok(())
    })
}

/// Fits `model` to the partition and returns the quality at the fitted
/// parameters. The modularities are evaluated at resolution 1.
///
/// # Safety
/// Handles must be valid; `value` must be valid and `fitted` valid or null.
#[no_mangle]
pub unsafe extern "C" fn lognull_loglik(
    graph: *const LognullGraph,
    partition: *const LognullPartition,
    model: LognullModel,
    value: *mut f64,
    fitted: *mut LognullParams,
) -> LognullStatus {
    guard(|| {
        let graph = reference(graph, "graph")?;
        let partition = reference(partition, "partition")?;
        let kind = model_kind(model);
        let rows = loglik_table(&graph.graph, &partition.partition)?;
        let row = rows.into_iter().find(|r| r.model == kind).expect("every model has a row");
        write(value, row.value)?;
        if !fitted.is_null() {
            *fitted = params(row.params);
        }
        Ok(())
    })
}

/// Runs a detection. `param` is the resolution or mixing value for the
/// fixed strategy and is ignored otherwise.
///
/// # Safety
/// `graph` must be valid, `out` valid, and `summary` valid or null.
#[no_mangle]
pub unsafe extern "C" fn lognull_detect(
    graph: *const LognullGraph,
    model: LognullModel,
    strategy: LognullStrategy,
    param: f64,
    seed: u64,
    out: *mut *mut LognullPartition,
    summary: *mut LognullDetectSummary,
) -> LognullStatus {
    guard(|| {
        let graph = reference(graph, "graph")?;
        let strategy = match strategy {
            LognullStrategy::Iterative => Strategy::Iterative,
            LognullStrategy::Max => Strategy::Max,
            LognullStrategy::Fixed => Strategy::Fixed,
        };
        let mut spec = RunSpec::new(model_kind(model), strategy, seed);
        if strategy == Strategy::Fixed {
            spec.param = Some(param);
        }
        if out.is_null() {
            return Err(Failure(LognullStatus::NullPointer, "output pointer is null".into()));
        }
        let run = detect(&graph.graph, &spec, "", None)?;
        if !summary.is_null() {
            let r = &run.record;
            *summary = LognullDetectSummary {
                params: params(r.params),
                loglik: r.loglik.unwrap_or(f64::NAN),
                modularity: r.modularity,
                search_param: r.search_param,
                communities: r.communities,
                evaluations: r.evaluations,
            };
        }
        store(out, LognullPartition { partition: run.partition })
    })
}

/// NMI, Rand and Jaccard indices of two partitions of the same vertices.
///
/// # Safety
/// Handles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn lognull_similarity(
    first: *const LognullPartition,
    second: *const LognullPartition,
    out: *mut LognullSimilarity,
) -> LognullStatus {
    guard(|| {
        let a = reference(first, "first")?;
        let b = reference(second, "second")?;
        let s = similarity(&a.partition, &b.partition)?;
        write(out, LognullSimilarity { nmi: s.nmi, rand: s.rand, jaccard: s.jaccard })
    })
}
