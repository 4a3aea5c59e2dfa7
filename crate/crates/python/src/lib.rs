//! Python bindings: packed sequences, the three aligners, the read
//! simulator, and the traffic/utilization arithmetic.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use wavesw::baseline::align_one_baseline;
use wavesw::batch::run_batch;
use wavesw::engine::{AlignmentResult, AlignmentTask, Engine, EngineConfig};
use wavesw::oracle::oracle_align;
use wavesw::readsim::{generate_pair_texts, generate_reference, LengthSpec, SimProfile};
use wavesw::seqpack;
use wavesw::traffic::{predict_traffic, AccessGranularity, TrafficModel};
use wavesw::wavefront;

fn value_error<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Match/mismatch scores and affine gap penalties. `gap_open` is charged in
/// full on the first base of a gap and `gap_extend` on each continuation.
#[pyclass(name = "ScoringScheme", frozen, from_py_object)]
#[derive(Clone)]
struct PyScoringScheme {
    inner: wavesw::ScoringScheme,
}

#[pymethods]
impl PyScoringScheme {
    #[new]
    #[pyo3(signature = (match_score=1, mismatch_score=-4, gap_open=6, gap_extend=1))]
    fn new(
        match_score: i32,
        mismatch_score: i32,
        gap_open: i32,
        gap_extend: i32,
    ) -> PyResult<Self> {
        Ok(Self {
            inner: wavesw::ScoringScheme::new(match_score, mismatch_score, gap_open, gap_extend)
                .map_err(value_error)?,
        })
    }

    #[getter]
    fn match_score(&self) -> i32 {
        self.inner.match_score
    }

    #[getter]
    fn mismatch_score(&self) -> i32 {
        self.inner.mismatch_score
    }

    #[getter]
    fn gap_open(&self) -> i32 {
        self.inner.gap_open
    }

    #[getter]
    fn gap_extend(&self) -> i32 {
        self.inner.gap_extend
    }

    fn __repr__(&self) -> String {
        format!(
            "ScoringScheme(match_score={}, mismatch_score={}, gap_open={}, gap_extend={})",
            self.inner.match_score,
            self.inner.mismatch_score,
            self.inner.gap_open,
            self.inner.gap_extend
        )
    }
}

/// A nucleotide sequence packed 4 bits per base, 8 bases per 32-bit word.
#[pyclass(name = "PackedSequence", frozen)]
struct PyPackedSequence {
    inner: seqpack::PackedSequence,
}

#[pymethods]
impl PyPackedSequence {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: seqpack::PackedSequence::pack(text.as_bytes()).map_err(value_error)?,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn word_count(&self) -> usize {
        self.inner.word_count()
    }

    /// The 32-bit word holding bases [8*block_index, 8*block_index + 8).
    fn word(&self, block_index: usize) -> PyResult<u32> {
        self.inner.word(block_index).map_err(value_error)
    }

    /// Decode back to uppercase text (U folds to T).
    fn unpack(&self) -> PyResult<String> {
        let text = self.inner.unpack().map_err(value_error)?;
        Ok(String::from_utf8(text).expect("decoded bases are ASCII"))
    }

    fn __repr__(&self) -> String {
        format!("PackedSequence(length={})", self.inner.len())
    }
}

/// Best local score, end coordinates, and run instrumentation.
#[pyclass(name = "AlignResult", frozen)]
struct PyAlignResult {
    #[pyo3(get)]
    id: u64,
    #[pyo3(get)]
    score: i32,
    #[pyo3(get)]
    end_query: usize,
    #[pyo3(get)]
    end_target: usize,
    #[pyo3(get)]
    steps_taken: u64,
    counters: wavesw::TrafficCounters,
}

#[pymethods]
impl PyAlignResult {
    /// Boundary-traffic counters as a dict.
    fn counters<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        d.set_item(
            "boundary_cells_written",
            self.counters.boundary_cells_written,
        )?;
        d.set_item("boundary_cells_read", self.counters.boundary_cells_read)?;
        d.set_item("spill_transactions", self.counters.spill_transactions)?;
        d.set_item(
            "eager_transactions_equiv",
            self.counters.eager_transactions_equiv,
        )?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "AlignResult(id={}, score={}, end_query={}, end_target={})",
            self.id, self.score, self.end_query, self.end_target
        )
    }
}

impl From<AlignmentResult> for PyAlignResult {
    fn from(r: AlignmentResult) -> Self {
        Self {
            id: r.id,
            score: r.score,
            end_query: r.end_query,
            end_target: r.end_target,
            steps_taken: r.steps_taken,
            counters: r.counters,
        }
    }
}

fn parse_engine(name: &str) -> PyResult<Engine> {
    name.parse().map_err(value_error)
}

fn build_task(id: u64, query: &str, target: &str) -> PyResult<AlignmentTask> {
    Ok(AlignmentTask::new(
        id,
        seqpack::PackedSequence::pack(query.as_bytes()).map_err(value_error)?,
        seqpack::PackedSequence::pack(target.as_bytes()).map_err(value_error)?,
    ))
}

/// Align one pair. Engine is "wavefront", "baseline", or "oracle".
#[pyfunction]
#[pyo3(signature = (query, target, scheme=None, engine="wavefront", group_size=16))]
fn align(
    query: &str,
    target: &str,
    scheme: Option<PyScoringScheme>,
    engine: &str,
    group_size: usize,
) -> PyResult<PyAlignResult> {
    let scheme = scheme.map_or_else(
        || wavesw::ScoringScheme::new(1, -4, 6, 1).expect("default scheme is valid"),
        |s| s.inner,
    );
    let config = EngineConfig::new(parse_engine(engine)?, group_size).map_err(value_error)?;
    let task = build_task(0, query, target)?;
    let result = match config.engine {
        Engine::Wavefront => wavefront::align_one(&task, &scheme, &config),
        Engine::Baseline => align_one_baseline(&task, &scheme, &config),
        Engine::Oracle => oracle_align(&task, &scheme).map_err(value_error)?,
    };
    Ok(result.into())
}

/// Align many pairs on a worker pool; results come back in input order.
#[pyfunction]
#[pyo3(signature = (pairs, scheme=None, engine="wavefront", group_size=16, workers=1))]
fn align_batch(
    py: Python<'_>,
    pairs: Vec<(String, String)>,
    scheme: Option<PyScoringScheme>,
    engine: &str,
    group_size: usize,
    workers: usize,
) -> PyResult<Vec<PyAlignResult>> {
    let scheme = scheme.map_or_else(
        || wavesw::ScoringScheme::new(1, -4, 6, 1).expect("default scheme is valid"),
        |s| s.inner,
    );
    let config = EngineConfig::new(parse_engine(engine)?, group_size).map_err(value_error)?;
    let mut tasks = Vec::with_capacity(pairs.len());
    for (i, (query, target)) in pairs.iter().enumerate() {
        tasks.push(build_task(i as u64, query, target)?);
    }
    let report = py
        .detach(|| run_batch(&tasks, &scheme, &config, workers))
        .map_err(value_error)?;
    Ok(report.results.into_iter().map(Into::into).collect())
}

/// Simulate (query, target) text pairs; targets are substrings of a random
/// reference, queries carry substitutions and single-base indels.
#[pyfunction]
#[pyo3(signature = (count, length=250, sub_rate=0.01, ins_rate=0.001, del_rate=0.001,
                    seed=42, min_length=None, max_length=None, ref_length=0))]
#[allow(clippy::too_many_arguments)]
fn simulate_pairs(
    count: usize,
    length: usize,
    sub_rate: f64,
    ins_rate: f64,
    del_rate: f64,
    seed: u64,
    min_length: Option<usize>,
    max_length: Option<usize>,
    ref_length: usize,
) -> PyResult<Vec<(String, String)>> {
    let length = match (min_length, max_length) {
        (Some(min), Some(max)) => LengthSpec::Range { min, max },
        (None, None) => LengthSpec::Fixed(length),
        _ => {
            return Err(PyValueError::new_err(
                "pass both min_length and max_length, or neither",
            ))
        }
    };
    let profile = SimProfile {
        length,
        count,
        sub_rate,
        ins_rate,
        del_rate,
        seed,
    };
    profile.validate().map_err(value_error)?;
    let ref_length = if ref_length == 0 {
        4 * length.max()
    } else {
        ref_length
    };
    let reference = generate_reference(ref_length, seed).map_err(value_error)?;
    let pairs = generate_pair_texts(&reference, &profile).map_err(value_error)?;
    Ok(pairs
        .into_iter()
        .map(|p| {
            (
                String::from_utf8(p.query).expect("bases are ASCII"),
                String::from_utf8(p.target).expect("bases are ASCII"),
            )
        })
        .collect())
}

/// Storage/access volumes for an n x n single-lane table:
/// {necessary, stored, accessed}. Granularity is "pre_volta" (128 B) or
/// "post_volta" (32 B).
#[pyfunction]
#[pyo3(signature = (n, granularity="post_volta"))]
fn traffic_prediction<'py>(
    py: Python<'py>,
    n: u64,
    granularity: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let granularity = match granularity {
        "pre_volta" => AccessGranularity::PreVolta,
        "post_volta" => AccessGranularity::PostVolta,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown granularity {other:?}; expected pre_volta or post_volta"
            )))
        }
    };
    let p = predict_traffic(&TrafficModel { n, granularity });
    let d = PyDict::new(py);
    d.set_item("necessary", p.necessary)?;
    d.set_item("stored", p.stored)?;
    d.set_item("accessed", p.accessed)?;
    Ok(d)
}

/// Steps one group takes per chunk: Q + G - 1.
#[pyfunction]
fn chunk_steps(query_blocks: u64, group_size: u64) -> PyResult<u64> {
    if query_blocks == 0 || group_size == 0 {
        return Err(PyValueError::new_err(
            "query_blocks and group_size must be >= 1",
        ));
    }
    Ok(wavefront::chunk_steps(query_blocks, group_size))
}

/// Batched flush transactions per interior chunk bottom: ceil(Q / G).
#[pyfunction]
fn spill_flush_count(query_blocks: u64, group_size: u64) -> PyResult<u64> {
    if query_blocks == 0 || group_size == 0 {
        return Err(PyValueError::new_err(
            "query_blocks and group_size must be >= 1",
        ));
    }
    Ok(wavefront::spill_flush_count(query_blocks, group_size))
}

/// Lane utilization of a chunk sweep, exact:
/// {overall: (num, den), ramp_average: (num, den), main_loop_present}.
#[pyfunction]
fn phase_utilization<'py>(
    py: Python<'py>,
    query_blocks: u64,
    group_size: u64,
) -> PyResult<Bound<'py, PyDict>> {
    if query_blocks == 0 || group_size == 0 {
        return Err(PyValueError::new_err(
            "query_blocks and group_size must be >= 1",
        ));
    }
    let u = wavefront::phase_utilization(query_blocks, group_size);
    let d = PyDict::new(py);
    d.set_item("overall", (*u.overall.numer(), *u.overall.denom()))?;
    d.set_item(
        "ramp_average",
        (*u.ramp_average.numer(), *u.ramp_average.denom()),
    )?;
    d.set_item("main_loop_present", u.main_loop_present)?;
    Ok(d)
}

#[pymodule]
fn wavesw_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScoringScheme>()?;
    m.add_class::<PyPackedSequence>()?;
    m.add_class::<PyAlignResult>()?;
    m.add_function(wrap_pyfunction!(align, m)?)?;
    m.add_function(wrap_pyfunction!(align_batch, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_pairs, m)?)?;
    m.add_function(wrap_pyfunction!(traffic_prediction, m)?)?;
    m.add_function(wrap_pyfunction!(chunk_steps, m)?)?;
    m.add_function(wrap_pyfunction!(spill_flush_count, m)?)?;
    m.add_function(wrap_pyfunction!(phase_utilization, m)?)?;
    Ok(())
}
