//! Parameter sweeps with deterministic, diff-able output.
//!
//! Records are computed in parallel and emitted in spec order: task by task,
//! then lexicographically over `(α, r, β, n)`. Each task only ranges over the
//! axes it depends on. A failing grid point becomes an error record.

use std::collections::BTreeMap;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::extremal::{choose_delta, verify_equality_case};
use crate::kernel::{TailKernel, DEFAULT_KERNEL_TOL};
use crate::norms::{l1_norm_tail_kernel, lebesgue_constant};
use crate::params::{validate_params, Exponent, KernelParams};
use crate::sequences::{check_abs_monotone, DEFAULT_K_MAX, DEFAULT_M_MAX};
use crate::thresholds::{ThresholdSet, DEFAULT_CEILING};
use crate::zeros::{corollary_brackets, locate_zeros, route_for, Route, DEFAULT_ZERO_TOL};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Thresholds,
    Zeros,
    Norm,
    GammaTrack,
    Lebesgue,
    Extremal,
    Monotone,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Thresholds => "thresholds",
            Task::Zeros => "zeros",
            Task::Norm => "norm",
            Task::GammaTrack => "gamma-track",
            Task::Lebesgue => "lebesgue",
            Task::Extremal => "extremal",
            Task::Monotone => "monotone",
        }
    }

    fn uses_params(self) -> bool {
        self != Task::Lebesgue
    }

    fn uses_beta(self) -> bool {
        matches!(self, Task::Zeros | Task::Norm | Task::GammaTrack | Task::Extremal)
    }

    fn uses_n(self) -> bool {
        !matches!(self, Task::Thresholds | Task::Monotone)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Axes {
    pub alpha: Vec<f64>,
    pub r: Vec<f64>,
    pub beta: Vec<f64>,
    pub n: Vec<u64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Output {
    /// Written when present.
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub axes: Axes,
    pub tasks: Vec<Task>,
    #[serde(default)]
    pub output: Output,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_tol() -> f64 {
    DEFAULT_KERNEL_TOL
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Every `(α, r, β)` combination and every `n` must be admissible.
    pub fn validate(&self) -> Result<()> {
        for &a in &self.axes.alpha {
            for &r in &self.axes.r {
                for &b in self.axes.beta.iter().chain(std::iter::once(&0.0)) {
                    validate_params(a, r, b)?;
                }
            }
        }
        if self.axes.n.contains(&0) {
            return Err(Error::Domain("n values must be positive".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Domain(format!("tolerance must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Point {
    task: Task,
    alpha: Option<f64>,
    r: Option<f64>,
    beta: Option<f64>,
    n: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub task: Task,
    pub alpha: Option<f64>,
    pub r: Option<f64>,
    pub beta: Option<f64>,
    pub n: Option<u64>,
    pub metrics: BTreeMap<String, f64>,
    pub error: Option<String>,
}

fn grid(spec: &SweepSpec) -> Vec<Point> {
    let ax = &spec.axes;
    let opt = |used: bool, v: &[f64]| -> Vec<Option<f64>> {
        if used {
            v.iter().map(|&x| Some(x)).collect()
        } else {
            vec![None]
        }
    };
    let mut out = Vec::new();
    for &task in &spec.tasks {
        let alphas = opt(task.uses_params(), &ax.alpha);
        let rs = opt(task.uses_params(), &ax.r);
        let betas = opt(task.uses_beta(), &ax.beta);
        let ns: Vec<Option<u64>> = if task.uses_n() {
            ax.n.iter().map(|&n| Some(n)).collect()
        } else {
            vec![None]
        };
        for &alpha in &alphas {
            for &r in &rs {
                for &beta in &betas {
                    for &n in &ns {
                        out.push(Point {
                            task,
                            alpha,
                            r,
                            beta,
                            n,
                        });
                    }
                }
            }
        }
    }
    out
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn evaluate(p: &Point, tol: f64) -> Result<BTreeMap<String, f64>> {
    let params = || KernelParams::new(p.alpha.unwrap_or(1.0), p.r.unwrap_or(0.5), p.beta.unwrap_or(0.0));
    let n = p.n.unwrap_or(1);
    let mut m = BTreeMap::new();
    let mut put = |k: &str, v: f64| {
        m.insert(k.to_string(), v);
    };
    match p.task {
        Task::Thresholds => {
            let set = ThresholdSet::compute(&params()?, &[Exponent::One, Exponent::Infinity], DEFAULT_CEILING);
            put("n1", set.n1.value as f64);
            put("n1_exact", flag(set.n1.exact));
            put("n_star", set.n_star.value as f64);
            put("n_star_exact", flag(set.n_star.exact));
            for (key, t) in &set.n0 {
                put(&format!("n0_{key}"), t.value as f64);
            }
        }
        Task::Zeros => {
            let kernel = TailKernel::new(params()?, n, tol)?;
            let set = locate_zeros(&kernel, DEFAULT_ZERO_TOL)?;
            put("count", set.zeros.len() as f64);
            put("min_gap", set.min_gap());
            put("max_residual", set.residuals.iter().fold(0.0, |a: f64, &b| a.max(b)));
            put("alternation_ok", flag(set.alternation_ok));
            if let Route::Brackets { beta, .. } = route_for(kernel.params()) {
                let brackets = corollary_brackets(n, beta)?;
                let inside = crate::zeros::bracket_membership(&set, &brackets)
                    .iter()
                    .enumerate()
                    .all(|(i, b)| *b == Some(i));
                put("in_brackets", flag(inside));
            }
        }
        Task::Norm | Task::GammaTrack => {
            let kernel = TailKernel::new(params()?, n, tol)?;
            let set = locate_zeros(&kernel, DEFAULT_ZERO_TOL)?;
            let rep = l1_norm_tail_kernel(&kernel, &set, tol)?;
            put("gamma_star", rep.gamma_star);
            put("theta", rep.theta);
            if p.task == Task::Norm {
                put("l1_norm", rep.l1_norm);
                put("l1_scaled", rep.l1_scaled);
                put("principal", rep.principal);
                put("quad_error_bound", rep.quad_error_bound);
            }
        }
        Task::Lebesgue => {
            let l = lebesgue_constant(n)?;
            put("value", l.value);
            put("defect", l.defect);
        }
        Task::Extremal => {
            let kernel = TailKernel::new(params()?, n, tol)?;
            let set = locate_zeros(&kernel, DEFAULT_ZERO_TOL)?;
            let delta = choose_delta(&kernel, &set).delta;
            let rep = verify_equality_case(&kernel, &set, 1.0, delta, tol)?;
            put("delta", delta);
            put("a", rep.a);
            put("b", rep.b);
            put("r", rep.r);
            put("r_bound", rep.r_bound);
            put("ratio", rep.ratio);
            put("identity_residual", rep.identity_residual);
        }
        Task::Monotone => {
            let c = check_abs_monotone(&params()?, DEFAULT_M_MAX, DEFAULT_K_MAX)?;
            put("pass", flag(c.pass));
            put("min_relative_difference", c.min_relative_difference);
            put("max_relative_error", c.max_relative_error);
        }
    }
    Ok(m)
}

/// Computes every record; output is not written.
pub fn compute_records(spec: &SweepSpec) -> Result<Vec<Record>> {
    spec.validate()?;
    let points = grid(spec);
    Ok(points
        .par_iter()
        .map(|p| {
            let (metrics, error) = match evaluate(p, spec.tol) {
                Ok(m) => (m, None),
                Err(e) => (BTreeMap::new(), Some(e.to_string())),
            };
            Record {
                task: p.task,
                alpha: p.alpha,
                r: p.r,
                beta: p.beta,
                n: p.n,
                metrics,
                error,
            }
        })
        .collect())
}

fn fmt_opt<T: std::fmt::Debug>(v: Option<T>) -> String {
    v.map(|x| format!("{x:?}")).unwrap_or_default()
}

/// Long format: one row per metric, or one `error` row per failed record.
pub fn render_csv(records: &[Record]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(["task", "alpha", "r", "beta", "n", "status", "metric", "value"])
        .map_err(csv_err)?;
    for rec in records {
        let head = [
            rec.task.name().to_string(),
            fmt_opt(rec.alpha),
            fmt_opt(rec.r),
            fmt_opt(rec.beta),
            rec.n.map(|n| n.to_string()).unwrap_or_default(),
        ];
        if let Some(e) = &rec.error {
            let row = head.iter().cloned().chain(["error".into(), "error".into(), e.clone()]);
            w.write_record(row).map_err(csv_err)?;
            continue;
        }
        for (k, v) in &rec.metrics {
            let row = head.iter().cloned().chain(["ok".into(), k.clone(), format!("{v:?}")]);
            w.write_record(row).map_err(csv_err)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::Domain(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn num(v: f64) -> Value {
    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)
}

/// `{"records": [...]}` with sorted keys.
pub fn render_json(records: &[Record]) -> Result<String> {
    let list: Vec<Value> = records
        .iter()
        .map(|rec| {
            let metrics: serde_json::Map<String, Value> =
                rec.metrics.iter().map(|(k, &v)| (k.clone(), num(v))).collect();
            json!({
                "task": rec.task.name(),
                "alpha": rec.alpha.map(num),
                "r": rec.r.map(num),
                "beta": rec.beta.map(num),
                "n": rec.n,
                "status": if rec.error.is_some() { "error" } else { "ok" },
                "metrics": metrics,
                "error": rec.error,
            })
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&json!({ "records": list }))?;
    s.push('\n');
    Ok(s)
}

pub fn render(records: &[Record], format: Format) -> Result<String> {
    match format {
        Format::Json => render_json(records),
        Format::Csv => render_csv(records),
    }
}

/// Computes, renders, and writes to the spec's output path if one is set.
pub fn run_sweep(spec: &SweepSpec) -> Result<String> {
    let records = compute_records(spec)?;
    let text = render(&records, spec.output.format)?;
    if let Some(path) = &spec.output.path {
        std::fs::write(path, &text)?;
    }
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(tasks: Vec<Task>, format: Format) -> SweepSpec {
        SweepSpec {
            axes: Axes {
                alpha: vec![1.0],
                r: vec![0.5],
                beta: vec![0.0, 0.5],
                n: vec![2, 3],
            },
            tasks,
            output: Output { path: None, format },
            tol: 1e-12,
        }
    }

    #[test]
    fn empty_axes_give_header_only() {
        let mut s = spec(vec![Task::Zeros], Format::Csv);
        s.axes.n.clear();
        assert_eq!(run_sweep(&s).unwrap(), "task,alpha,r,beta,n,status,metric,value\n");
    }

    #[test]
    fn ordering_and_axes_per_task() {
        let s = spec(vec![Task::Lebesgue, Task::Zeros], Format::Csv);
        let recs = compute_records(&s).unwrap();
        assert_eq!(recs.len(), 2 + 4);
        assert!(recs[0].alpha.is_none() && recs[0].n == Some(2));
        assert_eq!((recs[2].beta, recs[2].n), (Some(0.0), Some(2)));
        assert_eq!((recs[5].beta, recs[5].n), (Some(0.5), Some(3)));
        assert!(recs[2..].iter().all(|r| r.metrics["count"] == 2.0 * r.n.unwrap() as f64));
    }

    #[test]
    fn deterministic_bytes() {
        let s = spec(vec![Task::Norm, Task::Monotone], Format::Json);
        assert_eq!(run_sweep(&s).unwrap(), run_sweep(&s).unwrap());
    }

    #[test]
    fn failing_point_is_isolated() {
        let mut s = spec(vec![Task::Zeros], Format::Csv);
        // ψ decays too slowly here for any admissible truncation
        s.axes.r = vec![0.05, 0.5];
        s.axes.beta = vec![0.0];
        let recs = compute_records(&s).unwrap();
        assert!(recs[0].error.is_some(), "{:?}", recs[0]);
        assert!(recs[2].error.is_none());
        assert!(run_sweep(&s).unwrap().contains(",error,error,"));
    }

    #[test]
    fn spec_parses_kebab_tasks() {
        let s = SweepSpec::from_json(r#"{"axes":{"n":[4]},"tasks":["gamma-track"],"output":{"format":"csv"}}"#).unwrap();
        assert_eq!(s.tasks, vec![Task::GammaTrack]);
        assert_eq!(s.tol, DEFAULT_KERNEL_TOL);
    }
}
