//! Configuration-driven jobs behind the `schoenberg` binary.
//!
//! A job is one TOML file:
//!
//! ```toml
//! task = "limit-table"
//! seed = 0
//! tolerance = 1e-10
//!
//! [group]
//! kind = "cyclic"       # trivial | cyclic | table
//! order = 2             # cyclic only
//! # path = "z4.txt"     # table only, relative to the config file
//!
//! [kernel]
//! kind = "monomial"     # demo:x2 | demo:zzbar | gegenbauer | monomial | disc
//! sphere = "real"       # monomial only: real | complex
//! # dim = 3             # gegenbauer (d) and disc (q) only
//! entries = [{ index = 2, element = 0, re = 1.0 }, { index = 2, element = 1, re = 0.5 }]
//!
//! [params]
//! dims = [1, 2, 3]
//! index = 2
//! ```
//!
//! Every task writes `<task>.csv` and `manifest.toml` into the output
//! directory; `check-pd` additionally writes `witness.csv` when it finds a
//! violation. Exit codes: 0 success, 1 invalid configuration, 2 numerical
//! failure, 3 positivity violation.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Parser;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coefficients::{CoefficientTable, GroupFunction};
use crate::error::Error;
use crate::groups::GroupSpec;
use crate::pdcheck::{gram_check, sample_sphere, Kernel, Space};
use crate::psd::Verdict;
use crate::quadrature::{delta_probe_nu, delta_probe_tau};
use crate::specfun::{ComplexDim, RealDim};
use crate::sphere_complex::{
    dimension_walk, extract_coefficient_complex, limit_study_complex, ComplexKernelModel, DiscIndex,
};
use crate::sphere_real::{extract_coefficient_real, limit_study_real, RealKernelModel};
use crate::symdiff::{rodrigues_check_complex, rodrigues_check_real, DEFAULT_DEGREE_CAP};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_POINTS: usize = 10;
pub const DEFAULT_NODES: usize = 32;

#[derive(Debug, Parser)]
#[command(
    name = "schoenberg",
    version,
    about = "Schoenberg expansions of positive definite kernels on spheres"
)]
pub struct Args {
    /// Job configuration (TOML).
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: PathBuf,
    /// Overrides the seed in the configuration.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Suppress the summary on stdout.
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Extract,
    Evaluate,
    CheckPd,
    Walk,
    LimitTable,
    MeasureMoments,
    RodriguesCheck,
}

impl Task {
    fn file_stem(self) -> &'static str {
        match self {
            Task::Extract => "extract",
            Task::Evaluate => "evaluate",
            Task::CheckPd => "check_pd",
            Task::Walk => "walk",
            Task::LimitTable => "limit_table",
            Task::MeasureMoments => "measure_moments",
            Task::RodriguesCheck => "rodrigues_check",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupKind {
    #[default]
    Trivial,
    Cyclic,
    Table,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupConfig {
    #[serde(default)]
    pub kind: GroupKind,
    pub order: Option<usize>,
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelKind {
    #[serde(rename = "demo:x2")]
    DemoX2,
    #[serde(rename = "demo:zzbar")]
    DemoZzbar,
    #[serde(rename = "gegenbauer")]
    Gegenbauer,
    #[serde(rename = "monomial")]
    Monomial,
    #[serde(rename = "disc")]
    Disc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SphereKind {
    Real,
    Complex,
}

/// `n` for real expansions, `[m, n]` for complex ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IndexConfig {
    Single(usize),
    Pair([usize; 2]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryConfig {
    pub index: IndexConfig,
    #[serde(default)]
    pub element: usize,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelConfig {
    pub kind: KernelKind,
    pub sphere: Option<SphereKind>,
    pub dim: Option<u32>,
    #[serde(default)]
    pub entries: Vec<EntryConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Tau,
    Nu,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// `d` resp. `q` values.
    pub dims: Option<Vec<u32>>,
    /// Coefficient studied by `limit-table`.
    pub index: Option<IndexConfig>,
    /// Highest `n` resp. `m + n` for `extract` and `rodrigues-check`.
    pub max_index: Option<usize>,
    /// Sample points per sphere for `check-pd`.
    pub points: Option<usize>,
    /// Evaluation abscissae for real kernels.
    pub xs: Option<Vec<f64>>,
    /// Evaluation points `[re, im]` for complex kernels.
    pub zs: Option<Vec<[f64; 2]>>,
    /// Sphere kind for tasks without a kernel.
    pub sphere: Option<SphereKind>,
    pub family: Option<Family>,
    /// `λ` resp. `α` values for `measure-moments`.
    pub parameters: Option<Vec<f64>>,
    /// Moment `x^k` resp. `|z|^k`.
    pub power: Option<u32>,
    /// Gauss nodes for `measure-moments`.
    pub nodes: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub task: Task,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub group: GroupConfig,
    pub kernel: Option<KernelConfig>,
    #[serde(default)]
    pub params: Params,
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Validation(String),
    Numerical(String),
    Positivity(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Positivity(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid configuration: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Positivity(m) => write!(f, "positivity violation: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else if matches!(e, Error::PositivityViolation(_)) {
            CliError::Positivity(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

fn invalid(field: &str, msg: impl fmt::Display) -> CliError {
    CliError::Validation(format!("{field}: {msg}"))
}

fn io_err(path: &Path, e: impl fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Parses and validates a configuration file; `seed` overrides the file.
pub fn load_config(path: &Path, seed: Option<u64>) -> Result<JobConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut config: JobConfig =
        toml::from_str(&text).map_err(|e| CliError::Validation(e.to_string().trim().to_owned()))?;
    if let Some(s) = seed {
        config.seed = s;
    }
    if !(config.tolerance.is_finite() && config.tolerance > 0.0) {
        return Err(invalid("tolerance", "must be a positive number"));
    }
    Ok(config)
}

/// What a finished job wrote.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub version: String,
    pub exit_code: i32,
    pub status: String,
    pub outputs: Vec<String>,
    pub config: JobConfig,
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn write(&self, path: &Path) -> Result<(), CliError> {
        let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
        w.write_record(&self.header).map_err(|e| io_err(path, e))?;
        for row in &self.rows {
            w.write_record(row).map_err(|e| io_err(path, e))?;
        }
        w.flush().map_err(|e| io_err(path, e))
    }
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn int(x: impl fmt::Display) -> String {
    x.to_string()
}

enum Model {
    Real(RealKernelModel),
    Complex(ComplexKernelModel),
}

fn build_group(cfg: &GroupConfig, base: &Path) -> Result<GroupSpec, CliError> {
    match cfg.kind {
        GroupKind::Trivial => Ok(GroupSpec::trivial()),
        GroupKind::Cyclic => {
            let k = cfg
                .order
                .ok_or_else(|| invalid("group.order", "required for a cyclic group"))?;
            GroupSpec::cyclic(k).map_err(|e| invalid("group.order", e))
        }
        GroupKind::Table => {
            let rel = cfg
                .path
                .as_ref()
                .ok_or_else(|| invalid("group.path", "required for a table group"))?;
            let path = base.join(rel);
            let text = fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
            GroupSpec::parse_table(&text).map_err(|e| invalid("group.path", e))
        }
    }
}

fn dims_of(params: &Params) -> Result<&[u32], CliError> {
    match params.dims.as_deref() {
        Some([]) | None => Err(invalid("params.dims", "at least one dimension is required")),
        Some(d) => Ok(d),
    }
}

fn real_dim(field: &str, d: u32) -> Result<RealDim, CliError> {
    RealDim::new(d).map_err(|e| invalid(field, e))
}

fn complex_dim(field: &str, q: u32) -> Result<ComplexDim, CliError> {
    ComplexDim::new(q).map_err(|e| invalid(field, e))
}

fn build_kernel(cfg: &KernelConfig, order: usize) -> Result<Model, CliError> {
    let ones = GroupFunction::constant(order, Complex64::new(1.0, 0.0));
    match cfg.kind {
        KernelKind::DemoX2 => {
            return Ok(Model::Real(RealKernelModel::monomial(CoefficientTable::from_entries(
                order,
                [(2, ones)],
            )?)))
        }
        KernelKind::DemoZzbar => {
            return Ok(Model::Complex(ComplexKernelModel::monomial(
                CoefficientTable::from_entries(order, [((1, 1), ones)])?,
            )))
        }
        _ => {}
    }
    let sphere = match cfg.kind {
        KernelKind::Gegenbauer => SphereKind::Real,
        KernelKind::Disc => SphereKind::Complex,
        _ => cfg.sphere.unwrap_or(SphereKind::Real),
    };
    if cfg.entries.is_empty() {
        return Err(invalid("kernel.entries", "a series kernel needs at least one entry"));
    }
    let mut values: std::collections::BTreeMap<DiscIndex, Vec<Complex64>> = Default::default();
    for (i, e) in cfg.entries.iter().enumerate() {
        let field = format!("kernel.entries[{i}]");
        if e.element >= order {
            return Err(invalid(
                &field,
                format!("element {} outside a group of order {order}", e.element),
            ));
        }
        if !e.re.is_finite() || !e.im.is_finite() {
            return Err(invalid(&field, "coefficient is not finite"));
        }
        let key = match (sphere, e.index) {
            (SphereKind::Real, IndexConfig::Single(n)) => (n, 0),
            (SphereKind::Complex, IndexConfig::Pair([m, n])) => (m, n),
            (SphereKind::Real, _) => return Err(invalid(&field, "real kernels take a single index n")),
            (SphereKind::Complex, _) => return Err(invalid(&field, "complex kernels take an index pair [m, n]")),
        };
        values
            .entry(key)
            .or_insert_with(|| vec![Complex64::new(0.0, 0.0); order])[e.element] += Complex64::new(e.re, e.im);
    }
    let need_dim = |what: &str| {
        cfg.dim
            .ok_or_else(|| invalid("kernel.dim", format!("required for a {what} kernel")))
    };
    Ok(match sphere {
        SphereKind::Real => {
            let table = CoefficientTable::from_entries(
                order,
                values.into_iter().map(|((n, _), v)| (n, GroupFunction::new(v))),
            )?;
            match cfg.kind {
                KernelKind::Gegenbauer => Model::Real(RealKernelModel::gegenbauer(
                    real_dim("kernel.dim", need_dim("gegenbauer")?)?,
                    table,
                )),
                _ => Model::Real(RealKernelModel::monomial(table)),
            }
        }
        SphereKind::Complex => {
            let table =
                CoefficientTable::from_entries(order, values.into_iter().map(|(k, v)| (k, GroupFunction::new(v))))?;
            match cfg.kind {
                KernelKind::Disc => Model::Complex(ComplexKernelModel::disc(
                    complex_dim("kernel.dim", need_dim("disc")?)?,
                    table,
                )),
                _ => Model::Complex(ComplexKernelModel::monomial(table)),
            }
        }
    })
}

struct Output {
    tables: Vec<(String, Table)>,
    failure: Option<CliError>,
}

impl Output {
    fn single(task: Task, table: Table) -> Self {
        Self {
            tables: vec![(format!("{}.csv", task.file_stem()), table)],
            failure: None,
        }
    }
}

fn require_kernel(config: &JobConfig, group: &GroupSpec) -> Result<Model, CliError> {
    let cfg = config
        .kernel
        .as_ref()
        .ok_or_else(|| invalid("kernel", "required for this task"))?;
    build_kernel(cfg, group.order())
}

fn task_extract(config: &JobConfig, group: &GroupSpec) -> Result<Output, CliError> {
    let model = require_kernel(config, group)?;
    let dims = dims_of(&config.params)?;
    let max = config
        .params
        .max_index
        .ok_or_else(|| invalid("params.max_index", "required for extract"))?;
    let mut t;
    match model {
        Model::Real(f) => {
            t = Table::new(&["d", "n", "element", "re", "im"]);
            for &d in dims {
                let dim = real_dim("params.dims", d)?;
                for n in 0..=max {
                    for u in 0..group.order() {
                        let v = extract_coefficient_real(&f, n, dim, u)?;
                        t.push(vec![int(d), int(n), int(u), num(v.re), num(v.im)]);
                    }
                }
            }
        }
        Model::Complex(f) => {
            t = Table::new(&["q", "m", "n", "element", "re", "im"]);
            for &q in dims {
                let dim = complex_dim("params.dims", q)?;
                for total in 0..=max {
                    for m in 0..=total {
                        for u in 0..group.order() {
                            let v = extract_coefficient_complex(&f, m, total - m, dim, u)?;
                            t.push(vec![int(q), int(m), int(total - m), int(u), num(v.re), num(v.im)]);
                        }
                    }
                }
            }
        }
    }
    Ok(Output::single(config.task, t))
}

fn task_evaluate(config: &JobConfig, group: &GroupSpec) -> Result<Output, CliError> {
    let model = require_kernel(config, group)?;
    let mut t;
    match model {
        Model::Real(f) => {
            let xs = config
                .params
                .xs
                .as_ref()
                .ok_or_else(|| invalid("params.xs", "required for a real kernel"))?;
            t = Table::new(&["x", "element", "re", "im"]);
            for (i, &x) in xs.iter().enumerate() {
                for u in 0..group.order() {
                    let v = f.evaluate(x, u).map_err(|e| invalid(&format!("params.xs[{i}]"), e))?;
                    t.push(vec![num(x), int(u), num(v.re), num(v.im)]);
                }
            }
        }
        Model::Complex(f) => {
            let zs = config
                .params
                .zs
                .as_ref()
                .ok_or_else(|| invalid("params.zs", "required for a complex kernel"))?;
            t = Table::new(&["z_re", "z_im", "element", "re", "im"]);
            for (i, &[a, b]) in zs.iter().enumerate() {
                for u in 0..group.order() {
                    let v = f
                        .evaluate(Complex64::new(a, b), u)
                        .map_err(|e| invalid(&format!("params.zs[{i}]"), e))?;
                    t.push(vec![num(a), num(b), int(u), num(v.re), num(v.im)]);
                }
            }
        }
    }
    Ok(Output::single(config.task, t))
}

fn task_check_pd(config: &JobConfig, group: &GroupSpec) -> Result<Output, CliError> {
    let model = require_kernel(config, group)?;
    let dims = dims_of(&config.params)?;
    let count = config.params.points.unwrap_or(DEFAULT_POINTS);
    let subset: Vec<usize> = (0..group.order()).collect();
    let mut t = Table::new(&[
        "dim",
        "size",
        "min_eigenvalue",
        "trace",
        "threshold",
        "pd",
        "quadratic_form",
    ]);
    let mut witness = Table::new(&["dim", "row", "point", "element", "re", "im"]);
    let mut failure = None;
    for &d in dims {
        let (space, kernel) = match &model {
            Model::Real(f) => (Space::Real(real_dim("params.dims", d)?), Kernel::Real(f)),
            Model::Complex(f) => (Space::Complex(complex_dim("params.dims", d)?), Kernel::Complex(f)),
        };
        let pts = sample_sphere(space, count, config.seed).map_err(|e| invalid("params.points", e))?;
        let report = gram_check(kernel, &pts, group, &subset, config.tolerance)?;
        let qf = match &report.psd.verdict {
            Verdict::Pd => String::new(),
            Verdict::NotPd {
                witness: c,
                quadratic_form,
            } => {
                if failure.is_none() {
                    for (row, (&(i, a), ci)) in report.labels.iter().zip(c).enumerate() {
                        if ci.norm() > 0.0 {
                            witness.push(vec![int(d), int(row), int(i), int(a), num(ci.re), num(ci.im)]);
                        }
                    }
                    failure = Some(CliError::Positivity(format!(
                        "Gram matrix at dimension {d} has quadratic form {quadratic_form:?} at the witness"
                    )));
                }
                num(*quadratic_form)
            }
        };
        t.push(vec![
            int(d),
            int(report.psd.size),
            num(report.psd.min_eigenvalue),
            num(report.psd.trace),
            num(report.psd.threshold),
            int(report.is_pd()),
            qf,
        ]);
    }
    let mut out = Output::single(config.task, t);
    if failure.is_some() {
        out.tables.push(("witness.csv".into(), witness));
    }
    out.failure = failure;
    Ok(out)
}

fn task_walk(config: &JobConfig, group: &GroupSpec) -> Result<Output, CliError> {
    let Model::Complex(f) = require_kernel(config, group)? else {
        return Err(invalid("kernel", "walk needs a complex kernel"));
    };
    let dims = dims_of(&config.params)?;
    let mut t = Table::new(&[
        "q",
        "m",
        "n",
        "element",
        "walk_re",
        "walk_im",
        "direct_re",
        "direct_im",
        "error",
    ]);
    for &q in dims {
        let dim = complex_dim("params.dims", q)?;
        let walked = dimension_walk(&f.to_disc(dim)?, dim);
        let direct = f.to_disc(dim.next())?;
        let mut indices: Vec<DiscIndex> = walked.indices().chain(direct.indices()).copied().collect();
        indices.sort_unstable();
        indices.dedup();
        for idx in indices {
            for u in 0..group.order() {
                let a = walked.value(&idx, u);
                let b = direct.value(&idx, u);
                t.push(vec![
                    int(q),
                    int(idx.0),
                    int(idx.1),
                    int(u),
                    num(a.re),
                    num(a.im),
                    num(b.re),
                    num(b.im),
                    num((a - b).norm()),
                ]);
            }
        }
    }
    Ok(Output::single(config.task, t))
}

fn task_limit_table(config: &JobConfig, group: &GroupSpec) -> Result<Output, CliError> {
    let model = require_kernel(config, group)?;
    let dims = dims_of(&config.params)?;
    let index = config
        .params
        .index
        .ok_or_else(|| invalid("params.index", "required for limit-table"))?;
    let elements: Vec<usize> = (0..group.order()).collect();
    let mut t;
    match (model, index) {
        (Model::Real(f), IndexConfig::Single(n)) => {
            let ds = dims
                .iter()
                .map(|&d| real_dim("params.dims", d))
                .collect::<Result<Vec<_>, _>>()?;
            t = Table::new(&[
                "d",
                "n",
                "element",
                "phi_re",
                "phi_im",
                "limit_re",
                "limit_im",
                "error",
                "max_error",
            ]);
            for row in limit_study_real(&f, n, &ds, &elements)? {
                for e in &row.entries {
                    t.push(vec![
                        int(row.dim),
                        int(n),
                        int(e.element),
                        num(e.coefficient.re),
                        num(e.coefficient.im),
                        num(e.limit.re),
                        num(e.limit.im),
                        num(e.error),
                        num(row.max_error),
                    ]);
                }
            }
        }
        (Model::Complex(f), IndexConfig::Pair([m, n])) => {
            let qs = dims
                .iter()
                .map(|&q| complex_dim("params.dims", q))
                .collect::<Result<Vec<_>, _>>()?;
            t = Table::new(&[
                "q",
                "m",
                "n",
                "element",
                "phi_re",
                "phi_im",
                "limit_re",
                "limit_im",
                "error",
                "max_error",
            ]);
            for row in limit_study_complex(&f, m, n, &qs, &elements)? {
                for e in &row.entries {
                    t.push(vec![
                        int(row.dim),
                        int(m),
                        int(n),
                        int(e.element),
                        num(e.coefficient.re),
                        num(e.coefficient.im),
                        num(e.limit.re),
                        num(e.limit.im),
                        num(e.error),
                        num(row.max_error),
                    ]);
                }
            }
        }
        (Model::Real(_), _) => return Err(invalid("params.index", "real kernels take a single index n")),
        (Model::Complex(_), _) => return Err(invalid("params.index", "complex kernels take an index pair [m, n]")),
    }
    Ok(Output::single(config.task, t))
}

fn task_measure_moments(config: &JobConfig) -> Result<Output, CliError> {
    let p = &config.params;
    let family = p
        .family
        .ok_or_else(|| invalid("params.family", "required for measure-moments"))?;
    let parameters = match p.parameters.as_deref() {
        Some([]) | None => return Err(invalid("params.parameters", "at least one value is required")),
        Some(v) => v,
    };
    if let Some(bad) = parameters.iter().find(|&&a| !(a > -1.0 && a.is_finite())) {
        return Err(invalid("params.parameters", format!("{bad} is not above −1")));
    }
    let power = p.power.unwrap_or(2) as i32;
    let nodes = p.nodes.unwrap_or(DEFAULT_NODES);
    if nodes == 0 {
        return Err(invalid("params.nodes", "must be positive"));
    }
    let rows = match family {
        Family::Tau => delta_probe_tau(|x| Ok(Complex64::new(x.powi(power), 0.0)), parameters, nodes)?,
        Family::Nu => delta_probe_nu(
            |z| Ok(Complex64::new(z.norm().powi(power), 0.0)),
            parameters,
            nodes,
            2 * power as usize + 5,
        )?,
    };
    let name = match family {
        Family::Tau => "tau",
        Family::Nu => "nu",
    };
    let mut t = Table::new(&["family", "parameter", "power", "re", "im", "error"]);
    for r in rows {
        t.push(vec![
            name.to_owned(),
            num(r.parameter),
            int(power),
            num(r.integral.re),
            num(r.integral.im),
            num(r.error),
        ]);
    }
    Ok(Output::single(config.task, t))
}

fn task_rodrigues(config: &JobConfig) -> Result<Output, CliError> {
    let p = &config.params;
    let dims = dims_of(p)?;
    let max = p
        .max_index
        .ok_or_else(|| invalid("params.max_index", "required for rodrigues-check"))?;
    if max > DEFAULT_DEGREE_CAP {
        return Err(invalid(
            "params.max_index",
            format!("exceeds the degree cap {DEFAULT_DEGREE_CAP}"),
        ));
    }
    let sphere = p
        .sphere
        .or(config.kernel.as_ref().and_then(|k| k.sphere))
        .unwrap_or(SphereKind::Real);
    let mut t;
    match sphere {
        SphereKind::Real => {
            let xs: Vec<f64> = (0..21).map(|i| -0.95 + 0.095 * i as f64).collect();
            t = Table::new(&["d", "n", "deviation"]);
            for &d in dims {
                let dim = real_dim("params.dims", d)?;
                for n in 0..=max {
                    let dev = rodrigues_check_real(dim, n, &xs, DEFAULT_DEGREE_CAP)?;
                    t.push(vec![int(d), int(n), num(dev)]);
                }
            }
        }
        SphereKind::Complex => {
            let zs: Vec<Complex64> = (1..=9)
                .flat_map(|i| (0..8).map(move |j| Complex64::from_polar(0.1 * i as f64, 0.785 * j as f64 + 0.1)))
                .collect();
            t = Table::new(&["q", "m", "n", "deviation"]);
            for &q in dims {
                let dim = complex_dim("params.dims", q)?;
                for total in 0..=max {
                    for m in 0..=total {
                        let dev = rodrigues_check_complex(dim, m, total - m, &zs, DEFAULT_DEGREE_CAP)?;
                        t.push(vec![int(q), int(m), int(total - m), num(dev)]);
                    }
                }
            }
        }
    }
    Ok(Output::single(config.task, t))
}

/// Runs a validated job, writing its tables and manifest into `out`.
pub fn run_job(config: &JobConfig, base: &Path, out: &Path) -> Result<Manifest, CliError> {
    let group = build_group(&config.group, base)?;
    let output = match config.task {
        Task::Extract => task_extract(config, &group),
        Task::Evaluate => task_evaluate(config, &group),
        Task::CheckPd => task_check_pd(config, &group),
        Task::Walk => task_walk(config, &group),
        Task::LimitTable => task_limit_table(config, &group),
        Task::MeasureMoments => task_measure_moments(config),
        Task::RodriguesCheck => task_rodrigues(config),
    }?;
    fs::create_dir_all(out).map_err(|e| io_err(out, e))?;
    let mut outputs = Vec::new();
    for (name, table) in &output.tables {
        table.write(&out.join(name))?;
        outputs.push(name.clone());
    }
    let (exit_code, status) = match &output.failure {
        Some(e) => (e.exit_code(), e.to_string()),
        None => (0, "ok".to_owned()),
    };
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION").to_owned(),
        exit_code,
        status,
        outputs,
        config: config.clone(),
    };
    let text = toml::to_string(&manifest).map_err(|e| CliError::Io(e.to_string()))?;
    let path = out.join("manifest.toml");
    fs::write(&path, text).map_err(|e| io_err(&path, e))?;
    match output.failure {
        Some(e) => Err(e),
        None => Ok(manifest),
    }
}

/// Entry point of the binary; returns the process exit code.
pub fn run(args: &Args) -> i32 {
    let result = load_config(&args.config, args.seed).and_then(|config| {
        let base = args.config.parent().unwrap_or_else(|| Path::new("."));
        run_job(&config, base, &args.out)
    });
    match result {
        Ok(manifest) => {
            if !args.quiet {
                println!("wrote {} to {}", manifest.outputs.join(", "), args.out.display());
            }
            0
        }
        Err(e) => {
            eprintln!("schoenberg: {e}");
            e.exit_code()
        }
    }
}
