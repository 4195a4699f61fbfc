//! Batch runner for the `glfq` verification suites.
//!
//! A [`RunConfig`] names a group `GL_n(F_{q^m})`, a set of involutions and a
//! set of suites; [`run`] executes them and returns a [`Report`] whose
//! verdict decides the process exit status.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use glfq::chartab::CharacterTable;
use glfq::inv::{
    catalogue, involution_from_descriptor, verify_geometric_lemma, verify_mackey, verify_theorem_a,
    InvolutionDescriptor, InvolutionSpec,
};
use glfq::mat::{Composition, GroupSpec, MatrixGroup, DEFAULT_ENUMERATION_BOUND};
use glfq::rep::{cuspidal_indices, d_count, induced_power_whittaker, psh_verify, GlFamily, WhittakerModel};
use glfq::tori::{anisotropic_gp_count, list_tori, scalars_bijection};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] glfq::Error),
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// `1` for an arithmetic inconsistency, `2` for anything the caller
    /// can fix.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(glfq::Error::Defect(_)) => 1,
            _ => 2,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Suite {
    TheoremA,
    Mackey,
    CuspidalCount,
    Whittaker,
    Psh,
    Tori,
    GeometricLemma,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::TheoremA => "theorem_a",
            Suite::Mackey => "mackey",
            Suite::CuspidalCount => "cuspidal_count",
            Suite::Whittaker => "whittaker",
            Suite::Psh => "psh",
            Suite::Tori => "tori",
            Suite::GeometricLemma => "geometric_lemma",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

/// Which involutions to check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InvolutionChoice {
    /// The whole builtin catalogue.
    Catalogue,
    /// One catalogue entry.
    CatalogueIndex(usize),
    /// A JSON file holding `{"kind", "matrix"}` or a list of them.
    File(PathBuf),
}

impl std::str::FromStr for InvolutionChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "catalogue" {
            return Ok(InvolutionChoice::Catalogue);
        }
        if let Some(idx) = s.strip_prefix("catalogue:") {
            return idx.parse().map(InvolutionChoice::CatalogueIndex).map_err(|e| format!("catalogue index: {e}"));
        }
        Ok(InvolutionChoice::File(PathBuf::from(s)))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub n: usize,
    pub q: u64,
    pub m: u32,
    pub involution: InvolutionChoice,
    pub suites: Vec<Suite>,
    /// Total degree for the Hopf algebra checks; defaults to `n`.
    pub max_degree: Option<usize>,
    pub bound: u64,
}

impl RunConfig {
    pub fn new(n: usize, q: u64, m: u32, suites: Vec<Suite>) -> RunConfig {
        RunConfig { n, q, m, involution: InvolutionChoice::Catalogue, suites, max_degree: None, bound: DEFAULT_ENUMERATION_BOUND }
    }

    pub fn spec(&self) -> Result<GroupSpec, CliError> {
        GroupSpec::new(self.n, self.q, self.m).map_err(|e| CliError::Config(e.to_string()))
    }

    fn validate(&self) -> Result<GroupSpec, CliError> {
        let spec = self.spec()?;
        if self.suites.is_empty() {
            return Err(CliError::Config("no suites selected".into()));
        }
        if self.max_degree == Some(0) {
            return Err(CliError::Config("max degree must be positive".into()));
        }
        Ok(spec)
    }

    fn family_degree(&self) -> usize {
        if self.suites.contains(&Suite::Psh) {
            self.n.max(self.max_degree.unwrap_or(self.n))
        } else {
            self.n
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub passed: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub config: RunConfig,
    /// Keyed by suite name.
    pub suites: BTreeMap<String, SuiteResult>,
    pub verdict: &'static str,
    /// Wall-clock milliseconds per suite; the only field that varies
    /// between identical runs.
    pub timing_ms: BTreeMap<String, u128>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.suites.values().all(|s| s.passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    /// The report without timings.
    pub fn deterministic_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("serializable");
        v.as_object_mut().expect("object").remove("timing_ms");
        v
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("serializable") + "\n",
            Format::Csv => {
                let mut s = String::from("suite,passed\n");
                for (name, r) in &self.suites {
                    s.push_str(&format!("{name},{}\n", r.passed));
                }
                s
            }
            Format::Text => {
                let c = &self.config;
                let mut s = format!("GL_{}(F_{}^{})\n", c.n, c.q, c.m);
                for (name, r) in &self.suites {
                    s.push_str(&format!("{name}: {}\n", if r.passed { "PASS" } else { "FAIL" }));
                }
                s.push_str(&format!("verdict: {}\n", self.verdict));
                s
            }
        }
    }
}

/// Resolves the configured involutions on `g`.
pub fn involutions(config: &RunConfig, g: &MatrixGroup) -> Result<Vec<InvolutionSpec>, CliError> {
    match &config.involution {
        InvolutionChoice::Catalogue => Ok(catalogue(g)?),
        InvolutionChoice::CatalogueIndex(i) => {
            let all = catalogue(g)?;
            let len = all.len();
            all.into_iter()
                .nth(*i)
                .map(|s| vec![s])
                .ok_or_else(|| CliError::Config(format!("catalogue index {i} out of range (catalogue has {len})")))
        }
        InvolutionChoice::File(path) => {
            let text = fs::read_to_string(path).map_err(io_err(path))?;
            let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let list = if value.is_array() { value } else { Value::Array(vec![value]) };
            let descs: Vec<InvolutionDescriptor> =
                serde_json::from_value(list).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            descs
                .iter()
                .map(|d| involution_from_descriptor(d, g).map_err(|e| CliError::Config(e.to_string())))
                .collect()
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn theorem_a(fam: &GlFamily, n: usize, sigmas: &[InvolutionSpec]) -> Result<SuiteResult, CliError> {
    let reports = sigmas
        .iter()
        .map(|s| verify_theorem_a(fam.group(n), fam.table(n), s))
        .collect::<glfq::Result<Vec<_>>>()?;
    Ok(SuiteResult { passed: reports.iter().all(|r| r.verdict.passed()), detail: to_value(&reports) })
}

fn mackey(fam: &GlFamily, n: usize, sigmas: &[InvolutionSpec]) -> Result<SuiteResult, CliError> {
    let comps = Composition::all(n);
    let reports = sigmas.iter().map(|s| verify_mackey(fam, &comps, s)).collect::<glfq::Result<Vec<_>>>()?;
    let summary: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "involution": r.involution,
                "H_order": r.h_order,
                "checked": r.rows.len(),
                "violations": r.violations,
                "verdict": r.verdict,
            })
        })
        .collect();
    Ok(SuiteResult { passed: reports.iter().all(|r| r.verdict.passed()), detail: Value::Array(summary) })
}

fn geometric_lemma(g: &MatrixGroup, sigmas: &[InvolutionSpec]) -> Result<SuiteResult, CliError> {
    let mut reports = Vec::new();
    for s in sigmas {
        for c in Composition::all(g.n()) {
            reports.push(verify_geometric_lemma(g, &c, s)?);
        }
    }
    Ok(SuiteResult { passed: reports.iter().all(|r| r.verdict.passed()), detail: to_value(&reports) })
}

fn cuspidal_count(fam: &GlFamily, n: usize, big_q: u64) -> Result<SuiteResult, CliError> {
    let mut rows = Vec::new();
    let mut passed = true;
    for k in 1..=n {
        let found = cuspidal_indices(fam, k)?;
        let expected = d_count(k as u32, big_q);
        passed &= found.len() as u64 == expected;
        rows.push(json!({"n": k, "cuspidal": found.len(), "expected": expected, "indices": found}));
    }
    Ok(SuiteResult { passed, detail: Value::Array(rows) })
}

/// Every irreducible has Whittaker dimension 0 or 1, and `i(rho^k)` has
/// dimension 1 for every cuspidal `rho` of `GL_d` with `d k = n`, for every
/// additive character multiplier.
fn whittaker(fam: &GlFamily, n: usize) -> Result<SuiteResult, CliError> {
    let f = fam.field();
    let mut passed = true;
    let mut irreducible_dims = Vec::new();
    let mut induced = Vec::new();
    for a in f.units() {
        let model = WhittakerModel::new(fam, n, a)?;
        let dims = fam.table(n).characters().iter().map(|c| model.dim(c)).collect::<glfq::Result<Vec<_>>>()?;
        passed &= dims.iter().all(|&d| d == 0 || d == 1);
        irreducible_dims.push(json!({"multiplier": a.0, "dims": dims}));
    }
    for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
        for rho in cuspidal_indices(fam, d)? {
            let dims = f
                .units()
                .map(|a| induced_power_whittaker(fam, d, rho, n / d, a))
                .collect::<glfq::Result<Vec<i64>>>()?;
            passed &= dims.iter().all(|&x| x == 1);
            induced.push(json!({"degree": d, "rho": rho, "copies": n / d, "dims": dims}));
        }
    }
    Ok(SuiteResult { passed, detail: json!({"irreducible": irreducible_dims, "induced_powers": induced}) })
}

fn psh(fam: &GlFamily, degree: usize) -> Result<SuiteResult, CliError> {
    let r = psh_verify(fam, degree)?;
    Ok(SuiteResult { passed: r.passed, detail: to_value(&r) })
}

fn tori(n: usize, q: u64, m: u32) -> Result<SuiteResult, CliError> {
    let big_q = q.pow(m);
    let listed: Vec<Value> = list_tori(n as u32, big_q)
        .iter()
        .map(|t| Ok(json!({"partition": t.partition, "point_count": t.point_count()?.to_string()})))
        .collect::<glfq::Result<_>>()?;
    let gp = anisotropic_gp_count(n as u32, big_q)?;
    let expected = d_count(n as u32, big_q);
    let mut passed = gp == expected;
    let mut detail = json!({
        "tori": listed,
        "anisotropic_general_position": gp,
        "expected": expected,
    });
    if m == 2 {
        let b = scalars_bijection(n as u32, q, m)?;
        passed &= b.full_match;
        detail["scalars_bijection"] = to_value(&b);
    }
    Ok(SuiteResult { passed, detail })
}

/// Runs every configured suite on `GL_n(F_{q^m})`.
pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let spec = config.validate()?;
    let fam = GlFamily::new(spec, config.family_degree(), config.bound)?;
    let n = config.n;
    let g = fam.group(n);
    let needs_sigma = config.suites.iter().any(|s| matches!(s, Suite::TheoremA | Suite::Mackey | Suite::GeometricLemma));
    let sigmas = if needs_sigma { involutions(config, g)? } else { Vec::new() };
    let mut suites = BTreeMap::new();
    let mut timing_ms = BTreeMap::new();
    let mut selected = config.suites.clone();
    selected.sort_by_key(|s| s.name());
    selected.dedup();
    for suite in selected {
        let start = Instant::now();
        let result = match suite {
            Suite::TheoremA => theorem_a(&fam, n, &sigmas)?,
            Suite::Mackey => mackey(&fam, n, &sigmas)?,
            Suite::GeometricLemma => geometric_lemma(g, &sigmas)?,
            Suite::CuspidalCount => cuspidal_count(&fam, n, spec.element_field_order())?,
            Suite::Whittaker => whittaker(&fam, n)?,
            Suite::Psh => psh(&fam, config.max_degree.unwrap_or(n))?,
            Suite::Tori => tori(n, config.q, config.m)?,
        };
        timing_ms.insert(suite.name().to_string(), start.elapsed().as_millis());
        suites.insert(suite.name().to_string(), result);
    }
    let verdict = if suites.values().all(|s| s.passed) { "pass" } else { "fail" };
    Ok(Report { config: config.clone(), suites, verdict, timing_ms })
}

/// Writes `character_table.csv`, `class_table.csv` and `theorem_a.json`
/// into `dir`.
pub fn dump(config: &RunConfig, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let spec = config.spec()?;
    let g = MatrixGroup::general_linear(spec, config.bound)?;
    let table = glfq::chartab::character_table(&g)?;
    let sigmas = involutions(config, &g)?;
    let reports = sigmas.iter().map(|s| verify_theorem_a(&g, &table, s)).collect::<glfq::Result<Vec<_>>>()?;
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let files = [
        ("character_table.csv", table.to_csv()),
        ("class_table.csv", g.class_table_csv()),
        ("theorem_a.json", serde_json::to_string_pretty(&reports).expect("serializable") + "\n"),
    ];
    let mut out = Vec::new();
    for (name, body) in files {
        let path = dir.join(name);
        fs::write(&path, body).map_err(io_err(&path))?;
        out.push(path);
    }
    Ok(out)
}

/// Re-reads a dumped character table and re-checks orthogonality against
/// freshly computed class data.
pub fn verify_table_file(config: &RunConfig, path: &Path) -> Result<CharacterTable, CliError> {
    let spec = config.spec()?;
    let g = MatrixGroup::general_linear(spec, config.bound)?;
    let info = glfq::chartab::ClassInfo::of_group(&g);
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    Ok(CharacterTable::from_csv(info, &text)?)
}
