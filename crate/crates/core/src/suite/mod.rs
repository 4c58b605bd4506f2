//! Named verification suites: configuration, execution and reports.

mod ops;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::Catalog;
use crate::chart::chart_specs;
use crate::error::{Error, Result};
use crate::lie::LieData;
use crate::scalar::ParamPoint;

pub use ops::{Ctx, Op, Outcome, Sampling, YbKind};

const BUILTIN_SUITES: &str = include_str!("../../data/suites.json");

pub const DEFAULT_ETA: f64 = 0.5;
pub const DEFAULT_POINTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Markdown,
}

fn one() -> f64 {
    1.0
}
fn default_z() -> f64 {
    0.7
}
fn default_zp() -> f64 {
    -0.4
}
fn default_seed() -> u64 {
    1
}

/// Deformation parameters. Give at most one of `eta` and `lambda`; with
/// neither, η = 0.5.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default = "one")]
    pub kappa: f64,
    #[serde(default = "default_z")]
    pub z: f64,
    #[serde(default = "default_zp")]
    pub zprime: f64,
}

impl Default for Params {
    fn default() -> Self {
        Params { eta: None, lambda: None, kappa: 1.0, z: default_z(), zprime: default_zp() }
    }
}

impl Params {
    pub fn point(&self) -> ParamPoint {
        let lambda = match (self.eta, self.lambda) {
            (_, Some(l)) => l,
            (Some(e), None) => -e * e,
            (None, None) => -DEFAULT_ETA * DEFAULT_ETA,
        };
        ParamPoint { lambda, kinv: 1.0 / self.kappa, z: self.z, zp: self.zprime }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingConfig {
    /// Overrides every check's point count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    /// Overrides every sampled check's tolerance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig { points: None, tol: None, seed: default_seed() }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    /// Record per-check wall time. Off by default so reports are byte-stable.
    #[serde(default)]
    pub timings: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub suite: String,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub sampling: SamplingConfig,
    #[serde(default)]
    pub output: OutputConfig,
    /// Directory holding replacement data files; shipped copies otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data_dir: Option<PathBuf>,
}

impl SuiteConfig {
    pub fn new(suite: impl Into<String>) -> Self {
        SuiteConfig {
            suite: suite.into(),
            params: Params::default(),
            sampling: SamplingConfig::default(),
            output: OutputConfig::default(),
            data_dir: None,
        }
    }

    pub fn load(path: &Path) -> Result<SuiteConfig> {
        let src = std::fs::read_to_string(path)
            .map_err(|source| Error::MissingData { path: path.display().to_string(), source })?;
        Ok(serde_json::from_str(&src)?)
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.params;
        let bad = |what: &str| Err(Error::InvalidConfig(what.to_string()));
        for (name, v) in [("eta", p.eta), ("lambda", p.lambda), ("kappa", Some(p.kappa)), ("z", Some(p.z)), ("zprime", Some(p.zprime))] {
            if v.is_some_and(|v| !v.is_finite()) {
                return bad(&format!("{name} must be finite"));
            }
        }
        if p.eta.is_some() && p.lambda.is_some() {
            return bad("give eta or lambda, not both");
        }
        if p.kappa <= 0.0 {
            return bad("kappa must be positive");
        }
        if let Some(t) = self.sampling.tol {
            if !(t.is_finite() && t > 0.0) {
                return bad("tol must be positive");
            }
        }
        if self.sampling.points == Some(0) {
            return bad("points must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub title: String,
    pub tables: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSpec {
    pub name: String,
    /// The statement being verified, in words.
    pub claim: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(flatten)]
    pub op: Op,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteSpec {
    pub name: String,
    #[serde(default)]
    pub about: String,
    /// Other suites whose checks run too, named `suite/check`.
    #[serde(default)]
    pub include: Vec<String>,
    #[serde(default)]
    pub groups: Vec<GroupSpec>,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteFile {
    pub version: u32,
    pub suites: Vec<SuiteSpec>,
}

#[derive(Debug, Clone)]
pub struct Suites {
    suites: BTreeMap<String, SuiteSpec>,
}

impl Suites {
    pub fn builtin() -> Result<Suites> {
        Suites::from_json(BUILTIN_SUITES)
    }

    /// `suites.json` from `dir` when present, else the shipped copy.
    pub fn open(dir: Option<&Path>) -> Result<Suites> {
        match dir.map(|d| d.join("suites.json")) {
            Some(p) if p.exists() => Suites::from_json(&std::fs::read_to_string(&p)?),
            _ => Suites::builtin(),
        }
    }

    pub fn from_json(src: &str) -> Result<Suites> {
        let file: SuiteFile = serde_json::from_str(src)?;
        let mut suites = BTreeMap::new();
        for s in file.suites {
            if suites.contains_key(&s.name) {
                return Err(Error::InvalidConfig(format!("suite `{}` defined twice", s.name)));
            }
            suites.insert(s.name.clone(), s);
        }
        Ok(Suites { suites })
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.suites.keys().map(String::as_str)
    }

    pub fn get(&self, name: &str) -> Result<&SuiteSpec> {
        self.suites.get(name).ok_or_else(|| Error::UnknownSuite(name.to_string()))
    }

    /// Checks and groups of `name` with its includes flattened.
    pub fn resolve(&self, name: &str) -> Result<(Vec<CheckSpec>, Vec<GroupSpec>)> {
        let mut checks = Vec::new();
        let mut groups = Vec::new();
        self.collect(name, "", &mut vec![], &mut checks, &mut groups)?;
        let mut seen = std::collections::BTreeSet::new();
        for c in &checks {
            if !seen.insert(c.name.clone()) {
                return Err(Error::InvalidConfig(format!("check `{}` appears twice", c.name)));
            }
        }
        Ok((checks, groups))
    }

    fn collect(
        &self,
        name: &str,
        prefix: &str,
        path: &mut Vec<String>,
        checks: &mut Vec<CheckSpec>,
        groups: &mut Vec<GroupSpec>,
    ) -> Result<()> {
        if path.iter().any(|p| p == name) {
            return Err(Error::InvalidConfig(format!("suite `{name}` includes itself")));
        }
        let s = self.get(name)?;
        path.push(name.to_string());
        for inc in &s.include {
            self.collect(inc, &format!("{prefix}{inc}/"), path, checks, groups)?;
        }
        path.pop();
        for c in &s.checks {
            let mut c = c.clone();
            c.name = format!("{prefix}{}", c.name);
            checks.push(c);
        }
        groups.extend(s.groups.iter().cloned());
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub claim: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    pub verdict: Status,
    pub max_deviation: Option<f64>,
    pub witness: Option<String>,
    pub points: Option<usize>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationBlock {
    pub table: String,
    pub relations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupReport {
    pub title: String,
    pub tables: Vec<RelationBlock>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub about: String,
    pub config: SuiteConfig,
    pub groups: Vec<GroupReport>,
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.summary.passed == self.summary.total
    }

    /// Process exit status: 0 iff every verdict is a pass.
    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn record(&self, name: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.name == name)
    }
}

/// FNV-1a, so per-check seeds do not depend on check order.
fn name_hash(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Seed used by check `name` under run seed `seed`.
pub fn check_seed(seed: u64, name: &str) -> u64 {
    seed.wrapping_add(name_hash(name))
}

pub fn load_context(config: &SuiteConfig) -> Result<Ctx> {
    let dir = config.data_dir.as_deref();
    let lie = match dir {
        Some(d) => LieData::load(&d.join("lie.json"))?,
        None => LieData::builtin()?,
    };
    Ok(Ctx { lie, catalog: Catalog::open(dir)?, charts: chart_specs(dir)?, params: config.params.point() })
}

pub fn run_suite(config: &SuiteConfig) -> Result<Report> {
    config.validate()?;
    let suites = Suites::open(config.data_dir.as_deref())?;
    let spec = suites.get(&config.suite)?;
    let (checks, groups) = suites.resolve(&config.suite)?;
    let ctx = load_context(config)?;
    for c in &checks {
        c.op.validate(&ctx).map_err(|e| Error::InvalidConfig(format!("check `{}`: {e}", c.name)))?;
    }

    let mut records: Vec<CheckRecord> = checks.par_iter().map(|c| run_check(&ctx, config, c)).collect();
    records.sort_by(|a, b| a.name.cmp(&b.name));

    let mut summary = Summary { total: records.len(), ..Summary::default() };
    for r in &records {
        match r.verdict {
            Status::Pass => summary.passed += 1,
            Status::Fail => summary.failed += 1,
            Status::Skip => summary.skipped += 1,
        }
    }
    let groups = groups
        .iter()
        .map(|g| {
            let tables = g
                .tables
                .iter()
                .map(|t| Ok(RelationBlock { table: t.clone(), relations: ops::relation_lines(&ctx.catalog, t)? }))
                .collect::<Result<Vec<_>>>()?;
            Ok(GroupReport { title: g.title.clone(), tables })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Report { suite: spec.name.clone(), about: spec.about.clone(), config: config.clone(), groups, records, summary })
}

fn run_check(ctx: &Ctx, config: &SuiteConfig, c: &CheckSpec) -> CheckRecord {
    let seed = check_seed(config.sampling.seed, &c.name);
    let tol = c.op.fixed_tol().or(config.sampling.tol).or(c.tol);
    let points = config.sampling.points.or(c.points).unwrap_or(DEFAULT_POINTS);
    let start = Instant::now();
    let out = match c.op.run(ctx, Sampling { points, seed, tol }) {
        Ok(o) => o,
        Err(Error::UnassignedVariable(v)) => Outcome::skipped(format!("`{v}` has no real value at these parameters")),
        Err(e) => Outcome {
            status: Status::Fail,
            max_deviation: None,
            witness: Some(format!("error: {e}")),
            points: None,
        },
    };
    let runtime_ms = config.output.timings.then(|| start.elapsed().as_millis() as u64);
    CheckRecord {
        name: c.name.clone(),
        claim: c.claim.clone(),
        group: c.group.clone(),
        verdict: out.status,
        max_deviation: out.max_deviation,
        witness: out.witness,
        points: out.points,
        seed,
        runtime_ms,
    }
}

pub fn report_json(r: &Report) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("reports serialize");
    s.push('\n');
    s
}

fn cell(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Skip => "skip",
    }
}

fn record_table(out: &mut String, recs: &[&CheckRecord], timings: bool) {
    out.push_str(if timings {
        "| check | claim | verdict | max deviation | witness | ms |\n|---|---|---|---|---|---|\n"
    } else {
        "| check | claim | verdict | max deviation | witness |\n|---|---|---|---|---|\n"
    });
    for r in recs {
        let dev = r.max_deviation.map(|d| format!("{d:.3e}")).unwrap_or_default();
        let _ = write!(
            out,
            "| {} | {} | {} | {} | {} |",
            cell(&r.name),
            cell(&r.claim),
            status_word(r.verdict),
            dev,
            cell(r.witness.as_deref().unwrap_or(""))
        );
        if timings {
            let _ = write!(out, " {} |", r.runtime_ms.map(|m| m.to_string()).unwrap_or_default());
        }
        out.push('\n');
    }
}

pub fn report_markdown(r: &Report) -> String {
    let s = &r.summary;
    let mut out = format!("# {}\n\n", r.suite);
    if !r.about.is_empty() {
        let _ = writeln!(out, "{}\n", r.about);
    }
    let _ = writeln!(
        out,
        "{} checks: {} passed, {} failed, {} skipped. Seed {}.\n",
        s.total, s.passed, s.failed, s.skipped, r.config.sampling.seed
    );
    if r.records.is_empty() {
        return out;
    }
    let timings = r.config.output.timings;
    for g in &r.groups {
        let _ = writeln!(out, "## {}\n", g.title);
        for t in &g.tables {
            let _ = writeln!(out, "`{}`\n\n| relation |\n|---|", t.table);
            for line in &t.relations {
                let _ = writeln!(out, "| {} |", cell(line));
            }
            out.push('\n');
        }
        let recs: Vec<_> = r.records.iter().filter(|c| c.group.as_deref() == Some(g.title.as_str())).collect();
        if !recs.is_empty() {
            record_table(&mut out, &recs, timings);
            out.push('\n');
        }
    }
    let titles: Vec<&str> = r.groups.iter().map(|g| g.title.as_str()).collect();
    let rest: Vec<_> =
        r.records.iter().filter(|c| !c.group.as_deref().is_some_and(|g| titles.contains(&g))).collect();
    if !rest.is_empty() {
        if !r.groups.is_empty() {
            out.push_str("## Other checks\n\n");
        }
        record_table(&mut out, &rest, timings);
    }
    out
}

pub fn render(r: &Report, format: Format) -> String {
    match format {
        Format::Json => report_json(r),
        Format::Markdown => report_markdown(r),
    }
}

pub fn export_report(r: &Report, format: Format, path: &Path) -> Result<()> {
    std::fs::write(path, render(r, format))?;
    Ok(())
}

pub fn load_report(path: &Path) -> Result<Report> {
    let src = std::fs::read_to_string(path)
        .map_err(|source| Error::MissingData { path: path.display().to_string(), source })?;
    Ok(serde_json::from_str(&src)?)
}

#[cfg(test)]
mod tests;
