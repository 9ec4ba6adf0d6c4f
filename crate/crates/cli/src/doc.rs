//! JSON documents: problems, FDS instances, experiment and sweep specs.
//!
//! Rationals and labels are strings (`"3"`, `"-1/2"`, `"0.25"`, `"+"`).
//! [`canonical_json`] renders a parsed document in normal form, so parsing
//! and re-serializing a canonical document is the identity.

use std::path::Path;
use std::sync::Arc;

use oiglab::family::{AxisAlignedRectangles, ExplicitTable, LabelingFamily, Thresholds};
use oiglab::fds::{Fds, FdsEdge, FdsVariable};
use oiglab::label::{parse_rational, Label, Labeling, Point};
use oiglab::pac::FiniteDistribution;
use oiglab::{Loss, Rational, Setting};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

// serde ignores `deny_unknown_fields` on internally tagged enums, so the
// tagged documents below deserialize through strict flat structs.

/// Errors unless exactly the fields in `allowed` are present among `present`.
fn only_fields(kind: &str, present: &[(&str, bool)], allowed: &[&str]) -> Result<(), String> {
    for (name, set) in present {
        let ok = allowed.contains(name);
        if *set && !ok {
            return Err(format!("unknown field `{name}` for kind `{kind}`"));
        }
        if !*set && ok {
            return Err(format!("missing field `{name}` for kind `{kind}`"));
        }
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyRaw {
    kind: String,
    labels: Option<Vec<String>>,
    domain: Option<Vec<Vec<String>>>,
    rows: Option<Vec<Vec<String>>>,
    d: Option<usize>,
}

impl TryFrom<FamilyRaw> for FamilyDoc {
    type Error = String;
    fn try_from(r: FamilyRaw) -> Result<Self, String> {
        let present = [("labels", r.labels.is_some()), ("rows", r.rows.is_some()), ("d", r.d.is_some())];
        let domain_ok = r.domain.is_none() || r.kind == "table";
        if !domain_ok {
            return Err(format!("unknown field `domain` for kind `{}`", r.kind));
        }
        match r.kind.as_str() {
            "table" => {
                only_fields("table", &present, &["labels", "rows"])?;
                Ok(FamilyDoc::Table { labels: r.labels.unwrap_or_default(), domain: r.domain, rows: r.rows.unwrap_or_default() })
            }
            "thresholds" => only_fields("thresholds", &present, &[]).map(|_| FamilyDoc::Thresholds),
            "rectangles" => only_fields("rectangles", &present, &["d"]).map(|_| FamilyDoc::Rectangles { d: r.d.unwrap_or_default() }),
            k => Err(format!("unknown variant `{k}`, expected one of `table`, `thresholds`, `rectangles`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", try_from = "FamilyRaw")]
pub enum FamilyDoc {
    Table {
        labels: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<Vec<Vec<String>>>,
        rows: Vec<Vec<String>>,
    },
    Thresholds,
    Rectangles {
        d: usize,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SettingDoc {
    #[default]
    Realizable,
    Agnostic,
}

impl From<SettingDoc> for Setting {
    fn from(s: SettingDoc) -> Self {
        match s {
            SettingDoc::Realizable => Setting::Realizable,
            SettingDoc::Agnostic => Setting::Agnostic,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LossEntryDoc {
    pub predicted: String,
    pub truth: String,
    pub value: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LossRaw {
    kind: String,
    entries: Option<Vec<LossEntryDoc>>,
}

impl TryFrom<LossRaw> for LossDoc {
    type Error = String;
    fn try_from(r: LossRaw) -> Result<Self, String> {
        let present = [("entries", r.entries.is_some())];
        let (allowed, doc): (&[&str], _) = match r.kind.as_str() {
            "zero_one" => (&[], LossDoc::ZeroOne),
            "absolute" => (&[], LossDoc::Absolute),
            "squared" => (&[], LossDoc::Squared),
            "table" => (&["entries"], LossDoc::Table { entries: r.entries.clone().unwrap_or_default() }),
            k => return Err(format!("unknown variant `{k}`, expected one of `zero_one`, `absolute`, `squared`, `table`")),
        };
        only_fields(&r.kind, &present, allowed).map(|_| doc)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", try_from = "LossRaw")]
pub enum LossDoc {
    #[default]
    ZeroOne,
    Absolute,
    Squared,
    Table {
        entries: Vec<LossEntryDoc>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleDoc {
    pub point: Vec<String>,
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
}

/// A finite distribution; omit every weight for the uniform distribution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionDoc {
    pub support: Vec<SampleDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDoc {
    pub family: FamilyDoc,
    /// The datapoint tuple; defaults to the domain of a table family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub setting: SettingDoc,
    #[serde(default)]
    pub loss: LossDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distribution: Option<DistributionDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FdsLeftDoc {
    pub name: String,
    pub domain: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FdsEdgeDoc {
    pub left: String,
    pub right: String,
    /// One cost per value of the left domain, in domain order.
    pub costs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FdsDoc {
    pub left: Vec<FdsLeftDoc>,
    pub right: Vec<String>,
    pub edges: Vec<FdsEdgeDoc>,
}

/// Reads and parses a JSON document, reporting syntax and shape errors with line and column.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_json(&text, &path.display().to_string())
}

pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| {
        let full = e.to_string();
        let suffix = format!(" at line {} column {}", e.line(), e.column());
        let message = full.strip_suffix(&suffix).unwrap_or(&full).to_string();
        CliError::Parse { origin: origin.to_string(), line: e.line(), column: e.column(), message }
    })
}

/// Pretty JSON with a trailing newline.
pub fn canonical_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn rational(s: &str) -> CliResult<Rational> {
    Ok(parse_rational(s)?)
}

fn label(s: &str) -> CliResult<Label> {
    Ok(s.parse::<Label>()?)
}

fn point(coords: &[String]) -> CliResult<Point> {
    if coords.is_empty() {
        return Err(CliError::Invalid("a point needs at least one coordinate".into()));
    }
    Ok(Point(coords.iter().map(|c| rational(c)).collect::<CliResult<_>>()?))
}

fn norm_rational(s: &str) -> CliResult<String> {
    Ok(rational(s)?.to_string())
}

fn norm_label(s: &str) -> CliResult<String> {
    Ok(label(s)?.to_string())
}

fn norm_points(points: &[Vec<String>]) -> CliResult<Vec<Vec<String>>> {
    points.iter().map(|p| p.iter().map(|c| norm_rational(c)).collect()).collect()
}

fn points(points: &[Vec<String>]) -> CliResult<Vec<Point>> {
    points.iter().map(|p| point(p)).collect()
}

/// A problem with every string parsed into library values.
#[derive(Clone, Debug)]
pub struct Problem {
    pub family: Arc<dyn LabelingFamily>,
    pub points: Vec<Point>,
    pub setting: Setting,
    pub loss: Loss,
    pub distribution: Option<FiniteDistribution<Rational>>,
    /// Dimension for the minimal-rectangle learners.
    pub dim: usize,
}

impl ProblemDoc {
    /// The same problem with every number and label in normal form.
    pub fn canonical(&self) -> CliResult<ProblemDoc> {
        let family = match &self.family {
            FamilyDoc::Table { labels, domain, rows } => FamilyDoc::Table {
                labels: labels.iter().map(|l| norm_label(l)).collect::<CliResult<_>>()?,
                domain: domain.as_deref().map(norm_points).transpose()?,
                rows: rows.iter().map(|r| r.iter().map(|l| norm_label(l)).collect()).collect::<CliResult<_>>()?,
            },
            other => other.clone(),
        };
        let loss = match &self.loss {
            LossDoc::Table { entries } => LossDoc::Table {
                entries: entries
                    .iter()
                    .map(|e| {
                        Ok(LossEntryDoc { predicted: norm_label(&e.predicted)?, truth: norm_label(&e.truth)?, value: norm_rational(&e.value)? })
                    })
                    .collect::<CliResult<_>>()?,
            },
            other => other.clone(),
        };
        let distribution = match &self.distribution {
            None => None,
            Some(d) => Some(DistributionDoc {
                support: d
                    .support
                    .iter()
                    .map(|s| {
                        Ok(SampleDoc {
                            point: s.point.iter().map(|c| norm_rational(c)).collect::<CliResult<_>>()?,
                            label: norm_label(&s.label)?,
                            weight: s.weight.as_deref().map(norm_rational).transpose()?,
                        })
                    })
                    .collect::<CliResult<_>>()?,
            }),
        };
        Ok(ProblemDoc { family, points: self.points.as_deref().map(norm_points).transpose()?, setting: self.setting, loss, distribution })
    }

    pub fn compile(&self) -> CliResult<Problem> {
        let (family, default_points): (Arc<dyn LabelingFamily>, Option<Vec<Point>>) = match &self.family {
            FamilyDoc::Table { labels, domain, rows } => {
                let labels: Vec<Label> = labels.iter().map(|l| label(l)).collect::<CliResult<_>>()?;
                let rows: Vec<Labeling> =
                    rows.iter().map(|r| r.iter().map(|l| label(l)).collect::<CliResult<Labeling>>()).collect::<CliResult<_>>()?;
                let width = rows.first().map_or(0, Labeling::len);
                let domain = match domain {
                    Some(d) => points(d)?,
                    None => (0..width as i64).map(Point::scalar).collect(),
                };
                let table = ExplicitTable::new(domain.clone(), labels, rows)?;
                (Arc::new(table), Some(domain))
            }
            FamilyDoc::Thresholds => (Arc::new(Thresholds), None),
            FamilyDoc::Rectangles { d } => (Arc::new(AxisAlignedRectangles::new(*d)), None),
        };
        let pts = match (&self.points, default_points) {
            (Some(p), _) => points(p)?,
            (None, Some(p)) => p,
            (None, None) => return Err(CliError::Invalid("this family needs an explicit \"points\" list".into())),
        };
        let loss = match &self.loss {
            LossDoc::ZeroOne => Loss::ZeroOne,
            LossDoc::Absolute => Loss::Absolute,
            LossDoc::Squared => Loss::Squared,
            LossDoc::Table { entries } => Loss::table(
                entries.iter().map(|e| Ok(((label(&e.predicted)?, label(&e.truth)?), rational(&e.value)?))).collect::<CliResult<Vec<_>>>()?,
            )?,
        };
        let distribution = self.distribution.as_ref().map(compile_distribution).transpose()?;
        let dim = match &self.family {
            FamilyDoc::Rectangles { d } => *d,
            _ => pts.first().map_or(1, Point::dim),
        };
        Ok(Problem { family, points: pts, setting: self.setting.into(), loss, distribution, dim })
    }
}

fn compile_distribution(d: &DistributionDoc) -> CliResult<FiniteDistribution<Rational>> {
    let support: Vec<(Point, Label)> = d.support.iter().map(|s| Ok((point(&s.point)?, label(&s.label)?))).collect::<CliResult<_>>()?;
    let given = d.support.iter().filter(|s| s.weight.is_some()).count();
    if given == 0 {
        return Ok(FiniteDistribution::uniform(support)?);
    }
    if given != d.support.len() {
        return Err(CliError::Invalid("give a weight for every support point or for none".into()));
    }
    let weights = d.support.iter().map(|s| rational(s.weight.as_deref().expect("checked"))).collect::<CliResult<_>>()?;
    Ok(FiniteDistribution::new(support, weights)?)
}

impl FdsDoc {
    pub fn canonical(&self) -> CliResult<FdsDoc> {
        let mut doc = self.clone();
        for e in &mut doc.edges {
            e.costs = e.costs.iter().map(|c| norm_rational(c)).collect::<CliResult<_>>()?;
        }
        Ok(doc)
    }

    pub fn compile(&self) -> CliResult<Fds> {
        let find = |names: Vec<&String>, wanted: &str, side: &str| -> CliResult<usize> {
            names.iter().position(|n| n.as_str() == wanted).ok_or_else(|| CliError::Invalid(format!("edge names unknown {side} node {wanted:?}")))
        };
        let left: Vec<FdsVariable> = self.left.iter().map(|l| FdsVariable { name: l.name.clone(), domain: l.domain.clone() }).collect();
        let edges = self
            .edges
            .iter()
            .map(|e| {
                Ok(FdsEdge {
                    left: find(self.left.iter().map(|l| &l.name).collect(), &e.left, "left")?,
                    right: find(self.right.iter().collect(), &e.right, "right")?,
                    costs: e.costs.iter().map(|c| rational(c)).collect::<CliResult<_>>()?,
                })
            })
            .collect::<CliResult<_>>()?;
        Ok(Fds::new(left, self.right.clone(), edges)?)
    }

    pub fn from_fds(fds: &Fds) -> FdsDoc {
        FdsDoc {
            left: fds.left().iter().map(|v| FdsLeftDoc { name: v.name.clone(), domain: v.domain.clone() }).collect(),
            right: fds.right().to_vec(),
            edges: fds
                .edges()
                .iter()
                .map(|e| FdsEdgeDoc {
                    left: fds.left()[e.left].name.clone(),
                    right: fds.right()[e.right].clone(),
                    costs: e.costs.iter().map(Rational::to_string).collect(),
                })
                .collect(),
        }
    }
}

/// Where a spec finds its problem: inline, or a path relative to the spec file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Source<T> {
    Inline(T),
    File(String),
}

impl<T: DeserializeOwned + Clone> Source<T> {
    pub fn load(&self, base: Option<&Path>) -> CliResult<T> {
        match self {
            Source::Inline(doc) => Ok(doc.clone()),
            Source::File(p) => {
                let path = match base {
                    Some(dir) => dir.join(p),
                    None => p.into(),
                };
                read_json(&path)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskKind {
    BuildOig,
    Orient,
    Hall,
    Mad,
    Evaluate,
    PacEval,
    Reduce,
    FdsSolve,
    FdsMinmax,
    FdsEncode,
    Compactness,
}

impl TaskKind {
    pub fn name(self) -> &'static str {
        match self {
            TaskKind::BuildOig => "build-oig",
            TaskKind::Orient => "orient",
            TaskKind::Hall => "hall",
            TaskKind::Mad => "mad",
            TaskKind::Evaluate => "evaluate",
            TaskKind::PacEval => "pac-eval",
            TaskKind::Reduce => "reduce",
            TaskKind::FdsSolve => "fds-solve",
            TaskKind::FdsMinmax => "fds-minmax",
            TaskKind::FdsEncode => "fds-encode",
            TaskKind::Compactness => "compactness",
        }
    }

    pub fn needs_fds(self) -> bool {
        matches!(self, TaskKind::FdsSolve | TaskKind::FdsMinmax)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum LearnerKind {
    Oig,
    Erm,
    Minrect,
    Nearest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum TieBreakKind {
    Lex,
    Adversarial,
    Seeded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    T2p,
    P2t,
}

/// Task parameters; which ones are required depends on the task.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holdout_eps: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub learner: Option<LearnerKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tie_break: Option<TieBreakKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Direction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub setting: Option<SettingDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_subset: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget_nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget_subsets: Option<usize>,
}

impl Params {
    pub fn canonical(&self) -> CliResult<Params> {
        let mut p = self.clone();
        for field in [&mut p.eps, &mut p.delta, &mut p.holdout_eps] {
            *field = field.as_deref().map(norm_rational).transpose()?;
        }
        Ok(p)
    }

    /// Fills every unset field from `other`.
    pub fn or(&self, other: &Params) -> Params {
        Params {
            eps: self.eps.clone().or_else(|| other.eps.clone()),
            delta: self.delta.clone().or_else(|| other.delta.clone()),
            holdout_eps: self.holdout_eps.clone().or_else(|| other.holdout_eps.clone()),
            block: self.block.or(other.block),
            samples: self.samples.or(other.samples),
            trials: self.trials.or(other.trials),
            seed: self.seed.or(other.seed),
            learner: self.learner.or(other.learner),
            tie_break: self.tie_break.or(other.tie_break),
            direction: self.direction.or(other.direction),
            setting: self.setting.or(other.setting),
            max_subset: self.max_subset.or(other.max_subset),
            budget_nodes: self.budget_nodes.or(other.budget_nodes),
            budget_subsets: self.budget_subsets.or(other.budget_subsets),
        }
    }
}

/// A single experiment: one task on one problem (or FDS document).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub task: TaskKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<Source<ProblemDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fds: Option<Source<FdsDoc>>,
    #[serde(default)]
    pub params: Params,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

impl ExperimentDoc {
    pub fn canonical(&self) -> CliResult<ExperimentDoc> {
        let mut doc = self.clone();
        if let Some(Source::Inline(p)) = &doc.problem {
            doc.problem = Some(Source::Inline(p.canonical()?));
        }
        if let Some(Source::Inline(f)) = &doc.fds {
            doc.fds = Some(Source::Inline(f.canonical()?));
        }
        doc.params = doc.params.canonical()?;
        Ok(doc)
    }
}

/// How a sweep turns a grid value `n` into datapoints.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PointsGenRaw {
    kind: String,
    side: Option<usize>,
    pool: Option<Vec<Vec<String>>>,
}

impl TryFrom<PointsGenRaw> for PointsGen {
    type Error = String;
    fn try_from(r: PointsGenRaw) -> Result<Self, String> {
        let present = [("side", r.side.is_some()), ("pool", r.pool.is_some())];
        let (allowed, g): (&[&str], _) = match r.kind.as_str() {
            "line" => (&[], PointsGen::Line),
            "grid" => (&["side"], PointsGen::Grid { side: r.side.unwrap_or_default() }),
            "subsets" => (&["pool"], PointsGen::Subsets { pool: r.pool.clone().unwrap_or_default() }),
            k => return Err(format!("unknown variant `{k}`, expected one of `line`, `grid`, `subsets`")),
        };
        only_fields(&r.kind, &present, allowed).map(|_| g)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", try_from = "PointsGenRaw")]
pub enum PointsGen {
    /// `0, 1, ..., n-1` on the line.
    Line,
    /// The first `n` cells of a `side × side` grid in row-major order.
    Grid { side: usize },
    /// Every `n`-subset of `pool`; the sweep reports the worst one.
    Subsets { pool: Vec<Vec<String>> },
}

/// A task template evaluated at every grid value of `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepDoc {
    pub template: ExperimentDoc,
    pub points: PointsGen,
    pub grid: Vec<usize>,
}

impl SweepDoc {
    pub fn canonical(&self) -> CliResult<SweepDoc> {
        let points = match &self.points {
            PointsGen::Subsets { pool } => PointsGen::Subsets { pool: norm_points(pool)? },
            other => other.clone(),
        };
        Ok(SweepDoc { template: self.template.canonical()?, points, grid: self.grid.clone() })
    }

    pub fn generate(&self, n: usize) -> CliResult<Vec<Vec<Point>>> {
        match &self.points {
            PointsGen::Line => Ok(vec![(0..n as i64).map(Point::scalar).collect()]),
            PointsGen::Grid { side } => {
                if n > side * side {
                    return Err(CliError::Invalid(format!("a {side}x{side} grid has fewer than {n} cells")));
                }
                Ok(vec![(0..n).map(|i| Point::from_ints(&[(i / side) as i64, (i % side) as i64])).collect()])
            }
            PointsGen::Subsets { pool } => {
                let pool = points(pool)?;
                if n > pool.len() {
                    return Err(CliError::Invalid(format!("pool has fewer than {n} points")));
                }
                if pool.len() > 24 {
                    return Err(CliError::Budget("subset pool larger than 24 points".into()));
                }
                Ok((0u32..1 << pool.len())
                    .filter(|m| m.count_ones() as usize == n)
                    .map(|m| (0..pool.len()).filter(|i| m >> i & 1 == 1).map(|i| pool[i].clone()).collect())
                    .collect())
            }
        }
    }
}

/// Replaces the datapoints of a problem with `pts`.
pub fn with_points(doc: &ProblemDoc, pts: &[Point]) -> ProblemDoc {
    let mut doc = doc.clone();
    doc.points = Some(pts.iter().map(|p| p.coords().iter().map(Rational::to_string).collect()).collect());
    doc
}
