//! Hypothesis classes seen through their restrictions to finite datapoint tuples.

use std::collections::BTreeSet;
use std::fmt;

use crate::budget::DEFAULT_NODE_BUDGET;
use crate::error::{Error, Result};
use crate::label::{Label, Labeling, Point};
use crate::scalar::Rational;

/// A hypothesis class `H ⊆ Y^X`, accessed only through `H|_S`.
pub trait LabelingFamily: Send + Sync + fmt::Debug {
    /// The finite label set `Y`, sorted ascending.
    fn label_space(&self) -> Vec<Label>;

    /// `H|_S`: deduplicated, sorted lexicographically, at most `budget` entries.
    fn restrict_within(&self, points: &[Point], budget: usize) -> Result<Vec<Labeling>>;

    fn restrict(&self, points: &[Point]) -> Result<Vec<Labeling>> {
        self.restrict_within(points, DEFAULT_NODE_BUDGET)
    }
}

fn finish(set: BTreeSet<Labeling>, budget: usize) -> Result<Vec<Labeling>> {
    if set.len() > budget {
        return Err(Error::Capacity { what: "restriction H|_S", budget });
    }
    Ok(set.into_iter().collect())
}

fn insert_within(set: &mut BTreeSet<Labeling>, y: Labeling, budget: usize) -> Result<()> {
    set.insert(y);
    if set.len() > budget {
        return Err(Error::Capacity { what: "restriction H|_S", budget });
    }
    Ok(())
}

/// A finite class given as a table of label vectors over a fixed domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitTable {
    domain: Vec<Point>,
    labels: Vec<Label>,
    rows: Vec<Labeling>,
}

impl ExplicitTable {
    pub fn new(domain: Vec<Point>, labels: Vec<Label>, rows: Vec<Labeling>) -> Result<Self> {
        let distinct: BTreeSet<_> = domain.iter().collect();
        if distinct.len() != domain.len() {
            return Err(Error::Invalid("explicit table domain has repeated points".into()));
        }
        let mut labels = labels;
        labels.sort();
        labels.dedup();
        for row in &rows {
            if row.len() != domain.len() {
                return Err(Error::LengthMismatch { expected: domain.len(), found: row.len() });
            }
            if let Some(l) = row.entries().iter().find(|l| labels.binary_search(l).is_err()) {
                return Err(Error::Invalid(format!("hypothesis uses label {l} outside the label space")));
            }
        }
        Ok(ExplicitTable { domain, labels, rows })
    }

    /// A table over the domain `0, 1, ..., n-1` with labels taken from the rows.
    pub fn from_rows(rows: Vec<Labeling>) -> Result<Self> {
        let n = rows.first().map_or(0, Labeling::len);
        let labels: BTreeSet<Label> = rows.iter().flat_map(|r| r.entries().iter().copied()).collect();
        let domain = (0..n as i64).map(Point::scalar).collect();
        ExplicitTable::new(domain, labels.into_iter().collect(), rows)
    }

    pub fn domain(&self) -> &[Point] {
        &self.domain
    }

    pub fn rows(&self) -> &[Labeling] {
        &self.rows
    }

    fn index_of(&self, p: &Point) -> Result<usize> {
        self.domain
            .iter()
            .position(|q| q == p)
            .ok_or_else(|| Error::UnknownPoint(p.to_string()))
    }
}

impl LabelingFamily for ExplicitTable {
    fn label_space(&self) -> Vec<Label> {
        self.labels.clone()
    }

    fn restrict_within(&self, points: &[Point], budget: usize) -> Result<Vec<Labeling>> {
        let idx = points.iter().map(|p| self.index_of(p)).collect::<Result<Vec<_>>>()?;
        let mut set = BTreeSet::new();
        for row in &self.rows {
            insert_within(&mut set, idx.iter().map(|&i| row.get(i)).collect(), budget)?;
        }
        finish(set, budget)
    }
}

fn one_dim(p: &Point) -> Result<Rational> {
    match p.coords() {
        [x] => Ok(*x),
        c => Err(Error::Dimension { expected: 1, found: c.len() }),
    }
}

/// Thresholds on the rational line: `h_t(x) = 1` iff `x > t`, for every
/// `t ∈ ℚ ∪ {-∞, +∞}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Thresholds;

impl LabelingFamily for Thresholds {
    fn label_space(&self) -> Vec<Label> {
        vec![Label::negative(), Label::positive()]
    }

    fn restrict_within(&self, points: &[Point], budget: usize) -> Result<Vec<Labeling>> {
        let xs = points.iter().map(one_dim).collect::<Result<Vec<_>>>()?;
        let label = |t: Option<Rational>| -> Labeling {
            xs.iter()
                .map(|&x| match t {
                    Some(t) if x <= t => Label::negative(),
                    _ => Label::positive(),
                })
                .collect()
        };
        let mut set = BTreeSet::new();
        // t = -∞ labels everything positive; t at the largest point labels everything negative.
        insert_within(&mut set, label(None), budget)?;
        for &t in &xs {
            insert_within(&mut set, label(Some(t)), budget)?;
        }
        finish(set, budget)
    }
}

/// Closed axis-aligned boxes in `d` dimensions; points inside are positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AxisAlignedRectangles {
    pub d: usize,
}

impl AxisAlignedRectangles {
    pub fn new(d: usize) -> Self {
        AxisAlignedRectangles { d }
    }

    fn check_dims(&self, points: &[Point]) -> Result<()> {
        match points.iter().find(|p| p.dim() != self.d) {
            Some(p) => Err(Error::Dimension { expected: self.d, found: p.dim() }),
            None => Ok(()),
        }
    }
}

impl LabelingFamily for AxisAlignedRectangles {
    fn label_space(&self) -> Vec<Label> {
        vec![Label::negative(), Label::positive()]
    }

    /// Every nonempty realizable positive set equals the set of points inside
    /// its own bounding box, whose faces sit at datapoint coordinates, so it is
    /// enough to enumerate boxes whose bounds are coordinate values.
    fn restrict_within(&self, points: &[Point], budget: usize) -> Result<Vec<Labeling>> {
        self.check_dims(points)?;
        let intervals: Vec<Vec<(Rational, Rational)>> = (0..self.d)
            .map(|axis| {
                let vals: Vec<Rational> = points
                    .iter()
                    .map(|p| p.coords()[axis])
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect();
                let mut iv = Vec::new();
                for (a, &lo) in vals.iter().enumerate() {
                    for &hi in &vals[a..] {
                        iv.push((lo, hi));
                    }
                }
                iv
            })
            .collect();
        let mut set = BTreeSet::new();
        insert_within(&mut set, points.iter().map(|_| Label::negative()).collect(), budget)?;
        if points.is_empty() {
            return finish(set, budget);
        }
        let mut choice = vec![0usize; self.d];
        loop {
            let y: Labeling = points
                .iter()
                .map(|p| {
                    let inside = (0..self.d).all(|ax| {
                        let (lo, hi) = intervals[ax][choice[ax]];
                        lo <= p.coords()[ax] && p.coords()[ax] <= hi
                    });
                    if inside {
                        Label::positive()
                    } else {
                        Label::negative()
                    }
                })
                .collect();
            insert_within(&mut set, y, budget)?;
            let mut ax = 0;
            loop {
                if ax == self.d {
                    return finish(set, budget);
                }
                choice[ax] += 1;
                if choice[ax] < intervals[ax].len() {
                    break;
                }
                choice[ax] = 0;
                ax += 1;
            }
        }
    }
}

/// Largest subset of `pool` shattered by a binary family.
pub fn vc_dimension(family: &dyn LabelingFamily, pool: &[Point]) -> Result<usize> {
    const MAX_POOL: usize = 20;
    let labels = family.label_space();
    if labels.len() != 2 {
        return Err(Error::NotBinary(labels.len()));
    }
    if pool.len() > MAX_POOL {
        return Err(Error::Capacity { what: "VC dimension pool", budget: MAX_POOL });
    }
    let m = pool.len();
    let mut best = 0;
    for k in 1..=m {
        let mut found = false;
        for mask in 0u32..(1u32 << m) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let subset: Vec<Point> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| pool[i].clone()).collect();
            if family.restrict_within(&subset, 1 << k)?.len() == 1 << k {
                found = true;
                break;
            }
        }
        // Subsets of shattered sets are shattered, so the first failing size ends the search.
        if !found {
            break;
        }
        best = k;
    }
    Ok(best)
}

/// `Φ_d(n) = Σ_{i ≤ d} C(n, i)`.
pub fn growth_function(n: usize, d: usize) -> u128 {
    let mut total = 0u128;
    let mut c = 1u128;
    for i in 0..=d.min(n) {
        if i > 0 {
            c = c * (n - i + 1) as u128 / i as u128;
        }
        total += c;
    }
    total
}

/// A finite sub-problem: some points, some of their labelings, some labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteProjection {
    pub sub_points: Vec<Point>,
    pub sub_hypotheses: Vec<Labeling>,
    pub sub_labels: Vec<Label>,
}

/// Restricts `family` to a finite projection, as an explicit table.
///
/// Fails if a retained hypothesis uses a dropped label or is not a
/// restriction of the family to `sub_points`.
pub fn project(family: &dyn LabelingFamily, proj: &FiniteProjection, budget: usize) -> Result<ExplicitTable> {
    let realized = family.restrict_within(&proj.sub_points, budget)?;
    let labels: BTreeSet<Label> = proj.sub_labels.iter().copied().collect();
    let mut rows = BTreeSet::new();
    for h in &proj.sub_hypotheses {
        if h.len() != proj.sub_points.len() {
            return Err(Error::LengthMismatch { expected: proj.sub_points.len(), found: h.len() });
        }
        if let Some(l) = h.entries().iter().find(|l| !labels.contains(l)) {
            return Err(Error::InconsistentProjection(format!("hypothesis {h} uses dropped label {l}")));
        }
        if realized.binary_search(h).is_err() {
            return Err(Error::InconsistentProjection(format!("{h} is not realized by the family")));
        }
        rows.insert(h.clone());
    }
    ExplicitTable::new(proj.sub_points.clone(), labels.into_iter().collect(), rows.into_iter().collect())
}
