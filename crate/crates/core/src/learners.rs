//! Transductive learners and exact evaluation of their errors.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::family::LabelingFamily;
use crate::label::{all_labelings, Label, Labeling, PartialLabeling, Point};
use crate::loss::{best_in_class_loss, LossFunction};
use crate::matching::{optimal_orientation, OrientationResult};
use crate::oig::{build_bipartite_oig, BipartiteOig};
use crate::scalar::Scalar;

/// Realizable truths come from `H|_S`; agnostic truths range over `Y^n`
/// and are scored relative to the best hypothesis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Setting {
    Realizable,
    Agnostic,
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Setting::Realizable => "realizable",
            Setting::Agnostic => "agnostic",
        })
    }
}

/// A learner for the fill-in-the-blank game: sees the whole datapoint tuple
/// and every label but one, and predicts the missing label.
pub trait TransductiveLearner: Send + Sync {
    fn name(&self) -> String;

    fn predict(&self, points: &[Point], observed: &PartialLabeling) -> Result<Label>;

    /// Evaluation entry point. Only lower-bound constructions look at `truth`.
    fn predict_with_truth(&self, points: &[Point], observed: &PartialLabeling, truth: Label) -> Result<Label> {
        let _ = truth;
        self.predict(points, observed)
    }
}

impl<L: TransductiveLearner + ?Sized> TransductiveLearner for Arc<L> {
    fn name(&self) -> String {
        (**self).name()
    }

    fn predict(&self, points: &[Point], observed: &PartialLabeling) -> Result<Label> {
        (**self).predict(points, observed)
    }

    fn predict_with_truth(&self, points: &[Point], observed: &PartialLabeling, truth: Label) -> Result<Label> {
        (**self).predict_with_truth(points, observed, truth)
    }
}

fn check_len(points: &[Point], observed: &PartialLabeling) -> Result<()> {
    if points.len() != observed.len() {
        return Err(Error::LengthMismatch { expected: points.len(), found: observed.len() });
    }
    Ok(())
}

/// Always predicts the same label.
#[derive(Clone, Debug)]
pub struct ConstantLearner(pub Label);

impl TransductiveLearner for ConstantLearner {
    fn name(&self) -> String {
        format!("constant({})", self.0)
    }

    fn predict(&self, points: &[Point], observed: &PartialLabeling) -> Result<Label> {
        check_len(points, observed)?;
        Ok(self.0)
    }
}

/// A learner given by a left-to-right assignment on a bipartite OIG.
///
/// Scenarios that are not left nodes of the graph get the least label.
#[derive(Clone, Debug)]
pub struct OigLearner {
    oig: BipartiteOig,
    assignment: Vec<usize>,
}

impl OigLearner {
    pub fn from_assignment(oig: BipartiteOig, assignment: Vec<usize>) -> Result<Self> {
        let g = oig.graph();
        if assignment.len() != g.left_count() {
            return Err(Error::LengthMismatch { expected: g.left_count(), found: assignment.len() });
        }
        if let Some(l) = (0..g.left_count()).find(|&l| !g.has_edge(l, assignment[l])) {
            return Err(Error::Invalid(format!("left node {l} is assigned to a non-neighbor")));
        }
        Ok(OigLearner { oig, assignment })
    }

    pub fn oig(&self) -> &BipartiteOig {
        &self.oig
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    fn lookup(&self, observed: &PartialLabeling) -> Result<Label> {
        if observed.len() != self.oig.n() {
            return Err(Error::Dimension { expected: self.oig.n(), found: observed.len() });
        }
        Ok(match self.oig.left_index(observed) {
            Some(l) => self.oig.right()[self.assignment[l]].get(observed.hole()),
            None => *self.oig.label_space().first().ok_or(Error::Empty("label space"))?,
        })
    }
}

/// The learner induced by an orientation of `oig`.
pub fn oig_learner(orientation: &OrientationResult, oig: &BipartiteOig) -> Result<OigLearner> {
    OigLearner::from_assignment(oig.clone(), orientation.assignment.clone())
}

impl TransductiveLearner for OigLearner {
    fn name(&self) -> String {
        "oig".into()
    }

    fn predict(&self, points: &[Point], observed: &PartialLabeling) -> Result<Label> {
        check_len(points, observed)?;
        self.lookup(observed)
    }
}

/// Builds the realizable OIG of the family on each query tuple and plays an
/// optimal orientation of it. Orientations are cached per tuple.
pub struct OptimalLearner {
    family: Arc<dyn LabelingFamily>,
    budget: Budget,
    cache: Mutex<HashMap<Vec<Point>, Arc<OigLearner>>>,
    cache_limit: usize,
}

impl OptimalLearner {
    pub fn new(family: Arc<dyn LabelingFamily>, budget: Budget) -> Self {
        OptimalLearner { family, budget, cache: Mutex::new(HashMap::new()), cache_limit: 4096 }
    }

    pub fn learner_for(&self, points: &[Point]) -> Result<Arc<OigLearner>> {
        if let Some(l) = self.cache.lock().expect("cache lock").get(points) {
            return Ok(l.clone());
        }
        let rows = self.family.restrict_within(points, self.budget.nodes)?;
        let oig = build_bipartite_oig(&rows, &self.family.label_space(), &self.budget)?;
        let orientation = optimal_orientation(oig.graph())?;
        let learner = Arc::new(oig_learner(&orientation, &oig)?);
        let mut cache = self.cache.lock().expect("cache lock");
        if cache.len() >= self.cache_limit {
            cache.clear();
        }
        cache.insert(points.to_vec(), learner.clone());
        Ok(learner)
    }
}

impl fmt::Debug for OptimalLearner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OptimalLearner").field("family", &self.family).finish()
    }
}

impl TransductiveLearner for OptimalLearner {
    fn name(&self) -> String {
        "oig".into()
    }

    fn predict(&self, points: &[Point], observed: &PartialLabeling) -> Result<Label> {
        check_len(points, observed)?;
        self.learner_for(points)?.lookup(observed)
    }
}

/// How an ERM learner picks among the hole labels of its minimizers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieBreakPolicy {
    FirstLexicographic,
    /// Picks the candidate with the largest loss against the hidden truth.
    /// A lower-bound device; without a truth it behaves like `FirstLexicographic`.
    AdversarialOracle,
    /// A fixed pseudo-random choice per (seed, scenario).
    SeededRandom(u64),
}

/// Empirical risk minimization over `H|_S` on the observed coordinates.
#[derive(Debug)]
pub struct ErmLearner<T: Scalar> {
    family: Arc<dyn LabelingFamily>,
    policy: TieBreakPolicy,
    loss: LossFunction<T>,
    budget: Budget,
}

impl<T: Scalar> ErmLearner<T> {
    pub fn new(family: Arc<dyn LabelingFamily>, policy: TieBreakPolicy, loss: LossFunction<T>) -> Self {
        ErmLearner { family, policy, loss, budget: Budget::default() }
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    /// Sorted, deduplicated hole labels of the empirical risk minimizers.
    pub fn candidates(&self, points: &[Point], observed: &PartialLabeling) -> Result<Vec<Label>> {
        check_len(points, observed)?;
        let rows = self.family.restrict_within(points, self.budget.nodes)?;
        if rows.is_empty() {
            return Err(Error::Empty("restriction H|_S"));
        }
        let mut best: Option<T> = None;
        let mut out = Vec::new();
        for h in &rows {
            let mut risk = T::zero();
            for (i, y) in observed.observed() {
                risk += self.loss.try_eval(h.get(i), y)?;
            }
            let hole = h.get(observed.hole());
            match &best {
                Some(b) if risk > *b => {}
                Some(b) if risk == *b => out.push(hole),
                _ => {
                    best = Some(risk);
                    out = vec![hole];
                }
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    fn choose(&self, observed: &PartialLabeling, candidates: &[Label], truth: Option<Label>) -> Result<Label> {
        match (self.policy, truth) {
            (TieBreakPolicy::AdversarialOracle, Some(t)) => {
                let mut pick = candidates[0];
                let mut worst = self.loss.try_eval(pick, t)?;
                for &c in &candidates[1..] {
                    let l = self.loss.try_eval(c, t)?;
                    if l > worst {
                        worst = l;
                        pick = c;
                    }
                }
                Ok(pick)
            }
            (TieBreakPolicy::SeededRandom(seed), _) => {
                let k = scenario_hash(seed, observed) % candidates.len() as u64;
                Ok(candidates[k as usize])
            }
            _ => Ok(candidates[0]),
        }
    }
}

/// FNV-1a over the scenario; stable across platforms and releases.
pub(crate) fn scenario_hash(seed: u64, observed: &PartialLabeling) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed;
    let mut eat = |v: u64| {
        for b in v.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    };
    eat(observed.hole() as u64);
    for (i, y) in observed.observed() {
        eat(i as u64);
        eat(*y.value().numer() as u64);
        eat(*y.value().denom() as u64);
    }
    h
}

impl<T: Scalar> TransductiveLearner for ErmLearner<T> {
    fn name(&self) -> String {
        "erm".into()
    }

    fn predict(&self, points: &[Point], observed: &PartialLabeling) -> Result<Label> {
        let c = self.candidates(points, observed)?;
        self.choose(observed, &c, None)
    }

    fn predict_with_truth(&self, points: &[Point], observed: &PartialLabeling, truth: Label) -> Result<Label> {
        let c = self.candidates(points, observed)?;
        self.choose(observed, &c, Some(truth))
    }
}

/// Predicts `+` inside the bounding box of the observed positives.
#[derive(Clone, Copy, Debug)]
pub struct MinRectangleLearner {
    d: usize,
}

impl MinRectangleLearner {
    pub fn new(d: usize) -> Self {
        MinRectangleLearner { d }
    }
}

impl TransductiveLearner for MinRectangleLearner {
    fn name(&self) -> String {
        "minrect".into()
    }

    fn predict(&self, points: &[Point], observed: &PartialLabeling) -> Result<Label> {
        check_len(points, observed)?;
        if let Some(p) = points.iter().find(|p| p.dim() != self.d) {
            return Err(Error::Dimension { expected: self.d, found: p.dim() });
        }
        let (pos, neg) = (Label::positive(), Label::negative());
        let mut bounds: Option<Vec<(crate::Rational, crate::Rational)>> = None;
        for (i, y) in observed.observed() {
            if y == pos {
                let c = points[i].coords();
                bounds = Some(match bounds {
                    None => c.iter().map(|&v| (v, v)).collect(),
                    Some(b) => b.iter().zip(c).map(|(&(lo, hi), &v)| (lo.min(v), hi.max(v))).collect(),
                });
            } else if y != neg {
                return Err(Error::NotBinary(i));
            }
        }
        let Some(bounds) = bounds else { return Ok(neg) };
        let inside = |p: &Point| p.coords().iter().zip(&bounds).all(|(v, (lo, hi))| lo <= v && v <= hi);
        if let Some((i, _)) = observed.observed().find(|&(i, y)| y == neg && inside(&points[i])) {
            return Err(Error::Realizability(format!("negative point {} lies inside the positive bounding box", points[i])));
        }
        Ok(if inside(&points[observed.hole()]) { pos } else { neg })
    }
}

/// `(1/n) Σ_i ℓ(prediction with coordinate i hidden, y_i)`.
pub fn transductive_error<T: Scalar, L: TransductiveLearner + ?Sized>(
    learner: &L,
    points: &[Point],
    truth: &Labeling,
    loss: &LossFunction<T>,
) -> Result<T> {
    if points.len() != truth.len() {
        return Err(Error::LengthMismatch { expected: points.len(), found: truth.len() });
    }
    if truth.is_empty() {
        return Err(Error::Empty("datapoint tuple"));
    }
    let mut total = T::zero();
    for i in 0..truth.len() {
        let y = truth.get(i);
        let pred = learner.predict_with_truth(points, &truth.mask(i), y)?;
        total += loss.try_eval(pred, y)?;
    }
    Ok(total / T::from_count(truth.len()))
}

/// A worst-case ground truth and the learner's (excess) error on it.
#[derive(Clone, Debug, PartialEq)]
pub struct WorstCase<T> {
    pub error: T,
    pub witness: Labeling,
}

/// Maximum error over realizable truths `H|_S`, or maximum excess error
/// over all truths `Y^n` in the agnostic setting. The first maximizer in
/// lexicographic order is reported.
pub fn worst_case_error<T: Scalar, L: TransductiveLearner + ?Sized>(
    learner: &L,
    family: &dyn LabelingFamily,
    points: &[Point],
    setting: Setting,
    loss: &LossFunction<T>,
    budget: &Budget,
) -> Result<WorstCase<T>> {
    let restriction = family.restrict_within(points, budget.nodes)?;
    if restriction.is_empty() {
        return Err(Error::Empty("restriction H|_S"));
    }
    let truths = match setting {
        Setting::Realizable => restriction.clone(),
        Setting::Agnostic => all_labelings(&family.label_space(), points.len(), budget.agnostic_nodes)?,
    };
    let scores: Vec<T> = truths
        .par_iter()
        .map(|y| {
            let e = transductive_error(learner, points, y, loss)?;
            Ok(match setting {
                Setting::Realizable => e,
                Setting::Agnostic => e - best_in_class_loss(&restriction, y, loss)?,
            })
        })
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, s) in scores.iter().enumerate() {
        if *s > scores[best] {
            best = i;
        }
    }
    Ok(WorstCase { error: scores[best].clone(), witness: truths[best].clone() })
}
