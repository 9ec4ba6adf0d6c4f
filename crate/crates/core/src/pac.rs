//! PAC-side simulation: finite distributions, PAC learners, and the two
//! reductions between PAC and transductive learners.

use std::collections::HashMap;
use std::sync::Arc;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::LabelingFamily;
use crate::label::{Dataset, Label, Labeling, PartialLabeling, Point};
use crate::learners::{scenario_hash, Setting, TransductiveLearner};
use crate::loss::LossFunction;
use crate::scalar::{min_of, Rational, Scalar};

pub type Sample = (Point, Label);

/// A distribution on `X × Y` with finite support.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteDistribution<T> {
    support: Vec<Sample>,
    weights: Vec<T>,
}

impl<T: Scalar> FiniteDistribution<T> {
    /// Weights must be nonnegative and sum to one (exactly for exact scalars,
    /// within `1e-9` for floats).
    pub fn new(support: Vec<Sample>, weights: Vec<T>) -> Result<Self> {
        if support.len() != weights.len() {
            return Err(Error::LengthMismatch { expected: support.len(), found: weights.len() });
        }
        if support.is_empty() {
            return Err(Error::Empty("distribution support"));
        }
        if weights.iter().any(|w| *w < T::zero()) {
            return Err(Error::Invalid("negative probability weight".into()));
        }
        let mut total = T::zero();
        for w in &weights {
            total += w.clone();
        }
        let ok = if T::is_exact() {
            total == T::one()
        } else {
            (total.to_f64().unwrap_or(f64::NAN) - 1.0).abs() <= 1e-9
        };
        if !ok {
            return Err(Error::Invalid(format!("weights sum to {total}, not 1")));
        }
        Ok(FiniteDistribution { support, weights })
    }

    pub fn uniform(support: Vec<Sample>) -> Result<Self> {
        let k = T::from_count(support.len().max(1));
        let weights = vec![T::one() / k; support.len()];
        FiniteDistribution::new(support, weights)
    }

    pub fn support(&self) -> &[Sample] {
        &self.support
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// `n` i.i.d. draws.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<Sample> {
        let w: Vec<f64> = self.weights.iter().map(|w| w.to_f64().unwrap_or(0.0)).collect();
        let index = WeightedIndex::new(&w).expect("weights validated at construction");
        (0..n).map(|_| self.support[index.sample(rng)].clone()).collect()
    }
}

/// A trained hypothesis `X -> Y`.
pub trait Predictor: Send + Sync {
    fn predict(&self, x: &Point) -> Result<Label>;
}

/// Learns a predictor from i.i.d. samples. Randomized learners draw only
/// from the supplied generator.
pub trait PacLearner: Send + Sync {
    fn name(&self) -> String;

    fn train(&self, samples: &[Sample], rng: &mut ChaCha8Rng) -> Result<Box<dyn Predictor>>;
}

struct ConstantPredictor(Label);

impl Predictor for ConstantPredictor {
    fn predict(&self, _: &Point) -> Result<Label> {
        Ok(self.0)
    }
}

/// Ignores the data.
#[derive(Clone, Debug)]
pub struct ConstantPac(pub Label);

impl PacLearner for ConstantPac {
    fn name(&self) -> String {
        format!("constant({})", self.0)
    }

    fn train(&self, _: &[Sample], _: &mut ChaCha8Rng) -> Result<Box<dyn Predictor>> {
        Ok(Box::new(ConstantPredictor(self.0)))
    }
}

/// Memorizes the samples and answers with the label of the nearest one
/// (squared Euclidean distance, earliest sample on ties). With no samples it
/// predicts `fallback`.
#[derive(Clone, Debug)]
pub struct NearestNeighborPac {
    pub fallback: Label,
}

struct NearestPredictor {
    samples: Vec<Sample>,
    fallback: Label,
}

fn dist2(a: &Point, b: &Point) -> Rational {
    a.coords().iter().zip(b.coords()).map(|(x, y)| (x - y) * (x - y)).sum()
}

impl Predictor for NearestPredictor {
    fn predict(&self, x: &Point) -> Result<Label> {
        let mut best: Option<(Rational, Label)> = None;
        for (p, y) in &self.samples {
            if p.dim() != x.dim() {
                return Err(Error::Dimension { expected: p.dim(), found: x.dim() });
            }
            let d = dist2(p, x);
            if best.map_or(true, |(bd, _)| d < bd) {
                best = Some((d, *y));
            }
        }
        Ok(best.map_or(self.fallback, |(_, y)| y))
    }
}

impl PacLearner for NearestNeighborPac {
    fn name(&self) -> String {
        "nearest".into()
    }

    fn train(&self, samples: &[Sample], _: &mut ChaCha8Rng) -> Result<Box<dyn Predictor>> {
        Ok(Box::new(NearestPredictor { samples: samples.to_vec(), fallback: self.fallback }))
    }
}

/// Smallest closed box around the positive samples.
#[derive(Clone, Debug)]
pub struct MinRectanglePac {
    pub d: usize,
}

struct BoxPredictor {
    bounds: Option<Vec<(Rational, Rational)>>,
}

impl Predictor for BoxPredictor {
    fn predict(&self, x: &Point) -> Result<Label> {
        let Some(b) = &self.bounds else { return Ok(Label::negative()) };
        if x.dim() != b.len() {
            return Err(Error::Dimension { expected: b.len(), found: x.dim() });
        }
        let inside = x.coords().iter().zip(b).all(|(v, (lo, hi))| lo <= v && v <= hi);
        Ok(if inside { Label::positive() } else { Label::negative() })
    }
}

impl PacLearner for MinRectanglePac {
    fn name(&self) -> String {
        "minrect".into()
    }

    fn train(&self, samples: &[Sample], _: &mut ChaCha8Rng) -> Result<Box<dyn Predictor>> {
        let mut bounds: Option<Vec<(Rational, Rational)>> = None;
        for (p, y) in samples {
            if p.dim() != self.d {
                return Err(Error::Dimension { expected: self.d, found: p.dim() });
            }
            if *y != Label::positive() {
                continue;
            }
            bounds = Some(match bounds {
                None => p.coords().iter().map(|&v| (v, v)).collect(),
                Some(b) => b.iter().zip(p.coords()).map(|(&(lo, hi), &v)| (lo.min(v), hi.max(v))).collect(),
            });
        }
        Ok(Box::new(BoxPredictor { bounds }))
    }
}

/// `L_D(f) = Σ_i w_i ℓ(f(x_i), y_i)`.
pub fn true_loss<T: Scalar>(predictor: &dyn Predictor, dist: &FiniteDistribution<T>, loss: &LossFunction<T>) -> Result<T> {
    let mut total = T::zero();
    for ((x, y), w) in dist.support.iter().zip(&dist.weights) {
        total += w.clone() * loss.try_eval(predictor.predict(x)?, *y)?;
    }
    Ok(total)
}

/// `min_{h ∈ H} L_D(h)`, with `H` restricted to the support points.
pub fn best_in_class_true_loss<T: Scalar>(
    family: &dyn LabelingFamily,
    dist: &FiniteDistribution<T>,
    loss: &LossFunction<T>,
) -> Result<T> {
    let points: Vec<Point> = dist.support.iter().map(|(x, _)| x.clone()).collect();
    let mut best: Option<T> = None;
    for h in family.restrict(&points)? {
        let mut total = T::zero();
        for (i, ((_, y), w)) in dist.support.iter().zip(&dist.weights).enumerate() {
            total += w.clone() * loss.try_eval(h.get(i), *y)?;
        }
        best = Some(match best {
            None => total,
            Some(b) => min_of(b, total),
        });
    }
    best.ok_or(Error::Empty("restriction H|_S"))
}

/// Transductive learner from a PAC learner: trains on `n` uniform draws
/// (with replacement) from the observed examples and predicts the test point.
pub struct PacToTransductive<P> {
    pac: P,
    seed: u64,
}

pub fn pac_to_transductive<P: PacLearner>(pac: P, seed: u64) -> PacToTransductive<P> {
    PacToTransductive { pac, seed }
}

impl<P: PacLearner> TransductiveLearner for PacToTransductive<P> {
    fn name(&self) -> String {
        format!("p2t({})", self.pac.name())
    }

    fn predict(&self, points: &[Point], observed: &PartialLabeling) -> Result<Label> {
        if points.len() != observed.len() {
            return Err(Error::LengthMismatch { expected: points.len(), found: observed.len() });
        }
        let pool: Vec<Sample> = observed.observed().map(|(i, y)| (points[i].clone(), y)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(scenario_hash(self.seed, observed));
        let samples: Vec<Sample> = if pool.is_empty() {
            Vec::new()
        } else {
            (0..points.len()).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect()
        };
        self.pac.train(&samples, &mut rng)?.predict(&points[observed.hole()])
    }
}

/// Repetition and hold-out sizing for [`transductive_to_pac`].
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionConfig {
    pub delta: Rational,
    /// Labeled examples per block; each block predicts with one extra test point.
    pub block: usize,
    pub eps_hold: Rational,
    pub c1: Rational,
    pub c2: Rational,
    /// Overrides `r = ⌈c1 ln(1/δ)⌉`.
    pub repetitions: Option<usize>,
    /// Overrides `m = ⌈c2 ln(r/δ) / eps_hold⌉`.
    pub holdout: Option<usize>,
}

impl ReductionConfig {
    pub fn new(delta: Rational, block: usize, eps_hold: Rational) -> Self {
        ReductionConfig {
            delta,
            block,
            eps_hold,
            c1: Rational::from_integer(8),
            c2: Rational::from_integer(4),
            repetitions: None,
            holdout: None,
        }
    }

    fn to_f64(r: Rational) -> f64 {
        *r.numer() as f64 / *r.denom() as f64
    }

    pub fn repetitions(&self) -> usize {
        self.repetitions.unwrap_or_else(|| {
            let r = Self::to_f64(self.c1) * (1.0 / Self::to_f64(self.delta)).ln();
            (r.ceil() as usize).max(1)
        })
    }

    pub fn holdout(&self) -> usize {
        self.holdout.unwrap_or_else(|| {
            let r = self.repetitions() as f64;
            let m = Self::to_f64(self.c2) * (r / Self::to_f64(self.delta)).ln() / Self::to_f64(self.eps_hold);
            m.ceil().max(0.0) as usize
        })
    }

    /// `r · block + m`.
    pub fn samples_needed(&self) -> usize {
        self.repetitions() * self.block + self.holdout()
    }

    fn validate(&self) -> Result<()> {
        let zero = Rational::from_integer(0);
        let one = Rational::from_integer(1);
        if self.delta <= zero || self.delta >= one {
            return Err(Error::Invalid(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        if self.eps_hold <= zero {
            return Err(Error::Invalid(format!("holdout epsilon must be positive, got {}", self.eps_hold)));
        }
        Ok(())
    }
}

/// PAC learner from a transductive learner: `r` disjoint blocks each induce
/// `f_j(x) = t.predict(block_j ∪ {x})`, and the one with least hold-out loss
/// (first on ties) is returned.
pub struct TransductiveToPac<T: Scalar> {
    learner: Arc<dyn TransductiveLearner>,
    config: ReductionConfig,
    loss: LossFunction<T>,
}

pub fn transductive_to_pac<T: Scalar>(
    learner: Arc<dyn TransductiveLearner>,
    config: ReductionConfig,
    loss: LossFunction<T>,
) -> Result<TransductiveToPac<T>> {
    config.validate()?;
    Ok(TransductiveToPac { learner, config, loss })
}

impl<T: Scalar> TransductiveToPac<T> {
    pub fn config(&self) -> &ReductionConfig {
        &self.config
    }

    /// Trains and also reports the chosen block index.
    pub fn train_selecting(&self, samples: &[Sample]) -> Result<(usize, BlockPredictor)> {
        let r = self.config.repetitions();
        let m = self.config.holdout();
        let b = self.config.block;
        let needed = r * b + m;
        if samples.len() < needed {
            return Err(Error::InsufficientSamples { needed, available: samples.len() });
        }
        let holdout = &samples[r * b..r * b + m];
        let mut best: Option<(T, usize)> = None;
        for j in 0..r {
            let f = BlockPredictor { learner: self.learner.clone(), block: samples[j * b..(j + 1) * b].to_vec() };
            let mut seen: HashMap<&Point, Label> = HashMap::new();
            let mut total = T::zero();
            for (x, y) in holdout {
                let z = match seen.get(x) {
                    Some(z) => *z,
                    None => {
                        let z = f.predict(x)?;
                        seen.insert(x, z);
                        z
                    }
                };
                total += self.loss.try_eval(z, *y)?;
            }
            if best.as_ref().map_or(true, |(l, _)| total < *l) {
                best = Some((total, j));
            }
        }
        let j = best.map_or(0, |(_, j)| j);
        Ok((j, BlockPredictor { learner: self.learner.clone(), block: samples[j * b..(j + 1) * b].to_vec() }))
    }
}

impl<T: Scalar> PacLearner for TransductiveToPac<T> {
    fn name(&self) -> String {
        format!("t2p({})", self.learner.name())
    }

    fn train(&self, samples: &[Sample], _: &mut ChaCha8Rng) -> Result<Box<dyn Predictor>> {
        Ok(Box::new(self.train_selecting(samples)?.1))
    }
}

/// `x ↦ t.predict(block ∪ {x})` with the hole at `x`.
pub struct BlockPredictor {
    learner: Arc<dyn TransductiveLearner>,
    block: Vec<Sample>,
}

impl Predictor for BlockPredictor {
    fn predict(&self, x: &Point) -> Result<Label> {
        let mut points: Vec<Point> = self.block.iter().map(|(p, _)| p.clone()).collect();
        points.push(x.clone());
        let mut entries: Vec<Option<Label>> = self.block.iter().map(|(_, y)| Some(*y)).collect();
        entries.push(None);
        self.learner.predict(&points, &PartialLabeling::new(entries)?)
    }
}

/// Per-trial (excess) true losses of a PAC learner.
#[derive(Clone, Debug, PartialEq)]
pub struct PacEstimate<T> {
    /// Losses in trial order.
    pub per_trial: Vec<T>,
    /// The same losses sorted ascending.
    pub sorted: Vec<T>,
}

impl<T: Scalar> PacEstimate<T> {
    /// Empirical `q`-quantile: the `⌈q·trials⌉`-th smallest loss.
    pub fn quantile(&self, q: f64) -> T {
        let k = ((q * self.sorted.len() as f64).ceil() as usize).clamp(1, self.sorted.len());
        self.sorted[k - 1].clone()
    }

    pub fn mean(&self) -> T {
        crate::scalar::mean(&self.sorted)
    }

    /// Fraction of trials with loss strictly above `threshold`.
    pub fn frequency_above(&self, threshold: &T) -> f64 {
        self.sorted.iter().filter(|l| *l > threshold).count() as f64 / self.sorted.len() as f64
    }
}

/// The generator for one Monte Carlo trial: stream `trial` of the master seed.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Draws `n` samples per trial, trains, and records the exact true loss
/// (minus the best-in-class true loss in the agnostic setting).
#[allow(clippy::too_many_arguments)]
pub fn pac_error_estimate<T: Scalar>(
    pac: &dyn PacLearner,
    dist: &FiniteDistribution<T>,
    n: usize,
    trials: usize,
    seed: u64,
    setting: Setting,
    family: Option<&dyn LabelingFamily>,
    loss: &LossFunction<T>,
) -> Result<PacEstimate<T>> {
    if trials == 0 {
        return Err(Error::Invalid("at least one trial is required".into()));
    }
    let offset = match setting {
        Setting::Realizable => T::zero(),
        Setting::Agnostic => {
            let family = family.ok_or_else(|| Error::Invalid("agnostic estimate needs a hypothesis class".into()))?;
            best_in_class_true_loss(family, dist, loss)?
        }
    };
    let per_trial: Vec<T> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let samples = dist.sample(&mut rng, n);
            let f = pac.train(&samples, &mut rng)?;
            Ok(true_loss(f.as_ref(), dist, loss)? - offset.clone())
        })
        .collect::<Result<_>>()?;
    let mut sorted = per_trial.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("comparable losses"));
    Ok(PacEstimate { per_trial, sorted })
}

/// Average loss over all `n!` orderings of the dataset with the last
/// position hidden: sampling without replacement and holding one out.
pub fn without_replacement_error<T: Scalar, L: TransductiveLearner + ?Sized>(
    learner: &L,
    data: &Dataset,
    loss: &LossFunction<T>,
) -> Result<T> {
    let n = data.len();
    if n > 9 {
        return Err(Error::Capacity { what: "orderings for without-replacement evaluation", budget: 9 });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = T::zero();
    let mut count = 0usize;
    loop {
        let points: Vec<Point> = perm.iter().map(|&i| data.points()[i].clone()).collect();
        let y: Labeling = perm.iter().map(|&i| data.labels().get(i)).collect();
        let truth = y.get(n - 1);
        let pred = learner.predict_with_truth(&points, &y.mask(n - 1), truth)?;
        total += loss.try_eval(pred, truth)?;
        count += 1;
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(total / T::from_count(count))
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else { return false };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Thresholds;
    use crate::learners::{transductive_error, ConstantLearner, ErmLearner, TieBreakPolicy};
    use crate::Loss;

    fn line(labels: &str) -> Vec<Sample> {
        Labeling::bits(labels).entries().iter().enumerate().map(|(i, &y)| (Point::scalar(i as i64), y)).collect()
    }

    #[test]
    fn weights_must_sum_to_one() {
        let s = line("01");
        assert!(FiniteDistribution::new(s.clone(), vec![Rational::new(1, 2), Rational::new(1, 3)]).is_err());
        assert!(FiniteDistribution::new(s.clone(), vec![Rational::new(3, 2), Rational::new(-1, 2)]).is_err());
        assert!(FiniteDistribution::<f64>::new(s, vec![0.5, 0.5]).is_ok());
    }

    #[test]
    fn true_loss_examples() {
        let x = Point::scalar(0);
        let d = FiniteDistribution::<Rational>::uniform(vec![(x.clone(), Label::int(0)), (x, Label::int(1))]).unwrap();
        let f = ConstantPredictor(Label::int(1));
        assert_eq!(true_loss(&f, &d, &Loss::ZeroOne).unwrap(), Rational::new(1, 2));
    }

    #[test]
    fn constant_pac_becomes_constant_transductive() {
        let t = pac_to_transductive(ConstantPac(Label::int(1)), 3);
        let pts: Vec<Point> = (0..3).map(Point::scalar).collect();
        for i in 0..3 {
            assert_eq!(t.predict(&pts, &Labeling::bits("000").mask(i)).unwrap(), Label::int(1));
        }
        let single = [Point::scalar(0)];
        let lonely = PartialLabeling::new(vec![None]).unwrap();
        let nn = pac_to_transductive(NearestNeighborPac { fallback: Label::int(0) }, 3);
        assert_eq!(nn.predict(&single, &lonely).unwrap(), Label::int(0));
    }

    #[test]
    fn sizing_defaults() {
        let c = ReductionConfig::new(Rational::new(1, 10), 9, Rational::new(1, 10));
        assert_eq!(c.repetitions(), 19);
        assert_eq!(c.holdout(), 210);
        assert_eq!(c.samples_needed(), 19 * 9 + 210);
    }

    #[test]
    fn single_block_without_holdout_is_the_curried_learner() {
        let mut c = ReductionConfig::new(Rational::new(1, 10), 3, Rational::new(1, 10));
        c.repetitions = Some(1);
        c.holdout = Some(0);
        let t: Arc<dyn TransductiveLearner> = Arc::new(ConstantLearner(Label::int(1)));
        let p = transductive_to_pac(t, c, Loss::ZeroOne).unwrap();
        let f = p.train(&line("000"), &mut trial_rng(0, 0)).unwrap();
        assert_eq!(f.predict(&Point::scalar(9)).unwrap(), Label::int(1));
        assert!(matches!(p.train(&line("00"), &mut trial_rng(0, 0)), Err(Error::InsufficientSamples { needed: 3, available: 2 })));
    }

    #[test]
    fn constant_estimate_is_half() {
        let x = Point::scalar(0);
        let d = FiniteDistribution::<Rational>::uniform(vec![(x.clone(), Label::int(0)), (x, Label::int(1))]).unwrap();
        let est = pac_error_estimate(&ConstantPac(Label::int(0)), &d, 5, 20, 1, Setting::Realizable, None, &Loss::ZeroOne).unwrap();
        assert!(est.sorted.iter().all(|l| *l == Rational::new(1, 2)));
    }

    #[test]
    fn leave_one_out_identity() {
        let data = Dataset::new((0..5).map(Point::scalar).collect(), Labeling::bits("00111")).unwrap();
        let erm = ErmLearner::new(Arc::new(Thresholds), TieBreakPolicy::FirstLexicographic, Loss::ZeroOne);
        let a = without_replacement_error(&erm, &data, &Loss::ZeroOne).unwrap();
        let b = transductive_error(&erm, data.points(), data.labels(), &Loss::ZeroOne).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, Rational::new(1, 5));
    }
}
