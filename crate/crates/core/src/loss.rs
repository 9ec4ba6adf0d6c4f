//! Loss functions and empirical/best-in-class losses.

use std::collections::BTreeMap;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::label::{Label, Labeling};
use crate::scalar::{min_of, Scalar};

/// A loss `ℓ(predicted, true) ≥ 0`.
#[derive(Clone, Debug, PartialEq)]
pub enum LossFunction<T> {
    /// `[predicted != true]`.
    ZeroOne,
    /// `|predicted - true|` on label values.
    Absolute,
    /// `(predicted - true)^2` on label values.
    Squared,
    /// Explicit table over `(predicted, true)` pairs.
    Table(BTreeMap<(Label, Label), T>),
}

impl<T: Scalar> LossFunction<T> {
    /// Builds a table loss, rejecting negative entries.
    pub fn table(entries: impl IntoIterator<Item = ((Label, Label), T)>) -> Result<Self> {
        let table: BTreeMap<_, _> = entries.into_iter().collect();
        if table.values().any(|v| *v < T::zero()) {
            return Err(Error::Invalid("loss table has a negative entry".into()));
        }
        Ok(LossFunction::Table(table))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            LossFunction::ZeroOne => "zero_one",
            LossFunction::Absolute => "absolute",
            LossFunction::Squared => "squared",
            LossFunction::Table(_) => "table",
        }
    }

    pub fn try_eval(&self, predicted: Label, truth: Label) -> Result<T> {
        Ok(match self {
            LossFunction::ZeroOne => {
                if predicted == truth {
                    T::zero()
                } else {
                    T::one()
                }
            }
            LossFunction::Absolute => T::from_rational((predicted.value() - truth.value()).abs()),
            LossFunction::Squared => {
                let d = predicted.value() - truth.value();
                T::from_rational(d * d)
            }
            LossFunction::Table(table) => table
                .get(&(predicted, truth))
                .cloned()
                .ok_or_else(|| Error::MissingLossEntry {
                    predicted: predicted.to_string(),
                    truth: truth.to_string(),
                })?,
        })
    }

    /// Evaluates the loss.
    ///
    /// Panics when a table loss lacks the pair; call [`Self::check_covers`]
    /// on the label space first.
    pub fn eval(&self, predicted: Label, truth: Label) -> T {
        match self.try_eval(predicted, truth) {
            Ok(v) => v,
            Err(e) => panic!("{e}"),
        }
    }

    /// Verifies that every pair over `labels` can be evaluated.
    pub fn check_covers(&self, labels: &[Label]) -> Result<()> {
        if let LossFunction::Table(_) = self {
            for &p in labels {
                for &t in labels {
                    self.try_eval(p, t)?;
                }
            }
        }
        Ok(())
    }
}

/// `(1/n) Σ_i ℓ(pred_i, true_i)`.
pub fn empirical_loss<T: Scalar>(pred: &Labeling, truth: &Labeling, loss: &LossFunction<T>) -> Result<T> {
    if pred.len() != truth.len() {
        return Err(Error::LengthMismatch { expected: truth.len(), found: pred.len() });
    }
    if truth.is_empty() {
        return Err(Error::Empty("labeling"));
    }
    let mut total = T::zero();
    for (&p, &t) in pred.entries().iter().zip(truth.entries()) {
        total += loss.try_eval(p, t)?;
    }
    Ok(total / T::from_count(truth.len()))
}

/// `min_{f ∈ set} empirical_loss(f, y)`.
pub fn best_in_class_loss<T: Scalar>(set: &[Labeling], y: &Labeling, loss: &LossFunction<T>) -> Result<T> {
    let mut best: Option<T> = None;
    for f in set {
        let l = empirical_loss(f, y, loss)?;
        best = Some(match best {
            None => l,
            Some(b) => min_of(b, l),
        });
    }
    best.ok_or(Error::Empty("labeling set"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn empirical_loss_examples() {
        let zo = LossFunction::<Rational>::ZeroOne;
        let y = Labeling::bits("011");
        assert_eq!(empirical_loss(&y, &y, &zo).unwrap(), Rational::from_integer(0));
        assert_eq!(empirical_loss(&y, &Labeling::bits("000"), &zo).unwrap(), Rational::new(2, 3));
        let abs = LossFunction::<Rational>::Absolute;
        assert_eq!(
            empirical_loss(&Labeling::ints(&[1, 3]), &Labeling::ints(&[0, 0]), &abs).unwrap(),
            Rational::from_integer(2)
        );
        let sq = LossFunction::<Rational>::Squared;
        assert_eq!(
            empirical_loss(&Labeling::ints(&[1, 3]), &Labeling::ints(&[0, 0]), &sq).unwrap(),
            Rational::from_integer(5)
        );
        assert!(empirical_loss(&y, &Labeling::bits("01"), &zo).is_err());
    }

    #[test]
    fn best_in_class_examples() {
        let zo = LossFunction::<Rational>::ZeroOne;
        let set = [Labeling::bits("00")];
        assert_eq!(best_in_class_loss(&set, &Labeling::bits("11"), &zo).unwrap(), Rational::from_integer(1));
        assert_eq!(best_in_class_loss(&set, &Labeling::bits("00"), &zo).unwrap(), Rational::from_integer(0));
        assert_eq!(best_in_class_loss(&[], &Labeling::bits("00"), &zo), Err(Error::Empty("labeling set")));
    }

    #[test]
    fn table_loss() {
        let t = LossFunction::table([
            ((Label::int(0), Label::int(0)), Rational::from_integer(0)),
            ((Label::int(1), Label::int(0)), Rational::new(1, 2)),
        ])
        .unwrap();
        assert_eq!(t.eval(Label::int(1), Label::int(0)), Rational::new(1, 2));
        assert!(t.try_eval(Label::int(0), Label::int(1)).is_err());
        assert!(t.check_covers(&[Label::int(0), Label::int(1)]).is_err());
        assert!(LossFunction::table([((Label::int(0), Label::int(0)), Rational::from_integer(-1))]).is_err());
    }

    #[test]
    fn float_losses_agree() {
        let zo = LossFunction::<f64>::ZeroOne;
        let v = empirical_loss(&Labeling::bits("011"), &Labeling::bits("000"), &zo).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
    }
}
