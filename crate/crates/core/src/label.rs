//! Labels, labelings over a datapoint tuple, and single-hole partial labelings.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Rational;

/// A label token.
///
/// Labels carry a rational value so that regression-style losses can act on
/// them directly; for classification the value is just an ordered token.
/// `"+"` and `"-"` parse to `1` and `0`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(Rational);

impl Label {
    pub const fn int(v: i64) -> Self {
        Label(Rational::new_raw(v, 1))
    }

    pub fn from_rational(v: Rational) -> Self {
        Label(v)
    }

    pub fn value(&self) -> Rational {
        self.0
    }

    /// The positive class of a binary family.
    pub fn positive() -> Self {
        Label(Rational::one())
    }

    /// The negative class of a binary family.
    pub fn negative() -> Self {
        Label(Rational::zero())
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+" => Ok(Label::positive()),
            "-" => Ok(Label::negative()),
            t => parse_rational(t).map(Label),
        }
    }
}

/// Parses `"3"`, `"-2"`, `"1/2"`, or a finite decimal such as `"0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 15 {
            return Err(Error::Invalid(format!("not a rational: {s:?}")));
        }
        let negative = int.starts_with('-');
        let whole: i64 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().map_err(|_| Error::Invalid(format!("not a rational: {s:?}")))?
        };
        let digits: i64 = frac.parse().map_err(|_| Error::Invalid(format!("not a rational: {s:?}")))?;
        let scale = 10i64.pow(frac.len() as u32);
        let frac = Rational::new(digits, scale);
        let whole = Rational::from_integer(whole);
        return Ok(if negative { whole - frac } else { whole + frac });
    }
    Rational::from_str(s).map_err(|_| Error::Invalid(format!("not a rational: {s:?}")))
}

/// A datapoint: a tuple of rational coordinates.
///
/// Explicit tables use one-dimensional points as plain identifiers.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point(pub Vec<Rational>);

impl Point {
    pub fn scalar(v: i64) -> Self {
        Point(vec![Rational::from_integer(v)])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&c| Rational::from_integer(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A labeled dataset `(x_1, y_1), ..., (x_n, y_n)`. Points may repeat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    points: Vec<Point>,
    labels: Labeling,
}

impl Dataset {
    pub fn new(points: Vec<Point>, labels: Labeling) -> Result<Self> {
        if points.len() != labels.len() {
            return Err(Error::LengthMismatch { expected: points.len(), found: labels.len() });
        }
        if points.is_empty() {
            return Err(Error::Empty("dataset"));
        }
        Ok(Dataset { points, labels })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn labels(&self) -> &Labeling {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A full labeling `(y_1, ..., y_n)` of a fixed datapoint tuple.
///
/// Ordered lexicographically by label tokens.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Labeling(Vec<Label>);

impl Labeling {
    pub fn new(entries: Vec<Label>) -> Self {
        Labeling(entries)
    }

    /// Shorthand for integer labels, e.g. `Labeling::ints(&[0, 1, 1])`.
    pub fn ints(entries: &[i64]) -> Self {
        Labeling(entries.iter().map(|&v| Label::int(v)).collect())
    }

    /// Parses a compact digit string like `"0110"` (single-digit labels only).
    pub fn bits(s: &str) -> Self {
        Labeling(
            s.chars()
                .map(|c| Label::int(c.to_digit(10).expect("digit label") as i64))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Label] {
        &self.0
    }

    pub fn get(&self, i: usize) -> Label {
        self.0[i]
    }

    /// Hides coordinate `i`.
    pub fn mask(&self, i: usize) -> PartialLabeling {
        let entries = self
            .0
            .iter()
            .enumerate()
            .map(|(j, &l)| if j == i { None } else { Some(l) })
            .collect();
        PartialLabeling { hole: i, entries }
    }

    pub fn with_entry(&self, i: usize, label: Label) -> Labeling {
        let mut entries = self.0.clone();
        entries[i] = label;
        Labeling(entries)
    }

    /// Number of coordinates on which the two labelings differ.
    pub fn hamming(&self, other: &Labeling) -> usize {
        debug_assert_eq!(self.len(), other.len());
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }

    pub fn permuted(&self, perm: &[usize]) -> Labeling {
        Labeling(perm.iter().map(|&p| self.0[p]).collect())
    }
}

impl fmt::Display for Labeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Labeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromIterator<Label> for Labeling {
    fn from_iter<I: IntoIterator<Item = Label>>(iter: I) -> Self {
        Labeling(iter.into_iter().collect())
    }
}

/// A labeling with exactly one hidden coordinate, the learner's scenario.
///
/// Ordered by hole position first, then by the visible entries.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartialLabeling {
    hole: usize,
    entries: Vec<Option<Label>>,
}

impl PartialLabeling {
    pub fn new(entries: Vec<Option<Label>>) -> Result<Self> {
        let holes: Vec<usize> = entries
            .iter()
            .enumerate()
            .filter_map(|(i, e)| e.is_none().then_some(i))
            .collect();
        match holes.as_slice() {
            [hole] => Ok(PartialLabeling { hole: *hole, entries }),
            _ => Err(Error::Invalid(format!(
                "partial labeling needs exactly one hole, found {}",
                holes.len()
            ))),
        }
    }

    pub fn hole(&self) -> usize {
        self.hole
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Option<Label>] {
        &self.entries
    }

    /// The labeling obtained by filling the hole with `label`.
    pub fn complete(&self, label: Label) -> Labeling {
        self.entries.iter().map(|e| e.unwrap_or(label)).collect()
    }

    /// True when `y` agrees with every visible entry.
    pub fn is_consistent_with(&self, y: &Labeling) -> bool {
        y.len() == self.entries.len()
            && self
                .entries
                .iter()
                .zip(y.entries())
                .all(|(e, l)| e.map_or(true, |v| v == *l))
    }

    /// Visible `(coordinate, label)` pairs.
    pub fn observed(&self) -> impl Iterator<Item = (usize, Label)> + '_ {
        self.entries.iter().enumerate().filter_map(|(i, e)| e.map(|l| (i, l)))
    }
}

impl fmt::Display for PartialLabeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            match e {
                Some(l) => write!(f, "{l}")?,
                None => write!(f, "?")?,
            }
        }
        write!(f, ")")
    }
}

impl fmt::Debug for PartialLabeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Minimum Hamming distance from `y` to a set of labelings.
pub fn hamming_distance(y: &Labeling, set: &[Labeling]) -> Result<usize> {
    let mut best: Option<usize> = None;
    for f in set {
        if f.len() != y.len() {
            return Err(Error::LengthMismatch { expected: y.len(), found: f.len() });
        }
        let d = y.hamming(f);
        best = Some(best.map_or(d, |b| b.min(d)));
    }
    best.ok_or(Error::Empty("labeling set"))
}

/// All labelings in `labels^n`, lexicographic.
pub fn all_labelings(labels: &[Label], n: usize, budget: usize) -> Result<Vec<Labeling>> {
    let k = labels.len();
    if k == 0 {
        return Err(Error::Empty("label space"));
    }
    let total = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > budget as u128 {
        return Err(Error::Capacity { what: "label space power |Y|^n", budget });
    }
    let mut sorted = labels.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut out = Vec::with_capacity(total as usize);
    let mut digits = vec![0usize; n];
    loop {
        out.push(digits.iter().map(|&d| sorted[d]).collect());
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < sorted.len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamming_examples() {
        let y = Labeling::bits("111");
        let set = [Labeling::bits("000"), Labeling::bits("100")];
        assert_eq!(hamming_distance(&y, &set).unwrap(), 2);
        assert_eq!(hamming_distance(&set[1], &set).unwrap(), 0);
        assert_eq!(hamming_distance(&y, &[]), Err(Error::Empty("labeling set")));
    }

    #[test]
    fn mask_and_complete() {
        let y = Labeling::bits("101");
        let p = y.mask(1);
        assert_eq!(p.hole(), 1);
        assert_eq!(p.to_string(), "(1,?,1)");
        assert_eq!(p.complete(Label::int(0)), y);
        assert!(p.is_consistent_with(&Labeling::bits("111")));
        assert!(!p.is_consistent_with(&Labeling::bits("110")));
    }

    #[test]
    fn partial_labeling_requires_one_hole() {
        assert!(PartialLabeling::new(vec![None, None]).is_err());
        assert!(PartialLabeling::new(vec![Some(Label::int(1))]).is_err());
        assert!(PartialLabeling::new(vec![Some(Label::int(1)), None]).is_ok());
    }

    #[test]
    fn label_parsing() {
        assert_eq!("+".parse::<Label>().unwrap(), Label::positive());
        assert_eq!("-".parse::<Label>().unwrap(), Label::negative());
        assert_eq!("1/2".parse::<Label>().unwrap().value(), Rational::new(1, 2));
        assert_eq!("0.25".parse::<Label>().unwrap().value(), Rational::new(1, 4));
        assert_eq!("-1.5".parse::<Label>().unwrap().value(), Rational::new(-3, 2));
        assert!("x".parse::<Label>().is_err());
    }

    #[test]
    fn cube_enumeration_is_lexicographic() {
        let labels = [Label::int(1), Label::int(0)];
        let all = all_labelings(&labels, 2, 100).unwrap();
        let expect: Vec<_> = ["00", "01", "10", "11"].iter().map(|s| Labeling::bits(s)).collect();
        assert_eq!(all, expect);
        assert!(all_labelings(&labels, 10, 1000).is_err());
    }

    #[test]
    fn dataset_length_checked() {
        let err = Dataset::new(vec![Point::scalar(1)], Labeling::bits("01"));
        assert_eq!(err, Err(Error::LengthMismatch { expected: 1, found: 2 }));
    }
}
