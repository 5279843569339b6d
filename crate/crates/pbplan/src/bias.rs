//! Bias sets and bias intervals.
//!
//! A bias set `B` is a union of finitely many closed rational subintervals of
//! `(0, 1]`; a single value is the degenerate interval `[x, x]`. The range of
//! `B` is `tau = max B / min B`. Bias intervals are the possibly-empty closed
//! subintervals of `[0, 1]` that arise from lower envelopes of perceived-cost
//! lines; they may include 0 even though bias sets never do.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::num::{format_rational, parse_rational, Rational};
use crate::{Error, Result};

/// Closed, possibly empty, subinterval of `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiasInterval {
    bounds: Option<(Rational, Rational)>,
}

impl BiasInterval {
    pub fn empty() -> Self {
        BiasInterval { bounds: None }
    }

    /// Interval `[lo, hi]` clamped to `[0, 1]`; empty when `lo > hi` after
    /// clamping.
    pub fn clamped(lo: Rational, hi: Rational) -> Self {
        let lo = if lo.is_negative() { Rational::zero() } else { lo };
        let hi = if hi > Rational::one() { Rational::one() } else { hi };
        if lo > hi {
            BiasInterval { bounds: None }
        } else {
            BiasInterval { bounds: Some((lo, hi)) }
        }
    }

    pub fn full() -> Self {
        BiasInterval {
            bounds: Some((Rational::zero(), Rational::one())),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_none()
    }

    pub fn lo(&self) -> Option<&Rational> {
        self.bounds.as_ref().map(|(lo, _)| lo)
    }

    pub fn hi(&self) -> Option<&Rational> {
        self.bounds.as_ref().map(|(_, hi)| hi)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        match &self.bounds {
            Some((lo, hi)) => lo <= x && x <= hi,
            None => false,
        }
    }
}

/// Union of disjoint closed subintervals of `(0, 1]`, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiasSet {
    intervals: Vec<(Rational, Rational)>,
}

impl BiasSet {
    /// Builds a bias set from arbitrary `[lo, hi]` pairs. Pairs are sorted
    /// and overlapping or touching pairs merged; each must satisfy
    /// `0 < lo <= hi <= 1`.
    pub fn new(mut intervals: Vec<(Rational, Rational)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::InvalidBias("bias set must be non-empty".into()));
        }
        for (lo, hi) in &intervals {
            if !lo.is_positive() || lo > hi || *hi > Rational::one() {
                return Err(Error::InvalidBias(format!(
                    "interval [{}, {}] outside 0 < lo <= hi <= 1",
                    format_rational(lo),
                    format_rational(hi)
                )));
            }
        }
        intervals.sort();
        let mut merged: Vec<(Rational, Rational)> = Vec::with_capacity(intervals.len());
        for (lo, hi) in intervals {
            match merged.last_mut() {
                Some((_, last_hi)) if lo <= *last_hi => {
                    if hi > *last_hi {
                        *last_hi = hi;
                    }
                }
                _ => merged.push((lo, hi)),
            }
        }
        Ok(BiasSet { intervals: merged })
    }

    pub fn singleton(value: Rational) -> Result<Self> {
        BiasSet::new(vec![(value.clone(), value)])
    }

    pub fn from_points(points: &[Rational]) -> Result<Self> {
        BiasSet::new(points.iter().map(|p| (p.clone(), p.clone())).collect())
    }

    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.intervals
    }

    pub fn min(&self) -> &Rational {
        &self.intervals[0].0
    }

    pub fn max(&self) -> &Rational {
        &self.intervals[self.intervals.len() - 1].1
    }

    /// Range `tau = max B / min B`.
    pub fn tau(&self) -> Rational {
        self.max() / self.min()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.intervals.iter().any(|(lo, hi)| lo <= x && x <= hi)
    }

    pub fn contains_one(&self) -> bool {
        self.contains(&Rational::one())
    }

    pub fn is_singleton(&self) -> bool {
        self.intervals.len() == 1 && self.intervals[0].0 == self.intervals[0].1
    }

    /// Minimum of the intersection with a bias interval, when non-empty.
    pub fn intersection_min(&self, interval: &BiasInterval) -> Option<Rational> {
        let (ilo, ihi) = match (&interval.lo(), &interval.hi()) {
            (Some(lo), Some(hi)) => (*lo, *hi),
            _ => return None,
        };
        for (lo, hi) in &self.intervals {
            if lo <= ihi && ilo <= hi {
                return Some(if ilo > lo { ilo.clone() } else { lo.clone() });
            }
        }
        None
    }

    /// Endpoints of every interval, deduplicated, ascending. These are the
    /// representative biases reports evaluate at.
    pub fn endpoints(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        for (lo, hi) in &self.intervals {
            if out.last() != Some(lo) {
                out.push(lo.clone());
            }
            if out.last() != Some(hi) {
                out.push(hi.clone());
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct BiasSetDoc(Vec<[String; 2]>);

/// Parses a bias set document: a list of `[lo, hi]` rational-string pairs.
pub fn parse_bias_set(text: &str) -> Result<BiasSet> {
    let doc: BiasSetDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("bias document: {e}")))?;
    let mut intervals = Vec::with_capacity(doc.0.len());
    for [lo, hi] in &doc.0 {
        intervals.push((parse_rational(lo)?, parse_rational(hi)?));
    }
    BiasSet::new(intervals)
}

pub fn serialize_bias_set(set: &BiasSet) -> String {
    let doc = BiasSetDoc(
        set.intervals()
            .iter()
            .map(|(lo, hi)| [format_rational(lo), format_rational(hi)])
            .collect(),
    );
    serde_json::to_string_pretty(&doc).expect("bias document serialization")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;

    #[test]
    fn construction_sorts_and_merges() {
        let b = BiasSet::new(vec![
            (rat(1, 2), rat(3, 4)),
            (rat(1, 8), rat(1, 4)),
            (rat(3, 4), rat(1, 1)),
        ])
        .unwrap();
        assert_eq!(
            b.intervals(),
            &[(rat(1, 8), rat(1, 4)), (rat(1, 2), rat(1, 1))]
        );
        assert_eq!(b.min(), &rat(1, 8));
        assert_eq!(b.max(), &rat(1, 1));
        assert_eq!(b.tau(), rat(8, 1));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(BiasSet::new(vec![(rat(0, 1), rat(1, 2))]).is_err());
        assert!(BiasSet::new(vec![(rat(1, 2), rat(5, 4))]).is_err());
        assert!(BiasSet::new(vec![(rat(3, 4), rat(1, 2))]).is_err());
        assert!(BiasSet::new(vec![]).is_err());
    }

    #[test]
    fn intersection_min() {
        let b = BiasSet::new(vec![(rat(2, 5), rat(3, 5))]).unwrap();
        let iv = BiasInterval::clamped(rat(0, 1), rat(1, 2));
        assert_eq!(b.intersection_min(&iv), Some(rat(2, 5)));
        let iv = BiasInterval::clamped(rat(8, 15), rat(1, 1));
        assert_eq!(b.intersection_min(&iv), Some(rat(8, 15)));
        let iv = BiasInterval::clamped(rat(7, 10), rat(1, 1));
        assert_eq!(b.intersection_min(&iv), None);
        assert_eq!(b.intersection_min(&BiasInterval::empty()), None);
    }

    #[test]
    fn degenerate_singleton() {
        let b = BiasSet::singleton(rat(13, 27)).unwrap();
        assert!(b.is_singleton());
        assert_eq!(b.tau(), rat(1, 1));
        assert!(b.contains(&rat(13, 27)));
        assert!(!b.contains(&rat(14, 27)));
    }

    #[test]
    fn document_round_trip() {
        let b = BiasSet::new(vec![(rat(13, 27), rat(13, 27)), (rat(14, 27), rat(14, 27))]).unwrap();
        let text = serialize_bias_set(&b);
        assert_eq!(parse_bias_set(&text).unwrap(), b);
        let parsed = parse_bias_set(r#"[["2/5", "3/5"]]"#).unwrap();
        assert_eq!(parsed.intervals(), &[(rat(2, 5), rat(3, 5))]);
    }
}
