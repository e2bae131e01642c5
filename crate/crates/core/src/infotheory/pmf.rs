use std::collections::BTreeMap;

use crate::error::{Error, Result};

const SUM_TOL: f64 = 1e-12;
const MI_FLOOR: f64 = -1e-10;

/// Finite probability mass function with a sorted, duplicate-free support.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretePmf<T> {
    support: Vec<T>,
    probs: Vec<f64>,
}

impl<T: Ord + Clone> DiscretePmf<T> {
    /// Build from outcome/probability pairs; repeated outcomes are summed and
    /// zero-mass outcomes dropped.
    pub fn new(pairs: impl IntoIterator<Item = (T, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (x, p) in pairs {
            if !(p >= 0.0 && p.is_finite()) {
                return Err(Error::InvalidPmf(format!("probability {p} is not a finite non-negative number")));
            }
            *map.entry(x).or_insert(0.0) += p;
        }
        Self::from_map(map)
    }

    pub(crate) fn from_map(map: BTreeMap<T, f64>) -> Result<Self> {
        let total: f64 = map.values().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidPmf(format!("probabilities sum to {total}")));
        }
        let (support, probs) = map.into_iter().filter(|(_, p)| *p > 0.0).unzip();
        Ok(Self { support, probs })
    }

    /// Uniform over the distinct values of `outcomes`.
    pub fn uniform(outcomes: impl IntoIterator<Item = T>) -> Result<Self> {
        let distinct: Vec<T> = outcomes.into_iter().collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        if distinct.is_empty() {
            return Err(Error::InvalidPmf("empty support".into()));
        }
        let p = 1.0 / distinct.len() as f64;
        Self::new(distinct.into_iter().map(|x| (x, p)))
    }

    pub fn point(x: T) -> Self {
        Self {
            support: vec![x],
            probs: vec![1.0],
        }
    }

    pub fn support(&self) -> &[T] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, f64)> {
        self.support.iter().zip(self.probs.iter().copied())
    }

    pub fn prob(&self, x: &T) -> f64 {
        self.support.binary_search(x).map_or(0.0, |i| self.probs[i])
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Push forward through a deterministic map.
    pub fn map<U: Ord + Clone>(&self, f: impl Fn(&T) -> U) -> DiscretePmf<U> {
        let mut map = BTreeMap::new();
        for (x, p) in self.iter() {
            *map.entry(f(x)).or_insert(0.0) += p;
        }
        let (support, probs) = map.into_iter().unzip();
        DiscretePmf { support, probs }
    }
}

/// Shannon entropy in bits, `0 log 0 = 0`.
pub fn entropy<T: Ord + Clone>(p: &DiscretePmf<T>) -> f64 {
    -p.probs.iter().filter(|&&q| q > 0.0).map(|&q| q * q.log2()).sum::<f64>()
}

/// `I(A; B) = H(A) + H(B) − H(A, B)` in bits.
pub fn mutual_information<A: Ord + Clone, B: Ord + Clone>(joint: &DiscretePmf<(A, B)>) -> Result<f64> {
    let ha = entropy(&joint.map(|(a, _)| a.clone()));
    let hb = entropy(&joint.map(|(_, b)| b.clone()));
    let mi = ha + hb - entropy(joint);
    if mi < MI_FLOOR {
        return Err(Error::Numerical(format!("mutual information evaluated to {mi}")));
    }
    Ok(mi.max(0.0))
}
