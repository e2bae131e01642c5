use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Symbol sequence (content, rhythm, or rendered frames).
pub type Symbols = Vec<usize>;
/// Channel output: an integer sequence, quantized when it came from real codes.
pub type Code = Vec<i64>;

/// Conditional law `P(z̃ | x)` over sequences.
pub trait Channel {
    /// Output distribution for input `x` as `(code, probability)` pairs.
    fn law(&self, x: &[usize]) -> Result<Vec<(Code, f64)>>;
}

fn as_code(x: impl IntoIterator<Item = usize>) -> Code {
    x.into_iter().map(|v| v as i64).collect()
}

/// `z̃ = x`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Identity;

impl Channel for Identity {
    fn law(&self, x: &[usize]) -> Result<Vec<(Code, f64)>> {
        Ok(vec![(as_code(x.iter().copied()), 1.0)])
    }
}

/// Every input maps to the empty code.
#[derive(Debug, Clone, Copy, Default)]
pub struct Constant;

impl Channel for Constant {
    fn law(&self, _x: &[usize]) -> Result<Vec<(Code, f64)>> {
        Ok(vec![(Code::new(), 1.0)])
    }
}

/// Collapse each run of equal symbols to one symbol, discarding durations.
#[derive(Debug, Clone, Copy, Default)]
pub struct CollapseRuns;

impl Channel for CollapseRuns {
    fn law(&self, x: &[usize]) -> Result<Vec<(Code, f64)>> {
        let mut out = x.to_vec();
        out.dedup();
        Ok(vec![(as_code(out), 1.0)])
    }
}

/// Rename symbols by a permutation; a bijection on sequences.
#[derive(Debug, Clone)]
pub struct Relabel {
    perm: Vec<usize>,
}

impl Relabel {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Config(format!("{perm:?} is not a permutation")));
            }
        }
        Ok(Self { perm })
    }
}

impl Channel for Relabel {
    fn law(&self, x: &[usize]) -> Result<Vec<(Code, f64)>> {
        let out = x
            .iter()
            .map(|&s| {
                self.perm
                    .get(s)
                    .copied()
                    .ok_or_else(|| Error::Config(format!("symbol {s} outside relabel alphabet")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(vec![(as_code(out), 1.0)])
    }
}

/// Explicit table of output laws, one row per known input.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Tabulated {
    rows: BTreeMap<Symbols, Vec<(Code, f64)>>,
}

impl Tabulated {
    pub fn new() -> Self {
        Self::default()
    }

    /// Insert a row after merging repeated codes and checking it sums to one.
    pub fn insert(&mut self, x: Symbols, row: impl IntoIterator<Item = (Code, f64)>) -> Result<()> {
        let mut merged: BTreeMap<Code, f64> = BTreeMap::new();
        for (z, p) in row {
            if !(p >= 0.0 && p.is_finite()) {
                return Err(Error::InvalidPmf(format!("channel probability {p}")));
            }
            *merged.entry(z).or_insert(0.0) += p;
        }
        let total: f64 = merged.values().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidPmf(format!("channel row for {x:?} sums to {total}")));
        }
        self.rows.insert(x, merged.into_iter().filter(|(_, p)| *p > 0.0).collect());
        Ok(())
    }

    /// Tabulate another channel on the given inputs.
    pub fn from_channel<'a>(channel: &impl Channel, inputs: impl IntoIterator<Item = &'a Symbols>) -> Result<Self> {
        let mut t = Self::new();
        for x in inputs {
            t.insert(x.clone(), channel.law(x)?)?;
        }
        Ok(t)
    }

    pub fn rows(&self) -> impl Iterator<Item = (&Symbols, &[(Code, f64)])> {
        self.rows.iter().map(|(x, r)| (x, r.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

impl Channel for Tabulated {
    fn law(&self, x: &[usize]) -> Result<Vec<(Code, f64)>> {
        self.rows
            .get(x)
            .cloned()
            .ok_or_else(|| Error::InvalidPmf(format!("channel has no row for input {x:?}")))
    }
}

/// `Σ_z P(z | x) P(z | x')`: the probability that independent passes of two
/// inputs produce the same code.
pub fn collision_probability(channel: &impl Channel, x: &[usize], x2: &[usize]) -> Result<f64> {
    let a = channel.law(x)?;
    let b: BTreeMap<Code, f64> = channel.law(x2)?.into_iter().collect();
    Ok(a.iter().map(|(z, p)| p * b.get(z).copied().unwrap_or(0.0)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_channels() {
        let x = vec![1, 1, 0, 2, 2, 2];
        assert_eq!(Identity.law(&x).unwrap(), vec![(vec![1, 1, 0, 2, 2, 2], 1.0)]);
        assert_eq!(Constant.law(&x).unwrap(), vec![(vec![], 1.0)]);
        assert_eq!(CollapseRuns.law(&x).unwrap(), vec![(vec![1, 0, 2], 1.0)]);
        let r = Relabel::new(vec![2, 0, 1]).unwrap();
        assert_eq!(r.law(&x).unwrap(), vec![(vec![0, 0, 2, 1, 1, 1], 1.0)]);
        assert!(Relabel::new(vec![0, 0]).is_err());
        assert!(r.law(&[5]).is_err());
    }

    #[test]
    fn tabulated_rows() {
        let mut t = Tabulated::new();
        t.insert(vec![0], [(vec![1], 0.5), (vec![2], 0.25), (vec![1], 0.25)]).unwrap();
        assert_eq!(t.law(&[0]).unwrap(), vec![(vec![1], 0.75), (vec![2], 0.25)]);
        assert!(t.insert(vec![1], [(vec![1], 0.5)]).is_err());
        assert!(t.law(&[3]).is_err());
    }

    #[test]
    fn collisions() {
        assert_eq!(collision_probability(&Identity, &[0, 1], &[0, 1, 1]).unwrap(), 0.0);
        assert_eq!(collision_probability(&CollapseRuns, &[0, 1], &[0, 1, 1]).unwrap(), 1.0);
        let mut t = Tabulated::new();
        t.insert(vec![0], [(vec![1], 0.5), (vec![2], 0.5)]).unwrap();
        t.insert(vec![1], [(vec![2], 1.0)]).unwrap();
        assert_eq!(collision_probability(&t, &[0], &[1]).unwrap(), 0.5);
        assert_eq!(collision_probability(&t, &[0], &[0]).unwrap(), 0.5);
    }
}
