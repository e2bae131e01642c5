use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng as _;

use super::channel::{collision_probability, Channel, Code, Symbols, Tabulated};
use super::pmf::{entropy, mutual_information, DiscretePmf};
use crate::error::{Error, Result};
use crate::numfmt::fmt_g;
use crate::rng::Rng;

/// Largest support of `X` accepted for exact enumeration.
pub const MAX_SUPPORT: usize = 4096;
/// Absolute tolerance for the theorem equalities.
pub const THEOREM_TOL: f64 = 1e-9;

/// Expand content `s` with repetition counts `r` into the frame sequence.
pub fn emit(s: &[usize], r: &[usize]) -> Symbols {
    s.iter().zip(r).flat_map(|(&sym, &n)| std::iter::repeat_n(sym, n)).collect()
}

/// Joint law of content `S` and rhythm `R`; `X = emit(S, R)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteEnsemble {
    joint_sr: DiscretePmf<(Symbols, Symbols)>,
}

impl DiscreteEnsemble {
    /// Checks that `(S, R) ↦ X` is injective on the support, so that `S` and
    /// `R` are both functions of `X`.
    pub fn new(joint_sr: DiscretePmf<(Symbols, Symbols)>) -> Result<Self> {
        if joint_sr.len() > MAX_SUPPORT {
            return Err(Error::Config(format!(
                "ensemble support {} exceeds {MAX_SUPPORT}",
                joint_sr.len()
            )));
        }
        let mut seen: BTreeMap<Symbols, &(Symbols, Symbols)> = BTreeMap::new();
        for (sr, _) in joint_sr.iter() {
            let (s, r) = sr;
            if s.len() != r.len() || r.contains(&0) {
                return Err(Error::Config(format!("rhythm {r:?} does not fit content {s:?}")));
            }
            if let Some(prev) = seen.insert(emit(s, r), sr) {
                return Err(Error::HypothesisViolated(format!(
                    "{prev:?} and {sr:?} emit the same sequence"
                )));
            }
        }
        Ok(Self { joint_sr })
    }

    pub fn joint_sr(&self) -> &DiscretePmf<(Symbols, Symbols)> {
        &self.joint_sr
    }

    pub fn s_alphabet(&self) -> BTreeSet<Symbols> {
        self.joint_sr.support().iter().map(|(s, _)| s.clone()).collect()
    }

    pub fn r_alphabet(&self) -> BTreeSet<Symbols> {
        self.joint_sr.support().iter().map(|(_, r)| r.clone()).collect()
    }

    /// Distinct emitted sequences.
    pub fn x_support(&self) -> Vec<Symbols> {
        self.joint_sr.support().iter().map(|(s, r)| emit(s, r)).collect()
    }
}

struct JointRow {
    s: Symbols,
    r: Symbols,
    x: Symbols,
    z: Code,
    p: f64,
}

fn joint_rows(ens: &DiscreteEnsemble, channel: &impl Channel) -> Result<Vec<JointRow>> {
    let mut rows = Vec::new();
    for ((s, r), p_sr) in ens.joint_sr.iter() {
        let x = emit(s, r);
        for (z, p_z) in channel.law(&x)? {
            rows.push(JointRow {
                s: s.clone(),
                r: r.clone(),
                x: x.clone(),
                z,
                p: p_sr * p_z,
            });
        }
    }
    Ok(rows)
}

fn pair_pmf<A: Ord + Clone, B: Ord + Clone>(
    rows: &[JointRow],
    f: impl Fn(&JointRow) -> (A, B),
) -> Result<DiscretePmf<(A, B)>> {
    let mut map = BTreeMap::new();
    for row in rows {
        *map.entry(f(row)).or_insert(0.0) += row.p;
    }
    DiscretePmf::from_map(map)
}

/// Exact `P(r, z̃) = Σ_s P(s, r) P(z̃ | emit(s, r))`.
pub fn push_channel(ens: &DiscreteEnsemble, channel: &impl Channel) -> Result<DiscretePmf<(Symbols, Code)>> {
    pair_pmf(&joint_rows(ens, channel)?, |row| (row.r.clone(), row.z.clone()))
}

/// Every mutual information the theorems talk about, in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InformationReport {
    pub i_rz: f64,
    pub i_rx: f64,
    pub i_rs: f64,
    pub i_sz: f64,
    pub i_sx: f64,
    pub h_r: f64,
    pub h_z: f64,
}

impl InformationReport {
    /// `I(R; Z̃) ≤ I(R; X)` up to the theorem tolerance.
    pub fn data_processing_holds(&self) -> bool {
        self.i_rz <= self.i_rx + THEOREM_TOL
    }

    /// `0 ≤ I(R; Z̃) ≤ min(H(R), H(Z̃))` up to the theorem tolerance.
    pub fn bounds_hold(&self) -> bool {
        self.i_rz >= 0.0 && self.i_rz <= self.h_r.min(self.h_z) + THEOREM_TOL
    }
}

pub fn information_report(ens: &DiscreteEnsemble, channel: &impl Channel) -> Result<InformationReport> {
    let rows = joint_rows(ens, channel)?;
    let rz = pair_pmf(&rows, |r| (r.r.clone(), r.z.clone()))?;
    Ok(InformationReport {
        i_rz: mutual_information(&rz)?,
        i_rx: mutual_information(&pair_pmf(&rows, |r| (r.r.clone(), r.x.clone()))?)?,
        i_rs: mutual_information(&pair_pmf(&rows, |r| (r.r.clone(), r.s.clone()))?)?,
        i_sz: mutual_information(&pair_pmf(&rows, |r| (r.s.clone(), r.z.clone()))?)?,
        i_sx: mutual_information(&pair_pmf(&rows, |r| (r.s.clone(), r.x.clone()))?)?,
        h_r: entropy(&rz.map(|(r, _)| r.clone())),
        h_z: entropy(&rz.map(|(_, z)| z.clone())),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    /// Never aligned: `I(R; Z̃) = I(R; X)`.
    NeverAligned,
    /// Always aligned: `I(R; Z̃) = I(R; S)`.
    AlwaysAligned,
}

impl Theorem {
    pub fn label(self) -> &'static str {
        match self {
            Self::NeverAligned => "1",
            Self::AlwaysAligned => "2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoremReport {
    pub theorem: Theorem,
    pub lhs: f64,
    pub rhs: f64,
    pub info: InformationReport,
    pub pass: bool,
}

/// Exhaustive check over same-content, different-rhythm support pairs that
/// the collision probability equals `target`.
fn check_pairs(ens: &DiscreteEnsemble, channel: &impl Channel, target: f64) -> Result<()> {
    let mut by_s: BTreeMap<&Symbols, Vec<&Symbols>> = BTreeMap::new();
    for (s, r) in ens.joint_sr.support() {
        by_s.entry(s).or_default().push(r);
    }
    for (s, rs) in by_s {
        for (i, r) in rs.iter().enumerate() {
            for r2 in &rs[i + 1..] {
                let c = collision_probability(channel, &emit(s, r), &emit(s, r2))?;
                if (c - target).abs() > 1e-12 {
                    return Err(Error::HypothesisViolated(format!(
                        "content {s:?}, rhythms {r:?} and {r2:?}: collision probability {c}, need {target}"
                    )));
                }
            }
        }
    }
    Ok(())
}

fn check_content_preserved(info: &InformationReport) -> Result<()> {
    if (info.i_sz - info.i_sx).abs() > THEOREM_TOL {
        return Err(Error::HypothesisViolated(format!(
            "channel loses content: I(S;Z) = {} but I(S;X) = {}",
            info.i_sz, info.i_sx
        )));
    }
    Ok(())
}

pub fn verify_theorem1(ens: &DiscreteEnsemble, channel: &impl Channel) -> Result<TheoremReport> {
    check_pairs(ens, channel, 0.0)?;
    let info = information_report(ens, channel)?;
    check_content_preserved(&info)?;
    Ok(TheoremReport {
        theorem: Theorem::NeverAligned,
        lhs: info.i_rz,
        rhs: info.i_rx,
        info,
        pass: (info.i_rz - info.i_rx).abs() < THEOREM_TOL,
    })
}

pub fn verify_theorem2(ens: &DiscreteEnsemble, channel: &impl Channel) -> Result<TheoremReport> {
    check_pairs(ens, channel, 1.0)?;
    let info = information_report(ens, channel)?;
    check_content_preserved(&info)?;
    Ok(TheoremReport {
        theorem: Theorem::AlwaysAligned,
        lhs: info.i_rz,
        rhs: info.i_rs,
        info,
        pass: (info.i_rz - info.i_rs).abs() < THEOREM_TOL,
    })
}

/// CSV with header `ensemble_id,I_RZ,I_RX,I_RS,theorem,pass`.
pub fn report_csv(reports: &[(usize, TheoremReport)]) -> String {
    let mut out = String::from("ensemble_id,I_RZ,I_RX,I_RS,theorem,pass\n");
    for (id, r) in reports {
        let _ = writeln!(
            out,
            "{id},{},{},{},{},{}",
            fmt_g(r.info.i_rz, 12),
            fmt_g(r.info.i_rx, 12),
            fmt_g(r.info.i_rs, 12),
            r.theorem.label(),
            r.pass
        );
    }
    out
}

/// Plain-text table of the same reports.
pub fn report_table(reports: &[(usize, TheoremReport)]) -> String {
    let mut out = format!("{:>8} {:>8} {:>10} {:>10} {:>10} {:>5}\n", "ensemble", "theorem", "I(R;Z)", "I(R;X)", "I(R;S)", "pass");
    for (id, r) in reports {
        let _ = writeln!(
            out,
            "{id:>8} {:>8} {:>10.6} {:>10.6} {:>10.6} {:>5}",
            r.theorem.label(),
            r.info.i_rz,
            r.info.i_rx,
            r.info.i_rs,
            r.pass
        );
    }
    out
}

/// Size of randomly generated ensembles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleShape {
    pub content_len: usize,
    pub alphabet: usize,
    pub max_rep: usize,
    pub contents: usize,
    pub rhythms_per_content: usize,
}

impl Default for EnsembleShape {
    fn default() -> Self {
        Self {
            content_len: 3,
            alphabet: 3,
            max_rep: 3,
            contents: 3,
            rhythms_per_content: 5,
        }
    }
}

fn random_content(rng: &mut Rng, len: usize, alphabet: usize) -> Symbols {
    let mut s = vec![rng.random_range(0..alphabet)];
    while s.len() < len {
        let prev = *s.last().unwrap();
        let mut v = rng.random_range(0..alphabet - 1);
        if v >= prev {
            v += 1;
        }
        s.push(v);
    }
    s
}

/// Random joint over `(S, R)` with correlated content and rhythm.
pub fn random_ensemble(rng: &mut Rng, shape: &EnsembleShape) -> Result<DiscreteEnsemble> {
    if shape.alphabet < 2 || shape.content_len == 0 || shape.max_rep == 0 || shape.contents == 0 {
        return Err(Error::Config(format!("bad ensemble shape {shape:?}")));
    }
    let mut contents = BTreeSet::new();
    for _ in 0..shape.contents * 20 {
        if contents.len() == shape.contents {
            break;
        }
        contents.insert(random_content(rng, shape.content_len, shape.alphabet));
    }
    let mut pairs = Vec::new();
    for s in &contents {
        let mut rhythms = BTreeSet::new();
        for _ in 0..shape.rhythms_per_content * 20 {
            if rhythms.len() == shape.rhythms_per_content {
                break;
            }
            rhythms.insert((0..shape.content_len).map(|_| rng.random_range(1..=shape.max_rep)).collect::<Symbols>());
        }
        for r in rhythms {
            pairs.push(((s.clone(), r), rng.random_range(0.05..1.0)));
        }
    }
    let total: f64 = pairs.iter().map(|(_, w)| w).sum();
    DiscreteEnsemble::new(DiscretePmf::new(pairs.into_iter().map(|(k, w)| (k, w / total)))?)
}

fn random_perm(rng: &mut Rng, n: usize) -> Vec<i64> {
    let mut p: Vec<i64> = (0..n as i64).collect();
    p.shuffle(rng);
    p
}

/// A random channel under which distinct inputs never collide: either a
/// symbol relabeling or a relabeling followed by a random noise tag.
pub fn random_injective_channel(rng: &mut Rng, ens: &DiscreteEnsemble, alphabet: usize) -> Result<Tabulated> {
    let perm = random_perm(rng, alphabet);
    let tags = rng.random_range(1..=3usize);
    let mut table = Tabulated::new();
    for x in ens.x_support() {
        let base: Code = x.iter().map(|&v| perm[v]).collect();
        let weights: Vec<f64> = (0..tags).map(|_| rng.random_range(0.1..1.0)).collect();
        let total: f64 = weights.iter().sum();
        let row = weights.iter().enumerate().map(|(k, w)| {
            let mut z = base.clone();
            // Negative tags cannot be confused with relabeled symbols.
            z.push(-(k as i64) - 1);
            (z, w / total)
        });
        table.insert(x, row)?;
    }
    Ok(table)
}

/// A random channel whose output is an injective function of the content
/// alone: collapse runs, then either relabel symbols or replace the whole
/// content by an arbitrary identifier.
pub fn random_content_channel(rng: &mut Rng, ens: &DiscreteEnsemble, alphabet: usize) -> Result<Tabulated> {
    let perm = random_perm(rng, alphabet);
    let by_id = rng.random_bool(0.5);
    let ids: BTreeMap<Symbols, i64> = ens
        .s_alphabet()
        .into_iter()
        .zip(random_perm(rng, ens.s_alphabet().len()))
        .collect();
    let mut table = Tabulated::new();
    for ((s, r), _) in ens.joint_sr().iter() {
        let z = if by_id { vec![ids[s]] } else { s.iter().map(|&v| perm[v]).collect() };
        table.insert(emit(s, r), [(z, 1.0)])?;
    }
    Ok(table)
}

/// A random noisy channel with no structure; outputs collide freely.
pub fn random_noisy_channel(rng: &mut Rng, ens: &DiscreteEnsemble, outputs: usize) -> Result<Tabulated> {
    let mut table = Tabulated::new();
    for x in ens.x_support() {
        let weights: Vec<f64> = (0..outputs).map(|_| rng.random_range(0.0..1.0)).collect();
        let total: f64 = weights.iter().sum();
        table.insert(x, weights.iter().enumerate().map(|(k, w)| (vec![k as i64], w / total)))?;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::super::channel::{CollapseRuns, Constant, Identity, Relabel};
    use super::*;
    use crate::rng;

    fn two_rhythm_ensemble() -> DiscreteEnsemble {
        DiscreteEnsemble::new(
            DiscretePmf::new([((vec![0, 1], vec![1, 2]), 0.5), ((vec![0, 1], vec![2, 1]), 0.5)]).unwrap(),
        )
        .unwrap()
    }

    /// Uniform content over `{ab, ba}` and rhythm over `{(1,1), (2,1)}`;
    /// `parity` ties rhythm to content.
    fn small_ensemble(parity: bool) -> DiscreteEnsemble {
        let contents = [vec![0, 1], vec![1, 0]];
        let rhythms = [vec![1, 1], vec![2, 1]];
        let mut pairs = Vec::new();
        for (i, s) in contents.iter().enumerate() {
            for (j, r) in rhythms.iter().enumerate() {
                let p = if parity { if i == j { 0.5 } else { 0.0 } } else { 0.25 };
                pairs.push(((s.clone(), r.clone()), p));
            }
        }
        DiscreteEnsemble::new(DiscretePmf::new(pairs).unwrap()).unwrap()
    }

    #[test]
    fn emit_expands() {
        assert_eq!(emit(&[3, 1], &[2, 3]), vec![3, 3, 1, 1, 1]);
    }

    #[test]
    fn non_injective_emit_is_rejected() {
        let pmf = DiscretePmf::new([((vec![0, 0], vec![1, 2]), 0.5), ((vec![0, 0], vec![2, 1]), 0.5)]).unwrap();
        assert!(matches!(DiscreteEnsemble::new(pmf), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn push_examples() {
        let ens = two_rhythm_ensemble();
        let id = information_report(&ens, &Identity).unwrap();
        assert!((id.i_rz - 1.0).abs() < 1e-12 && (id.i_rx - 1.0).abs() < 1e-12);
        assert_eq!(information_report(&ens, &Constant).unwrap().i_rz, 0.0);
        let collapsed = information_report(&ens, &CollapseRuns).unwrap();
        assert_eq!(collapsed.i_rz, 0.0);
        assert!((collapsed.i_rx - 1.0).abs() < 1e-12);
        // Enumeration oracle: both rhythms land on the single code [0, 1].
        let joint = push_channel(&ens, &CollapseRuns).unwrap();
        assert_eq!(joint.len(), 2);
        assert!(joint.support().iter().all(|(_, z)| z == &vec![0, 1]));
    }

    #[test]
    fn theorem1_examples() {
        let ens = small_ensemble(false);
        let rep = verify_theorem1(&ens, &Identity).unwrap();
        assert!(rep.pass);
        assert!((rep.lhs - rep.info.h_r).abs() < 1e-12);
        assert!(verify_theorem1(&ens, &Relabel::new(vec![1, 0]).unwrap()).unwrap().pass);
        let mut merge = Tabulated::from_channel(&Identity, ens.x_support().iter()).unwrap();
        merge.insert(vec![0, 0, 1], [(vec![0, 1], 1.0)]).unwrap();
        assert!(matches!(verify_theorem1(&ens, &merge), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn theorem2_examples() {
        let indep = verify_theorem2(&small_ensemble(false), &CollapseRuns).unwrap();
        assert!(indep.pass);
        assert!(indep.lhs.abs() < 1e-12 && indep.rhs.abs() < 1e-12);
        let parity = verify_theorem2(&small_ensemble(true), &CollapseRuns).unwrap();
        assert!(parity.pass);
        assert!((parity.rhs - 1.0).abs() < 1e-12);
        assert!(matches!(
            verify_theorem2(&small_ensemble(false), &Identity),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn content_loss_is_rejected() {
        assert!(matches!(
            verify_theorem2(&small_ensemble(false), &Constant),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn random_ensembles_satisfy_both_theorems() {
        let shape = EnsembleShape::default();
        let mut g = rng::seeded(11);
        for _ in 0..30 {
            let ens = random_ensemble(&mut g, &shape).unwrap();
            let c1 = random_injective_channel(&mut g, &ens, shape.alphabet).unwrap();
            let c2 = random_content_channel(&mut g, &ens, shape.alphabet).unwrap();
            let noisy = random_noisy_channel(&mut g, &ens, 3).unwrap();
            let r1 = verify_theorem1(&ens, &c1).unwrap();
            let r2 = verify_theorem2(&ens, &c2).unwrap();
            assert!(r1.pass && r2.pass);
            for info in [r1.info, r2.info, information_report(&ens, &noisy).unwrap()] {
                assert!(info.data_processing_holds() && info.bounds_hold());
            }
        }
    }

    #[test]
    fn csv_layout() {
        let rep = verify_theorem1(&small_ensemble(false), &Identity).unwrap();
        let csv = report_csv(&[(0, rep)]);
        assert_eq!(csv, "ensemble_id,I_RZ,I_RX,I_RS,theorem,pass\n0,1,1,0,1,true\n");
        assert!(report_table(&[(0, rep)]).lines().count() == 2);
    }
}
