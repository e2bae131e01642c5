use rand::Rng as _;

use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::simrep::GramMatrix;

/// How the insertion test reads its threshold when `τ > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UpsampleRule {
    /// `G(t_m, t') ≥ 1 − τ` for `t'` in `{t, t+1}`.
    TwoFrame,
    /// `G(t_m, t) ≥ 2 − τ`: insert where similarity is high.
    #[default]
    HighSimilarity,
}

impl UpsampleRule {
    pub fn name(self) -> &'static str {
        match self {
            Self::TwoFrame => "two-frame",
            Self::HighSimilarity => "high-similarity",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "two-frame" => Ok(Self::TwoFrame),
            "high-similarity" => Ok(Self::HighSimilarity),
            other => Err(Error::Config(format!("unknown upsample rule {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdMode {
    /// Double-randomized levels mapped through the windowed quantile.
    Randomized,
    /// The same `τ` at every frame.
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdParams {
    pub u_l: f64,
    pub u_r: f64,
    pub local_halfwidth: f64,
    pub window_b: usize,
    pub mode: ThresholdMode,
    pub upsample_rule: UpsampleRule,
}

impl Default for ThresholdParams {
    fn default() -> Self {
        Self {
            u_l: 0.7,
            u_r: 1.1,
            local_halfwidth: 0.05,
            window_b: 20,
            mode: ThresholdMode::Randomized,
            upsample_rule: UpsampleRule::default(),
        }
    }
}

impl ThresholdParams {
    pub fn fixed(tau: f64) -> Self {
        Self {
            mode: ThresholdMode::Fixed(tau),
            ..Self::default()
        }
    }

    pub fn randomized(u_l: f64, u_r: f64) -> Self {
        Self {
            u_l,
            u_r,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let in_range = |v: f64| (0.0..=2.0).contains(&v);
        if !(in_range(self.u_l) && in_range(self.u_r) && self.u_l <= self.u_r) {
            return Err(Error::Config(format!(
                "need 0 <= u_l <= u_r <= 2, got [{}, {}]",
                self.u_l, self.u_r
            )));
        }
        if !(self.local_halfwidth >= 0.0 && self.local_halfwidth.is_finite()) {
            return Err(Error::Config(format!(
                "local half-width must be >= 0, got {}",
                self.local_halfwidth
            )));
        }
        if self.window_b == 0 {
            return Err(Error::Config("window_b must be >= 1".into()));
        }
        if let ThresholdMode::Fixed(tau) = self.mode {
            if !in_range(tau) {
                return Err(Error::Config(format!("fixed tau must lie in [0, 2], got {tau}")));
            }
        }
        Ok(())
    }
}

/// One utterance's random threshold draw.
#[derive(Debug, Clone, PartialEq)]
pub struct TauDraw {
    pub global: f64,
    pub levels: Vec<f64>,
}

/// `G ~ U[u_l, u_r]` once, then `L(t) ~ U[G − h, G + h]` for each of the
/// `len` frames. Nothing is clamped.
pub fn draw_tau(rng: &mut Rng, len: usize, params: &ThresholdParams) -> TauDraw {
    let uniform = |rng: &mut Rng, lo: f64, hi: f64| lo + (hi - lo) * rng.random::<f64>();
    let global = uniform(rng, params.u_l, params.u_r);
    let h = params.local_halfwidth;
    let levels = (0..len).map(|_| uniform(rng, global - h, global + h)).collect();
    TauDraw { global, levels }
}

/// Linear-interpolation quantile of ascending `sorted` at `level` in [0, 1].
pub fn quantile_sorted(sorted: &[f64], level: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let pos = level.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    if frac == 0.0 {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[hi] - sorted[lo])
    }
}

/// `τ(t)` from the similarity row of `anchor`, restricted to
/// `[anchor − b, anchor + b]` clamped to the sequence. Levels above 1 are
/// returned unchanged.
pub fn tau_from_quantile(gram: &GramMatrix, anchor: usize, level: f64, window_b: usize) -> f64 {
    if level > 1.0 {
        return level;
    }
    let n = gram.len();
    let lo = anchor.saturating_sub(window_b);
    let hi = (anchor + window_b).min(n - 1);
    let mut window: Vec<f64> = gram.row(anchor)[lo..=hi].to_vec();
    window.sort_by(f64::total_cmp);
    quantile_sorted(&window, level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use proptest::prelude::*;

    #[test]
    fn degenerate_interval() {
        let p = ThresholdParams {
            u_l: 0.8,
            u_r: 0.8,
            local_halfwidth: 0.0,
            ..Default::default()
        };
        let d = draw_tau(&mut rng::seeded(1), 7, &p);
        assert_eq!(d.global, 0.8);
        assert!(d.levels.iter().all(|&l| l == 0.8));
    }

    #[test]
    fn global_mean_matches_uniform() {
        let p = ThresholdParams::randomized(0.7, 1.1);
        let mut g = rng::seeded(2);
        let n = 10_000;
        let mean: f64 = (0..n).map(|_| draw_tau(&mut g, 1, &p).global).sum::<f64>() / n as f64;
        assert!((mean - 0.9).abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn levels_stay_in_local_band() {
        let p = ThresholdParams::randomized(0.7, 1.1);
        let d = draw_tau(&mut rng::seeded(3), 500, &p);
        assert!(d.levels.iter().all(|l| (l - d.global).abs() <= 0.05 + 1e-15));
        assert!((0.7..=1.1).contains(&d.global));
    }

    #[test]
    fn draws_are_deterministic() {
        let p = ThresholdParams::default();
        assert_eq!(draw_tau(&mut rng::seeded(4), 30, &p), draw_tau(&mut rng::seeded(4), 30, &p));
    }

    #[test]
    fn two_point_window() {
        let g = GramMatrix::with_pairs(2, 0.0, &[]).unwrap();
        assert_eq!(tau_from_quantile(&g, 0, 0.5, 20), 0.5);
        assert_eq!(tau_from_quantile(&g, 0, 0.0, 20), 0.0);
        assert_eq!(tau_from_quantile(&g, 0, 1.0, 20), 1.0);
        assert_eq!(tau_from_quantile(&g, 1, 1.04, 20), 1.04);
    }

    #[test]
    fn window_is_clamped() {
        // Row 0 sees frames 0..=1 only with b = 1.
        let g = GramMatrix::with_pairs(4, -1.0, &[(0, 1, 0.0)]).unwrap();
        assert_eq!(tau_from_quantile(&g, 0, 0.0, 1), 0.0);
        assert_eq!(tau_from_quantile(&g, 2, 0.0, 1), -1.0);
    }

    fn brute_quantile(values: &[f64], level: f64) -> f64 {
        // Selection by repeated minimum extraction instead of sorting.
        let mut rest = values.to_vec();
        let mut ordered = Vec::new();
        while !rest.is_empty() {
            let (i, _) = rest
                .iter()
                .enumerate()
                .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
            ordered.push(rest.swap_remove(i));
        }
        let h = (values.len() - 1) as f64 * level;
        let k = h as usize;
        if k + 1 >= ordered.len() {
            return ordered[k];
        }
        ordered[k] * (1.0 - (h - k as f64)) + ordered[k + 1] * (h - k as f64)
    }

    #[test]
    fn quantile_matches_selection_oracle() {
        let mut g = rng::seeded(5);
        for _ in 0..50 {
            let vals: Vec<f64> = (0..41).map(|_| g.random_range(-1.0..1.0)).collect();
            let mut sorted = vals.clone();
            sorted.sort_by(f64::total_cmp);
            for level in [0.0, 0.1, 0.25, 0.5, 0.77, 1.0] {
                assert!((quantile_sorted(&sorted, level) - brute_quantile(&vals, level)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn validation() {
        assert!(ThresholdParams::randomized(1.2, 0.8).validate().is_err());
        assert!(ThresholdParams::randomized(0.5, 2.5).validate().is_err());
        assert!(ThresholdParams::fixed(-0.1).validate().is_err());
        assert!(ThresholdParams { window_b: 0, ..Default::default() }.validate().is_err());
        assert!(ThresholdParams::default().validate().is_ok());
        assert_eq!(UpsampleRule::parse("two-frame").unwrap(), UpsampleRule::TwoFrame);
        assert!(UpsampleRule::parse("other").is_err());
    }

    proptest! {
        #[test]
        fn quantile_is_monotone_in_level(vals in prop::collection::vec(-1.0f64..1.0, 1..50), a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let mut s = vals.clone();
            s.sort_by(f64::total_cmp);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assert!(quantile_sorted(&s, lo) <= quantile_sorted(&s, hi));
            prop_assert!(quantile_sorted(&s, lo) >= s[0] && quantile_sorted(&s, hi) <= s[s.len() - 1]);
        }
    }
}
