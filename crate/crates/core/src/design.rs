//! Exhaustive grid search over subvine count and stocked diameters.
//!
//! Hard constraints: the subvines must fit around the sheath wall, leave a
//! positive bore, stay under the burst pressure at the target propulsion
//! force, and keep cross-section occupancy under the jam threshold. Feasible
//! candidates are scored on min-max normalized metrics.

use std::cmp::Ordering;
use std::f64::consts::PI;

use crate::error::{Result, SwagError};
use crate::mechanics::{CrossSection, TransmissionParams};
use crate::stiffness::{
    constant_propulsion_pressure, normalized_stiffness_profile, stiffness_extrema, FrictionMode,
    ProfileRequest, DEFAULT_THETA_SAMPLES,
};

/// Occupancy above which subvines are expected to jam against the body.
/// Heuristic: fails three 32 mm subvines in a 120 mm sheath, passes them in
/// a 170 mm sheath.
pub const DEFAULT_JAM_THRESHOLD: f64 = 0.15;

/// Which stiffness figure the score penalizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StiffnessMetric {
    /// Stiffness about the most compliant bending axis.
    #[default]
    MinAxis,
    Max,
    Mean,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignSpace {
    pub n_min: u32,
    pub n_max: u32,
    pub subvine_diameters_m: Vec<f64>,
    pub sheath_diameters_m: Vec<f64>,
    pub burst_pressure_pa: f64,
    pub target_force_n: f64,
    pub transmission: TransmissionParams,
    pub jam_threshold: f64,
    pub stiffness_samples: usize,
    pub friction_mode: FrictionMode,
    pub stiffness_metric: StiffnessMetric,
}

impl DesignSpace {
    pub fn new(
        n_range: (u32, u32),
        subvine_diameters_m: Vec<f64>,
        sheath_diameters_m: Vec<f64>,
        burst_pressure_pa: f64,
        target_force_n: f64,
        transmission: TransmissionParams,
    ) -> Result<Self> {
        let space = Self {
            n_min: n_range.0,
            n_max: n_range.1,
            subvine_diameters_m,
            sheath_diameters_m,
            burst_pressure_pa,
            target_force_n,
            transmission,
            jam_threshold: DEFAULT_JAM_THRESHOLD,
            stiffness_samples: DEFAULT_THETA_SAMPLES,
            friction_mode: FrictionMode::Include,
            stiffness_metric: StiffnessMetric::MinAxis,
        };
        space.validate()?;
        Ok(space)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(SwagError::InvalidInput(format!(
                "subvine count range must satisfy 1 <= min <= max, got {}..={}",
                self.n_min, self.n_max
            )));
        }
        let positive = |xs: &[f64]| !xs.is_empty() && xs.iter().all(|x| x.is_finite() && *x > 0.0);
        if !positive(&self.subvine_diameters_m) {
            return Err(SwagError::InvalidGeometry(
                "subvine diameters must be a nonempty list of positive values".into(),
            ));
        }
        if !positive(&self.sheath_diameters_m) {
            return Err(SwagError::InvalidGeometry(
                "sheath diameters must be a nonempty list of positive values".into(),
            ));
        }
        for (name, v) in [
            ("burst pressure", self.burst_pressure_pa),
            ("target force", self.target_force_n),
            ("jam threshold", self.jam_threshold),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(SwagError::InvalidInput(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if self.stiffness_samples < 2 {
            return Err(SwagError::InvalidInput(
                "stiffness samples must be at least 2".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Infeasibility {
    Packing,
    NoBore,
    Burst,
    JamRisk,
}

impl Infeasibility {
    pub fn as_str(self) -> &'static str {
        match self {
            Infeasibility::Packing => "packing",
            Infeasibility::NoBore => "no-bore",
            Infeasibility::Burst => "burst",
            Infeasibility::JamRisk => "jam-risk",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignCandidate {
    pub n: u32,
    pub subvine_diameter_m: f64,
    pub sheath_diameter_m: f64,
    pub required_pressure_pa: f64,
    pub min_normalized_stiffness: f64,
    pub max_normalized_stiffness: f64,
    pub mean_normalized_stiffness: f64,
    pub effective_bore_m: f64,
    pub occupancy_ratio: f64,
    pub reasons: Vec<Infeasibility>,
}

impl DesignCandidate {
    pub fn feasible(&self) -> bool {
        self.reasons.is_empty()
    }

    pub fn stiffness(&self, metric: StiffnessMetric) -> f64 {
        match metric {
            StiffnessMetric::MinAxis => self.min_normalized_stiffness,
            StiffnessMetric::Max => self.max_normalized_stiffness,
            StiffnessMetric::Mean => self.mean_normalized_stiffness,
        }
    }

    fn key_cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then(self.subvine_diameter_m.total_cmp(&other.subvine_diameter_m))
            .then(self.sheath_diameter_m.total_cmp(&other.sheath_diameter_m))
    }
}

/// Centre-to-centre distance of neighbouring subvines on a ring of radius
/// `r`; must be at least one diameter for `n >= 2`.
pub fn chord_spacing(n: u32, ring_radius_m: f64) -> f64 {
    2.0 * ring_radius_m * (PI / f64::from(n)).sin()
}

pub fn occupancy_ratio(n: u32, subvine_diameter_m: f64, sheath_diameter_m: f64) -> f64 {
    f64::from(n) * (subvine_diameter_m / sheath_diameter_m).powi(2)
}

pub fn evaluate_candidate(
    space: &DesignSpace,
    n: u32,
    subvine_diameter_m: f64,
    sheath_diameter_m: f64,
) -> Result<DesignCandidate> {
    let cs = CrossSection::circle(subvine_diameter_m)?;
    let ring = (sheath_diameter_m - subvine_diameter_m) / 2.0;
    let bore = sheath_diameter_m - 2.0 * subvine_diameter_m;
    let occupancy = occupancy_ratio(n, subvine_diameter_m, sheath_diameter_m);

    let t = match space.friction_mode {
        FrictionMode::Include => space.transmission,
        FrictionMode::Ignore => space.transmission.frictionless(),
    };
    let pressure = constant_propulsion_pressure(n, space.target_force_n, &cs, &t, None)?;

    let mut reasons = Vec::new();
    if n >= 2 && chord_spacing(n, ring) < subvine_diameter_m {
        reasons.push(Infeasibility::Packing);
    }
    if bore <= 0.0 {
        reasons.push(Infeasibility::NoBore);
    }
    if pressure > space.burst_pressure_pa {
        reasons.push(Infeasibility::Burst);
    }
    if occupancy > space.jam_threshold {
        reasons.push(Infeasibility::JamRisk);
    }

    let (s_min, s_max, s_mean) = if ring >= 0.0 {
        let req = ProfileRequest {
            n,
            radius_m: ring,
            offset_rad: 0.0,
            target_force_n: space.target_force_n,
            samples: space.stiffness_samples,
            friction: space.friction_mode,
            burst_pa: None,
        };
        let profile = normalized_stiffness_profile(&cs, &space.transmission, &req)?;
        let e = stiffness_extrema(&profile)?;
        (e.s_min, e.s_max, profile.mean())
    } else {
        // subvine wider than the sheath; geometry already flagged
        (f64::NAN, f64::NAN, f64::NAN)
    };

    Ok(DesignCandidate {
        n,
        subvine_diameter_m,
        sheath_diameter_m,
        required_pressure_pa: pressure,
        min_normalized_stiffness: s_min,
        max_normalized_stiffness: s_max,
        mean_normalized_stiffness: s_mean,
        effective_bore_m: bore,
        occupancy_ratio: occupancy,
        reasons,
    })
}

fn sorted_unique(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Every grid point with its feasibility verdict, in (N, D, D_s) order.
pub fn enumerate_candidates(space: &DesignSpace) -> Result<Vec<DesignCandidate>> {
    space.validate()?;
    let diameters = sorted_unique(&space.subvine_diameters_m);
    let sheaths = sorted_unique(&space.sheath_diameters_m);
    let mut out = Vec::with_capacity(
        (space.n_max - space.n_min + 1) as usize * diameters.len() * sheaths.len(),
    );
    for n in space.n_min..=space.n_max {
        for &d in &diameters {
            for &ds in &sheaths {
                out.push(evaluate_candidate(space, n, d, ds)?);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreWeights {
    pub pressure: f64,
    pub stiffness: f64,
    pub bore: f64,
}

impl ScoreWeights {
    pub fn validate(&self) -> Result<()> {
        let all = [self.pressure, self.stiffness, self.bore];
        if all.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(SwagError::InvalidInput(
                "score weights must be non-negative".into(),
            ));
        }
        if all.iter().all(|w| *w == 0.0) {
            return Err(SwagError::InvalidInput(
                "score weights must not all be zero".into(),
            ));
        }
        Ok(())
    }
}

impl Default for ScoreWeights {
    fn default() -> Self {
        Self {
            pressure: 1.0,
            stiffness: 1.0,
            bore: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Range {
    lo: f64,
    hi: f64,
}

impl Range {
    fn over(values: impl Iterator<Item = f64>) -> Option<Self> {
        values.fold(None, |acc, v| match acc {
            None => Some(Range { lo: v, hi: v }),
            Some(r) => Some(Range {
                lo: r.lo.min(v),
                hi: r.hi.max(v),
            }),
        })
    }

    /// Min-max normalized goodness of `v`. A range no wider than rounding
    /// noise counts as a single point where every value is best.
    fn goodness(&self, v: f64, higher_is_better: bool) -> f64 {
        let width = self.hi - self.lo;
        if width <= 1e-12 * self.hi.abs().max(self.lo.abs()) {
            return 1.0;
        }
        let p = ((v - self.lo) / width).clamp(0.0, 1.0);
        if higher_is_better {
            p
        } else {
            1.0 - p
        }
    }
}

/// Metric ranges over the set a run normalizes against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricBounds {
    pressure: Range,
    stiffness: Range,
    bore: Range,
    metric: StiffnessMetric,
}

impl MetricBounds {
    pub fn from_candidates(
        candidates: &[DesignCandidate],
        metric: StiffnessMetric,
    ) -> Option<Self> {
        Some(Self {
            pressure: Range::over(candidates.iter().map(|c| c.required_pressure_pa))?,
            stiffness: Range::over(candidates.iter().map(|c| c.stiffness(metric)))?,
            bore: Range::over(candidates.iter().map(|c| c.effective_bore_m))?,
            metric,
        })
    }
}

/// Weighted mean of per-metric goodness in [0, 1]; higher is better.
/// Lower pressure, lower stiffness and a larger bore are preferred.
pub fn score_candidate(
    candidate: &DesignCandidate,
    bounds: &MetricBounds,
    weights: &ScoreWeights,
) -> Result<f64> {
    weights.validate()?;
    let pressure = bounds
        .pressure
        .goodness(candidate.required_pressure_pa, false);
    let stiffness = bounds
        .stiffness
        .goodness(candidate.stiffness(bounds.metric), false);
    let bore = bounds.bore.goodness(candidate.effective_bore_m, true);
    let total = weights.pressure + weights.stiffness + weights.bore;
    Ok((weights.pressure * pressure + weights.stiffness * stiffness + weights.bore * bore) / total)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedCandidate {
    pub candidate: DesignCandidate,
    pub score: f64,
}

/// Scores agreeing to twelve decimals are ties; this keeps analytically
/// equal scores from being ordered by rounding noise.
fn score_key(score: f64) -> i64 {
    (score * 1e12).round() as i64
}

/// Orders by score descending, then (N, D, D_s) ascending.
pub fn rank_order(a: &RankedCandidate, b: &RankedCandidate) -> Ordering {
    score_key(b.score)
        .cmp(&score_key(a.score))
        .then_with(|| a.candidate.key_cmp(&b.candidate))
}

/// Scores an already-enumerated candidate list and returns the feasible
/// ones in rank order.
pub fn rank(
    candidates: &[DesignCandidate],
    metric: StiffnessMetric,
    weights: &ScoreWeights,
) -> Result<Vec<RankedCandidate>> {
    weights.validate()?;
    let feasible: Vec<DesignCandidate> = candidates
        .iter()
        .filter(|c| c.feasible())
        .cloned()
        .collect();
    let Some(bounds) = MetricBounds::from_candidates(&feasible, metric) else {
        return Ok(Vec::new());
    };
    let mut ranked = feasible
        .into_iter()
        .map(|candidate| {
            let score = score_candidate(&candidate, &bounds, weights)?;
            Ok(RankedCandidate { candidate, score })
        })
        .collect::<Result<Vec<_>>>()?;
    ranked.sort_by(rank_order);
    Ok(ranked)
}

pub fn search(space: &DesignSpace, weights: &ScoreWeights) -> Result<Vec<RankedCandidate>> {
    weights.validate()?;
    let all = enumerate_candidates(space)?;
    rank(&all, space.stiffness_metric, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t0() -> TransmissionParams {
        TransmissionParams::from_ratio(0.2678, 0.0).unwrap()
    }

    fn space(ns: (u32, u32), ds: Vec<f64>, sheaths: Vec<f64>) -> DesignSpace {
        DesignSpace::new(ns, ds, sheaths, 60_000.0, 1.962, t0()).unwrap()
    }

    #[test]
    fn jam_case_and_its_resolution() {
        let s = space((3, 3), vec![0.032], vec![0.12, 0.17]);
        let c = enumerate_candidates(&s).unwrap();
        assert!((chord_spacing(3, 0.044) - 0.076_210_235_533_030_6).abs() < 1e-12);
        assert!((c[0].occupancy_ratio - 0.213_333_333_333_333).abs() < 1e-12);
        assert_eq!(c[0].reasons, vec![Infeasibility::JamRisk]);
        assert!((c[1].occupancy_ratio - 0.106_297_577_854_671).abs() < 1e-12);
        assert!(c[1].feasible());
    }

    #[test]
    fn prototype_is_feasible() {
        let s = space((2, 2), vec![0.032], vec![0.12]);
        let ranked = search(&s, &ScoreWeights::default()).unwrap();
        assert_eq!(ranked.len(), 1);
        let c = &ranked[0].candidate;
        assert_eq!(
            (c.n, c.subvine_diameter_m, c.sheath_diameter_m),
            (2, 0.032, 0.12)
        );
        assert!((c.occupancy_ratio - 0.142_222_222_222_222).abs() < 1e-12);
        assert!((c.effective_bore_m - 0.056).abs() < 1e-15);
    }

    #[test]
    fn single_subvine_skips_packing() {
        // ring radius 0 would fail any chord rule
        let s = space((1, 1), vec![0.05], vec![0.051]);
        let c = &enumerate_candidates(&s).unwrap()[0];
        assert!(!c.reasons.contains(&Infeasibility::Packing));
        assert!(c.reasons.contains(&Infeasibility::NoBore));
    }

    #[test]
    fn tight_ring_fails_packing() {
        let s = space((6, 6), vec![0.032], vec![0.09]);
        let c = &enumerate_candidates(&s).unwrap()[0];
        assert!(c.reasons.contains(&Infeasibility::Packing));
    }

    #[test]
    fn stiffness_weight_prefers_two_or_fewer() {
        let mut s = space((1, 5), vec![0.02], vec![0.3]);
        s.jam_threshold = 1.0;
        let w = ScoreWeights {
            pressure: 0.0,
            stiffness: 1.0,
            bore: 0.0,
        };
        let ranked = search(&s, &w).unwrap();
        let ns: Vec<u32> = ranked.iter().map(|r| r.candidate.n).collect();
        assert_eq!(&ns[..2], &[1, 2]);
        let low = ranked[1].score;
        assert!(ranked[2..].iter().all(|r| r.score < low));
    }

    #[test]
    fn identical_candidates_score_equally() {
        let s = space((2, 2), vec![0.032], vec![0.12]);
        let c = enumerate_candidates(&s).unwrap().remove(0);
        let pair = vec![c.clone(), c.clone()];
        let b = MetricBounds::from_candidates(&pair, StiffnessMetric::MinAxis).unwrap();
        let w = ScoreWeights::default();
        assert_eq!(
            score_candidate(&c, &b, &w).unwrap(),
            score_candidate(&pair[1], &b, &w).unwrap()
        );
    }

    #[test]
    fn bore_weight_prefers_smallest_subvine() {
        let s = space((2, 2), vec![0.032, 0.02, 0.025], vec![0.2]);
        let w = ScoreWeights {
            pressure: 0.0,
            stiffness: 0.0,
            bore: 1.0,
        };
        let ranked = search(&s, &w).unwrap();
        assert_eq!(ranked[0].candidate.subvine_diameter_m, 0.02);
    }

    #[test]
    fn zero_weights_rejected() {
        let w = ScoreWeights {
            pressure: 0.0,
            stiffness: 0.0,
            bore: 0.0,
        };
        let s = space((2, 2), vec![0.032], vec![0.12]);
        assert!(search(&s, &w).is_err());
    }

    #[test]
    fn empty_feasible_set_is_empty_list() {
        let mut s = space((3, 4), vec![0.032], vec![0.12]);
        s.burst_pressure_pa = 1.0;
        assert!(search(&s, &ScoreWeights::default()).unwrap().is_empty());
    }

    #[test]
    fn input_order_does_not_matter() {
        let a = space((1, 4), vec![0.02, 0.032, 0.025], vec![0.17, 0.12, 0.2]);
        let b = space(
            (1, 4),
            vec![0.032, 0.025, 0.02, 0.02],
            vec![0.2, 0.12, 0.17],
        );
        let w = ScoreWeights::default();
        assert_eq!(search(&a, &w).unwrap(), search(&b, &w).unwrap());
    }

    #[test]
    fn space_validation() {
        assert!(DesignSpace::new((0, 2), vec![0.03], vec![0.1], 1.0, 1.0, t0()).is_err());
        assert!(DesignSpace::new((3, 2), vec![0.03], vec![0.1], 1.0, 1.0, t0()).is_err());
        assert!(DesignSpace::new((1, 2), vec![], vec![0.1], 1.0, 1.0, t0()).is_err());
        assert!(DesignSpace::new((1, 2), vec![0.03], vec![-0.1], 1.0, 1.0, t0()).is_err());
        assert!(DesignSpace::new((1, 2), vec![0.03], vec![0.1], 0.0, 1.0, t0()).is_err());
    }
}
