//! Parameter recovery from bench logs.
//!
//! Force–pressure logs are fitted with a straight line per configuration and
//! mapped back onto the transmission model `F = N·c·A·P − N·c·f`. Bent-joint
//! trials are summarized per angle and interpolated linearly; nothing is
//! extrapolated beyond the tested angles.

use std::collections::BTreeMap;

use crate::error::{Result, SwagError};
use crate::mechanics::CrossSection;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForcePressureSample {
    pub n_subvines: u32,
    pub sheath_diameter_m: f64,
    pub trial: u32,
    pub pressure_pa: f64,
    pub force_n: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitWarning {
    /// The intercept implies a negative friction residual, which the model
    /// cannot produce.
    NegativeFriction,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub n_subvines: u32,
    pub sheath_diameter_m: f64,
    pub sample_count: usize,
    pub slope_n_per_pa: f64,
    pub intercept_n: f64,
    pub ratio_c_est: f64,
    pub friction_f_est_n: f64,
    pub r_squared: f64,
    /// Sample standard deviation of per-trial slopes (N/Pa).
    pub trial_spread: f64,
    pub trials_fitted: usize,
    pub warnings: Vec<FitWarning>,
}

struct Line {
    slope: f64,
    intercept: f64,
    r_squared: f64,
}

/// Ordinary least squares on `(x, y)` pairs. Callers pass points in a fixed
/// order so the reduction is reproducible.
fn fit_line(points: &[(f64, f64)]) -> Option<Line> {
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx.is_nan() || sxx <= 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let sse: f64 = points
        .iter()
        .map(|&(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    let r_squared = if syy > 0.0 {
        (1.0 - sse / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Some(Line {
        slope,
        intercept,
        r_squared,
    })
}

fn distinct_count(mut xs: Vec<f64>) -> usize {
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs.len()
}

fn sample_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (ss / (n - 1.0)).sqrt()
}

fn validate_fp_sample(s: &ForcePressureSample) -> Result<()> {
    if s.n_subvines == 0 {
        return Err(SwagError::InvalidInput("sample has n_subvines = 0".into()));
    }
    if !(s.pressure_pa.is_finite() && s.pressure_pa >= 0.0) {
        return Err(SwagError::InvalidInput(format!(
            "sample pressure must be non-negative, got {} Pa",
            s.pressure_pa
        )));
    }
    if !s.force_n.is_finite() || !s.sheath_diameter_m.is_finite() {
        return Err(SwagError::InvalidInput(
            "sample values must be finite".into(),
        ));
    }
    Ok(())
}

/// Key that orders groups by subvine count, then sheath diameter.
fn group_key(s: &ForcePressureSample) -> (u32, u64) {
    (s.n_subvines, s.sheath_diameter_m.to_bits())
}

/// Fits one line per (subvine count, sheath diameter) group, returned in
/// ascending order of both.
pub fn fit_force_pressure(
    samples: &[ForcePressureSample],
    cs: &CrossSection,
) -> Result<Vec<FitResult>> {
    if samples.is_empty() {
        return Err(SwagError::InsufficientData(
            "no force-pressure samples".into(),
        ));
    }
    let mut groups: BTreeMap<(u32, u64), Vec<ForcePressureSample>> = BTreeMap::new();
    for s in samples {
        validate_fp_sample(s)?;
        groups.entry(group_key(s)).or_default().push(*s);
    }
    groups
        .into_values()
        .map(|mut group| {
            group.sort_by(|a, b| {
                a.trial
                    .cmp(&b.trial)
                    .then(a.pressure_pa.total_cmp(&b.pressure_pa))
                    .then(a.force_n.total_cmp(&b.force_n))
            });
            fit_group(&group, cs)
        })
        .collect()
}

fn fit_group(group: &[ForcePressureSample], cs: &CrossSection) -> Result<FitResult> {
    let first = group[0];
    let n = first.n_subvines;
    let label = format!("N = {n}, sheath {:.1} mm", first.sheath_diameter_m * 1e3);
    let pressures: Vec<f64> = group.iter().map(|s| s.pressure_pa).collect();
    if distinct_count(pressures) < 2 {
        return Err(SwagError::InsufficientData(format!(
            "{label}: need at least 2 distinct pressures"
        )));
    }
    let points: Vec<(f64, f64)> = group.iter().map(|s| (s.pressure_pa, s.force_n)).collect();
    let line = fit_line(&points)
        .ok_or_else(|| SwagError::DegenerateData(format!("{label}: pressure has zero variance")))?;

    let ratio = line.slope / (f64::from(n) * cs.area_m2);
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(SwagError::RatioOutOfRange {
            n_subvines: n,
            ratio,
        });
    }
    let friction = -line.intercept * cs.area_m2 / line.slope;

    let mut by_trial: BTreeMap<u32, Vec<(f64, f64)>> = BTreeMap::new();
    for s in group {
        by_trial
            .entry(s.trial)
            .or_default()
            .push((s.pressure_pa, s.force_n));
    }
    let trial_slopes: Vec<f64> = by_trial
        .values()
        .filter_map(|pts| fit_line(pts).map(|l| l.slope))
        .collect();

    let mut warnings = Vec::new();
    if friction < 0.0 {
        warnings.push(FitWarning::NegativeFriction);
    }
    Ok(FitResult {
        n_subvines: n,
        sheath_diameter_m: first.sheath_diameter_m,
        sample_count: group.len(),
        slope_n_per_pa: line.slope,
        intercept_n: line.intercept,
        ratio_c_est: ratio,
        friction_f_est_n: friction,
        r_squared: line.r_squared,
        trial_spread: sample_std(&trial_slopes),
        trials_fitted: trial_slopes.len(),
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointTrialSample {
    pub joint_angle_deg: f64,
    pub trial: u32,
    pub peak_pressure_pa: f64,
    pub torque_nm: f64,
}

/// Per-angle statistics with piecewise-linear interpolation between knots.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalJointModel {
    pub knot_angles_deg: Vec<f64>,
    pub trials_per_knot: Vec<usize>,
    pub mean_pressure_pa: Vec<f64>,
    pub pressure_std_pa: Vec<f64>,
    pub mean_torque_nm: Vec<f64>,
    pub torque_std_nm: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointEvaluation {
    pub pressure_pa: f64,
    pub torque_nm: f64,
    /// Set when the query angle fell outside the knot range and was clamped.
    pub extrapolated: bool,
}

impl EmpiricalJointModel {
    pub fn angle_range_deg(&self) -> (f64, f64) {
        (
            self.knot_angles_deg[0],
            self.knot_angles_deg[self.knot_angles_deg.len() - 1],
        )
    }

    pub fn contains_angle(&self, angle_deg: f64) -> bool {
        let (lo, hi) = self.angle_range_deg();
        (lo..=hi).contains(&angle_deg)
    }

    pub fn evaluate(&self, angle_deg: f64) -> JointEvaluation {
        evaluate_joint_model(self, angle_deg)
    }
}

pub fn fit_joint_model(samples: &[JointTrialSample]) -> Result<EmpiricalJointModel> {
    let mut by_angle: BTreeMap<u64, Vec<JointTrialSample>> = BTreeMap::new();
    for s in samples {
        if !(0.0..=180.0).contains(&s.joint_angle_deg) {
            return Err(SwagError::InvalidInput(format!(
                "joint angle must lie in [0, 180] deg, got {}",
                s.joint_angle_deg
            )));
        }
        if !(s.peak_pressure_pa.is_finite() && s.peak_pressure_pa >= 0.0)
            || !(s.torque_nm.is_finite() && s.torque_nm >= 0.0)
        {
            return Err(SwagError::InvalidInput(format!(
                "joint trial values must be non-negative (angle {} deg, trial {})",
                s.joint_angle_deg, s.trial
            )));
        }
        // non-negative floats order the same as their bit patterns; +0.0
        // normalizes a possible -0.0
        by_angle
            .entry((s.joint_angle_deg + 0.0).to_bits())
            .or_default()
            .push(*s);
    }
    if by_angle.len() < 2 {
        return Err(SwagError::InsufficientData(format!(
            "joint model needs at least 2 distinct angles, got {}",
            by_angle.len()
        )));
    }

    let mut model = EmpiricalJointModel {
        knot_angles_deg: Vec::with_capacity(by_angle.len()),
        trials_per_knot: Vec::with_capacity(by_angle.len()),
        mean_pressure_pa: Vec::with_capacity(by_angle.len()),
        pressure_std_pa: Vec::with_capacity(by_angle.len()),
        mean_torque_nm: Vec::with_capacity(by_angle.len()),
        torque_std_nm: Vec::with_capacity(by_angle.len()),
    };
    for (bits, mut trials) in by_angle {
        trials.sort_by(|a, b| {
            a.trial
                .cmp(&b.trial)
                .then(a.peak_pressure_pa.total_cmp(&b.peak_pressure_pa))
                .then(a.torque_nm.total_cmp(&b.torque_nm))
        });
        let pressures: Vec<f64> = trials.iter().map(|t| t.peak_pressure_pa).collect();
        let torques: Vec<f64> = trials.iter().map(|t| t.torque_nm).collect();
        let n = trials.len() as f64;
        model.knot_angles_deg.push(f64::from_bits(bits));
        model.trials_per_knot.push(trials.len());
        model
            .mean_pressure_pa
            .push(pressures.iter().sum::<f64>() / n);
        model.pressure_std_pa.push(sample_std(&pressures));
        model.mean_torque_nm.push(torques.iter().sum::<f64>() / n);
        model.torque_std_nm.push(sample_std(&torques));
    }
    Ok(model)
}

pub fn evaluate_joint_model(model: &EmpiricalJointModel, angle_deg: f64) -> JointEvaluation {
    let knots = &model.knot_angles_deg;
    let last = knots.len() - 1;
    let at = |i: usize, extrapolated| JointEvaluation {
        pressure_pa: model.mean_pressure_pa[i],
        torque_nm: model.mean_torque_nm[i],
        extrapolated,
    };
    if angle_deg <= knots[0] {
        return at(0, angle_deg < knots[0]);
    }
    if angle_deg >= knots[last] {
        return at(last, angle_deg > knots[last]);
    }
    let hi = knots.partition_point(|&k| k < angle_deg);
    if knots[hi] == angle_deg {
        return at(hi, false);
    }
    let lo = hi - 1;
    let w = (angle_deg - knots[lo]) / (knots[hi] - knots[lo]);
    let lerp = |v: &[f64]| v[lo] + w * (v[hi] - v[lo]);
    JointEvaluation {
        pressure_pa: lerp(&model.mean_pressure_pa),
        torque_nm: lerp(&model.mean_torque_nm),
        extrapolated: false,
    }
}
