//! Directional bending stiffness of an N-subvine sheath.
//!
//! Configurations are compared at equal total propulsion, so each subvine
//! runs at `P_N = (F/(N·c) + f)/A`. Stiffness about a bending axis at angle
//! `θ` is taken proportional to `P_N` times the composite second moment
//!
//! ```text
//! I(θ) = Σ_i [ I_x + A·R²·sin²(φ_i − θ) ]
//! ```
//!
//! and normalized by the frictionless single-subvine maximum, so the N = 1
//! curve spans `[I_x/(I_x + A·R²), 1]`.

use std::f64::consts::{PI, TAU};

use crate::error::{Result, SwagError};
use crate::mechanics::{check_burst, pressure_for_total_force, CrossSection, TransmissionParams};

pub const DEFAULT_THETA_SAMPLES: usize = 360;

/// Angular positions of subvine centroids around the sheath axis.
#[derive(Debug, Clone, PartialEq)]
pub struct SubvineLayout {
    angles_rad: Vec<f64>,
    placement_radius_m: f64,
}

impl SubvineLayout {
    pub fn new(angles_rad: Vec<f64>, placement_radius_m: f64) -> Result<Self> {
        if angles_rad.is_empty() {
            return Err(SwagError::InvalidInput(
                "layout needs at least one subvine".into(),
            ));
        }
        if !(placement_radius_m.is_finite() && placement_radius_m >= 0.0) {
            return Err(SwagError::InvalidGeometry(format!(
                "placement radius must be non-negative, got {placement_radius_m} m"
            )));
        }
        if angles_rad.iter().any(|a| !a.is_finite()) {
            return Err(SwagError::InvalidInput(
                "layout angles must be finite".into(),
            ));
        }
        Ok(Self {
            angles_rad: angles_rad.into_iter().map(normalize_angle).collect(),
            placement_radius_m,
        })
    }

    pub fn angles_rad(&self) -> &[f64] {
        &self.angles_rad
    }

    pub fn placement_radius_m(&self) -> f64 {
        self.placement_radius_m
    }

    pub fn len(&self) -> usize {
        self.angles_rad.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles_rad.is_empty()
    }

    /// Same layout turned by `delta` about the sheath axis.
    pub fn rotated(&self, delta_rad: f64) -> Self {
        Self {
            angles_rad: self
                .angles_rad
                .iter()
                .map(|a| normalize_angle(a + delta_rad))
                .collect(),
            placement_radius_m: self.placement_radius_m,
        }
    }
}

fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// `n` subvines equally spaced from `offset`.
pub fn axisymmetric_layout(n: u32, radius_m: f64, offset_rad: f64) -> Result<SubvineLayout> {
    if n == 0 {
        return Err(SwagError::InvalidInput(
            "subvine count must be at least 1".into(),
        ));
    }
    let step = TAU / f64::from(n);
    let angles = (0..n).map(|i| offset_rad + step * f64::from(i)).collect();
    SubvineLayout::new(angles, radius_m)
}

pub fn section_inertia_about_axis(
    layout: &SubvineLayout,
    cs: &CrossSection,
    theta_rad: f64,
) -> f64 {
    let ar2 = cs.area_m2 * layout.placement_radius_m * layout.placement_radius_m;
    layout
        .angles_rad
        .iter()
        .map(|phi| {
            let s = (phi - theta_rad).sin();
            cs.inertia_m4 + ar2 * s * s
        })
        .sum()
}

/// Whether the friction residual enters the equal-propulsion pressure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FrictionMode {
    #[default]
    Include,
    Ignore,
}

impl FrictionMode {
    fn apply(self, t: &TransmissionParams) -> TransmissionParams {
        match self {
            FrictionMode::Include => *t,
            FrictionMode::Ignore => t.frictionless(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FrictionMode::Include => "include",
            FrictionMode::Ignore => "ignore",
        }
    }
}

/// Per-subvine pressure giving total unfurl force `target_force_n`.
///
/// `burst_pa`, when given, turns an over-limit pressure into an error.
pub fn constant_propulsion_pressure(
    n: u32,
    target_force_n: f64,
    cs: &CrossSection,
    t: &TransmissionParams,
    burst_pa: Option<f64>,
) -> Result<f64> {
    if !(target_force_n > 0.0 && target_force_n.is_finite()) {
        return Err(SwagError::InvalidInput(format!(
            "target force must be positive, got {target_force_n} N"
        )));
    }
    let p = pressure_for_total_force(n, target_force_n, cs, t)?;
    match burst_pa {
        Some(burst) => check_burst(p, burst),
        None => Ok(p),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StiffnessProfile {
    pub theta_samples_rad: Vec<f64>,
    pub normalized_stiffness: Vec<f64>,
    pub n_subvines: u32,
    pub normalization_reference: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StiffnessExtrema {
    pub theta_min_rad: f64,
    pub s_min: f64,
    pub theta_max_rad: f64,
    pub s_max: f64,
}

impl StiffnessProfile {
    pub fn mean(&self) -> f64 {
        self.normalized_stiffness.iter().sum::<f64>() / self.normalized_stiffness.len() as f64
    }

    /// `(max − min)/max`; zero for a perfectly uniform profile.
    pub fn flatness(&self) -> f64 {
        let e = stiffness_extrema(self).expect("profiles always hold samples");
        (e.s_max - e.s_min) / e.s_max
    }
}

/// Inputs for [`normalized_stiffness_profile`] beyond the cross-section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRequest {
    pub n: u32,
    pub radius_m: f64,
    pub offset_rad: f64,
    pub target_force_n: f64,
    pub samples: usize,
    pub friction: FrictionMode,
    pub burst_pa: Option<f64>,
}

impl ProfileRequest {
    pub fn new(n: u32, radius_m: f64, target_force_n: f64) -> Self {
        Self {
            n,
            radius_m,
            offset_rad: 0.0,
            target_force_n,
            samples: DEFAULT_THETA_SAMPLES,
            friction: FrictionMode::Include,
            burst_pa: None,
        }
    }
}

/// Uniform bending-axis samples on `[0, π)`.
pub fn theta_grid(samples: usize) -> Vec<f64> {
    (0..samples)
        .map(|k| PI * k as f64 / samples as f64)
        .collect()
}

pub fn normalized_stiffness_profile(
    cs: &CrossSection,
    t: &TransmissionParams,
    req: &ProfileRequest,
) -> Result<StiffnessProfile> {
    if req.samples < 2 {
        return Err(SwagError::InvalidInput(format!(
            "stiffness profile needs at least 2 samples, got {}",
            req.samples
        )));
    }
    let layout = axisymmetric_layout(req.n, req.radius_m, req.offset_rad)?;
    let effective = req.friction.apply(t);
    let p_n =
        constant_propulsion_pressure(req.n, req.target_force_n, cs, &effective, req.burst_pa)?;

    let p_ref = constant_propulsion_pressure(1, req.target_force_n, cs, &t.frictionless(), None)?;
    let i_ref = cs.inertia_m4 + cs.area_m2 * req.radius_m * req.radius_m;
    let scale = p_n / (p_ref * i_ref);

    let theta = theta_grid(req.samples);
    let values = theta
        .iter()
        .map(|&th| scale * section_inertia_about_axis(&layout, cs, th))
        .collect();
    Ok(StiffnessProfile {
        theta_samples_rad: theta,
        normalized_stiffness: values,
        n_subvines: req.n,
        normalization_reference: format!(
            "frictionless N=1 maximum; friction {}",
            req.friction.as_str()
        ),
    })
}

/// Arg-extrema over the samples; ties go to the smallest angle.
pub fn stiffness_extrema(profile: &StiffnessProfile) -> Result<StiffnessExtrema> {
    let mut iter = profile
        .theta_samples_rad
        .iter()
        .copied()
        .zip(profile.normalized_stiffness.iter().copied());
    let (th0, s0) = iter
        .next()
        .ok_or_else(|| SwagError::InvalidInput("stiffness profile is empty".into()))?;
    let mut e = StiffnessExtrema {
        theta_min_rad: th0,
        s_min: s0,
        theta_max_rad: th0,
        s_max: s0,
    };
    for (th, s) in iter {
        // samples are ascending in θ, so strict comparisons keep the first hit
        if s < e.s_min {
            e.s_min = s;
            e.theta_min_rad = th;
        }
        if s > e.s_max {
            e.s_max = s;
            e.theta_max_rad = th;
        }
    }
    Ok(e)
}
