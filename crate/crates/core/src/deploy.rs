//! Quasi-static deployment of the sheath along an articulated limb.
//!
//! The fold point advances with the subvine tip, one-to-one. At each arc
//! position the demand is the larger of the straight-section pressure needed
//! to carry the garment mass still waiting at the tip, and the empirical
//! joint demand of the nearest joint within one sheath diameter.

use std::f64::consts::TAU;

use crate::calibration::EmpiricalJointModel;
use crate::error::{Result, SwagError};
use crate::mechanics::{
    pressure_for_total_force, LoadSpec, SheathSpec, SubvineSpec, TransmissionParams,
};

pub const MAX_JOINT_ANGLE_DEG: f64 = 150.0;
pub const DEFAULT_TRACE_SAMPLES: usize = 241;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimbSegment {
    pub length_m: f64,
    pub radius_m: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimbModel {
    segments: Vec<LimbSegment>,
    joint_angles_deg: Vec<f64>,
}

impl LimbModel {
    /// `joint_angles_deg[i]` is the bend between segment `i` and `i + 1`;
    /// 0° is straight.
    pub fn new(segments: Vec<LimbSegment>, joint_angles_deg: Vec<f64>) -> Result<Self> {
        if segments.is_empty() {
            return Err(SwagError::InvalidGeometry(
                "limb needs at least one segment".into(),
            ));
        }
        for (i, s) in segments.iter().enumerate() {
            if !(s.length_m.is_finite() && s.length_m > 0.0) {
                return Err(SwagError::InvalidGeometry(format!(
                    "segment {i} length must be positive, got {} m",
                    s.length_m
                )));
            }
            if !(s.radius_m.is_finite() && s.radius_m >= 0.0) {
                return Err(SwagError::InvalidGeometry(format!(
                    "segment {i} radius must be non-negative, got {} m",
                    s.radius_m
                )));
            }
        }
        if joint_angles_deg.len() + 1 != segments.len() {
            return Err(SwagError::InvalidInput(format!(
                "{} segments need {} joint angles, got {}",
                segments.len(),
                segments.len() - 1,
                joint_angles_deg.len()
            )));
        }
        if let Some(bad) = joint_angles_deg
            .iter()
            .find(|a| !(0.0..=MAX_JOINT_ANGLE_DEG).contains(*a))
        {
            return Err(SwagError::InvalidInput(format!(
                "joint angle {bad} deg outside [0, {MAX_JOINT_ANGLE_DEG}]"
            )));
        }
        Ok(Self {
            segments,
            joint_angles_deg,
        })
    }

    /// A single unjointed segment.
    pub fn straight(length_m: f64, radius_m: f64) -> Result<Self> {
        Self::new(vec![LimbSegment { length_m, radius_m }], vec![])
    }

    pub fn segments(&self) -> &[LimbSegment] {
        &self.segments
    }

    pub fn joint_angles_deg(&self) -> &[f64] {
        &self.joint_angles_deg
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointMarker {
    pub arc_position_m: f64,
    pub angle_deg: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimbPath {
    pub total_length_m: f64,
    pub joints: Vec<JointMarker>,
}

pub fn build_limb_path(limb: &LimbModel) -> LimbPath {
    let mut s = 0.0;
    let mut joints = Vec::with_capacity(limb.joint_angles_deg.len());
    for (segment, angle) in limb.segments.iter().zip(&limb.joint_angles_deg) {
        s += segment.length_m;
        joints.push(JointMarker {
            arc_position_m: s,
            angle_deg: *angle,
        });
    }
    let total_length_m = limb.segments.iter().map(|seg| seg.length_m).sum();
    LimbPath {
        total_length_m,
        joints,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpoolState {
    pub deployed_length_m: f64,
    pub payout_length_m: f64,
    pub reel_radius_m: f64,
    pub reel_turns: f64,
}

/// Reel state after `deployed_length_m` of growth. Everted material doubles
/// back on itself, so the reel pays out twice the deployed length.
pub fn spool_kinematics(deployed_length_m: f64, reel_radius_m: f64) -> Result<SpoolState> {
    if !(deployed_length_m.is_finite() && deployed_length_m >= 0.0) {
        return Err(SwagError::InvalidInput(format!(
            "deployed length must be non-negative, got {deployed_length_m} m"
        )));
    }
    if !(reel_radius_m.is_finite() && reel_radius_m > 0.0) {
        return Err(SwagError::InvalidGeometry(format!(
            "reel radius must be positive, got {reel_radius_m} m"
        )));
    }
    let payout = 2.0 * deployed_length_m;
    Ok(SpoolState {
        deployed_length_m,
        payout_length_m: payout,
        reel_radius_m,
        reel_turns: payout / (TAU * reel_radius_m),
    })
}

/// Tip mass a joint torque can hold on a horizontal lever, `τ/(g·L)`.
pub fn torque_capacity_to_tip_load(
    torque_nm: f64,
    arm_length_m: f64,
    gravity_ms2: f64,
) -> Result<f64> {
    if !(arm_length_m.is_finite() && arm_length_m > 0.0) {
        return Err(SwagError::InvalidGeometry(format!(
            "arm length must be positive, got {arm_length_m} m"
        )));
    }
    if !(gravity_ms2.is_finite() && gravity_ms2 > 0.0) {
        return Err(SwagError::InvalidInput(format!(
            "gravity must be positive, got {gravity_ms2} m/s^2"
        )));
    }
    if !(torque_nm.is_finite() && torque_nm >= 0.0) {
        return Err(SwagError::InvalidInput(format!(
            "torque must be non-negative, got {torque_nm} N·m"
        )));
    }
    Ok(torque_nm / (gravity_ms2 * arm_length_m))
}

/// Growth speed when a volumetric supply is split evenly across subvines.
pub fn advance_speed_from_flow(flow_m3_s: f64, subvines: &SubvineSpec) -> Result<f64> {
    if !(flow_m3_s.is_finite() && flow_m3_s > 0.0) {
        return Err(SwagError::InvalidInput(format!(
            "volumetric flow must be positive, got {flow_m3_s} m^3/s"
        )));
    }
    Ok(flow_m3_s / (f64::from(subvines.count) * subvines.cross_section().area_m2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitingFactor {
    None,
    Burst,
    /// The joint angle lies outside the tested range; the demand was clamped
    /// to the nearest knot.
    JointModelRange,
}

impl LimitingFactor {
    pub fn as_str(self) -> &'static str {
        match self {
            LimitingFactor::None => "none",
            LimitingFactor::Burst => "burst",
            LimitingFactor::JointModelRange => "joint-model-range",
        }
    }
}

impl std::str::FromStr for LimitingFactor {
    type Err = SwagError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(LimitingFactor::None),
            "burst" => Ok(LimitingFactor::Burst),
            "joint-model-range" => Ok(LimitingFactor::JointModelRange),
            other => Err(SwagError::InvalidInput(format!(
                "unknown limiting factor `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DeploymentTrace {
    pub arc_positions_m: Vec<f64>,
    pub required_pressure_pa: Vec<f64>,
    pub feasible: Vec<bool>,
    pub limiting_factor: Vec<LimitingFactor>,
    pub spool_payout_m: Vec<f64>,
    pub time_s: Vec<f64>,
}

impl DeploymentTrace {
    pub fn len(&self) -> usize {
        self.arc_positions_m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arc_positions_m.is_empty()
    }

    pub fn peak_pressure_pa(&self) -> f64 {
        self.required_pressure_pa
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn all_feasible(&self) -> bool {
        self.feasible.iter().all(|&f| f)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DeploymentScenario<'a> {
    pub limb: &'a LimbModel,
    pub subvines: &'a SubvineSpec,
    pub sheath: &'a SheathSpec,
    pub load: &'a LoadSpec,
    pub transmission: &'a TransmissionParams,
    /// Without a model, joints add no demand beyond the straight section.
    pub joint_model: Option<&'a EmpiricalJointModel>,
    pub advance_speed_m_s: f64,
    pub samples: usize,
}

/// Picks a `(s, t)` pair with `t·v == s` bit-for-bit and `s` as close to
/// `target` as the floating-point grid allows.
fn exact_time_pair(target: f64, speed: f64) -> (f64, f64) {
    let t0 = target / speed;
    let mut t = t0;
    for step in 0..8 {
        if t * speed == target {
            return (target, t);
        }
        // alternate t0+1ulp, t0-1ulp, t0+2ulp, ...
        let k = (step / 2 + 1) as i64;
        let ulps = if step % 2 == 0 { k } else { -k };
        t = f64::from_bits((t0.to_bits() as i64 + ulps) as u64);
    }
    (t0 * speed, t0)
}

pub fn simulate_deployment(sc: &DeploymentScenario<'_>) -> Result<DeploymentTrace> {
    if !(sc.advance_speed_m_s.is_finite() && sc.advance_speed_m_s > 0.0) {
        return Err(SwagError::InvalidInput(format!(
            "advance speed must be positive, got {} m/s",
            sc.advance_speed_m_s
        )));
    }
    if sc.samples < 2 {
        return Err(SwagError::InvalidInput(format!(
            "deployment trace needs at least 2 samples, got {}",
            sc.samples
        )));
    }
    sc.sheath.accepts(sc.subvines)?;
    let path = build_limb_path(sc.limb);
    let total = path.total_length_m;
    if sc.sheath.length_m < total {
        return Err(SwagError::SheathTooShort {
            sheath_m: sc.sheath.length_m,
            limb_m: total,
        });
    }

    let cs = sc.subvines.cross_section();
    let window = sc.sheath.diameter_m;
    let weight = sc.load.weight_n();
    let burst = sc.subvines.burst_pressure_pa;
    let last = sc.samples - 1;

    let mut trace = DeploymentTrace::default();
    for k in 0..sc.samples {
        let target = if k == last {
            total
        } else {
            total * k as f64 / last as f64
        };
        let (s, time) = exact_time_pair(target, sc.advance_speed_m_s);

        let remaining = (1.0 - s / total).clamp(0.0, 1.0);
        let straight =
            pressure_for_total_force(sc.subvines.count, weight * remaining, &cs, sc.transmission)?;

        let mut demand = straight;
        let mut out_of_range = false;
        if let (Some(model), Some(joint)) = (sc.joint_model, nearest_joint(&path, s, window)) {
            let eval = model.evaluate(joint.angle_deg);
            out_of_range = eval.extrapolated;
            demand = demand.max(eval.pressure_pa);
        }

        let feasible = demand <= burst;
        let factor = if !feasible {
            LimitingFactor::Burst
        } else if out_of_range {
            LimitingFactor::JointModelRange
        } else {
            LimitingFactor::None
        };

        trace.arc_positions_m.push(s);
        trace.required_pressure_pa.push(demand);
        trace.feasible.push(feasible);
        trace.limiting_factor.push(factor);
        trace.spool_payout_m.push(2.0 * s);
        trace.time_s.push(time);
    }
    Ok(trace)
}

/// Closest joint within `window` of arc position `s`; on a tie the one
/// still ahead of the tip wins.
fn nearest_joint(path: &LimbPath, s: f64, window: f64) -> Option<JointMarker> {
    path.joints
        .iter()
        .filter(|j| (j.arc_position_m - s).abs() <= window)
        .min_by(|a, b| {
            let da = (a.arc_position_m - s).abs();
            let db = (b.arc_position_m - s).abs();
            da.total_cmp(&db)
                .then(b.arc_position_m.total_cmp(&a.arc_position_m))
        })
        .copied()
}
