//! Run configuration.
//!
//! The file is TOML with lab units (mm, kPa, deg, L/min); everything is
//! converted to SI and re-validated on load. Unknown keys are rejected.
//! See `config/schema.md` at the repository root for the full key list.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::deploy::{LimbModel, LimbSegment, DEFAULT_TRACE_SAMPLES, MAX_JOINT_ANGLE_DEG};
use crate::design::{DesignSpace, ScoreWeights, StiffnessMetric, DEFAULT_JAM_THRESHOLD};
use crate::error::{Result, SwagError};
use crate::mechanics::{LoadSpec, SheathSpec, SubvineSpec, TransmissionParams, DEFAULT_GRAVITY};
use crate::stiffness::{FrictionMode, DEFAULT_THETA_SAMPLES};

use super::units::{deg_to_rad, kpa_to_pa, lpm_to_m3s, mm_to_m};

pub const DEFAULT_REEL_RADIUS_MM: f64 = 20.0;
pub const DEFAULT_ARM_LENGTH_MM: f64 = 300.0;
pub const DEFAULT_FORCE_SWEEP_MAX_KPA: f64 = 50.0;
pub const DEFAULT_FORCE_SWEEP_STEPS: usize = 51;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    subvine: RawSubvine,
    sheath: RawSheath,
    transmission: RawTransmission,
    load: Option<RawLoad>,
    force: Option<RawForce>,
    stiffness: Option<RawStiffness>,
    calibration: Option<RawCalibration>,
    joint_model: Option<RawJointModel>,
    limb: Option<RawLimb>,
    simulation: Option<RawSimulation>,
    design: Option<RawDesign>,
    weights: Option<RawWeights>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSubvine {
    diameter_mm: f64,
    count: u32,
    placement_radius_mm: Option<f64>,
    #[serde(default)]
    angular_offset_deg: f64,
    burst_pressure_kpa: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSheath {
    diameter_mm: f64,
    length_mm: f64,
    channel_diameter_mm: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTransmission {
    ratio_c: Option<f64>,
    arm_a_mm: Option<f64>,
    arm_b_mm: Option<f64>,
    #[serde(default)]
    friction_n: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLoad {
    garment_mass_kg: f64,
    gravity_ms2: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawForce {
    max_pressure_kpa: Option<f64>,
    steps: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStiffness {
    samples: Option<usize>,
    target_force_n: Option<f64>,
    friction_mode: Option<String>,
    n_values: Option<Vec<u32>>,
    offset_deg: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCalibration {
    force_pressure_csv: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJointModel {
    trials_csv: Option<PathBuf>,
    arm_length_mm: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSegment {
    length_mm: f64,
    radius_mm: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLimb {
    segments: Vec<RawSegment>,
    #[serde(default)]
    joint_angles_deg: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSimulation {
    advance_speed_mm_s: Option<f64>,
    volumetric_flow_lpm: Option<f64>,
    reel_radius_mm: Option<f64>,
    samples: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDesign {
    n_min: u32,
    n_max: u32,
    subvine_diameters_mm: Vec<f64>,
    sheath_diameters_mm: Vec<f64>,
    burst_pressure_kpa: Option<f64>,
    target_force_n: Option<f64>,
    jam_threshold: Option<f64>,
    stiffness_samples: Option<usize>,
    friction_mode: Option<String>,
    stiffness_metric: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeights {
    #[serde(default)]
    pressure: f64,
    #[serde(default)]
    stiffness: f64,
    #[serde(default)]
    bore: f64,
}

/// How fast the tip advances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AdvanceRate {
    Speed {
        m_per_s: f64,
    },
    /// Supply flow shared by all subvines.
    Flow {
        m3_per_s: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub rate: AdvanceRate,
    pub reel_radius_m: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StiffnessConfig {
    pub samples: usize,
    pub target_force_n: Option<f64>,
    pub friction_mode: FrictionMode,
    pub n_values: Vec<u32>,
    pub offset_rad: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForceSweep {
    pub max_pressure_pa: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointModelConfig {
    pub trials_csv: Option<PathBuf>,
    pub arm_length_m: f64,
}

/// Fully validated configuration in SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Directory relative paths in the file resolve against.
    pub base_dir: PathBuf,
    pub subvines: SubvineSpec,
    pub sheath: SheathSpec,
    pub transmission: TransmissionParams,
    pub load: Option<LoadSpec>,
    pub force_sweep: ForceSweep,
    pub stiffness: StiffnessConfig,
    pub force_pressure_csv: Option<PathBuf>,
    pub joint_model: JointModelConfig,
    pub limb: Option<LimbModel>,
    pub simulation: Option<SimulationConfig>,
    pub design: Option<DesignSpace>,
    pub weights: ScoreWeights,
}

impl RunConfig {
    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    /// Target propulsion for stiffness comparisons: explicit value, else the
    /// garment weight.
    pub fn stiffness_target_force(&self) -> Result<f64> {
        if let Some(f) = self.stiffness.target_force_n {
            return Ok(f);
        }
        match self.load {
            Some(l) if l.weight_n() > 0.0 => Ok(l.weight_n()),
            _ => Err(SwagError::config(
                "stiffness.target_force_n",
                "required when no positive [load] garment mass is given",
            )),
        }
    }
}

pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| SwagError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_config_str(&text, &base)
}

pub fn parse_config_str(text: &str, base_dir: &Path) -> Result<RunConfig> {
    let de = toml::Deserializer::new(text);
    let raw: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let message = inner.message().trim().to_string();
        SwagError::config(
            if path == "." {
                String::from("<root>")
            } else {
                path
            },
            message,
        )
    })?;
    build(raw, base_dir)
}

fn finite(path: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(SwagError::config(path, format!("must be finite, got {v}")))
    }
}

fn positive(path: &str, v: f64) -> Result<f64> {
    if finite(path, v)? > 0.0 {
        Ok(v)
    } else {
        Err(SwagError::config(
            path,
            format!("must be positive, got {v}"),
        ))
    }
}

fn non_negative(path: &str, v: f64) -> Result<f64> {
    if finite(path, v)? >= 0.0 {
        Ok(v)
    } else {
        Err(SwagError::config(
            path,
            format!("must be non-negative, got {v}"),
        ))
    }
}

fn at<T>(path: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        SwagError::Config { .. } => e,
        other => SwagError::config(path, other.to_string()),
    })
}

fn friction_mode(path: &str, s: Option<&str>) -> Result<FrictionMode> {
    match s {
        None | Some("include") => Ok(FrictionMode::Include),
        Some("ignore") => Ok(FrictionMode::Ignore),
        Some(other) => Err(SwagError::config(
            path,
            format!("expected \"include\" or \"ignore\", got \"{other}\""),
        )),
    }
}

fn stiffness_metric(path: &str, s: Option<&str>) -> Result<StiffnessMetric> {
    match s {
        None | Some("min-axis") => Ok(StiffnessMetric::MinAxis),
        Some("max") => Ok(StiffnessMetric::Max),
        Some("mean") => Ok(StiffnessMetric::Mean),
        Some(other) => Err(SwagError::config(
            path,
            format!("expected \"min-axis\", \"max\" or \"mean\", got \"{other}\""),
        )),
    }
}

fn build(raw: RawConfig, base_dir: &Path) -> Result<RunConfig> {
    // sheath first: the default placement radius depends on it
    let sheath_d = mm_to_m(positive("sheath.diameter_mm", raw.sheath.diameter_mm)?);
    let sheath_len = mm_to_m(positive("sheath.length_mm", raw.sheath.length_mm)?);

    let s = &raw.subvine;
    let diameter = mm_to_m(positive("subvine.diameter_mm", s.diameter_mm)?);
    if s.count == 0 {
        return Err(SwagError::config("subvine.count", "must be at least 1"));
    }
    let burst = kpa_to_pa(positive(
        "subvine.burst_pressure_kpa",
        s.burst_pressure_kpa,
    )?);
    let offset = deg_to_rad(finite("subvine.angular_offset_deg", s.angular_offset_deg)?);
    let radius = match s.placement_radius_mm {
        Some(r) => mm_to_m(non_negative("subvine.placement_radius_mm", r)?),
        None => (sheath_d - diameter) / 2.0,
    };
    if radius < 0.0 {
        return Err(SwagError::config(
            "subvine.diameter_mm",
            "subvine is wider than the sheath",
        ));
    }
    let subvines = at(
        "subvine",
        SubvineSpec::new(diameter, s.count, radius, offset, burst),
    )?;

    let channel = match raw.sheath.channel_diameter_mm {
        Some(c) => mm_to_m(positive("sheath.channel_diameter_mm", c)?),
        None => diameter,
    };
    if channel < diameter {
        return Err(SwagError::config(
            "sheath.channel_diameter_mm",
            "must be at least the subvine diameter",
        ));
    }
    if sheath_d <= channel {
        return Err(SwagError::config(
            "sheath.diameter_mm",
            "must exceed the channel diameter",
        ));
    }
    let sheath = at("sheath", SheathSpec::new(sheath_d, sheath_len, channel))?;

    let transmission = build_transmission(&raw.transmission)?;

    let load = raw
        .load
        .as_ref()
        .map(|l| -> Result<LoadSpec> {
            let m = non_negative("load.garment_mass_kg", l.garment_mass_kg)?;
            let g = positive("load.gravity_ms2", l.gravity_ms2.unwrap_or(DEFAULT_GRAVITY))?;
            at("load", LoadSpec::with_gravity(m, g))
        })
        .transpose()?;

    let force_sweep = {
        let f = raw.force.as_ref();
        let max = f
            .and_then(|f| f.max_pressure_kpa)
            .unwrap_or(DEFAULT_FORCE_SWEEP_MAX_KPA);
        let steps = f.and_then(|f| f.steps).unwrap_or(DEFAULT_FORCE_SWEEP_STEPS);
        if steps < 2 {
            return Err(SwagError::config("force.steps", "must be at least 2"));
        }
        ForceSweep {
            max_pressure_pa: kpa_to_pa(positive("force.max_pressure_kpa", max)?),
            steps,
        }
    };

    let stiffness = {
        let st = raw.stiffness.as_ref();
        let samples = st.and_then(|s| s.samples).unwrap_or(DEFAULT_THETA_SAMPLES);
        if samples < 2 {
            return Err(SwagError::config("stiffness.samples", "must be at least 2"));
        }
        let target = st
            .and_then(|s| s.target_force_n)
            .map(|f| positive("stiffness.target_force_n", f))
            .transpose()?;
        let n_values = st
            .and_then(|s| s.n_values.clone())
            .unwrap_or_else(|| vec![1, 2, 3, 4]);
        if n_values.is_empty() || n_values.contains(&0) {
            return Err(SwagError::config(
                "stiffness.n_values",
                "must be a nonempty list of counts >= 1",
            ));
        }
        let mut n_values = n_values;
        n_values.sort_unstable();
        n_values.dedup();
        StiffnessConfig {
            samples,
            target_force_n: target,
            friction_mode: friction_mode(
                "stiffness.friction_mode",
                st.and_then(|s| s.friction_mode.as_deref()),
            )?,
            n_values,
            offset_rad: deg_to_rad(finite(
                "stiffness.offset_deg",
                st.and_then(|s| s.offset_deg).unwrap_or(0.0),
            )?),
        }
    };

    let joint_model = {
        let j = raw.joint_model.as_ref();
        JointModelConfig {
            trials_csv: j.and_then(|j| j.trials_csv.clone()),
            arm_length_m: mm_to_m(positive(
                "joint_model.arm_length_mm",
                j.and_then(|j| j.arm_length_mm)
                    .unwrap_or(DEFAULT_ARM_LENGTH_MM),
            )?),
        }
    };

    let limb = raw.limb.as_ref().map(build_limb).transpose()?;
    let simulation = raw.simulation.as_ref().map(build_simulation).transpose()?;

    let weights = match raw.weights {
        Some(w) => {
            let w = ScoreWeights {
                pressure: non_negative("weights.pressure", w.pressure)?,
                stiffness: non_negative("weights.stiffness", w.stiffness)?,
                bore: non_negative("weights.bore", w.bore)?,
            };
            at("weights", w.validate())?;
            w
        }
        None => ScoreWeights::default(),
    };

    let mut cfg = RunConfig {
        base_dir: base_dir.to_path_buf(),
        subvines,
        sheath,
        transmission,
        load,
        force_sweep,
        stiffness,
        force_pressure_csv: raw.calibration.and_then(|c| c.force_pressure_csv),
        joint_model,
        limb,
        simulation,
        design: None,
        weights,
    };
    if let Some(d) = raw.design.as_ref() {
        cfg.design = Some(build_design(d, &cfg)?);
    }
    Ok(cfg)
}

fn build_transmission(t: &RawTransmission) -> Result<TransmissionParams> {
    let friction = non_negative("transmission.friction_n", t.friction_n)?;
    let arms = match (t.arm_a_mm, t.arm_b_mm) {
        (Some(a), Some(b)) => Some((
            mm_to_m(positive("transmission.arm_a_mm", a)?),
            mm_to_m(non_negative("transmission.arm_b_mm", b)?),
        )),
        (None, None) => None,
        (Some(_), None) => {
            return Err(SwagError::config(
                "transmission.arm_b_mm",
                "required together with arm_a_mm",
            ))
        }
        (None, Some(_)) => {
            return Err(SwagError::config(
                "transmission.arm_a_mm",
                "required together with arm_b_mm",
            ))
        }
    };
    if let Some(c) = t.ratio_c {
        let c = finite("transmission.ratio_c", c)?;
        if !(c > 0.0 && c < 1.0) {
            return Err(SwagError::config(
                "transmission.ratio_c",
                format!("must lie in the open range (0, 1), got {c}"),
            ));
        }
    }
    match (t.ratio_c, arms) {
        (Some(c), Some((a, b))) => at(
            "transmission.ratio_c",
            TransmissionParams::new(Some(a), Some(b), c, friction),
        ),
        (Some(c), None) => at("transmission", TransmissionParams::from_ratio(c, friction)),
        (None, Some((a, b))) => at(
            "transmission",
            TransmissionParams::from_arms(a, b, friction),
        ),
        (None, None) => Err(SwagError::config(
            "transmission.ratio_c",
            "either ratio_c or both arm lengths are required",
        )),
    }
}

fn build_limb(l: &RawLimb) -> Result<LimbModel> {
    if l.segments.is_empty() {
        return Err(SwagError::config(
            "limb.segments",
            "needs at least one segment",
        ));
    }
    let mut segments = Vec::with_capacity(l.segments.len());
    for (i, s) in l.segments.iter().enumerate() {
        segments.push(LimbSegment {
            length_m: mm_to_m(positive(
                &format!("limb.segments[{i}].length_mm"),
                s.length_mm,
            )?),
            radius_m: mm_to_m(non_negative(
                &format!("limb.segments[{i}].radius_mm"),
                s.radius_mm,
            )?),
        });
    }
    if l.joint_angles_deg.len() + 1 != segments.len() {
        return Err(SwagError::config(
            "limb.joint_angles_deg",
            format!(
                "expected {} angles for {} segments, got {}",
                segments.len() - 1,
                segments.len(),
                l.joint_angles_deg.len()
            ),
        ));
    }
    for (i, a) in l.joint_angles_deg.iter().enumerate() {
        if !(0.0..=MAX_JOINT_ANGLE_DEG).contains(a) {
            return Err(SwagError::config(
                format!("limb.joint_angles_deg[{i}]"),
                format!("must lie in [0, {MAX_JOINT_ANGLE_DEG}] deg, got {a}"),
            ));
        }
    }
    at("limb", LimbModel::new(segments, l.joint_angles_deg.clone()))
}

fn build_simulation(s: &RawSimulation) -> Result<SimulationConfig> {
    let rate = match (s.advance_speed_mm_s, s.volumetric_flow_lpm) {
        (Some(v), None) => AdvanceRate::Speed {
            m_per_s: mm_to_m(positive("simulation.advance_speed_mm_s", v)?),
        },
        (None, Some(q)) => AdvanceRate::Flow {
            m3_per_s: lpm_to_m3s(positive("simulation.volumetric_flow_lpm", q)?),
        },
        _ => {
            return Err(SwagError::config(
                "simulation.advance_speed_mm_s",
                "give exactly one of advance_speed_mm_s or volumetric_flow_lpm",
            ))
        }
    };
    let samples = s.samples.unwrap_or(DEFAULT_TRACE_SAMPLES);
    if samples < 2 {
        return Err(SwagError::config(
            "simulation.samples",
            "must be at least 2",
        ));
    }
    Ok(SimulationConfig {
        rate,
        reel_radius_m: mm_to_m(positive(
            "simulation.reel_radius_mm",
            s.reel_radius_mm.unwrap_or(DEFAULT_REEL_RADIUS_MM),
        )?),
        samples,
    })
}

fn build_design(d: &RawDesign, cfg: &RunConfig) -> Result<DesignSpace> {
    if d.n_min == 0 {
        return Err(SwagError::config("design.n_min", "must be at least 1"));
    }
    if d.n_max < d.n_min {
        return Err(SwagError::config("design.n_max", "must be at least n_min"));
    }
    let list = |path: &str, xs: &[f64]| -> Result<Vec<f64>> {
        if xs.is_empty() {
            return Err(SwagError::config(path, "must not be empty"));
        }
        xs.iter()
            .enumerate()
            .map(|(i, &x)| positive(&format!("{path}[{i}]"), x).map(mm_to_m))
            .collect()
    };
    let burst = match d.burst_pressure_kpa {
        Some(b) => kpa_to_pa(positive("design.burst_pressure_kpa", b)?),
        None => cfg.subvines.burst_pressure_pa,
    };
    let target = match d.target_force_n {
        Some(f) => positive("design.target_force_n", f)?,
        None => at("design.target_force_n", cfg.stiffness_target_force())?,
    };
    let jam = positive(
        "design.jam_threshold",
        d.jam_threshold.unwrap_or(DEFAULT_JAM_THRESHOLD),
    )?;
    let samples = d.stiffness_samples.unwrap_or(cfg.stiffness.samples);
    if samples < 2 {
        return Err(SwagError::config(
            "design.stiffness_samples",
            "must be at least 2",
        ));
    }
    let mut space = at(
        "design",
        DesignSpace::new(
            (d.n_min, d.n_max),
            list("design.subvine_diameters_mm", &d.subvine_diameters_mm)?,
            list("design.sheath_diameters_mm", &d.sheath_diameters_mm)?,
            burst,
            target,
            cfg.transmission,
        ),
    )?;
    space.jam_threshold = jam;
    space.stiffness_samples = samples;
    space.friction_mode = match d.friction_mode.as_deref() {
        None => cfg.stiffness.friction_mode,
        s => friction_mode("design.friction_mode", s)?,
    };
    space.stiffness_metric =
        stiffness_metric("design.stiffness_metric", d.stiffness_metric.as_deref())?;
    Ok(space)
}
