//! Subcommand implementations. Each writes one CSV into the output directory
//! and returns a human-readable summary.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::calibration::{fit_force_pressure, fit_joint_model, EmpiricalJointModel, FitWarning};
use crate::deploy::{
    advance_speed_from_flow, simulate_deployment, spool_kinematics, torque_capacity_to_tip_load,
    DeploymentScenario,
};
use crate::design::{enumerate_candidates, rank};
use crate::error::{Result, SwagError};
use crate::mechanics::{
    cross_section_properties, parallel_axis, pressure_for_total_force, subvine_drive_force,
    total_unfurl_force, unfurl_force_single, SubvineSpec,
};
use crate::stiffness::{normalized_stiffness_profile, stiffness_extrema, ProfileRequest};

use super::config::{AdvanceRate, RunConfig};
use super::tables::{fmt_bool, fmt_num, read_force_pressure_csv, read_joint_trials_csv, Table};
use super::units::{m_to_mm, pa_to_kpa};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Props,
    Force,
    Pressure,
    Stiffness,
    Calibrate,
    JointFit,
    Simulate,
    Design,
}

impl Subcommand {
    pub const ALL: [Subcommand; 8] = [
        Subcommand::Props,
        Subcommand::Force,
        Subcommand::Pressure,
        Subcommand::Stiffness,
        Subcommand::Calibrate,
        Subcommand::JointFit,
        Subcommand::Simulate,
        Subcommand::Design,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Props => "props",
            Subcommand::Force => "force",
            Subcommand::Pressure => "pressure",
            Subcommand::Stiffness => "stiffness",
            Subcommand::Calibrate => "calibrate",
            Subcommand::JointFit => "joint-fit",
            Subcommand::Simulate => "simulate",
            Subcommand::Design => "design",
        }
    }

    /// Data file the subcommand writes.
    pub fn output_file(self) -> &'static str {
        match self {
            Subcommand::Props => "props.csv",
            Subcommand::Force => "force.csv",
            Subcommand::Pressure => "pressure.csv",
            Subcommand::Stiffness => "stiffness.csv",
            Subcommand::Calibrate => "calibration.csv",
            Subcommand::JointFit => "joint_model.csv",
            Subcommand::Simulate => "trace.csv",
            Subcommand::Design => "designs.csv",
        }
    }
}

impl FromStr for Subcommand {
    type Err = SwagError;

    fn from_str(s: &str) -> Result<Self> {
        Subcommand::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| SwagError::InvalidInput(format!("unknown subcommand `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    /// Overrides the CSV path named in the config for `calibrate`,
    /// `joint-fit` and `simulate`.
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub summary: String,
    pub files: Vec<PathBuf>,
    /// Inputs were valid but the model reports an infeasible outcome.
    pub infeasible: bool,
}

pub fn run_subcommand(cmd: Subcommand, cfg: &RunConfig, opts: &RunOptions) -> Result<RunReport> {
    std::fs::create_dir_all(&opts.out_dir).map_err(|e| SwagError::Io {
        path: opts.out_dir.display().to_string(),
        message: e.to_string(),
    })?;
    let (table, summary, infeasible) = match cmd {
        Subcommand::Props => props(cfg)?,
        Subcommand::Force => force(cfg)?,
        Subcommand::Pressure => pressure(cfg)?,
        Subcommand::Stiffness => stiffness(cfg)?,
        Subcommand::Calibrate => calibrate(cfg, opts)?,
        Subcommand::JointFit => joint_fit(cfg, opts)?,
        Subcommand::Simulate => simulate(cfg, opts)?,
        Subcommand::Design => design(cfg)?,
    };
    let path = opts.out_dir.join(cmd.output_file());
    table.write(&path)?;
    Ok(RunReport {
        summary,
        files: vec![path],
        infeasible,
    })
}

type Output = (Table, String, bool);

/// Four significant digits for console summaries.
fn brief(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let a = x.abs();
    if a == 0.0 || (1e-3..1e6).contains(&a) {
        let rounded: f64 = format!("{x:.3e}").parse().expect("formatted float");
        rounded.to_string()
    } else {
        format!("{x:.3e}")
    }
}

fn props(cfg: &RunConfig) -> Result<Output> {
    let sv = &cfg.subvines;
    let cs = cross_section_properties(sv.diameter_m)?;
    let offset = parallel_axis(&cs, sv.placement_radius_m)?;
    let mut t = Table::new(&[
        "diameter_m",
        "area_m2",
        "inertia_m4",
        "placement_radius_m",
        "parallel_axis_inertia_m4",
    ]);
    t.push(vec![
        fmt_num(sv.diameter_m),
        fmt_num(cs.area_m2),
        fmt_num(cs.inertia_m4),
        fmt_num(sv.placement_radius_m),
        fmt_num(offset),
    ]);
    let summary = format!(
        "subvine D = {} mm: A = {} m^2, I = {} m^4, I at R = {} mm: {} m^4\n",
        brief(m_to_mm(sv.diameter_m)),
        brief(cs.area_m2),
        brief(cs.inertia_m4),
        brief(m_to_mm(sv.placement_radius_m)),
        brief(offset)
    );
    Ok((t, summary, false))
}

fn force(cfg: &RunConfig) -> Result<Output> {
    let sv = &cfg.subvines;
    let cs = sv.cross_section();
    let sweep = &cfg.force_sweep;
    let mut t = Table::new(&[
        "pressure_pa",
        "drive_force_n",
        "unfurl_force_single_n",
        "total_unfurl_force_n",
        "lift_force_n",
        "stalled",
    ]);
    let last = sweep.steps - 1;
    let mut peak = 0.0;
    for k in 0..sweep.steps {
        let p = sweep.max_pressure_pa * k as f64 / last as f64;
        let single = unfurl_force_single(p, &cs, &cfg.transmission)?;
        let total = total_unfurl_force(sv, p, &cfg.transmission)?;
        peak = total.clamped_n();
        t.push(vec![
            fmt_num(p),
            fmt_num(subvine_drive_force(p, &cs)?),
            fmt_num(single.raw_n),
            fmt_num(total.raw_n),
            fmt_num(total.clamped_n()),
            fmt_bool(single.stalled()).into(),
        ]);
    }
    let stall_pa = cfg.transmission.friction_residual_n / cs.area_m2;
    let summary = format!(
        "N = {}, c = {}, f = {} N: stall below {} kPa, {} N total at {} kPa\n",
        sv.count,
        brief(cfg.transmission.ratio_c),
        brief(cfg.transmission.friction_residual_n),
        brief(pa_to_kpa(stall_pa)),
        brief(peak),
        brief(pa_to_kpa(sweep.max_pressure_pa)),
    );
    Ok((t, summary, false))
}

fn pressure(cfg: &RunConfig) -> Result<Output> {
    let load = cfg
        .load
        .ok_or_else(|| SwagError::config("load", "section required for `pressure`"))?;
    let sv = &cfg.subvines;
    let cs = sv.cross_section();
    let mut t = Table::new(&[
        "n_subvines",
        "garment_mass_kg",
        "required_pressure_pa",
        "burst_pressure_pa",
        "feasible",
    ]);
    let mut summary = String::new();
    let mut configured_ok = true;
    for n in 1..=sv.count {
        let p = pressure_for_total_force(n, load.weight_n(), &cs, &cfg.transmission)?;
        let ok = p <= sv.burst_pressure_pa;
        if n == sv.count {
            configured_ok = ok;
        }
        t.push(vec![
            n.to_string(),
            fmt_num(load.garment_mass_kg),
            fmt_num(p),
            fmt_num(sv.burst_pressure_pa),
            fmt_bool(ok).into(),
        ]);
        let _ = writeln!(
            summary,
            "N = {n}: {} kPa required (burst {} kPa){}",
            brief(pa_to_kpa(p)),
            brief(pa_to_kpa(sv.burst_pressure_pa)),
            if ok { "" } else { "  INFEASIBLE" }
        );
    }
    Ok((t, summary, !configured_ok))
}

fn stiffness(cfg: &RunConfig) -> Result<Output> {
    let target = cfg.stiffness_target_force()?;
    let cs = cfg.subvines.cross_section();
    let mut t = Table::new(&["n", "theta_deg", "s_normalized"]);
    let mut summary = format!(
        "normalized to the frictionless N = 1 maximum, friction {}, target force {} N\n",
        cfg.stiffness.friction_mode.as_str(),
        brief(target)
    );
    for &n in &cfg.stiffness.n_values {
        let req = ProfileRequest {
            n,
            radius_m: cfg.subvines.placement_radius_m,
            offset_rad: cfg.stiffness.offset_rad,
            target_force_n: target,
            samples: cfg.stiffness.samples,
            friction: cfg.stiffness.friction_mode,
            burst_pa: None,
        };
        let profile = normalized_stiffness_profile(&cs, &cfg.transmission, &req)?;
        for (th, s) in profile
            .theta_samples_rad
            .iter()
            .zip(&profile.normalized_stiffness)
        {
            t.push(vec![n.to_string(), fmt_num(th.to_degrees()), fmt_num(*s)]);
        }
        let e = stiffness_extrema(&profile)?;
        let _ = writeln!(
            summary,
            "N = {n}: min {} at {} deg, max {} at {} deg, mean {}",
            brief(e.s_min),
            brief(e.theta_min_rad.to_degrees()),
            brief(e.s_max),
            brief(e.theta_max_rad.to_degrees()),
            brief(profile.mean())
        );
    }
    Ok((t, summary, false))
}

fn input_path(
    cfg: &RunConfig,
    opts: &RunOptions,
    configured: Option<&PathBuf>,
    key: &str,
) -> Result<PathBuf> {
    match (&opts.input, configured) {
        (Some(p), _) => Ok(p.clone()),
        (None, Some(p)) => Ok(cfg.resolve(p)),
        (None, None) => Err(SwagError::config(
            key,
            "no input file given (use --input or set this key)",
        )),
    }
}

fn calibrate(cfg: &RunConfig, opts: &RunOptions) -> Result<Output> {
    let path = input_path(
        cfg,
        opts,
        cfg.force_pressure_csv.as_ref(),
        "calibration.force_pressure_csv",
    )?;
    let samples = read_force_pressure_csv(&path)?;
    let fits = fit_force_pressure(&samples, &cfg.subvines.cross_section())?;
    let mut t = Table::new(&[
        "n_subvines",
        "sheath_diameter_m",
        "samples",
        "slope_n_per_pa",
        "intercept_n",
        "ratio_c",
        "friction_n",
        "r_squared",
        "trial_slope_std_n_per_pa",
        "trials_fitted",
        "warnings",
    ]);
    let mut summary = String::new();
    for f in &fits {
        let warnings = f
            .warnings
            .iter()
            .map(|w| match w {
                FitWarning::NegativeFriction => "negative-friction",
            })
            .collect::<Vec<_>>()
            .join(";");
        t.push(vec![
            f.n_subvines.to_string(),
            fmt_num(f.sheath_diameter_m),
            f.sample_count.to_string(),
            fmt_num(f.slope_n_per_pa),
            fmt_num(f.intercept_n),
            fmt_num(f.ratio_c_est),
            fmt_num(f.friction_f_est_n),
            fmt_num(f.r_squared),
            fmt_num(f.trial_spread),
            f.trials_fitted.to_string(),
            warnings.clone(),
        ]);
        let _ = writeln!(
            summary,
            "N = {}, sheath {} mm: c = {}, f = {} N, R^2 = {}{}",
            f.n_subvines,
            brief(m_to_mm(f.sheath_diameter_m)),
            brief(f.ratio_c_est),
            brief(f.friction_f_est_n),
            brief(f.r_squared),
            if warnings.is_empty() {
                String::new()
            } else {
                format!("  warning: {warnings}")
            }
        );
    }
    Ok((t, summary, false))
}

fn load_joint_model(cfg: &RunConfig, opts: &RunOptions) -> Result<EmpiricalJointModel> {
    let path = input_path(
        cfg,
        opts,
        cfg.joint_model.trials_csv.as_ref(),
        "joint_model.trials_csv",
    )?;
    fit_joint_model(&read_joint_trials_csv(&path)?)
}

fn joint_fit(cfg: &RunConfig, opts: &RunOptions) -> Result<Output> {
    let model = load_joint_model(cfg, opts)?;
    let g = cfg
        .load
        .map_or(crate::mechanics::DEFAULT_GRAVITY, |l| l.gravity_ms2);
    let arm = cfg.joint_model.arm_length_m;
    let mut t = Table::new(&[
        "joint_angle_deg",
        "trials",
        "mean_pressure_pa",
        "pressure_std_pa",
        "mean_torque_nm",
        "torque_std_nm",
        "tip_load_kg",
    ]);
    let mut summary = String::new();
    let mut best = (0.0, 0.0);
    for i in 0..model.knot_angles_deg.len() {
        let tip = torque_capacity_to_tip_load(model.mean_torque_nm[i], arm, g)?;
        if model.mean_torque_nm[i] > best.0 {
            best = (model.mean_torque_nm[i], tip);
        }
        t.push(vec![
            fmt_num(model.knot_angles_deg[i]),
            model.trials_per_knot[i].to_string(),
            fmt_num(model.mean_pressure_pa[i]),
            fmt_num(model.pressure_std_pa[i]),
            fmt_num(model.mean_torque_nm[i]),
            fmt_num(model.torque_std_nm[i]),
            fmt_num(tip),
        ]);
        let _ = writeln!(
            summary,
            "{} deg: {} ± {} kPa, {} ± {} N·m",
            brief(model.knot_angles_deg[i]),
            brief(pa_to_kpa(model.mean_pressure_pa[i])),
            brief(pa_to_kpa(model.pressure_std_pa[i])),
            brief(model.mean_torque_nm[i]),
            brief(model.torque_std_nm[i]),
        );
    }
    let _ = writeln!(
        summary,
        "peak torque {} N·m holds {} kg at {} mm",
        brief(best.0),
        brief(best.1),
        brief(m_to_mm(arm))
    );
    Ok((t, summary, false))
}

fn advance_speed(rate: AdvanceRate, subvines: &SubvineSpec) -> Result<f64> {
    match rate {
        AdvanceRate::Speed { m_per_s } => Ok(m_per_s),
        AdvanceRate::Flow { m3_per_s } => advance_speed_from_flow(m3_per_s, subvines),
    }
}

fn simulate(cfg: &RunConfig, opts: &RunOptions) -> Result<Output> {
    let limb = cfg
        .limb
        .as_ref()
        .ok_or_else(|| SwagError::config("limb", "section required for `simulate`"))?;
    let sim = cfg
        .simulation
        .as_ref()
        .ok_or_else(|| SwagError::config("simulation", "section required for `simulate`"))?;
    let load = cfg
        .load
        .ok_or_else(|| SwagError::config("load", "section required for `simulate`"))?;
    let has_joints = !limb.joint_angles_deg().is_empty();
    let model = if has_joints {
        Some(load_joint_model(cfg, opts)?)
    } else {
        None
    };
    let speed = advance_speed(sim.rate, &cfg.subvines)?;
    let trace = simulate_deployment(&DeploymentScenario {
        limb,
        subvines: &cfg.subvines,
        sheath: &cfg.sheath,
        load: &load,
        transmission: &cfg.transmission,
        joint_model: model.as_ref(),
        advance_speed_m_s: speed,
        samples: sim.samples,
    })?;

    let mut t = Table::new(&[
        "s_m",
        "pressure_pa",
        "feasible",
        "limiting_factor",
        "payout_m",
        "time_s",
    ]);
    for i in 0..trace.len() {
        t.push(vec![
            fmt_num(trace.arc_positions_m[i]),
            fmt_num(trace.required_pressure_pa[i]),
            fmt_bool(trace.feasible[i]).into(),
            trace.limiting_factor[i].as_str().into(),
            fmt_num(trace.spool_payout_m[i]),
            fmt_num(trace.time_s[i]),
        ]);
    }
    let length = *trace.arc_positions_m.last().expect("at least two samples");
    let spool = spool_kinematics(length, sim.reel_radius_m)?;
    let infeasible = trace.feasible.iter().filter(|f| !**f).count();
    let flagged = trace
        .limiting_factor
        .iter()
        .filter(|f| f.as_str() == "joint-model-range")
        .count();
    let summary = format!(
        "deployed {} m in {} s at {} mm/s; peak demand {} kPa (burst {} kPa); \
         {} infeasible samples, {} outside tested joint range; reel {} turns\n",
        brief(length),
        brief(*trace.time_s.last().expect("samples")),
        brief(m_to_mm(speed)),
        brief(pa_to_kpa(trace.peak_pressure_pa())),
        brief(pa_to_kpa(cfg.subvines.burst_pressure_pa)),
        infeasible,
        flagged,
        brief(spool.reel_turns),
    );
    Ok((t, summary, infeasible > 0))
}

fn reasons_field(reasons: &[crate::design::Infeasibility]) -> String {
    reasons
        .iter()
        .map(|r| r.as_str())
        .collect::<Vec<_>>()
        .join(";")
}

fn design(cfg: &RunConfig) -> Result<Output> {
    let space = cfg
        .design
        .as_ref()
        .ok_or_else(|| SwagError::config("design", "section required for `design`"))?;
    let all = enumerate_candidates(space)?;
    let ranked = rank(&all, space.stiffness_metric, &cfg.weights)?;

    let mut t = Table::new(&[
        "rank",
        "n",
        "subvine_diameter_m",
        "sheath_diameter_m",
        "required_pressure_pa",
        "min_normalized_stiffness",
        "max_normalized_stiffness",
        "mean_normalized_stiffness",
        "effective_bore_m",
        "occupancy_ratio",
        "feasible",
        "reasons",
        "score",
    ]);
    let row = |rank: String, c: &crate::design::DesignCandidate, score: String| {
        vec![
            rank,
            c.n.to_string(),
            fmt_num(c.subvine_diameter_m),
            fmt_num(c.sheath_diameter_m),
            fmt_num(c.required_pressure_pa),
            fmt_num(c.min_normalized_stiffness),
            fmt_num(c.max_normalized_stiffness),
            fmt_num(c.mean_normalized_stiffness),
            fmt_num(c.effective_bore_m),
            fmt_num(c.occupancy_ratio),
            fmt_bool(c.feasible()).into(),
            reasons_field(&c.reasons),
            score,
        ]
    };
    for (i, r) in ranked.iter().enumerate() {
        t.push(row((i + 1).to_string(), &r.candidate, fmt_num(r.score)));
    }
    for c in all.iter().filter(|c| !c.feasible()) {
        t.push(row(String::new(), c, String::new()));
    }

    let mut summary = format!(
        "{} candidates, {} feasible (jam threshold {}, burst {} kPa)\n",
        all.len(),
        ranked.len(),
        brief(space.jam_threshold),
        brief(pa_to_kpa(space.burst_pressure_pa))
    );
    for (i, r) in ranked.iter().take(5).enumerate() {
        let c = &r.candidate;
        let _ = writeln!(
            summary,
            "#{}: N = {}, D = {} mm, sheath {} mm, score {}",
            i + 1,
            c.n,
            brief(m_to_mm(c.subvine_diameter_m)),
            brief(m_to_mm(c.sheath_diameter_m)),
            brief(r.score)
        );
    }
    Ok((t, summary, ranked.is_empty()))
}

/// Exit status for a finished run: 0 ok, 3 infeasible.
pub fn exit_code_for(report: &RunReport) -> i32 {
    if report.infeasible {
        3
    } else {
        0
    }
}

/// Exit status for a failed run: 3 for model infeasibility, 2 otherwise.
pub fn exit_code_for_error(err: &SwagError) -> i32 {
    if err.is_infeasibility() {
        3
    } else {
        2
    }
}

pub fn run_path(cmd: Subcommand, config: &Path, opts: &RunOptions) -> Result<RunReport> {
    let cfg = super::config::parse_config(config)?;
    run_subcommand(cmd, &cfg, opts)
}
