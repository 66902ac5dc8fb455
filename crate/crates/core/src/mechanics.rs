//! Closed-form statics of the subvine-to-sheath transmission.
//!
//! Each subvine pushes on the channel tip with `F_v = P·A`. The sliding
//! contact between subvine tip and channel tip behaves like a lossy pulley
//! with lever arms `a` and `b`, so a single subvine delivers
//!
//! ```text
//! F_u = c · (P·A − f),    c = a / (a + b)
//! ```
//!
//! to the fold point, and `N` subvines sharing a garment of mass `M` must
//! satisfy `M·g = N · c · (P·A − f)`.
//!
//! All quantities are SI. `f` is carried in force units.

use std::f64::consts::PI;

use crate::error::{Result, SwagError};

pub const DEFAULT_GRAVITY: f64 = 9.81;

const RATIO_MATCH_TOL: f64 = 1e-12;

fn require_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(SwagError::InvalidInput(format!(
            "{name} must be finite, got {value}"
        )))
    }
}

fn require_pressure(pressure_pa: f64) -> Result<()> {
    require_finite("pressure", pressure_pa)?;
    if pressure_pa < 0.0 {
        return Err(SwagError::InvalidInput(format!(
            "pressure must be non-negative, got {pressure_pa} Pa"
        )));
    }
    Ok(())
}

/// Geometry and material limit of one family of identical subvines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubvineSpec {
    pub diameter_m: f64,
    pub count: u32,
    /// Distance from the sheath axis to each subvine centroid.
    pub placement_radius_m: f64,
    pub angular_offset_rad: f64,
    pub burst_pressure_pa: f64,
}

impl SubvineSpec {
    pub fn new(
        diameter_m: f64,
        count: u32,
        placement_radius_m: f64,
        angular_offset_rad: f64,
        burst_pressure_pa: f64,
    ) -> Result<Self> {
        require_finite("subvine diameter", diameter_m)?;
        require_finite("placement radius", placement_radius_m)?;
        require_finite("angular offset", angular_offset_rad)?;
        require_finite("burst pressure", burst_pressure_pa)?;
        if diameter_m <= 0.0 {
            return Err(SwagError::InvalidGeometry(format!(
                "subvine diameter must be positive, got {diameter_m} m"
            )));
        }
        if count == 0 {
            return Err(SwagError::InvalidInput(
                "subvine count must be at least 1".into(),
            ));
        }
        if placement_radius_m < 0.0 {
            return Err(SwagError::InvalidGeometry(format!(
                "placement radius must be non-negative, got {placement_radius_m} m"
            )));
        }
        if burst_pressure_pa <= 0.0 {
            return Err(SwagError::InvalidInput(format!(
                "burst pressure must be positive, got {burst_pressure_pa} Pa"
            )));
        }
        Ok(Self {
            diameter_m,
            count,
            placement_radius_m,
            angular_offset_rad,
            burst_pressure_pa,
        })
    }

    pub fn cross_section(&self) -> CrossSection {
        CrossSection::circle(self.diameter_m).expect("diameter validated on construction")
    }
}

/// Outer sheath that unfurls over the limb.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SheathSpec {
    pub diameter_m: f64,
    pub length_m: f64,
    pub channel_diameter_m: f64,
}

impl SheathSpec {
    pub fn new(diameter_m: f64, length_m: f64, channel_diameter_m: f64) -> Result<Self> {
        require_finite("sheath diameter", diameter_m)?;
        require_finite("sheath length", length_m)?;
        require_finite("channel diameter", channel_diameter_m)?;
        if channel_diameter_m <= 0.0 || diameter_m <= channel_diameter_m {
            return Err(SwagError::InvalidGeometry(format!(
                "need sheath diameter > channel diameter > 0, got {diameter_m} m and {channel_diameter_m} m"
            )));
        }
        if length_m <= 0.0 {
            return Err(SwagError::InvalidGeometry(format!(
                "sheath length must be positive, got {length_m} m"
            )));
        }
        Ok(Self {
            diameter_m,
            length_m,
            channel_diameter_m,
        })
    }

    /// Checks that the channels can host the given subvines.
    pub fn accepts(&self, subvines: &SubvineSpec) -> Result<()> {
        if self.channel_diameter_m < subvines.diameter_m {
            return Err(SwagError::InvalidGeometry(format!(
                "channel diameter {} m is smaller than subvine diameter {} m",
                self.channel_diameter_m, subvines.diameter_m
            )));
        }
        Ok(())
    }

    /// Centroid radius for subvines lying against the sheath wall.
    pub fn wall_tangent_radius(&self, subvine_diameter_m: f64) -> f64 {
        (self.diameter_m - subvine_diameter_m) / 2.0
    }
}

/// Pulley-model parameters. Only the ratio `c` is identifiable from force
/// data, so the individual arms are optional.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionParams {
    pub arm_a_m: Option<f64>,
    pub arm_b_m: Option<f64>,
    pub ratio_c: f64,
    pub friction_residual_n: f64,
}

impl TransmissionParams {
    pub fn from_ratio(ratio_c: f64, friction_residual_n: f64) -> Result<Self> {
        Self::new(None, None, ratio_c, friction_residual_n)
    }

    pub fn from_arms(arm_a_m: f64, arm_b_m: f64, friction_residual_n: f64) -> Result<Self> {
        require_finite("arm a", arm_a_m)?;
        require_finite("arm b", arm_b_m)?;
        if arm_a_m <= 0.0 || arm_b_m < 0.0 {
            return Err(SwagError::InvalidGeometry(format!(
                "pulley arms need a > 0 and b >= 0, got a = {arm_a_m}, b = {arm_b_m}"
            )));
        }
        let ratio = arm_a_m / (arm_a_m + arm_b_m);
        Self::new(Some(arm_a_m), Some(arm_b_m), ratio, friction_residual_n)
    }

    pub fn new(
        arm_a_m: Option<f64>,
        arm_b_m: Option<f64>,
        ratio_c: f64,
        friction_residual_n: f64,
    ) -> Result<Self> {
        require_finite("transmission ratio", ratio_c)?;
        require_finite("friction residual", friction_residual_n)?;
        if !(ratio_c > 0.0 && ratio_c < 1.0) {
            return Err(SwagError::InvalidInput(format!(
                "transmission ratio c must lie in (0, 1), got {ratio_c}"
            )));
        }
        if friction_residual_n < 0.0 {
            return Err(SwagError::InvalidInput(format!(
                "friction residual must be non-negative, got {friction_residual_n} N"
            )));
        }
        if let (Some(a), Some(b)) = (arm_a_m, arm_b_m) {
            let implied = a / (a + b);
            if ((implied - ratio_c) / ratio_c).abs() > RATIO_MATCH_TOL {
                return Err(SwagError::InvalidInput(format!(
                    "ratio c = {ratio_c} disagrees with arms a/(a+b) = {implied}"
                )));
            }
        }
        Ok(Self {
            arm_a_m,
            arm_b_m,
            ratio_c,
            friction_residual_n,
        })
    }

    /// Same ratio with the friction term removed.
    pub fn frictionless(&self) -> Self {
        Self {
            friction_residual_n: 0.0,
            ..*self
        }
    }
}

/// Garment load lifted against gravity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadSpec {
    pub garment_mass_kg: f64,
    pub gravity_ms2: f64,
}

impl LoadSpec {
    pub fn new(garment_mass_kg: f64) -> Result<Self> {
        Self::with_gravity(garment_mass_kg, DEFAULT_GRAVITY)
    }

    pub fn with_gravity(garment_mass_kg: f64, gravity_ms2: f64) -> Result<Self> {
        require_finite("garment mass", garment_mass_kg)?;
        require_finite("gravity", gravity_ms2)?;
        if garment_mass_kg < 0.0 {
            return Err(SwagError::InvalidInput(format!(
                "garment mass must be non-negative, got {garment_mass_kg} kg"
            )));
        }
        if gravity_ms2 <= 0.0 {
            return Err(SwagError::InvalidInput(format!(
                "gravity must be positive, got {gravity_ms2} m/s^2"
            )));
        }
        Ok(Self {
            garment_mass_kg,
            gravity_ms2,
        })
    }

    pub fn weight_n(&self) -> f64 {
        self.garment_mass_kg * self.gravity_ms2
    }
}

/// Area and centroidal second moment of a subvine cross-section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossSection {
    pub area_m2: f64,
    pub inertia_m4: f64,
}

impl CrossSection {
    /// Solid circle of diameter `d`: `A = πd²/4`, `I = πd⁴/64`.
    pub fn circle(diameter_m: f64) -> Result<Self> {
        if !(diameter_m.is_finite() && diameter_m > 0.0) {
            return Err(SwagError::InvalidGeometry(format!(
                "diameter must be positive and finite, got {diameter_m} m"
            )));
        }
        let d2 = diameter_m * diameter_m;
        Ok(Self {
            area_m2: PI * d2 / 4.0,
            inertia_m4: PI * d2 * d2 / 64.0,
        })
    }
}

pub fn cross_section_properties(diameter_m: f64) -> Result<CrossSection> {
    CrossSection::circle(diameter_m)
}

/// Signed unfurl force. Non-positive values mean the subvine stalls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnfurlForce {
    pub raw_n: f64,
}

impl UnfurlForce {
    pub fn stalled(&self) -> bool {
        self.raw_n <= 0.0
    }

    /// Force available for lifting, floored at zero.
    pub fn clamped_n(&self) -> f64 {
        self.raw_n.max(0.0)
    }
}

/// Axial push of one pressurized subvine, `P·A`.
pub fn subvine_drive_force(pressure_pa: f64, cs: &CrossSection) -> Result<f64> {
    require_pressure(pressure_pa)?;
    Ok(pressure_pa * cs.area_m2)
}

pub fn unfurl_force_single(
    pressure_pa: f64,
    cs: &CrossSection,
    t: &TransmissionParams,
) -> Result<UnfurlForce> {
    let drive = subvine_drive_force(pressure_pa, cs)?;
    Ok(UnfurlForce {
        raw_n: t.ratio_c * (drive - t.friction_residual_n),
    })
}

pub fn total_unfurl_force(
    subvines: &SubvineSpec,
    pressure_pa: f64,
    t: &TransmissionParams,
) -> Result<UnfurlForce> {
    let single = unfurl_force_single(pressure_pa, &subvines.cross_section(), t)?;
    Ok(UnfurlForce {
        raw_n: f64::from(subvines.count) * single.raw_n,
    })
}

/// `dF/dP` of the total unfurl force, `N·c·A`.
pub fn force_pressure_slope(n_subvines: u32, cs: &CrossSection, t: &TransmissionParams) -> f64 {
    f64::from(n_subvines) * t.ratio_c * cs.area_m2
}

/// Pressure at which `n` subvines deliver `force_n` in total, without any
/// burst check.
pub fn pressure_for_total_force(
    n_subvines: u32,
    force_n: f64,
    cs: &CrossSection,
    t: &TransmissionParams,
) -> Result<f64> {
    require_finite("force", force_n)?;
    if n_subvines == 0 {
        return Err(SwagError::InvalidInput(
            "subvine count must be at least 1".into(),
        ));
    }
    if force_n < 0.0 {
        return Err(SwagError::InvalidInput(format!(
            "force must be non-negative, got {force_n} N"
        )));
    }
    Ok((force_n / (f64::from(n_subvines) * t.ratio_c) + t.friction_residual_n) / cs.area_m2)
}

/// Pressure needed to lift the garment, checked against the burst limit.
pub fn required_pressure(
    load: &LoadSpec,
    subvines: &SubvineSpec,
    t: &TransmissionParams,
) -> Result<f64> {
    let p = pressure_for_total_force(
        subvines.count,
        load.weight_n(),
        &subvines.cross_section(),
        t,
    )?;
    check_burst(p, subvines.burst_pressure_pa)
}

pub fn check_burst(required_pa: f64, burst_pa: f64) -> Result<f64> {
    if required_pa > burst_pa {
        Err(SwagError::ExceedsBurst {
            required_pa,
            burst_pa,
        })
    } else {
        Ok(required_pa)
    }
}

/// Second moment about an axis offset `distance` from the centroid.
pub fn parallel_axis(cs: &CrossSection, distance_m: f64) -> Result<f64> {
    require_finite("distance", distance_m)?;
    if distance_m < 0.0 {
        return Err(SwagError::InvalidGeometry(format!(
            "axis distance must be non-negative, got {distance_m} m"
        )));
    }
    Ok(cs.inertia_m4 + cs.area_m2 * distance_m * distance_m)
}

/// Residual of the pulley moment balance `F_v·a − F_u·(a+b) − f`.
///
/// Here `f` is a torque-form residual, independent of the force-form
/// friction stored in [`TransmissionParams`].
pub fn torque_balance_residual(
    drive_force_n: f64,
    unfurl_force_n: f64,
    arm_a_m: f64,
    arm_b_m: f64,
    residual: f64,
) -> Result<f64> {
    if arm_a_m <= 0.0 || arm_b_m < 0.0 {
        return Err(SwagError::InvalidGeometry(format!(
            "pulley arms need a > 0 and b >= 0, got a = {arm_a_m}, b = {arm_b_m}"
        )));
    }
    Ok(drive_force_n * arm_a_m - unfurl_force_n * (arm_a_m + arm_b_m) - residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn prototype_cs() -> CrossSection {
        CrossSection::circle(0.032).unwrap()
    }

    #[test]
    fn circle_properties_at_prototype_diameter() {
        // 30-digit reference: A = 8.04247719318987e-4, I = 5.14718540364152e-8
        let cs = prototype_cs();
        assert!(rel(cs.area_m2, 8.042_477_193_189_87e-4) < 1e-14);
        assert!(rel(cs.inertia_m4, 5.147_185_403_641_52e-8) < 1e-14);
    }

    #[test]
    fn circle_scaling_and_identity() {
        let unit = CrossSection::circle(2.0).unwrap();
        assert_eq!(unit.area_m2, PI);
        let a = prototype_cs();
        let b = CrossSection::circle(0.064).unwrap();
        assert!(rel(b.area_m2, 4.0 * a.area_m2) < 1e-15);
        assert!(rel(b.inertia_m4, 16.0 * a.inertia_m4) < 1e-15);
    }

    #[test]
    fn circle_rejects_non_positive() {
        for d in [0.0, -0.01, f64::NAN] {
            assert!(matches!(
                cross_section_properties(d),
                Err(SwagError::InvalidGeometry(_))
            ));
        }
    }

    #[test]
    fn drive_force_examples() {
        let cs = prototype_cs();
        assert!(
            (subvine_drive_force(50_000.0, &cs).unwrap() - 40.212_385_965_949_35).abs() < 1e-10
        );
        assert_eq!(subvine_drive_force(0.0, &cs).unwrap(), 0.0);
        let unit = CrossSection {
            area_m2: 1.0,
            inertia_m4: 1.0,
        };
        assert_eq!(subvine_drive_force(1.0, &unit).unwrap(), 1.0);
        assert!(matches!(
            subvine_drive_force(-1.0, &cs),
            Err(SwagError::InvalidInput(_))
        ));
    }

    #[test]
    fn single_unfurl_force_examples() {
        let cs = prototype_cs();
        let t = TransmissionParams::from_ratio(0.2678, 0.0).unwrap();
        let f = unfurl_force_single(50_000.0, &cs, &t).unwrap();
        assert!((f.raw_n - 10.768_876_961_681_24).abs() < 1e-10);
        assert!(!f.stalled());

        // PA = f stalls exactly at zero
        let drive = subvine_drive_force(30_000.0, &cs).unwrap();
        let t = TransmissionParams::from_ratio(0.3, drive).unwrap();
        let stall = unfurl_force_single(30_000.0, &cs, &t).unwrap();
        assert_eq!(stall.raw_n, 0.0);
        assert!(stall.stalled());

        let unit = CrossSection {
            area_m2: 1.0,
            inertia_m4: 1.0,
        };
        let half = TransmissionParams::from_ratio(0.5, 0.0).unwrap();
        assert_eq!(unfurl_force_single(2.0, &unit, &half).unwrap().raw_n, 1.0);
        assert!(TransmissionParams::from_ratio(1.0, 0.0).is_err());
    }

    #[test]
    fn below_stall_reports_signed_value() {
        let cs = prototype_cs();
        let t = TransmissionParams::from_ratio(0.25, 20.0).unwrap();
        let f = unfurl_force_single(0.0, &cs, &t).unwrap();
        assert_eq!(f.raw_n, -5.0);
        assert!(f.stalled());
        assert_eq!(f.clamped_n(), 0.0);
    }

    #[test]
    fn total_force_examples() {
        let t = TransmissionParams::from_ratio(0.2678, 0.0).unwrap();
        let two = SubvineSpec::new(0.032, 2, 0.044, 0.0, 60_000.0).unwrap();
        let total = total_unfurl_force(&two, 50_000.0, &t).unwrap();
        assert!((total.raw_n - 21.537_753_923_362_47).abs() < 1e-10);

        let one = SubvineSpec { count: 1, ..two };
        assert_eq!(
            total_unfurl_force(&one, 37_000.0, &t).unwrap(),
            unfurl_force_single(37_000.0, &one.cross_section(), &t).unwrap()
        );

        let t1 = TransmissionParams::from_ratio(0.2313, 0.0).unwrap();
        let slope = force_pressure_slope(1, &prototype_cs(), &t1);
        assert!((slope - 1.8602e-4).abs() < 5e-9);
    }

    #[test]
    fn required_pressure_examples() {
        let t = TransmissionParams::from_ratio(0.2678, 0.0).unwrap();
        let two = SubvineSpec::new(0.032, 2, 0.044, 0.0, 60_000.0).unwrap();
        let load = LoadSpec::new(0.2).unwrap();
        let p = required_pressure(&load, &two, &t).unwrap();
        assert!((p - 4_554.792_498_283_156).abs() < 1e-8);

        let zero = LoadSpec::new(0.0).unwrap();
        assert_eq!(required_pressure(&zero, &two, &t).unwrap(), 0.0);

        let four = SubvineSpec { count: 4, ..two };
        let p4 = required_pressure(&load, &four, &t).unwrap();
        assert!(rel(p4, p / 2.0) < 1e-15);
    }

    #[test]
    fn required_pressure_over_burst_carries_value() {
        let t = TransmissionParams::from_ratio(0.2678, 0.0).unwrap();
        let weak = SubvineSpec::new(0.032, 2, 0.044, 0.0, 1_000.0).unwrap();
        let load = LoadSpec::new(0.2).unwrap();
        match required_pressure(&load, &weak, &t) {
            Err(SwagError::ExceedsBurst {
                required_pa,
                burst_pa,
            }) => {
                assert!((required_pa - 4_554.79).abs() < 0.01);
                assert_eq!(burst_pa, 1_000.0);
            }
            other => panic!("expected burst error, got {other:?}"),
        }
    }

    #[test]
    fn parallel_axis_examples() {
        let cs = prototype_cs();
        assert_eq!(parallel_axis(&cs, 0.0).unwrap(), cs.inertia_m4);
        let i = parallel_axis(&cs, 0.044).unwrap();
        assert!(rel(i, 1.608_495_438_637_974e-6) < 1e-13);
        let near = parallel_axis(&cs, 0.01).unwrap() - cs.inertia_m4;
        let far = parallel_axis(&cs, 0.02).unwrap() - cs.inertia_m4;
        assert!(rel(far, 4.0 * near) < 1e-14);
        assert!(parallel_axis(&cs, -0.1).is_err());
    }

    #[test]
    fn torque_balance_examples() {
        assert_eq!(
            torque_balance_residual(0.0, 0.0, 0.3, 0.7, 0.0).unwrap(),
            0.0
        );
        assert_eq!(
            torque_balance_residual(10.0, 10.0, 1.0, 0.0, 0.0).unwrap(),
            0.0
        );
        assert!(torque_balance_residual(1.0, 1.0, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn arms_and_ratio_must_agree() {
        let t = TransmissionParams::from_arms(0.01, 0.03, 0.0).unwrap();
        assert_eq!(t.ratio_c, 0.25);
        assert!(TransmissionParams::new(Some(0.01), Some(0.03), 0.3, 0.0).is_err());
        assert!(TransmissionParams::from_ratio(0.3, -1.0).is_err());
    }

    #[test]
    fn spec_constructors_validate() {
        assert!(SubvineSpec::new(0.032, 0, 0.0, 0.0, 1.0).is_err());
        assert!(SubvineSpec::new(0.0, 1, 0.0, 0.0, 1.0).is_err());
        assert!(SubvineSpec::new(0.032, 1, -0.01, 0.0, 1.0).is_err());
        assert!(SubvineSpec::new(0.032, 1, 0.0, 0.0, 0.0).is_err());
        assert!(SheathSpec::new(0.12, 1.0, 0.032).is_ok());
        assert!(SheathSpec::new(0.03, 1.0, 0.032).is_err());
        assert!(SheathSpec::new(0.12, 0.0, 0.032).is_err());
        let sheath = SheathSpec::new(0.12, 1.0, 0.030).unwrap();
        let subvine = SubvineSpec::new(0.032, 2, 0.044, 0.0, 1.0).unwrap();
        assert!(sheath.accepts(&subvine).is_err());
        assert!(LoadSpec::new(-0.1).is_err());
        assert!(LoadSpec::with_gravity(0.1, 0.0).is_err());
        assert_eq!(LoadSpec::new(0.1).unwrap().gravity_ms2, 9.81);
    }

    proptest! {
        #[test]
        fn required_pressure_round_trips(
            mass in 0.0f64..5.0,
            n in 1u32..8,
            c in 0.05f64..0.95,
            f in 0.0f64..50.0,
            d in 0.005f64..0.08,
        ) {
            let t = TransmissionParams::from_ratio(c, f).unwrap();
            let subvines = SubvineSpec::new(d, n, 0.0, 0.0, f64::MAX).unwrap();
            let load = LoadSpec::new(mass).unwrap();
            let p = required_pressure(&load, &subvines, &t).unwrap();
            let back = total_unfurl_force(&subvines, p, &t).unwrap().raw_n;
            let weight = load.weight_n();
            prop_assert!((back - weight).abs() <= 1e-9 * weight.max(1e-12) + 1e-12);
        }

        #[test]
        fn total_force_is_monotone(
            p in 1_000.0f64..80_000.0,
            n in 1u32..6,
            c in 0.05f64..0.9,
            d in 0.01f64..0.05,
        ) {
            let cs = CrossSection::circle(d).unwrap();
            let f = 0.5 * p * cs.area_m2;
            let t = TransmissionParams::from_ratio(c, f).unwrap();
            let s = SubvineSpec::new(d, n, 0.0, 0.0, 1e9).unwrap();
            let base = total_unfurl_force(&s, p, &t).unwrap().raw_n;
            prop_assert!(total_unfurl_force(&s, p * 1.01, &t).unwrap().raw_n > base);
            let more = SubvineSpec { count: n + 1, ..s };
            prop_assert!(total_unfurl_force(&more, p, &t).unwrap().raw_n > base);
            let t_c = TransmissionParams::from_ratio(c + 0.05, f).unwrap();
            prop_assert!(total_unfurl_force(&s, p, &t_c).unwrap().raw_n > base);
            let t_f = TransmissionParams::from_ratio(c, f * 1.1).unwrap();
            prop_assert!(total_unfurl_force(&s, p, &t_f).unwrap().raw_n < base);
        }

        #[test]
        fn stall_iff_drive_not_above_friction(
            p in 0.0f64..60_000.0,
            f in 0.0f64..60.0,
            c in 0.05f64..0.95,
        ) {
            let cs = prototype_cs();
            let t = TransmissionParams::from_ratio(c, f).unwrap();
            let u = unfurl_force_single(p, &cs, &t).unwrap();
            prop_assert_eq!(u.stalled(), p * cs.area_m2 <= f);
        }

        #[test]
        fn circle_inertia_matches_area_form(d in 1e-4f64..1.0) {
            let cs = CrossSection::circle(d).unwrap();
            prop_assert!(rel(cs.inertia_m4, cs.area_m2 * d * d / 16.0) < 1e-12);
        }

        #[test]
        fn expanded_equilibrium_has_zero_residual(
            p in 0.0f64..60_000.0,
            a in 0.001f64..0.1,
            b in 0.0f64..0.2,
            f in 0.0f64..40.0,
        ) {
            let cs = prototype_cs();
            let t = TransmissionParams::from_arms(a, b, f).unwrap();
            let drive = subvine_drive_force(p, &cs).unwrap();
            let unfurl = unfurl_force_single(p, &cs, &t).unwrap().raw_n;
            // torque-form residual equivalent to the force-form f is a·f
            let r = torque_balance_residual(drive, unfurl, a, b, a * f).unwrap();
            let scale = (drive * a).abs().max(a * f).max(1e-12);
            prop_assert!(r.abs() <= 1e-12 * scale);
        }
    }
}
