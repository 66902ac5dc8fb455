//! Values computed independently at 30 significant digits and frozen here.

use swag_core::deploy::{spool_kinematics, torque_capacity_to_tip_load};
use swag_core::design::{chord_spacing, occupancy_ratio};
use swag_core::mechanics::{
    force_pressure_slope, parallel_axis, required_pressure, subvine_drive_force,
    total_unfurl_force, unfurl_force_single, CrossSection, LoadSpec, SubvineSpec,
    TransmissionParams, DEFAULT_GRAVITY,
};
use swag_core::stiffness::{normalized_stiffness_profile, stiffness_extrema, ProfileRequest};

fn close(got: f64, want: f64, tol: f64) {
    assert!(
        ((got - want) / want).abs() <= tol,
        "got {got:e}, want {want:e}"
    );
}

fn cs32() -> CrossSection {
    CrossSection::circle(0.032).unwrap()
}

#[test]
fn section_of_a_32_mm_subvine() {
    let cs = cs32();
    close(cs.area_m2, 8.04247719318987e-4, 1e-14);
    close(cs.inertia_m4, 5.14718540364152e-8, 1e-14);
    close(cs.area_m2 * 0.044 * 0.044, 1.5570235846e-6, 1e-10);
    close(
        parallel_axis(&cs, 0.044).unwrap(),
        1.608495438637974e-6,
        1e-14,
    );
}

#[test]
fn forces_at_fifty_kilopascals() {
    let cs = cs32();
    let t = TransmissionParams::from_ratio(0.2678, 0.0).unwrap();
    close(
        subvine_drive_force(50_000.0, &cs).unwrap(),
        40.2123859659,
        1e-11,
    );
    close(
        unfurl_force_single(50_000.0, &cs, &t).unwrap().raw_n,
        10.76887696168,
        1e-11,
    );
    let pair = SubvineSpec::new(0.032, 2, 0.044, 0.0, 60_000.0).unwrap();
    close(
        total_unfurl_force(&pair, 50_000.0, &t).unwrap().raw_n,
        21.5377539233,
        1e-11,
    );
}

#[test]
fn slopes_for_fitted_ratios() {
    let cs = cs32();
    let cases = [
        (1, 0.2313, 1.86022497478e-4),
        (2, 0.2678, 4.30755078467e-4),
        (3, 0.2841, 6.85460331176e-4),
    ];
    let mut slopes = Vec::new();
    for (n, c, want) in cases {
        let t = TransmissionParams::from_ratio(c, 0.0).unwrap();
        let s = force_pressure_slope(n, &cs, &t);
        close(s, want, 1e-11);
        slopes.push(s);
    }
    close(slopes[1] / slopes[0], 2.3156074362, 1e-10);
}

#[test]
fn pressure_to_carry_a_light_garment() {
    let pair = SubvineSpec::new(0.032, 2, 0.044, 0.0, 60_000.0).unwrap();
    let t = TransmissionParams::from_ratio(0.2678, 0.0).unwrap();
    let p = required_pressure(&LoadSpec::new(0.2).unwrap(), &pair, &t).unwrap();
    close(p, 4554.792498283156, 1e-13);
}

#[test]
fn prototype_stiffness_extremes() {
    let cs = cs32();
    let t = TransmissionParams::from_ratio(0.2678, 0.0).unwrap();
    let single =
        normalized_stiffness_profile(&cs, &t, &ProfileRequest::new(1, 0.044, 1.962)).unwrap();
    let e = stiffness_extrema(&single).unwrap();
    close(e.s_max / e.s_min, 31.25, 1e-12);
    close(e.s_min, 0.032, 1e-12);
    let three =
        normalized_stiffness_profile(&cs, &t, &ProfileRequest::new(3, 0.044, 1.962)).unwrap();
    close(three.mean(), 0.516, 1e-12);
}

#[test]
fn spool_and_tip_load() {
    close(
        spool_kinematics(0.5, 0.02).unwrap().reel_turns,
        7.957747154594767,
        1e-14,
    );
    close(
        torque_capacity_to_tip_load(0.883, 0.3, DEFAULT_GRAVITY).unwrap(),
        0.30003397893,
        1e-10,
    );
}

#[test]
fn packing_geometry() {
    close(occupancy_ratio(3, 0.032, 0.12), 0.21333333333, 1e-10);
    close(occupancy_ratio(3, 0.032, 0.17), 0.10629757785, 1e-10);
    close(occupancy_ratio(2, 0.032, 0.12), 0.14222222222, 1e-10);
    close(chord_spacing(3, 0.044), 0.07621023553, 1e-10);
}
