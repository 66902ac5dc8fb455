//! Lab-unit conversions applied at file boundaries.

pub fn mm_to_m(v: f64) -> f64 {
    v / 1_000.0
}

pub fn m_to_mm(v: f64) -> f64 {
    v * 1_000.0
}

pub fn kpa_to_pa(v: f64) -> f64 {
    v * 1_000.0
}

pub fn pa_to_kpa(v: f64) -> f64 {
    v / 1_000.0
}

pub fn deg_to_rad(v: f64) -> f64 {
    v.to_radians()
}

/// Litres per minute to cubic metres per second.
pub fn lpm_to_m3s(v: f64) -> f64 {
    v / 60_000.0
}
