//! Statics and design tools for garments that tighten by unfurling a
//! pressurized sheath through a ring of inflatable subvines.
//!
//! Lengths are metres, pressures pascals, forces newtons and angles radians
//! unless a name says otherwise. Millimetres, kilopascals and degrees only
//! appear at the I/O boundary.

pub mod calibration;
pub mod deploy;
pub mod design;
pub mod error;
pub mod io;
pub mod mechanics;
pub mod stiffness;

pub use error::{Result, RowError, SwagError};
pub use mechanics::{
    CrossSection, LoadSpec, SheathSpec, SubvineSpec, TransmissionParams, UnfurlForce,
};
