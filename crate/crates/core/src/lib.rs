//! Finite-temperature free energy and entropy of two planar scatterers, a
//! thin plasma sheet and a plasma-model slab, computed from their scattering
//! phase shifts.
//!
//! Natural units (ħ = c = k_B = 1) throughout.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod numkernel;
pub mod plasma_sheet;
pub mod slab;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use numkernel::{AsymptoticFit, Basis, QuadResult, QuadSettings};
pub use plasma_sheet::SheetParams;
pub use slab::SlabParams;
pub use spectral::{
    Channel, HeatKernelCoefficients, HeatKernelSet, Part, PartValue, ScatteringChannel,
    SubtractionSpec, ThermoCurve, ThermoPoint,
};
