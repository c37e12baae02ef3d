//! Spatial reconstruction and the time-integrated interface fluxes of the
//! unified scheme.

mod interface;
mod slopes;

pub use interface::{
    expansion_coefficients, interface_state, ExpansionCoefficients, InterfaceContext,
    InterfaceFlux,
};
pub use slopes::{macro_slopes, reconstruct_slopes, van_leer, Slopes};
