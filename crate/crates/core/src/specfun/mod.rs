//! Special functions: Γ and relatives, and the confluent hypergeometric pair Φ, Ψ.

mod dd;
mod gamma;
mod hypergeometric;

#[doc(hidden)]
pub use gamma::set_gamma_fault;
pub use gamma::{digamma, gamma, gamma_ratio, gamma_ratio_shift, ln_gamma_abs, pochhammer, rgamma, EULER_GAMMA};
pub(crate) use hypergeometric::kummer_series as hypergeometric_series;
pub use hypergeometric::{
    kummer_phi, psi_exceptional, tricomi_psi, tricomi_psi_formula, tricomi_psi_integral, tricomi_psi_log_series,
    SeriesControl, FORMULA_RHO_MAX, INTEGER_BETA_WINDOW, PSI_EXCEPTIONAL_DEFAULT_A,
};
