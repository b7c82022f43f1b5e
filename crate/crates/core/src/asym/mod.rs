//! Asymptotic envelopes and expansions near z = 1, and numerical probes of
//! how the series behave at reachable t.

mod envelope;
mod expansion;
mod probe;

pub use envelope::{
    abelian_mu_envelope, choose_t, crossover, error_envelope_e, fit_walfisz_c, ford_b, log_abelian_mu_envelope,
    log_error_envelope_e, log_inv, walfisz_envelope, Crossover, EnvelopeParams,
};
pub use expansion::{
    abelian_transfer, corollary_main_term, corollary_residual, main_term_form, tau_expansion,
    tau_expansion_coefficients, two_omega_leading_coefficient, MainTermForm, MainTermSource, Residual,
    SlowlyVarying,
};
pub use probe::*;
