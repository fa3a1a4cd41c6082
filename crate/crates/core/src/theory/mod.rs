//! Closed-form performance theory: special functions, order statistics of
//! Rice amplitudes, average channel gains, outage probability, average error
//! rate and hardware complexity counts.

mod complexity;
mod gain;
mod ordstat;
mod perf;
pub mod quad;
mod rice;
pub mod special;

pub use complexity::{complexity_counts, ArchitectureCounts, ComplexityCounts};
pub use gain::{asymptotic_gains, diag_gain_rician, fully_gain_rayleigh, group_gain_rayleigh, GainPair};
pub use ordstat::{
    nondiag_gain_from_moments, nondiag_gain_rayleigh, nondiag_gain_rician, ordstat_moment, ordstat_moments,
    ordstat_rayleigh_pdf, ordstat_rayleigh_pdf_beta, rayleigh_mean_coefficients, rayleigh_ordstat_moments,
    OrderStatMoments,
};
pub use perf::{
    average_ber, conditional_ber, ln_sqrt_product_density, outage_probability, product_density, sqrt_product_mass,
    SnrModel,
};
pub use rice::RiceParams;
pub use special::{bessel_i0, bessel_k0, gamma_fn, laguerre_half, marcum_q1};
