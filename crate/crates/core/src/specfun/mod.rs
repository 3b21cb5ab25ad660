//! Scalar special functions, the two closed constants and Laurent extraction.

mod bessel;
mod constants;
mod gamma;
mod laurent;
mod zeta;

pub use bessel::{bessel_k, bessel_k_complex};
pub use constants::{constant_a, constant_a_alternative, constant_btilde, paper_constants, PaperConstants};
pub use gamma::{erf, erfc, gamma, gamma_c, gamma_upper, gamma_upper_da, EULER_GAMMA};
pub use laurent::{contour_derivative, laurent_extract, LaurentData, LAURENT_TOL};
pub use zeta::{zeta, zeta_prime, zeta_star, zeta_star_prime};
