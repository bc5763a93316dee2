//! Special functions, analytic constants, and main-term shapes.

mod bessel;
mod constants;
mod divisor;
mod lfun;
mod primes;
mod quad;
mod shapes;

pub use bessel::bessel_i0;
pub use constants::{a_integrand, constant_a, constant_a_cached, EULER_GAMMA};
pub use divisor::{
    binomial, divisor_square_series, dk, halfpoint_limit_constant, local_factor_integral,
    local_factor_series, SeriesValue,
};
pub use lfun::{l_one, l_one_all, LValue};
pub use primes::{for_each_prime, prime_sum, prime_zeta, riemann_zeta, sieve};
pub use quad::{
    adaptive_simpson, gauss_legendre, gauss_legendre_nodes, periodic_trapezoid, QuadratureResult,
};
pub use shapes::{
    divisor_series_log_bound, half_point_moment_shape, moment_lower_shape, moment_upper_shape,
    tail_shapes, MainTermShape, ShapeKind,
};
