#pragma once

namespace resetfpt {

/// Order and argument of a parabolic cylinder function D_nu(z).
struct PcfArgs {
    double nu = 0.0;
    double z = 0.0;
};

/// Parabolic cylinder function D_nu(z) for real nu <= 0 and real z.
///
/// For nu < 0 the value comes from the integral representation
///   D_nu(z) = exp(-z^2/4) / Gamma(-nu) * int_0^inf t^(-nu-1) exp(-t^2/2 - z t) dt,
/// integrated with adaptive Gauss-Legendre panels around the peak of the
/// integrand and accumulated in log space. D_0(z) = exp(-z^2/4).
///
/// Relative accuracy is 1e-10 or better for nu in [-200, 0] and |z| <= 30.
/// Throws DomainError for nu > 0 or non-finite input and ConvergenceError if
/// the quadrature does not settle.
double pcf_d(double nu, double z);
double pcf_d(const PcfArgs& args);

/// log D_nu(z). D_nu(z) > 0 everywhere on nu <= 0, so this is always defined,
/// and it stays finite where D itself under- or overflows.
double log_pcf_d(double nu, double z);

/// Closed form D_nu(0) = 2^(nu/2) sqrt(pi) / Gamma((1 - nu)/2).
double pcf_d_at_zero(double nu);
double log_pcf_d_at_zero(double nu);

}  // namespace resetfpt
