// Operational-precision analysis: sudden-approximation switching bound,
// Humpty-Dumpty visibility (analytic and Monte Carlo), and precision bounds
// on switching-time jitter.

#pragma once

#include <cstdint>

namespace catlift::rob {

// Energy variance of the averaged switching Hamiltonian at the mid-protocol
// switching point t_s = t_+ + t_-:
//   1/4 (2 dx^2 + 1) [ (f+1)^2 cosh 4t- + (f-1)^2 ] + (1 - f^2) dx^2 cosh 2t-
double sudden_variance(double delta_x, double t_minus, double f_avg);

// delta_t << (2 sqrt2 / sqrt(2 dx^2 + 1)) e^{-2 t-} / omega
double sudden_bound_seconds(double delta_x, double t_minus, double omega_rads);

// Visibility after averaging the closure error over switching-time jitter
// (eps1, eps3 ~ N(0, s^2) on the rotation segments, eps24 ~ N(0, 2 s^2) on
// the second expansion segment).
//   visibility:        Gaussian average of the second-order exponent,
//                      1/sqrt(det(1 + 2 Sigma Q)); matches the Monte Carlo.
//   leading_form:      published large-t- approximation
//                      (8/(pi dx s)) e^{-2t-} / sqrt(8 + dx^2 s^2 (pi + 16 t-)).
//   published_form:    published closed form (its rotation-error variance
//                      terms are half of the Monte-Carlo value; kept for
//                      reference only).
struct HumptyAnalytic {
    double visibility;
    double leading_form;
    double published_form;
    bool sigma_in_range;  // false above sigma_eps = 0.1
};
HumptyAnalytic humpty_visibility_analytic(double delta_x, double t_minus,
                                          double sigma_eps);

// Seeded Monte Carlo of the exact per-draw off-diagonal magnitude. Chunked
// with per-chunk streams and a fixed reduction order, so the result is
// bitwise reproducible for any worker count. Requires samples >= 1000.
struct HumptyMc {
    double visibility;
    double std_error;
};
// `mean_eps` adds a systematic (common-mode) offset to every switching
// error; the zero-mean case is the validated one.
HumptyMc humpty_visibility_mc(double delta_x, double t_minus, double sigma_eps,
                              std::int64_t samples, std::uint64_t seed,
                              double mean_eps = 0.0);

// sigma_eps <= 4 e^{-2 t-} / (dx sqrt(pi (pi - 1))); infinite at dx = 0.
struct SigmaEpsBound {
    double dimensionless;
    double seconds;
};
SigmaEpsBound sigma_eps_bound(double delta_x, double t_minus, double omega_rads);

}  // namespace catlift::rob
