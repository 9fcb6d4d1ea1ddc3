// Open-system corrections: Lyapunov evolution with diffusion, protocol
// covariance under position noise, qubit dephasing (one and two qubits),
// quasi-static force noise, gas-collision rates and bounds.

#pragma once

#include "catlift/gie.hpp"
#include "catlift/interferometer.hpp"
#include "catlift/phase_space.hpp"

namespace catlift::dec {

using gie::JointQubitDensity;
using itf::QubitDensity;
using itf::TrapSetup;
using ps::Mat;
using ps::Vec;

struct GasModel {
    double pressure_pa = 0.0;
    double radius_m = 0.0;
    double temperature_k = 0.0;
    double m_air_kg = 4.8096e-26;  // mean air molecule, overridable
};

struct NoiseModel {
    double gamma_x = 0.0;     // position-decoherence rate, trap-frequency units
    double gamma_q_hz = 0.0;  // qubit dephasing rate
    double sigma_f_n = 0.0;   // quasi-static force noise std, Newtons
    double sigma_eps = 0.0;   // relative switching-time error std
    GasModel gas;

    void validate() const;
};

struct DriftDiffusion {
    Mat a;      // drift
    Mat d;      // diffusion (symmetric PSD)
    Vec drive;  // constant drive on the first moments
};

// r(t) by variation of constants, sigma(t) by the Lyapunov solution
//   sigma(t) = int_0^t e^{A(t-s)} D e^{A^T(t-s)} ds + e^{At} sigma0 e^{A^T t}.
// The diffusion integral uses the closed forms for the labeled QHO/IHO drift
// patterns and adaptive quadrature (tolerance 1e-10) otherwise.
std::pair<Vec, Mat> lyapunov_evolve(const DriftDiffusion& dd, const Vec& r0,
                                    const Mat& sigma0, double t);

// Accumulated diffusion of one segment, int_0^t e^{As} D e^{A^T s} ds with
// D = diag(0, gamma_x).
Mat diffusion_qho(double gamma_x, double t);
Mat diffusion_iho(double gamma_x, double t);

// Five-term protocol covariance: each segment's diffusion block propagated
// through the later segments, plus the coherent part S sigma0 S^T.
Mat protocol_covariance_with_diffusion(double gamma_x, double t_minus);

// Off-diagonal decay e^{-gamma_q t_f / omega} (the published rate). The
// strict double-commutator reading decays four times faster; enable with
// `strict`. Diagonals untouched.
QubitDensity qubit_dephase(const QubitDensity& rho, double gamma_q_hz,
                           double omega_rads, double t_f, bool strict = false);
// Two qubits: elements scaled by e^{-(2 - d_jm - d_kn) gamma_q t_f / omega}.
JointQubitDensity qubit_dephase(const JointQubitDensity& rho, double gamma_q_hz,
                                double omega_rads, double t_f, bool strict = false);

// Run-to-run Gaussian force noise. gamma_f is half the variance of the
// accumulated phase, 8 x0^2 dx^2 sigma_f^2 (e^{t-}-1)^2 / (hbar omega)^2;
// the published (unsquared) form is carried alongside for reference.
struct QuasiStatic {
    double gamma_f;
    double visibility_factor;     // e^{-gamma_f}
    double gamma_f_published;     // same with (e^{t-}-1) unsquared
};
QuasiStatic quasi_static_suppression(double sigma_f_n, const TrapSetup& setup,
                                     double t_minus);

// Leading-order inversion of gamma_f << 1:
//   sigma_f << hbar omega e^{-t-} / (2 sqrt2 x0 dx)
double sigma_f_bound(const TrapSetup& setup, double t_minus);

// Gamma_air = 16 pi sqrt(2 pi / 3) P R^2 / (m_air v_air), v_air = rms speed.
double gas_decoherence_rate(const GasModel& gas);

// Pressure bound evaluated per the published formula with the protocol time
// in trap-frequency units:
//   P_max = sqrt(3 m_air k_B T) (omega t_tot) / (16 pi^{3/2} omega R^2).
double pressure_bound(double radius_m, double temperature_k, double m_air_kg,
                      double omega_rads, double t_tot_seconds);

}  // namespace catlift::dec
