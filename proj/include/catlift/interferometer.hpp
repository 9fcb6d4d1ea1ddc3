// Single-interferometer pipeline: cat creation, expansion-protocol
// trajectory, force sensing, interferometer closure to a qubit density
// matrix, and visibility.

#pragma once

#include "catlift/phase_space.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace catlift::itf {

using ps::GaussianUnitary;
using ps::Mat;
using ps::Vec;

// SI-level experimental parameters with dimensionless conversions.
struct TrapSetup {
    double mass_kg = 0.0;
    double omega_rads = 0.0;              // trap angular frequency
    double delta_x = 0.0;                 // half superposition, ground-spread units
    std::optional<double> distance_m;     // inter-trap distance (two-mass runs)
    double theta_rad = 0.0;               // orientation of the trap axis pair
    std::optional<double> radius_m;       // particle radius (gas bounds, table)

    // Ground-state spread sqrt(hbar / (2 M omega)); recomputed, never cached.
    double x0_m() const;
    void validate() const;
};

struct ProtocolSchedule {
    double t_minus = 0.0;
    double t_plus = 0.0;

    static ProtocolSchedule standard(double t_minus);
    std::vector<ps::ScheduleSegment> segments() const;
    double t_final() const { return 2.0 * (t_plus + t_minus); }
};

struct CatState {
    Vec moments_plus, moments_minus;
    Mat cov_plus, cov_minus;
    std::complex<double> amp_plus, amp_minus;

    void validate() const;
};

struct CatSnapshot {
    double t;
    Vec moments_plus, moments_minus;
    Mat cov_plus, cov_minus;
};

struct QubitDensity {
    Eigen::Matrix2cd m;

    void validate(double tol = 1e-12) const;
};

// Branches at +-r0(t0) with r0(t0) = (dx/2)(1 - cos t0, -sin t0), identity
// covariance, equal amplitudes. t0 defaults to the half-period turning point.
CatState create_cat(const TrapSetup& setup, double t0 = 3.14159265358979323846);

// Branch moments r_pm(t) = +-S(t) r0 along the piecewise schedule, with the
// covariance carried by the same forward map.
std::vector<CatSnapshot> protocol_trajectory(const CatState& cat, double t_minus,
                                             std::span<const double> sample_times);

struct Superposition {
    double dimensionless;  // sqrt(2) e^{t_minus} delta_x
    double meters;         // x0 * dimensionless
};
Superposition max_superposition(const TrapSetup& setup, double t_minus);
double max_superposition_dimensionless(double delta_x, double t_minus);

// Final displacement of the driven protocol, two ways:
//   closed_form: the published closed form (-2 g e^{t-}, -2 g (e^{t-}+1))
//   composed:    forward-map displacement from composing the four driven
//                segments, +2 g (e^{t-}, e^{t-}-1); this is the branch the
//                fine-step oracle confirms.
struct ForceDisplacement {
    Vec closed_form;
    Vec composed;
};
ForceDisplacement force_displacement(double g, double t_minus);

// Qubit phase from a force f (Newtons), two routes plus their gap. The two
// published routes disagree; force_phase_report runs the oracle verdict.
struct ForcePhase {
    double eq5;                 // 4 f x0 dx (e^{t-} - 1) / (hbar omega)
    double displacement_route;  // 2 r0^T Omega r_tot with the published r_tot
    double relative_gap;
};
ForcePhase force_phase(double f_newton, const TrapSetup& setup, double t_minus);

struct ForcePhaseReport {
    ForcePhase values;
    double oracle;              // phase from the fine-step moment oracle
    double eq5_rel_err;
    double displacement_rel_err;
    bool eq5_agrees;
};
ForcePhaseReport force_phase_report(double f_newton, const TrapSetup& setup,
                                    double t_minus, int oracle_steps = 10000);

// T_o^f = -ln(4 f x0 dx / (hbar omega)); requires the argument in (0, 1).
double optimal_time_force(double f_newton, const TrapSetup& setup);

// Reduced qubit density matrix after opening/closing displacements +-r0
// around the total protocol unitary. The overload with `final_cov` evaluates
// the branch-overlap quadratic with a supplied (e.g. diffused) covariance
// instead of S sigma0 S^T.
QubitDensity close_interferometer(const Vec& r0, const GaussianUnitary& total);
QubitDensity close_interferometer(const Vec& r0, const GaussianUnitary& total,
                                  const Mat& final_cov);

// Fringe contrast 2 |rho01|.
double visibility(const QubitDensity& rho);

}  // namespace catlift::itf
