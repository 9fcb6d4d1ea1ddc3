// Two-interferometer gravitational pipeline: coupling constants, 4-mode
// quadratic dynamics, joint two-qubit density matrix, PPT negativity,
// witness construction, optimal-time search.

#pragma once

#include "catlift/interferometer.hpp"
#include "catlift/phase_space.hpp"

#include <functional>
#include <memory>

namespace catlift::gie {

using itf::TrapSetup;
using ps::GaussianUnitary;
using ps::Mat;
using ps::QuadraticHamiltonian;
using ps::Vec;

struct GravCouplings {
    double g_g = 0.0;       // dimensionless entangling coupling
    double f_g = 0.0;       // dimensionless gravitational force
    double theta_rad = 0.0;
    bool separation_ok = true;  // d >> x0 * delta_x held at evaluation time
};

// f_G(theta) = (G M / (omega^2 d^3)) (d / (sqrt2 x0)) cos(theta)
// g_G(theta) = (G M / (2 omega^2 d^3)) (1 + 3 cos 2 theta)
// Requires setup.distance_m > 0.
GravCouplings grav_couplings(const TrapSetup& setup);

// Trap+interaction Hamiltonians in the ordering (x1, p1, x2, p2), with the
// shared linear coefficient vector (f_G, 0, -f_G, 0). Equilibrium shifts are
// obtained from the linear solve -H^{-1} rbar. Requires |g_G| < 1/2.
struct GravHamiltonians {
    QuadraticHamiltonian plus, minus;
    Vec shift_plus, shift_minus;
};
GravHamiltonians grav_hamiltonians(const GravCouplings& c);

struct JointQubitDensity {
    Eigen::Matrix4cd m;  // basis order (j,k) = (+,+), (+,-), (-,+), (-,-)

    void validate(double tol = 1e-10) const;
};

// Joint density elements from a caller-supplied two-mode protocol unitary;
// branch (j,k) opens and closes with the displacement (j dx, j p0, k dx, k p0).
JointQubitDensity joint_qubit_density(const Vec& r0_mass, const GaussianUnitary& total);

// Gravitational pipeline evaluated end to end in extended precision (the
// near-identity residuals of the closed protocol sit far below double noise
// otherwise). Caches the fixed-duration segment exponential across calls.
class GiePipeline {
  public:
    explicit GiePipeline(const GravCouplings& c);
    ~GiePipeline();
    GiePipeline(GiePipeline&&) noexcept;
    GiePipeline& operator=(GiePipeline&&) noexcept;

    GaussianUnitary total_unitary(double t_minus) const;
    JointQubitDensity density(double delta_x, double t_minus) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

GaussianUnitary gie_total_unitary(const GravCouplings& c, double t_minus);
JointQubitDensity gie_density(const GravCouplings& c, double delta_x, double t_minus);

// Partial transpose over the second qubit.
Eigen::Matrix4cd partial_transpose_second(const Eigen::Matrix4cd& rho);

struct PptResult {
    double lambda;             // minimum eigenvalue of the partial transpose
    Eigen::Vector4cd eigvec;
};
PptResult ppt_negativity(const JointQubitDensity& rho);

// W = PT_2(|v><v|); Tr(W rho) equals the PPT eigenvalue of rho for its own
// eigenvector. Throws on a zero vector.
Eigen::Matrix4cd witness_matrix(const Eigen::Vector4cd& eigvec);

struct GieResult {
    double lambda_pt = 0.0;
    Eigen::Matrix4cd witness;
    double t_minus = 0.0;
    GravCouplings couplings;
    double truncation_ratio = 0.0;  // max spatial extent / d for the quadratic cut
};
GieResult gie_result(const TrapSetup& setup, double t_minus);

// Dense grid scan of -lambda over t_minus followed by golden-section
// refinement around the first global grid maximum (ties toward smaller
// t_minus). `post` may transform each density (e.g. dephasing) before the
// eigensolve; it receives the density and the protocol end time t_f.
struct OptimalTime {
    double t_o = 0.0;
    double lambda_pt = 0.0;
};
using DensityPost = std::function<JointQubitDensity(const JointQubitDensity&, double)>;
OptimalTime optimal_time_gie(const TrapSetup& setup, double t_lo, double t_hi,
                             double grid_step = 3.14159265358979323846 / 200.0,
                             const DensityPost& post = nullptr);

}  // namespace catlift::gie
