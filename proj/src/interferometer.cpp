#include "catlift/interferometer.hpp"

#include "catlift/constants.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace catlift::itf {

namespace {

constexpr double pi = constants::pi;

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

double TrapSetup::x0_m() const {
    return std::sqrt(constants::hbar / (2.0 * mass_kg * omega_rads));
}

void TrapSetup::validate() const {
    require(mass_kg > 0.0, "TrapSetup: mass must be positive");
    require(omega_rads > 0.0, "TrapSetup: omega must be positive");
    require(delta_x >= 0.0, "TrapSetup: delta_x must be non-negative");
    if (distance_m) require(*distance_m > 0.0, "TrapSetup: distance must be positive");
    if (radius_m) require(*radius_m > 0.0, "TrapSetup: radius must be positive");
}

ProtocolSchedule ProtocolSchedule::standard(double t_minus) {
    require(t_minus >= 0.0, "ProtocolSchedule: negative t_minus");
    return {t_minus, pi / 2};
}

std::vector<ps::ScheduleSegment> ProtocolSchedule::segments() const {
    return {{ps::SegmentKind::Qho, t_plus},
            {ps::SegmentKind::Iho, t_minus},
            {ps::SegmentKind::Qho, t_plus},
            {ps::SegmentKind::Iho, t_minus}};
}

void CatState::validate() const {
    double norm = std::norm(amp_plus) + std::norm(amp_minus);
    require(std::abs(norm - 1.0) <= 1e-12, "CatState: amplitudes not normalized");
    ps::CovarianceMatrix{cov_plus}.validate();
    ps::CovarianceMatrix{cov_minus}.validate();
}

void QubitDensity::validate(double tol) const {
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol)
        throw std::invalid_argument("QubitDensity: not Hermitian");
    if (std::abs(m.trace().real() - 1.0) > tol || std::abs(m.trace().imag()) > tol)
        throw std::invalid_argument("QubitDensity: trace != 1");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(m);
    if (es.eigenvalues().minCoeff() < -tol || es.eigenvalues().maxCoeff() > 1.0 + tol)
        throw std::invalid_argument("QubitDensity: eigenvalues outside [0, 1]");
}

CatState create_cat(const TrapSetup& setup, double t0) {
    setup.validate();
    require(t0 >= 0.0, "create_cat: negative t0");
    Vec r0(2);
    r0 << 0.5 * setup.delta_x * (1.0 - std::cos(t0)),
          -0.5 * setup.delta_x * std::sin(t0);
    CatState cat;
    cat.moments_plus = r0;
    cat.moments_minus = -r0;
    cat.cov_plus = Mat::Identity(2, 2);
    cat.cov_minus = Mat::Identity(2, 2);
    cat.amp_plus = cat.amp_minus = 1.0 / std::sqrt(2.0);
    return cat;
}

std::vector<CatSnapshot> protocol_trajectory(const CatState& cat, double t_minus,
                                             std::span<const double> sample_times) {
    auto schedule = ProtocolSchedule::standard(t_minus).segments();
    double t_end = 2.0 * (pi / 2 + t_minus);
    std::vector<CatSnapshot> out;
    out.reserve(sample_times.size());
    for (double t : sample_times) {
        require(t >= 0.0 && t <= t_end * (1.0 + 1e-12),
                "protocol_trajectory: sample time out of range");
        ps::SymplecticTransform s = ps::schedule_prefix_transform(schedule, t);
        auto [rp, cp] = ps::evolve_gaussian(cat.moments_plus, cat.cov_plus, s);
        auto [rm, cm] = ps::evolve_gaussian(cat.moments_minus, cat.cov_minus, s);
        out.push_back({t, rp, rm, cp, cm});
    }
    return out;
}

double max_superposition_dimensionless(double delta_x, double t_minus) {
    require(delta_x >= 0.0, "max_superposition: negative delta_x");
    return std::sqrt(2.0) * std::exp(t_minus) * delta_x;
}

Superposition max_superposition(const TrapSetup& setup, double t_minus) {
    double ul = max_superposition_dimensionless(setup.delta_x, t_minus);
    return {ul, ul * setup.x0_m()};
}

ForceDisplacement force_displacement(double g, double t_minus) {
    double e = std::exp(t_minus);
    Vec published(2);
    published << -2.0 * g * e, -2.0 * g * (e + 1.0);
    auto schedule = ps::expansion_schedule(t_minus);
    Vec composed = ps::schedule_force_unitary(schedule, g).displacement;
    return {published, composed};
}

ForcePhase force_phase(double f_newton, const TrapSetup& setup, double t_minus) {
    setup.validate();
    const double g = f_newton * setup.x0_m() / (constants::hbar * setup.omega_rads);
    const double e = std::exp(t_minus);
    ForcePhase out;
    out.eq5 = 4.0 * g * setup.delta_x * (e - 1.0);
    // 2 r0^T Omega r_tot with r0 = (dx, 0) picks 2 dx * r_tot[p]
    out.displacement_route = 2.0 * setup.delta_x * (-2.0 * g * (e + 1.0));
    double scale = std::max({std::abs(out.eq5), std::abs(out.displacement_route), 1e-300});
    out.relative_gap = std::abs(out.eq5 - out.displacement_route) / scale;
    return out;
}

ForcePhaseReport force_phase_report(double f_newton, const TrapSetup& setup,
                                    double t_minus, int oracle_steps) {
    ForcePhaseReport rep;
    rep.values = force_phase(f_newton, setup, t_minus);
    const double g = f_newton * setup.x0_m() / (constants::hbar * setup.omega_rads);

    // Fine-step the driven moments from the origin: the final moment vector
    // is the protocol displacement d_tot, and the closing phase is
    // 2 r0^T Omega d_tot evaluated with r0 = (dx, 0).
    std::vector<ps::HamiltonianSegment> sched{
        {ps::hamiltonian_qho(g), pi / 2},
        {ps::hamiltonian_iho(g), t_minus},
        {ps::hamiltonian_qho(g), pi / 2},
        {ps::hamiltonian_iho(g), t_minus}};
    auto traj = ps::evolve_numeric_oracle(sched, Vec::Zero(2), Mat::Identity(2, 2),
                                          oracle_steps);
    const Vec& d = traj.final_moments();
    // r0^T Omega d = dx * d_p with r0 = (dx, 0)
    rep.oracle = 2.0 * setup.delta_x * d(1);
    double scale = std::max(std::abs(rep.oracle), 1e-300);
    rep.eq5_rel_err = std::abs(rep.values.eq5 - rep.oracle) / scale;
    rep.displacement_rel_err = std::abs(rep.values.displacement_route - rep.oracle) / scale;
    rep.eq5_agrees = rep.eq5_rel_err <= rep.displacement_rel_err;
    return rep;
}

double optimal_time_force(double f_newton, const TrapSetup& setup) {
    setup.validate();
    double arg = 4.0 * f_newton * setup.x0_m() * setup.delta_x /
                 (constants::hbar * setup.omega_rads);
    if (!(arg > 0.0 && arg < 1.0))
        throw std::domain_error("optimal_time_force: 4 f x0 dx/(hbar omega) must be in (0,1)");
    return -std::log(arg);
}

QubitDensity close_interferometer(const Vec& r0, const GaussianUnitary& total) {
    const Mat& s = total.symplectic.m;
    Mat cov = s * s.transpose();
    return close_interferometer(r0, total, cov);
}

QubitDensity close_interferometer(const Vec& r0, const GaussianUnitary& total,
                                  const Mat& final_cov) {
    require(r0.size() == 2 && total.symplectic.m.rows() == 2,
            "close_interferometer: one-mode unitary expected");
    Mat omega = ps::symplectic_form(1);
    Vec hum = omega * (r0 + total.symplectic.m * r0);
    double quad = hum.dot(final_cov * hum);
    // rho_{+1,-1} = 1/2 exp(-quad) exp(+2 i d^T Omega r0)
    double phase = 2.0 * total.displacement.dot(omega * r0);
    std::complex<double> off = 0.5 * std::exp(std::complex<double>(-quad, phase));
    QubitDensity rho;
    rho.m << 0.5, off, std::conj(off), 0.5;
    rho.validate(1e-10);
    return rho;
}

double visibility(const QubitDensity& rho) {
    return 2.0 * std::abs(rho.m(0, 1));
}

}  // namespace catlift::itf
