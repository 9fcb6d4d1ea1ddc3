#include "catlift/decoherence.hpp"

#include "catlift/constants.hpp"
#include "catlift/detail/bigfloat.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace catlift::dec {

namespace {

constexpr double pi = constants::pi;

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

Mat expm_mat(const Mat& a) {
    detail::TinyMat<double> tm(static_cast<std::size_t>(a.rows()));
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) tm(i, j) = a(i, j);
    auto e = detail::expm(tm);
    Mat out(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out(i, j) = e(i, j);
    return out;
}

Mat integrand(const Mat& a, const Mat& d, double s) {
    Mat e = expm_mat(a * s);
    return e * d * e.transpose();
}

Mat adaptive_simpson(const Mat& a, const Mat& d, double lo, double hi,
                     const Mat& flo, const Mat& fmid, const Mat& fhi,
                     const Mat& whole, double tol, int depth) {
    double m = 0.5 * (lo + hi);
    double lm = 0.5 * (lo + m), rm = 0.5 * (m + hi);
    Mat flm = integrand(a, d, lm);
    Mat frm = integrand(a, d, rm);
    Mat left = (m - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    Mat right = (hi - m) / 6.0 * (fmid + 4.0 * frm + fhi);
    Mat sum = left + right;
    double err = (sum - whole).cwiseAbs().maxCoeff();
    if (depth <= 0 || err < 15.0 * tol) return sum + (sum - whole) / 15.0;
    return adaptive_simpson(a, d, lo, m, flo, flm, fmid, left, tol / 2, depth - 1) +
           adaptive_simpson(a, d, m, hi, fmid, frm, fhi, right, tol / 2, depth - 1);
}

Mat diffusion_integral_quadrature(const Mat& a, const Mat& d, double t, double tol) {
    if (t == 0.0) return Mat::Zero(d.rows(), d.cols());
    Mat flo = integrand(a, d, 0.0);
    Mat fmid = integrand(a, d, 0.5 * t);
    Mat fhi = integrand(a, d, t);
    Mat whole = t / 6.0 * (flo + 4.0 * fmid + fhi);
    // relative target: the integrand grows like e^{2|a|t}
    double scale = std::max(1.0, whole.cwiseAbs().maxCoeff());
    return adaptive_simpson(a, d, 0.0, t, flo, fmid, fhi, whole, tol * scale, 28);
}

bool matches(const Mat& a, double a01, double a10) {
    return a.rows() == 2 && a(0, 0) == 0.0 && a(1, 1) == 0.0 &&
           a(0, 1) == a01 && a(1, 0) == a10;
}

}  // namespace

void NoiseModel::validate() const {
    require(gamma_x >= 0.0 && gamma_q_hz >= 0.0 && sigma_f_n >= 0.0 && sigma_eps >= 0.0,
            "NoiseModel: rates must be non-negative");
    require(gas.pressure_pa >= 0.0 && gas.radius_m >= 0.0 &&
                gas.temperature_k >= 0.0 && gas.m_air_kg > 0.0,
            "NoiseModel: invalid gas parameters");
}

Mat diffusion_qho(double gamma_x, double t) {
    Mat out(2, 2);
    if (t == pi / 2) {  // quarter period, closed constants
        out << pi, 2.0, 2.0, pi;
        return gamma_x / 4.0 * out;
    }
    double s2 = std::sin(2.0 * t);
    double sg = std::sin(t);
    out << 0.5 * t - 0.25 * s2, 0.5 * sg * sg,
           0.5 * sg * sg, 0.5 * t + 0.25 * s2;
    return gamma_x * out;
}

Mat diffusion_iho(double gamma_x, double t) {
    // quadrature-confirmed closed form; both linear terms carry 2t
    Mat out(2, 2);
    double sh2 = std::sinh(2.0 * t);
    double sh = std::sinh(t);
    out << sh2 - 2.0 * t, 2.0 * sh * sh,
           2.0 * sh * sh, sh2 + 2.0 * t;
    return 0.25 * gamma_x * out;
}

std::pair<Vec, Mat> lyapunov_evolve(const DriftDiffusion& dd, const Vec& r0,
                                    const Mat& sigma0, double t) {
    require(t >= 0.0, "lyapunov_evolve: negative time");
    const int n = static_cast<int>(dd.a.rows());
    require(dd.d.rows() == n && sigma0.rows() == n && r0.size() == n,
            "lyapunov_evolve: dimension mismatch");
    require((dd.d - dd.d.transpose()).cwiseAbs().maxCoeff() <= 1e-12,
            "lyapunov_evolve: diffusion matrix must be symmetric");
    Eigen::SelfAdjointEigenSolver<Mat> dcheck(dd.d);
    require(dcheck.eigenvalues().minCoeff() >= -1e-12,
            "lyapunov_evolve: diffusion matrix must be positive semidefinite");

    // first moments via the augmented exponential [[A, d],[0, 0]]
    Mat aug = Mat::Zero(n + 1, n + 1);
    aug.topLeftCorner(n, n) = dd.a * t;
    if (dd.drive.size() == n) aug.topRightCorner(n, 1) = dd.drive * t;
    Mat eaug = expm_mat(aug);
    Vec r = eaug.topLeftCorner(n, n) * r0 + eaug.topRightCorner(n, 1);

    Mat eat = eaug.topLeftCorner(n, n);
    Mat sigma = eat * sigma0 * eat.transpose();

    if (!dd.d.isZero(0.0)) {
        bool diag_d = dd.d.rows() == 2 && dd.d(0, 0) == 0.0 && dd.d(0, 1) == 0.0 &&
                      dd.d(1, 0) == 0.0;
        if (diag_d && matches(dd.a, 1.0, -1.0))
            sigma += diffusion_qho(dd.d(1, 1), t);
        else if (diag_d && matches(dd.a, 1.0, 1.0))
            sigma += diffusion_iho(dd.d(1, 1), t);
        else
            sigma += diffusion_integral_quadrature(dd.a, dd.d, t, 1e-10);
    }
    return {r, sigma};
}

Mat protocol_covariance_with_diffusion(double gamma_x, double t_minus) {
    require(gamma_x >= 0.0, "protocol_covariance_with_diffusion: negative rate");
    require(t_minus >= 0.0, "protocol_covariance_with_diffusion: negative t_minus");
    Mat m_plus = ps::segment_forward(ps::SegmentKind::Qho, pi / 2).m;
    Mat m_minus = ps::segment_forward(ps::SegmentKind::Iho, t_minus).m;

    Mat d_plus = diffusion_qho(gamma_x, pi / 2);
    Mat d_minus = diffusion_iho(gamma_x, t_minus);

    auto sandwich = [](const Mat& s, const Mat& x) { return s * x * s.transpose(); };

    Mat after3 = m_minus;                       // propagates segment-3 output
    Mat after2 = m_minus * m_plus;              // propagates segment-2 output
    Mat after1 = m_minus * m_plus * m_minus;    // propagates segment-1 output

    auto schedule = ps::expansion_schedule(t_minus);
    Mat s_tot = ps::schedule_transform(schedule).m;

    return d_minus + sandwich(after3, d_plus) + sandwich(after2, d_minus) +
           sandwich(after1, d_plus) + sandwich(s_tot, Mat::Identity(2, 2));
}

QubitDensity qubit_dephase(const QubitDensity& rho, double gamma_q_hz,
                           double omega_rads, double t_f, bool strict) {
    require(gamma_q_hz >= 0.0 && t_f >= 0.0, "qubit_dephase: negative rate or time");
    double rate = (strict ? 4.0 : 1.0) * gamma_q_hz / omega_rads;
    double f = std::exp(-rate * t_f);
    QubitDensity out = rho;
    out.m(0, 1) *= f;
    out.m(1, 0) *= f;
    return out;
}

JointQubitDensity qubit_dephase(const JointQubitDensity& rho, double gamma_q_hz,
                                double omega_rads, double t_f, bool strict) {
    require(gamma_q_hz >= 0.0 && t_f >= 0.0, "qubit_dephase: negative rate or time");
    double rate = (strict ? 4.0 : 1.0) * gamma_q_hz / omega_rads;
    JointQubitDensity out = rho;
    for (int a = 0; a < 4; ++a) {
        int j = a >> 1, k = a & 1;
        for (int b = 0; b < 4; ++b) {
            int m = b >> 1, n = b & 1;
            int mismatches = (j != m ? 1 : 0) + (k != n ? 1 : 0);
            if (mismatches > 0) out.m(a, b) *= std::exp(-mismatches * rate * t_f);
        }
    }
    return out;
}

QuasiStatic quasi_static_suppression(double sigma_f_n, const TrapSetup& setup,
                                     double t_minus) {
    require(sigma_f_n >= 0.0, "quasi_static_suppression: negative sigma_f");
    setup.validate();
    double x0 = setup.x0_m();
    double base = 8.0 * x0 * x0 * setup.delta_x * setup.delta_x * sigma_f_n * sigma_f_n /
                  (constants::hbar * constants::hbar * setup.omega_rads * setup.omega_rads);
    double grow = std::exp(t_minus) - 1.0;
    QuasiStatic out;
    out.gamma_f = base * grow * grow;
    out.visibility_factor = std::exp(-out.gamma_f);
    out.gamma_f_published = base * grow;
    return out;
}

double sigma_f_bound(const TrapSetup& setup, double t_minus) {
    setup.validate();
    return constants::hbar * setup.omega_rads * std::exp(-t_minus) /
           (2.0 * std::sqrt(2.0) * setup.x0_m() * setup.delta_x);
}

double gas_decoherence_rate(const GasModel& gas) {
    require(gas.pressure_pa >= 0.0, "gas_decoherence_rate: negative pressure");
    require(gas.radius_m > 0.0 && gas.temperature_k > 0.0 && gas.m_air_kg > 0.0,
            "gas_decoherence_rate: non-positive gas parameters");
    double v_air = std::sqrt(3.0 * constants::boltzmann * gas.temperature_k / gas.m_air_kg);
    return 16.0 * pi * std::sqrt(2.0 * pi / 3.0) * gas.pressure_pa * gas.radius_m *
           gas.radius_m / (gas.m_air_kg * v_air);
}

double pressure_bound(double radius_m, double temperature_k, double m_air_kg,
                      double omega_rads, double t_tot_seconds) {
    require(radius_m > 0.0 && temperature_k > 0.0 && m_air_kg > 0.0 &&
                omega_rads > 0.0 && t_tot_seconds > 0.0,
            "pressure_bound: non-positive inputs");
    double t_dimless = omega_rads * t_tot_seconds;
    return std::sqrt(3.0 * m_air_kg * constants::boltzmann * temperature_k) * t_dimless /
           (16.0 * std::pow(pi, 1.5) * omega_rads * radius_m * radius_m);
}

}  // namespace catlift::dec
