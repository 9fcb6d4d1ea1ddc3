#include "catlift/gie.hpp"

#include "catlift/constants.hpp"
#include "catlift/detail/bigfloat.hpp"
#include "catlift/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace catlift::gie {

using detail::BigFloat;
using detail::TinyMat;

namespace {

constexpr double pi = constants::pi;

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

TinyMat<BigFloat> omega4() {
    TinyMat<BigFloat> w(4);
    w(0, 1) = 1; w(1, 0) = -1;
    w(2, 3) = 1; w(3, 2) = -1;
    return w;
}

// 0.5 r^T H r with x-diagonal +-(1 -+ g), cross-coupling g, unit p-diagonal
TinyMat<BigFloat> grav_h(const BigFloat& g, bool plus) {
    TinyMat<BigFloat> h(4);
    BigFloat diag = plus ? BigFloat(1) - g : -(BigFloat(1) + g);
    h(0, 0) = h(2, 2) = diag;
    h(1, 1) = h(3, 3) = 1;
    h(0, 2) = h(2, 0) = g;
    return h;
}

std::vector<BigFloat> equilibrium_shift(const TinyMat<BigFloat>& h, const BigFloat& f) {
    std::vector<BigFloat> rbar{-f, BigFloat(0), f, BigFloat(0)};  // solves H r = -rbar
    return detail::solve(h, rbar);
}

BigFloat sym_inner(const std::vector<BigFloat>& u, const std::vector<BigFloat>& v) {
    // u^T Omega v for the 4x4 block form
    return u[0] * v[1] - u[1] * v[0] + u[2] * v[3] - u[3] * v[2];
}

std::vector<BigFloat> neg(std::vector<BigFloat> v) {
    for (auto& x : v) x = -x;
    return v;
}

struct AffineMap {
    TinyMat<BigFloat> s;
    std::vector<BigFloat> d;
};

AffineMap grav_segment(const TinyMat<BigFloat>& h, const BigFloat& f, double t) {
    TinyMat<BigFloat> gen = omega4() * h;
    const BigFloat tb = detail::promote_duration(t);
    for (auto& v : gen.a) v *= tb;
    TinyMat<BigFloat> m = detail::expm(gen, 48);
    std::vector<BigFloat> center = equilibrium_shift(h, f);
    std::vector<BigFloat> moved = m * center;
    std::vector<BigFloat> d(4);
    for (int i = 0; i < 4; ++i) d[i] = center[i] - moved[i];
    return {m, d};
}

Eigen::Matrix4d to_eigen4(const TinyMat<BigFloat>& m) {
    Eigen::Matrix4d out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out(i, j) = static_cast<double>(m(i, j));
    return out;
}

double mod_two_pi(const BigFloat& x) {
    static const BigFloat two_pi = 8 * atan(BigFloat(1));
    BigFloat r = fmod(x, two_pi);
    return static_cast<double>(r);
}

}  // namespace

GravCouplings grav_couplings(const TrapSetup& setup) {
    setup.validate();
    require(setup.distance_m.has_value() && *setup.distance_m > 0.0,
            "grav_couplings: inter-trap distance required");
    const double d = *setup.distance_m;
    const double x0 = setup.x0_m();
    const double gm = constants::gravitation * setup.mass_kg /
                      (setup.omega_rads * setup.omega_rads * d * d * d);
    GravCouplings c;
    c.theta_rad = setup.theta_rad;
    c.f_g = gm * (d / (std::sqrt(2.0) * x0)) * std::cos(setup.theta_rad);
    c.g_g = 0.5 * gm * (1.0 + 3.0 * std::cos(2.0 * setup.theta_rad));
    c.separation_ok = d > 50.0 * x0 * setup.delta_x;
    return c;
}

GravHamiltonians grav_hamiltonians(const GravCouplings& c) {
    require(std::abs(c.g_g) < 0.5, "grav_hamiltonians: |g_G| must be < 1/2");
    GravHamiltonians out;
    auto fill = [&](bool plus) {
        QuadraticHamiltonian h;
        h.h = to_eigen4(grav_h(BigFloat(c.g_g), plus));
        h.linear = Vec::Zero(4);
        h.linear(0) = c.f_g;
        h.linear(2) = -c.f_g;
        h.kind = plus ? ps::HamiltonianKind::GravQho : ps::HamiltonianKind::GravIho;
        return h;
    };
    out.plus = fill(true);
    out.minus = fill(false);
    out.shift_plus = out.plus.equilibrium();
    out.shift_minus = out.minus.equilibrium();
    return out;
}

void JointQubitDensity::validate(double tol) const {
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol)
        throw std::invalid_argument("JointQubitDensity: not Hermitian");
    if (std::abs(m.trace().real() - 1.0) > tol || std::abs(m.trace().imag()) > tol)
        throw std::invalid_argument("JointQubitDensity: trace != 1");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m);
    if (es.eigenvalues().minCoeff() < -tol)
        throw std::invalid_argument("JointQubitDensity: not positive semidefinite");
}

JointQubitDensity joint_qubit_density(const Vec& r0_mass, const GaussianUnitary& total) {
    require(r0_mass.size() == 2, "joint_qubit_density: per-mass vector expected");
    require(total.symplectic.m.rows() == 4, "joint_qubit_density: two-mode unitary expected");
    const Mat& s = total.symplectic.m;
    Mat sinv = total.symplectic.inverse().m;
    Mat omega = ps::symplectic_form(2);
    const Vec& d = total.displacement;

    auto branch = [&](int j, int k) {
        Vec v(4);
        v << j * r0_mass(0), j * r0_mass(1), k * r0_mass(0), k * r0_mass(1);
        return v;
    };
    const int signs[4] = {1, 1, -1, -1};
    const int signs2[4] = {1, -1, 1, -1};

    JointQubitDensity rho;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            Vec va = branch(signs[a], signs2[a]);
            Vec vb = branch(signs[b], signs2[b]);
            std::vector<Vec> fold{-(s * vb), -d, -vb, va, d, s * va};
            double theta = 0.0;
            for (int i = 0; i < 6; ++i)
                for (int j = i + 1; j < 6; ++j)
                    theta += fold[i].dot(omega * fold[j]);
            theta *= -0.5;
            Vec diff = va - vb;
            Vec hum = diff + sinv * diff;
            double expo = 0.25 * hum.squaredNorm();
            rho.m(a, b) = 0.25 * std::exp(std::complex<double>(-expo, theta));
        }
    }
    return rho;
}

struct GiePipeline::Impl {
    BigFloat g, f;
    TinyMat<BigFloat> h_plus, h_minus;
    AffineMap qho_segment;  // fixed duration pi/2

    explicit Impl(const GravCouplings& c)
        : g(c.g_g), f(c.f_g), h_plus(grav_h(g, true)), h_minus(grav_h(g, false)),
          qho_segment(grav_segment(h_plus, f, pi / 2)) {
        require(std::abs(c.g_g) < 0.5, "GiePipeline: |g_G| must be < 1/2");
    }

    AffineMap total(double t_minus) const {
        AffineMap iho = grav_segment(h_minus, f, t_minus);
        AffineMap acc{TinyMat<BigFloat>::identity(4), std::vector<BigFloat>(4, BigFloat(0))};
        const AffineMap* order[4] = {&qho_segment, &iho, &qho_segment, &iho};
        for (const AffineMap* segp : order) {
            acc.d = segp->s * acc.d;
            for (int i = 0; i < 4; ++i) acc.d[i] += segp->d[i];
            acc.s = segp->s * acc.s;
        }
        return acc;
    }

    JointQubitDensity density(double delta_x, double t_minus) const {
        AffineMap u = total(t_minus);
        // symplectic inverse -Omega S^T Omega
        TinyMat<BigFloat> st(4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) st(i, j) = u.s(j, i);
        TinyMat<BigFloat> w = omega4();
        TinyMat<BigFloat> sinv = w * st * w;
        for (auto& v : sinv.a) v = -v;

        const BigFloat dx(delta_x);
        auto branch = [&](int j, int k) {
            return std::vector<BigFloat>{j * dx, BigFloat(0), k * dx, BigFloat(0)};
        };
        const int sj[4] = {1, 1, -1, -1};
        const int sk[4] = {1, -1, 1, -1};

        JointQubitDensity rho;
        for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 4; ++b) {
                auto va = branch(sj[a], sk[a]);
                auto vb = branch(sj[b], sk[b]);
                std::vector<std::vector<BigFloat>> fold{
                    neg(u.s * vb), neg(u.d), neg(vb), va, u.d, u.s * va};
                BigFloat theta(0);
                for (int i = 0; i < 6; ++i)
                    for (int j = i + 1; j < 6; ++j)
                        theta += sym_inner(fold[i], fold[j]);
                theta *= BigFloat(-0.5);
                std::vector<BigFloat> diff(4), hum(4);
                for (int i = 0; i < 4; ++i) diff[i] = va[i] - vb[i];
                hum = sinv * diff;
                BigFloat expo(0);
                for (int i = 0; i < 4; ++i) {
                    hum[i] += diff[i];
                    expo += hum[i] * hum[i];
                }
                expo /= 4;
                double e = static_cast<double>(expo);
                double th = mod_two_pi(theta);
                rho.m(a, b) = 0.25 * std::exp(std::complex<double>(-e, th));
            }
        }
        return rho;
    }
};

GiePipeline::GiePipeline(const GravCouplings& c) : impl_(std::make_unique<Impl>(c)) {}
GiePipeline::~GiePipeline() = default;
GiePipeline::GiePipeline(GiePipeline&&) noexcept = default;
GiePipeline& GiePipeline::operator=(GiePipeline&&) noexcept = default;

GaussianUnitary GiePipeline::total_unitary(double t_minus) const {
    AffineMap u = impl_->total(t_minus);
    Vec d(4);
    for (int i = 0; i < 4; ++i) d(i) = static_cast<double>(u.d[i]);
    return {d, ps::SymplecticTransform{to_eigen4(u.s)}, std::nullopt};
}

JointQubitDensity GiePipeline::density(double delta_x, double t_minus) const {
    return impl_->density(delta_x, t_minus);
}

GaussianUnitary gie_total_unitary(const GravCouplings& c, double t_minus) {
    return GiePipeline(c).total_unitary(t_minus);
}

JointQubitDensity gie_density(const GravCouplings& c, double delta_x, double t_minus) {
    return GiePipeline(c).density(delta_x, t_minus);
}

Eigen::Matrix4cd partial_transpose_second(const Eigen::Matrix4cd& rho) {
    Eigen::Matrix4cd out;
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
            for (int m = 0; m < 2; ++m)
                for (int n = 0; n < 2; ++n)
                    out(2 * j + k, 2 * m + n) = rho(2 * j + n, 2 * m + k);
    return out;
}

PptResult ppt_negativity(const JointQubitDensity& rho) {
    if ((rho.m - rho.m.adjoint()).cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument("ppt_negativity: input not Hermitian");
    Eigen::Matrix4cd pt = partial_transpose_second(rho.m);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(pt);
    int idx = 0;
    es.eigenvalues().minCoeff(&idx);
    return {es.eigenvalues()(idx), es.eigenvectors().col(idx)};
}

Eigen::Matrix4cd witness_matrix(const Eigen::Vector4cd& eigvec) {
    double n = eigvec.norm();
    if (n <= 0.0) throw std::invalid_argument("witness_matrix: zero eigenvector");
    Eigen::Vector4cd v = eigvec / n;
    return partial_transpose_second(v * v.adjoint());
}

GieResult gie_result(const TrapSetup& setup, double t_minus) {
    GravCouplings c = grav_couplings(setup);
    JointQubitDensity rho = gie_density(c, setup.delta_x, t_minus);
    PptResult ppt = ppt_negativity(rho);
    GieResult out;
    out.lambda_pt = ppt.lambda;
    out.witness = witness_matrix(ppt.eigvec);
    out.t_minus = t_minus;
    out.couplings = c;
    out.truncation_ratio =
        itf::max_superposition(setup, t_minus).meters / *setup.distance_m;
    return out;
}

OptimalTime optimal_time_gie(const TrapSetup& setup, double t_lo, double t_hi,
                             double grid_step, const DensityPost& post) {
    require(t_hi > t_lo && t_lo >= 0.0, "optimal_time_gie: empty range");
    require(t_hi <= 8.0 * pi + 1e-9, "optimal_time_gie: range beyond 8 pi");
    require(grid_step > 0.0, "optimal_time_gie: grid step must be positive");

    GravCouplings c = grav_couplings(setup);
    GiePipeline pipe(c);
    auto lambda_at = [&](double t) {
        JointQubitDensity rho = pipe.density(setup.delta_x, t);
        if (post) rho = post(rho, 2.0 * (pi / 2 + t));
        return ppt_negativity(rho).lambda;
    };

    const std::size_t n = static_cast<std::size_t>(std::floor((t_hi - t_lo) / grid_step)) + 1;
    std::vector<double> ts(n), lams(n);
    for (std::size_t i = 0; i < n; ++i) ts[i] = t_lo + static_cast<double>(i) * grid_step;
    parallel_for(n, [&](std::size_t i) { lams[i] = lambda_at(ts[i]); });

    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (lams[i] < lams[best]) best = i;  // strict: ties keep smaller t

    // golden-section refinement on the bracketing interval
    double a = ts[best > 0 ? best - 1 : best];
    double b = ts[best + 1 < n ? best + 1 : best];
    if (a == b) return {ts[best], lams[best]};
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = lambda_at(x1), f2 = lambda_at(x2);
    for (int it = 0; it < 60 && (b - a) > 1e-10; ++it) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - gr * (b - a);
            f1 = lambda_at(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + gr * (b - a);
            f2 = lambda_at(x2);
        }
    }
    double t_best = 0.5 * (a + b);
    return {t_best, lambda_at(t_best)};
}

}  // namespace catlift::gie
