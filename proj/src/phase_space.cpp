#include "catlift/phase_space.hpp"

#include "catlift/constants.hpp"
#include "catlift/detail/bigfloat.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace catlift::ps {

using detail::BigFloat;
using detail::TinyMat;

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

// forward segment map exp(+t Omega H) over any scalar
template <class T>
TinyMat<T> forward_qho(const T& t) {
    TinyMat<T> m(2);
    T c = cos(t), s = sin(t);
    m(0, 0) = c; m(0, 1) = s;
    m(1, 0) = -s; m(1, 1) = c;
    return m;
}

template <class T>
TinyMat<T> forward_iho(const T& t) {
    TinyMat<T> m(2);
    T ch = cosh(t), sh = sinh(t);
    m(0, 0) = ch; m(0, 1) = sh;
    m(1, 0) = sh; m(1, 1) = ch;
    return m;
}

template <class T>
TinyMat<T> forward_segment_t(SegmentKind kind, const T& t) {
    return kind == SegmentKind::Qho ? forward_qho(t) : forward_iho(t);
}

Mat to_eigen(const TinyMat<BigFloat>& m) {
    Mat out(m.n, m.n);
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = 0; j < m.n; ++j)
            out(static_cast<int>(i), static_cast<int>(j)) =
                static_cast<double>(m(i, j));
    return out;
}

}  // namespace

Mat symplectic_form(int modes) {
    require(modes >= 1, "symplectic_form: modes must be >= 1");
    Mat omega = Mat::Zero(2 * modes, 2 * modes);
    for (int k = 0; k < modes; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

SymplecticTransform SymplecticTransform::identity(int modes) {
    return {Mat::Identity(2 * modes, 2 * modes)};
}

double SymplecticTransform::symplectic_defect() const {
    Mat omega = symplectic_form(modes());
    return (m * omega * m.transpose() - omega).cwiseAbs().maxCoeff();
}

double SymplecticTransform::det_defect() const {
    return std::abs(m.determinant() - 1.0);
}

bool SymplecticTransform::is_symplectic(double tol) const {
    return symplectic_defect() <= tol && det_defect() <= tol;
}

SymplecticTransform SymplecticTransform::inverse() const {
    Mat omega = symplectic_form(modes());
    return {-omega * m.transpose() * omega};
}

double CovarianceMatrix::symmetry_defect() const {
    return (m - m.transpose()).cwiseAbs().maxCoeff();
}

double CovarianceMatrix::min_uncertainty_eigenvalue() const {
    const int n = static_cast<int>(m.rows());
    Eigen::MatrixXcd h = m.cast<std::complex<double>>();
    h += std::complex<double>(0.0, 1.0) * symplectic_form(n / 2).cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    return es.eigenvalues().minCoeff();
}

std::vector<double> CovarianceMatrix::symplectic_eigenvalues() const {
    const int n = static_cast<int>(m.rows()) / 2;
    Eigen::MatrixXcd iws = std::complex<double>(0.0, 1.0) *
                           (symplectic_form(n) * m).cast<std::complex<double>>();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(iws);
    std::vector<double> nu;
    for (int i = 0; i < 2 * n; ++i) {
        double v = es.eigenvalues()(i).real();
        if (v > 0.0) nu.push_back(v);
    }
    std::sort(nu.begin(), nu.end());
    return nu;
}

void CovarianceMatrix::validate(double sym_tol, double psd_tol) const {
    double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (symmetry_defect() > sym_tol * scale)
        throw std::invalid_argument("CovarianceMatrix: not symmetric");
    if (min_uncertainty_eigenvalue() < -psd_tol * scale)
        throw std::invalid_argument("CovarianceMatrix: uncertainty relation violated");
}

Vec QuadraticHamiltonian::equilibrium() const {
    if (linear.size() == 0 || linear.isZero(0.0)) return Vec::Zero(h.rows());
    Eigen::FullPivLU<Mat> lu(h);
    if (!lu.isInvertible())
        throw std::invalid_argument("QuadraticHamiltonian: singular H has no equilibrium");
    return -lu.solve(linear);
}

QuadraticHamiltonian hamiltonian_qho(double g) {
    QuadraticHamiltonian out;
    out.h = Mat::Identity(2, 2);
    out.linear = Vec::Zero(2);
    out.linear(0) = -g;
    out.kind = g == 0.0 ? HamiltonianKind::Qho : HamiltonianKind::QhoForce;
    return out;
}

QuadraticHamiltonian hamiltonian_iho(double g) {
    QuadraticHamiltonian out;
    out.h = Mat::Identity(2, 2);
    out.h(0, 0) = -1.0;
    out.linear = Vec::Zero(2);
    out.linear(0) = -g;
    out.kind = g == 0.0 ? HamiltonianKind::Iho : HamiltonianKind::IhoForce;
    return out;
}

QuadraticHamiltonian hamiltonian_iho_scaled(double freq_ratio, double g) {
    require(freq_ratio > 0.0, "hamiltonian_iho_scaled: frequency ratio must be positive");
    QuadraticHamiltonian out = hamiltonian_iho(g);
    out.h(0, 0) = -freq_ratio * freq_ratio;
    return out;
}

GaussianUnitary GaussianUnitary::identity(int modes) {
    return {Vec::Zero(2 * modes), SymplecticTransform::identity(modes), 0.0};
}

SymplecticTransform symplectic_segment(SegmentKind kind, double t) {
    require(t >= 0.0, "symplectic_segment: negative duration");
    Mat m(2, 2);
    if (kind == SegmentKind::Qho) {
        double c = std::cos(t), s = std::sin(t);
        m << c, -s, s, c;
    } else {
        double ch = std::cosh(t), sh = std::sinh(t);
        m << ch, -sh, -sh, ch;
    }
    return {m};
}

SymplecticTransform segment_forward(SegmentKind kind, double t) {
    require(t >= 0.0, "segment_forward: negative duration");
    Mat m(2, 2);
    if (kind == SegmentKind::Qho) {
        double c = std::cos(t), s = std::sin(t);
        m << c, s, -s, c;
    } else {
        double ch = std::cosh(t), sh = std::sinh(t);
        m << ch, sh, sh, ch;
    }
    return {m};
}

SymplecticTransform compose(std::span<const SymplecticTransform> transforms,
                            int modes_if_empty) {
    if (transforms.empty()) return SymplecticTransform::identity(modes_if_empty);
    Mat acc = transforms.front().m;
    for (std::size_t i = 1; i < transforms.size(); ++i) {
        require(transforms[i].m.rows() == acc.rows(), "compose: dimension mismatch");
        acc = transforms[i].m * acc;
    }
    return {acc};
}

SymplecticTransform matrix_exp_symplectic(const QuadraticHamiltonian& ham, double t) {
    const Mat& h = ham.h;
    require(h.rows() == h.cols(), "matrix_exp_symplectic: H must be square");
    double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    require((h - h.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale,
            "matrix_exp_symplectic: H must be symmetric");

    // closed forms for the labeled one-mode kinds (valid for signed t)
    if (h.rows() == 2 && h(0, 1) == 0.0 && h(1, 0) == 0.0 && h(1, 1) == 1.0) {
        Mat m(2, 2);
        if (h(0, 0) == 1.0) {
            double c = std::cos(t), s = std::sin(t);
            m << c, -s, s, c;
            return {m};
        }
        if (h(0, 0) == -1.0) {
            double ch = std::cosh(t), sh = std::sinh(t);
            m << ch, -sh, -sh, ch;
            return {m};
        }
    }
    Mat gen = -t * symplectic_form(static_cast<int>(h.rows()) / 2) * h;
    TinyMat<double> tm(static_cast<std::size_t>(gen.rows()));
    for (int i = 0; i < gen.rows(); ++i)
        for (int j = 0; j < gen.cols(); ++j) tm(i, j) = gen(i, j);
    Mat out(gen.rows(), gen.cols());
    TinyMat<double> e = detail::expm(tm);
    for (int i = 0; i < gen.rows(); ++i)
        for (int j = 0; j < gen.cols(); ++j) out(i, j) = e(i, j);
    SymplecticTransform result{out};
    double norm = std::max(1.0, out.cwiseAbs().maxCoeff());
    if (result.symplectic_defect() > 1e-12 * norm * norm)
        throw std::runtime_error("matrix_exp_symplectic: result failed symplectic check");
    return result;
}

std::pair<Vec, Mat> evolve_gaussian(const Vec& r, const Mat& sigma,
                                    const SymplecticTransform& s) {
    require(r.size() == s.m.rows(), "evolve_gaussian: moment dimension mismatch");
    require(sigma.rows() == s.m.rows() && sigma.cols() == s.m.cols(),
            "evolve_gaussian: covariance dimension mismatch");
    Vec r_out = s.m * r;
    Mat sigma_out = s.m * sigma * s.m.transpose();
    CovarianceMatrix{sigma_out}.validate(1e-9, 1e-8);
    return {r_out, sigma_out};
}

std::pair<Vec, double> displacement_compose(const Vec& r1, const Vec& r2) {
    require(r1.size() == r2.size(), "displacement_compose: dimension mismatch");
    Mat omega = symplectic_form(static_cast<int>(r1.size()) / 2);
    double phase = -0.5 * r1.dot(omega * r2);
    return {r1 + r2, phase};
}

GaussianUnitary gaussian_unitary_compose(std::span<const GaussianUnitary> segments) {
    require(!segments.empty(), "gaussian_unitary_compose: empty list");
    const int dim = static_cast<int>(segments.front().displacement.size());
    Mat omega = symplectic_form(dim / 2);
    Vec d = Vec::Zero(dim);
    Mat s = Mat::Identity(dim, dim);
    bool track_phase = true;
    double phase = 0.0;
    for (const auto& u : segments) {
        require(u.displacement.size() == dim && u.symplectic.m.rows() == dim,
                "gaussian_unitary_compose: dimension mismatch");
        Vec moved = u.symplectic.m * d;
        if (u.phase.has_value() && track_phase)
            phase += *u.phase - 0.5 * u.displacement.dot(omega * moved);
        else
            track_phase = false;
        d = u.displacement + moved;
        s = u.symplectic.m * s;
    }
    GaussianUnitary out{d, SymplecticTransform{s}, std::nullopt};
    if (track_phase) out.phase = phase;
    return out;
}

std::complex<double> characteristic_fn(const Vec& r, const Mat& sigma, const Vec& rbar) {
    Mat omega = symplectic_form(static_cast<int>(r.size()) / 2);
    Vec w = omega * rbar;             // Omega rbar
    double quad = -0.25 * w.dot(sigma * w);
    double lin = w.dot(r);            // rbar^T Omega^T r = (Omega rbar)^T r
    return std::exp(std::complex<double>(quad, lin));
}

double wigner_fn(const Vec& r, const Mat& sigma, const Vec& rbar) {
    const int n = static_cast<int>(r.size()) / 2;
    Eigen::LLT<Mat> llt(sigma);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("wigner_fn: covariance not positive definite");
    Vec diff = rbar - r;
    double quad = diff.dot(llt.solve(diff));
    double det = 1.0;
    Mat l = llt.matrixL();
    for (int i = 0; i < l.rows(); ++i) det *= l(i, i);
    det *= det;
    return std::exp(-quad) / (std::pow(constants::pi, n) * std::sqrt(det));
}

double wigner_cat(const Vec& r_plus, const Mat& sigma_plus,
                  const Vec& r_minus, const Mat& sigma_minus, const Vec& rbar) {
    return 0.5 * (wigner_fn(r_plus, sigma_plus, rbar) +
                  wigner_fn(r_minus, sigma_minus, rbar));
}

FourthMoments higher_moments(const Vec& r, const Mat& sigma) {
    require(r.size() == 2 && sigma.rows() == 2, "higher_moments: one mode only");
    const double x = r(0), p = r(1);
    const double sxx = sigma(0, 0), spp = sigma(1, 1), sxp = sigma(0, 1);
    FourthMoments out;
    out.x3 = x * x * x + 1.5 * sxx * x;
    out.x4 = x * x * x * x + 3.0 * sxx * x * x + 0.75 * sxx * sxx;
    out.p4 = p * p * p * p + 3.0 * spp * p * p + 0.75 * spp * spp;
    out.xxpp_sym = sxp * sxp + 0.5 * sxx * spp + spp * x * x + sxx * p * p +
                   4.0 * sxp * x * p + 2.0 * x * x * p * p;
    return out;
}

std::vector<ScheduleSegment> expansion_schedule(double t_minus) {
    require(t_minus >= 0.0, "expansion_schedule: negative t_minus");
    const double tp = constants::pi / 2;
    return {{SegmentKind::Qho, tp},
            {SegmentKind::Iho, t_minus},
            {SegmentKind::Qho, tp},
            {SegmentKind::Iho, t_minus}};
}

SymplecticTransform schedule_transform(std::span<const ScheduleSegment> schedule) {
    TinyMat<BigFloat> acc = TinyMat<BigFloat>::identity(2);
    for (const auto& seg : schedule) {
        require(seg.duration >= 0.0, "schedule_transform: negative duration");
        acc = forward_segment_t(seg.kind, detail::promote_duration(seg.duration)) * acc;
    }
    return {to_eigen(acc)};
}

SymplecticTransform schedule_prefix_transform(std::span<const ScheduleSegment> schedule,
                                              double t) {
    require(t >= 0.0, "schedule_prefix_transform: negative time");
    TinyMat<BigFloat> acc = TinyMat<BigFloat>::identity(2);
    double elapsed = 0.0;
    for (const auto& seg : schedule) {
        if (t <= elapsed) break;
        double span = std::min(seg.duration, t - elapsed);
        acc = forward_segment_t(seg.kind, span == seg.duration
                                           ? detail::promote_duration(span)
                                           : BigFloat(span)) * acc;
        elapsed += seg.duration;
    }
    double total = 0.0;
    for (const auto& seg : schedule) total += seg.duration;
    require(t <= total * (1.0 + 1e-12) + 1e-12,
            "schedule_prefix_transform: time past schedule end");
    return {to_eigen(acc)};
}

GaussianUnitary schedule_force_unitary(std::span<const ScheduleSegment> schedule,
                                       double g) {
    TinyMat<BigFloat> s = TinyMat<BigFloat>::identity(2);
    std::vector<BigFloat> d{BigFloat(0), BigFloat(0)};
    for (const auto& seg : schedule) {
        require(seg.duration >= 0.0, "schedule_force_unitary: negative duration");
        TinyMat<BigFloat> m = forward_segment_t(seg.kind, detail::promote_duration(seg.duration));
        // equilibrium (g,0) for the driven QHO, (-g,0) for the driven IHO
        BigFloat cx = seg.kind == SegmentKind::Qho ? BigFloat(g) : BigFloat(-g);
        std::vector<BigFloat> shift{cx - (m(0, 0) * cx), -(m(1, 0) * cx)};
        d = m * d;
        d[0] += shift[0];
        d[1] += shift[1];
        s = m * s;
    }
    Vec dd(2);
    dd << static_cast<double>(d[0]), static_cast<double>(d[1]);
    return {dd, SymplecticTransform{to_eigen(s)}, std::nullopt};
}

OracleTrajectory evolve_numeric_oracle(std::span<const HamiltonianSegment> schedule,
                                       const Vec& r0, const Mat& sigma0, int steps) {
    require(steps >= 1, "evolve_numeric_oracle: steps must be >= 1");
    double total = 0.0;
    for (const auto& seg : schedule) {
        require(seg.duration >= 0.0, "evolve_numeric_oracle: negative duration");
        total += seg.duration;
    }
    OracleTrajectory out;
    out.times.push_back(0.0);
    out.moments.push_back(r0);
    out.covariances.push_back(sigma0);

    Vec r = r0;
    Mat sigma = sigma0;
    double t_now = 0.0;
    const int dim = static_cast<int>(r0.size());
    Mat omega = symplectic_form(dim / 2);

    for (const auto& seg : schedule) {
        if (seg.duration == 0.0) continue;
        int n = std::max(1, static_cast<int>(std::llround(steps * seg.duration / total)));
        double h = seg.duration / n;
        Mat gen = h * omega * seg.h.h;
        TinyMat<double> tm(static_cast<std::size_t>(dim));
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) tm(i, j) = gen(i, j);
        TinyMat<double> em = detail::expm(tm);
        Mat step(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) step(i, j) = em(i, j);
        bool driven = seg.h.linear.size() != 0 && !seg.h.linear.isZero(0.0);
        Vec center = driven ? seg.h.equilibrium() : Vec::Zero(dim);
        for (int k = 0; k < n; ++k) {
            r = driven ? Vec(center + step * (r - center)) : Vec(step * r);
            sigma = step * sigma * step.transpose();
            t_now += h;
            out.times.push_back(t_now);
            out.moments.push_back(r);
            out.covariances.push_back(sigma);
        }
    }
    return out;
}

}  // namespace catlift::ps
