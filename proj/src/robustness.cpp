#include "catlift/robustness.hpp"

#include "catlift/constants.hpp"
#include "catlift/parallel.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace catlift::rob {

namespace {

constexpr double pi = constants::pi;

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

struct Mat2 {
    double a, b, c, d;  // [[a, b], [c, d]]

    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
};

Mat2 rot(double t) {  // forward QHO map
    double cs = std::cos(t), sn = std::sin(t);
    return {cs, sn, -sn, cs};
}

Mat2 hyp(double t) {  // forward IHO map
    double ch = std::cosh(t), sh = std::sinh(t);
    return {ch, sh, sh, ch};
}

// exact off-diagonal magnitude for one jitter draw
double draw_offdiag(double dx, double tm, double e1, double e3, double e24) {
    Mat2 s = hyp(tm * (1.0 + e24)) * rot(0.5 * pi * (1.0 + e3)) * hyp(tm) *
             rot(0.5 * pi * (1.0 + e1));
    // symplectic inverse of [[a,b],[c,d]] is [[d,-b],[-c,a]]
    double vx = dx + (s.d * dx);
    double vp = -(s.c) * dx;
    double quad = (vx * vx + vp * vp);
    return std::exp(-quad);
}

}  // namespace

double sudden_variance(double delta_x, double t_minus, double f_avg) {
    double dx2 = delta_x * delta_x;
    double fp = f_avg + 1.0, fm = f_avg - 1.0;
    return 0.25 * (2.0 * dx2 + 1.0) * (fp * fp * std::cosh(4.0 * t_minus) + fm * fm) +
           (1.0 - f_avg * f_avg) * dx2 * std::cosh(2.0 * t_minus);
}

double sudden_bound_seconds(double delta_x, double t_minus, double omega_rads) {
    require(omega_rads > 0.0, "sudden_bound_seconds: omega must be positive");
    return 2.0 * std::sqrt(2.0) * std::exp(-2.0 * t_minus) /
           (std::sqrt(2.0 * delta_x * delta_x + 1.0) * omega_rads);
}

HumptyAnalytic humpty_visibility_analytic(double delta_x, double t_minus,
                                          double sigma_eps) {
    require(sigma_eps >= 0.0, "humpty_visibility_analytic: negative sigma_eps");
    HumptyAnalytic out;
    out.sigma_in_range = sigma_eps <= 0.1;
    if (sigma_eps == 0.0) {
        out.visibility = out.leading_form = out.published_form = 1.0;
        return out;
    }
    const double s = delta_x * delta_x * sigma_eps * sigma_eps;
    const double q = 0.25 * pi * pi;  // variance scale of a rotation-segment error
    const double sh = std::sinh(2.0 * t_minus), ch = std::cosh(2.0 * t_minus);
    const double var_u = s * q * sh * sh;
    const double var_w = s * (2.0 * t_minus * t_minus + q + q * ch * ch);
    const double cov = s * q * sh * ch;
    double det = (1.0 + 2.0 * var_u) * (1.0 + 2.0 * var_w) - 4.0 * cov * cov;
    out.visibility = 1.0 / std::sqrt(det);

    double lead_den = 8.0 + s * (pi + 16.0 * t_minus);
    out.leading_form = 8.0 * std::exp(-2.0 * t_minus) /
                       (pi * delta_x * sigma_eps * std::sqrt(lead_den));

    double poly = 16.0 * t_minus * t_minus + pi * pi;
    double dpub = s * poly * (8.0 - pi * pi * s) +
                  pi * pi * s * std::cosh(4.0 * t_minus) * (s * poly + 8.0) + 32.0;
    out.published_form = 4.0 * std::sqrt(2.0) / std::sqrt(dpub);
    return out;
}

HumptyMc humpty_visibility_mc(double delta_x, double t_minus, double sigma_eps,
                              std::int64_t samples, std::uint64_t seed,
                              double mean_eps) {
    require(samples >= 1000, "humpty_visibility_mc: at least 1000 samples");
    require(sigma_eps >= 0.0, "humpty_visibility_mc: negative sigma_eps");
    if (sigma_eps == 0.0 && mean_eps == 0.0) return {1.0, 0.0};

    constexpr std::int64_t chunk = 4096;
    const std::int64_t n_chunks = (samples + chunk - 1) / chunk;
    std::vector<double> sums(n_chunks, 0.0), sq_sums(n_chunks, 0.0);

    parallel_for(static_cast<std::size_t>(n_chunks), [&](std::size_t ci) {
        std::int64_t lo = static_cast<std::int64_t>(ci) * chunk;
        std::int64_t hi = std::min(samples, lo + chunk);
        std::seed_seq sseq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                           static_cast<std::uint32_t>(seed >> 32),
                           static_cast<std::uint32_t>(ci)};
        std::mt19937_64 rng(sseq);
        std::normal_distribution<double> unit(0.0, 1.0);
        double acc = 0.0, acc2 = 0.0;
        for (std::int64_t i = lo; i < hi; ++i) {
            double e1 = mean_eps + sigma_eps * unit(rng);
            double e3 = mean_eps + sigma_eps * unit(rng);
            double e24 = sigma_eps * std::sqrt(2.0) * unit(rng);
            double v = draw_offdiag(delta_x, t_minus, e1, e3, e24);
            acc += v;
            acc2 += v * v;
        }
        sums[ci] = acc;
        sq_sums[ci] = acc2;
    });

    // pairwise reduction in fixed chunk order
    auto reduce = [](std::vector<double> xs) {
        while (xs.size() > 1) {
            std::vector<double> next((xs.size() + 1) / 2, 0.0);
            for (std::size_t i = 0; i < xs.size(); i += 2)
                next[i / 2] = i + 1 < xs.size() ? xs[i] + xs[i + 1] : xs[i];
            xs = std::move(next);
        }
        return xs.empty() ? 0.0 : xs[0];
    };
    double total = reduce(sums);
    double total_sq = reduce(sq_sums);

    double mean = total / static_cast<double>(samples);
    double var = std::max(0.0, total_sq / static_cast<double>(samples) - mean * mean);
    double se = std::sqrt(var / static_cast<double>(samples));
    return {mean, se};
}

SigmaEpsBound sigma_eps_bound(double delta_x, double t_minus, double omega_rads) {
    require(omega_rads > 0.0, "sigma_eps_bound: omega must be positive");
    if (delta_x == 0.0) {
        double inf = std::numeric_limits<double>::infinity();
        return {inf, inf};
    }
    require(delta_x > 0.0, "sigma_eps_bound: negative delta_x");
    double b = 4.0 * std::exp(-2.0 * t_minus) / (delta_x * std::sqrt(pi * (pi - 1.0)));
    return {b, b / omega_rads};
}

}  // namespace catlift::rob
