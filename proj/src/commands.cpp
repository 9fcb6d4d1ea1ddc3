#include "catlift/commands.hpp"

#include "catlift/constants.hpp"
#include "catlift/decoherence.hpp"
#include "catlift/gie.hpp"
#include "catlift/interferometer.hpp"
#include "catlift/parallel.hpp"
#include "catlift/robustness.hpp"

#include <cmath>
#include <stdexcept>

namespace catlift::io {

namespace {

constexpr double pi = constants::pi;

std::vector<double> linspace(double lo, double hi, int points) {
    if (points < 1) throw std::runtime_error("grid needs at least one point");
    std::vector<double> out(points);
    if (points == 1) {
        out[0] = lo;
        return out;
    }
    double step = (hi - lo) / (points - 1);
    for (int i = 0; i < points; ++i) out[i] = lo + i * step;
    out.back() = hi;
    return out;
}

}  // namespace

Table cmd_table(const ScenarioConfig& cfg) {
    Table t;
    t.columns = {"setup",
                 "mass_kg",
                 "omega_rads",
                 "delta_x",
                 "distance_m",
                 "radius_m",
                 "x0_m",
                 "initial_superposition_m",
                 "g_g",
                 "f_g",
                 "omega_t_o",
                 "t_o_s",
                 "t_tot_s",
                 "experiment_frequency_hz",
                 "lambda_pt_at_t_o",
                 "max_superposition_ul",
                 "max_superposition_m",
                 "decoherence_rate_bound_hz",
                 "pressure_bound_pa",
                 "sigma_f_bound_n",
                 "sudden_dt_bound_s",
                 "sigma_eps_bound_ul",
                 "sigma_eps_bound_s",
                 "truncation_ratio"};
    for (const auto& [name, setup] : cfg.setups) {
        if (!setup.distance_m)
            throw ConfigError("cmd_table: setup '" + name + "' needs distance_m");
        if (!setup.radius_m)
            throw ConfigError("cmd_table: setup '" + name + "' needs radius_m");
        gie::OptimalTime opt = gie::optimal_time_gie(setup, cfg.run.gie_t_lo,
                                                     cfg.run.gie_t_hi,
                                                     cfg.run.gie_grid_step);
        gie::GravCouplings c = gie::grav_couplings(setup);
        const double x0 = setup.x0_m();
        const double t_tot_s = (3.0 * pi + 2.0 * opt.t_o) / setup.omega_rads;
        itf::Superposition sup = itf::max_superposition(setup, opt.t_o);
        double temperature = cfg.noise.gas.temperature_k > 0.0
                                 ? cfg.noise.gas.temperature_k
                                 : 1.0;
        t.add_row({name,
                   setup.mass_kg,
                   setup.omega_rads,
                   setup.delta_x,
                   *setup.distance_m,
                   *setup.radius_m,
                   x0,
                   x0 * setup.delta_x,
                   c.g_g,
                   c.f_g,
                   opt.t_o,
                   opt.t_o / setup.omega_rads,
                   t_tot_s,
                   1.0 / t_tot_s,
                   opt.lambda_pt,
                   sup.dimensionless,
                   sup.meters,
                   1.0 / t_tot_s,
                   dec::pressure_bound(*setup.radius_m, temperature,
                                       cfg.noise.gas.m_air_kg, setup.omega_rads,
                                       t_tot_s),
                   dec::sigma_f_bound(setup, opt.t_o),
                   rob::sudden_bound_seconds(setup.delta_x, opt.t_o, setup.omega_rads),
                   rob::sigma_eps_bound(setup.delta_x, opt.t_o, setup.omega_rads)
                       .dimensionless,
                   rob::sigma_eps_bound(setup.delta_x, opt.t_o, setup.omega_rads).seconds,
                   sup.meters / *setup.distance_m});
    }
    return t;
}

Table cmd_trajectory(const ScenarioConfig& cfg) {
    const itf::TrapSetup& setup = cfg.single_setup();
    itf::CatState cat = itf::create_cat(setup, cfg.t0);
    double t_f = 2.0 * (pi / 2 + cfg.t_minus);
    std::vector<double> times = linspace(0.0, t_f, cfg.run.trajectory_points);
    auto snaps = itf::protocol_trajectory(cat, cfg.t_minus, times);
    Table t;
    t.columns = {"t",        "x_plus",   "p_plus",  "x_minus",
                 "p_minus",  "sigma_xx", "sigma_xp", "sigma_pp"};
    for (const auto& s : snaps)
        t.add_row({s.t, s.moments_plus(0), s.moments_plus(1), s.moments_minus(0),
                   s.moments_minus(1), s.cov_plus(0, 0), s.cov_plus(0, 1),
                   s.cov_plus(1, 1)});
    return t;
}

Table cmd_wigner(const ScenarioConfig& cfg) {
    const itf::TrapSetup& setup = cfg.single_setup();
    itf::CatState cat = itf::create_cat(setup, cfg.t0);
    auto snaps = itf::protocol_trajectory(cat, cfg.t_minus, cfg.run.wigner_times);
    std::vector<double> axis =
        linspace(cfg.run.wigner_min, cfg.run.wigner_max, cfg.run.wigner_points);
    Table t;
    t.columns = {"t", "x", "p", "w_plus", "w_minus", "w_cat"};
    for (const auto& s : snaps) {
        for (double x : axis)
            for (double p : axis) {
                Eigen::Vector2d rbar(x, p);
                double wp = ps::wigner_fn(s.moments_plus, s.cov_plus, rbar);
                double wm = ps::wigner_fn(s.moments_minus, s.cov_minus, rbar);
                t.add_row({s.t, x, p, wp, wm, 0.5 * (wp + wm)});
            }
    }
    return t;
}

Table cmd_force(const ScenarioConfig& cfg) {
    const itf::TrapSetup& setup = cfg.single_setup();
    if (cfg.force_n == 0.0)
        throw ConfigError("cmd_force: set a non-zero force_n in [protocol]");
    double t_o_f = itf::optimal_time_force(cfg.force_n, setup);
    std::vector<double> ts =
        linspace(cfg.run.t_minus_min, cfg.run.t_minus_max, cfg.run.t_minus_points);
    Table t;
    t.columns = {"t_minus", "phi_f", "phi_f_displacement_route", "t_o_f"};
    for (double tm : ts) {
        itf::ForcePhase fp = itf::force_phase(cfg.force_n, setup, tm);
        t.add_row({tm, fp.eq5, fp.displacement_route, t_o_f});
    }
    return t;
}

Table cmd_gie(const ScenarioConfig& cfg) {
    const itf::TrapSetup& setup = cfg.single_setup();
    gie::GravCouplings c = gie::grav_couplings(setup);
    gie::GiePipeline pipe(c);
    std::vector<double> ts =
        linspace(cfg.run.t_minus_min, cfg.run.t_minus_max, cfg.run.t_minus_points);
    bool dephased = cfg.noise.gamma_q_hz > 0.0;

    Table t;
    t.columns = {"t_minus", "lambda_pt"};
    if (dephased) t.columns.push_back("lambda_pt_dephased");
    const char* wnames[] = {"w00", "w11", "w22", "w33"};
    for (const char* n : wnames) t.columns.push_back(n);
    const std::pair<int, int> uppers[] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (auto [i, j] : uppers) {
        t.columns.push_back("w" + std::to_string(i) + std::to_string(j) + "_re");
        t.columns.push_back("w" + std::to_string(i) + std::to_string(j) + "_im");
    }
    t.columns.push_back("truncation_ratio");

    std::vector<std::vector<Cell>> rows(ts.size());
    parallel_for(ts.size(), [&](std::size_t i) {
        double tm = ts[i];
        gie::JointQubitDensity rho = pipe.density(setup.delta_x, tm);
        gie::PptResult ppt = gie::ppt_negativity(rho);
        Eigen::Matrix4cd w = gie::witness_matrix(ppt.eigvec);
        std::vector<Cell> row{tm, ppt.lambda};
        if (dephased) {
            double t_f = 2.0 * (pi / 2 + tm);
            auto drho = dec::qubit_dephase(rho, cfg.noise.gamma_q_hz,
                                           setup.omega_rads, t_f);
            row.push_back(gie::ppt_negativity(drho).lambda);
        }
        for (int d = 0; d < 4; ++d) row.push_back(w(d, d).real());
        for (auto [a, b] : uppers) {
            row.push_back(w(a, b).real());
            row.push_back(w(a, b).imag());
        }
        row.push_back(itf::max_superposition(setup, tm).meters / *setup.distance_m);
        rows[i] = std::move(row);
    });
    for (auto& row : rows) t.add_row(std::move(row));
    return t;
}

Table cmd_robustness(const ScenarioConfig& cfg) {
    const itf::TrapSetup& setup = cfg.single_setup();
    std::vector<double> ts =
        linspace(cfg.run.t_minus_min, cfg.run.t_minus_max, cfg.run.t_minus_points);
    Table t;
    t.columns = {"t_minus",
                 "sigma_eps",
                 "vis_analytic",
                 "vis_leading",
                 "vis_published_form",
                 "vis_mc",
                 "vis_mc_se",
                 "sudden_variance",
                 "sudden_dt_bound_s",
                 "sigma_eps_bound_ul",
                 "sigma_eps_bound_s",
                 "sigma_f_bound_n"};
    for (double tm : ts) {
        auto dt_bound = rob::sudden_bound_seconds(setup.delta_x, tm, setup.omega_rads);
        auto se_bound = rob::sigma_eps_bound(setup.delta_x, tm, setup.omega_rads);
        double sf_bound = dec::sigma_f_bound(setup, tm);
        double svar = rob::sudden_variance(setup.delta_x, tm, 0.0);
        for (std::size_t si = 0; si < cfg.run.sigma_eps_values.size(); ++si) {
            double se = cfg.run.sigma_eps_values[si];
            auto ana = rob::humpty_visibility_analytic(setup.delta_x, tm, se);
            auto mc = rob::humpty_visibility_mc(setup.delta_x, tm, se,
                                                cfg.run.samples,
                                                cfg.run.seed + si);
            t.add_row({tm, se, ana.visibility, ana.leading_form, ana.published_form,
                       mc.visibility, mc.std_error, svar, dt_bound,
                       se_bound.dimensionless, se_bound.seconds, sf_bound});
        }
    }
    return t;
}

Table run_command(const std::string& name, const ScenarioConfig& cfg) {
    if (name == "table") return cmd_table(cfg);
    if (name == "trajectory") return cmd_trajectory(cfg);
    if (name == "wigner") return cmd_wigner(cfg);
    if (name == "force") return cmd_force(cfg);
    if (name == "gie") return cmd_gie(cfg);
    if (name == "robustness") return cmd_robustness(cfg);
    throw std::runtime_error("unknown command: " + name);
}

}  // namespace catlift::io
