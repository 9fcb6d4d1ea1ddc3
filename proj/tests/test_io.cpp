#include "catlift/commands.hpp"
#include "catlift/config.hpp"
#include "catlift/emit.hpp"

#include "catlift/constants.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace catlift;

namespace {

constexpr double pi = constants::pi;

const char* kBaseConfig = R"(
schema_version = 1

[setup]
mass_kg = 1e-14
omega_rads = 100
delta_x = 3

[protocol]
t_minus = 1.8849555921538759

[run]
trajectory_points = 5
format = csv
)";

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config parsing: values, defaults, errors") {
    auto cfg = io::parse_config(kBaseConfig);
    CHECK(cfg.schema_version == 1);
    CHECK(cfg.setups.size() == 1);
    CHECK(cfg.single_setup().mass_kg == 1e-14);
    CHECK(cfg.single_setup().delta_x == 3.0);
    CHECK(cfg.t_minus == doctest::Approx(0.6 * pi));
    CHECK(cfg.t0 == doctest::Approx(pi));
    CHECK(cfg.run.trajectory_points == 5);
    CHECK(cfg.run.format == "csv");

    // re-declaring a key is rejected even across a reopened section
    std::string bad = std::string(kBaseConfig) + "\n[setup]\nmass_kg = 2e-14\n";
    CHECK_THROWS_AS(io::parse_config(bad), io::ConfigError);

    try {
        io::parse_config("schema_version = 1\n[setup]\nmass_kg = 1e-14\n"
                         "omega_rads = 100\ndelta_x = 1\nbogus_key = 3\n");
        CHECK(false);
    } catch (const io::ConfigError& e) {
        CHECK(std::string(e.what()).find("line 6") != std::string::npos);
        CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
    }

    CHECK_THROWS_AS(io::parse_config("[setup]\nmass_kg = 1e-14\n"), io::ConfigError);
    CHECK_THROWS_AS(io::parse_config("schema_version = 2\n"), io::ConfigError);
    CHECK_THROWS_AS(
        io::parse_config("schema_version = 1\n[mystery]\nkey = 1\n"),
        io::ConfigError);
    CHECK_THROWS_AS(
        io::parse_config("schema_version = 1\n[setup]\nmass_kg = abc\n"
                         "omega_rads = 1\ndelta_x = 1\n"),
        io::ConfigError);
    CHECK_THROWS_AS(io::parse_config("schema_version = 1\n[setup]\nomega_rads = 1\n"
                                     "delta_x = 1\n"),
                    io::ConfigError);  // missing mass
}

TEST_CASE("csv and json rendering round-trip") {
    io::Table t;
    t.columns = {"name", "value"};
    t.add_row({std::string("alpha"), 1.25});
    t.add_row({std::string("beta"), -3.5e-7});

    std::string csv = io::to_csv(t);
    CHECK(csv == "name,value\nalpha,1.25\nbeta,-3.5e-07\n");

    auto parsed = nlohmann::json::parse(io::to_json(t));
    CHECK(parsed.size() == 2);
    CHECK(parsed[0]["name"] == "alpha");
    CHECK(parsed[0]["value"].get<double>() == 1.25);
    CHECK(parsed[1]["value"].get<double>() == -3.5e-7);

    CHECK_THROWS(t.add_row({1.0}));
    CHECK_THROWS(io::render(t, "yaml"));
}

TEST_CASE("atomic write leaves no partial file") {
    auto dir = std::filesystem::temp_directory_path() / "catlift_io_test";
    std::filesystem::create_directories(dir);
    auto path = (dir / "out.csv").string();
    io::write_atomic(path, "a,b\n1,2\n");
    CHECK(slurp(path) == "a,b\n1,2\n");
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("trajectory command reproduces the small-cat endpoints") {
    auto cfg = io::parse_config(kBaseConfig);
    auto table = io::cmd_trajectory(cfg);
    CHECK(table.columns.size() == 8);
    CHECK(table.rows.size() == 5);
    auto cell = [&](std::size_t r, std::size_t col) {
        return std::get<double>(table.rows[r][col]);
    };
    CHECK(cell(0, 1) == doctest::Approx(3.0));   // x_plus(0)
    CHECK(cell(0, 2) == doctest::Approx(0.0));   // p_plus(0)
    CHECK(cell(4, 1) == doctest::Approx(-3.0).epsilon(1e-10));  // swapped at t_f
    CHECK(cell(4, 3) == doctest::Approx(3.0).epsilon(1e-10));
    // widths return to the vacuum at closure
    CHECK(cell(4, 5) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(cell(4, 7) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("wigner command normalizes each snapshot grid") {
    std::string text = R"(
schema_version = 1
[setup]
mass_kg = 1e-14
omega_rads = 100
delta_x = 2
[protocol]
t_minus = 0.9
[run]
wigner_times = 0
wigner_min = -7
wigner_max = 7
wigner_points = 71
)";
    auto cfg = io::parse_config(text);
    auto table = io::cmd_wigner(cfg);
    CHECK(table.rows.size() == 71 * 71);
    double h = 14.0 / 70.0;
    double integral = 0.0;
    for (const auto& row : table.rows)
        integral += std::get<double>(row[5]) * h * h;
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("force command emits both routes and the optimum") {
    std::string text = R"(
schema_version = 1
[setup]
mass_kg = 1e-14
omega_rads = 100
delta_x = 100
[protocol]
force_n = 1e-27
[run]
t_minus_min = 0
t_minus_max = 4
t_minus_points = 9
)";
    auto cfg = io::parse_config(text);
    auto table = io::cmd_force(cfg);
    CHECK(table.columns == std::vector<std::string>{"t_minus", "phi_f",
                                                    "phi_f_displacement_route",
                                                    "t_o_f"});
    CHECK(std::get<double>(table.rows[0][1]) == doctest::Approx(0.0));
    CHECK(std::get<double>(table.rows[8][1]) > 0.0);

    cfg.force_n = 0.0;
    CHECK_THROWS_AS(io::cmd_force(cfg), io::ConfigError);
}

TEST_CASE("gie command: vanishing coupling keeps the column non-negative") {
    std::string text = R"(
schema_version = 1
[setup]
mass_kg = 1e-30
omega_rads = 100
delta_x = 40
distance_m = 40e-6
[run]
t_minus_min = 1
t_minus_max = 7
t_minus_points = 7
)";
    auto cfg = io::parse_config(text);
    auto table = io::cmd_gie(cfg);
    for (const auto& row : table.rows)
        CHECK(std::get<double>(row[1]) >= -1e-12);

    // dephased column appears when a qubit rate is configured
    cfg.noise.gamma_q_hz = 1.0;
    auto with_deph = io::cmd_gie(cfg);
    CHECK(with_deph.columns[2] == "lambda_pt_dephased");
    CHECK(with_deph.columns.size() == table.columns.size() + 1);
}

TEST_CASE("robustness command is deterministic for a fixed seed") {
    std::string text = R"(
schema_version = 1
[setup]
mass_kg = 1e-14
omega_rads = 100
delta_x = 50
[run]
t_minus_min = 2
t_minus_max = 3
t_minus_points = 2
sigma_eps_values = 1e-4, 1e-3
samples = 5000
seed = 42
)";
    auto cfg = io::parse_config(text);
    std::string a = io::to_csv(io::cmd_robustness(cfg));
    std::string b = io::to_csv(io::cmd_robustness(cfg));
    CHECK(a == b);

    cfg.run.seed = 43;
    std::string other = io::to_csv(io::cmd_robustness(cfg));
    CHECK(a != other);
}

TEST_CASE("table command derives the comparative quantities") {
    std::string text = R"(
schema_version = 1
[setup]
mass_kg = 1e-14
omega_rads = 100
delta_x = 100
distance_m = 40e-6
radius_m = 8.8e-7
[noise]
gas_temperature_k = 1
[run]
gie_t_lo = 11.9
gie_t_hi = 12.7
gie_grid_step = 0.015708
)";
    auto cfg = io::parse_config(text);
    auto table = io::cmd_table(cfg);
    CHECK(table.rows.size() == 1);
    auto col = [&](const std::string& name) {
        for (std::size_t i = 0; i < table.columns.size(); ++i)
            if (table.columns[i] == name)
                return std::get<double>(table.rows[0][i]);
        throw std::runtime_error("missing column " + name);
    };
    CHECK(col("x0_m") == doctest::Approx(7.3e-12).epsilon(0.05));
    CHECK(col("g_g") == doctest::Approx(2.1e-15).epsilon(0.05));
    CHECK(col("omega_t_o") == doctest::Approx(12.23).epsilon(0.01));
    CHECK(col("lambda_pt_at_t_o") < -0.49);
    CHECK(col("t_tot_s") ==
          doctest::Approx((3.0 * pi + 2.0 * col("omega_t_o")) / 100.0).epsilon(1e-12));
    CHECK(col("experiment_frequency_hz") == doctest::Approx(1.0 / col("t_tot_s")));

    CHECK_THROWS_AS(io::run_command("bogus", cfg), std::runtime_error);
}

TEST_CASE("emitted tables carry finite values in every declared column") {
    std::string text = R"(
schema_version = 1
[setup]
mass_kg = 1e-14
omega_rads = 70
delta_x = 50
distance_m = 40e-6
[run]
t_minus_min = 6
t_minus_max = 13
t_minus_points = 8
sigma_eps_values = 1e-5
samples = 2000
)";
    auto cfg = io::parse_config(text);
    for (const char* cmd : {"gie", "robustness", "trajectory"}) {
        auto table = io::run_command(cmd, cfg);
        CHECK_FALSE(table.columns.empty());
        for (const auto& row : table.rows) {
            CHECK(row.size() == table.columns.size());
            for (const auto& cell : row)
                if (const double* d = std::get_if<double>(&cell))
                    CHECK(std::isfinite(*d));
        }
    }
}
