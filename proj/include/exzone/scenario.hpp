#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "exzone/analytics.hpp"
#include "exzone/montecarlo.hpp"

namespace exzone::io {

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key-value scenario document.  Omitted keys fall back to the baseline
// parameter set; powers accept "dBm" or "W" suffixes and are stored in watts.
struct ScenarioFile {
    analytics::NetworkConfig net{};
    bool lambda_b_explicit = false;  // otherwise 1/(pi R_c^2)

    double re = 0.5;          // design point for analyze/simulate
    double c = 10.0;          // power ratio C
    double r_ref = 0.2;       // km
    double d = 0.95;          // km, reference D2D receiver distance
    double r0 = 1.0;          // km, minimum D2D interferer range in g(X)
    double link_dist = 0.05;  // km

    double re_grid_start = 0.4;
    double re_grid_stop = 0.9;
    double re_grid_step = 0.05;

    long n_drops = 10000;
    std::uint64_t seed = 12345;

    std::vector<double> i_d2d{12.0, 15.0, 18.0};
    double c_max = 10.0;
    double re_min = 0.4;
    double re_max = 0.9;

    montecarlo::DropModel drop_model = montecarlo::DropModel::Model;
    int cell_count = 31;
    double sim_outer = 12.0;  // km
    bool include_noise = false;

    std::vector<double> re_grid() const;
    montecarlo::SimParams sim_params() const;
};

ScenarioFile parse_scenario(std::string_view text);
std::string serialize_scenario(const ScenarioFile& s);
std::uint64_t scenario_hash(const ScenarioFile& s);

// shortest round-trippable decimal
std::string format_full(double v);
// 12 significant digits, the CSV convention
std::string format_g12(double v);

}  // namespace exzone::io
