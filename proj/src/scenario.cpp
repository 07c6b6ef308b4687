#include "exzone/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace exzone::io {

namespace {

std::string trim(std::string_view sv) {
    const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    std::size_t b = 0, e = sv.size();
    while (b < e && is_space(static_cast<unsigned char>(sv[b]))) ++b;
    while (e > b && is_space(static_cast<unsigned char>(sv[e - 1]))) --e;
    return std::string(sv.substr(b, e - b));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

double parse_number(const std::string& key, const std::string& text) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw ScenarioError("scenario key '" + key + "': cannot parse number from '" + text + "'");
    }
    if (trim(text.substr(pos)) != "")
        throw ScenarioError("scenario key '" + key + "': trailing text in '" + text + "'");
    return v;
}

// power value with optional unit ("W" default, "dBm" converted)
double parse_power(const std::string& key, const std::string& text) {
    std::string t = trim(text);
    std::string unit;
    // strip a trailing alphabetic unit token
    std::size_t cut = t.size();
    while (cut > 0 && (std::isalpha(static_cast<unsigned char>(t[cut - 1])) != 0)) --cut;
    unit = lower(trim(t.substr(cut)));
    const double v = parse_number(key, trim(t.substr(0, cut)));
    if (unit.empty() || unit == "w") return v;
    if (unit == "dbm") return analytics::dbm_to_watt(v);
    throw ScenarioError("scenario key '" + key + "': unknown power unit '" + unit + "'");
}

double parse_length(const std::string& key, const std::string& text) {
    std::string t = trim(text);
    std::size_t cut = t.size();
    while (cut > 0 && (std::isalpha(static_cast<unsigned char>(t[cut - 1])) != 0)) --cut;
    const std::string unit = lower(trim(t.substr(cut)));
    const double v = parse_number(key, trim(t.substr(0, cut)));
    if (unit.empty() || unit == "km") return v;
    throw ScenarioError("scenario key '" + key + "': unknown length unit '" + unit + "'");
}

bool parse_bool(const std::string& key, const std::string& text) {
    const std::string t = lower(trim(text));
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw ScenarioError("scenario key '" + key + "': expected a boolean, got '" + text + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss{text};
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_number(key, item));
    }
    if (out.empty()) throw ScenarioError("scenario key '" + key + "': empty list");
    return out;
}

}  // namespace

std::vector<double> ScenarioFile::re_grid() const {
    std::vector<double> grid;
    for (double v = re_grid_start; v <= re_grid_stop + 1e-12; v += re_grid_step)
        grid.push_back(std::min(v, re_grid_stop));
    return grid;
}

montecarlo::SimParams ScenarioFile::sim_params() const {
    montecarlo::SimParams sim;
    sim.drop_model = drop_model;
    sim.cell_count = cell_count;
    sim.r_ref = r_ref;
    sim.link_dist = link_dist;
    sim.sim_outer = sim_outer;
    sim.include_noise = include_noise;
    return sim;
}

ScenarioFile parse_scenario(std::string_view text) {
    ScenarioFile s;
    std::stringstream input{std::string(text)};
    std::string raw;
    while (std::getline(input, raw)) {
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ScenarioError("scenario line is not 'key = value': '" + raw + "'");
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) throw ScenarioError("scenario key '" + key + "': empty value");

        if (key == "alpha") {
            s.net.alpha = parse_number(key, value);
            if (!(s.net.alpha > 2.0))
                throw ScenarioError("scenario key 'alpha': must be > 2");
        } else if (key == "r_c") {
            s.net.cell_radius = parse_length(key, value);
            if (!(s.net.cell_radius > 0.0))
                throw ScenarioError("scenario key 'r_c': must be > 0");
        } else if (key == "lambda_b") {
            s.net.lambda_b = parse_number(key, value);
            if (!(s.net.lambda_b > 0.0))
                throw ScenarioError("scenario key 'lambda_b': must be > 0");
            s.lambda_b_explicit = true;
        } else if (key == "a") {
            s.net.density_ratio = parse_number(key, value);
            if (!(s.net.density_ratio > 0.0))
                throw ScenarioError("scenario key 'a': must be > 0");
        } else if (key == "p_d") {
            s.net.p_d = parse_power(key, value);
            if (!(s.net.p_d > 0.0)) throw ScenarioError("scenario key 'p_d': must be > 0");
        } else if (key == "c") {
            s.c = parse_number(key, value);
            if (!(s.c > 1.0)) throw ScenarioError("scenario key 'c': must be > 1");
        } else if (key == "re") {
            s.re = parse_length(key, value);
        } else if (key == "training") {
            const std::string t = lower(value);
            if (t == "muted" || t == "mutedd2d")
                s.net.training = analytics::TrainingMode::MutedD2D;
            else if (t == "active" || t == "actived2d")
                s.net.training = analytics::TrainingMode::ActiveD2D;
            else
                throw ScenarioError("scenario key 'training': expected muted|active");
        } else if (key == "m") {
            s.net.antennas = static_cast<int>(parse_number(key, value));
            if (s.net.antennas < 1) throw ScenarioError("scenario key 'm': must be >= 1");
        } else if (key == "t_p") {
            s.net.pilot_len = static_cast<int>(parse_number(key, value));
            if (s.net.pilot_len < 1) throw ScenarioError("scenario key 't_p': must be >= 1");
        } else if (key == "sigma2_bs") {
            s.net.sigma2_bs = parse_power(key, value);
            if (s.net.sigma2_bs < 0.0)
                throw ScenarioError("scenario key 'sigma2_bs': must be >= 0");
        } else if (key == "sigma2_d2d") {
            s.net.sigma2_d2d = parse_power(key, value);
            if (s.net.sigma2_d2d < 0.0)
                throw ScenarioError("scenario key 'sigma2_d2d': must be >= 0");
        } else if (key == "r_ref") {
            s.r_ref = parse_length(key, value);
        } else if (key == "d") {
            s.d = parse_length(key, value);
        } else if (key == "r0") {
            s.r0 = parse_length(key, value);
        } else if (key == "link_dist") {
            s.link_dist = parse_length(key, value);
        } else if (key == "re_grid") {
            std::stringstream ss{value};
            std::string tok;
            std::vector<double> parts;
            while (std::getline(ss, tok, ':')) parts.push_back(parse_number(key, trim(tok)));
            if (parts.size() != 3)
                throw ScenarioError("scenario key 're_grid': expected start:stop:step");
            s.re_grid_start = parts[0];
            s.re_grid_stop = parts[1];
            s.re_grid_step = parts[2];
            if (!(s.re_grid_step > 0.0) || !(s.re_grid_stop >= s.re_grid_start))
                throw ScenarioError("scenario key 're_grid': bad range");
        } else if (key == "n_drops") {
            s.n_drops = static_cast<long>(parse_number(key, value));
            if (s.n_drops < 1) throw ScenarioError("scenario key 'n_drops': must be >= 1");
        } else if (key == "seed") {
            s.seed = static_cast<std::uint64_t>(parse_number(key, value));
        } else if (key == "i_d2d") {
            s.i_d2d = parse_list(key, value);
            for (double v : s.i_d2d)
                if (!(v > 0.0)) throw ScenarioError("scenario key 'i_d2d': values must be > 0");
        } else if (key == "c_max") {
            s.c_max = parse_number(key, value);
            if (!(s.c_max > 1.0)) throw ScenarioError("scenario key 'c_max': must be > 1");
        } else if (key == "re_min") {
            s.re_min = parse_length(key, value);
        } else if (key == "re_max") {
            s.re_max = parse_length(key, value);
        } else if (key == "drop_model") {
            const std::string t = lower(value);
            if (t == "model")
                s.drop_model = montecarlo::DropModel::Model;
            else if (t == "hex")
                s.drop_model = montecarlo::DropModel::Hex;
            else
                throw ScenarioError("scenario key 'drop_model': expected model|hex");
        } else if (key == "cell_count") {
            s.cell_count = static_cast<int>(parse_number(key, value));
            if (s.cell_count < 1) throw ScenarioError("scenario key 'cell_count': must be >= 1");
        } else if (key == "sim_outer") {
            s.sim_outer = parse_length(key, value);
            if (!(s.sim_outer > 0.0)) throw ScenarioError("scenario key 'sim_outer': must be > 0");
        } else if (key == "include_noise") {
            s.include_noise = parse_bool(key, value);
        } else {
            throw ScenarioError("unknown scenario key '" + key + "'");
        }
    }

    if (!s.lambda_b_explicit)
        s.net.lambda_b = 1.0 / (std::numbers::pi * s.net.cell_radius * s.net.cell_radius);

    // cross-key invariants
    s.net.validate();
    if (!(s.re > 0.0) || !(s.re < s.net.cell_radius))
        throw ScenarioError("scenario key 're': must satisfy 0 < re < r_c");
    if (!(s.r_ref > 0.0) || !(s.r_ref < s.re))
        throw ScenarioError("scenario key 'r_ref': must satisfy 0 < r_ref < re");
    if (!(s.re_min > 0.0) || !(s.re_min < s.re_max))
        throw ScenarioError("scenario key 're_min': must satisfy 0 < re_min < re_max");
    if (!(s.r_ref < s.re_min))
        throw ScenarioError("scenario key 'r_ref': must be < re_min");
    if (!(s.d > s.re_max))
        throw ScenarioError("scenario key 'd': must be > re_max");
    if (!(s.r0 > 0.0)) throw ScenarioError("scenario key 'r0': must be > 0");
    if (!(s.link_dist > 0.0)) throw ScenarioError("scenario key 'link_dist': must be > 0");
    if (!(s.re_grid_start > s.r_ref))
        throw ScenarioError("scenario key 're_grid': start must exceed r_ref");
    if (!(s.re_grid_stop <= s.net.cell_radius))
        throw ScenarioError("scenario key 're_grid': stop must be <= r_c");
    return s;
}

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_g12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string serialize_scenario(const ScenarioFile& s) {
    std::string out;
    const auto kv = [&out](const std::string& k, const std::string& v) {
        out += k;
        out += " = ";
        out += v;
        out += "\n";
    };
    kv("alpha", format_full(s.net.alpha));
    kv("r_c", format_full(s.net.cell_radius));
    kv("lambda_b", format_full(s.net.lambda_b));
    kv("a", format_full(s.net.density_ratio));
    kv("p_d", format_full(s.net.p_d));
    kv("c", format_full(s.c));
    kv("re", format_full(s.re));
    kv("training",
       s.net.training == analytics::TrainingMode::MutedD2D ? "muted" : "active");
    kv("m", std::to_string(s.net.antennas));
    kv("t_p", std::to_string(s.net.pilot_len));
    kv("sigma2_bs", format_full(s.net.sigma2_bs));
    kv("sigma2_d2d", format_full(s.net.sigma2_d2d));
    kv("r_ref", format_full(s.r_ref));
    kv("d", format_full(s.d));
    kv("r0", format_full(s.r0));
    kv("link_dist", format_full(s.link_dist));
    kv("re_grid", format_full(s.re_grid_start) + ":" + format_full(s.re_grid_stop) + ":" +
                      format_full(s.re_grid_step));
    kv("n_drops", std::to_string(s.n_drops));
    kv("seed", std::to_string(s.seed));
    {
        std::string list;
        for (std::size_t i = 0; i < s.i_d2d.size(); ++i) {
            if (i) list += ",";
            list += format_full(s.i_d2d[i]);
        }
        kv("i_d2d", list);
    }
    kv("c_max", format_full(s.c_max));
    kv("re_min", format_full(s.re_min));
    kv("re_max", format_full(s.re_max));
    kv("drop_model", s.drop_model == montecarlo::DropModel::Model ? "model" : "hex");
    kv("cell_count", std::to_string(s.cell_count));
    kv("sim_outer", format_full(s.sim_outer));
    kv("include_noise", s.include_noise ? "true" : "false");
    return out;
}

std::uint64_t scenario_hash(const ScenarioFile& s) {
    const std::string text = serialize_scenario(s);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace exzone::io
