#include "opasim/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "opasim/steady_state.hpp"
#include "opasim/units.hpp"

namespace opasim {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

Config Config::parse(std::istream& in) {
    Config c;
    std::map<std::string, std::function<void(const std::string&)>> setters;
    auto num = [](double* target) {
        return [target](const std::string& v) { *target = std::stod(v); };
    };
    auto integer = [](int* target) {
        return [target](const std::string& v) { *target = std::stoi(v); };
    };
    auto u64 = [](std::uint64_t* target) {
        return [target](const std::string& v) { *target = std::stoull(v); };
    };
    setters["cavity.linewidth_a_mhz"] = num(&c.linewidth_a_mhz);
    setters["cavity.linewidth_b_mhz"] = num(&c.linewidth_b_mhz);
    setters["cavity.escape_a"] = num(&c.escape_a);
    setters["cavity.escape_b"] = num(&c.escape_b);
    setters["cavity.lambda_a_nm"] = num(&c.lambda_a_nm);
    setters["cavity.p_threshold_mw"] = num(&c.p_threshold_mw);
    setters["cavity.omega_mhz"] = num(&c.omega_mhz);
    setters["detection.eta_a"] = num(&c.eta_a);
    setters["detection.eta_b"] = num(&c.eta_b);
    setters["detection.dark_clearance_db"] = num(&c.dark_clearance_db);
    setters["detection.excess_variance"] = num(&c.excess_variance);
    setters["gawbs.xi_a"] = num(&c.xi_a);
    setters["gawbs.xi_b"] = num(&c.xi_b);
    setters["drive.seed_mw"] = num(&c.seed_mw);
    setters["drive.pump_mw"] = num(&c.pump_mw);
    setters["drive.relative_phase"] = num(&c.relative_phase);
    setters["sweep.total_mw"] = num(&c.total_mw);
    setters["sweep.grid"] = integer(&c.grid);
    setters["sweep.angle_min_pi"] = num(&c.angle_min_pi);
    setters["sweep.angle_max_pi"] = num(&c.angle_max_pi);
    setters["sweep.n_samples"] = u64(&c.n_samples);
    setters["sweep.rng_seed"] = u64(&c.rng_seed);
    setters["sweep.workers"] = integer(&c.workers);

    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("config: line " + std::to_string(lineno) +
                                     ": expected key = value");
        }
        std::string key = section + "." + trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        auto it = setters.find(key);
        if (it == setters.end()) {
            throw std::runtime_error("config: unknown key '" + key + "'");
        }
        try {
            it->second(value);
        } catch (const std::exception&) {
            throw std::runtime_error("config: bad value for '" + key + "': " +
                                     value);
        }
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    return parse(in);
}

std::string Config::serialize() const {
    std::ostringstream out;
    out << "[cavity]\n";
    out << "linewidth_a_mhz = " << fmt(linewidth_a_mhz) << "\n";
    out << "linewidth_b_mhz = " << fmt(linewidth_b_mhz) << "\n";
    out << "escape_a = " << fmt(escape_a) << "\n";
    out << "escape_b = " << fmt(escape_b) << "\n";
    out << "lambda_a_nm = " << fmt(lambda_a_nm) << "\n";
    out << "p_threshold_mw = " << fmt(p_threshold_mw) << "\n";
    out << "omega_mhz = " << fmt(omega_mhz) << "\n";
    out << "\n[detection]\n";
    out << "eta_a = " << fmt(eta_a) << "\n";
    out << "eta_b = " << fmt(eta_b) << "\n";
    out << "dark_clearance_db = " << fmt(dark_clearance_db) << "\n";
    out << "excess_variance = " << fmt(excess_variance) << "\n";
    out << "\n[gawbs]\n";
    out << "xi_a = " << fmt(xi_a) << "\n";
    out << "xi_b = " << fmt(xi_b) << "\n";
    out << "\n[drive]\n";
    out << "seed_mw = " << fmt(seed_mw) << "\n";
    out << "pump_mw = " << fmt(pump_mw) << "\n";
    out << "relative_phase = " << fmt(relative_phase) << "\n";
    out << "\n[sweep]\n";
    out << "total_mw = " << fmt(total_mw) << "\n";
    out << "grid = " << grid << "\n";
    out << "angle_min_pi = " << fmt(angle_min_pi) << "\n";
    out << "angle_max_pi = " << fmt(angle_max_pi) << "\n";
    out << "n_samples = " << n_samples << "\n";
    out << "rng_seed = " << rng_seed << "\n";
    out << "workers = " << workers << "\n";
    return out.str();
}

std::uint64_t Config::hash() const {
    // FNV-1a
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : serialize()) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

CavityParams Config::cavity_params(bool gawbs_enabled) const {
    CavityParams p;
    const double kappa_a = kappa_from_linewidth_mhz(linewidth_a_mhz);
    const double kappa_b = kappa_from_linewidth_mhz(linewidth_b_mhz);
    p.kappa_a1 = escape_a * kappa_a;
    p.kappa_a2 = (1.0 - escape_a) * kappa_a;
    p.kappa_b1 = escape_b * kappa_b;
    p.kappa_b2 = (1.0 - escape_b) * kappa_b;
    p.lambda_a = lambda_a_nm * 1e-9;
    p.lambda_b = p.lambda_a / 2.0;
    p.xi_a = gawbs_enabled ? xi_a : 0.0;
    p.xi_b = gawbs_enabled ? xi_b : 0.0;
    p.eta_a = eta_a;
    p.eta_b = eta_b;
    p.omega = 2.0 * kPi * omega_mhz * 1e6;
    p.epsilon = calibrate_epsilon(p, p_threshold_mw);
    p.validate();
    return p;
}

DriveConfig Config::drive_config() const {
    DriveConfig d;
    d.seed_power_mw = seed_mw;
    d.pump_power_mw = pump_mw;
    d.relative_phase = relative_phase;
    d.p_threshold_mw = p_threshold_mw;
    d.validate();
    return d;
}

double Config::dark_variance() const {
    return db_to_linear(-dark_clearance_db);
}

}  // namespace opasim
