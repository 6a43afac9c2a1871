#pragma once

// Shipped scenarios (formation run, influx-ratio sweeps), sweep orchestration
// and output emission (CSV, JSON summary, SVG).

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "evolve.hpp"
#include "svg.hpp"

namespace h2sim {

/// Formation run: two hydrogen atoms in separate cavities, both electrons
/// spin-down in the ground orbital, nuclear spins up, and one photon each of
/// Omega_up, Omega_down and Omega_s.
inline ExperimentConfig formation_experiment() {
    ExperimentConfig c;
    c.name = "formation";
    const double gamma = 1e7;
    c.modes = {{
        {Mode::omega_up, 5e9, gamma, 0.0, 1},
        {Mode::omega_down, 5e9, gamma, 0.0, 1},
        {Mode::Omega_up, 1e10, gamma, 0.5, 2},
        {Mode::Omega_down, 1e10, gamma, 0.5, 2},
        {Mode::Omega_s, 1e9, gamma, 0.5, 2},
        {Mode::Omega_n, 1e8, gamma, 0.5, 2},
    }};
    auto& h = c.hamiltonian;
    h.hbar = 1.0;
    h.g_omega_up = h.g_omega_down = 5e7;
    h.g_Omega_up = h.g_Omega_down = 1e8;
    h.g_Omega_s = 1e7;
    h.g_en = 1e6;
    h.zeta2 = 1e9;
    h.zeta1 = 1e7;
    h.zeta0 = 0.0;
    c.hamiltonian = with_frequencies(h, c.modes);

    BasisState s;
    s.photons = {0, 0, 1, 1, 1, 0};
    s.electrons.fill(0);
    s.electrons[slot(Atom::first, Orbital::ground, Spin::down)] = 1;
    s.electrons[slot(Atom::second, Orbital::ground, Spin::down)] = 1;
    s.nuclei_apart = 1;
    s.spin1 = s.spin2 = 1;
    c.initial = s;

    c.dt = 1e-10;
    c.horizon = 1.2e-3;
    c.sample_stride = 10000;
    c.observables = default_observables(s);
    return c;
}

/// Config of one sweep point: the formation run with mu of `mode` replaced.
inline ExperimentConfig sweep_point(ExperimentConfig base, Mode mode, double mu, double t_eval) {
    base.modes[index(mode)].mu = mu;
    base.horizon = t_eval;
    base.sweep.reset();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s-mu-%.4f", std::string(mode_name(mode)).c_str(), mu);
    base.name = buf;
    return base;
}

struct SweepRow {
    double mu;
    double probability;
    Trajectory trajectory;
};

struct SweepResult {
    Mode mode = Mode::Omega_s;
    double t_eval = 1.2e-3;
    std::vector<SweepRow> rows;  // mu strictly increasing
};

inline std::vector<double> mu_grid(double from, double to, double step) {
    if (!(step > 0.0)) throw ValidationError("sweep step must be > 0");
    if (to < from) throw ValidationError("sweep range is empty");
    std::vector<double> v;
    const long n = static_cast<long>(std::floor((to - from) / step + 1e-9));
    for (long k = 0; k <= n; ++k) v.push_back(std::round((from + static_cast<double>(k) * step) * 1e12) / 1e12);
    return v;
}

/// Runs one trajectory per mu value, up to `workers` at a time, and merges
/// the rows by ascending mu.
inline SweepResult mu_sweep(Mode mode, std::vector<double> values, double t_eval = 1.2e-3,
                            const ExperimentConfig& base = formation_experiment(), int workers = 0) {
    if (values.empty()) throw ValidationError("sweep needs at least one mu value");
    std::sort(values.begin(), values.end());
    if (std::adjacent_find(values.begin(), values.end()) != values.end())
        throw ValidationError("sweep mu values must be distinct");
    for (double v : values)
        if (!(v >= 0.0 && v < 1.0)) throw ValidationError("sweep mu values must lie in [0, 1)");

    std::vector<ExperimentConfig> points;
    for (double v : values) {
        points.push_back(sweep_point(base, mode, v, t_eval));
        points.back().validate();
    }
    SweepResult result{mode, t_eval, std::vector<SweepRow>(values.size())};

    unsigned n_workers = workers > 0 ? static_cast<unsigned>(workers) : std::max(1u, std::thread::hardware_concurrency());
    n_workers = std::min<unsigned>(n_workers, static_cast<unsigned>(points.size()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            try {
                Trajectory t = run(points[i]);
                const double p = t.final_value("H2");
                result.rows[i] = {values[i], p, std::move(t)};
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return result;
}

// Output.

/// Hash over the physical content of a config (modes, Hamiltonian, initial
/// state, dt, horizon); bookkeeping fields do not enter.
inline std::string config_hash(const ExperimentConfig& c) {
    nlohmann::json j = to_json(c);
    nlohmann::json phys = {{"modes", j["modes"]}, {"hamiltonian", j["hamiltonian"]}, {"initial", j["initial"]},
                           {"dt", j["dt"]}, {"horizon", j["horizon"]}, {"renormalize", j["renormalize"]}};
    const std::string text = phys.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string format12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string trajectory_csv(const Trajectory& t) {
    std::string o = "t";
    for (const auto& n : t.names) o += "," + n;
    o += ",trace\n";
    for (std::size_t k = 0; k < t.times.size(); ++k) {
        o += format12(t.times[k]);
        for (const auto& s : t.series) o += "," + format12(s[k]);
        o += "," + format12(t.trace[k]) + "\n";
    }
    return o;
}

inline std::string sweep_csv(const SweepResult& s) {
    std::string o = "mu_" + std::string(mode_name(s.mode)) + ",P_H2\n";
    for (const auto& r : s.rows) o += format12(r.mu) + "," + format12(r.probability) + "\n";
    return o;
}

/// JSON numbers are written by nlohmann with round-trip precision.
inline nlohmann::json trajectory_summary(const ExperimentConfig& c, const Trajectory& t) {
    nlohmann::json endpoints = nlohmann::json::object();
    for (std::size_t k = 0; k < t.names.size(); ++k)
        if (!t.series[k].empty()) endpoints[t.names[k]] = t.series[k].back();
    double worst = 0.0;
    for (const auto& [time, v] : t.min_eigenvalues) worst = std::min(worst, v);
    return {{"name", c.name},
            {"config_hash", config_hash(c)},
            {"endpoints", endpoints},
            {"final_time", t.times.empty() ? 0.0 : t.times.back()},
            {"final_trace", t.trace.empty() ? 1.0 : t.trace.back()},
            {"min_eigenvalue", worst},
            {"basis_size", t.basis_size},
            {"steps", t.steps},
            {"runtime_seconds", t.runtime_seconds}};
}

inline nlohmann::json sweep_summary(const ExperimentConfig& base, const SweepResult& s) {
    nlohmann::json rows = nlohmann::json::array();
    double runtime = 0.0;
    for (const auto& r : s.rows) {
        rows.push_back({{"mu", r.mu}, {"P_H2", r.probability}, {"config_hash", config_hash(sweep_point(base, s.mode, r.mu, s.t_eval))}});
        runtime += r.trajectory.runtime_seconds;
    }
    return {{"mode", std::string(mode_name(s.mode))},
            {"t_eval", s.t_eval},
            {"config_hash", config_hash(base)},
            {"rows", rows},
            {"runtime_seconds", runtime}};
}

inline svg::Chart trajectory_chart(const ExperimentConfig& c, const Trajectory& t) {
    svg::Chart chart{c.name, "t (s)", "probability", {}};
    for (std::size_t k = 0; k < t.names.size(); ++k) chart.series.push_back({t.names[k], t.times, t.series[k]});
    return chart;
}

inline svg::Chart sweep_chart(const SweepResult& s) {
    svg::Series series{"H2", {}, {}};
    for (const auto& r : s.rows) {
        series.x.push_back(r.mu);
        series.y.push_back(r.probability);
    }
    const std::string m(mode_name(s.mode));
    return {"P(H2) at t = " + format12(s.t_eval) + " s vs mu of " + m, "mu (" + m + ")", "P(H2)", {series}};
}

namespace detail {
inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline std::filesystem::path prepare(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
    return dir;
}

inline bool wants(const std::vector<std::string>& formats, const char* f) {
    return std::find(formats.begin(), formats.end(), f) != formats.end();
}
}  // namespace detail

/// Writes <name>.csv, <name>.json and <name>.svg; returns the paths written.
inline std::vector<std::filesystem::path> emit_outputs(const ExperimentConfig& c, const Trajectory& t) {
    const auto dir = detail::prepare(c.output.directory);
    std::vector<std::filesystem::path> written;
    const auto& f = c.output.formats;
    if (detail::wants(f, "csv")) detail::write_file(written.emplace_back(dir / (c.name + ".csv")), trajectory_csv(t));
    if (detail::wants(f, "json"))
        detail::write_file(written.emplace_back(dir / (c.name + ".json")), trajectory_summary(c, t).dump(2) + "\n");
    if (detail::wants(f, "svg"))
        detail::write_file(written.emplace_back(dir / (c.name + ".svg")), svg::render(trajectory_chart(c, t)));
    return written;
}

/// Per-point trajectory CSVs plus the merged table, summary and chart.
inline std::vector<std::filesystem::path> emit_outputs(const ExperimentConfig& base, const SweepResult& s) {
    const auto dir = detail::prepare(base.output.directory);
    const std::string stem = "sweep-" + std::string(mode_name(s.mode));
    std::vector<std::filesystem::path> written;
    const auto& f = base.output.formats;
    if (detail::wants(f, "csv")) {
        for (const auto& r : s.rows) {
            const auto point = sweep_point(base, s.mode, r.mu, s.t_eval);
            detail::write_file(written.emplace_back(dir / (point.name + ".csv")), trajectory_csv(r.trajectory));
        }
        detail::write_file(written.emplace_back(dir / (stem + ".csv")), sweep_csv(s));
    }
    if (detail::wants(f, "json"))
        detail::write_file(written.emplace_back(dir / (stem + ".json")), sweep_summary(base, s).dump(2) + "\n");
    if (detail::wants(f, "svg")) detail::write_file(written.emplace_back(dir / (stem + ".svg")), svg::render(sweep_chart(s)));
    return written;
}

}  // namespace h2sim
