#pragma once

// Scenario description: mode table, Hamiltonian parameters, initial state,
// integration controls, observables and optional sweep.

#include <array>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hamiltonian.hpp"
#include "hilbert.hpp"

namespace h2sim {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Electron / nucleus configuration; photon numbers are left free, so its
/// population is a photon-sector marginal.
struct Configuration {
    std::array<std::uint8_t, kSlotCount> electrons{};
    std::uint8_t nuclei_apart = 1;
    std::uint8_t spin1 = 1;
    std::uint8_t spin2 = 1;

    static Configuration of(const BasisState& s) { return {s.electrons, s.nuclei_apart, s.spin1, s.spin2}; }

    bool matches(const BasisState& s) const {
        return s.electrons == electrons && s.nuclei_apart == nuclei_apart && s.spin1 == spin1 && s.spin2 == spin2;
    }

    bool operator==(const Configuration&) const = default;
};

struct Observable {
    std::string name;
    std::vector<Configuration> configurations;
};

struct Sweep {
    Mode mode = Mode::Omega_s;
    std::vector<double> values;
    double t_eval = 1.2e-3;
};

struct OutputSpec {
    std::string directory = "out";
    std::vector<std::string> formats = {"csv", "json", "svg"};
};

struct ExperimentConfig {
    std::string name = "experiment";
    ModeTable modes{};
    HamiltonianParams hamiltonian{};
    BasisState initial{};
    double dt = 1e-10;
    double horizon = 1.2e-3;
    long sample_stride = 10000;
    long positivity_probe_stride = 10;  ///< in samples; 0 disables
    bool renormalize = false;
    std::vector<Observable> observables;
    std::optional<Sweep> sweep;
    OutputSpec output;
    int workers = 0;  ///< sweep concurrency bound; 0 = hardware concurrency

    /// Frequencies live in the mode table; the Hamiltonian copy follows it.
    HamiltonianParams params() const { return with_frequencies(hamiltonian, modes); }

    long step_count() const { return static_cast<long>(std::llround(horizon / dt)); }

    void validate() const {
        for (std::size_t m = 0; m < kModeCount; ++m) {
            modes[m].validate();
            if (modes[m].label != kAllModes[m]) throw ValidationError("mode table must list modes in canonical order");
        }
        params().validate();
        if (!initial.within(cutoffs_of(modes))) throw ValidationError("initial state violates the Fock cutoffs");
        if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
        if (!(horizon >= 0.0)) throw ValidationError("horizon must be >= 0");
        if (sample_stride < 1) throw ValidationError("sample_stride must be >= 1");
        if (positivity_probe_stride < 0) throw ValidationError("positivity_probe_stride must be >= 0");
        for (const auto& o : observables) {
            if (o.name.empty()) throw ValidationError("observable without a name");
            if (o.configurations.empty()) throw ValidationError("observable '" + o.name + "' lists no configurations");
        }
        if (sweep) {
            if (sweep->t_eval > horizon) throw ValidationError("sweep evaluation time exceeds the horizon");
            for (double v : sweep->values)
                if (!(v >= 0.0 && v < 1.0)) throw ValidationError("sweep mu values must lie in [0, 1)");
        }
    }
};

// JSON mapping.

inline void to_json(nlohmann::json& j, const Configuration& c) {
    std::vector<int> el(c.electrons.begin(), c.electrons.end());
    j = {{"electrons", el}, {"k", c.nuclei_apart}, {"k1", c.spin1}, {"k2", c.spin2}};
}

inline void from_json(const nlohmann::json& j, Configuration& c) {
    nlohmann::json full = j;
    full["photons"] = std::vector<int>(kModeCount, 0);
    c = Configuration::of(full.get<BasisState>());
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
    using nlohmann::json;
    json modes = json::array();
    for (const auto& m : c.modes)
        modes.push_back({{"label", std::string(mode_name(m.label))},
                         {"frequency", m.frequency},
                         {"gamma_out", m.gamma_out},
                         {"mu", m.mu},
                         {"cutoff", m.cutoff}});
    const auto& h = c.hamiltonian;
    json obs = json::array();
    for (const auto& o : c.observables) obs.push_back({{"name", o.name}, {"configurations", o.configurations}});
    json j = {
        {"name", c.name},
        {"modes", modes},
        {"hamiltonian",
         {{"hbar", h.hbar},
          {"g_omega_up", h.g_omega_up},
          {"g_omega_down", h.g_omega_down},
          {"g_Omega_up", h.g_Omega_up},
          {"g_Omega_down", h.g_Omega_down},
          {"g_Omega_s", h.g_Omega_s},
          {"g_en", h.g_en},
          {"zeta0", h.zeta0},
          {"zeta1", h.zeta1},
          {"zeta2", h.zeta2}}},
        {"initial", c.initial},
        {"dt", c.dt},
        {"horizon", c.horizon},
        {"sample_stride", c.sample_stride},
        {"positivity_probe_stride", c.positivity_probe_stride},
        {"renormalize", c.renormalize},
        {"observables", obs},
        {"output", {{"directory", c.output.directory}, {"formats", c.output.formats}}},
        {"workers", c.workers},
    };
    if (c.sweep)
        j["sweep"] = {{"mode", std::string(mode_name(c.sweep->mode))},
                      {"values", c.sweep->values},
                      {"t_eval", c.sweep->t_eval}};
    return j;
}

/// Parses a config; keys absent from `j` keep the values already in `base`.
inline ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {}) {
    ExperimentConfig c = std::move(base);
    try {
        c.name = j.value("name", c.name);
        if (j.contains("modes")) {
            const auto& arr = j.at("modes");
            if (!arr.is_array() || arr.size() != kModeCount) throw ValidationError("modes: expected 6 entries");
            for (const auto& e : arr) {
                ModeSpec m;
                m.label = mode_from_name(e.at("label").get<std::string>());
                m.frequency = e.at("frequency").get<double>();
                m.gamma_out = e.value("gamma_out", 0.0);
                m.mu = e.value("mu", 0.0);
                m.cutoff = e.value("cutoff", 0);
                c.modes[index(m.label)] = m;
            }
        }
        if (j.contains("hamiltonian")) {
            const auto& h = j.at("hamiltonian");
            auto& p = c.hamiltonian;
            p.hbar = h.value("hbar", p.hbar);
            p.g_omega_up = h.value("g_omega_up", p.g_omega_up);
            p.g_omega_down = h.value("g_omega_down", p.g_omega_down);
            p.g_Omega_up = h.value("g_Omega_up", p.g_Omega_up);
            p.g_Omega_down = h.value("g_Omega_down", p.g_Omega_down);
            p.g_Omega_s = h.value("g_Omega_s", p.g_Omega_s);
            p.g_en = h.value("g_en", p.g_en);
            p.zeta0 = h.value("zeta0", p.zeta0);
            p.zeta1 = h.value("zeta1", p.zeta1);
            p.zeta2 = h.value("zeta2", p.zeta2);
        }
        if (j.contains("initial")) c.initial = j.at("initial").get<BasisState>();
        c.dt = j.value("dt", c.dt);
        c.horizon = j.value("horizon", c.horizon);
        c.sample_stride = j.value("sample_stride", c.sample_stride);
        c.positivity_probe_stride = j.value("positivity_probe_stride", c.positivity_probe_stride);
        c.renormalize = j.value("renormalize", c.renormalize);
        c.workers = j.value("workers", c.workers);
        if (j.contains("observables")) {
            c.observables.clear();
            for (const auto& o : j.at("observables"))
                c.observables.push_back({o.at("name").get<std::string>(),
                                         o.at("configurations").get<std::vector<Configuration>>()});
        }
        if (j.contains("sweep") && !j.at("sweep").is_null()) {
            const auto& s = j.at("sweep");
            Sweep sw;
            sw.mode = mode_from_name(s.at("mode").get<std::string>());
            sw.values = s.at("values").get<std::vector<double>>();
            sw.t_eval = s.value("t_eval", sw.t_eval);
            c.sweep = sw;
        }
        if (j.contains("output")) {
            const auto& o = j.at("output");
            c.output.directory = o.value("directory", c.output.directory);
            if (o.contains("formats")) c.output.formats = o.at("formats").get<std::vector<std::string>>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

inline ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("config '" + path + "': " + e.what());
    }
    return config_from_json(j, std::move(base));
}

}  // namespace h2sim
