// Command-line driver: run, sweep, gibbs-check, dump.
//
// Exit codes: 0 success, 1 validation error, 2 numerical abort, 3 I/O error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <h2sim/experiments.hpp>

namespace {

using namespace h2sim;

enum Exit { kOk = 0, kValidation = 1, kNumerical = 2, kIo = 3 };

ExperimentConfig base_config(const std::string& path) {
    return path.empty() ? formation_experiment() : load_config(path, formation_experiment());
}

Mode sweep_mode(const std::string& s) {
    if (s == "omega-s") return Mode::Omega_s;
    if (s == "omega-n") return Mode::Omega_n;
    throw ValidationError("sweep mode must be omega-s or omega-n, got '" + s + "'");
}

void progress(const ExperimentConfig& c, bool quiet) {
    if (!quiet) std::fprintf(stderr, "%s: %ld steps of %.3g s\n", c.name.c_str(), c.step_count(), c.dt);
}

int cmd_run(const std::string& config, const std::string& out, double dt, double horizon, bool quiet) {
    ExperimentConfig c = base_config(config);
    if (!out.empty()) c.output.directory = out;
    if (dt > 0) c.dt = dt;
    if (horizon >= 0) c.horizon = horizon;
    c.validate();
    progress(c, quiet);
    RunHooks hooks;
    if (!quiet)
        hooks.on_sample = [](double t, long step) { std::fprintf(stderr, "  t = %.6g s (step %ld)\n", t, step); };
    const Trajectory t = run(c, hooks);
    for (const auto& p : emit_outputs(c, t)) std::cout << p.string() << "\n";
    for (std::size_t k = 0; k < t.names.size(); ++k)
        std::cout << t.names[k] << " = " << format12(t.series[k].back()) << "\n";
    return kOk;
}

int cmd_sweep(const std::string& config, const std::string& mode, double from, double to, double step,
              double t_eval, const std::string& out, double dt, int workers, bool quiet) {
    ExperimentConfig c = base_config(config);
    if (!out.empty()) c.output.directory = out;
    if (dt > 0) c.dt = dt;
    if (workers > 0) c.workers = workers;
    const Mode m = sweep_mode(mode);
    const auto values = mu_grid(from, to, step);
    c.horizon = std::max(c.horizon, t_eval);
    c.validate();
    if (!quiet)
        std::fprintf(stderr, "sweep over mu(%s): %zu points, t_eval = %.6g s, dt = %.3g s\n",
                     std::string(mode_name(m)).c_str(), values.size(), t_eval, c.dt);
    const SweepResult s = mu_sweep(m, values, t_eval, c, c.workers);
    for (const auto& p : emit_outputs(c, s)) std::cout << p.string() << "\n";
    std::cout << sweep_csv(s);
    return kOk;
}

int cmd_gibbs(double mu, int cutoff, double frequency, double gamma) {
    ModeSpec spec{Mode::Omega_up, frequency, gamma, mu, cutoff};
    spec.validate();
    const Basis b = single_mode_basis(spec);
    const auto rho = gibbs_field_state(spec, mu);
    const auto channels = mode_channels(b);
    // The free Hamiltonian is diagonal in the Fock basis and commutes with a
    // diagonal rho, so rho-dot reduces to the dissipative part.
    const DenseMatrix rhs = apply_lindblad_total(channels, rho.rho);
    const double residual = rhs.cwiseAbs().maxCoeff();
    const double bound = gamma * std::pow(mu, cutoff);
    std::printf("mu = %s, cutoff = %d, gamma = %s\n", format12(mu).c_str(), cutoff, format12(gamma).c_str());
    std::printf("max |rho-dot| = %s\n", format12(residual).c_str());
    std::printf("truncation bound gamma * mu^cutoff = %s\n", format12(bound).c_str());
    std::printf("%s\n", residual <= bound ? "stationary within truncation bound" : "NOT stationary");
    return residual <= bound ? kOk : kNumerical;
}

int cmd_dump(const std::string& config, const std::string& what, const std::string& out) {
    const ExperimentConfig c = base_config(config);
    const Basis b = build_basis(c);
    std::string text;
    if (what == "basis") {
        text = b.to_json().dump(1) + "\n";
    } else if (what == "hamiltonian") {
        const auto h = build_total(b, c.params());
        text = "row,col,re,im\n";
        for (const auto& e : h.entries())
            text += std::to_string(e.row) + "," + std::to_string(e.col) + "," + format12(e.value.real()) + "," +
                    format12(e.value.imag()) + "\n";
    } else {
        throw ValidationError("dump: --what must be basis or hamiltonian");
    }
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out, std::ios::binary);
        if (!(f << text)) throw IoError("cannot write '" + out + "'");
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Open-system simulator of hydrogen molecule association and dissociation"};
    app.require_subcommand(1);
    bool quiet = false;
    app.add_flag("-q,--quiet", quiet, "suppress progress on stderr");

    std::string config, out;
    double dt = -1, horizon = -1;
    auto* run = app.add_subcommand("run", "single trajectory");
    run->add_option("--config", config, "JSON config; keys not given keep the formation defaults")->required();
    run->add_option("--out", out, "output directory");
    run->add_option("--dt", dt, "time step (s)");
    run->add_option("--horizon", horizon, "final time (s)");

    std::string mode = "omega-s";
    double from = 0.0, to = 0.5, step = 0.05, t_eval = 1.2e-3;
    int workers = 0;
    auto* sweep = app.add_subcommand("sweep", "P(H2) at t_eval versus an influx ratio");
    sweep->add_option("--mode", mode, "omega-s or omega-n")->required();
    sweep->add_option("--from", from, "first mu");
    sweep->add_option("--to", to, "last mu");
    sweep->add_option("--step", step, "mu increment");
    sweep->add_option("--t-eval", t_eval, "evaluation time (s)");
    sweep->add_option("--config", config, "base JSON config");
    sweep->add_option("--out", out, "output directory");
    sweep->add_option("--dt", dt, "time step (s)");
    sweep->add_option("--workers", workers, "concurrent sweep points (0 = all cores)");

    double mu = 0.5, frequency = 1e10, gamma = 1e7;
    int cutoff = 10;
    auto* gibbs = app.add_subcommand("gibbs-check", "stationarity of the truncated thermal field state");
    gibbs->add_option("--mu", mu, "influx ratio")->required();
    gibbs->add_option("--cutoff", cutoff, "Fock cutoff")->required();
    gibbs->add_option("--frequency", frequency, "mode frequency (rad/s)");
    gibbs->add_option("--gamma", gamma, "loss rate (1/s)");

    std::string what;
    auto* dump = app.add_subcommand("dump", "basis (JSON) or Hamiltonian triplets (CSV)");
    dump->add_option("--what", what, "basis or hamiltonian")->required();
    dump->add_option("--config", config, "JSON config");
    dump->add_option("--out", out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kValidation;
    }

    try {
        if (*run) return cmd_run(config, out, dt, horizon, quiet);
        if (*sweep) return cmd_sweep(config, mode, from, to, step, t_eval, out, dt, workers, quiet);
        if (*gibbs) return cmd_gibbs(mu, cutoff, frequency, gamma);
        if (*dump) return cmd_dump(config, what, out);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const NumericalAbort& e) {
        std::cerr << "numerical abort: " << e.what() << "\n";
        return kNumerical;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kIo;
    }
    return kOk;
}
