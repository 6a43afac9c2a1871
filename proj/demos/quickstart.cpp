// Builds the formation scenario, prints its basis and Hamiltonian sizes, then
// integrates a short stretch and writes CSV/JSON/SVG into ./quickstart-out.

#include <cstdio>

#include <h2sim/experiments.hpp>

int main() {
    using namespace h2sim;
    ExperimentConfig c = formation_experiment();
    c.name = "quickstart";
    c.horizon = 2e-7;  // 2000 steps; the full run is 1.2e-3 s
    c.sample_stride = 100;
    c.output.directory = "quickstart-out";

    const Basis b = build_basis(c);
    const SparseOperator h = build_total(b, c.params());
    std::printf("basis: %zu states, H: %zu non-zeros\n", b.size(), h.nonzeros());

    const Trajectory t = run(c);
    for (std::size_t k = 0; k < t.names.size(); ++k)
        std::printf("%-12s %.6f\n", t.names[k].c_str(), t.series[k].back());
    std::printf("trace %.12f, %.2f s\n", t.trace.back(), t.runtime_seconds);
    for (const auto& p : emit_outputs(c, t)) std::printf("wrote %s\n", p.string().c_str());
}
