// Command-line front end: simulate, meshgen, verify.
#include <coupledflow/mesh_generator.hpp>
#include <coupledflow/scenario.hpp>
#include <coupledflow/simulation.hpp>
#include <coupledflow/verification.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

namespace {

int run_simulate(const std::string& config_path, const std::string& preset_name,
                 const std::string& mode, const std::string& outdir, const std::string& mesh) {
    cflow::ScenarioConfig c = config_path.empty() ? cflow::preset(preset_name)
                                                  : cflow::load_config_file(config_path, preset_name);
    if (!mode.empty()) c.mode = mode == "single" ? cflow::CouplingMode::single_step : cflow::CouplingMode::two_step;
    cflow::RunOptions opts;
    opts.outdir = outdir;
    opts.mesh_path_override = mesh;
    const auto start = std::chrono::steady_clock::now();
    const cflow::RunResult r = cflow::run_scenario(c, opts);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto& last = r.ledger.rows().back();
    std::cout << c.name << " (" << cflow::mode_name(c.mode) << "-step): " << r.steps.size() << " steps on "
              << r.num_triangles << " triangles, " << r.num_interface_cells << " interface cells, "
              << secs << " s\n"
              << "  final V_grnd = " << last.V_grnd << " m2, V_over = " << last.V_over
              << " m2, cumulative defect = " << last.cumdV << " m2\n";
    if (!outdir.empty()) std::cout << "  outputs in " << outdir << '\n';
    return 0;
}

int run_meshgen(const std::string& preset_name, double h, const std::string& out) {
    const cflow::ScenarioConfig c = cflow::preset(preset_name);
    const cflow::TriMesh mesh = cflow::generate_structured_mesh({c.geometry, h, c.surface_band});
    std::ofstream file(out);
    if (!file) throw std::runtime_error("cannot write '" + out + "'");
    cflow::write_mesh(file, mesh);
    std::cout << "wrote " << mesh.num_triangles() << " triangles to " << out << '\n';
    return 0;
}

int run_verify(const std::string& suite, bool verbose) {
    cflow::verification::RunCache cache;
    bool all_passed = true;
    for (int id : cflow::verification::suite_criteria(suite)) {
        const auto r = cflow::verification::run_criterion(id, cache, verbose ? &std::cout : nullptr);
        cflow::verification::print(std::cout, r);
        all_passed = all_passed && r.passed;
    }
    return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coupled surface/subsurface flow simulator"};
    app.require_subcommand(1);

    std::string config, preset_name, mode, outdir, mesh;
    auto* sim = app.add_subcommand("simulate", "Run a scenario");
    sim->add_option("--config", config, "Scenario config file");
    sim->add_option("--preset", preset_name, "Base preset")->check(CLI::IsMember({"tc1", "tc2", "tc3"}));
    sim->add_option("--mode", mode, "Coupling mode")->check(CLI::IsMember({"single", "two"}));
    sim->add_option("--outdir", outdir, "Output directory");
    sim->add_option("--mesh", mesh, "Mesh file overriding the generator");

    std::string mg_preset, mg_out;
    double mg_h = 0.0;
    auto* mg = app.add_subcommand("meshgen", "Write a generated mesh for a preset geometry");
    mg->add_option("--preset", mg_preset)->required()->check(CLI::IsMember({"tc1", "tc2", "tc3"}));
    mg->set_help_flag("--help", "Print this help message and exit");
    mg->add_option("--h", mg_h, "Target cell size (m)")->required()->check(CLI::PositiveNumber);
    mg->add_option("--out", mg_out)->required();

    std::string suite;
    bool verbose = false;
    auto* ver = app.add_subcommand("verify", "Run acceptance checks");
    ver->add_option("--suite", suite, "conservation, convergence, maxprinciple or all")
        ->required()
        ->check(CLI::IsMember({"conservation", "convergence", "maxprinciple", "all"}));
    ver->add_flag("--verbose", verbose, "Print intermediate errors");

    CLI11_PARSE(app, argc, argv);
    try {
        if (sim->parsed()) {
            if (config.empty() && preset_name.empty()) {
                std::cerr << "simulate: --config or --preset is required\n";
                return 2;
            }
            return run_simulate(config, preset_name, mode, outdir, mesh);
        }
        if (mg->parsed()) return run_meshgen(mg_preset, mg_h, mg_out);
        if (ver->parsed()) return run_verify(suite, verbose);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
