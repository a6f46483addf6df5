#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "starkres/experiments.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::string emit = "json";
    int threads = 1;
};

void add_common(CLI::App* sub, CommonArgs& args) {
    sub->add_option("--config", args.config_path, "scenario config file (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", args.out_dir, "output directory");
    sub->add_option("--emit", args.emit, "comma-separated formats: json,csv,svg");
    sub->add_option("--threads", args.threads, "worker threads")->check(CLI::PositiveNumber);
}

int run(const std::string& name, const CommonArgs& args) {
    starkres::ScenarioConfig config = starkres::load_config(args.config_path);
    starkres::ExperimentReport report = starkres::run_experiment(name, config, args.threads);
    auto files = starkres::emit_report(report, args.out_dir, starkres::parse_emit(args.emit));
    for (const auto& f : files) std::printf("wrote %s\n", f.c_str());
    for (const auto& v : report.verdicts)
        std::printf("%-34s %s  measured=%.6g tolerance=%.6g %s\n", v.name.c_str(),
                    v.pass ? "PASS" : "FAIL", v.measured, v.tolerance, v.detail.c_str());
    return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shape-resonance workbench for 2D magnetic Stark Hamiltonians"};
    app.require_subcommand(1);

    CommonArgs args;
    const char* names[] = {"volume", "bottom", "weyl", "gap", "nontrap", "real_theta",
                           "theta_stability"};
    const char* descs[] = {"trapped-set volume by quadrature and Monte Carlo",
                           "bottom-of-well spectrum against the harmonic model",
                           "eigenvalue counts against the volume prediction",
                           "resonance width gap structure",
                           "non-trapping window and resolvent probes",
                           "real-theta similarity refinement study",
                           "resonance stability under distortion changes"};
    for (int i = 0; i < 7; ++i) add_common(app.add_subcommand(names[i], descs[i]), args);

    CLI11_PARSE(app, argc, argv);
    std::string chosen = app.get_subcommands().front()->get_name();
    try {
        return run(chosen, args);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
