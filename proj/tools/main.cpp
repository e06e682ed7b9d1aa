#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"

#include "phlab/experiment.hpp"

namespace {

int run_experiment_command(const std::string& config_path, const CLI::Option* seed_opt,
                           std::uint64_t seed, const CLI::Option* out_opt,
                           const std::string& out, const CLI::Option* tol_opt, double tol) {
    try {
        phlab::ExperimentConfig cfg = phlab::load_config(config_path);
        if (*seed_opt) cfg.seed = seed;
        if (*out_opt) cfg.out = out;
        if (*tol_opt) {
            if (!(tol > 0.0)) {
                std::fprintf(stderr, "config error: --tol must be positive\n");
                return 2;
            }
            cfg.tol = tol;
        }
        const phlab::ExperimentResult res = phlab::run_experiment(cfg);
        phlab::write_outputs(res, cfg);
        for (const phlab::MetricRow& r : res.metrics)
            std::printf("  [%s] %s  value=%.6g bound=%.6g\n", r.satisfied ? "ok" : "FAIL",
                        r.name.c_str(), r.value, r.bound);
        std::printf("%s: %s (results in %s)\n", res.experiment.c_str(),
                    res.pass ? "pass" : "FAIL", cfg.out.c_str());
        return res.pass ? 0 : 1;
    } catch (const phlab::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const phlab::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for smooth time changes of a cat-map suspension flow"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    std::string out;
    double tol = 0.0;

    CLI::App* run = app.add_subcommand("run", "run an experiment described by a JSON config");
    run->add_option("config", config_path, "path to the config file")->required();
    const CLI::Option* seed_opt = run->add_option("--seed", seed, "override the config seed");
    const CLI::Option* out_opt =
        run->add_option("--out", out, "override the output directory");
    const CLI::Option* tol_opt = run->add_option("--tol", tol, "override the tolerance");

    CLI::App* list = app.add_subcommand("list", "list experiments with their config fields");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (list->parsed()) {
        for (const phlab::ExperimentInfo& info : phlab::list_experiments())
            std::printf("%-12s %s\n%-12s config fields: %s\n", std::string(info.name).c_str(),
                        std::string(info.summary).c_str(), "", std::string(info.fields).c_str());
        return 0;
    }
    return run_experiment_command(config_path, seed_opt, seed, out_opt, out, tol_opt, tol);
}
