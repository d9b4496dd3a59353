// Batch front-end over the rantor C API.

#include <cstdint>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "rantor.h"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    int64_t seed = -1;
    unsigned threads = 0;
    bool self_test_corrupt = false;
};

void add_common(CLI::App* sub, CommonOpts& opts) {
    sub->add_option("--config", opts.config_path, "JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out_dir, "output directory for artifacts");
    sub->add_option("--seed", opts.seed, "override the config seed");
    sub->add_option("--threads", opts.threads,
                    "worker threads (never affects output bytes)");
}

int run(const CommonOpts& opts, int (*fn)(const rantor_config*, const char*)) {
    rantor_config* cfg = nullptr;
    int rc = rantor_config_load(opts.config_path.c_str(), &cfg);
    if (rc != RANTOR_OK) {
        std::fprintf(stderr, "error: %s\n", rantor_last_error());
        return rc;
    }
    if (opts.seed >= 0) rantor_config_set_seed(cfg, static_cast<uint64_t>(opts.seed));
    if (opts.threads >= 1) rantor_config_set_threads(cfg, opts.threads);
    if (opts.self_test_corrupt) rantor_config_set_self_test_corrupt(cfg, 1);

    rc = fn(cfg, opts.out_dir.c_str());
    if (rc == RANTOR_OK) {
        std::printf("ok: artifacts in %s\n", opts.out_dir.c_str());
    } else {
        std::fprintf(stderr, "%s (exit %d)\n", rantor_last_error(), rc);
    }
    rantor_config_free(cfg);
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cone-certified statistics of random toral automorphism products"};
    app.require_subcommand(1);
    app.set_version_flag("--version", rantor_version());

    CommonOpts analyze_opts, correlate_opts, verify_opts, dio_opts;
    CLI::App* analyze = app.add_subcommand(
        "analyze", "verify the cone property and estimate the Lyapunov exponent");
    add_common(analyze, analyze_opts);
    CLI::App* correlate =
        app.add_subcommand("correlate", "exact correlation series with decay envelopes");
    add_common(correlate, correlate_opts);
    CLI::App* verify =
        app.add_subcommand("verify", "lattice sweeps for the complementary bounds");
    add_common(verify, verify_opts);
    verify->add_flag("--self-test-corrupt", verify_opts.self_test_corrupt,
                     "halve lambda to confirm the sweep can fail");
    CLI::App* dio = app.add_subcommand("diophantine", "eigendirection slope rational-approximation sweep");
    add_common(dio, dio_opts);

    CLI11_PARSE(app, argc, argv);

    if (analyze->parsed()) return run(analyze_opts, rantor_run_analyze);
    if (correlate->parsed()) return run(correlate_opts, rantor_run_correlate);
    if (verify->parsed()) return run(verify_opts, rantor_run_verify);
    return run(dio_opts, rantor_run_diophantine);
}
