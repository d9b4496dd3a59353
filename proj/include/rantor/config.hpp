#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rantor/cones.hpp"
#include "rantor/lattice.hpp"
#include "rantor/observables.hpp"

namespace rantor {

struct ModeSpec {
    long qx = 0;
    long qy = 0;
    std::vector<uint32_t> config;  // cylinder letters; empty = every configuration
    double re = 0;
    double im = 0;
};

struct ObservableSpec {
    uint32_t depth = 0;
    std::vector<ModeSpec> modes;
    bool real_valued = false;  // when set, conjugate symmetry is enforced
};

/// Parsed and validated run configuration (JSON, schema version 1).
struct RunConfig {
    std::vector<IntMatrix> matrices;
    std::vector<double> probs;

    bool auto_cones = true;
    std::optional<std::array<IntVec2, 2>> expansion_rays;
    std::optional<std::array<IntVec2, 2>> contraction_rays;

    double beta = 1.0;
    std::optional<ObservableSpec> obs_f;
    std::optional<ObservableSpec> obs_g;

    int n_max = 40;
    size_t omega_samples = 50;
    long sweep_radius = 50;
    uint64_t seed = 1;
    unsigned threads = 1;
    int escape_cap = 64;
    int product_length = 12;

    size_t spectrum_steps = 10000;
    size_t spectrum_trials = 32;

    std::vector<double> lemma2_eps_factors{0.02, 0.05, 0.1};
    size_t lyapunov_samples = 10;
    long lyapunov_radius = 20;

    int quadrature_n_max = 4;
    long quadrature_grid_cap = 8192;

    size_t diophantine_member = 0;
    bool diophantine_unstable = true;
    double diophantine_eps = 0.0;
    long diophantine_q = 1000;

    std::vector<std::vector<uint32_t>> explicit_words;  // correlate; empty = sample

    bool self_test_corrupt = false;  // CLI override, verify only
};

/// Throw Error(config_error) with a field-path diagnostic on any problem.
RunConfig parse_config_string(const std::string& text);
RunConfig parse_config_file(const std::string& path);

MatrixFamily build_family(const RunConfig& cfg);
std::pair<Cone, Cone> resolve_cones(const RunConfig& cfg, const MatrixFamily& family);
TrigObservable build_observable(const ObservableSpec& spec, size_t family_size, double beta);

}  // namespace rantor
