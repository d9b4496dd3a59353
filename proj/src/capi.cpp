#include "rantor.h"

#include <cstring>
#include <new>
#include <string>

#include "json.hpp"
#include "rantor/cones.hpp"
#include "rantor/config.hpp"
#include "rantor/runner.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

int map_code(rantor::Errc c) {
    using rantor::Errc;
    switch (c) {
        case Errc::not_sign_definite:
        case Errc::cones_overlap:
        case Errc::cone_not_invariant:
        case Errc::no_expansion:
        case Errc::no_contraction:
        case Errc::eigendirection_on_boundary:
        case Errc::cap_exceeded:
        case Errc::empty_intersection:
            return RANTOR_ERR_CONE;
        default:
            return RANTOR_ERR_CONFIG;
    }
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const rantor::Error& e) {
        set_error(e.what());
        return map_code(e.code());
    } catch (const std::exception& e) {
        set_error(e.what());
        return RANTOR_ERR_CONFIG;
    }
}

}  // namespace

struct rantor_config {
    rantor::RunConfig cfg;
};

struct rantor_family {
    rantor::MatrixFamily fam;
};

extern "C" {

const char* rantor_version(void) { return "1.0.0"; }

const char* rantor_last_error(void) { return g_last_error.c_str(); }

int rantor_config_load(const char* path, rantor_config** out) {
    if (!path || !out) {
        set_error("null argument");
        return RANTOR_ERR_CONFIG;
    }
    return guarded([&] {
        *out = new rantor_config{rantor::parse_config_file(path)};
        return RANTOR_OK;
    });
}

int rantor_config_parse(const char* json_text, rantor_config** out) {
    if (!json_text || !out) {
        set_error("null argument");
        return RANTOR_ERR_CONFIG;
    }
    return guarded([&] {
        *out = new rantor_config{rantor::parse_config_string(json_text)};
        return RANTOR_OK;
    });
}

void rantor_config_free(rantor_config* cfg) { delete cfg; }

void rantor_config_set_seed(rantor_config* cfg, uint64_t seed) {
    if (cfg) cfg->cfg.seed = seed;
}

void rantor_config_set_threads(rantor_config* cfg, unsigned threads) {
    if (cfg && threads >= 1) cfg->cfg.threads = threads;
}

void rantor_config_set_self_test_corrupt(rantor_config* cfg, int enabled) {
    if (cfg) cfg->cfg.self_test_corrupt = enabled != 0;
}

namespace {

int run_common(const rantor_config* cfg, const char* out_dir,
               rantor::RunOutcome (*fn)(const rantor::RunConfig&, const std::string&)) {
    if (!cfg || !out_dir) {
        set_error("null argument");
        return RANTOR_ERR_CONFIG;
    }
    return guarded([&] {
        rantor::RunOutcome out = fn(cfg->cfg, out_dir);
        if (out.exit_code != RANTOR_OK) set_error(out.message);
        return out.exit_code;
    });
}

}  // namespace

int rantor_run_analyze(const rantor_config* cfg, const char* out_dir) {
    return run_common(cfg, out_dir, rantor::run_analyze);
}

int rantor_run_correlate(const rantor_config* cfg, const char* out_dir) {
    return run_common(cfg, out_dir, rantor::run_correlate);
}

int rantor_run_verify(const rantor_config* cfg, const char* out_dir) {
    return run_common(cfg, out_dir, rantor::run_verify);
}

int rantor_run_diophantine(const rantor_config* cfg, const char* out_dir) {
    return run_common(cfg, out_dir, rantor::run_diophantine);
}

int rantor_family_create(const int64_t* entries, const double* probs, size_t count,
                         rantor_family** out) {
    if (!entries || !probs || !out || count < 2) {
        set_error("need entries, probs and at least two matrices");
        return RANTOR_ERR_CONFIG;
    }
    return guarded([&] {
        std::vector<rantor::Automorphism> members;
        for (size_t i = 0; i < count; ++i) {
            rantor::IntMatrix m{static_cast<long>(entries[4 * i + 0]),
                                static_cast<long>(entries[4 * i + 1]),
                                static_cast<long>(entries[4 * i + 2]),
                                static_cast<long>(entries[4 * i + 3])};
            members.push_back(rantor::validate_automorphism(m));
        }
        std::vector<double> p(probs, probs + count);
        *out = new rantor_family{rantor::MatrixFamily(std::move(members), std::move(p))};
        return RANTOR_OK;
    });
}

void rantor_family_free(rantor_family* fam) { delete fam; }

int rantor_family_analyze_json(const rantor_family* fam, char** out_json) {
    if (!fam || !out_json) {
        set_error("null argument");
        return RANTOR_ERR_CONFIG;
    }
    return guarded([&] {
        auto [e, c] = rantor::default_quadrant_cones(fam->fam);
        rantor::ConeAnalysis a = rantor::analyze_cones(fam->fam, e, c);
        nlohmann::json j;
        j["pass"] = a.check.pass;
        j["lambdaE"] = a.check.lambda_e;
        j["lambdaE_sq"] = rantor::to_string(a.check.lambda_e_sq);
        j["lambdaC"] = a.check.lambda_c;
        j["lambda"] = a.check.lambda;
        j["M"] = a.escape.escape_steps;
        j["C_const"] = a.escape.c_const;
        if (a.transversality.unbounded)
            j["K"] = "unbounded";
        else
            j["K"] = a.transversality.k;
        std::string text = j.dump();
        char* buf = new char[text.size() + 1];
        std::memcpy(buf, text.c_str(), text.size() + 1);
        *out_json = buf;
        return a.check.pass ? RANTOR_OK : RANTOR_ERR_CONE;
    });
}

void rantor_string_free(char* s) { delete[] s; }

}  // extern "C"
