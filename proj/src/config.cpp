#include "rantor/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rantor {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& msg) {
    throw Error(Errc::config_error, path + ": " + msg);
}

const json& need(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) bad(path + "/" + key, "missing field");
    return j.at(key);
}

long need_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) bad(path, "expected integer");
    return j.get<long>();
}

double need_num(const json& j, const std::string& path) {
    if (!j.is_number()) bad(path, "expected number");
    return j.get<double>();
}

IntVec2 parse_vec(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) bad(path, "expected [int, int]");
    return IntVec2{need_int(j.at(0), path + "/0"), need_int(j.at(1), path + "/1")};
}

IntMatrix parse_matrix(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) bad(path, "expected [[a,b],[c,d]]");
    const json& r0 = j.at(0);
    const json& r1 = j.at(1);
    if (!r0.is_array() || r0.size() != 2 || !r1.is_array() || r1.size() != 2)
        bad(path, "expected [[a,b],[c,d]]");
    return IntMatrix{need_int(r0.at(0), path + "/0/0"), need_int(r0.at(1), path + "/0/1"),
                     need_int(r1.at(0), path + "/1/0"), need_int(r1.at(1), path + "/1/1")};
}

ObservableSpec parse_observable(const json& j, const std::string& path) {
    ObservableSpec spec;
    if (!j.is_object()) bad(path, "expected object");
    if (j.contains("depth")) spec.depth = static_cast<uint32_t>(need_int(j.at("depth"), path + "/depth"));
    if (j.contains("real")) {
        if (!j.at("real").is_boolean()) bad(path + "/real", "expected boolean");
        spec.real_valued = j.at("real").get<bool>();
    }
    const json& modes = need(j, path, "modes");
    if (!modes.is_array() || modes.empty()) bad(path + "/modes", "expected nonempty array");
    for (size_t i = 0; i < modes.size(); ++i) {
        std::string mp = path + "/modes/" + std::to_string(i);
        const json& m = modes.at(i);
        if (!m.is_object()) bad(mp, "expected object");
        ModeSpec ms;
        const json& q = need(m, mp, "q");
        IntVec2 qi = parse_vec(q, mp + "/q");
        ms.qx = mpz_get_si(qi.x.get_mpz_t());
        ms.qy = mpz_get_si(qi.y.get_mpz_t());
        if (m.contains("re")) ms.re = need_num(m.at("re"), mp + "/re");
        if (m.contains("im")) ms.im = need_num(m.at("im"), mp + "/im");
        if (m.contains("config")) {
            const json& c = m.at("config");
            if (!c.is_array()) bad(mp + "/config", "expected array of letters");
            if (c.size() != spec.depth) bad(mp + "/config", "length must equal depth");
            for (size_t l = 0; l < c.size(); ++l) {
                long v = need_int(c.at(l), mp + "/config/" + std::to_string(l));
                if (v < 0) bad(mp + "/config/" + std::to_string(l), "letters are nonnegative");
                ms.config.push_back(static_cast<uint32_t>(v));
            }
        }
        spec.modes.push_back(std::move(ms));
    }
    return spec;
}

}  // namespace

RunConfig parse_config_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(Errc::config_error, std::string("JSON parse failure: ") + e.what());
    }
    if (!j.is_object()) bad("/", "top level must be an object");
    long version = need_int(need(j, "", "version"), "/version");
    if (version != 1) bad("/version", "unsupported schema version");

    RunConfig cfg;
    const json& mats = need(j, "", "matrices");
    if (!mats.is_array() || mats.size() < 2) bad("/matrices", "need at least two matrices");
    for (size_t i = 0; i < mats.size(); ++i)
        cfg.matrices.push_back(parse_matrix(mats.at(i), "/matrices/" + std::to_string(i)));

    const json& probs = need(j, "", "probs");
    if (!probs.is_array() || probs.size() != mats.size())
        bad("/probs", "need one probability per matrix");
    double prob_sum = 0;
    for (size_t i = 0; i < probs.size(); ++i) {
        double p = need_num(probs.at(i), "/probs/" + std::to_string(i));
        if (!(p >= 0.0 && p <= 1.0)) bad("/probs/" + std::to_string(i), "must lie in [0,1]");
        prob_sum += p;
        cfg.probs.push_back(p);
    }
    if (std::abs(prob_sum - 1.0) > 1e-12) bad("/probs", "entries must sum to 1");

    if (j.contains("cones")) {
        const json& c = j.at("cones");
        if (c.is_string() && c.get<std::string>() == "auto") {
            cfg.auto_cones = true;
        } else if (c.is_object()) {
            cfg.auto_cones = false;
            const json& e = need(c, "/cones", "expansion");
            const json& k = need(c, "/cones", "contraction");
            if (!e.is_array() || e.size() != 2) bad("/cones/expansion", "expected two rays");
            if (!k.is_array() || k.size() != 2) bad("/cones/contraction", "expected two rays");
            cfg.expansion_rays = {parse_vec(e.at(0), "/cones/expansion/0"),
                                  parse_vec(e.at(1), "/cones/expansion/1")};
            cfg.contraction_rays = {parse_vec(k.at(0), "/cones/contraction/0"),
                                    parse_vec(k.at(1), "/cones/contraction/1")};
        } else {
            bad("/cones", "expected \"auto\" or {expansion, contraction}");
        }
    }

    if (j.contains("beta")) {
        cfg.beta = need_num(j.at("beta"), "/beta");
        if (!(cfg.beta > 0.0 && cfg.beta <= 1.0)) bad("/beta", "must lie in (0,1]");
    }
    if (j.contains("observables")) {
        const json& o = j.at("observables");
        if (!o.is_object()) bad("/observables", "expected object with f and g");
        if (o.contains("f")) cfg.obs_f = parse_observable(o.at("f"), "/observables/f");
        if (o.contains("g")) cfg.obs_g = parse_observable(o.at("g"), "/observables/g");
    }

    auto opt_int = [&](const char* key, auto& slot, long lo, long hi) {
        if (!j.contains(key)) return;
        long v = need_int(j.at(key), std::string("/") + key);
        if (v < lo || v > hi) bad(std::string("/") + key, "out of range");
        slot = static_cast<std::decay_t<decltype(slot)>>(v);
    };
    opt_int("n_max", cfg.n_max, 0, 100000);
    opt_int("omega_samples", cfg.omega_samples, 1, 1000000);
    opt_int("sweep_radius", cfg.sweep_radius, 1, 100000);
    opt_int("threads", cfg.threads, 1, 256);
    opt_int("escape_cap", cfg.escape_cap, 1, 4096);
    opt_int("product_length", cfg.product_length, 0, 24);
    opt_int("quadrature_n_max", cfg.quadrature_n_max, -1, 64);
    opt_int("quadrature_grid_cap", cfg.quadrature_grid_cap, 2, 1 << 20);
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_integer()) bad("/seed", "expected integer");
        cfg.seed = j.at("seed").get<uint64_t>();
    }

    if (j.contains("spectrum")) {
        const json& s = j.at("spectrum");
        if (!s.is_object()) bad("/spectrum", "expected object");
        if (s.contains("steps"))
            cfg.spectrum_steps = static_cast<size_t>(need_int(s.at("steps"), "/spectrum/steps"));
        if (s.contains("trials"))
            cfg.spectrum_trials = static_cast<size_t>(need_int(s.at("trials"), "/spectrum/trials"));
        if (cfg.spectrum_steps < 1 || cfg.spectrum_trials < 1)
            bad("/spectrum", "steps and trials must be positive");
    }
    if (j.contains("lemma2")) {
        const json& s = j.at("lemma2");
        if (!s.is_object()) bad("/lemma2", "expected object");
        if (s.contains("eps_factors")) {
            const json& e = s.at("eps_factors");
            if (!e.is_array() || e.empty()) bad("/lemma2/eps_factors", "expected nonempty array");
            cfg.lemma2_eps_factors.clear();
            for (size_t i = 0; i < e.size(); ++i) {
                double v = need_num(e.at(i), "/lemma2/eps_factors/" + std::to_string(i));
                if (!(v > 0.0 && v < 1.0)) bad("/lemma2/eps_factors", "factors must lie in (0,1)");
                cfg.lemma2_eps_factors.push_back(v);
            }
        }
        if (s.contains("samples"))
            cfg.lyapunov_samples =
                static_cast<size_t>(need_int(s.at("samples"), "/lemma2/samples"));
        if (s.contains("radius")) cfg.lyapunov_radius = need_int(s.at("radius"), "/lemma2/radius");
    }
    if (j.contains("diophantine")) {
        const json& d = j.at("diophantine");
        if (!d.is_object()) bad("/diophantine", "expected object");
        if (d.contains("member"))
            cfg.diophantine_member =
                static_cast<size_t>(need_int(d.at("member"), "/diophantine/member"));
        if (d.contains("direction")) {
            std::string dir = d.at("direction").is_string() ? d.at("direction").get<std::string>()
                                                            : std::string();
            if (dir == "unstable")
                cfg.diophantine_unstable = true;
            else if (dir == "stable")
                cfg.diophantine_unstable = false;
            else
                bad("/diophantine/direction", "expected \"unstable\" or \"stable\"");
        }
        if (d.contains("eps")) {
            cfg.diophantine_eps = need_num(d.at("eps"), "/diophantine/eps");
            if (cfg.diophantine_eps < 0.0) bad("/diophantine/eps", "must be >= 0");
        }
        if (d.contains("q_max")) cfg.diophantine_q = need_int(d.at("q_max"), "/diophantine/q_max");
        if (cfg.diophantine_q < 1) bad("/diophantine/q_max", "must be >= 1");
    }
    if (j.contains("words")) {
        const json& ws = j.at("words");
        if (!ws.is_array()) bad("/words", "expected array of words");
        for (size_t i = 0; i < ws.size(); ++i) {
            const json& w = ws.at(i);
            std::string wp = "/words/" + std::to_string(i);
            if (!w.is_array()) bad(wp, "expected array of letters");
            std::vector<uint32_t> letters;
            for (size_t l = 0; l < w.size(); ++l) {
                long v = need_int(w.at(l), wp + "/" + std::to_string(l));
                if (v < 0 || static_cast<size_t>(v) >= cfg.matrices.size())
                    bad(wp + "/" + std::to_string(l), "letter out of family range");
                letters.push_back(static_cast<uint32_t>(v));
            }
            cfg.explicit_words.push_back(std::move(letters));
        }
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::config_error, "cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_string(ss.str());
}

MatrixFamily build_family(const RunConfig& cfg) {
    std::vector<Automorphism> members;
    members.reserve(cfg.matrices.size());
    for (size_t i = 0; i < cfg.matrices.size(); ++i) {
        try {
            members.push_back(validate_automorphism(cfg.matrices[i]));
        } catch (const Error& e) {
            throw Error(Errc::config_error,
                        "/matrices/" + std::to_string(i) + ": " + e.what());
        }
    }
    try {
        return MatrixFamily(std::move(members), cfg.probs);
    } catch (const Error& e) {
        throw Error(Errc::config_error, std::string("/probs: ") + e.what());
    }
}

std::pair<Cone, Cone> resolve_cones(const RunConfig& cfg, const MatrixFamily& family) {
    if (cfg.auto_cones) return default_quadrant_cones(family);
    try {
        Cone e((*cfg.expansion_rays)[0], (*cfg.expansion_rays)[1]);
        Cone c((*cfg.contraction_rays)[0], (*cfg.contraction_rays)[1]);
        return {e, c};
    } catch (const Error& e) {
        throw Error(Errc::config_error, std::string("/cones: ") + e.what());
    }
}

TrigObservable build_observable(const ObservableSpec& spec, size_t family_size, double beta) {
    TrigObservable obs(spec.depth, static_cast<uint32_t>(family_size), beta);
    for (const ModeSpec& m : spec.modes) {
        Cplx coeff{m.re, m.im};
        if (m.config.empty()) {
            obs.add_mode_all({m.qx, m.qy}, coeff);
        } else {
            size_t idx = 0, base = 1;
            for (uint32_t letter : m.config) {
                if (letter >= family_size)
                    throw Error(Errc::config_error, "observable config letter out of range");
                idx += letter * base;
                base *= family_size;
            }
            obs.add_mode(idx, {m.qx, m.qy}, coeff);
        }
    }
    if (spec.real_valued && !obs.is_real_valued(0.0))
        throw Error(Errc::config_error,
                    "observable flagged real but coefficients lack conjugate symmetry");
    return obs;
}

}  // namespace rantor
