#include "rantor/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "json.hpp"
#include "rantor/correlations.hpp"
#include "rantor/random_model.hpp"
#include "rantor/spectrum.hpp"
#include "rantor/verification.hpp"

namespace rantor {

namespace {

using nlohmann::json;

// seed stream tags; every subsystem draws from its own derived stream
constexpr uint64_t kStreamSpectrum = 0xA1;
constexpr uint64_t kStreamLemma1 = 0xB1;
constexpr uint64_t kStreamEscape = 0xB2;
constexpr uint64_t kStreamLemma2 = 0xB3;
constexpr uint64_t kStreamCorrelate = 0xC0;

int exit_for(Errc c) {
    switch (c) {
        case Errc::not_sign_definite:
        case Errc::cones_overlap:
        case Errc::cone_not_invariant:
        case Errc::no_expansion:
        case Errc::no_contraction:
        case Errc::eigendirection_on_boundary:
        case Errc::cap_exceeded:
        case Errc::empty_intersection:
            return kExitConeFailure;
        default:
            return kExitConfig;
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::io_error, "cannot write " + path);
    out << text;
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::string rat_str(const BigRat& r) { return to_string(r); }

json vec_json(const IntVec2& v) {
    return json::array({to_string(v.x), to_string(v.y)});
}

json cone_json(const Cone& c) { return json::array({vec_json(c.u1()), vec_json(c.u2())}); }

json clauses_json(const ConeCheckReport& rep) {
    json arr = json::array();
    for (const ConeClause& c : rep.clauses) {
        json e{{"name", c.name}, {"pass", c.pass}};
        if (!c.witness.empty()) e["witness"] = c.witness;
        arr.push_back(e);
    }
    return arr;
}

json violations_json(const std::vector<Violation>& vs, size_t cap = 100) {
    json arr = json::array();
    for (size_t i = 0; i < vs.size() && i < cap; ++i) {
        const Violation& v = vs[i];
        arr.push_back({{"omega", v.omega_id},
                       {"q", v.q},
                       {"n", v.n},
                       {"bound", v.bound},
                       {"detail", v.detail}});
    }
    return arr;
}

struct Workspace {
    MatrixFamily family;
    Cone expansion;
    Cone contraction;
    ConeAnalysis analysis;
};

// family + cones + full cone analysis, or a written failure artifact
Workspace prepare(const RunConfig& cfg, const std::string& out_dir, const char* kind) {
    MatrixFamily family = build_family(cfg);
    auto [e, c] = resolve_cones(cfg, family);
    ConeAnalysis analysis = analyze_cones(family, e, c, cfg.escape_cap);
    if (!analysis.check.pass) {
        json j{{"version", 1},
               {"kind", kind},
               {"pass", false},
               {"coneCheck", {{"pass", false}, {"clauses", clauses_json(analysis.check)}}}};
        write_json(out_dir + "/" + kind + std::string(".json"), j);
        throw Error(analysis.check.failure.value_or(Errc::cone_not_invariant),
                    "cone property failed; see " + std::string(kind) + ".json for witnesses");
    }
    return Workspace{std::move(family), e, c, std::move(analysis)};
}

json constants_json(const ConeAnalysis& a) {
    json k;
    if (a.transversality.unbounded)
        k = "unbounded";
    else
        k = a.transversality.k;
    json out{{"lambdaE", a.check.lambda_e},
             {"lambdaE_sq", rat_str(a.check.lambda_e_sq)},
             {"lambdaC", a.check.lambda_c},
             {"lambdaC_inv_sq", rat_str(a.check.lambda_c_inv_sq)},
             {"lambda", a.check.lambda},
             {"lambda_sq", rat_str(a.check.lambda_sq)},
             {"rho", -std::log(a.check.lambda)},
             {"M", a.escape.escape_steps},
             {"C_const", a.escape.c_const},
             {"mu", a.escape.mu},
             {"K", k},
             {"sharedBoundary", a.check.shared_boundary}};
    if (!a.transversality.unbounded) out["K_sq"] = rat_str(a.transversality.k_sq);
    return out;
}

struct CsvWriter {
    std::ofstream out;

    CsvWriter(const std::string& path, const std::string& header) : out(path, std::ios::binary) {
        if (!out) throw Error(Errc::io_error, "cannot write " + path);
        out << header << "\n";
    }
    void row(const std::vector<std::string>& fields) {
        for (size_t i = 0; i < fields.size(); ++i) {
            if (i) out << ",";
            out << fields[i];
        }
        out << "\n";
    }
};

}  // namespace

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

RunOutcome run_analyze(const RunConfig& cfg, const std::string& out_dir) {
    try {
        std::filesystem::create_directories(out_dir);
        Workspace ws = prepare(cfg, out_dir, "analyze");

        SpectrumEstimate chi = estimate_top_exponent(
            ws.family, cfg.spectrum_steps, cfg.spectrum_trials,
            derive_seed(cfg.seed, kStreamSpectrum), cfg.threads);

        double lower = std::log(std::max(1.0 / ws.analysis.check.lambda_c,
                                         ws.analysis.check.lambda_e));
        double upper = 0;
        json members = json::array();
        for (size_t i = 0; i < ws.family.size(); ++i) {
            const Automorphism& a = ws.family.member(i);
            EigenData ed = eigen_data(a);
            upper = std::max(upper, std::log(std::abs(static_cast<double>(ed.lambda_u))));
            members.push_back({{"matrix",
                                json::array({json::array({to_string(a.matrix().a),
                                                          to_string(a.matrix().b)}),
                                             json::array({to_string(a.matrix().c),
                                                          to_string(a.matrix().d)})})},
                               {"trace", to_string(a.trace())},
                               {"lambda_u", static_cast<double>(ed.lambda_u)},
                               {"lambda_s", static_cast<double>(ed.lambda_s)},
                               {"slope_u", static_cast<double>(ed.slope_u)},
                               {"slope_s", static_cast<double>(ed.slope_s)}});
        }
        bool thm2 = chi.chi_top >= lower - 3 * chi.stderr_mean &&
                    chi.chi_top <= upper + 3 * chi.stderr_mean;

        json j{{"version", 1},
               {"kind", "analyze"},
               {"pass", thm2},
               {"seed", cfg.seed},
               {"members", members},
               {"cones",
                {{"mode", cfg.auto_cones ? "auto" : "explicit"},
                 {"expansion", cone_json(ws.expansion)},
                 {"contraction", cone_json(ws.contraction)}}},
               {"coneCheck", {{"pass", true}, {"clauses", clauses_json(ws.analysis.check)}}},
               {"constants", constants_json(ws.analysis)},
               {"spectrum",
                {{"chi", chi.chi_top},
                 {"chi1", -chi.chi_top},  // det = 1: chi^(1) = -chi^(2)
                 {"stderr", chi.stderr_mean},
                 {"steps", chi.n_steps},
                 {"trials", chi.trials}}},
               {"theorem2", {{"lower", lower}, {"upper", upper}, {"pass", thm2}}}};
        write_json(out_dir + "/analyze.json", j);
        return {thm2 ? kExitOk : kExitViolation,
                thm2 ? "analysis written" : "Lyapunov estimate outside the certified interval"};
    } catch (const Error& e) {
        return {exit_for(e.code()), e.what()};
    }
}

RunOutcome run_correlate(const RunConfig& cfg, const std::string& out_dir) {
    try {
        std::filesystem::create_directories(out_dir);
        if (!cfg.obs_f || !cfg.obs_g)
            throw Error(Errc::config_error, "/observables: correlate needs both f and g");
        Workspace ws = prepare(cfg, out_dir, "correlate");
        TrigObservable f = build_observable(*cfg.obs_f, ws.family.size(), cfg.beta);
        TrigObservable g = build_observable(*cfg.obs_g, ws.family.size(), cfg.beta);

        size_t n_max = static_cast<size_t>(cfg.n_max);
        size_t word_len = n_max + std::max(f.depth(), g.depth()) + 1;

        std::vector<Word> words;
        if (!cfg.explicit_words.empty()) {
            for (size_t s = 0; s < cfg.explicit_words.size(); ++s) {
                Word w;
                w.letters = cfg.explicit_words[s];
                if (w.size() < word_len)
                    throw Error(Errc::config_error,
                                "/words/" + std::to_string(s) + ": need length >= " +
                                    std::to_string(word_len));
                words.push_back(std::move(w));
            }
        } else {
            uint64_t base = derive_seed(cfg.seed, kStreamCorrelate);
            for (size_t s = 0; s < cfg.omega_samples; ++s)
                words.push_back(OmegaStream(derive_seed(base, s), ws.family.probs()).word(word_len));
        }

        SpectrumEstimate chi = estimate_top_exponent(
            ws.family, cfg.spectrum_steps, cfg.spectrum_trials,
            derive_seed(cfg.seed, kStreamSpectrum), cfg.threads);
        double eps = 0.05 * chi.chi_top;
        MatrixFamily tilde_fam = ws.family.tilde_family();
        auto [te, tc] = tilde_cones(ws.expansion, ws.contraction);
        Lemma2Estimate c_eps = estimate_lemma2_constant(
            tilde_fam, te, tc, chi.chi_top, eps, cfg.lyapunov_radius,
            std::min<int>(cfg.n_max, 25), cfg.lyapunov_samples,
            derive_seed(cfg.seed, kStreamLemma2), cfg.threads);
        LyapunovEnvelopeData lyap{chi.chi_top, eps, c_eps.value};

        std::vector<CorrelationSeries> series(words.size());
        std::vector<std::vector<std::pair<std::string, std::string>>> quad(words.size());
        auto work = [&](size_t lo, size_t hi) {
            for (size_t s = lo; s < hi; ++s) {
                series[s] = build_series(ws.family, words[s], s, f, g, cfg.beta, n_max,
                                         ws.analysis, lyap);
                quad[s].resize(n_max + 1);
                for (size_t n = 0; n <= n_max; ++n) {
                    if (cfg.quadrature_n_max < 0 || n > static_cast<size_t>(cfg.quadrature_n_max))
                        continue;
                    long grid = quadrature_grid_size(ws.family, words[s], f, g, n);
                    if (grid <= cfg.quadrature_grid_cap) {
                        Cplx qv = correlation_quadrature(ws.family, words[s], f, g, n, grid);
                        quad[s][n] = {fmt17(qv.real()), fmt17(qv.imag())};
                    }
                }
            }
        };
        if (cfg.threads <= 1 || words.size() < 2) {
            work(0, words.size());
        } else {
            unsigned nt = std::min<unsigned>(cfg.threads, static_cast<unsigned>(words.size()));
            std::vector<std::thread> pool;
            for (unsigned c = 0; c < nt; ++c)
                pool.emplace_back(work, words.size() * c / nt, words.size() * (c + 1) / nt);
            for (auto& th : pool) th.join();
        }

        CsvWriter csv(out_dir + "/correlations.csv",
                      "omega_id,n,re,im,abs,envelope,envelope_lyapunov,quadrature_re,quadrature_im");
        size_t violations = 0;
        double max_abs = 0, max_ratio = 0;
        json fits = json::array();
        for (size_t s = 0; s < series.size(); ++s) {
            std::vector<Cplx> values(n_max + 1);
            for (const CorrelationPoint& p : series[s].points) {
                values[p.n] = p.value;
                max_abs = std::max(max_abs, p.abs);
                if (p.envelope > 0) max_ratio = std::max(max_ratio, p.abs / p.envelope);
                if (p.abs > p.envelope) ++violations;
                csv.row({std::to_string(s), std::to_string(p.n), fmt17(p.value.real()),
                         fmt17(p.value.imag()), fmt17(p.abs), fmt17(p.envelope),
                         fmt17(p.envelope_lyapunov), quad[s][p.n].first, quad[s][p.n].second});
            }
            if (auto fit = fit_decay_rate(values))
                fits.push_back({{"omega", s}, {"rate", fit->rate}, {"usable", fit->usable}});
        }

        json j{{"version", 1},
               {"kind", "correlate"},
               {"pass", violations == 0},
               {"seed", cfg.seed},
               {"beta", cfg.beta},
               {"omegaSamples", series.size()},
               {"nMax", cfg.n_max},
               {"rows", series.size() * (n_max + 1)},
               {"bnormF", bnorm(f, cfg.beta)},
               {"bnormG", bnorm(g, cfg.beta)},
               {"envelopeViolations", violations},
               {"maxAbs", max_abs},
               {"maxEnvelopeRatio", max_ratio},
               {"decayFits", fits},
               {"chi", chi.chi_top},
               {"chiStderr", chi.stderr_mean},
               {"eps", eps},
               {"cEps", {{"value", c_eps.value}, {"label", "empirical"}}},
               {"constants", constants_json(ws.analysis)}};
        write_json(out_dir + "/correlate.json", j);
        if (violations)
            return {kExitViolation,
                    std::to_string(violations) + " correlation values exceeded the envelope"};
        return {kExitOk, "correlations written"};
    } catch (const Error& e) {
        return {exit_for(e.code()), e.what()};
    }
}

RunOutcome run_verify(const RunConfig& cfg, const std::string& out_dir) {
    try {
        std::filesystem::create_directories(out_dir);
        Workspace ws = prepare(cfg, out_dir, "verify");

        MatrixFamily tilde_fam = ws.family.tilde_family();
        auto [te, tc] = tilde_cones(ws.expansion, ws.contraction);
        ConeCheckReport tilde_check = verify_cone_property(tilde_fam, te, tc);
        bool rates_match = tilde_check.pass &&
                           tilde_check.lambda_e_sq == ws.analysis.check.lambda_e_sq &&
                           tilde_check.lambda_c_inv_sq == ws.analysis.check.lambda_c_inv_sq;

        CorruptMode corrupt = cfg.self_test_corrupt ? CorruptMode::halve_lambda : CorruptMode::none;
        SweepReport lemma1 = verify_lemma_bounds(
            tilde_fam, te, tc, ws.analysis.check.lambda_sq, ws.analysis.escape.c_const_sq_lo,
            cfg.sweep_radius, cfg.n_max, cfg.omega_samples, derive_seed(cfg.seed, kStreamLemma1),
            corrupt, cfg.threads);
        SweepReport escape = escape_spot_check(tilde_fam, te, tc, ws.analysis.escape.escape_steps,
                                               1000, derive_seed(cfg.seed, kStreamEscape));
        SweepReport products = verify_product_hyperbolicity(ws.family, cfg.product_length);

        SpectrumEstimate chi = estimate_top_exponent(
            ws.family, cfg.spectrum_steps, cfg.spectrum_trials,
            derive_seed(cfg.seed, kStreamSpectrum), cfg.threads);
        json lemma2 = json::array();
        double prev = -1;
        bool monotone = true;
        std::vector<double> factors = cfg.lemma2_eps_factors;
        std::sort(factors.begin(), factors.end());
        for (double factor : factors) {
            double eps = factor * chi.chi_top;
            Lemma2Estimate est = estimate_lemma2_constant(
                tilde_fam, te, tc, chi.chi_top, eps, cfg.sweep_radius, cfg.n_max,
                cfg.omega_samples, derive_seed(cfg.seed, kStreamLemma2), cfg.threads);
            if (prev >= 0 && est.value < prev) monotone = false;
            prev = est.value;
            lemma2.push_back({{"epsFactor", factor},
                              {"eps", eps},
                              {"value", est.value},
                              {"label", "empirical"},
                              {"witness",
                               {{"omega", est.witness.omega_id},
                                {"q", est.witness.q},
                                {"n", est.witness.n},
                                {"case", est.witness.bound}}}});
        }

        if (cfg.diophantine_member >= ws.family.size())
            throw Error(Errc::config_error, "/diophantine/member: out of family range");
        DiophantineResult dio =
            diophantine_sweep(ws.family.member(cfg.diophantine_member), cfg.diophantine_unstable,
                              cfg.diophantine_eps, cfg.diophantine_q);

        CsvWriter csv(out_dir + "/violations.csv", "source,omega_id,q,n,bound,detail");
        auto emit = [&csv](const char* source, const std::vector<Violation>& vs) {
            for (const Violation& v : vs)
                csv.row({source, std::to_string(v.omega_id), "\"" + v.q + "\"",
                         std::to_string(v.n), v.bound, "\"" + v.detail + "\""});
        };
        emit("lemma1", lemma1.violations);
        emit("escape", escape.violations);
        emit("products", products.violations);

        size_t total_violations =
            lemma1.violation_count + escape.violation_count + products.violation_count;
        bool pass = total_violations == 0 && rates_match;

        json j{{"version", 1},
               {"kind", "verify"},
               {"pass", pass},
               {"seed", cfg.seed},
               {"selfTestCorrupt", cfg.self_test_corrupt},
               {"constants", constants_json(ws.analysis)},
               {"tildeRatesMatch", rates_match},
               {"lemma1",
                {{"radius", cfg.sweep_radius},
                 {"nMax", cfg.n_max},
                 {"omegaSamples", cfg.omega_samples},
                 {"checks", lemma1.checks},
                 {"violations", lemma1.violation_count},
                 {"witnesses", violations_json(lemma1.violations)}}},
               {"escape",
                {{"vectors", 1000},
                 {"checks", escape.checks},
                 {"violations", escape.violation_count},
                 {"witnesses", violations_json(escape.violations)}}},
               {"productHyperbolicity",
                {{"length", cfg.product_length},
                 {"checks", products.checks},
                 {"violations", products.violation_count},
                 {"witnesses", violations_json(products.violations)}}},
               {"spectrum", {{"chi", chi.chi_top}, {"stderr", chi.stderr_mean}}},
               {"lemma2", lemma2},
               {"lemma2Monotone", monotone},
               {"diophantine",
                {{"member", cfg.diophantine_member},
                 {"direction", cfg.diophantine_unstable ? "unstable" : "stable"},
                 {"eps", cfg.diophantine_eps},
                 {"qMax", cfg.diophantine_q},
                 {"value", dio.value},
                 {"q1", dio.q1},
                 {"q2", dio.q2},
                 {"valueGlobal", dio.value_global},
                 {"q1Global", dio.q1_global},
                 {"q2Global", dio.q2_global},
                 {"alpha", dio.alpha}}}};
        write_json(out_dir + "/verify.json", j);
        if (!pass)
            return {kExitViolation, std::to_string(total_violations) + " violations recorded"};
        return {kExitOk, "verification written"};
    } catch (const Error& e) {
        return {exit_for(e.code()), e.what()};
    }
}

RunOutcome run_diophantine(const RunConfig& cfg, const std::string& out_dir) {
    try {
        std::filesystem::create_directories(out_dir);
        MatrixFamily family = build_family(cfg);
        if (cfg.diophantine_member >= family.size())
            throw Error(Errc::config_error, "/diophantine/member: out of family range");
        DiophantineResult dio =
            diophantine_sweep(family.member(cfg.diophantine_member), cfg.diophantine_unstable,
                              cfg.diophantine_eps, cfg.diophantine_q);
        json j{{"version", 1},
               {"kind", "diophantine"},
               {"pass", true},
               {"member", cfg.diophantine_member},
               {"direction", cfg.diophantine_unstable ? "unstable" : "stable"},
               {"eps", cfg.diophantine_eps},
               {"qMax", cfg.diophantine_q},
               {"alpha", dio.alpha},
               {"value", dio.value},
               {"q1", dio.q1},
               {"q2", dio.q2},
               {"valueGlobal", dio.value_global},
               {"q1Global", dio.q1_global},
               {"q2Global", dio.q2_global}};
        write_json(out_dir + "/diophantine.json", j);
        return {kExitOk, "diophantine sweep written"};
    } catch (const Error& e) {
        return {exit_for(e.code()), e.what()};
    }
}

}  // namespace rantor
