#include "rantor/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>

namespace rantor {

namespace {

std::optional<Freq> as_freq(const IntVec2& v) {
    if (!mpz_fits_slong_p(v.x.get_mpz_t()) || !mpz_fits_slong_p(v.y.get_mpz_t()))
        return std::nullopt;
    return Freq{mpz_get_si(v.x.get_mpz_t()), mpz_get_si(v.y.get_mpz_t())};
}

Cplx coeff_at(const TrigObservable& f, size_t cfg, const IntVec2& v) {
    auto q = as_freq(v);
    if (!q) return {0, 0};
    auto it = f.modes(cfg).find(*q);
    return it == f.modes(cfg).end() ? Cplx{0, 0} : it->second;
}

void require_word_cover(const Word& w, size_t needed, const char* what) {
    if (w.size() < needed) throw Error(Errc::word_too_short, what);
}

std::vector<IntMatrix> tilde_members(const MatrixFamily& family) {
    std::vector<IntMatrix> t;
    t.reserve(family.size());
    for (const auto& m : family.members()) t.push_back(tilde(m.matrix()));
    return t;
}

long infnorm_long(const BigInt& a, const BigInt& b) {
    BigInt m = std::max(abs(a), abs(b));
    if (!mpz_fits_slong_p(m.get_mpz_t()))
        throw Error(Errc::aliasing_risk, "transported bandwidth exceeds representable grid sizes");
    return mpz_get_si(m.get_mpz_t());
}

double checked_beta(const TrigObservable& f, const TrigObservable& g, double beta) {
    if (!(beta > 0.0 && beta <= 1.0))
        throw Error(Errc::invalid_argument, "Hoelder exponent must lie in (0,1]");
    (void)f;
    (void)g;
    return beta;
}

}  // namespace

Cplx correlation_exact(const MatrixFamily& family, const Word& w, const TrigObservable& f,
                       const TrigObservable& g, size_t n) {
    require_word_cover(w, n, "word shorter than the requested time");
    size_t cfg_f = config_index(w, f.depth(), f.alphabet());
    size_t cfg_g = config_index(w, g.depth(), g.alphabet());
    std::vector<IntMatrix> tld = tilde_members(family);

    Cplx sum{0, 0};
    for (const auto& [q, gc] : g.modes(cfg_g)) {
        if (q.first == 0 && q.second == 0) continue;
        IntVec2 p{q.first, q.second};
        for (size_t j = 0; j < n; ++j) p = tld[w[j]] * p;
        sum += coeff_at(f, cfg_f, -p) * gc;
    }
    return sum;
}

std::vector<Cplx> correlation_series(const MatrixFamily& family, const Word& w,
                                     const TrigObservable& f, const TrigObservable& g,
                                     size_t n_max) {
    require_word_cover(w, n_max, "word shorter than the requested time");
    size_t cfg_f = config_index(w, f.depth(), f.alphabet());
    size_t cfg_g = config_index(w, g.depth(), g.alphabet());
    std::vector<IntMatrix> tld = tilde_members(family);

    std::vector<Cplx> out(n_max + 1, Cplx{0, 0});
    for (const auto& [q, gc] : g.modes(cfg_g)) {
        if (q.first == 0 && q.second == 0) continue;
        IntVec2 p{q.first, q.second};
        out[0] += coeff_at(f, cfg_f, -p) * gc;
        for (size_t n = 1; n <= n_max; ++n) {
            p = tld[w[n - 1]] * p;  // q^{n} from q^{n-1} and w(n-1) alone
            out[n] += coeff_at(f, cfg_f, -p) * gc;
        }
    }
    return out;
}

long quadrature_grid_size(const MatrixFamily& family, const Word& w, const TrigObservable& f,
                          const TrigObservable& g, size_t n) {
    require_word_cover(w, n, "word shorter than the requested time");
    Word head;
    head.letters.assign(w.letters.begin(), w.letters.begin() + static_cast<long>(n));
    IntMatrix mt = word_product(family, head).fwd.transpose();

    size_t cfg_f = config_index(w, f.depth(), f.alphabet());
    size_t cfg_g = config_index(w, g.depth(), g.alphabet());
    long bw_f = 0, bw_g = 0;
    for (const auto& [p, c] : f.modes(cfg_f)) {
        IntVec2 tp = mt * IntVec2{p.first, p.second};
        bw_f = std::max(bw_f, infnorm_long(tp.x, tp.y));
    }
    for (const auto& [q, c] : g.modes(cfg_g))
        bw_g = std::max(bw_g, std::max(std::labs(q.first), std::labs(q.second)));
    return bw_f + bw_g + 1;
}

Cplx correlation_quadrature(const MatrixFamily& family, const Word& w, const TrigObservable& f,
                            const TrigObservable& g, size_t n, long grid) {
    long min_grid = quadrature_grid_size(family, w, f, g, n);
    if (grid < min_grid)
        throw Error(Errc::aliasing_risk, "grid " + std::to_string(grid) +
                                             " below alias-free size " + std::to_string(min_grid));

    Word head;
    head.letters.assign(w.letters.begin(), w.letters.begin() + static_cast<long>(n));
    IntMatrix mt = word_product(family, head).fwd.transpose();
    size_t cfg_f = config_index(w, f.depth(), f.alphabet());
    size_t cfg_g = config_index(w, g.depth(), g.alphabet());

    struct Mode {
        long r1, r2;
        Cplx c;
    };
    auto reduce = [grid](const BigInt& v) {
        BigInt m;
        mpz_mod_ui(m.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(grid));
        return static_cast<long>(mpz_get_ui(m.get_mpz_t()));
    };
    std::vector<Mode> fm, gm;
    for (const auto& [p, c] : f.modes(cfg_f)) {
        IntVec2 tp = mt * IntVec2{p.first, p.second};
        fm.push_back({reduce(tp.x), reduce(tp.y), c});
    }
    for (const auto& [q, c] : g.modes(cfg_g))
        gm.push_back({reduce(BigInt(q.first)), reduce(BigInt(q.second)), c});

    // cached roots-of-unity rows, one per distinct reduced frequency
    std::map<long, std::vector<Cplx>> rows;
    auto row = [&](long r) -> const std::vector<Cplx>& {
        auto it = rows.find(r);
        if (it != rows.end()) return it->second;
        std::vector<Cplx> t(static_cast<size_t>(grid));
        for (long j = 0; j < grid; ++j) {
            long k = static_cast<long>((static_cast<long long>(r) * j) % grid);
            t[static_cast<size_t>(j)] = std::polar(1.0, 2.0 * M_PI * static_cast<double>(k) /
                                                            static_cast<double>(grid));
        }
        return rows.emplace(r, std::move(t)).first->second;
    };
    std::vector<const std::vector<Cplx>*> frow1, frow2, grow1, grow2;
    for (const auto& m : fm) {
        frow1.push_back(&row(m.r1));
        frow2.push_back(&row(m.r2));
    }
    for (const auto& m : gm) {
        grow1.push_back(&row(m.r1));
        grow2.push_back(&row(m.r2));
    }

    std::complex<long double> acc{0.0L, 0.0L};
    std::vector<Cplx> fpart(fm.size()), gpart(gm.size());
    for (long j1 = 0; j1 < grid; ++j1) {
        for (size_t i = 0; i < fm.size(); ++i)
            fpart[i] = fm[i].c * (*frow1[i])[static_cast<size_t>(j1)];
        for (size_t i = 0; i < gm.size(); ++i)
            gpart[i] = gm[i].c * (*grow1[i])[static_cast<size_t>(j1)];
        std::complex<long double> rowacc{0.0L, 0.0L};
        for (long j2 = 0; j2 < grid; ++j2) {
            Cplx fv{0, 0}, gv{0, 0};
            for (size_t i = 0; i < fm.size(); ++i)
                fv += fpart[i] * (*frow2[i])[static_cast<size_t>(j2)];
            for (size_t i = 0; i < gm.size(); ++i)
                gv += gpart[i] * (*grow2[i])[static_cast<size_t>(j2)];
            Cplx prod = fv * gv;
            rowacc += std::complex<long double>(prod.real(), prod.imag());
        }
        acc += rowacc;
    }
    long double cells = static_cast<long double>(grid) * static_cast<long double>(grid);
    Cplx avg{static_cast<double>(acc.real() / cells), static_cast<double>(acc.imag() / cells)};
    return avg - mean_value(f, w) * mean_value(g, w);
}

Cplx correlation_skew(const MatrixFamily& family, const Word& w, const TrigObservable& f,
                      const TrigObservable& g, size_t n) {
    require_word_cover(w, n + f.depth(), "word shorter than time plus cylinder depth");
    size_t cfg_f = config_index(w, f.depth(), f.alphabet(), n);
    size_t cfg_g = config_index(w, g.depth(), g.alphabet());
    std::vector<IntMatrix> tld = tilde_members(family);

    Cplx sum{0, 0};
    for (const auto& [q, gc] : g.modes(cfg_g)) {
        if (q.first == 0 && q.second == 0) continue;
        IntVec2 p{q.first, q.second};
        for (size_t j = 0; j < n; ++j) p = tld[w[j]] * p;
        sum += coeff_at(f, cfg_f, -p) * gc;
    }
    return sum;
}

Cplx correlation_skew_mean(const MatrixFamily& family, const TrigObservable& f,
                           const TrigObservable& g, size_t n) {
    size_t k = family.size();
    size_t depth = std::max<size_t>(n + f.depth(), g.depth());
    double total_words = std::pow(static_cast<double>(k), static_cast<double>(depth));
    if (total_words > 2e7)
        throw Error(Errc::invalid_argument, "configuration enumeration too large");

    std::vector<IntMatrix> tld = tilde_members(family);
    const auto& probs = family.probs();

    std::complex<long double> total{0.0L, 0.0L};
    Word w;
    w.letters.assign(depth, 0);
    size_t count = static_cast<size_t>(total_words + 0.5);
    for (size_t cfg = 0; cfg < count; ++cfg) {
        size_t rest = cfg;
        double prob = 1.0;
        for (size_t i = 0; i < depth; ++i) {
            w.letters[i] = static_cast<uint32_t>(rest % k);
            rest /= k;
            prob *= probs[w.letters[i]];
        }
        if (prob == 0.0) continue;
        size_t cfg_f = config_index(w, f.depth(), f.alphabet(), n);
        size_t cfg_g = config_index(w, g.depth(), g.alphabet());
        Cplx inner{0, 0};
        for (const auto& [q, gc] : g.modes(cfg_g)) {  // q = 0 included; means subtracted below
            IntVec2 p{q.first, q.second};
            for (size_t j = 0; j < n; ++j) p = tld[w[j]] * p;
            inner += coeff_at(f, cfg_f, -p) * gc;
        }
        Cplx term = inner * prob;
        total += std::complex<long double>(term.real(), term.imag());
    }

    auto expected_mean = [&](const TrigObservable& obs) {
        std::complex<long double> m{0.0L, 0.0L};
        size_t cfgs = 1;
        for (uint32_t i = 0; i < obs.depth(); ++i) cfgs *= k;
        Word cw;
        cw.letters.assign(obs.depth(), 0);
        for (size_t cfg = 0; cfg < cfgs; ++cfg) {
            size_t rest = cfg;
            double prob = 1.0;
            for (uint32_t i = 0; i < obs.depth(); ++i) {
                cw.letters[i] = static_cast<uint32_t>(rest % k);
                rest /= k;
                prob *= probs[cw.letters[i]];
            }
            Cplx mv = mean_value(obs, cw) * prob;
            m += std::complex<long double>(mv.real(), mv.imag());
        }
        return Cplx{static_cast<double>(m.real()), static_cast<double>(m.imag())};
    };

    Cplx t{static_cast<double>(total.real()), static_cast<double>(total.imag())};
    return t - expected_mean(f) * expected_mean(g);
}

CorrelationSeries build_series(const MatrixFamily& family, const Word& w, uint64_t omega_id,
                               const TrigObservable& f, const TrigObservable& g, double beta,
                               size_t n_max, const ConeAnalysis& analysis,
                               const std::optional<LyapunovEnvelopeData>& lyapunov) {
    CorrelationSeries out;
    out.omega_id = omega_id;
    out.method = "exact";
    std::vector<Cplx> values = correlation_series(family, w, f, g, n_max);
    out.points.resize(n_max + 1);
    for (size_t n = 0; n <= n_max; ++n) {
        CorrelationPoint& p = out.points[n];
        p.n = n;
        p.value = values[n];
        p.abs = std::abs(values[n]);
        p.envelope = decay_envelope(analysis, f, g, beta, n);
        if (lyapunov)
            p.envelope_lyapunov = decay_envelope_lyapunov(analysis, lyapunov->chi, lyapunov->eps,
                                                          lyapunov->c_eps, f, g, beta, n);
    }
    return out;
}

double decay_envelope(const ConeAnalysis& analysis, const TrigObservable& f,
                      const TrigObservable& g, double beta, size_t n) {
    if (!analysis.check.pass)
        throw Error(Errc::invalid_argument, "envelope needs a verified cone analysis");
    checked_beta(f, g, beta);
    double c = 1.0 + 2.0 * std::pow(analysis.escape.c_const, -beta);
    double rho = -std::log(analysis.check.lambda);
    return c * bnorm(f, beta) * bnorm(g, beta) * std::exp(-rho * beta * static_cast<double>(n));
}

double decay_envelope_lyapunov(const ConeAnalysis& analysis, double chi, double eps, double c_eps,
                               const TrigObservable& f, const TrigObservable& g, double beta,
                               size_t n) {
    if (!analysis.check.pass)
        throw Error(Errc::invalid_argument, "envelope needs a verified cone analysis");
    if (!(eps > 0.0 && eps < chi))
        throw Error(Errc::invalid_argument, "need 0 < eps < chi");
    checked_beta(f, g, beta);
    double c = 1.0 + 2.0 * std::pow(analysis.escape.c_const, -beta);
    return c * bnorm(f, beta) * bnorm(g, beta) * std::pow(c_eps, -beta) *
           std::exp(-(chi - eps) * beta * static_cast<double>(n));
}

std::optional<DecayFit> fit_decay_rate(const std::vector<Cplx>& series) {
    std::vector<std::pair<double, double>> pts;
    for (size_t n = 0; n < series.size(); ++n) {
        double a = std::abs(series[n]);
        if (a > 0.0) pts.push_back({static_cast<double>(n), std::log(a)});
    }
    if (pts.size() < 2) return std::nullopt;
    double mx = 0, my = 0;
    for (auto& [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double num = 0, den = 0;
    for (auto& [x, y] : pts) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    if (den == 0.0) return std::nullopt;
    return DecayFit{num / den, pts.size()};
}

}  // namespace rantor
