#include "rantor/verification.hpp"

#include <chrono>
#include <cmath>
#include <thread>

#include "rantor/random_model.hpp"

namespace rantor {

namespace {

std::string vec_str(const IntVec2& v) {
    return "(" + to_string(v.x) + "," + to_string(v.y) + ")";
}

std::vector<IntMatrix> member_matrices(const MatrixFamily& family) {
    std::vector<IntMatrix> out;
    out.reserve(family.size());
    for (const auto& m : family.members()) out.push_back(m.matrix());
    return out;
}

/// smallest B with lambda^-2B >= r_sq, i.e. den^B >= r_sq * num^B
int contraction_step_budget(const BigRat& lambda_sq, const BigInt& r_sq) {
    BigInt num = lambda_sq.get_num();
    BigInt den = lambda_sq.get_den();
    BigInt num_pow(1), den_pow(1);
    int b = 0;
    while (den_pow < r_sq * num_pow) {
        num_pow *= num;
        den_pow *= den;
        ++b;
        if (b > 100000) throw Error(Errc::invalid_argument, "degenerate contraction rate");
    }
    return b;
}

struct LemmaContext {
    const MatrixFamily* family;
    const Cone* contraction;
    BigRat lambda_sq;
    BigRat c_sq;
    long radius;
    int n_max;
    int cap;
    size_t word_len;
    uint64_t seed;
    std::vector<BigInt> lam_num_pow;  // lambda_sq numerator powers
    std::vector<BigInt> lam_den_pow;
};

constexpr size_t kPerWordStored = 2000;  // merge trims to kMaxStoredViolations

void sweep_word(const LemmaContext& ctx, uint64_t omega_id, SweepReport& rep) {
    const MatrixFamily& fam = *ctx.family;
    const Cone& cone_c = *ctx.contraction;
    Word w = OmegaStream(derive_seed(ctx.seed, omega_id), fam.probs()).word(ctx.word_len);
    std::vector<IntMatrix> mats = member_matrices(fam);

    const BigInt& c_num = ctx.c_sq.get_num();
    const BigInt& c_den = ctx.c_sq.get_den();

    // witness strings are built only while the storage budget lasts; the
    // count itself is always exact
    auto vio = [&](const IntVec2& qv, int n, const char* bound, auto&& detail) {
        ++rep.violation_count;
        if (rep.violations.size() < kPerWordStored)
            rep.violations.push_back({omega_id, vec_str(qv), n, bound, detail()});
    };

    for (long qx = -ctx.radius; qx <= ctx.radius; ++qx) {
        for (long qy = -ctx.radius; qy <= ctx.radius; ++qy) {
            if (qx == 0 && qy == 0) continue;
            if (qx * qx + qy * qy > ctx.radius * ctx.radius) continue;
            IntVec2 q{qx, qy};
            BigInt q_sq = q.norm_sq();
            bool in_c = contains(cone_c, q);

            int nt = -1;  // contraction time, only meaningful when in_c
            if (in_c) {
                IntVec2 v = q;
                for (int n = 1; n <= ctx.cap; ++n) {
                    v = mats[w[static_cast<size_t>(n - 1)]] * v;
                    if (!contains(cone_c, v)) {
                        nt = n - 1;
                        break;
                    }
                }
                ++rep.checks;
                if (nt < 0) {
                    vio(q, -1, "contraction_time_cap", [&] {
                        return "orbit still inside C after " + std::to_string(ctx.cap) + " steps";
                    });
                    nt = ctx.cap;
                } else {
                    // N <= ln|q| / ln lambda^-1  <=>  den^N <= |q|^2 num^N
                    ++rep.checks;
                    if (ctx.lam_den_pow[static_cast<size_t>(nt)] >
                        q_sq * ctx.lam_num_pow[static_cast<size_t>(nt)]) {
                        vio(q, nt, "contraction_time_bound", [&] {
                            return "N = " + std::to_string(nt) +
                                   " exceeds ln|q|/ln(1/lambda)";
                        });
                    }
                }
            }

            IntVec2 v = q;
            for (int n = 0; n <= ctx.n_max; ++n) {
                if (n > 0) v = mats[w[static_cast<size_t>(n - 1)]] * v;
                BigInt v_sq = v.norm_sq();
                const BigInt& ln = ctx.lam_num_pow[static_cast<size_t>(n)];
                const BigInt& ld = ctx.lam_den_pow[static_cast<size_t>(n)];

                // partition bookkeeping: the three index sets, computed
                // independently, must hit q exactly once
                bool s1 = in_c && n <= nt;
                bool s2 = in_c && n > nt;
                bool s3 = !contains(cone_c, q);
                ++rep.checks;
                if ((int(s1) + int(s2) + int(s3)) != 1) {
                    vio(q, n, "partition", [] { return std::string("index sets not a disjoint cover"); });
                }

                if (s1) {
                    ++rep.checks;
                    if (v_sq < 1)
                        vio(q, n, "lower_unit",
                            [&] { return "|Aq|^2 = " + to_string(v_sq) + " < 1"; });
                    ++rep.checks;
                    if (v_sq * ld > ln * q_sq)
                        vio(q, n, "upper_contraction", [&] {
                            return "|Aq|^2 = " + to_string(v_sq) + " > lambda^2n |q|^2 = " +
                                   to_string(ln) + "/" + to_string(ld) + " * " + to_string(q_sq);
                        });
                } else if (s2) {
                    ++rep.checks;
                    if (v_sq * q_sq * ln * c_den < c_num * ld)
                        vio(q, n, "lower_after_exit", [&] {
                            return "|Aq|^2 |q|^2 lambda^2n = " +
                                   to_string(BigInt(v_sq * q_sq * ln)) + "/" + to_string(ld) +
                                   " < C^2 = " + to_string(ctx.c_sq);
                        });
                } else {
                    ++rep.checks;
                    if (v_sq * ln * c_den < c_num * ld * q_sq)
                        vio(q, n, "lower_complement", [&] {
                            return "|Aq|^2 lambda^2n = " + to_string(BigInt(v_sq * ln)) + "/" +
                                   to_string(ld) + " < C^2 |q|^2 = " + to_string(ctx.c_sq) +
                                   " * " + to_string(q_sq);
                        });
                }
            }
        }
    }
}

}  // namespace

int contraction_time(const MatrixFamily& family, const Word& w, const IntVec2& q,
                     const Cone& contraction, const BigRat& lambda_sq, int cap) {
    if (q.is_zero()) throw Error(Errc::zero_vector, "contraction time needs q != 0");
    if (!contains(contraction, q))
        throw Error(Errc::not_in_cone, "q = " + vec_str(q) + " outside the contraction cone");
    int budget = contraction_step_budget(lambda_sq, q.norm_sq());
    if (cap < budget + 2)
        throw Error(Errc::invalid_argument,
                    "cap must be at least the a-priori bound " + std::to_string(budget) + " + 2");
    if (w.size() < static_cast<size_t>(cap))
        throw Error(Errc::word_too_short, "word shorter than the contraction cap");
    IntVec2 v = q;
    for (int n = 1; n <= cap; ++n) {
        v = family.member(w[static_cast<size_t>(n - 1)]).matrix() * v;
        if (!contains(contraction, v)) return n - 1;
    }
    throw Error(Errc::cap_exceeded, "orbit never left the contraction cone; cones misconfigured");
}

SweepReport verify_lemma_bounds(const MatrixFamily& tilde_family, const Cone& expansion,
                                const Cone& contraction, const BigRat& lambda_sq,
                                const BigRat& c_sq_lo, long radius, int n_max,
                                size_t omega_samples, uint64_t seed, CorruptMode corrupt,
                                unsigned threads) {
    (void)expansion;  // partition and bounds only involve C; E fixed the constants
    auto t0 = std::chrono::steady_clock::now();

    LemmaContext ctx;
    ctx.family = &tilde_family;
    ctx.contraction = &contraction;
    ctx.lambda_sq = lambda_sq;
    ctx.c_sq = c_sq_lo;
    if (corrupt == CorruptMode::halve_lambda) ctx.lambda_sq /= 4;
    if (corrupt == CorruptMode::double_c) ctx.c_sq *= 4;
    ctx.lambda_sq.canonicalize();
    ctx.c_sq.canonicalize();
    if (ctx.lambda_sq >= 1 || sign_of(ctx.lambda_sq) <= 0)
        throw Error(Errc::invalid_argument, "lambda must lie strictly inside (0,1)");
    ctx.radius = radius;
    ctx.n_max = n_max;
    ctx.cap = contraction_step_budget(ctx.lambda_sq, BigInt(radius) * BigInt(radius)) + 2;
    ctx.word_len = static_cast<size_t>(std::max(n_max, ctx.cap));
    ctx.seed = seed;
    int max_pow = std::max(n_max, ctx.cap);
    ctx.lam_num_pow.resize(static_cast<size_t>(max_pow) + 1);
    ctx.lam_den_pow.resize(static_cast<size_t>(max_pow) + 1);
    ctx.lam_num_pow[0] = 1;
    ctx.lam_den_pow[0] = 1;
    for (int i = 1; i <= max_pow; ++i) {
        ctx.lam_num_pow[static_cast<size_t>(i)] =
            ctx.lam_num_pow[static_cast<size_t>(i - 1)] * ctx.lambda_sq.get_num();
        ctx.lam_den_pow[static_cast<size_t>(i)] =
            ctx.lam_den_pow[static_cast<size_t>(i - 1)] * ctx.lambda_sq.get_den();
    }

    std::vector<SweepReport> partial(omega_samples);
    auto work = [&](size_t lo, size_t hi) {
        for (size_t s = lo; s < hi; ++s) sweep_word(ctx, s, partial[s]);
    };
    if (threads <= 1 || omega_samples < 2) {
        work(0, omega_samples);
    } else {
        unsigned nt = std::min<unsigned>(threads, static_cast<unsigned>(omega_samples));
        std::vector<std::thread> pool;
        for (unsigned c = 0; c < nt; ++c)
            pool.emplace_back(work, omega_samples * c / nt, omega_samples * (c + 1) / nt);
        for (auto& th : pool) th.join();
    }

    SweepReport rep;
    for (auto& p : partial) {
        rep.checks += p.checks;
        rep.violation_count += p.violation_count;
        for (auto& v : p.violations) {
            if (rep.violations.size() >= kMaxStoredViolations) break;
            rep.violations.push_back(std::move(v));
        }
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

SweepReport verify_lemma_bounds(const MatrixFamily& tilde_family, const Cone& expansion,
                                const Cone& contraction, const ConeAnalysis& analysis,
                                long radius, int n_max, size_t omega_samples, uint64_t seed,
                                CorruptMode corrupt, unsigned threads) {
    if (!analysis.check.pass)
        throw Error(Errc::invalid_argument, "sweep needs a verified cone analysis");
    return verify_lemma_bounds(tilde_family, expansion, contraction, analysis.check.lambda_sq,
                               analysis.escape.c_const_sq_lo, radius, n_max, omega_samples, seed,
                               corrupt, threads);
}

SweepReport escape_spot_check(const MatrixFamily& family, const Cone& expansion,
                              const Cone& contraction, int escape_steps, size_t vectors,
                              uint64_t seed) {
    auto t0 = std::chrono::steady_clock::now();
    SweepReport rep;
    std::vector<Cone> gaps = gap_sectors(expansion, contraction);
    if (gaps.empty()) {
        rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return rep;
    }

    size_t k = family.size();
    size_t words = 1;
    for (int i = 0; i < escape_steps; ++i) {
        if (words > (size_t{1} << 24))
            throw Error(Errc::invalid_argument, "escape word enumeration too large");
        words *= k;
    }

    for (size_t i = 0; i < vectors; ++i) {
        const Cone& gap = gaps[i % gaps.size()];
        uint64_t za = mix64(seed ^ (2 * i + 1));
        uint64_t zb = mix64(seed ^ (2 * i + 2));
        long a = 1 + static_cast<long>(za % 1000);
        long b = 1 + static_cast<long>(zb % 1000);
        IntVec2 v = IntVec2{gap.u1().x * a + gap.u2().x * b, gap.u1().y * a + gap.u2().y * b};

        for (size_t wcode = 0; wcode < words; ++wcode) {
            IntVec2 img = v;
            size_t rest = wcode;
            for (int step = 0; step < escape_steps; ++step) {
                img = family.member(rest % k).matrix() * img;
                rest /= k;
            }
            ++rep.checks;
            if (!contains(expansion, img)) {
                rep.record({i, vec_str(v), escape_steps, "escape",
                                          "image " + vec_str(img) + " of word #" +
                                              std::to_string(wcode) +
                                              " not in the expansion cone"});
            }
        }
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

Lemma2Estimate estimate_lemma2_constant(const MatrixFamily& tilde_family, const Cone& expansion,
                                        const Cone& contraction, double chi, double eps,
                                        long radius, int n_max, size_t omega_samples,
                                        uint64_t seed, unsigned threads) {
    (void)expansion;
    if (!(eps > 0.0)) throw Error(Errc::invalid_argument, "eps must be positive");
    if (!(eps < chi)) throw Error(Errc::invalid_argument, "eps must stay below chi");

    // lambda only sizes the contraction-time cap here; a generous fixed rate
    // keeps the scan bounded without assuming the caller's analysis
    size_t word_len = static_cast<size_t>(n_max) + 64;
    std::vector<long double> decay(static_cast<size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n)
        decay[static_cast<size_t>(n)] =
            expl(-static_cast<long double>(n) * (static_cast<long double>(chi) -
                                                 static_cast<long double>(eps)));

    struct Local {
        long double best = 0;
        bool has = false;
        Violation witness;
        uint64_t checks = 0;
    };
    std::vector<Local> partial(omega_samples);
    std::vector<IntMatrix> mats = member_matrices(tilde_family);

    auto work = [&](size_t lo, size_t hi) {
        for (size_t s = lo; s < hi; ++s) {
            Local& loc = partial[s];
            Word w = OmegaStream(derive_seed(seed, s), tilde_family.probs()).word(word_len);
            for (long qx = -radius; qx <= radius; ++qx) {
                for (long qy = -radius; qy <= radius; ++qy) {
                    if (qx == 0 && qy == 0) continue;
                    if (qx * qx + qy * qy > radius * radius) continue;
                    IntVec2 q{qx, qy};
                    long double q_norm = sqrtl(to_long_double(q.norm_sq()));
                    bool in_c = contains(contraction, q);

                    int nt = -1;
                    if (in_c) {
                        IntVec2 v = q;
                        for (size_t n = 1; n < word_len; ++n) {
                            v = mats[w[n - 1]] * v;
                            if (!contains(contraction, v)) {
                                nt = static_cast<int>(n) - 1;
                                break;
                            }
                        }
                        if (nt < 0) nt = static_cast<int>(word_len);
                    }

                    IntVec2 v = q;
                    for (int n = 0; n <= n_max; ++n) {
                        if (n > 0) v = mats[w[static_cast<size_t>(n - 1)]] * v;
                        long double v_norm = sqrtl(to_long_double(v.norm_sq()));
                        long double e = decay[static_cast<size_t>(n)];
                        long double ratio;
                        const char* kind;
                        if (in_c && n <= nt) {
                            ratio = e * q_norm / v_norm;
                            kind = "inside_before_exit";
                        } else if (in_c) {
                            ratio = v_norm * e * q_norm;
                            kind = "inside_after_exit";
                        } else {
                            ratio = v_norm * e / q_norm;
                            kind = "complement";
                        }
                        ++loc.checks;
                        if (!loc.has || ratio < loc.best) {
                            loc.has = true;
                            loc.best = ratio;
                            loc.witness = {s, vec_str(q), n, kind, ""};
                        }
                    }
                }
            }
        }
    };
    if (threads <= 1 || omega_samples < 2) {
        work(0, omega_samples);
    } else {
        unsigned nt = std::min<unsigned>(threads, static_cast<unsigned>(omega_samples));
        std::vector<std::thread> pool;
        for (unsigned c = 0; c < nt; ++c)
            pool.emplace_back(work, omega_samples * c / nt, omega_samples * (c + 1) / nt);
        for (auto& th : pool) th.join();
    }

    Lemma2Estimate est;
    bool has = false;
    long double best = 0;
    for (const Local& loc : partial) {
        est.checks += loc.checks;
        if (loc.has && (!has || loc.best < best)) {
            has = true;
            best = loc.best;
            est.witness = loc.witness;
        }
    }
    if (!has) throw Error(Errc::invalid_argument, "empty sweep domain");
    est.value = static_cast<double>(best);
    return est;
}

SweepReport verify_product_hyperbolicity(const MatrixFamily& family, int length) {
    auto t0 = std::chrono::steady_clock::now();
    SweepReport rep;
    if (length <= 0) {
        rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return rep;  // vacuous
    }
    size_t k = family.size();
    std::vector<IntMatrix> mats = member_matrices(family);

    std::string word(static_cast<size_t>(length), '0');
    std::vector<IntMatrix> stack;
    stack.reserve(static_cast<size_t>(length) + 1);
    stack.push_back(IntMatrix::identity());

    // DFS over all k^length words, products shared along prefixes;
    // position 0 acts first
    auto rec = [&](auto&& self, int depth) -> void {
        if (depth == length) {
            ++rep.checks;
            BigInt tr = stack.back().trace();
            if (abs(tr) <= 2)
                rep.record({0, word, length, "product_hyperbolicity",
                                          "word " + word + " has trace " + to_string(tr)});
            return;
        }
        for (size_t l = 0; l < k; ++l) {
            word[static_cast<size_t>(depth)] = static_cast<char>('0' + l);
            stack.push_back(mats[l] * stack.back());
            self(self, depth + 1);
            stack.pop_back();
        }
    };
    rec(rec, 0);
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

DiophantineResult diophantine_sweep(const Automorphism& a, bool unstable_slope, double eps,
                                    long q_max) {
    if (q_max < 1) throw Error(Errc::invalid_argument, "q_max must be >= 1");
    constexpr unsigned prec = 256;

    mpf_class tr(0, prec), disc(0, prec);
    tr = mpf_class(a.trace(), prec);
    disc = mpf_class(a.discriminant(), prec);
    mpf_class sq(0, prec);
    mpf_sqrt(sq.get_mpf_t(), disc.get_mpf_t());
    mpf_class lam_u(0, prec);
    if (sign_of(a.trace()) >= 0)
        lam_u = (tr + sq) / 2;
    else
        lam_u = (tr - sq) / 2;
    mpf_class lam(0, prec);
    lam = unstable_slope ? lam_u : mpf_class(1, prec) / lam_u;
    mpf_class am(0, prec), bm(0, prec);
    am = mpf_class(a.matrix().a, prec);
    bm = mpf_class(a.matrix().b, prec);
    mpf_class alpha(0, prec);
    alpha = (lam - am) / bm;

    DiophantineResult out;
    out.alpha = alpha.get_d();
    mpf_class best_tail(0, prec), best_all(0, prec);
    bool has_tail = false, has_all = false;
    mpf_class half(0.5, prec);
    long tail_start = q_max / 2 + 1;
    for (long q1 = 1; q1 <= q_max; ++q1) {
        mpf_class m(0, prec);
        m = alpha * q1;
        mpf_class fl(0, prec);
        mpf_floor(fl.get_mpf_t(), mpf_class(m + half).get_mpf_t());
        mpz_class q2;
        mpz_set_f(q2.get_mpz_t(), fl.get_mpf_t());
        mpf_class diff(0, prec);
        diff = abs(m - mpf_class(q2, prec));  // |alpha q1 - q2|
        mpf_class val(0, prec);
        val = diff * q1;  // |alpha - q2/q1| q1^2
        if (eps != 0.0) val *= mpf_class(std::pow(static_cast<double>(q1), eps), prec);
        if (!has_all || val < best_all) {
            has_all = true;
            best_all = val;
            out.q1_global = q1;
            out.q2_global = mpz_get_si(q2.get_mpz_t());
        }
        if (q1 >= tail_start && (!has_tail || val < best_tail)) {
            has_tail = true;
            best_tail = val;
            out.q1 = q1;
            out.q2 = mpz_get_si(q2.get_mpz_t());
        }
    }
    out.value = best_tail.get_d();
    out.value_global = best_all.get_d();
    return out;
}

}  // namespace rantor
