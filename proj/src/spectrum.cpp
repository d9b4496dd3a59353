#include "rantor/spectrum.hpp"

#include <cmath>
#include <thread>

#include "rantor/random_model.hpp"

namespace rantor {

namespace {

/// Deterministic balanced reduction; independent of any threading layout.
double pairwise_sum(const std::vector<double>& v, size_t lo, size_t hi) {
    if (hi - lo == 0) return 0.0;
    if (hi - lo == 1) return v[lo];
    size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

struct LdVec {
    long double x, y;
};

// minimal right-singular direction of the exact product of the first
// min(n, 48) letters; proxy for the word's stable line
LdVec stable_proxy(const MatrixFamily& family, const OmegaStream& stream, size_t n) {
    size_t depth = std::min<size_t>(n, 48);
    IntMatrix p = IntMatrix::identity();
    for (size_t k = 0; k < depth; ++k) p = family.member(stream.letter(k)).matrix() * p;
    IntMatrix g = p.transpose() * p;
    long double g11 = to_long_double(g.a);
    long double g12 = to_long_double(g.b);
    long double g22 = to_long_double(g.d);
    if (g12 == 0.0L) return (g11 <= g22) ? LdVec{1.0L, 0.0L} : LdVec{0.0L, 1.0L};
    long double tr = g11 + g22;
    long double det = to_long_double(g.det());
    long double mu_max = (tr + sqrtl(tr * tr - 4.0L * det)) / 2.0L;
    long double mu_min = det / mu_max;
    return {g12, mu_min - g11};
}

double run_trial(const MatrixFamily& family, size_t n, uint64_t word_seed, uint64_t vec_seed) {
    OmegaStream stream(word_seed, family.probs());
    LdVec proxy = stable_proxy(family, stream, n);
    long double pn = hypotl(proxy.x, proxy.y);

    long double vx = 0, vy = 0;
    for (int attempt = 0; attempt < 8; ++attempt) {
        double theta = 2.0 * M_PI * unit_double(mix64(vec_seed + static_cast<uint64_t>(attempt)));
        vx = cosl(static_cast<long double>(theta));
        vy = sinl(static_cast<long double>(theta));
        long double sine = fabsl(vx * proxy.y - vy * proxy.x) / pn;
        if (sine >= 1e-9L) break;
    }

    size_t k = family.size();
    std::vector<std::array<long double, 4>> mats(k);
    for (size_t i = 0; i < k; ++i) {
        const IntMatrix& m = family.member(i).matrix();
        mats[i] = {to_long_double(m.a), to_long_double(m.b), to_long_double(m.c),
                   to_long_double(m.d)};
    }

    long double acc = 0.0L;
    for (size_t step = 0; step < n; ++step) {
        const auto& m = mats[stream.letter(step)];
        long double wx = m[0] * vx + m[1] * vy;
        long double wy = m[2] * vx + m[3] * vy;
        long double norm = hypotl(wx, wy);
        acc += logl(norm);
        vx = wx / norm;
        vy = wy / norm;
    }
    return static_cast<double>(acc / static_cast<long double>(n));
}

}  // namespace

SpectrumEstimate estimate_top_exponent(const MatrixFamily& family, size_t n, size_t trials,
                                       uint64_t seed, unsigned threads) {
    if (n < 1 || trials < 1)
        throw Error(Errc::invalid_argument, "need at least one step and one trial");
    SpectrumEstimate est;
    est.n_steps = n;
    est.trials = trials;
    est.per_trial.assign(trials, 0.0);

    auto work = [&](size_t lo, size_t hi) {
        for (size_t t = lo; t < hi; ++t)
            est.per_trial[t] =
                run_trial(family, n, derive_seed(seed, 2 * t), derive_seed(seed, 2 * t + 1));
    };
    if (threads <= 1 || trials < 2) {
        work(0, trials);
    } else {
        unsigned nt = std::min<unsigned>(threads, static_cast<unsigned>(trials));
        std::vector<std::thread> pool;
        for (unsigned c = 0; c < nt; ++c) {
            size_t lo = trials * c / nt, hi = trials * (c + 1) / nt;
            pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    est.chi_top = pairwise_sum(est.per_trial, 0, trials) / static_cast<double>(trials);
    if (trials > 1) {
        std::vector<double> sq(trials);
        for (size_t t = 0; t < trials; ++t) {
            double d = est.per_trial[t] - est.chi_top;
            sq[t] = d * d;
        }
        double var = pairwise_sum(sq, 0, trials) / static_cast<double>(trials - 1);
        est.stderr_mean = std::sqrt(var / static_cast<double>(trials));
    }
    return est;
}

namespace {

LimitMatrixEstimate limit_from_product(const IntMatrix& product, size_t steps) {
    IntMatrix g = product.transpose() * product;
    long double g11 = to_long_double(g.a);
    long double g12 = to_long_double(g.b);
    long double g22 = to_long_double(g.d);
    long double n2 = 2.0L * static_cast<long double>(steps);

    LimitMatrixEstimate out;
    long double mu_max, ex, ey;  // top eigenvalue of G and its eigenvector
    if (g12 == 0.0L) {
        if (g11 >= g22) {
            mu_max = g11;
            ex = 1.0L;
            ey = 0.0L;
        } else {
            mu_max = g22;
            ex = 0.0L;
            ey = 1.0L;
        }
    } else {
        long double tr = g11 + g22;
        mu_max = (tr + sqrtl(tr * tr - 4.0L)) / 2.0L;  // det G = 1
        ex = g12;
        ey = mu_max - g11;
    }
    long double en = hypotl(ex, ey);
    ex /= en;
    ey /= en;

    long double a = expl(logl(mu_max) / n2);  // mu_max^(1/2n)
    long double b = 1.0L / a;
    out.eig_max = static_cast<double>(a);
    out.eig_min = static_cast<double>(b);
    out.dir_max = {static_cast<double>(ex), static_cast<double>(ey)};
    out.dir_min = {static_cast<double>(-ey), static_cast<double>(ex)};
    out.lambda.xx = static_cast<double>(a * ex * ex + b * ey * ey);
    out.lambda.xy = static_cast<double>((a - b) * ex * ey);
    out.lambda.yy = static_cast<double>(a * ey * ey + b * ex * ex);
    return out;
}

}  // namespace

LimitMatrixEstimate estimate_limit_matrix(const MatrixFamily& family, const Word& w) {
    if (w.size() < 1) throw Error(Errc::invalid_argument, "word must have length >= 1");
    WordProduct wp = word_product(family, w);
    LimitMatrixEstimate out = limit_from_product(wp.fwd, w.size());

    // the tilde product must give the J-conjugated limit
    LimitMatrixEstimate tld = limit_from_product(wp.tld, w.size());
    double scale = out.eig_max;
    if (std::fabs(tld.lambda.xx - out.lambda.yy) > 1e-9 * scale ||
        std::fabs(tld.lambda.yy - out.lambda.xx) > 1e-9 * scale ||
        std::fabs(tld.lambda.xy + out.lambda.xy) > 1e-9 * scale)
        throw Error(Errc::invalid_argument, "tilde limit matrix is not the J conjugate");
    return out;
}

StableDirection stable_direction(const MatrixFamily& family, const Word& w,
                                 const Cone& contraction) {
    Cone sector = contraction;
    IntMatrix pinv = IntMatrix::identity();
    for (size_t k = 0; k < w.size(); ++k) {
        pinv = pinv * family.member(w[k]).matrix().inverse_unimodular();
        Cone pullback = map_cone(pinv, contraction);
        if (cone_subset(pullback, sector)) {
            sector = pullback;
        } else if (!cone_subset(sector, pullback)) {
            throw Error(Errc::empty_intersection,
                        "cone preimages stopped being nested at step " + std::to_string(k + 1));
        }
    }

    long double ax = to_long_double(sector.u1().x), ay = to_long_double(sector.u1().y);
    long double bx = to_long_double(sector.u2().x), by = to_long_double(sector.u2().y);
    long double na = hypotl(ax, ay), nb = hypotl(bx, by);
    ax /= na;
    ay /= na;
    bx /= nb;
    by /= nb;
    // the positive span bisector; the sector angle stays below pi
    long double mx = ax + bx, my = ay + by;
    long double nm = hypotl(mx, my);
    StableDirection out;
    out.direction = {static_cast<double>(mx / nm), static_cast<double>(my / nm)};
    out.width = static_cast<double>(atan2l(fabsl(ax * by - ay * bx), ax * bx + ay * by));
    return out;
}

}  // namespace rantor
