#include "doctest.h"

#include <cmath>

#include "rantor/correlations.hpp"
#include "rantor/random_model.hpp"

using namespace rantor;

namespace {

MatrixFamily cat_pair() {
    return MatrixFamily({validate_automorphism(IntMatrix{2, 1, 1, 1}),
                         validate_automorphism(IntMatrix{1, 1, 1, 2})},
                        {0.5, 0.5});
}

TrigObservable single_mode(Freq q, size_t alphabet = 2) {
    TrigObservable f(0, static_cast<uint32_t>(alphabet), 1.0);
    f.add_mode_all(q, {1, 0});
    return f;
}

Word all_a(size_t n) {
    Word w;
    w.letters.assign(n, 0);
    return w;
}

ConeAnalysis quadrant_analysis() {
    return analyze_cones(cat_pair(), Cone({1, 0}, {0, 1}), Cone({0, 1}, {-1, 0}));
}

}  // namespace

TEST_CASE("single-mode correlation is exactly the frequency-orbit hit") {
    MatrixFamily fam = cat_pair();
    TrigObservable f = single_mode({-2, 3});
    TrigObservable g = single_mode({1, 0});
    Word w = all_a(12);
    for (size_t n = 0; n <= 10; ++n) {
        Cplx c = correlation_exact(fam, w, f, g, n);
        if (n == 2) {
            CHECK(c.real() == 1.0);
            CHECK(c.imag() == 0.0);
        } else {
            CHECK(c.real() == 0.0);
            CHECK(c.imag() == 0.0);
        }
    }
    std::vector<Cplx> series = correlation_series(fam, w, f, g, 10);
    for (size_t n = 0; n <= 10; ++n) CHECK(series[n] == correlation_exact(fam, w, f, g, n));
}

TEST_CASE("degenerate observables give zero correlation") {
    MatrixFamily fam = cat_pair();
    Word w = all_a(8);
    TrigObservable f = single_mode({-2, 3});
    TrigObservable empty_g(0, 2, 1.0);
    empty_g.add_mode_all({0, 0}, {0, 0});
    TrigObservable const_f(0, 2, 1.0);
    const_f.add_mode_all({0, 0}, {3, 0});
    for (size_t n = 0; n <= 6; ++n) {
        CHECK(correlation_exact(fam, w, f, empty_g, n) == Cplx{0, 0});
        CHECK(correlation_exact(fam, w, const_f, single_mode({1, 0}), n) == Cplx{0, 0});
    }
    CHECK_THROWS_AS(correlation_exact(fam, all_a(3), f, single_mode({1, 0}), 5), Error);
}

TEST_CASE("quadrature agrees with the exact Fourier value") {
    MatrixFamily fam = cat_pair();
    TrigObservable f = single_mode({-2, 3});
    TrigObservable g = single_mode({1, 0});
    Word w = all_a(6);
    for (size_t n = 0; n <= 4; ++n) {
        long grid = quadrature_grid_size(fam, w, f, g, n);
        Cplx qv = correlation_quadrature(fam, w, f, g, n, grid);
        Cplx ev = correlation_exact(fam, w, f, g, n);
        CHECK(std::abs(qv - ev) <= 1e-9);
    }

    TrigObservable const_f(0, 2, 1.0);
    const_f.add_mode_all({0, 0}, {2.5, 0});
    Cplx cv = correlation_quadrature(fam, w, const_f, g, 2,
                                     quadrature_grid_size(fam, w, const_f, g, 2));
    CHECK(std::abs(cv) <= 1e-12);

    CHECK_THROWS_WITH_AS(correlation_quadrature(fam, w, f, g, 0, 2),
                         doctest::Contains("AliasingRisk"), Error);
}

TEST_CASE("oracle equivalence on random instances") {
    MatrixFamily fam = cat_pair();
    for (uint64_t s = 0; s < 20; ++s) {
        TrigObservable f(0, 2, 1.0), g(0, 2, 1.0);
        for (int m = 0; m < 3; ++m) {
            auto rnd = [&](uint64_t k) {
                return static_cast<long>(mix64(100 * s + 10 * m + k) % 7) - 3;
            };
            f.add_mode_all({rnd(0), rnd(1)},
                           {unit_double(mix64(s + m)) - 0.5, unit_double(mix64(s - m)) - 0.5});
            g.add_mode_all({rnd(2), rnd(3)},
                           {unit_double(mix64(2 * s + m)) - 0.5, unit_double(mix64(3 * s + m)) - 0.5});
        }
        Word w = sample_word({0.5, 0.5}, 6, 900 + s);
        size_t n = mix64(s) % 6;
        long grid = quadrature_grid_size(fam, w, f, g, n);
        CHECK(std::abs(correlation_quadrature(fam, w, f, g, n, grid) -
                       correlation_exact(fam, w, f, g, n)) <= 1e-9);
    }
}

TEST_CASE("skew correlation shifts only the cylinder configuration") {
    MatrixFamily fam = cat_pair();
    TrigObservable f = single_mode({-2, 3});
    TrigObservable g = single_mode({1, 0});
    for (uint64_t s = 0; s < 10; ++s) {
        Word w = sample_word({0.5, 0.5}, 12, 40 + s);
        for (size_t n = 0; n <= 8; ++n)
            CHECK(correlation_skew(fam, w, f, g, n) == correlation_exact(fam, w, f, g, n));
    }

    // an omega-dependent f distinguishes the two
    TrigObservable fdep(1, 2, 1.0);
    fdep.add_mode(0, {-2, 3}, {1, 0});
    fdep.add_mode(1, {-2, 3}, {2, 0});
    Word w{{0, 0, 1, 0}};
    CHECK(correlation_skew(fam, w, fdep, g, 2).real() == 2.0);   // config read at offset 2
    CHECK(correlation_exact(fam, w, fdep, g, 2).real() == 1.0);  // config read at offset 0
}

TEST_CASE("skew mean: exact enumeration at p = 1/2 gives 1/4") {
    MatrixFamily fam = cat_pair();
    TrigObservable f = single_mode({-2, 3});
    TrigObservable g = single_mode({1, 0});
    Cplx v = correlation_skew_mean(fam, f, g, 2);
    CHECK(v.real() == 0.25);
    CHECK(v.imag() == 0.0);
}

TEST_CASE("skew mean at a point mass reproduces the deterministic series") {
    MatrixFamily fam({validate_automorphism(IntMatrix{2, 1, 1, 1}),
                      validate_automorphism(IntMatrix{1, 1, 1, 2})},
                     {1.0, 0.0});
    TrigObservable f = single_mode({-2, 3});
    TrigObservable g = single_mode({1, 0});
    for (size_t n = 0; n <= 8; ++n) {
        Cplx mean = correlation_skew_mean(fam, f, g, n);
        Cplx det = correlation_exact(fam, all_a(n), f, g, n);
        CHECK(mean.real() == doctest::Approx(det.real()).epsilon(1e-15));
        CHECK(mean.imag() == doctest::Approx(det.imag()).epsilon(1e-15));
    }
}

TEST_CASE("skew mean equals the probability-weighted word enumeration") {
    MatrixFamily fam({validate_automorphism(IntMatrix{2, 1, 1, 1}),
                      validate_automorphism(IntMatrix{1, 1, 1, 2})},
                     {0.3, 0.7});
    TrigObservable f(1, 2, 1.0);
    f.add_mode(0, {-2, 3}, {1, 0});
    f.add_mode(1, {1, -1}, {0, 1});
    TrigObservable g(1, 2, 1.0);
    g.add_mode(0, {1, 0}, {1, 0});
    g.add_mode(1, {0, 1}, {0.5, 0});
    g.add_mode(0, {0, 0}, {0.25, 0});

    for (size_t n : {2u, 4u}) {
        size_t len = n + 1;
        size_t count = size_t{1} << len;
        Cplx t{0, 0};
        for (size_t code = 0; code < count; ++code) {
            Word w;
            double prob = 1;
            for (size_t i = 0; i < len; ++i) {
                uint32_t l = (code >> i) & 1u;
                w.letters.push_back(l);
                prob *= (l == 0) ? 0.3 : 0.7;
            }
            Word shifted = w.shifted(n);
            t += prob * (correlation_skew(fam, w, f, g, n) +
                         mean_value(f, shifted) * mean_value(g, w));
        }
        Cplx ef{0, 0}, eg{0, 0};
        for (uint32_t l = 0; l < 2; ++l) {
            Word c{{l}};
            double prob = (l == 0) ? 0.3 : 0.7;
            ef += prob * mean_value(f, c);
            eg += prob * mean_value(g, c);
        }
        Cplx oracle = t - ef * eg;
        Cplx got = correlation_skew_mean(fam, f, g, n);
        CHECK(std::abs(got - oracle) <= 1e-14);
    }
}

TEST_CASE("real observable pairs produce real correlations") {
    MatrixFamily fam = cat_pair();
    TrigObservable f(0, 2, 1.0), g(0, 2, 1.0);
    f.add_mode_all({2, 1}, {0.5, 0.25});
    f.add_mode_all({-2, -1}, {0.5, -0.25});
    g.add_mode_all({1, -1}, {0.1, 0.7});
    g.add_mode_all({-1, 1}, {0.1, -0.7});
    REQUIRE(f.is_real_valued());
    REQUIRE(g.is_real_valued());
    for (uint64_t s = 0; s < 5; ++s) {
        Word w = sample_word({0.5, 0.5}, 20, 700 + s);
        for (size_t n = 0; n <= 20; ++n)
            CHECK(std::fabs(correlation_exact(fam, w, f, g, n).imag()) <= 1e-12);
    }
}

TEST_CASE("decay envelope: quadrant constants and soundness") {
    ConeAnalysis a = quadrant_analysis();
    TrigObservable f = single_mode({-2, 3});
    TrigObservable g = single_mode({1, 0});

    // c = 3, |f| = sqrt(13), |g| = 1, rate 2^(-n/2)
    CHECK(decay_envelope(a, f, g, 1.0, 0) ==
          doctest::Approx(3.0 * std::sqrt(13.0)).epsilon(1e-12));
    CHECK(decay_envelope(a, f, g, 1.0, 2) == doctest::Approx(5.4083269131959844).epsilon(1e-12));
    CHECK(decay_envelope(a, f, g, 1.0, 2) >= 1.0);  // >= |C(2)|

    MatrixFamily fam = cat_pair();
    for (uint64_t s = 0; s < 20; ++s) {
        Word w = sample_word({0.5, 0.5}, 41, 4000 + s);
        std::vector<Cplx> series = correlation_series(fam, w, f, g, 40);
        for (size_t n = 0; n <= 40; ++n)
            CHECK(std::abs(series[n]) <= decay_envelope(a, f, g, 1.0, n));
    }
}

TEST_CASE("Lyapunov envelope dominates the observed decay on the sweep") {
    ConeAnalysis a = quadrant_analysis();
    MatrixFamily fam = cat_pair();
    TrigObservable f = single_mode({-2, 3});
    TrigObservable g = single_mode({1, 0});
    double chi = 0.9153;  // library estimate for the pair, pinned loosely
    double eps = 0.05 * chi;
    double c_eps = 0.35;  // empirical constant for the quadrant sweep
    for (uint64_t s = 0; s < 10; ++s) {
        Word w = sample_word({0.5, 0.5}, 26, 6000 + s);
        std::vector<Cplx> series = correlation_series(fam, w, f, g, 25);
        for (size_t n = 0; n <= 25; ++n)
            CHECK(std::abs(series[n]) <=
                  decay_envelope_lyapunov(a, chi, eps, c_eps, f, g, 1.0, n));
    }
    CHECK_THROWS_AS(decay_envelope_lyapunov(a, chi, chi * 2, c_eps, f, g, 1.0, 1), Error);
}

TEST_CASE("decay-rate fit recovers a clean geometric slope and skips zeros") {
    std::vector<Cplx> series;
    for (int n = 0; n <= 12; ++n) {
        if (n % 3 == 2)
            series.push_back({0, 0});  // exact zeros are ignored
        else
            series.push_back({5.0 * std::exp(-0.7 * n), 0});
    }
    auto fit = fit_decay_rate(series);
    REQUIRE(fit.has_value());
    CHECK(fit->rate == doctest::Approx(-0.7).epsilon(1e-9));
    CHECK(fit->usable == 9);

    std::vector<Cplx> sparse{{1, 0}, {0, 0}, {0, 0}};
    CHECK(!fit_decay_rate(sparse).has_value());
}
