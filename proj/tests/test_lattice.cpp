#include "doctest.h"

#include <cmath>

#include "rantor/lattice.hpp"
#include "rantor/random_model.hpp"

using namespace rantor;

namespace {

MatrixFamily cat_pair() {
    return MatrixFamily({validate_automorphism(IntMatrix{2, 1, 1, 1}),
                         validate_automorphism(IntMatrix{1, 1, 1, 2})},
                        {0.5, 0.5});
}

}  // namespace

TEST_CASE("validate_automorphism accepts the cat map and rejects non-hyperbolic input") {
    Automorphism a = validate_automorphism(IntMatrix{2, 1, 1, 1});
    CHECK(a.trace() == 3);
    CHECK(a.matrix().det() == 1);

    CHECK_THROWS_WITH_AS(validate_automorphism(IntMatrix{1, 1, 0, 1}),
                         doctest::Contains("NotHyperbolic"), Error);
    CHECK_THROWS_WITH_AS(validate_automorphism(IntMatrix{0, 1, -1, 0}),
                         doctest::Contains("NotHyperbolic"), Error);
    CHECK_THROWS_WITH_AS(validate_automorphism(IntMatrix{2, 0, 0, 1}),
                         doctest::Contains("NotUnimodular"), Error);
    CHECK_THROWS_AS(validate_automorphism(IntMatrix{2, 0, 0, -1}), Error);  // det -1 rejected
}

TEST_CASE("eigen_data evaluates the closed forms") {
    Automorphism a = validate_automorphism(IntMatrix{2, 1, 1, 1});
    EigenData ed = eigen_data(a);
    CHECK(static_cast<double>(ed.lambda_u) == doctest::Approx(2.6180340).epsilon(1e-7));
    CHECK(static_cast<double>(ed.slope_u) == doctest::Approx(0.6180340).epsilon(1e-7));
    CHECK(std::fabs(static_cast<double>(ed.lambda_u * ed.lambda_s - 1.0L)) <= 1e-12);

    Automorphism b = validate_automorphism(IntMatrix{1, 1, 1, 2});
    EigenData eb = eigen_data(b);
    CHECK(static_cast<double>(eb.lambda_u) == doctest::Approx(2.6180340).epsilon(1e-7));
    CHECK(static_cast<double>(eb.slope_u) == doctest::Approx(1.6180340).epsilon(1e-7));

    // A e_u = lambda_u e_u componentwise, 1e-9 relative
    long double ex = 1.0L, ey = ed.slope_u;
    long double rx = 2 * ex + 1 * ey, ry = 1 * ex + 1 * ey;
    CHECK(std::fabs(static_cast<double>(rx / (ed.lambda_u * ex) - 1.0L)) <= 1e-9);
    CHECK(std::fabs(static_cast<double>(ry / (ed.lambda_u * ey) - 1.0L)) <= 1e-9);
}

TEST_CASE("eigen_data handles negative traces without cancellation") {
    Automorphism a = validate_automorphism(IntMatrix{-2, -1, -1, -1});
    EigenData ed = eigen_data(a);
    CHECK(std::fabs(static_cast<double>(ed.lambda_u)) > 1.0);
    CHECK(std::fabs(static_cast<double>(ed.lambda_u * ed.lambda_s - 1.0L)) <= 1e-12);
}

TEST_CASE("tilde is the adjugate transpose and a conjugation by J") {
    IntMatrix a{2, 1, 1, 1};
    CHECK(tilde(a) == IntMatrix{1, -1, -1, 2});
    CHECK(tilde(IntMatrix{1, 1, 1, 2}) == IntMatrix{2, -1, -1, 1});
    CHECK(tilde(tilde(a)) == a);

    IntMatrix j = IntMatrix::symplectic_j();
    MatrixFamily fam = cat_pair();
    for (uint64_t s = 0; s < 25; ++s) {
        Word w = sample_word({0.5, 0.5}, 12, 1000 + s);
        IntMatrix p = word_product(fam, w).fwd;
        CHECK(tilde(p) == j * p * j.inverse_unimodular());
    }
}

TEST_CASE("word products multiply in application order") {
    MatrixFamily fam = cat_pair();
    Word w{{0, 1}};  // A first, then B
    WordProduct wp = word_product(fam, w);
    CHECK(wp.fwd == IntMatrix{3, 2, 4, 3});
    CHECK(wp.tld == IntMatrix{3, -4, -2, 3});

    Word empty;
    CHECK(word_product(fam, empty).fwd == IntMatrix::identity());

    Word bad{{0, 2}};
    CHECK_THROWS_AS(word_product(fam, bad), Error);
}

TEST_CASE("every word product is unimodular (exhaustive through length 12)") {
    MatrixFamily fam = cat_pair();
    for (int len = 1; len <= 12; ++len) {
        for (uint64_t code = 0; code < (uint64_t{1} << len); ++code) {
            Word w;
            for (int i = 0; i < len; ++i) w.letters.push_back((code >> i) & 1u);
            CHECK(word_product(fam, w).fwd.det() == 1);
        }
    }
}

TEST_CASE("cocycle split holds exactly for every cut") {
    MatrixFamily fam = cat_pair();
    for (uint64_t s = 0; s < 20; ++s) {
        size_t len = 5 + (mix64(s) % 26);  // lengths up to 30
        Word w = sample_word({0.5, 0.5}, len, 555 + s);
        WordProduct whole = word_product(fam, w);
        for (size_t k = 1; k < len; ++k) {
            Word head, tail;
            head.letters.assign(w.letters.begin(), w.letters.begin() + static_cast<long>(k));
            tail.letters.assign(w.letters.begin() + static_cast<long>(k), w.letters.end());
            WordProduct hp = word_product(fam, head);
            WordProduct tp = word_product(fam, tail);
            CHECK(tp.fwd * hp.fwd == whole.fwd);
            CHECK(tp.tld * hp.tld == whole.tld);
        }
    }
}

TEST_CASE("canonical_direction strips magnitude and sign") {
    CHECK(canonical_direction(IntVec2{-4, 6}) == IntVec2{2, -3});
    CHECK(canonical_direction(IntVec2{0, -7}) == IntVec2{0, 1});
    CHECK(canonical_direction(IntVec2{5, 0}) == IntVec2{1, 0});
}

TEST_CASE("family constructors validate probabilities") {
    std::vector<Automorphism> two{validate_automorphism(IntMatrix{2, 1, 1, 1}),
                                  validate_automorphism(IntMatrix{1, 1, 1, 2})};
    CHECK_THROWS_AS(MatrixFamily(two, {0.4, 0.4}), Error);
    CHECK_THROWS_AS(MatrixFamily(two, {1.5, -0.5}), Error);
    CHECK_NOTHROW(MatrixFamily(two, {1.0, 0.0}));  // point mass is allowed
    CHECK_THROWS_AS(MatrixFamily({two[0]}, {1.0}), Error);
}
