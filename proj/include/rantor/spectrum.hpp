#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rantor/cones.hpp"
#include "rantor/lattice.hpp"

namespace rantor {

struct SpectrumEstimate {
    double chi_top = 0;  // nats per step
    double stderr_mean = 0;
    size_t n_steps = 0;
    size_t trials = 0;
    std::vector<double> per_trial;
};

/// Renormalized vector iteration over sampled words; one independent seeded
/// word and start vector per trial. Start vectors accidentally within 1e-9
/// (sine of angle) of the word's stable direction are redrawn.
SpectrumEstimate estimate_top_exponent(const MatrixFamily& family, size_t n, size_t trials,
                                       uint64_t seed, unsigned threads = 1);

struct SymMat2 {
    double xx = 0, xy = 0, yy = 0;
};

struct LimitMatrixEstimate {
    SymMat2 lambda;             // ((A^n)^T A^n)^(1/2n)
    double eig_max = 0;         // exp(chi^(2)) estimate
    double eig_min = 0;         // exp(chi^(1)) estimate, = 1/eig_max
    std::array<double, 2> dir_max{};  // unit eigenvector for eig_max
    std::array<double, 2> dir_min{};
};

/// Exact integer word product, then the (1/2n)-power of (P^T P).
LimitMatrixEstimate estimate_limit_matrix(const MatrixFamily& family, const Word& w);

struct StableDirection {
    std::array<double, 2> direction{};  // unit midline of the final sector
    double width = 0;                   // angular width in radians
};

/// Intersection of exact preimages of the contraction cone along the word.
/// Throws empty_intersection when the pullbacks stop being nested, which
/// signals a cone-property violation.
StableDirection stable_direction(const MatrixFamily& family, const Word& w, const Cone& contraction);

}  // namespace rantor
