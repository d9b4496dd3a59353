#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "rantor/lattice.hpp"

namespace rantor {

/// SplitMix64 finalizer; the workhorse behind all seeding.
uint64_t mix64(uint64_t z);
/// Derive an independent stream seed from (seed, stream index).
uint64_t derive_seed(uint64_t seed, uint64_t stream);
/// Uniform double in [0,1) from a 64-bit state.
double unit_double(uint64_t z);

/// Counter-based view of an omega sequence: omega(n) is a pure function of
/// (seed, position + n), so shifts are exact and sweeps parallelize with
/// deterministic output.
class OmegaStream {
  public:
    OmegaStream(uint64_t seed, std::vector<double> probs, uint64_t position = 0);

    uint32_t letter(uint64_t n) const;
    Word word(size_t length) const;
    OmegaStream shifted(uint64_t k = 1) const;

    uint64_t seed() const { return seed_; }
    uint64_t position() const { return position_; }
    const std::vector<double>& probs() const { return probs_; }

  private:
    uint64_t seed_;
    uint64_t position_;
    std::vector<double> probs_;
};

/// i.i.d. word of length n; index 0 drawn with probability probs[0].
Word sample_word(const std::vector<double>& probs, size_t n, uint64_t seed);

/// Torus orbit x, A_w(0) x, A_w(1) A_w(0) x, ... reduced into [0, 2pi)^2.
/// Returns n+1 points including the start.
std::vector<std::array<double, 2>> skew_orbit(const MatrixFamily& family, const Word& w,
                                              std::array<double, 2> x0);

/// Product over i in subset of sigma_i(w), the orthonormal basis functions:
/// sqrt(p/(1-p)) when w(i) = 1, -sqrt((1-p)/p) when w(i) = 0. Requires
/// p in (0,1); the empty subset gives 1. For families with more than two
/// members, letter 0 plays the role of "0" and everything else of "1".
double sigma_value(const std::vector<size_t>& subset, const Word& w, double p);

/// Function of finitely many leading omega coordinates.
struct CylinderFunction {
    uint32_t depth = 0;
    uint32_t alphabet = 2;
    std::vector<std::complex<double>> table;  // alphabet^depth entries

    std::complex<double> eval(const Word& w) const;
    /// sigma_A as a cylinder function of depth max(subset)+1.
    static CylinderFunction sigma(const std::vector<size_t>& subset, double p);
};

/// Index of the length-`depth` configuration read from the head of w
/// (letter 0 is the least significant digit).
size_t config_index(const Word& w, uint32_t depth, uint32_t alphabet, size_t offset = 0);

}  // namespace rantor
