#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rantor/cones.hpp"
#include "rantor/lattice.hpp"

namespace rantor {

struct Violation {
    uint64_t omega_id = 0;
    std::string q;      // frequency or word witness
    long n = -1;        // step, -1 when not applicable
    std::string bound;  // which inequality or set property failed
    std::string detail;
};

/// Witness storage cap per sweep; the full count is always exact.
inline constexpr size_t kMaxStoredViolations = 50000;

struct SweepReport {
    uint64_t checks = 0;
    uint64_t violation_count = 0;
    std::vector<Violation> violations;  // first kMaxStoredViolations, canonical order
    double seconds = 0;

    bool pass() const { return violation_count == 0; }
    void record(Violation v) {
        ++violation_count;
        if (violations.size() < kMaxStoredViolations) violations.push_back(std::move(v));
    }
};

/// Adversarial corruption knobs for the falsifiability self-tests.
enum class CorruptMode { none, halve_lambda, double_c, halve_m };

/// Largest N with Atilde_w^N q still inside C (the next step leaves it,
/// where the complement is strict under the shared-boundary convention).
/// The matrices of `family` act directly; pass the tilde family for the
/// Fourier-side orbit. Throws not_in_cone / zero_vector / cap_exceeded.
int contraction_time(const MatrixFamily& family, const Word& w, const IntVec2& q,
                     const Cone& contraction, const BigRat& lambda_sq, int cap);

/// Exhaustive lattice sweep of the complementary-bound lemma over all
/// 0 < |q| <= radius, n <= n_max and omega_samples sampled words. Exact
/// integer norms against outward-rounded rational bounds; also checks the
/// contraction-time bound and the partition disjointness/coverage.
SweepReport verify_lemma_bounds(const MatrixFamily& tilde_family, const Cone& expansion,
                                const Cone& contraction, const BigRat& lambda_sq,
                                const BigRat& c_sq_lo, long radius, int n_max,
                                size_t omega_samples, uint64_t seed,
                                CorruptMode corrupt = CorruptMode::none, unsigned threads = 1);

/// Convenience form pulling lambda^2 and the rounded C^2 out of the analysis.
SweepReport verify_lemma_bounds(const MatrixFamily& tilde_family, const Cone& expansion,
                                const Cone& contraction, const ConeAnalysis& analysis,
                                long radius, int n_max, size_t omega_samples, uint64_t seed,
                                CorruptMode corrupt = CorruptMode::none, unsigned threads = 1);

/// Random integer vectors in the gap sectors stay mapped into E after every
/// word of length M (exact membership). Vacuous when the gap is empty.
SweepReport escape_spot_check(const MatrixFamily& family, const Cone& expansion,
                              const Cone& contraction, int escape_steps, size_t vectors,
                              uint64_t seed);

struct Lemma2Estimate {
    double value = 0;  // empirical infimum, strictly positive on sane sweeps
    Violation witness; // where the infimum was attained
    uint64_t checks = 0;
};

/// Empirical infimum of the three ratios that bound the Lyapunov-rate
/// constant C(eps); reported as an estimate, never a certificate.
Lemma2Estimate estimate_lemma2_constant(const MatrixFamily& tilde_family, const Cone& expansion,
                                        const Cone& contraction, double chi, double eps,
                                        long radius, int n_max, size_t omega_samples,
                                        uint64_t seed, unsigned threads = 1);

/// |trace| > 2 in exact integers for every word of exactly length L
/// (L = 0 is a vacuous pass).
SweepReport verify_product_hyperbolicity(const MatrixFamily& family, int length);

struct DiophantineResult {
    /// Tail estimate of the Diophantine constant: min of
    /// |alpha - q2/q1| q1^(2+eps) over q1 in (q_max/2, q_max]. The tail
    /// discards the uninformative small denominators and converges to the
    /// asymptotic constant (1/sqrt(5) for the golden slope).
    double value = 0;
    long q1 = 0;
    long long q2 = 0;
    /// Minimum over the full range 1 <= q1 <= q_max, with its witness.
    double value_global = 0;
    long q1_global = 0;
    long long q2_global = 0;
    double alpha = 0;
};

/// Empirical Diophantine sweep for the eigendirection slope, evaluated from
/// (trace, discriminant) at 256-bit precision.
DiophantineResult diophantine_sweep(const Automorphism& a, bool unstable_slope, double eps,
                                    long q_max);

}  // namespace rantor
