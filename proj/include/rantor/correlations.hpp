#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rantor/cones.hpp"
#include "rantor/lattice.hpp"
#include "rantor/observables.hpp"

namespace rantor {

/// n-th time correlation of f and g along the word, computed on the Fourier
/// side: sum over q != 0 in supp(g-hat) of f-hat(-Atilde^n q) g-hat(q) with
/// the frequency orbit in exact integers.
Cplx correlation_exact(const MatrixFamily& family, const Word& w, const TrigObservable& f,
                       const TrigObservable& g, size_t n);

/// Values for n = 0..n_max in one pass over the frequency orbits.
std::vector<Cplx> correlation_series(const MatrixFamily& family, const Word& w,
                                     const TrigObservable& f, const TrigObservable& g,
                                     size_t n_max);

struct CorrelationPoint {
    size_t n = 0;
    Cplx value;
    double abs = 0;
    double envelope = 0;
    double envelope_lyapunov = 0;  // 0 when no Lyapunov data was supplied
};

/// One word's correlation series with its envelopes attached.
struct CorrelationSeries {
    uint64_t omega_id = 0;
    std::string method;  // "exact" or "quadrature"
    std::vector<CorrelationPoint> points;
};

struct LyapunovEnvelopeData {
    double chi = 0;
    double eps = 0;
    double c_eps = 0;
};

CorrelationSeries build_series(const MatrixFamily& family, const Word& w, uint64_t omega_id,
                               const TrigObservable& f, const TrigObservable& g, double beta,
                               size_t n_max, const ConeAnalysis& analysis,
                               const std::optional<LyapunovEnvelopeData>& lyapunov = std::nullopt);

/// Smallest alias-free grid (per axis) for the pair at time n.
long quadrature_grid_size(const MatrixFamily& family, const Word& w, const TrigObservable& f,
                          const TrigObservable& g, size_t n);

/// Uniform-grid average of f(w, A_w^n x) g(w, x) minus the product of means.
/// Throws aliasing_risk unless grid exceeds the combined bandwidth.
Cplx correlation_quadrature(const MatrixFamily& family, const Word& w, const TrigObservable& f,
                            const TrigObservable& g, size_t n, long grid);

/// Skew-product correlation: f reads its cylinder configuration at offset n.
Cplx correlation_skew(const MatrixFamily& family, const Word& w, const TrigObservable& f,
                      const TrigObservable& g, size_t n);

/// Exact expectation of the skew correlation over the Bernoulli measure:
/// finite sum over every configuration of the influencing coordinates.
Cplx correlation_skew_mean(const MatrixFamily& family, const TrigObservable& f,
                           const TrigObservable& g, size_t n);

/// Certified envelope (1 + 2 C^-beta) |f| |g| e^{ -rho beta n } with
/// rho = -ln lambda from the verified cone analysis.
double decay_envelope(const ConeAnalysis& analysis, const TrigObservable& f,
                      const TrigObservable& g, double beta, size_t n);

/// Lyapunov-rate variant: same leading constant times C(eps)^-beta with rate
/// (chi - eps) beta; C(eps) is the empirical sweep constant.
double decay_envelope_lyapunov(const ConeAnalysis& analysis, double chi, double eps, double c_eps,
                               const TrigObservable& f, const TrigObservable& g, double beta,
                               size_t n);

struct DecayFit {
    double rate = 0;      // least-squares slope of ln|C(n)|
    size_t usable = 0;    // points with C(n) != 0
};

/// Fits ln|C(n)| over the nonzero entries; nullopt below two usable points.
std::optional<DecayFit> fit_decay_rate(const std::vector<Cplx>& series);

}  // namespace rantor
