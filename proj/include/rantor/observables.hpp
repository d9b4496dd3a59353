#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "rantor/lattice.hpp"
#include "rantor/random_model.hpp"

namespace rantor {

using Freq = std::pair<long, long>;
using Cplx = std::complex<double>;

/// Trigonometric polynomial on the torus with finite cylinder dependence on
/// omega: f(w, x) = sum over q of coeff(config(w), q) e^{i q.x}.
class TrigObservable {
  public:
    TrigObservable(uint32_t depth, uint32_t alphabet, double beta);

    uint32_t depth() const { return depth_; }
    uint32_t alphabet() const { return alphabet_; }
    double beta() const { return beta_; }
    size_t config_count() const { return modes_.size(); }
    const std::map<Freq, Cplx>& modes(size_t config) const { return modes_.at(config); }

    /// Adds to the coefficient at (config, q); config applies to all
    /// configurations when the observable has depth 0 only via config 0.
    void add_mode(size_t config, Freq q, Cplx coeff);
    /// Same mode in every configuration.
    void add_mode_all(Freq q, Cplx coeff);

    /// coefficient at (-q, cfg) equals the conjugate at (q, cfg) everywhere
    bool is_real_valued(double tol = 0.0) const;

  private:
    uint32_t depth_;
    uint32_t alphabet_;
    double beta_;
    std::vector<std::map<Freq, Cplx>> modes_;
};

/// Strong Hoelder norm sup over configurations of sum |coeff| |q|^beta with
/// Euclidean |q|; the q = 0 term contributes nothing. beta must be in (0,1].
double bnorm(const TrigObservable& f, double beta);

/// Pointwise value at (w, x); the word must cover the cylinder depth.
Cplx evaluate(const TrigObservable& f, const Word& w, double x1, double x2);

/// Torus mean for the word's configuration: the coefficient at q = 0.
Cplx mean_value(const TrigObservable& f, const Word& w);

TrigObservable add(const TrigObservable& f, const TrigObservable& g);
TrigObservable scale(const TrigObservable& f, Cplx factor);

}  // namespace rantor
