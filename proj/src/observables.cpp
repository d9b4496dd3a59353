#include "rantor/observables.hpp"

#include <cmath>

namespace rantor {

namespace {

size_t pow_size(uint32_t alphabet, uint32_t depth) {
    size_t n = 1;
    for (uint32_t i = 0; i < depth; ++i) {
        if (n > (size_t{1} << 40) / alphabet)
            throw Error(Errc::invalid_argument, "cylinder table too large");
        n *= alphabet;
    }
    return n;
}

}  // namespace

TrigObservable::TrigObservable(uint32_t depth, uint32_t alphabet, double beta)
    : depth_(depth), alphabet_(alphabet), beta_(beta) {
    if (alphabet_ < 2) throw Error(Errc::invalid_argument, "alphabet needs at least two letters");
    if (!(beta_ > 0.0 && beta_ <= 1.0))
        throw Error(Errc::invalid_argument, "Hoelder exponent must lie in (0,1]");
    modes_.resize(pow_size(alphabet_, depth_));
}

void TrigObservable::add_mode(size_t config, Freq q, Cplx coeff) {
    modes_.at(config)[q] += coeff;
}

void TrigObservable::add_mode_all(Freq q, Cplx coeff) {
    for (auto& table : modes_) table[q] += coeff;
}

bool TrigObservable::is_real_valued(double tol) const {
    for (const auto& table : modes_) {
        for (const auto& [q, c] : table) {
            Freq neg{-q.first, -q.second};
            auto it = table.find(neg);
            Cplx other = (it == table.end()) ? Cplx{0, 0} : it->second;
            if (std::abs(other - std::conj(c)) > tol) return false;
        }
    }
    return true;
}

double bnorm(const TrigObservable& f, double beta) {
    if (!(beta > 0.0 && beta <= 1.0))
        throw Error(Errc::invalid_argument, "Hoelder exponent must lie in (0,1]");
    long double best = 0.0L;
    for (size_t cfg = 0; cfg < f.config_count(); ++cfg) {
        long double sum = 0.0L;
        for (const auto& [q, c] : f.modes(cfg)) {
            if (q.first == 0 && q.second == 0) continue;
            long double nq = hypotl(static_cast<long double>(q.first),
                                    static_cast<long double>(q.second));
            sum += std::abs(c) * powl(nq, static_cast<long double>(beta));
        }
        best = std::max(best, sum);
    }
    return static_cast<double>(best);
}

Cplx evaluate(const TrigObservable& f, const Word& w, double x1, double x2) {
    size_t cfg = config_index(w, f.depth(), f.alphabet());
    Cplx out{0, 0};
    for (const auto& [q, c] : f.modes(cfg)) {
        double phase = static_cast<double>(q.first) * x1 + static_cast<double>(q.second) * x2;
        out += c * std::polar(1.0, phase);
    }
    return out;
}

Cplx mean_value(const TrigObservable& f, const Word& w) {
    size_t cfg = config_index(w, f.depth(), f.alphabet());
    auto it = f.modes(cfg).find(Freq{0, 0});
    return it == f.modes(cfg).end() ? Cplx{0, 0} : it->second;
}

TrigObservable add(const TrigObservable& f, const TrigObservable& g) {
    if (f.depth() != g.depth() || f.alphabet() != g.alphabet())
        throw Error(Errc::invalid_argument, "observable shapes differ");
    TrigObservable out(f.depth(), f.alphabet(), f.beta());
    for (size_t cfg = 0; cfg < f.config_count(); ++cfg) {
        for (const auto& [q, c] : f.modes(cfg)) out.add_mode(cfg, q, c);
        for (const auto& [q, c] : g.modes(cfg)) out.add_mode(cfg, q, c);
    }
    return out;
}

TrigObservable scale(const TrigObservable& f, Cplx factor) {
    TrigObservable out(f.depth(), f.alphabet(), f.beta());
    for (size_t cfg = 0; cfg < f.config_count(); ++cfg)
        for (const auto& [q, c] : f.modes(cfg)) out.add_mode(cfg, q, c * factor);
    return out;
}

}  // namespace rantor
