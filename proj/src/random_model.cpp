#include "rantor/random_model.hpp"

#include <cmath>

namespace rantor {

uint64_t mix64(uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

uint64_t derive_seed(uint64_t seed, uint64_t stream) {
    return mix64(seed ^ mix64(stream + 0xD1B54A32D192ED03ull));
}

double unit_double(uint64_t z) { return static_cast<double>(z >> 11) * 0x1.0p-53; }

namespace {

void check_probs(const std::vector<double>& probs) {
    if (probs.empty()) throw Error(Errc::invalid_probs, "empty probability vector");
    double sum = 0;
    for (double p : probs) {
        if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::invalid_probs, "entries must lie in [0,1]");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw Error(Errc::invalid_probs, "entries must sum to 1");
}

uint32_t draw_index(const std::vector<double>& probs, double u) {
    double acc = 0;
    for (size_t i = 0; i + 1 < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) return static_cast<uint32_t>(i);
    }
    return static_cast<uint32_t>(probs.size() - 1);
}

}  // namespace

OmegaStream::OmegaStream(uint64_t seed, std::vector<double> probs, uint64_t position)
    : seed_(seed), position_(position), probs_(std::move(probs)) {
    check_probs(probs_);
}

uint32_t OmegaStream::letter(uint64_t n) const {
    uint64_t z = mix64(seed_ ^ (0x9E3779B97F4A7C15ull * (position_ + n + 1)));
    return draw_index(probs_, unit_double(z));
}

Word OmegaStream::word(size_t length) const {
    Word w;
    w.letters.reserve(length);
    for (size_t n = 0; n < length; ++n) w.letters.push_back(letter(n));
    return w;
}

OmegaStream OmegaStream::shifted(uint64_t k) const {
    return OmegaStream(seed_, probs_, position_ + k);
}

Word sample_word(const std::vector<double>& probs, size_t n, uint64_t seed) {
    return OmegaStream(seed, probs).word(n);
}

std::vector<std::array<double, 2>> skew_orbit(const MatrixFamily& family, const Word& w,
                                              std::array<double, 2> x0) {
    constexpr double two_pi = 2.0 * M_PI;
    auto reduce = [](double v) {
        double r = std::fmod(v, two_pi);
        if (r < 0) r += two_pi;
        return r;
    };
    std::vector<std::array<double, 2>> orbit;
    orbit.reserve(w.size() + 1);
    std::array<double, 2> x{reduce(x0[0]), reduce(x0[1])};
    orbit.push_back(x);
    for (size_t n = 0; n < w.size(); ++n) {
        if (w[n] >= family.size())
            throw Error(Errc::invalid_argument, "word letter out of family range");
        const IntMatrix& m = family.member(w[n]).matrix();
        double a = static_cast<double>(to_long_double(m.a));
        double b = static_cast<double>(to_long_double(m.b));
        double c = static_cast<double>(to_long_double(m.c));
        double d = static_cast<double>(to_long_double(m.d));
        x = {reduce(a * x[0] + b * x[1]), reduce(c * x[0] + d * x[1])};
        orbit.push_back(x);
    }
    return orbit;
}

double sigma_value(const std::vector<size_t>& subset, const Word& w, double p) {
    if (!(p > 0.0 && p < 1.0))
        throw Error(Errc::invalid_probs, "sigma functions need p strictly inside (0,1)");
    double plus = std::sqrt(p / (1.0 - p));
    double minus = -std::sqrt((1.0 - p) / p);
    double out = 1.0;
    for (size_t i : subset) {
        if (i >= w.size()) throw Error(Errc::invalid_argument, "sigma index beyond word length");
        out *= (w[i] == 0) ? minus : plus;
    }
    return out;
}

std::complex<double> CylinderFunction::eval(const Word& w) const {
    return table[config_index(w, depth, alphabet)];
}

CylinderFunction CylinderFunction::sigma(const std::vector<size_t>& subset, double p) {
    uint32_t depth = 0;
    for (size_t i : subset) depth = std::max<uint32_t>(depth, static_cast<uint32_t>(i) + 1);
    CylinderFunction f;
    f.depth = depth;
    f.alphabet = 2;
    size_t n = size_t{1} << depth;
    f.table.resize(n);
    for (size_t cfg = 0; cfg < n; ++cfg) {
        Word w;
        for (uint32_t i = 0; i < depth; ++i) w.letters.push_back((cfg >> i) & 1u);
        f.table[cfg] = sigma_value(subset, w, p);
    }
    return f;
}

size_t config_index(const Word& w, uint32_t depth, uint32_t alphabet, size_t offset) {
    if (w.size() < offset + depth)
        throw Error(Errc::word_too_short, "word shorter than cylinder depth");
    size_t idx = 0;
    size_t base = 1;
    for (uint32_t i = 0; i < depth; ++i) {
        idx += w[offset + i] * base;
        base *= alphabet;
    }
    return idx;
}

}  // namespace rantor
