#include "rantor/lattice.hpp"

#include <cmath>
#include <cstdlib>

namespace rantor {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::ok: return "ok";
        case Errc::not_unimodular: return "NotUnimodular";
        case Errc::not_hyperbolic: return "NotHyperbolic";
        case Errc::cones_overlap: return "ConesOverlap";
        case Errc::cone_not_invariant: return "ConeNotInvariant";
        case Errc::no_expansion: return "NoExpansion";
        case Errc::no_contraction: return "NoContraction";
        case Errc::eigendirection_on_boundary: return "EigendirectionOnBoundary";
        case Errc::not_sign_definite: return "NotSignDefinite";
        case Errc::cap_exceeded: return "CapExceeded";
        case Errc::not_in_cone: return "NotInCone";
        case Errc::zero_vector: return "ZeroVector";
        case Errc::empty_intersection: return "EmptyIntersection";
        case Errc::aliasing_risk: return "AliasingRisk";
        case Errc::word_too_short: return "WordTooShort";
        case Errc::invalid_probs: return "InvalidProbs";
        case Errc::invalid_argument: return "InvalidArgument";
        case Errc::config_error: return "ConfigError";
        case Errc::io_error: return "IoError";
    }
    return "Unknown";
}

BigInt isqrt(const BigInt& n) {
    BigInt r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool is_perfect_square(const BigInt& n) {
    if (sign_of(n) < 0) return false;
    return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

long double to_long_double(const BigInt& z) {
    int s = sign_of(z);
    if (s == 0) return 0.0L;
    BigInt a = abs(z);
    size_t bits = mpz_sizeinbase(a.get_mpz_t(), 2);
    if (bits <= 64) return s * static_cast<long double>(mpz_get_ui(a.get_mpz_t()));
    size_t shift = bits - 64;
    BigInt top;
    mpz_tdiv_q_2exp(top.get_mpz_t(), a.get_mpz_t(), shift);
    long double m = static_cast<long double>(mpz_get_ui(top.get_mpz_t()));
    return s * std::ldexp(m, static_cast<int>(shift));
}

long double to_long_double(const BigRat& r) {
    BigInt num(r.get_num());
    BigInt den(r.get_den());
    // align magnitudes so both halves fit comfortably in long double
    size_t nb = mpz_sizeinbase(num.get_mpz_t(), 2);
    size_t db = mpz_sizeinbase(den.get_mpz_t(), 2);
    if (nb > 4000 || db > 4000) {
        long shift = static_cast<long>((nb > db ? nb : db) - 64);
        BigInt n2, d2;
        mpz_tdiv_q_2exp(n2.get_mpz_t(), num.get_mpz_t(), shift);
        mpz_tdiv_q_2exp(d2.get_mpz_t(), den.get_mpz_t(), shift);
        if (sign_of(d2) == 0) return 0.0L;
        return to_long_double(n2) / to_long_double(d2);
    }
    return to_long_double(num) / to_long_double(den);
}

BigRat rat_pow(const BigRat& base, unsigned long exp) {
    BigInt num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exp);
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exp);
    BigRat r(num, den);
    r.canonicalize();
    return r;
}

RatInterval sqrt_bounds(const BigInt& n, unsigned bits) {
    // sqrt(n) in [s/2^bits, (s+1)/2^bits] with s = isqrt(n * 4^bits)
    BigInt scaled;
    mpz_mul_2exp(scaled.get_mpz_t(), n.get_mpz_t(), 2ul * bits);
    BigInt s = isqrt(scaled);
    BigInt denom;
    mpz_ui_pow_ui(denom.get_mpz_t(), 2, bits);
    BigRat lo(s, denom), hi(s + 1, denom);
    lo.canonicalize();
    hi.canonicalize();
    return {lo, hi};
}

std::string to_string(const BigInt& z) { return z.get_str(); }
std::string to_string(const BigRat& r) { return r.get_str(); }

IntVec2 canonical_direction(const IntVec2& v) {
    BigInt g;
    mpz_gcd(g.get_mpz_t(), v.x.get_mpz_t(), v.y.get_mpz_t());
    IntVec2 p{v.x / g, v.y / g};
    int sx = sign_of(p.x);
    if (sx < 0 || (sx == 0 && sign_of(p.y) < 0)) return -p;
    return p;
}

IntMatrix tilde(const IntMatrix& m) { return m.transpose().adjugate(); }

Automorphism Automorphism::inverse() const {
    Automorphism r(*this);
    r.m_ = m_.inverse_unimodular();
    r.trace_ = r.m_.trace();
    return r;
}

Automorphism Automorphism::tilde() const {
    Automorphism r(*this);
    r.m_ = rantor::tilde(m_);
    r.trace_ = r.m_.trace();
    return r;
}

Automorphism Automorphism::transpose() const {
    Automorphism r(*this);
    r.m_ = m_.transpose();
    return r;
}

Automorphism validate_automorphism(const IntMatrix& m) {
    BigInt det = m.det();
    if (det != 1)
        throw Error(Errc::not_unimodular, "determinant is " + to_string(det) + ", want +1");
    BigInt tr = m.trace();
    if (abs(tr) <= 2)
        throw Error(Errc::not_hyperbolic, "|trace| = " + to_string(BigInt(abs(tr))) + " <= 2");
    BigInt disc = tr * tr - 4;
    if (is_perfect_square(disc))
        throw Error(Errc::not_hyperbolic,
                    "discriminant " + to_string(disc) + " is a perfect square");
    return Automorphism(m);
}

EigenData eigen_data(const Automorphism& a) {
    EigenData e;
    e.trace = a.trace();
    e.discriminant = a.discriminant();
    long double t = to_long_double(e.trace);
    long double sq = sqrtl(to_long_double(e.discriminant));
    // unstable root has the sign of the trace; adding like signs avoids cancellation
    long double lu = (t >= 0) ? (t + sq) / 2.0L : (t - sq) / 2.0L;
    e.lambda_u = lu;
    e.lambda_s = 1.0L / lu;  // det = 1
    long double am = to_long_double(a.matrix().a);
    long double bm = to_long_double(a.matrix().b);
    e.slope_u = (e.lambda_u - am) / bm;
    e.slope_s = (e.lambda_s - am) / bm;
    return e;
}

Word Word::shifted(size_t k) const {
    Word w;
    if (k < letters.size()) w.letters.assign(letters.begin() + static_cast<long>(k), letters.end());
    return w;
}

MatrixFamily::MatrixFamily(std::vector<Automorphism> members, std::vector<double> probs)
    : members_(std::move(members)), probs_(std::move(probs)) {
    if (members_.size() < 2)
        throw Error(Errc::invalid_argument, "family needs at least two members");
    if (probs_.size() != members_.size())
        throw Error(Errc::invalid_probs, "probability vector length mismatch");
    double sum = 0;
    for (double p : probs_) {
        if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::invalid_probs, "entries must lie in [0,1]");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw Error(Errc::invalid_probs, "entries must sum to 1");
}

MatrixFamily MatrixFamily::tilde_family() const {
    std::vector<Automorphism> t;
    t.reserve(members_.size());
    for (const auto& m : members_) t.push_back(m.tilde());
    return MatrixFamily(std::move(t), probs_);
}

MatrixFamily MatrixFamily::inverse_family() const {
    std::vector<Automorphism> t;
    t.reserve(members_.size());
    for (const auto& m : members_) t.push_back(m.inverse());
    return MatrixFamily(std::move(t), probs_);
}

WordProduct word_product(const MatrixFamily& family, const Word& w) {
    IntMatrix fwd = IntMatrix::identity();
    for (size_t i = 0; i < w.size(); ++i) {
        uint32_t idx = w[i];
        if (idx >= family.size())
            throw Error(Errc::invalid_argument, "word letter out of family range");
        fwd = family.member(idx).matrix() * fwd;  // index 0 applied first
    }
    return {fwd, tilde(fwd)};
}

}  // namespace rantor
