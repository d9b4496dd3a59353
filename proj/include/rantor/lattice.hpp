#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rantor/error.hpp"
#include "rantor/exact.hpp"

namespace rantor {

/// Exact integer vector in Z^2.
struct IntVec2 {
    BigInt x;
    BigInt y;

    IntVec2() : x(0), y(0) {}
    IntVec2(BigInt px, BigInt py) : x(std::move(px)), y(std::move(py)) {}
    IntVec2(long px, long py) : x(px), y(py) {}

    bool is_zero() const { return sign_of(x) == 0 && sign_of(y) == 0; }
    BigInt norm_sq() const { return x * x + y * y; }

    IntVec2 operator+(const IntVec2& o) const { return {x + o.x, y + o.y}; }
    IntVec2 operator-(const IntVec2& o) const { return {x - o.x, y - o.y}; }
    IntVec2 operator-() const { return {-x, -y}; }
    bool operator==(const IntVec2& o) const { return x == o.x && y == o.y; }
    bool operator!=(const IntVec2& o) const { return !(*this == o); }
};

inline BigInt cross(const IntVec2& a, const IntVec2& b) { return a.x * b.y - a.y * b.x; }
inline BigInt dot(const IntVec2& a, const IntVec2& b) { return a.x * b.x + a.y * b.y; }

/// Primitive representative of the direction of v (gcd removed, x > 0 or
/// x == 0 and y > 0). v must be nonzero.
IntVec2 canonical_direction(const IntVec2& v);

/// Row-major exact integer 2x2 matrix [[a,b],[c,d]].
struct IntMatrix {
    BigInt a, b, c, d;

    IntMatrix() : a(0), b(0), c(0), d(0) {}
    IntMatrix(BigInt pa, BigInt pb, BigInt pc, BigInt pd)
        : a(std::move(pa)), b(std::move(pb)), c(std::move(pc)), d(std::move(pd)) {}
    IntMatrix(long pa, long pb, long pc, long pd) : a(pa), b(pb), c(pc), d(pd) {}

    static IntMatrix identity() { return {1, 0, 0, 1}; }
    /// J = [[0,1],[-1,0]].
    static IntMatrix symplectic_j() { return {0, 1, -1, 0}; }

    BigInt det() const { return a * d - b * c; }
    BigInt trace() const { return a + d; }
    IntMatrix transpose() const { return {a, c, b, d}; }
    IntMatrix adjugate() const { return {d, -b, -c, a}; }
    /// Exact inverse for det = +1 matrices.
    IntMatrix inverse_unimodular() const { return adjugate(); }

    IntMatrix operator*(const IntMatrix& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    IntVec2 operator*(const IntVec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    bool operator==(const IntMatrix& o) const {
        return a == o.a && b == o.b && c == o.c && d == o.d;
    }
    bool operator!=(const IntMatrix& o) const { return !(*this == o); }
};

/// (A^T)^-1 = J A J^-1 for any det = +1 matrix.
IntMatrix tilde(const IntMatrix& m);

/// Hyperbolic toral automorphism: det = +1, |trace| > 2.
class Automorphism {
  public:
    const IntMatrix& matrix() const { return m_; }
    const BigInt& trace() const { return trace_; }
    /// trace^2 - 4, positive and never a perfect square.
    BigInt discriminant() const { return trace_ * trace_ - 4; }
    Automorphism inverse() const;
    Automorphism tilde() const;
    Automorphism transpose() const;

  private:
    friend Automorphism validate_automorphism(const IntMatrix& m);
    explicit Automorphism(IntMatrix m) : m_(std::move(m)), trace_(m_.a + m_.d) {}

    IntMatrix m_;
    BigInt trace_;
};

/// Throws not_unimodular / not_hyperbolic.
Automorphism validate_automorphism(const IntMatrix& m);

/// Eigenvalues and eigendirections of an automorphism. Exact data is the
/// (trace, discriminant) pair; evaluations carry >= 64 mantissa bits.
struct EigenData {
    BigInt trace;
    BigInt discriminant;
    long double lambda_u = 0;  // |lambda_u| > 1
    long double lambda_s = 0;  // lambda_u * lambda_s = 1
    long double slope_u = 0;   // e_u = (1, slope_u)
    long double slope_s = 0;
};

EigenData eigen_data(const Automorphism& a);

/// Finite word over {0..k-1}; index 0 names the first matrix applied.
struct Word {
    std::vector<uint32_t> letters;

    size_t size() const { return letters.size(); }
    uint32_t operator[](size_t i) const { return letters[i]; }
    /// Drop the head: (w(1), w(2), ...).
    Word shifted(size_t k = 1) const;
};

/// Ordered family of automorphisms with selection probabilities.
class MatrixFamily {
  public:
    MatrixFamily(std::vector<Automorphism> members, std::vector<double> probs);

    size_t size() const { return members_.size(); }
    const Automorphism& member(size_t i) const { return members_[i]; }
    const std::vector<Automorphism>& members() const { return members_; }
    const std::vector<double>& probs() const { return probs_; }

    MatrixFamily tilde_family() const;
    MatrixFamily inverse_family() const;

  private:
    std::vector<Automorphism> members_;
    std::vector<double> probs_;
};

struct WordProduct {
    IntMatrix fwd;  // A_w(n-1) ... A_w(0)
    IntMatrix tld;  // ((fwd)^T)^-1, computed by exact adjugate
};

WordProduct word_product(const MatrixFamily& family, const Word& w);

}  // namespace rantor
