#include "rantor/cones.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace rantor {

namespace {

// signs of the (u1, u2)-basis coordinates of v, scaled by the basis
// determinant so the test stays in exact integers
std::pair<int, int> coord_signs(const Cone& cone, const IntVec2& v) {
    int sd = sign_of(cross(cone.u1(), cone.u2()));
    int s1 = sign_of(cross(v, cone.u2())) * sd;
    int s2 = sign_of(cross(cone.u1(), v)) * sd;
    return {s1, s2};
}

struct LdVec {
    long double x, y;
};

LdVec to_ld(const IntVec2& v) { return {to_long_double(v.x), to_long_double(v.y)}; }

long double norm_ld(const LdVec& v) { return hypotl(v.x, v.y); }

std::pair<long double, long double> coord_sines(const Cone& cone, long double vx,
                                                long double vy) {
    LdVec a = to_ld(cone.u1());
    LdVec b = to_ld(cone.u2());
    long double sd = sign_of(cross(cone.u1(), cone.u2())) >= 0 ? 1.0L : -1.0L;
    long double nv = hypotl(vx, vy);
    long double c1 = (vx * b.y - vy * b.x) * sd / (nv * norm_ld(b));
    long double c2 = (a.x * vy - a.y * vx) * sd / (nv * norm_ld(a));
    return {c1, c2};
}

std::string vec_str(const IntVec2& v) {
    return "(" + to_string(v.x) + "," + to_string(v.y) + ")";
}

// Rayleigh quotient |m v|^2 / |v|^2 as an exact rational
BigRat ray_quotient_sq(const IntMatrix& m, const IntVec2& v) {
    BigRat q((m * v).norm_sq(), v.norm_sq());
    q.canonicalize();
    return q;
}

// direction of the minimal singular value of m, in long double
LdVec min_singular_direction(const IntMatrix& m) {
    IntMatrix g = m.transpose() * m;
    long double g11 = to_long_double(g.a);
    long double g12 = to_long_double(g.b);
    long double g22 = to_long_double(g.d);
    if (g12 == 0.0L) return (g11 <= g22) ? LdVec{1.0L, 0.0L} : LdVec{0.0L, 1.0L};
    long double tr = g11 + g22;
    long double det = to_long_double(g.det());
    long double disc = sqrtl(tr * tr - 4.0L * det);
    long double mu_max = (tr + disc) / 2.0L;
    long double mu_min = det / mu_max;
    // eigenvector of G for mu: (g12, mu - g11)
    return {g12, mu_min - g11};
}

// enclosure of mu_i^2 = sigma_min(A_i)^2, the square of the a-priori
// factor 1/|A_i^-1|. For normal members this equals lambda_s^2; in general
// it is smaller, and only sigma_min makes |A_i q| >= mu_i |q| valid.
RatInterval mu_sq_bounds(const Automorphism& a, unsigned bits) {
    IntMatrix g = a.matrix().transpose() * a.matrix();
    BigInt t = g.trace();  // det G = 1, so sigma_min^2 = 2 / (t + sqrt(t^2 - 4))
    RatInterval sq = sqrt_bounds(t * t - 4, bits);
    BigRat lo = 2 / (BigRat(t) + sq.hi);
    BigRat hi = 2 / (BigRat(t) + sq.lo);
    lo.canonicalize();
    hi.canonicalize();
    return {lo, hi};
}

constexpr long double kDirectionMargin = 1e-12L;

}  // namespace

Cone::Cone(IntVec2 u1, IntVec2 u2) : u1_(std::move(u1)), u2_(std::move(u2)) {
    if (u1_.is_zero() || u2_.is_zero())
        throw Error(Errc::zero_vector, "cone boundary rays must be nonzero");
    if (sign_of(cross(u1_, u2_)) == 0)
        throw Error(Errc::invalid_argument, "cone boundary rays must be independent");
}

bool Cone::operator==(const Cone& o) const { return cone_subset(*this, o) && cone_subset(o, *this); }

bool contains(const Cone& cone, const IntVec2& v) {
    auto [s1, s2] = coord_signs(cone, v);
    return (s1 >= 0 && s2 >= 0) || (s1 <= 0 && s2 <= 0);
}

bool contains_interior(const Cone& cone, const IntVec2& v) {
    auto [s1, s2] = coord_signs(cone, v);
    return (s1 > 0 && s2 > 0) || (s1 < 0 && s2 < 0);
}

bool cone_subset(const Cone& inner, const Cone& outer) {
    auto [p1, q1] = coord_signs(outer, inner.u1());
    auto [p2, q2] = coord_signs(outer, inner.u2());
    bool nonneg = p1 >= 0 && q1 >= 0 && p2 >= 0 && q2 >= 0;
    bool nonpos = p1 <= 0 && q1 <= 0 && p2 <= 0 && q2 <= 0;
    return nonneg || nonpos;
}

Cone map_cone(const IntMatrix& m, const Cone& cone) {
    if (sign_of(m.det()) == 0) throw Error(Errc::invalid_argument, "map_cone needs an invertible matrix");
    return Cone(m * cone.u1(), m * cone.u2());
}

bool cones_share_ray(const Cone& a, const Cone& b) {
    IntVec2 a1 = canonical_direction(a.u1());
    IntVec2 a2 = canonical_direction(a.u2());
    IntVec2 b1 = canonical_direction(b.u1());
    IntVec2 b2 = canonical_direction(b.u2());
    return a1 == b1 || a1 == b2 || a2 == b1 || a2 == b2;
}

bool contains_with_margin(const Cone& cone, long double vx, long double vy, long double margin) {
    auto [c1, c2] = coord_sines(cone, vx, vy);
    return (c1 >= -margin && c2 >= -margin) || (c1 <= margin && c2 <= margin);
}

bool strictly_interior_with_margin(const Cone& cone, long double vx, long double vy,
                                   long double margin) {
    auto [c1, c2] = coord_sines(cone, vx, vy);
    return (c1 > margin && c2 > margin) || (c1 < -margin && c2 < -margin);
}

ConeCheckReport verify_cone_property(const MatrixFamily& family, const Cone& expansion,
                                     const Cone& contraction) {
    ConeCheckReport rep;
    rep.shared_boundary = cones_share_ray(expansion, contraction);

    auto fail = [&rep](Errc code, const std::string& name, const std::string& witness) {
        rep.clauses.push_back({name, false, witness});
        if (!rep.failure) rep.failure = code;
    };
    auto pass = [&rep](const std::string& name) { rep.clauses.push_back({name, true, {}}); };

    // interiors must be disjoint
    bool overlap = false;
    std::string overlap_witness;
    if (expansion == contraction) {
        overlap = true;
        overlap_witness = "cones coincide";
    }
    for (const IntVec2* r : {&contraction.u1(), &contraction.u2()}) {
        if (!overlap && contains_interior(expansion, *r)) {
            overlap = true;
            overlap_witness = "contraction ray " + vec_str(*r) + " interior to expansion cone";
        }
    }
    for (const IntVec2* r : {&expansion.u1(), &expansion.u2()}) {
        if (!overlap && contains_interior(contraction, *r)) {
            overlap = true;
            overlap_witness = "expansion ray " + vec_str(*r) + " interior to contraction cone";
        }
    }
    if (overlap)
        fail(Errc::cones_overlap, "interiors_disjoint", overlap_witness);
    else
        pass("interiors_disjoint");

    BigRat le_sq;   // min |A_i u|^2/|u|^2 over expansion rays
    BigRat lc_inv_sq;
    bool first_e = true, first_c = true;

    for (size_t i = 0; i < family.size(); ++i) {
        const Automorphism& a = family.member(i);
        const IntMatrix& m = a.matrix();
        IntMatrix minv = m.inverse_unimodular();
        std::string tag = "member_" + std::to_string(i);

        auto invariance_witness = [](const Cone& img, const Cone& target) {
            if (!contains(target, img.u1()))
                return "image ray " + vec_str(img.u1()) + " leaves the cone";
            if (!contains(target, img.u2()))
                return "image ray " + vec_str(img.u2()) + " leaves the cone";
            return "image sector spanned by " + vec_str(img.u1()) + ", " + vec_str(img.u2()) +
                   " crosses the complement";
        };

        // invariance A_i E subset E
        Cone img_e = map_cone(m, expansion);
        if (cone_subset(img_e, expansion)) {
            pass(tag + "_expansion_invariant");
        } else {
            fail(Errc::cone_not_invariant, tag + "_expansion_invariant",
                 invariance_witness(img_e, expansion));
        }

        // invariance A_i^-1 C subset C
        Cone img_c = map_cone(minv, contraction);
        if (cone_subset(img_c, contraction)) {
            pass(tag + "_contraction_invariant");
        } else {
            fail(Errc::cone_not_invariant, tag + "_contraction_invariant",
                 invariance_witness(img_c, contraction));
        }

        // expansion rate candidates: boundary rays, plus the minimal singular
        // direction when it crosses into the sector (margin errs toward failure)
        for (const IntVec2* r : {&expansion.u1(), &expansion.u2()}) {
            BigRat q = ray_quotient_sq(m, *r);
            if (first_e || q < le_sq) le_sq = q;
            first_e = false;
        }
        LdVec smin = min_singular_direction(m);
        if (contains_with_margin(expansion, smin.x, smin.y, kDirectionMargin)) {
            fail(Errc::no_expansion, tag + "_no_singular_direction_in_expansion_cone",
                 "minimal stretch direction of the member lies in the expansion cone");
        } else {
            pass(tag + "_no_singular_direction_in_expansion_cone");
        }

        for (const IntVec2* r : {&contraction.u1(), &contraction.u2()}) {
            BigRat q = ray_quotient_sq(minv, *r);
            if (first_c || q < lc_inv_sq) lc_inv_sq = q;
            first_c = false;
        }
        LdVec smin_inv = min_singular_direction(minv);
        if (contains_with_margin(contraction, smin_inv.x, smin_inv.y, kDirectionMargin)) {
            fail(Errc::no_contraction, tag + "_no_singular_direction_in_contraction_cone",
                 "minimal stretch direction of the inverse lies in the contraction cone");
        } else {
            pass(tag + "_no_singular_direction_in_contraction_cone");
        }

        // eigendirections strictly interior
        EigenData ed = eigen_data(a);
        if (strictly_interior_with_margin(expansion, 1.0L, ed.slope_u, kDirectionMargin)) {
            pass(tag + "_unstable_direction_interior");
        } else {
            std::ostringstream os;
            os << "e_u ~ (1, " << static_cast<double>(ed.slope_u)
               << ") not strictly inside the expansion cone";
            fail(Errc::eigendirection_on_boundary, tag + "_unstable_direction_interior", os.str());
        }
        if (strictly_interior_with_margin(contraction, 1.0L, ed.slope_s, kDirectionMargin)) {
            pass(tag + "_stable_direction_interior");
        } else {
            std::ostringstream os;
            os << "e_s ~ (1, " << static_cast<double>(ed.slope_s)
               << ") not strictly inside the contraction cone";
            fail(Errc::eigendirection_on_boundary, tag + "_stable_direction_interior", os.str());
        }
    }

    if (le_sq > 1) {
        pass("expansion_rate_exceeds_one");
    } else {
        fail(Errc::no_expansion, "expansion_rate_exceeds_one",
             "min |A x|^2/|x|^2 over boundary rays is " + to_string(le_sq));
    }
    if (lc_inv_sq > 1) {
        pass("contraction_rate_below_one");
    } else {
        fail(Errc::no_contraction, "contraction_rate_below_one",
             "min |A^-1 x|^2/|x|^2 over boundary rays is " + to_string(lc_inv_sq));
    }

    rep.lambda_e_sq = le_sq;
    rep.lambda_c_inv_sq = lc_inv_sq;
    BigRat lc_sq = 1 / lc_inv_sq;
    BigRat le_inv_sq = 1 / le_sq;
    lc_sq.canonicalize();
    le_inv_sq.canonicalize();
    rep.lambda_sq = std::max(lc_sq, le_inv_sq);
    rep.lambda_e = std::sqrt(static_cast<double>(to_long_double(le_sq)));
    rep.lambda_c = std::sqrt(static_cast<double>(to_long_double(lc_sq)));
    rep.lambda = std::sqrt(static_cast<double>(to_long_double(rep.lambda_sq)));

    rep.pass = !rep.failure.has_value();
    return rep;
}

std::pair<Cone, Cone> default_quadrant_cones(const MatrixFamily& family) {
    for (size_t i = 0; i < family.size(); ++i) {
        const IntMatrix& m = family.member(i).matrix();
        bool pos = sign_of(m.a) > 0 && sign_of(m.b) > 0 && sign_of(m.c) > 0 && sign_of(m.d) > 0;
        bool neg = sign_of(m.a) < 0 && sign_of(m.b) < 0 && sign_of(m.c) < 0 && sign_of(m.d) < 0;
        if (!pos && !neg)
            throw Error(Errc::not_sign_definite,
                        "member " + std::to_string(i) + " has mixed-sign entries");
    }
    return {Cone({1, 0}, {0, 1}), Cone({0, 1}, {-1, 0})};
}

std::pair<Cone, Cone> tilde_cones(const Cone& expansion, const Cone& contraction) {
    IntMatrix j = IntMatrix::symplectic_j();
    return {map_cone(j, expansion), map_cone(j, contraction)};
}

std::vector<Cone> gap_sectors(const Cone& expansion, const Cone& contraction) {
    std::vector<IntVec2> dirs;
    for (const IntVec2* r :
         {&expansion.u1(), &expansion.u2(), &contraction.u1(), &contraction.u2()}) {
        IntVec2 c = canonical_direction(*r);
        bool dup = false;
        for (const auto& d : dirs) dup = dup || d == c;
        if (!dup) dirs.push_back(c);
    }
    std::sort(dirs.begin(), dirs.end(),
              [](const IntVec2& a, const IntVec2& b) { return sign_of(cross(a, b)) > 0; });

    std::vector<Cone> gaps;
    size_t m = dirs.size();
    for (size_t i = 0; i < m; ++i) {
        IntVec2 lo = dirs[i];
        IntVec2 hi = (i + 1 < m) ? dirs[i + 1] : -dirs[0];
        IntVec2 probe = lo + hi;
        if (!contains(expansion, probe) && !contains(contraction, probe))
            gaps.emplace_back(lo, hi);
    }
    return gaps;
}

EscapeData escape_data(const MatrixFamily& family, const Cone& expansion, const Cone& contraction,
                       const BigRat& lambda_sq, int cap) {
    EscapeData out;
    for (size_t i = 0; i < family.size(); ++i) {
        RatInterval b = mu_sq_bounds(family.member(i), 128);
        out.mu.push_back(std::sqrt(static_cast<double>(to_long_double(b.lo))));
    }

    std::vector<Cone> gaps = gap_sectors(expansion, contraction);
    if (gaps.empty()) {
        out.escape_steps = 0;
        out.c_const = 1.0;
        out.c_const_sq_lo = BigRat(1);
        out.c_const_sq_hi = BigRat(1);
        return out;
    }

    int m_steps = 0;
    struct Frame {
        Cone sector;
        int depth;
    };
    std::deque<Frame> stack;
    for (const Cone& g : gaps) stack.push_back({g, 0});
    size_t nodes = 0;
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        if (++nodes > 4000000)
            throw Error(Errc::cap_exceeded, "gap propagation exceeded the node budget");
        if (cone_subset(f.sector, expansion)) {
            m_steps = std::max(m_steps, f.depth);
            continue;
        }
        if (f.depth >= cap)
            throw Error(Errc::cap_exceeded,
                        "gap sector not absorbed by the expansion cone within " +
                            std::to_string(cap) + " steps");
        for (size_t i = 0; i < family.size(); ++i)
            stack.push_back({map_cone(family.member(i).matrix(), f.sector), f.depth + 1});
    }
    out.escape_steps = m_steps;

    double mu_min = *std::min_element(out.mu.begin(), out.mu.end());
    double lambda = std::sqrt(static_cast<double>(to_long_double(lambda_sq)));
    out.c_const = std::pow(lambda * mu_min, m_steps);

    BigRat mu2_lo, mu2_hi;
    bool first = true;
    for (size_t i = 0; i < family.size(); ++i) {
        RatInterval b = mu_sq_bounds(family.member(i), 128);
        if (first || b.lo < mu2_lo) mu2_lo = b.lo;
        if (first || b.hi < mu2_hi) mu2_hi = b.hi;
        first = false;
    }
    unsigned long em = static_cast<unsigned long>(m_steps);
    out.c_const_sq_lo = rat_pow(lambda_sq, em) * rat_pow(mu2_lo, em);
    out.c_const_sq_hi = rat_pow(lambda_sq, em) * rat_pow(mu2_hi, em);
    out.c_const_sq_lo.canonicalize();
    out.c_const_sq_hi.canonicalize();
    return out;
}

Transversality transversality_constant(const Cone& expansion, const Cone& contraction) {
    Transversality t;
    if (cones_share_ray(expansion, contraction)) {
        t.unbounded = true;
        t.k = 0;
        return t;
    }
    std::vector<IntVec2> rays_c{contraction.u1(), contraction.u2(), -contraction.u1(),
                                -contraction.u2()};
    std::vector<IntVec2> rays_e{expansion.u1(), expansion.u2(), -expansion.u1(), -expansion.u2()};
    BigRat best(1);
    for (const IntVec2& c : rays_c) {
        for (const IntVec2& e : rays_e) {
            for (const IntVec2& c2 : rays_c) {
                // x = s c, y = e, x + y = r c2
                BigInt delta = -cross(c, c2);
                if (sign_of(delta) == 0) continue;
                BigRat s(cross(e, c2), delta);
                BigRat r(cross(e, c), delta);
                s.canonicalize();
                r.canonicalize();
                if (sign_of(s) <= 0 || sign_of(r) <= 0) continue;
                BigRat k1(e.norm_sq(), 1);
                k1 /= s * s * BigRat(c.norm_sq());
                k1.canonicalize();
                BigRat k2 = s * s * BigRat(c.norm_sq()) / (r * r * BigRat(c2.norm_sq()));
                k2.canonicalize();
                if (k1 > best) best = k1;
                if (k2 > best) best = k2;
            }
        }
    }
    t.k_sq = best;
    t.k = std::sqrt(static_cast<double>(to_long_double(best)));
    return t;
}

ConeAnalysis analyze_cones(const MatrixFamily& family, const Cone& expansion,
                           const Cone& contraction, int escape_cap) {
    ConeAnalysis a;
    a.check = verify_cone_property(family, expansion, contraction);
    if (a.check.pass) {
        a.escape = escape_data(family, expansion, contraction, a.check.lambda_sq, escape_cap);
        a.transversality = transversality_constant(expansion, contraction);
    }
    return a;
}

}  // namespace rantor
