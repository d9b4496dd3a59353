#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rantor/lattice.hpp"

namespace rantor {

/// Closed symmetric planar sector {±(a*u1 + b*u2) : a, b >= 0} with
/// independent integer boundary rays; sector angle < pi.
class Cone {
  public:
    Cone(IntVec2 u1, IntVec2 u2);

    const IntVec2& u1() const { return u1_; }
    const IntVec2& u2() const { return u2_; }

    bool operator==(const Cone& o) const;

  private:
    IntVec2 u1_;
    IntVec2 u2_;
};

/// Closed membership; the zero vector counts as inside.
bool contains(const Cone& cone, const IntVec2& v);
/// Strict interior membership (zero vector excluded).
bool contains_interior(const Cone& cone, const IntVec2& v);
/// Every direction of `inner` lies in `outer` (closed sectors).
bool cone_subset(const Cone& inner, const Cone& outer);
/// Image cone with boundary rays m*u1, m*u2.
Cone map_cone(const IntMatrix& m, const Cone& cone);
/// Closures share a boundary ray.
bool cones_share_ray(const Cone& a, const Cone& b);

/// Float membership of an arbitrary direction with a sine-of-angle margin.
/// Returns true when the direction is inside or within `margin` of the
/// closed sector.
bool contains_with_margin(const Cone& cone, long double vx, long double vy, long double margin);
/// True when the direction is inside and at least `margin` away from both
/// boundary rays (sine-of-angle units).
bool strictly_interior_with_margin(const Cone& cone, long double vx, long double vy,
                                   long double margin);

struct ConeClause {
    std::string name;
    bool pass = false;
    std::string witness;  // empty when the clause holds
};

/// Outcome of verify_cone_property. Rates are meaningful only when pass.
struct ConeCheckReport {
    bool pass = false;
    std::optional<Errc> failure;
    std::vector<ConeClause> clauses;

    BigRat lambda_e_sq;      // exact; min boundary-ray Rayleigh quotient
    BigRat lambda_c_inv_sq;  // exact
    BigRat lambda_sq;        // max(lambda_C^2, lambda_E^-2), exact
    double lambda_e = 0;     // > 1
    double lambda_c = 0;     // in (0,1)
    double lambda = 0;       // max(lambda_C, 1/lambda_E) < 1
    bool shared_boundary = false;
};

/// Checks the invariance, expansion/contraction and eigendirection clauses
/// for the pair (E, C) over every family member. Exact ray computations;
/// singular directions are tested for sector membership with a 1e-12 margin,
/// erring toward failure.
ConeCheckReport verify_cone_property(const MatrixFamily& family, const Cone& expansion,
                                     const Cone& contraction);

/// (E, C) = (quadrants I+III, closed complement II+IV), valid for families
/// that are entrywise positive or entrywise negative per member.
std::pair<Cone, Cone> default_quadrant_cones(const MatrixFamily& family);

/// Cones for the tilde family: (J*E, J*C); rates carry over unchanged.
std::pair<Cone, Cone> tilde_cones(const Cone& expansion, const Cone& contraction);

struct EscapeData {
    int escape_steps = 0;      // M
    double c_const = 1.0;      // min over length-M words of lambda^M * prod mu
    BigRat c_const_sq_lo;      // outward-rounded rational bounds on C^2
    BigRat c_const_sq_hi;
    /// A-priori per-step factor |A_i q| >= mu_i |q|: the smallest singular
    /// value of the member (equal to |lambda_s| for symmetric members).
    std::vector<double> mu;
};

/// Certified escape time: propagates the closures of the components of
/// (C u E)^c through every word until each branch sector lands inside E.
/// Throws cap_exceeded when some branch survives `cap` steps.
EscapeData escape_data(const MatrixFamily& family, const Cone& expansion, const Cone& contraction,
                       const BigRat& lambda_sq, int cap);

struct Transversality {
    bool unbounded = false;
    double k = 1.0;   // max(|y|/|x|, |x|/|x+y|) over boundary configurations
    BigRat k_sq;      // exact rational K^2 when bounded
};

/// K such that x in C, y in E, x+y in C imply |y| <= K|x| and |x| <= K|x+y|;
/// unbounded exactly when the closures share a ray.
Transversality transversality_constant(const Cone& expansion, const Cone& contraction);

/// Full per-pair analysis bundle used by the runner and the sweeps.
struct ConeAnalysis {
    ConeCheckReport check;
    EscapeData escape;
    Transversality transversality;
};

ConeAnalysis analyze_cones(const MatrixFamily& family, const Cone& expansion,
                           const Cone& contraction, int escape_cap = 64);

/// Component sectors of the complement of E u C (closures of the open gaps).
std::vector<Cone> gap_sectors(const Cone& expansion, const Cone& contraction);

}  // namespace rantor
