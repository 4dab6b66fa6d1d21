#pragma once

#include <optional>
#include <vector>

#include "orbitforge/entire.hpp"

namespace orbitforge {

// Exact disk: rational center in K, positive rational radius.
struct Disk {
    GaussianRational center;
    Rational radius;

    Disk() : radius(1) {}
    Disk(GaussianRational c, Rational r) : center(std::move(c)), radius(std::move(r)) {
        if (!(radius > 0)) throw Error("disk radius must be positive");
    }
    std::string str() const { return "B(" + center.str() + "; " + radius.get_str() + ")"; }
};

// Point on the boundary circle at parameter t in [0,1], as a containing box.
ComplexBox circle_point(const Disk& d, const Rational& t, Prec p);
// Box containing the whole boundary arc t in [t0, t1].
ComplexBox circle_arc(const Disk& d, const Rational& t0, const Rational& t1, Prec p);

struct ArcCert {
    Rational t0, t1;
    ComplexBox image; // f over the whole arc; excludes 0 when certified
};

// Boundary enclosure: adaptive partition of the circle with per-arc image
// boxes, all excluding 0.
struct BoundaryEnclosure {
    Disk disk;
    std::vector<ArcCert> arcs;
    BigFloat min_margin_lower; // certified lower bound of min |f| on boundary
};

struct ZeroCount {
    long count = 0;
    Disk disk;
    std::string function_id;
    bool certified = false;
    BigFloat boundary_margin; // lower bound of |f| on the boundary
    size_t arcs = 0;
};

struct WindingOptions {
    int initial_arcs = 16;
    int max_depth = 24;
    PrecPolicy prec;
};

// Exact number of zeros (with multiplicity) of f in the open disk, certified
// by the winding number of f over the boundary. Throws BoundaryZero if some
// arc cannot be separated from 0 at max refinement.
ZeroCount count_zeros(const Evaluable& f, const Disk& d, const WindingOptions& opt = {});

// Certified range of min |f| (or max |f| with maximize=true) over the
// boundary circle; returns {lo, hi} with lo <= true extremum <= hi.
std::pair<BigFloat, BigFloat> boundary_extremum(const Evaluable& f, const Disk& d, bool maximize,
                                                double rel_tol, const PrecPolicy& prec);

// Rouche admissibility radius: delta = min|g - alpha| / max|P| on the
// boundary. Certified two-sided enclosure; counts of (g - alpha + eps P) in
// the disk equal counts of (g - alpha) for all 0 < |eps| < delta_lo.
struct DeltaEnclosure {
    BigFloat lo, hi;
    BigFloat min_lo, min_hi; // boundary min of |g - alpha|
    BigFloat max_lo, max_hi; // boundary max of |P|
};
DeltaEnclosure rouche_delta(const Evaluable& g, const GPoly& P, const GaussianRational& alpha,
                            const Rational& R, const PrecPolicy& prec, double rel_tol = 1e-6);

// Per-target certified positive lower bounds of |f - alpha| on the boundary;
// clear=false when some target cannot be separated at max refinement. A
// positive margin_goal asks for extra refinement until the certified margin
// reaches it (best effort; the returned margins are certified regardless).
struct ClearanceResult {
    bool clear = true;
    std::vector<BigFloat> margins; // parallel to targets
};
ClearanceResult boundary_clear(const Evaluable& f, const std::vector<GaussianRational>& targets,
                               const Disk& d, const PrecPolicy& prec,
                               const BigFloat& margin_goal = BigFloat::zero());

} // namespace orbitforge
