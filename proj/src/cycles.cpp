#include "orbitforge/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>
#include <sstream>

#include "orbitforge/quadrature.hpp"

namespace orbitforge {

static const Prec RP = ComplexBox::kRadPrec;

bool CycleRecord::inside(const Disk& d, Prec p) const {
    ComplexBox db(BigComplex::from_gaussian(d.center, p),
                  BigFloat::from_rational(d.radius, RP, MPFR_RNDD));
    for (const auto& pt : points)
        if (!pt.inside_interior_of(db)) return false;
    return true;
}

// --- Krawczyk ---------------------------------------------------------------

std::optional<ComplexBox> krawczyk_zero(const Evaluable& F, const Evaluable& Fp, BigComplex guess,
                                        Prec p, int attempts) {
    BigComplex z = guess;
    bool polished = false;
    for (int it = 0; it < 80; ++it) {
        ComplexBox Fz = F.eval(ComplexBox::point(z), p);
        ComplexBox dz = Fp.eval(ComplexBox::point(z), p);
        if (!Fz.is_bounded() || !dz.is_bounded() || !dz.surely_excludes_zero()) return std::nullopt;
        BigComplex step = cdiv(Fz.center(), dz.center(), p);
        z = csub(z, step, p);
        if (!z.is_finite()) return std::nullopt;
        if (cabs_up(z, RP).cmp_d(1e30) > 0) return std::nullopt; // diverged
        BigFloat sz = cabs_up(step, RP);
        BigFloat scale = fmax(cabs_up(z, RP), BigFloat(1, RP));
        if (it > 3 && sz <= mul_up(scale, BigFloat::pow2(-(long)(3 * p / 4)), RP)) {
            polished = true;
            break;
        }
    }
    if (!polished) return std::nullopt;
    // try boxes of growing radius around the polished point
    for (int j = 0; j < attempts; ++j) {
        BigFloat r = BigFloat::pow2(-(long)(2 * p / 3) + 4 * j);
        ComplexBox X(z, r);
        ComplexBox lam = Fp.eval(ComplexBox::point(z), p);
        if (!lam.surely_excludes_zero()) return std::nullopt;
        ComplexBox Fz = F.eval(ComplexBox::point(z), p);
        ComplexBox corr;
        ComplexBox q;
        try {
            corr = bdiv(Fz, lam, p);
            q = bsub(ComplexBox::exact(GaussianRational(1), p), bdiv(Fp.eval(X, p), lam, p), p);
        } catch (const DivisionByEnclosedZero&) {
            continue;
        }
        if (!corr.is_bounded() || !q.is_bounded()) continue;
        BigComplex kc = csub(z, corr.center(), p);
        BigFloat krad = add_up(mul_up(q.abs_upper(), r, RP), corr.radius(), RP);
        krad = add_up(krad, add_up(kc.re.ulp(), kc.im.ulp(), RP), RP);
        ComplexBox K(kc, krad);
        if (K.inside_interior_of(X)) return K;
    }
    return std::nullopt;
}

ComplexBox refine_zero(const Evaluable& F, const Evaluable& Fp, const ComplexBox& certified,
                       const BigFloat& target, const PrecPolicy& prec) {
    ComplexBox best = certified;
    for (Prec p = prec.start; p <= prec.max; p *= 2) {
        for (int round = 0; round < 64 && best.radius() > target; ++round) {
            BigComplex z = best.center();
            ComplexBox lam = Fp.eval(ComplexBox::point(z), p);
            if (!lam.surely_excludes_zero()) break;
            ComplexBox Fz = F.eval(ComplexBox::point(z), p);
            ComplexBox corr, q;
            try {
                corr = bdiv(Fz, lam, p);
                q = bsub(ComplexBox::exact(GaussianRational(1), p), bdiv(Fp.eval(best, p), lam, p), p);
            } catch (const DivisionByEnclosedZero&) {
                break;
            }
            BigComplex kc = csub(z, corr.center(), p);
            BigFloat krad = add_up(mul_up(q.abs_upper(), best.radius(), RP), corr.radius(), RP);
            krad = add_up(krad, add_up(kc.re.ulp(), kc.im.ulp(), RP), RP);
            ComplexBox K(kc, krad);
            // K also contains the zero; keep the tighter of K and best
            if (K.radius() < best.radius())
                best = K;
            else
                break;
        }
        if (best.radius() <= target) return best;
    }
    return best;
}

// --- cycles -------------------------------------------------------------------

namespace {

Evaluable iterate_minus_id(const Evaluable& f, int k) {
    auto fe = f.eval;
    return Evaluable{
        [fe, k](const ComplexBox& z, Prec p) {
            ComplexBox w = z;
            for (int i = 0; i < k; ++i) {
                w = fe(w, p);
                if (!w.is_bounded()) return ComplexBox::whole_plane();
            }
            return bsub(w, z, p);
        },
        nullptr,
        f.id + "^" + std::to_string(k) + "-z",
    };
}

Evaluable iterate_deriv_minus_one(const Evaluable& f, int k) {
    auto fe = f.eval;
    auto fd = f.deriv;
    return Evaluable{
        [fe, fd, k](const ComplexBox& z, Prec p) {
            ComplexBox w = z;
            ComplexBox prod = ComplexBox::exact(GaussianRational(1), p);
            for (int i = 0; i < k; ++i) {
                prod = bmul(prod, fd(w, p), p);
                w = fe(w, p);
                if (!w.is_bounded() || !prod.is_bounded()) return ComplexBox::whole_plane();
            }
            return bsub(prod, ComplexBox::exact(GaussianRational(1), p), p);
        },
        nullptr,
        f.id + "-chain",
    };
}

std::vector<long> proper_divisors(int k) {
    std::vector<long> out;
    for (int d = 1; d < k; ++d)
        if (k % d == 0) out.push_back(d);
    return out;
}

} // namespace

std::optional<CycleRecord> certify_cycle(const Evaluable& f, int k, BigComplex guess, Prec p,
                                         const BigFloat& target_radius) {
    Evaluable F = iterate_minus_id(f, k);
    Evaluable Fp = iterate_deriv_minus_one(f, k);
    auto cert = krawczyk_zero(F, Fp, guess, p);
    if (!cert) return std::nullopt;
    ComplexBox box = refine_zero(F, Fp, *cert, target_radius, PrecPolicy{p, p * 4});
    CycleRecord rec;
    rec.period = k;
    rec.points.push_back(box);
    ComplexBox w = box;
    for (int i = 1; i < k; ++i) {
        w = f.eval(w, p);
        if (!w.is_bounded()) return std::nullopt;
        rec.points.push_back(w);
    }
    // pairwise distinct points certify exact period
    for (size_t i = 0; i < rec.points.size(); ++i)
        for (size_t j = i + 1; j < rec.points.size(); ++j)
            if (!rec.points[i].disjoint_from(rec.points[j])) return std::nullopt;
    // divisor exclusion on the certified box
    for (long d : proper_divisors(k))
        if (!rec.points[(size_t)d].disjoint_from(rec.points[0])) return std::nullopt;
    rec.exact_points.assign((size_t)k, std::nullopt);
    rec.multiplier = multiplier(f, rec, p);
    rec.repelling = rec.multiplier.is_bounded() && rec.multiplier.abs_lower().cmp_d(1.0) > 0;
    return rec;
}

ComplexBox multiplier(const Evaluable& f, const CycleRecord& cycle, Prec p) {
    ComplexBox prod = ComplexBox::exact(GaussianRational(1), p);
    for (const auto& pt : cycle.points) prod = bmul(prod, f.deriv(pt, p), p);
    return prod;
}

// deterministic seed generation ------------------------------------------------

namespace {

using cplx = std::complex<double>;

// inverse-branch itinerary seeds for exp-like maps: fixed points of
// L_{a_0} o ... o L_{a_{k-1}} with L_a(u) = log(u - c0) + 2 pi i a
std::vector<BigComplex> itinerary_seeds(int k, double R, cplx c0, Prec p) {
    int A = (int)std::ceil(R / (2 * M_PI)) + 1;
    std::vector<BigComplex> seeds;
    std::vector<int> tuple((size_t)k, -A);
    auto canonical_rotation = [&](const std::vector<int>& t) {
        for (size_t s = 1; s < t.size(); ++s) {
            std::vector<int> rot(t.begin() + (long)s, t.end());
            rot.insert(rot.end(), t.begin(), t.begin() + (long)s);
            if (std::lexicographical_compare(rot.begin(), rot.end(), t.begin(), t.end()))
                return false;
        }
        return true;
    };
    while (true) {
        if (canonical_rotation(tuple)) {
            cplx w(1.0, 1.0);
            bool okcv = true;
            for (int it = 0; it < 120; ++it) {
                cplx prev = w;
                for (int j = 0; j < k; ++j) {
                    cplx u = w - c0;
                    if (std::abs(u) < 1e-12) { okcv = false; break; }
                    w = std::log(u) + cplx(0, 2 * M_PI * tuple[(size_t)j]);
                }
                if (!okcv || !std::isfinite(w.real()) || !std::isfinite(w.imag())) {
                    okcv = false;
                    break;
                }
                if (std::abs(w - prev) < 1e-12 && it > 2) break;
            }
            if (okcv && std::abs(w) <= R * 1.5)
                seeds.push_back(BigComplex::from_doubles(w.real(), w.imag(), p));
        }
        // next tuple
        int i = k - 1;
        while (i >= 0 && tuple[(size_t)i] == A) tuple[(size_t)i--] = -A;
        if (i < 0) break;
        ++tuple[(size_t)i];
    }
    return seeds;
}

std::vector<BigComplex> grid_seeds(const Disk& d, int n, Prec p) {
    std::vector<BigComplex> seeds;
    double cx = d.center.re.get_d();
    double cy = d.center.im.get_d();
    double R = Rational(d.radius).get_d();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double x = cx + R * (2.0 * (i + 0.5) / n - 1.0);
            double y = cy + R * (2.0 * (j + 0.5) / n - 1.0);
            if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= R * R)
                seeds.push_back(BigComplex::from_doubles(x, y, p));
        }
    return seeds;
}

bool same_orbit(const CycleRecord& a, const CycleRecord& b) {
    for (const auto& pa : a.points)
        for (const auto& pb : b.points)
            if (!pa.disjoint_from(pb)) return true;
    return false;
}

} // namespace

std::vector<CycleRecord> find_cycles(const Evaluable& f, int k, const Disk& disk,
                                     const FindCyclesOptions& opt) {
    if (k < 1) throw Error("find_cycles: k must be >= 1");
    if (k == 1) {
        // verify the boundary precondition for first-order equations
        Evaluable F = iterate_minus_id(f, 1);
        ClearanceResult cl = boundary_clear(F, {GaussianRational(0L)}, disk, opt.prec);
        if (!cl.clear)
            throw BoundaryZero("find_cycles: solutions of f(z)=z meet the boundary of " +
                               disk.str());
    }
    Prec p = opt.prec.start;
    double R = Rational(disk.radius).get_d() + std::hypot(disk.center.re.get_d(),
                                                          disk.center.im.get_d());
    std::vector<BigComplex> seeds = itinerary_seeds(k, R, cplx(0, 0), p);
    for (auto& s : grid_seeds(disk, opt.seed_grid, p)) seeds.push_back(s);

    std::vector<CycleRecord> found;
    for (const auto& seed : seeds) {
        if ((int)found.size() >= opt.want) break;
        std::optional<CycleRecord> rec;
        for (Prec pp = opt.prec.start; pp <= opt.prec.max && !rec; pp *= 2)
            rec = certify_cycle(f, k, seed, pp, opt.target_radius);
        if (!rec) continue;
        if (!rec->inside(disk, p)) continue;
        if (opt.require_repelling && !rec->repelling) continue;
        bool dup = false;
        for (const auto& prev : found)
            if (same_orbit(prev, *rec)) { dup = true; break; }
        if (dup) continue;
        found.push_back(std::move(*rec));
    }
    if ((int)found.size() < opt.want) {
        std::ostringstream os;
        os << "find_cycles: wanted " << opt.want << " period-" << k << " cycles in " << disk.str()
           << ", certified " << found.size()
           << " (densify seeds, enlarge the disk, or raise precision)";
        throw SearchExhausted(os.str());
    }
    return found;
}

std::vector<ComplexBox> find_zeros(const Evaluable& F, const Evaluable& Fp, const Disk& disk,
                                   long expected, const std::vector<BigComplex>& seeds,
                                   const BigFloat& target_radius, const PrecPolicy& prec) {
    std::vector<ComplexBox> out;
    ComplexBox db(BigComplex::from_gaussian(disk.center, prec.start),
                  BigFloat::from_rational(disk.radius, RP, MPFR_RNDD));
    for (const auto& seed : seeds) {
        if ((long)out.size() >= expected) break;
        std::optional<ComplexBox> cert;
        for (Prec p = prec.start; p <= prec.max && !cert; p *= 2) cert = krawczyk_zero(F, Fp, seed, p);
        if (!cert) continue;
        ComplexBox box = refine_zero(F, Fp, *cert, target_radius, prec);
        if (!box.inside_interior_of(db)) continue;
        bool dup = false;
        for (const auto& prev : out)
            if (!prev.disjoint_from(box)) { dup = true; break; }
        if (!dup) out.push_back(std::move(box));
    }
    if ((long)out.size() != expected) {
        std::ostringstream os;
        os << "find_zeros: expected " << expected << " zeros of " << F.id << " in " << disk.str()
           << ", certified " << out.size();
        throw SearchExhausted(os.str());
    }
    return out;
}

// --- phi recursion check -------------------------------------------------------

PhiCheckResult phi_check(const BaseFunction& g, const GPoly& P, const Rational& eps, int k,
                         const GaussianRational& z, double quad_tol, const PrecPolicy& prec) {
    if (k < 1) throw Error("phi_check: k >= 1 required");
    if (eps == 0) throw Error("phi_check: eps must be nonzero");
    if (k == 1) {
        // phi_1 = P(z): the identity f = g + eps P holds by definition
        PhiCheckResult out;
        out.exact_zero = true;
        out.residual_upper = BigFloat::zero();
        out.phi_exact = P.eval_exact(z);
        out.eps_phi = ComplexBox::exact(GaussianRational(eps) * *out.phi_exact,
                                        std::max<Prec>(prec.start, 128));
        return out;
    }
    BaseFunction gd = g.derivative();
    PhiCheckResult best;
    best.residual_upper = BigFloat::pos_inf();
    for (Prec p = std::max<Prec>(prec.start, 128); p <= prec.max; p *= 2) {
        ComplexBox epsb = ComplexBox::exact_rational(eps, p);
        ComplexBox zb = ComplexBox::exact(z, p);
        ComplexBox phi = P.eval_box(zb, p);
        ComplexBox y = zb; // g^i(z)
        bool ok = true;
        for (int i = 1; i < k && ok; ++i) {
            y = g.eval_enclosure(y, p);
            ComplexBox h = bmul(epsb, phi, p); // eps * phi_i
            // integral of g'(y + t h) over t in [0,1]
            ComplexBox integral;
            bool done = false;
            for (int segs = 1; segs <= 64 && !done; segs *= 2) {
                ComplexBox yc = y;
                ComplexBox hc = h;
                BaseFunction gdc = gd;
                auto integrand = [yc, hc, gdc](const ComplexBox& t, Prec pp) {
                    return gdc.eval_enclosure(badd(yc, bmul(t, hc, pp), pp), pp);
                };
                // Cauchy: |d^m/dt^m g'(y+th)| <= |h|^m m! sup|g'| on a disk of
                // radius |h| + 1 around y, divided by 1^m
                BigFloat habs = h.abs_upper();
                ComplexBox wide = y.widened(add_up(habs, BigFloat(1, RP), RP));
                BaseFunction gdcopy = gd;
                auto dbound = [habs, wide, gdcopy](int m) {
                    BigFloat hm = fpow_ui(habs, (unsigned long)m, RP, MPFR_RNDU);
                    BigFloat mf = BigFloat::from_integer(kernel::factorial(m), RP, MPFR_RNDU);
                    return mul_up(mul_up(hm, mf, RP), gdcopy.sup_bound(wide), RP);
                };
                integral = integrate_01(integrand, 8, segs, p, dbound);
                done = integral.is_bounded() && integral.radius().cmp_d(quad_tol) <= 0;
            }
            if (!done) {
                ok = false;
                break;
            }
            // phi_{i+1} = phi_i * integral + P(y + eps phi_i)
            phi = badd(bmul(phi, integral, p), P.eval_box(badd(y, h, p), p), p);
        }
        if (!ok) continue;
        // residual |f^k(z) - g^k(z) - eps phi_k|
        ComplexBox fz = zb;
        for (int i = 0; i < k; ++i)
            fz = badd(g.eval_enclosure(fz, p), bmul(epsb, P.eval_box(fz, p), p), p);
        ComplexBox gk = zb;
        for (int i = 0; i < k; ++i) gk = g.eval_enclosure(gk, p);
        ComplexBox eps_phi = bmul(epsb, phi, p);
        ComplexBox resid = bsub(bsub(fz, gk, p), eps_phi, p);
        BigFloat bound = resid.abs_upper();
        if (bound < best.residual_upper) {
            best.residual_upper = bound;
            best.eps_phi = eps_phi;
        }
        if (best.residual_upper.is_finite() && best.residual_upper.cmp_d(quad_tol * 8) <= 0) break;
    }
    if (!best.residual_upper.is_finite())
        throw QuadratureFailure("phi_check: integrand enclosure never met tolerance");
    return best;
}

PhiCheckResult phi_check_poly(const GPoly& g, const GPoly& P, const GaussianRational& eps, int k,
                              const GaussianRational& z) {
    if (eps.is_zero()) throw Error("phi_check_poly: eps must be nonzero");
    // exact arithmetic throughout; the mean-value integral of a polynomial is
    // (g(y+h) - g(y))/h
    GaussianRational phi = P.eval_exact(z);
    GaussianRational y = z;
    GPoly gd = g.derivative();
    for (int i = 1; i < k; ++i) {
        y = g.eval_exact(y);
        GaussianRational h = eps * phi;
        GaussianRational integral =
            h.is_zero() ? gd.eval_exact(y) : (g.eval_exact(y + h) - g.eval_exact(y)) / h;
        phi = phi * integral + P.eval_exact(y + h);
    }
    GaussianRational fz = z;
    for (int i = 0; i < k; ++i) fz = g.eval_exact(fz) + eps * P.eval_exact(fz);
    GaussianRational gk = z;
    for (int i = 0; i < k; ++i) gk = g.eval_exact(gk);
    GaussianRational resid = fz - gk - eps * phi;
    PhiCheckResult out;
    out.exact_zero = resid.is_zero();
    out.residual_upper = BigFloat::zero();
    if (!out.exact_zero) {
        Rational n2 = resid.norm2();
        out.residual_upper = fsqrt(BigFloat::from_rational(n2, 128, MPFR_RNDU), 64, MPFR_RNDU);
    }
    out.eps_phi = ComplexBox::exact(eps * phi, 128);
    out.phi_exact = phi;
    return out;
}

// --- fixed point regime ----------------------------------------------------------

namespace {

Evaluable perturbed(const BaseFunction& g, const GPoly& P, const ComplexBox& eps) {
    BaseFunction gd = g.derivative();
    GPoly Pd = P.derivative();
    return Evaluable{
        [g, P, eps](const ComplexBox& z, Prec p) {
            return badd(g.eval_enclosure(z, p), bmul(eps, P.eval_box(z, p), p), p);
        },
        [gd, Pd, eps](const ComplexBox& z, Prec p) {
            ComplexBox d = gd.eval_enclosure(z, p);
            if (!Pd.is_zero()) d = badd(d, bmul(eps, Pd.eval_box(z, p), p), p);
            return d;
        },
        "g+eps*P",
    };
}

// structured fixed point seeds for exp-kernel bases: iterate
// z <- Log(z - addend(z) - eps P(z)) + 2 pi i m
std::vector<BigComplex> fixed_point_seeds(const BaseFunction& g, const GPoly& P, double eps,
                                          double R, Prec prec) {
    std::vector<BigComplex> seeds;
    if (g.kern() != kernel::EXP) return seeds;
    int M = (int)std::ceil(R / (2 * M_PI)) + 1;
    auto addend_eval = [&](cplx z) {
        cplx acc = 0;
        for (long i = g.addend().degree(); i >= 0; --i)
            acc = acc * z + cplx(g.addend().coeff((size_t)i).re.get_d(),
                                 g.addend().coeff((size_t)i).im.get_d());
        return acc;
    };
    auto poly_eval = [&](cplx z) {
        cplx acc = 0;
        for (long i = P.degree(); i >= 0; --i)
            acc = acc * z + cplx(P.coeff((size_t)i).re.get_d(), P.coeff((size_t)i).im.get_d());
        return acc;
    };
    for (int m = -M; m <= M; ++m) {
        cplx z(1.0, 0.5);
        bool ok = true;
        for (int it = 0; it < 80; ++it) {
            cplx u = z - addend_eval(z) - eps * poly_eval(z);
            if (std::abs(u) < 1e-14) { ok = false; break; }
            cplx nz = std::log(u) + cplx(0, 2 * M_PI * m);
            if (!std::isfinite(nz.real()) || !std::isfinite(nz.imag())) { ok = false; break; }
            if (std::abs(nz - z) < 1e-13 && it > 2) { z = nz; break; }
            z = nz;
        }
        if (ok && std::abs(z) <= 1.5 * R + 5)
            seeds.push_back(BigComplex::from_doubles(z.real(), z.imag(), prec));
    }
    return seeds;
}

} // namespace

std::vector<FixedPointWitness> certify_fixed_points_at(const BaseFunction& g, const GPoly& P,
                                                       const ComplexBox& eps, const Rational& R,
                                                       int want, const BigFloat& target_radius,
                                                       const PrecPolicy& prec) {
    Evaluable f = perturbed(g, P, eps);
    // F(z) = f(z) - z with the polynomial part cancelled exactly, so no
    // interval dependency between the kernel and the subtracted identity
    GPoly poly_part = g.addend() - GPoly::monomial(1, GaussianRational(1));
    GPoly poly_deriv = poly_part.derivative();
    int kern = g.kern();
    int kern_d = kernel::derivative(kern);
    GPoly Pd = P.derivative();
    Evaluable F = {
        [kern, poly_part, P, eps](const ComplexBox& z, Prec p) {
            ComplexBox out = kernel::eval(kern, z, p);
            if (!poly_part.is_zero()) out = badd(out, poly_part.eval_box(z, p), p);
            out = badd(out, bmul(eps, P.eval_box(z, p), p), p);
            return out;
        },
        nullptr,
        "f-z",
    };
    Evaluable Fp = {
        [kern_d, poly_deriv, Pd, eps](const ComplexBox& z, Prec p) {
            ComplexBox out = kernel::eval(kern_d, z, p);
            if (!poly_deriv.is_zero()) out = badd(out, poly_deriv.eval_box(z, p), p);
            if (!Pd.is_zero()) out = badd(out, bmul(eps, Pd.eval_box(z, p), p), p);
            return out;
        },
        nullptr,
        "f'-1",
    };
    Disk disk(GaussianRational(0L), R);
    double epsd = eps.center().re.to_double();
    std::vector<BigComplex> seeds =
        fixed_point_seeds(g, P, epsd, Rational(R).get_d(), prec.start);
    for (auto& s : grid_seeds(disk, 10, prec.start)) seeds.push_back(s);

    std::vector<FixedPointWitness> found;
    std::vector<std::string> rejections;
    for (const auto& seed : seeds) {
        if ((int)found.size() >= want) break;
        std::optional<ComplexBox> cert;
        for (Prec p = prec.start; p <= prec.max && !cert; p *= 2) cert = krawczyk_zero(F, Fp, seed, p);
        if (!cert) continue;
        ComplexBox box = refine_zero(F, Fp, *cert, target_radius, prec);
        ComplexBox db(BigComplex::from_gaussian(disk.center, prec.start),
                      BigFloat::from_rational(disk.radius, RP, MPFR_RNDD));
        if (!box.inside_interior_of(db)) continue;
        bool dup = false;
        for (const auto& prev : found)
            if (!prev.point.disjoint_from(box)) { dup = true; break; }
        if (dup) continue;
        ComplexBox mult = f.deriv(box, prec.start);
        for (Prec p = prec.start;
             p <= prec.max && !(mult.surely_excludes(GaussianRational(0L)) &&
                                mult.surely_excludes(GaussianRational(1L)));
             p *= 2) {
            ComplexBox tight = refine_zero(F, Fp, box, BigFloat::pow2(-(long)p / 2), PrecPolicy{p, p});
            mult = f.deriv(tight, p);
        }
        if (!(mult.surely_excludes(GaussianRational(0L)) &&
              mult.surely_excludes(GaussianRational(1L)))) {
            rejections.push_back("multiplier enclosure at fixed point near " + box.str() +
                                 " does not exclude {0,1}");
            continue;
        }
        found.push_back({box, mult});
    }
    if ((int)found.size() < want) {
        std::ostringstream os;
        os << "fixed points: wanted " << want << " in " << disk.str() << ", certified "
           << found.size();
        for (const auto& r : rejections) os << "; rejected: " << r;
        throw SearchExhausted(os.str());
    }
    return found;
}

RegimeResult fixed_point_regime(const BaseFunction& g, const GPoly& P, int k, int M,
                                const Rational& delta, const PrecPolicy& prec) {
    if (P.is_zero()) throw Error("fixed_point_regime: P must be nonzero");
    std::vector<Rational> ladder;
    for (int j = 1; j <= 6; ++j) ladder.push_back(delta / Rational(1L << j));
    std::string last_err = "no candidate tried";
    for (const Rational& eps_c : ladder) {
        try {
            // find with exact eps first
            Prec p0 = prec.start;
            ComplexBox epsb = ComplexBox::exact_rational(eps_c, p0);
            Rational R(4);
            std::vector<FixedPointWitness> fps;
            for (int grow = 0; grow < 8; ++grow) {
                try {
                    fps = certify_fixed_points_at(g, P, epsb, R, M, BigFloat(1e-12, 64), prec);
                    break;
                } catch (const SearchExhausted&) {
                    if (grow == 7) throw;
                    R *= 2;
                }
            }
            Evaluable f = perturbed(g, P, epsb);
            std::map<int, std::vector<CycleRecord>> cyc;
            for (int t = 2; t <= k; ++t) {
                FindCyclesOptions opt;
                opt.want = M;
                opt.require_repelling = true;
                opt.prec = prec;
                for (int grow = 0; grow < 6; ++grow) {
                    try {
                        cyc[t] = find_cycles(f, t, Disk(GaussianRational(0L), R), opt);
                        break;
                    } catch (const SearchExhausted&) {
                        if (grow == 5) throw SearchExhausted("regime: period " + std::to_string(t) +
                                                             " cycles not found in B(0," +
                                                             R.get_str() + ")");
                        R *= 2;
                    }
                }
            }
            // widen eps to an interval and re-certify everything
            for (int s = 10;; s += 6) {
                if (s > 60) throw SearchExhausted("regime: could not widen eps interval");
                Rational w = eps_c / Rational(Integer(1) << s);
                ComplexBox eps_iv(BigComplex::from_gaussian(GaussianRational(eps_c), prec.start),
                                  BigFloat::from_rational(w, RP, MPFR_RNDU));
                try {
                    std::vector<FixedPointWitness> fps2 =
                        certify_fixed_points_at(g, P, eps_iv, R, M, BigFloat(1e-10, 64), prec);
                    Evaluable fiv = perturbed(g, P, eps_iv);
                    std::map<int, std::vector<CycleRecord>> cyc2;
                    bool allcyc = true;
                    for (int t = 2; t <= k; ++t) {
                        FindCyclesOptions opt;
                        opt.want = M;
                        opt.require_repelling = true;
                        opt.prec = prec;
                        try {
                            cyc2[t] = find_cycles(fiv, t, Disk(GaussianRational(0L), R), opt);
                        } catch (const SearchExhausted&) {
                            allcyc = false;
                            break;
                        }
                    }
                    if (!allcyc) continue;
                    RegimeResult out;
                    out.delta1 = eps_c - w;
                    out.delta2 = eps_c + w;
                    out.eps_used = eps_c;
                    out.R = R;
                    out.fixed_points = std::move(fps2);
                    out.cycles = std::move(cyc2);
                    return out;
                } catch (const SearchExhausted&) {
                    continue;
                }
            }
        } catch (const SearchExhausted& e) {
            last_err = e.what();
            continue;
        }
    }
    throw SearchExhausted("fixed_point_regime: every candidate failed; last: " + last_err);
}

} // namespace orbitforge
