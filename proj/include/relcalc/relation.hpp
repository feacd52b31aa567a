#pragma once

#include <cstdlib>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "relcalc/cell.hpp"
#include "relcalc/decomp.hpp"
#include "relcalc/errors.hpp"
#include "relcalc/fset.hpp"
#include "relcalc/rational.hpp"
#include "relcalc/space.hpp"

namespace relcalc {

/// Cap on the number of cells a relation may hold, to bound growth under
/// iteration. Overridable through RELCALC_MAX_CELLS.
inline std::size_t max_cells() {
    static const std::size_t cap = [] {
        if (const char* env = std::getenv("RELCALC_MAX_CELLS")) {
            long v = std::atol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        }
        return static_cast<std::size_t>(100000);
    }();
    return cap;
}

/// A closed piecewise-linear relation between two spaces: a finite union of
/// rational convex cells inside src x dst. Construction canonicalizes the
/// cell list through the vertical decomposition, so relations describing the
/// same point set compare equal member-wise.
class Rel {
  public:
    Rel(Space src, Space dst, std::vector<Cell> cells)
        : src_(std::move(src)), dst_(std::move(dst)) {
        if (cells.size() > max_cells())
            throw Error(Err::CellLimit, "cell count " + std::to_string(cells.size()) +
                                            " exceeds cap " + std::to_string(max_cells()));
        for (const Cell& c : cells) validate_cell(c);
        decomp_ = std::make_shared<Decomp>(build_decomp(cells));
        cells_ = emit_cells(*decomp_);
        if (cells_.size() > max_cells())
            throw Error(Err::CellLimit, "canonical cell count exceeds cap");
    }

    static Rel empty(const Space& src, const Space& dst) { return Rel(src, dst, {}); }

    /// The identity relation 1_X.
    static Rel identity(const Space& s) {
        std::vector<Cell> cs;
        for (const SpaceComponent& c : s.components()) {
            if (c.is_point())
                cs.push_back(Cell::point(c.lo, c.lo));
            else
                cs.push_back(Cell::segment({c.lo, c.lo}, {c.hi, c.hi}));
        }
        return Rel(s, s, std::move(cs));
    }

    /// The closed band {(x,y) : |x-y| <= eps} on X x X.
    static Rel v_band(const Space& s, const Rat& eps) {
        if (eps < 0) throw Error(Err::NegativeEpsilon, "band requires eps >= 0");
        std::vector<Cell> cs;
        for (const SpaceComponent& a : s.components())
            for (const SpaceComponent& b : s.components()) {
                Cell box = a.is_point() && b.is_point() ? Cell::point(a.lo, b.lo)
                           : a.is_point() ? Cell::segment({a.lo, b.lo}, {a.lo, b.hi})
                           : b.is_point() ? Cell::segment({a.lo, b.lo}, {a.hi, b.lo})
                                          : Cell::from_points({{a.lo, b.lo},
                                                               {a.hi, b.lo},
                                                               {a.hi, b.hi},
                                                               {a.lo, b.hi}});
                auto c = box.clip_halfplane(-1, 1, eps);   // y - x <= eps
                if (c) c = c->clip_halfplane(1, -1, eps);  // x - y <= eps
                if (c) cs.push_back(*c);
            }
        return Rel(s, s, std::move(cs));
    }

    const Space& src() const { return src_; }
    const Space& dst() const { return dst_; }
    const std::vector<Cell>& cells() const { return cells_; }
    const Decomp& decomp() const { return *decomp_; }
    bool is_empty() const { return cells_.empty(); }

    bool operator==(const Rel& o) const {
        return src_ == o.src_ && dst_ == o.dst_ && cells_ == o.cells_;
    }
    bool operator!=(const Rel& o) const { return !(*this == o); }

  private:
    void validate_cell(const Cell& c) const {
        bool ok_x = false, ok_y = false;
        Rat xl = c.x_lo(), xh = c.x_hi(), yl = c.y_lo(), yh = c.y_hi();
        for (const SpaceComponent& sc : src_.components())
            if (sc.lo <= xl && xh <= sc.hi) ok_x = true;
        for (const SpaceComponent& sc : dst_.components())
            if (sc.lo <= yl && yh <= sc.hi) ok_y = true;
        if (!ok_x || !ok_y)
            throw Error(Err::PointOutsideSpace, "cell does not fit inside the space product");
    }

    Space src_, dst_;
    std::vector<Cell> cells_;
    std::shared_ptr<const Decomp> decomp_;
};

/// Semantic equality; the spaces must agree.
inline bool equals(const Rel& a, const Rel& b) {
    if (a.src() != b.src() || a.dst() != b.dst())
        throw Error(Err::SpaceMismatch, "equals requires matching spaces");
    return a == b;
}

inline Rel inverse(const Rel& f) {
    std::vector<Cell> cs;
    cs.reserve(f.cells().size());
    for (const Cell& c : f.cells()) cs.push_back(c.swapped());
    return Rel(f.dst(), f.src(), std::move(cs));
}

namespace detail {

/// pi_13 of the cylinder intersection of one cell pair, emitted slab by slab
/// over the shared middle coordinate.
inline void compose_cell_pair(const Cell& cf, const Cell& cg, std::vector<Cell>& out) {
    Cell cf_by_y = cf.swapped();  // slices of F indexed by the middle coordinate
    Rat y1 = rat_max(cf_by_y.x_lo(), cg.x_lo());
    Rat y2 = rat_min(cf_by_y.x_hi(), cg.x_hi());
    if (y1 > y2) return;
    if (y1 == y2) {
        auto xs = cf_by_y.y_slice(y1);
        auto zs = cg.y_slice(y1);
        out.push_back(Cell::from_points({{xs->first, zs->first},
                                         {xs->first, zs->second},
                                         {xs->second, zs->first},
                                         {xs->second, zs->second}}));
        return;
    }
    std::vector<Rat> ys;
    ys.push_back(y1);
    ys.push_back(y2);
    for (const Rat& k : cf_by_y.knots_x())
        if (k > y1 && k < y2) ys.push_back(k);
    for (const Rat& k : cg.knots_x())
        if (k > y1 && k < y2) ys.push_back(k);
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    for (std::size_t i = 0; i + 1 < ys.size(); ++i) {
        std::vector<Pt> corners;
        for (const Rat& y : {ys[i], ys[i + 1]}) {
            auto xs = cf_by_y.y_slice(y);
            auto zs = cg.y_slice(y);
            corners.push_back({xs->first, zs->first});
            corners.push_back({xs->first, zs->second});
            corners.push_back({xs->second, zs->first});
            corners.push_back({xs->second, zs->second});
        }
        out.push_back(Cell::from_points(std::move(corners)));
    }
}

}  // namespace detail

/// Relation composition g o f, exact on the cell model.
inline Rel compose(const Rel& g, const Rel& f) {
    if (f.dst() != g.src())
        throw Error(Err::SpaceMismatch, "compose requires f.dst == g.src");
    std::vector<Cell> out;
    for (const Cell& cf : f.cells())
        for (const Cell& cg : g.cells()) {
            detail::compose_cell_pair(cf, cg, out);
            if (out.size() > max_cells())
                throw Error(Err::CellLimit, "composition exceeded the cell cap");
        }
    return Rel(f.src(), g.dst(), std::move(out));
}

/// Exact image F(A) of a flagged set.
inline FSet image(const Rel& f, const FSet& a) {
    if (a.space() != f.src()) throw Error(Err::SpaceMismatch, "image set must live in src");
    std::vector<Part> out;
    for (const Cell& c : f.cells()) {
        Rat cx1 = c.x_lo(), cx2 = c.x_hi();
        for (const Part& p : a.parts()) {
            // flagged window = p intersected with the closed x-range of the cell
            Part w;
            if (p.lo > cx1) { w.lo = p.lo; w.lo_closed = p.lo_closed; }
            else { w.lo = cx1; w.lo_closed = p.lo == cx1 ? p.lo_closed : true; }
            if (p.hi < cx2) { w.hi = p.hi; w.hi_closed = p.hi_closed; }
            else { w.hi = cx2; w.hi_closed = p.hi == cx2 ? p.hi_closed : true; }
            if (w.empty()) continue;
            if (w.lo == w.hi) {
                auto s = c.y_slice(w.lo);
                out.push_back({s->first, s->second, true, true});
                continue;
            }
            EnvelopeExtreme mn = envelope_min(c, w.lo, w.hi);
            EnvelopeExtreme mx = envelope_max(c, w.lo, w.hi);
            bool lo_att = mn.arg_lo < mn.arg_hi ||
                          w.contains(mn.arg_lo);  // argmin runs are contiguous
            bool hi_att = mx.arg_lo < mx.arg_hi || w.contains(mx.arg_lo);
            if (mn.value == mx.value) {
                out.push_back({mn.value, mn.value, true, true});
            } else {
                out.push_back({mn.value, mx.value, lo_att, hi_att});
            }
        }
    }
    return FSet(f.dst(), std::move(out));
}

/// F(x) as a closed flagged set.
inline FSet fiber(const Rel& f, const Rat& x) {
    if (!f.src().contains(x)) throw Error(Err::PointOutsideSpace, "fiber point outside src");
    std::vector<Part> out;
    for (const WallIv& iv : slice_union(f.cells(), x)) out.push_back({iv.lo, iv.hi, true, true});
    return FSet(f.dst(), std::move(out));
}

/// F^{-1}(B) = {x : F(x) meets B}.
inline FSet preimage(const Rel& f, const FSet& b) {
    if (b.space() != f.dst()) throw Error(Err::SpaceMismatch, "preimage set must live in dst");
    return image(inverse(f), b);
}

/// F*(B) = {x : F(x) subset of B}, the co-preimage.
inline FSet costar(const Rel& f, const FSet& b) {
    if (b.space() != f.dst()) throw Error(Err::SpaceMismatch, "costar set must live in dst");
    return preimage(f, b.complement()).complement();
}

inline FSet domain(const Rel& f) { return preimage(f, FSet::full(f.dst())); }

/// F intersected with A x B for closed A, B.
inline Rel restrict(const Rel& f, const FSet& a, const FSet& b) {
    if (a.space() != f.src() || b.space() != f.dst())
        throw Error(Err::SpaceMismatch, "restrict sets must live in src/dst");
    if (!a.is_closed() || !b.is_closed())
        throw Error(Err::NonClosedRestriction, "restrict requires closed sets");
    std::vector<Cell> out;
    for (const Cell& c : f.cells())
        for (const Part& pa : a.parts())
            for (const Part& pb : b.parts())
                if (auto clipped = c.clip_box(pa.lo, pa.hi, pb.lo, pb.hi))
                    out.push_back(*clipped);
    return Rel(f.src(), f.dst(), std::move(out));
}

/// F^n; n == 0 gives the identity, negative n uses the inverse.
inline Rel iterate(const Rel& f, long n) {
    if (f.src() != f.dst())
        throw Error(Err::SpaceMismatch, "iterate requires an endorelation");
    if (n == 0) return Rel::identity(f.src());
    Rel base = n < 0 ? inverse(f) : f;
    long steps = n < 0 ? -n : n;
    Rel acc = base;
    for (long i = 1; i < steps; ++i) acc = compose(base, acc);
    return acc;
}

inline bool rel_subset(const Rel& a, const Rel& b) {
    if (a.src() != b.src() || a.dst() != b.dst())
        throw Error(Err::SpaceMismatch, "subset requires matching spaces");
    std::vector<Cell> cs = b.cells();
    cs.insert(cs.end(), a.cells().begin(), a.cells().end());
    return Rel(a.src(), a.dst(), std::move(cs)) == b;
}

inline Rel rel_union(const Rel& a, const Rel& b) {
    if (a.src() != b.src() || a.dst() != b.dst())
        throw Error(Err::SpaceMismatch, "union requires matching spaces");
    std::vector<Cell> cs = a.cells();
    cs.insert(cs.end(), b.cells().begin(), b.cells().end());
    return Rel(a.src(), a.dst(), std::move(cs));
}

/// A verified delta > 0 with F(V_delta(A)) inside V_eps(F(A)), found by
/// halving from eps. No maximality claim.
inline Rat modulus(const Rel& f, const FSet& a, const Rat& eps) {
    if (eps <= 0) throw Error(Err::NegativeEpsilon, "modulus requires eps > 0");
    if (a.space() != f.src()) throw Error(Err::SpaceMismatch, "modulus set must live in src");
    if (!a.is_closed()) throw Error(Err::NonClosedRestriction, "modulus requires a closed set");
    FSet target = image(f, a).thicken(eps, false);
    Rat delta = eps;
    while (true) {
        if (image(f, a.thicken(delta, false)).subset_of(target)) return delta;
        delta /= 2;
    }
}

}  // namespace relcalc
