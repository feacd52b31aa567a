#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "relcalc/decomp.hpp"
#include "relcalc/errors.hpp"
#include "relcalc/fset.hpp"
#include "relcalc/function.hpp"
#include "relcalc/relation.hpp"

namespace relcalc {

/// ONE_F: the exact flagged set of x whose fiber F(x) is a singleton.
/// Read off the canonical decomposition: an open slab contributes itself when
/// it carries exactly one degenerate trapezoid, a breakpoint contributes
/// itself when its wall slice is a single point.
inline FSet one_set(const Rel& f) {
    const Decomp& d = f.decomp();
    std::vector<Part> parts;
    for (std::size_t i = 0; i < d.slabs.size(); ++i) {
        if (d.slabs[i].size() == 1 && d.slabs[i][0].degenerate())
            parts.push_back({d.breaks[i], d.breaks[i + 1], false, false});
    }
    for (std::size_t i = 0; i < d.breaks.size(); ++i) {
        if (d.walls[i].size() == 1 && d.walls[i][0].lo == d.walls[i][0].hi)
            parts.push_back({d.breaks[i], d.breaks[i], true, true});
    }
    return FSet(f.src(), std::move(parts));
}

/// f_F: the partial function obtained by restricting F to ONE_F.
inline Fun function_part(const Rel& f) {
    const Decomp& d = f.decomp();
    std::vector<FunPiece> pieces;
    std::vector<FunPoint> pts;
    for (std::size_t i = 0; i < d.slabs.size(); ++i) {
        if (d.slabs[i].size() == 1 && d.slabs[i][0].degenerate()) {
            const AffFn& fn = d.slabs[i][0].lo;
            pieces.push_back({{d.breaks[i], d.breaks[i + 1], false, false}, fn.m, fn.b});
        }
    }
    for (std::size_t i = 0; i < d.breaks.size(); ++i) {
        if (d.walls[i].size() == 1 && d.walls[i][0].lo == d.walls[i][0].hi)
            pts.push_back({d.breaks[i], d.walls[i][0].lo});
    }
    return Fun(f.src(), f.dst(), std::move(pieces), std::move(pts));
}

/// Closure of the graph of a map densely defined on src.
inline Rel closure_of_function(const Fun& g) {
    if (!g.domain_set().is_dense())
        throw Error(Err::DomainNotDense, "function domain is not dense in src");
    return g.graph_closure();
}

struct MinimalError {
    enum class Kind { NotFullDomain, NonUniqueMinimal };
    Kind kind;
    FSet witness;
};

/// The unique closed subrelation minimal for the first projection, when it
/// exists: full domain plus dense ONE_F give the closure of f_F. Otherwise a
/// MinimalError with a witness set where fibers vanish / ONE_F fails density.
inline std::variant<Rel, MinimalError> unique_minimal(const Rel& f) {
    FSet dom = domain(f);
    if (dom != FSet::full(f.src()))
        return MinimalError{MinimalError::Kind::NotFullDomain, FSet::full(f.src()).subtract(dom)};
    FSet one = one_set(f);
    if (!one.is_dense())
        return MinimalError{MinimalError::Kind::NonUniqueMinimal,
                            FSet::full(f.src()).subtract(one.closure())};
    return closure_of_function(function_part(f));
}

/// Minimality of F for the first projection, decided exactly in the PL model:
/// full domain, dense ONE_F, and F equal to the closure of its map part.
inline bool is_pi1_irreducible(const Rel& f) {
    if (domain(f) != FSet::full(f.src())) return false;
    FSet one = one_set(f);
    if (!one.is_dense()) return false;
    return f == closure_of_function(function_part(f));
}

namespace detail {

/// Offending piece of the decomposition when the second projection fails to
/// be almost open, as a set of source points; nullopt when almost open.
///
/// A box around a point of F has an image with empty interior exactly when
/// the box can be shrunk to meet only (a) a horizontal degenerate trapezoid
/// whose constant value is not isolated in dst, or (b) a single wall point
/// that no neighboring trapezoid limit reaches and whose height is not
/// isolated in dst. Every other local piece (2-D trapezoid, sloped function
/// piece, nondegenerate wall interval) pushes a whole interval into the
/// image of any box that meets it.
inline std::optional<FSet> pi2_violation(const Rel& f) {
    const Decomp& d = f.decomp();
    for (std::size_t i = 0; i < d.slabs.size(); ++i) {
        for (const Trap& t : d.slabs[i]) {
            if (t.degenerate() && t.lo.m == 0 && !f.dst().is_isolated(t.lo.b))
                return FSet::interval(f.src(), d.breaks[i], d.breaks[i + 1], false, false);
        }
    }
    for (std::size_t i = 0; i < d.breaks.size(); ++i) {
        std::vector<WallIv> covered;
        auto add = [&](const std::vector<Trap>& traps) {
            for (const Trap& t : traps) covered.push_back({t.lo.at(d.breaks[i]), t.hi.at(d.breaks[i])});
        };
        if (i > 0) add(d.slabs[i - 1]);
        if (i < d.slabs.size()) add(d.slabs[i]);
        for (const WallIv& w : d.walls[i]) {
            if (w.lo != w.hi) continue;
            bool reached = false;
            for (const WallIv& c : covered)
                if (c.lo <= w.lo && w.lo <= c.hi) reached = true;
            if (!reached && !f.dst().is_isolated(w.lo))
                return FSet::point(f.src(), d.breaks[i]);
        }
    }
    return std::nullopt;
}

}  // namespace detail

/// Almost openness of the second projection, decided by the horizontal-piece
/// criterion on the canonical decomposition.
inline bool is_pi2_almost_open(const Rel& f) { return !detail::pi2_violation(f).has_value(); }

struct Report {
    bool full_domain = false;
    bool one_dense = false;
    bool pi1_irreducible = false;
    bool pi2_almost_open = false;
    bool suitable = false;
    bool surjective = false;
    bool iso = false;
    std::vector<std::pair<std::string, FSet>> witnesses;
};

inline Report suitability_report(const Rel& f) {
    Report r;
    FSet full_src = FSet::full(f.src());
    FSet dom = domain(f);
    r.full_domain = dom == full_src;
    if (!r.full_domain) r.witnesses.push_back({"full_domain", full_src.subtract(dom)});

    FSet one = one_set(f);
    r.one_dense = one.is_dense();
    if (!r.one_dense) r.witnesses.push_back({"one_dense", full_src.subtract(one.closure())});

    r.pi1_irreducible = false;
    if (r.full_domain && r.one_dense) {
        Rel fc = closure_of_function(function_part(f));
        r.pi1_irreducible = f == fc;
        if (!r.pi1_irreducible) {
            for (const Cell& c : f.cells()) {
                if (!rel_subset(Rel(f.src(), f.dst(), {c}), fc)) {
                    r.witnesses.push_back(
                        {"pi1_irreducible", FSet::interval(f.src(), c.x_lo(), c.x_hi())});
                    break;
                }
            }
        }
    }

    auto bad = detail::pi2_violation(f);
    r.pi2_almost_open = !bad.has_value();
    if (bad) r.witnesses.push_back({"pi2_almost_open", *bad});

    r.suitable = r.pi1_irreducible && r.pi2_almost_open;

    FSet img = image(f, full_src);
    r.surjective = r.full_domain && img == FSet::full(f.dst());
    if (!r.surjective && r.full_domain)
        r.witnesses.push_back({"surjective", FSet::full(f.dst()).subtract(img)});

    if (r.suitable) {
        Rel inv = inverse(f);
        r.iso = is_pi1_irreducible(inv) && is_pi2_almost_open(inv);
    }
    return r;
}

/// G after F in the suitable-composition sense: the unique minimal closed
/// subrelation of the plain composition. Both arguments must be suitable.
inline Rel suitable_compose(const Rel& g, const Rel& f) {
    if (f.dst() != g.src())
        throw Error(Err::SpaceMismatch, "suitable_compose requires f.dst == g.src");
    if (!suitability_report(f).suitable)
        throw Error(Err::NotSuitable, "second argument is not a suitable relation");
    if (!suitability_report(g).suitable)
        throw Error(Err::NotSuitable, "first argument is not a suitable relation");
    auto um = unique_minimal(compose(g, f));
    if (std::holds_alternative<MinimalError>(um))
        throw Error(Err::Internal, "composition of suitable relations lost unique minimality");
    Rel out = std::get<Rel>(um);
    Report post = suitability_report(out);
    if (!post.suitable)
        throw Error(Err::Internal, "suitable composition produced a non-suitable relation");
    return out;
}

/// F^{.n}; the n-th suitable iterate. Negative n requires an isomorphism and
/// computes both (F^{.n})^{-1} and (F^{-1})^{.n}, asserting they agree.
inline Rel suitable_iterate(const Rel& f, long n) {
    if (f.src() != f.dst())
        throw Error(Err::SpaceMismatch, "suitable_iterate requires an endorelation");
    Report r = suitability_report(f);
    if (!r.suitable) throw Error(Err::NotSuitable, "relation is not suitable");
    if (n == 0) return Rel::identity(f.src());
    if (n < 0) {
        if (!r.iso) throw Error(Err::NotIsomorphism, "negative iterates need an isomorphism");
        Rel a = inverse(suitable_iterate(f, -n));
        Rel b = suitable_iterate(inverse(f), -n);
        if (a != b) throw Error(Err::Internal, "negative suitable iterate routes disagree");
        return a;
    }
    Rel acc = f;
    for (long i = 1; i < n; ++i) acc = suitable_compose(f, acc);
    return acc;
}

/// Inverse in the suitable-relations sense; requires an isomorphism and
/// verifies both composite identities before returning.
inline Rel suitable_inverse(const Rel& f) {
    Report r = suitability_report(f);
    if (!r.iso) throw Error(Err::NotIsomorphism, "relation is not a suitable-relations isomorphism");
    Rel inv = inverse(f);
    if (suitable_compose(inv, f) != Rel::identity(f.src()) ||
        suitable_compose(f, inv) != Rel::identity(f.dst()))
        throw Error(Err::Internal, "inverse failed the composite identity check");
    return inv;
}

/// Whether a total map g is a selection of F (graph contained pointwise) and
/// whether g is quasi-continuous, i.e. the closure of its graph is minimal
/// for the first projection.
inline std::pair<bool, bool> selection_check(const Fun& g, const Rel& f) {
    if (g.src() != f.src() || g.dst() != f.dst())
        throw Error(Err::SpaceMismatch, "selection must share the relation's spaces");
    if (!g.total()) throw Error(Err::NotTotal, "selection must be total");

    const Decomp& d = f.decomp();
    bool is_sel = !d.breaks.empty();
    auto slice_contains = [&](const Rat& x, const Rat& y) {
        for (const WallIv& iv : slice_union(f.cells(), x))
            if (iv.lo <= y && y <= iv.hi) return true;
        return false;
    };
    for (const FunPiece& p : g.pieces()) {
        if (!is_sel) break;
        if (p.dom.lo < d.breaks.front() || p.dom.hi > d.breaks.back()) { is_sel = false; break; }
        // breakpoints inside the domain
        for (const Rat& b : d.breaks)
            if (p.dom.contains(b) && !slice_contains(b, p.at(b))) { is_sel = false; break; }
        if (!is_sel) break;
        // slab windows
        for (std::size_t i = 0; i < d.slabs.size() && is_sel; ++i) {
            Rat w1 = rat_max(p.dom.lo, d.breaks[i]);
            Rat w2 = rat_min(p.dom.hi, d.breaks[i + 1]);
            if (w1 > w2) continue;
            if (w1 == w2) {
                // a single touching point; only matters when it is a real
                // domain point interior to the slab
                if (w1 != d.breaks[i] && w1 != d.breaks[i + 1] && p.dom.contains(w1) &&
                    !slice_contains(w1, p.at(w1)))
                    is_sel = false;
                continue;
            }
            bool inside = false;
            for (const Trap& t : d.slabs[i]) {
                if (t.lo.at(w1) <= p.at(w1) && p.at(w1) <= t.hi.at(w1) &&
                    t.lo.at(w2) <= p.at(w2) && p.at(w2) <= t.hi.at(w2)) {
                    inside = true;
                    break;
                }
            }
            if (!inside) is_sel = false;
        }
        if (!is_sel) break;
    }
    if (is_sel)
        for (const FunPoint& q : g.isolated())
            if (!slice_contains(q.x, q.y)) { is_sel = false; break; }

    bool quasi = is_pi1_irreducible(g.graph_closure());
    return {is_sel, quasi};
}

struct MapAnalysis {
    FSet in_set;
    FSet open_set;
    bool almost_one_to_one = false;
    bool irreducible = false;
    bool almost_open = false;
};

/// Injectivity and openness structure of a total continuous PL map.
inline MapAnalysis map_analysis(const Fun& g) {
    if (!g.total()) throw Error(Err::NotTotal, "map analysis requires a total map");
    if (!g.continuous()) throw Error(Err::NotContinuous, "map analysis requires a continuous map");

    Rel graph = g.graph_closure();
    Rel h = compose(inverse(graph), graph);  // x -> g^{-1}(g(x))
    const Decomp& d = h.decomp();

    std::vector<Part> in_parts;
    for (std::size_t i = 0; i < d.slabs.size(); ++i) {
        if (d.slabs[i].size() != 1 || !d.slabs[i][0].degenerate()) continue;
        const AffFn& fn = d.slabs[i][0].lo;
        if (fn.m == 1 && fn.b == 0) {
            in_parts.push_back({d.breaks[i], d.breaks[i + 1], false, false});
        } else if (fn.m != 1) {
            Rat fix = fn.b / (1 - fn.m);
            if (d.breaks[i] < fix && fix < d.breaks[i + 1])
                in_parts.push_back({fix, fix, true, true});
        }
    }
    for (std::size_t i = 0; i < d.breaks.size(); ++i) {
        if (d.walls[i].size() == 1 && d.walls[i][0].lo == d.breaks[i] &&
            d.walls[i][0].hi == d.breaks[i])
            in_parts.push_back({d.breaks[i], d.breaks[i], true, true});
    }

    MapAnalysis out{FSet(g.src(), std::move(in_parts)), FSet::empty(g.src()), false, false, false};

    // OPEN_g: piece interiors with nonzero slope are open; zero-slope pieces
    // are open only onto isolated points; at knots and component endpoints
    // the one-sided slopes must cover every side the target needs.
    std::vector<Part> open_parts;
    auto piece_slope_left = [&](const Rat& x) -> std::optional<Rat> {
        for (const FunPiece& p : g.pieces())
            if (p.dom.lo < x && x <= p.dom.hi) return p.slope;
        return std::nullopt;
    };
    auto piece_slope_right = [&](const Rat& x) -> std::optional<Rat> {
        for (const FunPiece& p : g.pieces())
            if (p.dom.lo <= x && x < p.dom.hi) return p.slope;
        return std::nullopt;
    };
    for (const FunPiece& p : g.pieces()) {
        if (p.slope != 0 || g.dst().is_isolated(p.intercept))
            open_parts.push_back({p.dom.lo, p.dom.hi, false, false});
    }
    std::vector<Rat> crit;
    for (const FunPiece& p : g.pieces()) {
        crit.push_back(p.dom.lo);
        crit.push_back(p.dom.hi);
    }
    for (const FunPoint& p : g.isolated()) crit.push_back(p.x);
    std::sort(crit.begin(), crit.end());
    crit.erase(std::unique(crit.begin(), crit.end()), crit.end());
    for (const Rat& x : crit) {
        Rat y = *g.eval(x);
        int yc = g.dst().component_of(y);
        const SpaceComponent& target = g.dst().components()[yc];
        bool need_below = !target.is_point() && y > target.lo;
        bool need_above = !target.is_point() && y < target.hi;
        std::optional<Rat> sl = piece_slope_left(x), sr = piece_slope_right(x);
        bool below = (sl && *sl > 0) || (sr && *sr < 0);
        bool above = (sl && *sl < 0) || (sr && *sr > 0);
        if ((!need_below || below) && (!need_above || above))
            open_parts.push_back({x, x, true, true});
    }
    out.open_set = FSet(g.src(), std::move(open_parts));

    out.almost_one_to_one = out.in_set.is_dense();
    bool surjective = image(graph, FSet::full(g.src())) == FSet::full(g.dst());
    out.irreducible = surjective && out.almost_one_to_one;
    out.almost_open = out.open_set.is_dense();
    return out;
}

}  // namespace relcalc
