#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "relcalc/errors.hpp"
#include "relcalc/fset.hpp"
#include "relcalc/relation.hpp"

namespace relcalc {

/// One affine piece of a partial function: y = slope*x + intercept over a
/// flagged interval domain.
struct FunPiece {
    Part dom;
    Rat slope, intercept;

    Rat at(const Rat& x) const { return slope * x + intercept; }
    bool operator==(const FunPiece& o) const {
        return dom == o.dom && slope == o.slope && intercept == o.intercept;
    }
};

/// An isolated assignment x -> y.
struct FunPoint {
    Rat x, y;
    bool operator==(const FunPoint& o) const { return x == o.x && y == o.y; }
};

/// A piecewise-affine partial function. The graph need not be closed; piece
/// domains carry open/closed endpoint flags. Pieces are kept sorted and
/// merged where they continue affinely, with isolated assignments absorbed
/// into adjacent collinear pieces.
class Fun {
  public:
    Fun(Space src, Space dst, std::vector<FunPiece> pieces, std::vector<FunPoint> isolated = {})
        : src_(std::move(src)), dst_(std::move(dst)), pieces_(std::move(pieces)),
          isolated_(std::move(isolated)) {
        for (const FunPiece& p : pieces_)
            if (p.dom.empty()) throw Error(Err::Parse, "empty function piece domain");
        canonicalize();
    }

    const Space& src() const { return src_; }
    const Space& dst() const { return dst_; }
    const std::vector<FunPiece>& pieces() const { return pieces_; }
    const std::vector<FunPoint>& isolated() const { return isolated_; }

    FSet domain_set() const {
        std::vector<Part> ps;
        for (const FunPiece& p : pieces_) ps.push_back(p.dom);
        for (const FunPoint& p : isolated_) ps.push_back({p.x, p.x, true, true});
        return FSet(src_, std::move(ps));
    }

    bool total() const { return domain_set() == FSet::full(src_); }

    std::optional<Rat> eval(const Rat& x) const {
        for (const FunPiece& p : pieces_)
            if (p.dom.contains(x)) return p.at(x);
        for (const FunPoint& p : isolated_)
            if (p.x == x) return p.y;
        return std::nullopt;
    }

    /// Total and every junction of adjacent pieces agrees in value.
    bool continuous() const {
        if (!total()) return false;
        struct Item { Part dom; std::optional<Rat> slope, intercept; Rat y0; };
        std::vector<Item> items;
        for (const FunPiece& p : pieces_) items.push_back({p.dom, p.slope, p.intercept, 0});
        for (const FunPoint& p : isolated_) items.push_back({{p.x, p.x, true, true}, {}, {}, p.y});
        std::sort(items.begin(), items.end(),
                  [](const Item& a, const Item& b) { return a.dom.lo < b.dom.lo; });
        auto value_at = [](const Item& it, const Rat& x) {
            return it.slope ? *it.slope * x + *it.intercept : it.y0;
        };
        for (std::size_t i = 0; i + 1 < items.size(); ++i) {
            const Item& a = items[i];
            const Item& b = items[i + 1];
            if (a.dom.hi != b.dom.lo) continue;  // different components (total => gap)
            if (src_.component_of(a.dom.hi) != src_.component_of(b.dom.lo)) continue;
            if (value_at(a, a.dom.hi) != value_at(b, b.dom.lo)) return false;
        }
        return true;
    }

    /// The closure of the graph in src x dst.
    Rel graph_closure() const {
        std::vector<Cell> cs;
        for (const FunPiece& p : pieces_) {
            if (p.dom.is_point())
                cs.push_back(Cell::point(p.dom.lo, p.at(p.dom.lo)));
            else
                cs.push_back(Cell::segment({p.dom.lo, p.at(p.dom.lo)}, {p.dom.hi, p.at(p.dom.hi)}));
        }
        for (const FunPoint& p : isolated_) cs.push_back(Cell::point(p.x, p.y));
        return Rel(src_, dst_, std::move(cs));
    }

    /// Pointwise restriction of the function to a subset of its domain.
    Fun restricted_to(const FSet& s) const {
        if (s.space() != src_) throw Error(Err::SpaceMismatch, "restriction set must live in src");
        std::vector<FunPiece> ps;
        std::vector<FunPoint> is;
        for (const FunPiece& p : pieces_)
            for (const Part& q : s.parts())
                if (auto w = part_intersect(p.dom, q)) {
                    if (w->is_point())
                        is.push_back({w->lo, p.at(w->lo)});
                    else
                        ps.push_back({*w, p.slope, p.intercept});
                }
        for (const FunPoint& p : isolated_)
            if (s.contains(p.x)) is.push_back(p);
        return Fun(src_, dst_, std::move(ps), std::move(is));
    }

    bool operator==(const Fun& o) const {
        return src_ == o.src_ && dst_ == o.dst_ && pieces_ == o.pieces_ && isolated_ == o.isolated_;
    }

  private:
    void canonicalize() {
        std::sort(pieces_.begin(), pieces_.end(), [](const FunPiece& a, const FunPiece& b) {
            return a.dom.lo != b.dom.lo ? a.dom.lo < b.dom.lo : a.dom.hi < b.dom.hi;
        });
        // merge pieces that continue with the same affine map
        std::vector<FunPiece> merged;
        for (const FunPiece& p : pieces_) {
            if (!merged.empty()) {
                FunPiece& c = merged.back();
                bool touches = c.dom.hi == p.dom.lo && (c.dom.hi_closed || p.dom.lo_closed);
                if (touches && c.slope == p.slope && c.intercept == p.intercept) {
                    c.dom.hi = p.dom.hi;
                    c.dom.hi_closed = p.dom.hi_closed;
                    continue;
                }
            }
            merged.push_back(p);
        }
        pieces_ = std::move(merged);
        // piece domains must stay pairwise disjoint; a shared junction point
        // with agreeing values is normalized away, anything else is rejected
        for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
            FunPiece& a = pieces_[i];
            FunPiece& b = pieces_[i + 1];
            if (b.dom.lo < a.dom.hi)
                throw Error(Err::Parse, "function pieces overlap");
            if (b.dom.lo == a.dom.hi && a.dom.hi_closed && b.dom.lo_closed) {
                if (a.at(a.dom.hi) != b.at(b.dom.lo))
                    throw Error(Err::Parse, "function pieces disagree at a shared point");
                b.dom.lo_closed = false;
                if (b.dom.empty()) throw Error(Err::Parse, "empty function piece domain");
            }
        }
        // absorb isolated assignments that extend an adjacent piece
        std::vector<FunPoint> keep;
        for (const FunPoint& q : isolated_) {
            bool absorbed = false;
            for (FunPiece& p : pieces_) {
                if (p.at(q.x) == q.y) {
                    if (p.dom.lo == q.x && !p.dom.lo_closed) { p.dom.lo_closed = true; absorbed = true; break; }
                    if (p.dom.hi == q.x && !p.dom.hi_closed) { p.dom.hi_closed = true; absorbed = true; break; }
                    if (p.dom.contains(q.x)) { absorbed = true; break; }
                } else if (p.dom.contains(q.x)) {
                    throw Error(Err::Parse, "isolated assignment conflicts with a piece");
                }
            }
            if (!absorbed) keep.push_back(q);
        }
        std::sort(keep.begin(), keep.end(),
                  [](const FunPoint& a, const FunPoint& b) { return a.x < b.x; });
        keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
        isolated_ = std::move(keep);
    }

    Space src_, dst_;
    std::vector<FunPiece> pieces_;
    std::vector<FunPoint> isolated_;
};

}  // namespace relcalc
