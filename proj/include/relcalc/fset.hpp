#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "relcalc/errors.hpp"
#include "relcalc/rational.hpp"
#include "relcalc/space.hpp"

namespace relcalc {

/// One maximal piece of a flagged semilinear set: an interval with
/// per-endpoint open/closed flags. A point is lo == hi with both flags closed.
struct Part {
    Rat lo, hi;
    bool lo_closed = true, hi_closed = true;

    bool is_point() const { return lo == hi; }
    bool empty() const {
        if (lo > hi) return true;
        if (lo == hi) return !(lo_closed && hi_closed);
        return false;
    }
    bool contains(const Rat& x) const {
        if (x < lo || x > hi) return false;
        if (x == lo && !lo_closed) return false;
        if (x == hi && !hi_closed) return false;
        return true;
    }
    bool operator==(const Part& o) const {
        return lo == o.lo && hi == o.hi && lo_closed == o.lo_closed && hi_closed == o.hi_closed;
    }
};

inline std::optional<Part> part_intersect(const Part& a, const Part& b) {
    Part r;
    if (a.lo > b.lo) { r.lo = a.lo; r.lo_closed = a.lo_closed; }
    else if (b.lo > a.lo) { r.lo = b.lo; r.lo_closed = b.lo_closed; }
    else { r.lo = a.lo; r.lo_closed = a.lo_closed && b.lo_closed; }
    if (a.hi < b.hi) { r.hi = a.hi; r.hi_closed = a.hi_closed; }
    else if (b.hi < a.hi) { r.hi = b.hi; r.hi_closed = b.hi_closed; }
    else { r.hi = a.hi; r.hi_closed = a.hi_closed && b.hi_closed; }
    if (r.empty()) return std::nullopt;
    return r;
}

/// A flagged semilinear subset of an ambient Space, kept in canonical form:
/// parts sorted, disjoint and non-adjacent (no two parts whose union is a
/// single interval). All topological queries are relative to the space.
class FSet {
  public:
    /// Parts are intersected with the space, then canonicalized.
    FSet(Space space, std::vector<Part> parts) : space_(std::move(space)) {
        for (const Part& p : parts) {
            if (p.empty()) continue;
            for (const SpaceComponent& c : space_.components()) {
                if (auto q = part_intersect(p, Part{c.lo, c.hi, true, true})) parts_.push_back(*q);
            }
        }
        canonicalize();
    }

    static FSet empty(const Space& s) { return FSet(s, {}); }
    static FSet full(const Space& s) {
        std::vector<Part> ps;
        for (const SpaceComponent& c : s.components()) ps.push_back({c.lo, c.hi, true, true});
        return FSet(s, std::move(ps));
    }
    static FSet point(const Space& s, const Rat& x) { return FSet(s, {{x, x, true, true}}); }
    static FSet interval(const Space& s, const Rat& lo, const Rat& hi, bool lc = true, bool hc = true) {
        return FSet(s, {{lo, hi, lc, hc}});
    }

    const Space& space() const { return space_; }
    const std::vector<Part>& parts() const { return parts_; }
    bool is_empty() const { return parts_.empty(); }

    bool contains(const Rat& x) const {
        for (const Part& p : parts_)
            if (p.contains(x)) return true;
        return false;
    }

    bool is_closed() const {
        for (const Part& p : parts_)
            if (!(p.lo_closed && p.hi_closed)) return false;
        return true;
    }

    FSet unite(const FSet& o) const {
        require_same_space(o);
        std::vector<Part> ps = parts_;
        ps.insert(ps.end(), o.parts_.begin(), o.parts_.end());
        return FSet(space_, std::move(ps));
    }

    /// Complement within the ambient space.
    FSet complement() const {
        std::vector<Part> out;
        std::size_t i = 0;
        for (const SpaceComponent& c : space_.components()) {
            Rat cur = c.lo;
            bool cur_closed = true;
            while (i < parts_.size() && parts_[i].lo <= c.hi && parts_[i].hi >= c.lo) {
                const Part& p = parts_[i];
                out.push_back({cur, p.lo, cur_closed, !p.lo_closed});
                cur = p.hi;
                cur_closed = !p.hi_closed;
                ++i;
            }
            out.push_back({cur, c.hi, cur_closed, true});
        }
        return FSet(space_, std::move(out));
    }

    FSet intersect(const FSet& o) const { return complement().unite(o.complement()).complement(); }
    FSet subtract(const FSet& o) const { return intersect(o.complement()); }

    FSet closure() const {
        std::vector<Part> ps = parts_;
        for (Part& p : ps) p.lo_closed = p.hi_closed = true;
        return FSet(space_, std::move(ps));
    }

    /// Interior relative to the ambient space: a whole component of the space
    /// is open in the space, so closed endpoints survive at component ends.
    FSet interior() const {
        std::vector<Part> out;
        for (const Part& p : parts_) {
            const SpaceComponent& c = space_.components()[space_.component_of(p.lo)];
            if (c.is_point()) { out.push_back(p); continue; }
            Part q = p;
            if (!(q.lo == c.lo && q.lo_closed)) q.lo_closed = false;
            if (!(q.hi == c.hi && q.hi_closed)) q.hi_closed = false;
            out.push_back(q);
        }
        return FSet(space_, std::move(out));
    }

    bool is_dense() const { return closure() == full(space_); }

    /// Metric thickening V_eps (open) or its closed variant, clipped to the space.
    FSet thicken(const Rat& eps, bool closed) const {
        if (eps < 0) throw Error(Err::NegativeEpsilon, "thicken requires eps >= 0");
        if (eps == 0) return closed ? *this : empty(space_);
        std::vector<Part> out;
        for (const Part& p : parts_) {
            Part q{p.lo - eps, p.hi + eps, closed && p.lo_closed, closed && p.hi_closed};
            if (p.is_point()) { q.lo_closed = closed; q.hi_closed = closed; }
            out.push_back(q);
        }
        return FSet(space_, std::move(out));
    }

    bool subset_of(const FSet& o) const { return intersect(o) == *this; }

    bool operator==(const FSet& o) const { return space_ == o.space_ && parts_ == o.parts_; }
    bool operator!=(const FSet& o) const { return !(*this == o); }

  private:
    void require_same_space(const FSet& o) const {
        if (space_ != o.space_) throw Error(Err::SpaceMismatch, "set operands live in different spaces");
    }

    void canonicalize() {
        std::erase_if(parts_, [](const Part& p) { return p.empty(); });
        std::sort(parts_.begin(), parts_.end(), [](const Part& a, const Part& b) {
            if (a.lo != b.lo) return a.lo < b.lo;
            if (a.lo_closed != b.lo_closed) return a.lo_closed;
            return a.hi < b.hi;
        });
        std::vector<Part> merged;
        for (const Part& p : parts_) {
            if (!merged.empty()) {
                Part& c = merged.back();
                bool joins = p.lo < c.hi || (p.lo == c.hi && (p.lo_closed || c.hi_closed));
                if (joins) {
                    if (p.hi > c.hi) { c.hi = p.hi; c.hi_closed = p.hi_closed; }
                    else if (p.hi == c.hi) { c.hi_closed = c.hi_closed || p.hi_closed; }
                    continue;
                }
            }
            merged.push_back(p);
        }
        parts_ = std::move(merged);
    }

    Space space_;
    std::vector<Part> parts_;
};

}  // namespace relcalc
