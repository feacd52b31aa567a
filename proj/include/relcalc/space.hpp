#pragma once

#include <algorithm>
#include <vector>

#include "relcalc/errors.hpp"
#include "relcalc/rational.hpp"

namespace relcalc {

/// One component of a space: a closed interval [lo,hi] with lo < hi,
/// or an isolated point when lo == hi.
struct SpaceComponent {
    Rat lo, hi;

    bool is_point() const { return lo == hi; }
    bool contains(const Rat& x) const { return lo <= x && x <= hi; }
    bool operator==(const SpaceComponent& o) const { return lo == o.lo && hi == o.hi; }
};

/// A compact subset of the rational line: finitely many pairwise disjoint
/// closed intervals and isolated points, separated by positive gaps.
class Space {
  public:
    explicit Space(std::vector<SpaceComponent> comps) : comps_(std::move(comps)) {
        if (comps_.empty()) throw Error(Err::Parse, "space must be nonempty");
        std::sort(comps_.begin(), comps_.end(),
                  [](const SpaceComponent& a, const SpaceComponent& b) { return a.lo < b.lo; });
        for (std::size_t i = 0; i < comps_.size(); ++i) {
            if (comps_[i].lo > comps_[i].hi)
                throw Error(Err::Parse, "space component with lo > hi");
            if (i > 0 && comps_[i - 1].hi >= comps_[i].lo)
                throw Error(Err::Parse, "space components must be separated by positive gaps");
        }
    }

    static Space interval(const Rat& lo, const Rat& hi) { return Space({{lo, hi}}); }
    static Space unit() { return interval(0, 1); }

    const std::vector<SpaceComponent>& components() const { return comps_; }

    bool contains(const Rat& x) const { return component_of(x) >= 0; }

    /// Index of the component containing x, or -1.
    int component_of(const Rat& x) const {
        for (std::size_t i = 0; i < comps_.size(); ++i)
            if (comps_[i].contains(x)) return static_cast<int>(i);
        return -1;
    }

    /// True when {p} is open in the space, i.e. p is an isolated-point component.
    bool is_isolated(const Rat& p) const {
        int c = component_of(p);
        return c >= 0 && comps_[c].is_point();
    }

    const Rat& min() const { return comps_.front().lo; }
    const Rat& max() const { return comps_.back().hi; }

    bool operator==(const Space& o) const { return comps_ == o.comps_; }
    bool operator!=(const Space& o) const { return !(*this == o); }

  private:
    std::vector<SpaceComponent> comps_;
};

}  // namespace relcalc
