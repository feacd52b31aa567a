#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "relcalc/cell.hpp"
#include "relcalc/errors.hpp"
#include "relcalc/rational.hpp"

namespace relcalc {

/// y = m*x + b
struct AffFn {
    Rat m, b;
    Rat at(const Rat& x) const { return m * x + b; }
    bool operator==(const AffFn& o) const { return m == o.m && b == o.b; }
};

inline AffFn affine_through(const Rat& x1, const Rat& y1, const Rat& x2, const Rat& y2) {
    Rat m = (y2 - y1) / (x2 - x1);
    return {m, y1 - m * x1};
}

/// A maximal y-interval of the set over one open slab, bounded by affine
/// functions with lo <= hi throughout. lo == hi is a function piece.
struct Trap {
    AffFn lo, hi;
    bool degenerate() const { return lo == hi; }
    bool operator==(const Trap& o) const { return lo == o.lo && hi == o.hi; }
};

/// Closed y-interval of a wall slice (point when lo == hi).
struct WallIv {
    Rat lo, hi;
    bool operator==(const WallIv& o) const { return lo == o.lo && hi == o.hi; }
};

/// Canonical vertical (trapezoidal) decomposition of a finite union of
/// convex cells. Breakpoints are the x where the slice structure changes;
/// between consecutive breakpoints the set is a disjoint union of trapezoids;
/// the full (closed) slice at each breakpoint is stored as a wall. Two cell
/// unions describe the same point set iff their decompositions are identical.
struct Decomp {
    std::vector<Rat> breaks;                 // sorted; empty iff the set is empty
    std::vector<std::vector<Trap>> slabs;    // breaks.size()-1 entries
    std::vector<std::vector<WallIv>> walls;  // breaks.size() entries

    bool empty() const { return breaks.empty(); }

    bool operator==(const Decomp& o) const {
        return breaks == o.breaks && slabs == o.slabs && walls == o.walls;
    }
};

/// Union of the closed y-slices of all cells at x, as disjoint maximal
/// closed intervals (touching intervals merge).
inline std::vector<WallIv> slice_union(const std::vector<Cell>& cells, const Rat& x) {
    std::vector<WallIv> ivs;
    for (const Cell& c : cells)
        if (auto s = c.y_slice(x)) ivs.push_back({s->first, s->second});
    std::sort(ivs.begin(), ivs.end(), [](const WallIv& a, const WallIv& b) {
        return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
    });
    std::vector<WallIv> out;
    for (const WallIv& iv : ivs) {
        if (!out.empty() && iv.lo <= out.back().hi) {
            out.back().hi = rat_max(out.back().hi, iv.hi);
        } else {
            out.push_back(iv);
        }
    }
    return out;
}

namespace detail {

inline void add_edge_intersections(const std::pair<Pt, Pt>& e1, const std::pair<Pt, Pt>& e2,
                                   std::vector<Rat>& xs) {
    Rat bx1 = rat_min(e1.first.x, e1.second.x), bx2 = rat_max(e1.first.x, e1.second.x);
    Rat cx1 = rat_min(e2.first.x, e2.second.x), cx2 = rat_max(e2.first.x, e2.second.x);
    if (bx2 < cx1 || cx2 < bx1) return;
    Rat by1 = rat_min(e1.first.y, e1.second.y), by2 = rat_max(e1.first.y, e1.second.y);
    Rat cy1 = rat_min(e2.first.y, e2.second.y), cy2 = rat_max(e2.first.y, e2.second.y);
    if (by2 < cy1 || cy2 < by1) return;
    Pt d1{e1.second.x - e1.first.x, e1.second.y - e1.first.y};
    Pt d2{e2.second.x - e2.first.x, e2.second.y - e2.first.y};
    Rat denom = d1.x * d2.y - d1.y * d2.x;
    Pt w{e2.first.x - e1.first.x, e2.first.y - e1.first.y};
    if (denom == 0) {
        // parallel; if collinear and overlapping, the endpoints already carry
        // every structure change, so add them as candidates
        if (w.x * d1.y - w.y * d1.x == 0) {
            xs.push_back(e1.first.x);
            xs.push_back(e1.second.x);
            xs.push_back(e2.first.x);
            xs.push_back(e2.second.x);
        }
        return;
    }
    Rat t = (w.x * d2.y - w.y * d2.x) / denom;
    Rat u = (w.x * d1.y - w.y * d1.x) / denom;
    if (t >= 0 && t <= 1 && u >= 0 && u <= 1) xs.push_back(e1.first.x + t * d1.x);
}

}  // namespace detail

inline Decomp build_decomp(const std::vector<Cell>& cells) {
    Decomp d;
    if (cells.empty()) return d;

    std::vector<Rat> xs;
    for (const Cell& c : cells)
        for (const Pt& p : c.v) xs.push_back(p.x);
    std::vector<std::vector<std::pair<Pt, Pt>>> all_edges;
    all_edges.reserve(cells.size());
    for (const Cell& c : cells) all_edges.push_back(c.edges());
    for (std::size_t i = 0; i < cells.size(); ++i)
        for (std::size_t j = i + 1; j < cells.size(); ++j)
            for (const auto& e1 : all_edges[i])
                for (const auto& e2 : all_edges[j]) detail::add_edge_intersections(e1, e2, xs);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    d.breaks = std::move(xs);

    for (const Rat& b : d.breaks) d.walls.push_back(slice_union(cells, b));

    for (std::size_t i = 0; i + 1 < d.breaks.size(); ++i) {
        const Rat& b1 = d.breaks[i];
        const Rat& b2 = d.breaks[i + 1];
        Rat q1 = b1 + (b2 - b1) / 4;
        Rat q2 = b1 + (b2 - b1) * 3 / 4;
        std::vector<WallIv> u1 = slice_union(cells, q1);
        std::vector<WallIv> u2 = slice_union(cells, q2);
        if (u1.size() != u2.size())
            throw Error(Err::Internal, "slice structure changed inside an open slab");
        std::vector<Trap> traps;
        traps.reserve(u1.size());
        for (std::size_t k = 0; k < u1.size(); ++k)
            traps.push_back({affine_through(q1, u1[k].lo, q2, u2[k].lo),
                             affine_through(q1, u1[k].hi, q2, u2[k].hi)});
        d.slabs.push_back(std::move(traps));
    }

    // merge pass: drop breakpoints that carry no structure change
    auto limits_at = [](const std::vector<Trap>& traps, const Rat& x) {
        std::vector<WallIv> ivs;
        ivs.reserve(traps.size());
        for (const Trap& t : traps) ivs.push_back({t.lo.at(x), t.hi.at(x)});
        std::vector<WallIv> out;  // merge touching (traps sorted upward)
        for (const WallIv& iv : ivs) {
            if (!out.empty() && iv.lo <= out.back().hi)
                out.back().hi = rat_max(out.back().hi, iv.hi);
            else
                out.push_back(iv);
        }
        return out;
    };
    Decomp m;
    m.breaks.push_back(d.breaks[0]);
    m.walls.push_back(d.walls[0]);
    for (std::size_t i = 1; i + 1 < d.breaks.size(); ++i) {
        bool drop = d.slabs[i - 1] == d.slabs[i] &&
                    d.walls[i] == limits_at(d.slabs[i], d.breaks[i]);
        if (!drop) {
            m.breaks.push_back(d.breaks[i]);
            m.walls.push_back(d.walls[i]);
            m.slabs.push_back(d.slabs[i - 1]);
        }
    }
    if (d.breaks.size() >= 2) {
        m.breaks.push_back(d.breaks.back());
        m.walls.push_back(d.walls.back());
        m.slabs.push_back(d.slabs.back());
    }
    return m;
}

/// Closed-interval subtraction a \ cover, returned as the closures of the
/// relative complement pieces (their union with cover equals a's union).
inline std::vector<WallIv> wall_subtract(const WallIv& a, const std::vector<WallIv>& cover) {
    std::vector<WallIv> out;
    Rat cur = a.lo;
    bool cur_alive = true;
    for (const WallIv& c : cover) {
        if (c.hi < cur || c.lo > a.hi) continue;
        if (c.lo > cur) out.push_back({cur, c.lo});
        if (c.hi >= a.hi) { cur_alive = false; break; }
        cur = rat_max(cur, c.hi);
    }
    if (cur_alive && cur <= a.hi) out.push_back({cur, a.hi});
    return out;
}

/// Re-emit the decomposition as cells. Deterministic; two decompositions of
/// the same point set emit identical cell lists.
inline std::vector<Cell> emit_cells(const Decomp& d) {
    std::vector<Cell> out;
    for (std::size_t i = 0; i < d.slabs.size(); ++i) {
        const Rat& x1 = d.breaks[i];
        const Rat& x2 = d.breaks[i + 1];
        for (const Trap& t : d.slabs[i]) {
            if (t.degenerate()) {
                out.push_back(Cell::segment({x1, t.lo.at(x1)}, {x2, t.lo.at(x2)}));
            } else {
                out.push_back(Cell::from_points({{x1, t.lo.at(x1)},
                                                 {x2, t.lo.at(x2)},
                                                 {x2, t.hi.at(x2)},
                                                 {x1, t.hi.at(x1)}}));
            }
        }
    }
    for (std::size_t i = 0; i < d.breaks.size(); ++i) {
        const Rat& x = d.breaks[i];
        std::vector<WallIv> covered;
        auto add_limits = [&](const std::vector<Trap>& traps) {
            for (const Trap& t : traps) covered.push_back({t.lo.at(x), t.hi.at(x)});
        };
        if (i > 0) add_limits(d.slabs[i - 1]);
        if (i < d.slabs.size()) add_limits(d.slabs[i]);
        std::sort(covered.begin(), covered.end(), [](const WallIv& a, const WallIv& b) {
            return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
        });
        std::vector<WallIv> merged;
        for (const WallIv& iv : covered) {
            if (!merged.empty() && iv.lo <= merged.back().hi)
                merged.back().hi = rat_max(merged.back().hi, iv.hi);
            else
                merged.push_back(iv);
        }
        for (const WallIv& w : d.walls[i]) {
            for (const WallIv& piece : wall_subtract(w, merged)) {
                if (piece.lo == piece.hi)
                    out.push_back(Cell::point(x, piece.lo));
                else
                    out.push_back(Cell::segment({x, piece.lo}, {x, piece.hi}));
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace relcalc
