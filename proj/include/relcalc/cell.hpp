#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "relcalc/errors.hpp"
#include "relcalc/rational.hpp"

namespace relcalc {

struct Pt {
    Rat x, y;
    bool operator==(const Pt& o) const { return x == o.x && y == o.y; }
    bool operator<(const Pt& o) const { return x != o.x ? x < o.x : y < o.y; }
};

inline Rat cross(const Pt& o, const Pt& a, const Pt& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

/// Strict convex hull, counterclockwise, no collinear points kept.
inline std::vector<Pt> convex_hull(std::vector<Pt> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() <= 2) return pts;
    std::vector<Pt> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {  // lower
        while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {  // upper
        while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

/// A closed convex rational cell of dimension <= 2: a point, a segment or a
/// strictly convex polygon (CCW). These are the finite-presentation atoms of a
/// closed piecewise-linear relation; the class is stable under coordinate
/// swap, box clipping and composition.
struct Cell {
    enum class Kind { Point, Segment, Polygon };
    Kind kind;
    std::vector<Pt> v;

    /// Classifies an arbitrary finite point set by its convex hull.
    static Cell from_points(std::vector<Pt> pts) {
        std::vector<Pt> h = convex_hull(std::move(pts));
        if (h.empty()) throw Error(Err::Internal, "cell from empty point set");
        if (h.size() == 1) return {Kind::Point, std::move(h)};
        if (h.size() == 2) {
            if (h[1] < h[0]) std::swap(h[0], h[1]);
            return {Kind::Segment, std::move(h)};
        }
        // canonical start: lexicographically smallest vertex first
        auto it = std::min_element(h.begin(), h.end());
        std::rotate(h.begin(), it, h.end());
        return {Kind::Polygon, std::move(h)};
    }

    static Cell point(const Rat& x, const Rat& y) { return {Kind::Point, {{x, y}}}; }
    static Cell segment(const Pt& a, const Pt& b) { return from_points({a, b}); }

    Rat x_lo() const {
        Rat m = v[0].x;
        for (const Pt& p : v) m = rat_min(m, p.x);
        return m;
    }
    Rat x_hi() const {
        Rat m = v[0].x;
        for (const Pt& p : v) m = rat_max(m, p.x);
        return m;
    }
    Rat y_lo() const {
        Rat m = v[0].y;
        for (const Pt& p : v) m = rat_min(m, p.y);
        return m;
    }
    Rat y_hi() const {
        Rat m = v[0].y;
        for (const Pt& p : v) m = rat_max(m, p.y);
        return m;
    }

    /// {y : (x,y) in cell} as [lo,hi]; nullopt when x misses the x-range.
    std::optional<std::pair<Rat, Rat>> y_slice(const Rat& x) const {
        if (kind == Kind::Point) {
            if (v[0].x == x) return std::make_pair(v[0].y, v[0].y);
            return std::nullopt;
        }
        if (x < x_lo() || x > x_hi()) return std::nullopt;
        std::optional<Rat> lo, hi;
        auto take = [&](const Rat& y) {
            if (!lo || y < *lo) lo = y;
            if (!hi || y > *hi) hi = y;
        };
        auto edge = [&](const Pt& a, const Pt& b) {
            if (a.x == b.x) {
                if (a.x == x) { take(a.y); take(b.y); }
                return;
            }
            const Pt& l = a.x < b.x ? a : b;
            const Pt& r = a.x < b.x ? b : a;
            if (x < l.x || x > r.x) return;
            take(l.y + (x - l.x) * (r.y - l.y) / (r.x - l.x));
        };
        if (kind == Kind::Segment) {
            edge(v[0], v[1]);
        } else {
            for (std::size_t i = 0; i < v.size(); ++i) edge(v[i], v[(i + 1) % v.size()]);
        }
        if (!lo) return std::nullopt;
        return std::make_pair(*lo, *hi);
    }

    Cell swapped() const {
        std::vector<Pt> w;
        w.reserve(v.size());
        for (const Pt& p : v) w.push_back({p.y, p.x});
        return from_points(std::move(w));
    }

    std::vector<std::pair<Pt, Pt>> edges() const {
        std::vector<std::pair<Pt, Pt>> es;
        if (kind == Kind::Segment) es.push_back({v[0], v[1]});
        if (kind == Kind::Polygon)
            for (std::size_t i = 0; i < v.size(); ++i) es.push_back({v[i], v[(i + 1) % v.size()]});
        return es;
    }

    /// Sorted unique x coordinates of vertices.
    std::vector<Rat> knots_x() const {
        std::vector<Rat> k;
        for (const Pt& p : v) k.push_back(p.x);
        std::sort(k.begin(), k.end());
        k.erase(std::unique(k.begin(), k.end()), k.end());
        return k;
    }

    /// Intersection with the halfplane a*x + b*y <= c.
    std::optional<Cell> clip_halfplane(const Rat& a, const Rat& b, const Rat& c) const {
        auto val = [&](const Pt& p) { return a * p.x + b * p.y - c; };
        if (kind == Kind::Point) {
            if (val(v[0]) <= 0) return *this;
            return std::nullopt;
        }
        std::vector<Pt> out;
        std::size_t n = kind == Kind::Segment ? 1 : v.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Pt& p = v[i];
            const Pt& q = v[(i + 1) % v.size()];
            Rat vp = val(p), vq = val(q);
            if (vp <= 0) out.push_back(p);
            if ((vp < 0 && vq > 0) || (vp > 0 && vq < 0)) {
                Rat t = vp / (vp - vq);
                out.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
            }
        }
        if (kind == Kind::Segment && val(v[1]) <= 0) out.push_back(v[1]);
        if (out.empty()) return std::nullopt;
        return from_points(std::move(out));
    }

    /// Intersection with the closed box [x1,x2] x [y1,y2].
    std::optional<Cell> clip_box(const Rat& x1, const Rat& x2, const Rat& y1, const Rat& y2) const {
        std::optional<Cell> c = *this;
        c = c->clip_halfplane(-1, 0, -x1);
        if (c) c = c->clip_halfplane(1, 0, x2);
        if (c) c = c->clip_halfplane(0, -1, -y1);
        if (c) c = c->clip_halfplane(0, 1, y2);
        return c;
    }

    bool operator==(const Cell& o) const { return kind == o.kind && v == o.v; }
    bool operator<(const Cell& o) const {
        if (!(v[0] == o.v[0])) return v[0] < o.v[0];
        if (kind != o.kind) return static_cast<int>(kind) < static_cast<int>(o.kind);
        return std::lexicographical_compare(v.begin(), v.end(), o.v.begin(), o.v.end());
    }
};

/// Convex lower envelope of the cell: min/max of y over the closed x-window
/// [w1,w2] intersected with the cell's x-range (which must overlap).
/// Also reports the argmin/argmax interval so half-open windows can decide
/// whether the extreme value is attained.
struct EnvelopeExtreme {
    Rat value;
    Rat arg_lo, arg_hi;  // subinterval of the window attaining the value
};

inline std::vector<Rat> window_knots(const Cell& c, const Rat& w1, const Rat& w2) {
    std::vector<Rat> xs;
    xs.push_back(w1);
    xs.push_back(w2);
    for (const Rat& k : c.knots_x())
        if (k > w1 && k < w2) xs.push_back(k);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

inline EnvelopeExtreme envelope_min(const Cell& c, const Rat& w1, const Rat& w2) {
    std::vector<Rat> xs = window_knots(c, w1, w2);
    std::optional<EnvelopeExtreme> best;
    for (const Rat& x : xs) {
        Rat y = c.y_slice(x)->first;
        if (!best || y < best->value) best = EnvelopeExtreme{y, x, x};
        else if (y == best->value) best->arg_hi = x;
    }
    return *best;  // argmin of a convex function is a contiguous knot run
}

inline EnvelopeExtreme envelope_max(const Cell& c, const Rat& w1, const Rat& w2) {
    std::vector<Rat> xs = window_knots(c, w1, w2);
    std::optional<EnvelopeExtreme> best;
    for (const Rat& x : xs) {
        Rat y = c.y_slice(x)->second;
        if (!best || y > best->value) best = EnvelopeExtreme{y, x, x};
        else if (y == best->value) best->arg_hi = x;
    }
    return *best;
}

}  // namespace relcalc
