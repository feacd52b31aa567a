#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "relcalc/errors.hpp"
#include "relcalc/rational.hpp"
#include "relcalc/relation.hpp"

namespace relcalc {

struct GridBox {
    Rat lo, hi;  // closed; degenerate for isolated points
};

/// The dyadic box decomposition of a space at resolution 2^-k: every interval
/// component is cut into boxes of width 2^-k anchored at its left endpoint
/// (the last box may be shorter); point components become degenerate boxes.
inline std::vector<GridBox> space_boxes(const Space& s, int k, std::size_t guard) {
    Rat w = pow2(-k);
    std::vector<GridBox> out;
    for (const SpaceComponent& c : s.components()) {
        if (c.is_point()) {
            out.push_back({c.lo, c.lo});
            continue;
        }
        Rat x = c.lo;
        while (x < c.hi) {
            Rat nx = rat_min(x + w, c.hi);
            out.push_back({x, nx});
            x = nx;
            if (out.size() > guard)
                throw Error(Err::ResolutionTooLarge, "box count exceeds the per-axis guard");
        }
    }
    if (out.size() > guard)
        throw Error(Err::ResolutionTooLarge, "box count exceeds the per-axis guard");
    return out;
}

/// Outer box cover of a relation at resolution 2^-k: bit (i,j) is set exactly
/// when the closed box product meets the relation. Rows are source boxes.
class Grid {
  public:
    Grid(int k, Space src, Space dst, std::vector<GridBox> rows_boxes,
         std::vector<GridBox> cols_boxes)
        : k_(k), src_(std::move(src)), dst_(std::move(dst)), rows_boxes_(std::move(rows_boxes)),
          cols_boxes_(std::move(cols_boxes)) {
        words_per_row_ = (cols() + 63) / 64;
        bits_.assign(rows() * words_per_row_, 0);
    }

    int k() const { return k_; }
    const Space& src() const { return src_; }
    const Space& dst() const { return dst_; }
    std::size_t rows() const { return rows_boxes_.size(); }
    std::size_t cols() const { return cols_boxes_.size(); }
    const std::vector<GridBox>& row_boxes() const { return rows_boxes_; }
    const std::vector<GridBox>& col_boxes() const { return cols_boxes_; }
    std::size_t words_per_row() const { return words_per_row_; }
    const std::vector<std::uint64_t>& words() const { return bits_; }
    std::vector<std::uint64_t>& mutable_words() { return bits_; }

    bool get(std::size_t i, std::size_t j) const {
        return (bits_[i * words_per_row_ + j / 64] >> (j % 64)) & 1u;
    }
    void set(std::size_t i, std::size_t j) {
        bits_[i * words_per_row_ + j / 64] |= std::uint64_t(1) << (j % 64);
    }
    void set_range(std::size_t i, std::size_t j1, std::size_t j2) {  // inclusive
        for (std::size_t j = j1; j <= j2; ++j) set(i, j);
    }

    std::size_t count() const {
        std::size_t n = 0;
        for (std::uint64_t w : bits_) n += static_cast<std::size_t>(__builtin_popcountll(w));
        return n;
    }

    bool subset_of(const Grid& o) const {
        require_same_shape(o);
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i] & ~o.bits_[i]) return false;
        return true;
    }

    bool operator==(const Grid& o) const {
        return k_ == o.k_ && src_ == o.src_ && dst_ == o.dst_ && bits_ == o.bits_;
    }

    void require_same_shape(const Grid& o) const {
        if (k_ != o.k_ || rows() != o.rows() || cols() != o.cols())
            throw Error(Err::DimensionMismatch, "grids have different shapes");
    }

  private:
    int k_;
    Space src_, dst_;
    std::vector<GridBox> rows_boxes_, cols_boxes_;
    std::size_t words_per_row_;
    std::vector<std::uint64_t> bits_;
};

inline constexpr std::size_t kDefaultBoxGuard = 4096;

/// Exact characteristic outer cover: a box is set iff the closed box meets
/// the relation (touching counts).
inline Grid rasterize(const Rel& f, int k, std::size_t guard = kDefaultBoxGuard) {
    if (k < 0) throw Error(Err::Parse, "resolution exponent must be >= 0");
    Grid g(k, f.src(), f.dst(), space_boxes(f.src(), k, guard), space_boxes(f.dst(), k, guard));
    const auto& rows = g.row_boxes();
    const auto& cols = g.col_boxes();
    for (const Cell& c : f.cells()) {
        Rat cx1 = c.x_lo(), cx2 = c.x_hi();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].hi < cx1 || rows[i].lo > cx2) continue;
            Rat w1 = rat_max(rows[i].lo, cx1);
            Rat w2 = rat_min(rows[i].hi, cx2);
            Rat ylo, yhi;
            if (w1 == w2) {
                auto s = c.y_slice(w1);
                ylo = s->first;
                yhi = s->second;
            } else {
                ylo = envelope_min(c, w1, w2).value;
                yhi = envelope_max(c, w1, w2).value;
            }
            // contiguous column range meeting [ylo, yhi]
            std::size_t j1 = cols.size(), j2 = 0;
            {
                std::size_t lo = 0, hi = cols.size();
                while (lo < hi) {  // first j with cols[j].hi >= ylo
                    std::size_t mid = (lo + hi) / 2;
                    if (cols[mid].hi >= ylo) hi = mid;
                    else lo = mid + 1;
                }
                j1 = lo;
                lo = 0;
                hi = cols.size();
                while (lo < hi) {  // first j with cols[j].lo > yhi
                    std::size_t mid = (lo + hi) / 2;
                    if (cols[mid].lo > yhi) hi = mid;
                    else lo = mid + 1;
                }
                j2 = lo;
            }
            if (j1 < j2) g.set_range(i, j1, j2 - 1);
        }
    }
    return g;
}

/// Boolean matrix product; deterministic.
inline Grid grid_compose(const Grid& g, const Grid& f) {
    if (f.cols() != g.rows() || f.k() != g.k() || f.dst() != g.src())
        throw Error(Err::DimensionMismatch, "inner grid dimensions do not match");
    Grid out(f.k(), f.src(), g.dst(), f.row_boxes(), g.col_boxes());
    std::size_t wpr_f = f.words_per_row();
    std::size_t wpr_o = out.words_per_row();
    std::vector<std::uint64_t>& ob = out.mutable_words();
    const std::vector<std::uint64_t>& fb = f.words();
    const std::vector<std::uint64_t>& gb = g.words();
    for (std::size_t i = 0; i < f.rows(); ++i) {
        std::uint64_t* orow = ob.data() + i * wpr_o;
        for (std::size_t wm = 0; wm < wpr_f; ++wm) {
            std::uint64_t w = fb[i * wpr_f + wm];
            while (w) {
                unsigned bit = static_cast<unsigned>(__builtin_ctzll(w));
                w &= w - 1;
                const std::uint64_t* grow = gb.data() + (wm * 64 + bit) * wpr_o;
                for (std::size_t t = 0; t < wpr_o; ++t) orow[t] |= grow[t];
            }
        }
    }
    return out;
}

namespace detail {

struct ScaledRect {
    long long x1, x2, y1, y2;  // closed, scaled to a common integer lattice
};

inline long long scale_to_ll(const Rat& v, const Int& denom) {
    Rat scaled = v * Rat(denom);
    if (denominator(scaled) != 1)
        throw Error(Err::Internal, "box bound does not live on the common lattice");
    return numerator(scaled).convert_to<long long>();
}

/// Set boxes as merged per-row rectangles on the scaled lattice.
inline std::vector<ScaledRect> scaled_rects(const Grid& g, const Int& denom) {
    std::vector<ScaledRect> out;
    for (std::size_t i = 0; i < g.rows(); ++i) {
        long long rx1 = scale_to_ll(g.row_boxes()[i].lo, denom);
        long long rx2 = scale_to_ll(g.row_boxes()[i].hi, denom);
        std::size_t j = 0;
        while (j < g.cols()) {
            if (!g.get(i, j)) { ++j; continue; }
            std::size_t st = j;
            while (j < g.cols() && g.get(i, j)) ++j;
            out.push_back({rx1, rx2, scale_to_ll(g.col_boxes()[st].lo, denom),
                           scale_to_ll(g.col_boxes()[j - 1].hi, denom)});
        }
    }
    return out;
}

/// Whether the closed rect `a` is covered by the union of the `bs` dilated
/// by r on every side. Slab sweep over the x events inside `a`.
inline bool rect_covered(const ScaledRect& a, const std::vector<ScaledRect>& bs, long long r) {
    std::vector<const ScaledRect*> cands;
    for (const ScaledRect& b : bs) {
        if (b.x1 - r <= a.x2 && b.x2 + r >= a.x1 && b.y1 - r <= a.y2 && b.y2 + r >= a.y1)
            cands.push_back(&b);
    }
    std::vector<long long> xs{a.x1, a.x2};
    for (const ScaledRect* b : cands) {
        if (b->x1 - r > a.x1 && b->x1 - r < a.x2) xs.push_back(b->x1 - r);
        if (b->x2 + r > a.x1 && b->x2 + r < a.x2) xs.push_back(b->x2 + r);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<std::pair<long long, long long>> ivs;
    auto slab_ok = [&](long long u, long long v) {
        ivs.clear();
        for (const ScaledRect* b : cands)
            if (b->x1 - r <= u && b->x2 + r >= v) ivs.push_back({b->y1 - r, b->y2 + r});
        if (ivs.empty()) return false;
        std::sort(ivs.begin(), ivs.end());
        long long pos = a.y1;
        for (const auto& iv : ivs) {
            if (iv.first > pos) return false;  // uncovered gap just above pos
            pos = std::max(pos, iv.second);
            if (pos >= a.y2) return true;
        }
        return pos >= a.y2;
    };
    if (xs.size() == 1) return slab_ok(xs[0], xs[0]);
    for (std::size_t s = 0; s + 1 < xs.size(); ++s)
        if (!slab_ok(xs[s], xs[s + 1])) return false;
    return true;
}

inline bool all_covered(const std::vector<ScaledRect>& as, const std::vector<ScaledRect>& bs,
                        long long r) {
    for (const ScaledRect& a : as)
        if (!rect_covered(a, bs, r)) return false;
    return true;
}

}  // namespace detail

/// Exact Hausdorff distance between two box unions in the max-coordinate
/// metric, computed as the least r with each union inside the r-dilation of
/// the other. The grids must cover the same spaces; resolutions may differ
/// (a coarse cover is routinely compared against a finer one).
inline Rat grid_distance(const Grid& a, const Grid& b) {
    if (a.src() != b.src() || a.dst() != b.dst())
        throw Error(Err::DimensionMismatch, "grids cover different spaces");
    Int denom = 1;
    auto fold = [&](const std::vector<GridBox>& boxes) {
        for (const GridBox& x : boxes) {
            denom = boost::multiprecision::lcm(denom, denominator(x.lo));
            denom = boost::multiprecision::lcm(denom, denominator(x.hi));
        }
    };
    fold(a.row_boxes());
    fold(a.col_boxes());
    fold(b.row_boxes());
    fold(b.col_boxes());
    denom *= 2;  // optimal radii live on the half lattice
    if (denom > (Int(1) << 40))
        throw Error(Err::ResolutionTooLarge, "box bounds exceed the fast distance range");
    std::vector<detail::ScaledRect> ra = detail::scaled_rects(a, denom);
    std::vector<detail::ScaledRect> rb = detail::scaled_rects(b, denom);
    if (ra.empty() && rb.empty()) return Rat(0);
    if (ra.empty() || rb.empty())
        throw Error(Err::Internal, "hausdorff distance to an empty box union");
    long long span = 0;
    for (const auto& v : {ra, rb})
        for (const detail::ScaledRect& x : v)
            span = std::max({span, std::llabs(x.x1), std::llabs(x.x2), std::llabs(x.y1),
                             std::llabs(x.y2)});
    long long lo = 0, hi = 4 * span + 1;
    while (lo < hi) {
        long long mid = lo + (hi - lo) / 2;
        if (detail::all_covered(ra, rb, mid) && detail::all_covered(rb, ra, mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    return Rat(Int(lo), denom);
}

/// Exact upsampling to a finer resolution K >= k; the box union is unchanged
/// because dyadic boxes nest within their component anchor.
inline Grid refine(const Grid& g, int K, std::size_t guard = kDefaultBoxGuard) {
    if (K < g.k()) throw Error(Err::Parse, "refine target must not be coarser");
    Grid out(K, g.src(), g.dst(), space_boxes(g.src(), K, guard), space_boxes(g.dst(), K, guard));
    // map fine boxes to coarse indices by midpoint containment
    auto parent_index = [](const std::vector<GridBox>& coarse, const GridBox& fine) {
        Rat mid = (fine.lo + fine.hi) / 2;
        std::size_t lo = 0, hi = coarse.size();
        while (lo + 1 < hi) {
            std::size_t m = (lo + hi) / 2;
            if (coarse[m].lo <= mid) lo = m;
            else hi = m;
        }
        return lo;
    };
    std::vector<std::size_t> rmap, cmap;
    for (const GridBox& b : out.row_boxes()) rmap.push_back(parent_index(g.row_boxes(), b));
    for (const GridBox& b : out.col_boxes()) cmap.push_back(parent_index(g.col_boxes(), b));
    for (std::size_t i = 0; i < out.rows(); ++i)
        for (std::size_t j = 0; j < out.cols(); ++j)
            if (g.get(rmap[i], cmap[j])) out.set(i, j);
    return out;
}

// ---------------------------------------------------------------------------
// Brute-force finite-relation oracle.

/// A relation on a ground set of at most 8 points, one bitmask row per point.
struct FiniteRel {
    int n = 0;
    std::array<std::uint8_t, 8> row{};

    std::uint8_t full() const { return static_cast<std::uint8_t>((1u << n) - 1); }
};

inline FiniteRel finite_identity(int n) {
    FiniteRel r;
    r.n = n;
    for (int i = 0; i < n; ++i) r.row[i] = static_cast<std::uint8_t>(1u << i);
    return r;
}

inline FiniteRel finite_compose(const FiniteRel& g, const FiniteRel& f) {
    FiniteRel r;
    r.n = f.n;
    for (int i = 0; i < f.n; ++i) {
        std::uint8_t acc = 0;
        for (int y = 0; y < f.n; ++y)
            if (f.row[i] & (1u << y)) acc |= g.row[y];
        r.row[i] = acc;
    }
    return r;
}

inline FiniteRel finite_inverse(const FiniteRel& f) {
    FiniteRel r;
    r.n = f.n;
    for (int i = 0; i < f.n; ++i)
        for (int j = 0; j < f.n; ++j)
            if (f.row[i] & (1u << j)) r.row[j] |= static_cast<std::uint8_t>(1u << i);
    return r;
}

inline std::uint8_t finite_image(const FiniteRel& f, std::uint8_t a) {
    std::uint8_t acc = 0;
    for (int i = 0; i < f.n; ++i)
        if (a & (1u << i)) acc |= f.row[i];
    return acc;
}

inline std::uint8_t finite_preimage(const FiniteRel& f, std::uint8_t b) {
    std::uint8_t acc = 0;
    for (int i = 0; i < f.n; ++i)
        if (f.row[i] & b) acc |= static_cast<std::uint8_t>(1u << i);
    return acc;
}

inline std::uint8_t finite_costar(const FiniteRel& f, std::uint8_t b) {
    std::uint8_t acc = 0;
    for (int i = 0; i < f.n; ++i)
        if ((f.row[i] & ~b & f.full()) == 0) acc |= static_cast<std::uint8_t>(1u << i);
    return acc;
}

struct OracleReport {
    long trials = 0;
    long failures = 0;
    std::vector<std::string> messages;
};

/// Randomized brute-force verification of the relation-algebra identities on
/// finite ground sets. Any failure is a build-stopping defect.
inline OracleReport finite_oracle(std::uint64_t seed, long trials, int max_n = 5) {
    if (max_n > 8) throw Error(Err::Parse, "finite oracle ground set capped at 8");
    std::mt19937_64 rng(seed);
    OracleReport rep;
    auto fail = [&](const std::string& m) {
        ++rep.failures;
        if (rep.messages.size() < 16) rep.messages.push_back(m);
    };
    for (long t = 0; t < trials; ++t) {
        ++rep.trials;
        int n = 2 + static_cast<int>(rng() % static_cast<unsigned>(max_n - 1));
        auto rnd_rel = [&] {
            FiniteRel r;
            r.n = n;
            for (int i = 0; i < n; ++i)
                r.row[i] = static_cast<std::uint8_t>(rng() & r.full());
            return r;
        };
        FiniteRel F = rnd_rel(), G = rnd_rel(), H = rnd_rel();
        std::uint8_t A = static_cast<std::uint8_t>(rng() & F.full());
        std::uint8_t B = static_cast<std::uint8_t>(rng() & F.full());
        std::uint8_t B2 = static_cast<std::uint8_t>(rng() & F.full());
        FiniteRel GF = finite_compose(G, F);

        std::uint8_t cs = finite_costar(F, B);
        if ((cs & ~(finite_preimage(F, B) | finite_costar(F, 0))) != 0)
            fail("costar containment failed");
        if (finite_preimage(F, B | B2) != (finite_preimage(F, B) | finite_preimage(F, B2)))
            fail("preimage does not distribute over union");
        if (finite_costar(F, B & B2) != (finite_costar(F, B) & finite_costar(F, B2)))
            fail("costar does not distribute over intersection");
        if (finite_image(GF, A) != finite_image(G, finite_image(F, A)))
            fail("image of composition failed");
        FiniteRel lhs = finite_inverse(GF);
        FiniteRel rhs = finite_compose(finite_inverse(F), finite_inverse(G));
        if (lhs.row != rhs.row) fail("inverse of composition failed");
        if (finite_preimage(GF, B) != finite_preimage(F, finite_preimage(G, B)))
            fail("preimage of composition failed");
        if (finite_costar(GF, B) != finite_costar(F, finite_costar(G, B)))
            fail("costar of composition failed");
        bool m1 = (finite_image(F, A) & B) != 0;
        bool m2 = (A & finite_preimage(F, B)) != 0;
        bool m3 = false;
        for (int i = 0; i < n && !m3; ++i)
            if ((A & (1u << i)) && (F.row[i] & B)) m3 = true;
        if (m1 != m2 || m2 != m3) fail("meeting criterion failed");
        FiniteRel id = finite_identity(n);
        if (finite_compose(id, F).row != F.row || finite_compose(F, id).row != F.row)
            fail("identity law failed");
        auto fpow = [&](const FiniteRel& base, int e) {
            FiniteRel acc = finite_identity(n);
            for (int i = 0; i < e; ++i) acc = finite_compose(base, acc);
            return acc;
        };
        int m = static_cast<int>(rng() % 3), k2 = static_cast<int>(rng() % 3);
        if (fpow(F, m + k2).row != finite_compose(fpow(F, m), fpow(F, k2)).row)
            fail("iterate additivity failed");
        FiniteRel Fi = finite_inverse(F);
        if (fpow(Fi, m + k2).row != finite_compose(fpow(Fi, m), fpow(Fi, k2)).row)
            fail("negative iterate additivity failed");
        if (finite_compose(finite_compose(H, G), F).row !=
            finite_compose(H, finite_compose(G, F)).row)
            fail("associativity failed");
    }
    return rep;
}

}  // namespace relcalc
