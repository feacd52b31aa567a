#pragma once

#include <map>
#include <vector>

#include "relcalc/errors.hpp"
#include "relcalc/function.hpp"
#include "relcalc/relation.hpp"
#include "relcalc/suitable.hpp"

namespace relcalc {

/// Orbit prefix of the densely defined map carried by a suitable relation.
struct OrbitResult {
    enum class Status { Completed, Escaped, Periodic };
    Rat start;
    std::vector<Rat> points;  // starts with `start`
    Status status;
    long escaped_step = -1;  // step whose fiber was not a singleton
    long preperiod = 0, period = 0;
};

/// Follows singleton fibers from x. Periodicity is certified by a repeated
/// point; hitting a non-singleton or empty fiber escapes; n_max steps without
/// either is Completed (inconclusive about the infinite orbit by design).
inline OrbitResult orbit(const Rel& f, const Rat& x, long n_max, bool backward = false) {
    Report r = suitability_report(f);
    if (!r.suitable) throw Error(Err::NotSuitable, "orbit requires a suitable relation");
    if (backward && !r.iso)
        throw Error(Err::NotIsomorphism, "backward orbit requires an isomorphism");
    if (!f.src().contains(x)) throw Error(Err::PointOutsideSpace, "orbit start outside the space");

    Rel step = backward ? inverse(f) : f;
    OrbitResult out{x, {x}, OrbitResult::Status::Completed, -1, 0, 0};
    std::map<Rat, long> seen{{x, 0}};
    for (long k = 0; k < n_max; ++k) {
        FSet fib = fiber(step, out.points.back());
        const auto& parts = fib.parts();
        if (parts.size() != 1 || !parts[0].is_point()) {
            out.status = OrbitResult::Status::Escaped;
            out.escaped_step = k;
            return out;
        }
        Rat next = parts[0].lo;
        out.points.push_back(next);
        auto it = seen.find(next);
        if (it != seen.end()) {
            out.status = OrbitResult::Status::Periodic;
            out.preperiod = it->second;
            out.period = static_cast<long>(out.points.size()) - 1 - it->second;
            return out;
        }
        seen.emplace(next, static_cast<long>(out.points.size()) - 1);
    }
    return out;
}

/// Membership of a finite prefix in the sample-path space: every consecutive
/// pair must lie in F.
inline bool path_check(const Rel& f, const std::vector<Rat>& prefix) {
    for (const Rat& z : prefix)
        if (!f.src().contains(z))
            throw Error(Err::PointOutsideSpace, "path point outside the space");
    for (std::size_t i = 0; i + 1 < prefix.size(); ++i)
        if (!fiber(f, prefix[i]).contains(prefix[i + 1])) return false;
    return true;
}

struct PairRow {
    long n;
    Rel iterate;
    Rel suitable;
    std::vector<Cell> gap;  // canonical cells of F^n not contained in F^{.n}
};

/// Table of plain versus suitable iterates with the exact anomalous gap.
inline std::vector<PairRow> pair_table(const Rel& f, long n_min, long n_max) {
    Report r = suitability_report(f);
    if (!r.suitable) throw Error(Err::NotSuitable, "pair table requires a suitable relation");
    if (n_min < 0 && !r.iso)
        throw Error(Err::NotIsomorphism, "negative rows require an isomorphism");
    if (n_min > n_max) throw Error(Err::Parse, "empty row range");
    std::vector<PairRow> rows;
    for (long n = n_min; n <= n_max; ++n) {
        Rel it = iterate(f, n);
        Rel su = suitable_iterate(f, n);
        std::vector<Cell> gap;
        for (const Cell& c : it.cells())
            if (!rel_subset(Rel(it.src(), it.dst(), {c}), su)) gap.push_back(c);
        rows.push_back({n, std::move(it), std::move(su), std::move(gap)});
    }
    return rows;
}

/// (h x h)(G) = h o G o h^{-1} for a total continuous map h.
inline Rel push_forward(const Fun& h, const Rel& g) {
    if (!h.total()) throw Error(Err::NotTotal, "push_forward requires a total map");
    if (!h.continuous()) throw Error(Err::NotContinuous, "push_forward requires a continuous map");
    if (h.src() != g.src() || g.src() != g.dst())
        throw Error(Err::SpaceMismatch, "push_forward requires h.src == g.src == g.dst");
    Rel hg = h.graph_closure();
    return compose(hg, compose(g, inverse(hg)));
}

/// Whether h maps G to F, i.e. (h x h)(G) is contained in F. The equivalent
/// characterization h o G inside F o h is computed as well and any
/// disagreement is a hard error.
inline bool maps_relation(const Fun& h, const Rel& g, const Rel& f) {
    if (f.src() != f.dst() || h.dst() != f.src())
        throw Error(Err::SpaceMismatch, "maps_relation requires h : Y -> X with F on X");
    bool direct = rel_subset(push_forward(h, g), f);
    Rel hg = h.graph_closure();
    bool via_graphs = rel_subset(compose(hg, g), compose(f, hg));
    if (direct != via_graphs)
        throw Error(Err::Internal, "conjugacy criteria disagree");
    return direct;
}

/// The commuting-square law for suitable composition: h.G == F.h for an
/// almost open h; verified jointly against maps_relation.
inline bool commuting_check(const Fun& h, const Rel& g, const Rel& f) {
    Rel hg = h.graph_closure();
    if (!suitability_report(hg).suitable)
        throw Error(Err::NotSuitable, "conjugating map must be almost open");
    if (!suitability_report(g).suitable || !suitability_report(f).suitable)
        throw Error(Err::NotSuitable, "commuting check requires suitable relations");
    bool eq = suitable_compose(hg, g) == suitable_compose(f, hg);
    if (eq != maps_relation(h, g, f))
        throw Error(Err::Internal, "commuting square disagrees with the mapping criterion");
    return eq;
}

}  // namespace relcalc
