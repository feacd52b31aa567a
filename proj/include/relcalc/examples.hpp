#pragma once

#include <functional>
#include <string>
#include <vector>

#include "relcalc/dynamics.hpp"
#include "relcalc/function.hpp"
#include "relcalc/relation.hpp"
#include "relcalc/suitable.hpp"

namespace relcalc::examples {

/// The flip relation on [0,1]: each half flipped about its midpoint, with the
/// two-point fiber {0,1} at the shared discontinuity x = 1/2.
inline Rel interval_flip() {
    Space I = Space::unit();
    return Rel(I, I,
               {Cell::segment({0, Rat(1, 2)}, {Rat(1, 2), 0}),
                Cell::segment({Rat(1, 2), 1}, {1, Rat(1, 2)})});
}

/// The two single-valued selections of interval_flip: the discontinuity is
/// assigned to the left branch (which = 0) or the right branch (which = 1).
inline Fun interval_flip_selection(int which) {
    Space I = Space::unit();
    if (which == 0)
        return Fun(I, I,
                   {{{Rat(0), Rat(1, 2), true, true}, -1, Rat(1, 2)},
                    {{Rat(1, 2), Rat(1), false, true}, -1, Rat(3, 2)}});
    return Fun(I, I,
               {{{Rat(0), Rat(1, 2), true, false}, -1, Rat(1, 2)},
                {{Rat(1, 2), Rat(1), true, true}, -1, Rat(3, 2)}});
}

/// interval_flip extended over [-1,1] by crushing [-1,0] onto the point 1/2.
inline Rel crushing_extension() {
    Space X = Space::interval(-1, 1);
    return Rel(X, X,
               {Cell::segment({-1, Rat(1, 2)}, {0, Rat(1, 2)}),
                Cell::segment({0, Rat(1, 2)}, {Rat(1, 2), 0}),
                Cell::segment({Rat(1, 2), 1}, {1, Rat(1, 2)})});
}

/// Square of interval_flip: the identity plus the two anomalous corners.
inline Rel flip_square_expected() {
    Space I = Space::unit();
    return Rel(I, I,
               {Cell::segment({0, 0}, {1, 1}), Cell::point(0, 1), Cell::point(1, 0)});
}

/// Square of crushing_extension: identity on [0,1], the crushed strip doubled
/// onto {0,1}, and one stray corner.
inline Rel crushing_square_expected() {
    Space X = Space::interval(-1, 1);
    return Rel(X, X,
               {Cell::segment({0, 0}, {1, 1}), Cell::segment({-1, 0}, {0, 0}),
                Cell::segment({-1, 1}, {0, 1}), Cell::point(1, 0)});
}

/// The two-interval space [-1/2,0] u [1,3/2] covering [0,1] by shifts.
inline Space two_branch_space() { return Space({{Rat(-1, 2), 0}, {1, Rat(3, 2)}}); }

/// The irreducible two-branch covering map onto [0,1]: x+1/2 and x-1/2.
inline Fun two_branch_cover() {
    return Fun(two_branch_space(), Space::unit(),
               {{{Rat(-1, 2), Rat(0), true, true}, 1, Rat(1, 2)},
                {{Rat(1), Rat(3, 2), true, true}, 1, Rat(-1, 2)}});
}

/// interval_flip composed (suitably) after the two-branch cover: -x / 2-x.
inline Fun two_branch_composed() {
    return Fun(two_branch_space(), Space::unit(),
               {{{Rat(-1, 2), Rat(0), true, true}, -1, 0},
                {{Rat(1), Rat(3, 2), true, true}, -1, 2}});
}

/// The flip homeomorphism on the two-branch space: each interval flipped
/// about its own midpoint.
inline Fun two_branch_flip() {
    Space Y = two_branch_space();
    return Fun(Y, Y,
               {{{Rat(-1, 2), Rat(0), true, true}, -1, Rat(-1, 2)},
                {{Rat(1), Rat(3, 2), true, true}, -1, Rat(5, 2)}});
}

struct ExampleResult {
    std::string name;
    bool pass;
    std::string detail;
};

/// Runs every embedded worked example against its expected exact output.
inline std::vector<ExampleResult> run_builtin_examples() {
    std::vector<ExampleResult> out;
    auto check = [&](const std::string& name, const std::function<bool()>& body) {
        try {
            bool ok = body();
            out.push_back({name, ok, ok ? "ok" : "mismatch"});
        } catch (const std::exception& e) {
            out.push_back({name, false, e.what()});
        }
    };

    check("flip-closure", [] {
        Rel f01 = interval_flip();
        return closure_of_function(interval_flip_selection(0)) == f01 &&
               closure_of_function(interval_flip_selection(1)) == f01;
    });

    check("flip-square-compose", [] {
        Rel f01 = interval_flip();
        return compose(f01, f01) == flip_square_expected();
    });

    check("crush-extension-compose", [] {
        Rel ft = crushing_extension();
        Rel sq = compose(ft, ft);
        if (sq != crushing_square_expected()) return false;
        auto um = unique_minimal(sq);
        if (!std::holds_alternative<MinimalError>(um)) return false;
        const MinimalError& e = std::get<MinimalError>(um);
        if (e.kind != MinimalError::Kind::NonUniqueMinimal) return false;
        FSet strip = FSet::interval(Space::interval(-1, 1), -1, 0, true, false);
        return !e.witness.is_empty() && e.witness.subset_of(strip);
    });

    check("two-branch-compose-minimal", [] {
        Rel f01 = interval_flip();
        Rel cover = two_branch_cover().graph_closure();
        Rel bullet = suitable_compose(f01, cover);
        if (bullet != two_branch_composed().graph_closure()) return false;
        Rel plain = compose(f01, cover);
        Rel extras(plain.src(), plain.dst(), {Cell::point(0, 1), Cell::point(1, 0)});
        return plain == rel_union(bullet, extras);
    });

    check("two-branch-inverse-identities", [] {
        Rel cover = two_branch_cover().graph_closure();
        return compose(cover, inverse(cover)) == Rel::identity(Space::unit()) &&
               suitable_compose(inverse(cover), cover) == Rel::identity(two_branch_space());
    });

    check("flip-cover-conjugacy", [] {
        Fun h = two_branch_cover();
        Rel g = two_branch_flip().graph_closure();
        Rel f01 = interval_flip();
        return push_forward(h, g) == f01 && maps_relation(h, g, f01) &&
               commuting_check(h, g, f01);
    });

    check("flip-orbit", [] {
        Rel f01 = interval_flip();
        OrbitResult a = orbit(f01, Rat(1, 3), 100, false);
        OrbitResult b = orbit(f01, Rat(1, 2), 10, false);
        OrbitResult c = orbit(f01, Rat(3, 4), 5, false);
        return a.status == OrbitResult::Status::Periodic && a.preperiod == 0 && a.period == 2 &&
               b.status == OrbitResult::Status::Escaped && b.escaped_step == 0 &&
               c.status == OrbitResult::Status::Periodic && c.preperiod == 0 && c.period == 1;
    });

    return out;
}

}  // namespace relcalc::examples
