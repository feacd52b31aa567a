#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "relcalc/examples.hpp"
#include "relcalc/relation.hpp"
#include "testutil.hpp"

using namespace relcalc;
using testutil::Rng;

namespace {
const Space I = Space::unit();
const Rel F01 = examples::interval_flip();
const Rel Ft01 = examples::crushing_extension();
}  // namespace

TEST_CASE("squaring the flip relation recovers the identity plus two corners") {
    Rel sq = compose(F01, F01);
    CHECK(sq == examples::flip_square_expected());
    CHECK(compose(Ft01, Ft01) == examples::crushing_square_expected());
}

TEST_CASE("identity is neutral for composition") {
    Rng rng(3);
    for (int t = 0; t < 25; ++t) {
        Rel f = testutil::rand_rel(rng);
        CHECK(compose(Rel::identity(I), f) == f);
        CHECK(compose(f, Rel::identity(I)) == f);
    }
}

TEST_CASE("inverse swaps coordinates and is an involution") {
    CHECK(equals(inverse(F01), F01));  // both branches sit on slope -1 lines
    CHECK(inverse(Rel::identity(I)) == Rel::identity(I));
    Rel rect(I, I, {Cell::segment({0, Rat(1, 2)}, {1, Rat(1, 2)})});
    Rel rect_t(I, I, {Cell::segment({Rat(1, 2), 0}, {Rat(1, 2), 1})});
    CHECK(inverse(rect) == rect_t);
    Rng rng(5);
    for (int t = 0; t < 25; ++t) {
        Rel f = testutil::rand_rel(rng);
        CHECK(inverse(inverse(f)) == f);
    }
}

TEST_CASE("image of flagged sets is exact") {
    CHECK(image(F01, FSet::interval(I, 0, Rat(1, 4))) == FSet::interval(I, Rat(1, 4), Rat(1, 2)));
    CHECK(image(F01, FSet::point(I, Rat(1, 2))) ==
          FSet::point(I, 0).unite(FSet::point(I, 1)));
    CHECK(image(F01, FSet::empty(I)).is_empty());
}

TEST_CASE("preimage through the inverse") {
    CHECK(preimage(F01, FSet::interval(I, 0, Rat(1, 4))) ==
          FSet::interval(I, Rat(1, 4), Rat(1, 2)));
    FSet b = FSet::interval(I, 0, Rat(1, 4)).unite(FSet::interval(I, Rat(3, 4), 1));
    CHECK(preimage(F01, b) == FSet::interval(I, Rat(1, 4), Rat(3, 4)));
    CHECK(preimage(F01, FSet::full(I)) == FSet::full(I));
}

TEST_CASE("costar through flagged complements") {
    CHECK(costar(F01, FSet::interval(I, Rat(1, 4), Rat(3, 4), false, false)) ==
          FSet::interval(I, 0, Rat(1, 4), true, false)
              .unite(FSet::interval(I, Rat(3, 4), 1, false, true)));
    CHECK(costar(F01, FSet::empty(I)).is_empty());  // full domain
    CHECK(costar(F01, FSet::full(I)) == FSet::full(I));
}

TEST_CASE("iterates of the flip relation alternate") {
    CHECK(iterate(F01, 2) == examples::flip_square_expected());
    CHECK(iterate(F01, 3) == F01);
    CHECK(iterate(F01, 0) == Rel::identity(I));
    CHECK(iterate(F01, -2) == examples::flip_square_expected());
    Rel non_endo(I, Space::interval(0, 2), {Cell::segment({0, 0}, {1, 2})});
    CHECK_THROWS_AS(iterate(non_endo, 2), Error);
}

TEST_CASE("fibers are exact closed sets") {
    CHECK(fiber(F01, Rat(1, 2)) == FSet::point(I, 0).unite(FSet::point(I, 1)));
    CHECK(fiber(Ft01, Rat(-1, 2)) == FSet::point(Space::interval(-1, 1), Rat(1, 2)));
    Rel box(I, I, {Cell::from_points({{Rat(1, 4), Rat(1, 4)},
                                      {Rat(1, 2), Rat(1, 4)},
                                      {Rat(1, 2), Rat(1, 2)},
                                      {Rat(1, 4), Rat(1, 2)}})});
    CHECK(fiber(box, Rat(1, 3)) == FSet::interval(I, Rat(1, 4), Rat(1, 2)));
    CHECK_THROWS_AS(fiber(F01, Rat(3, 2)), Error);
}

TEST_CASE("restrict clips cells to closed boxes") {
    // the strip x <= 1/2 keeps the left branch plus the right branch's
    // boundary point (1/2, 1)
    Rel left = restrict(F01, FSet::interval(I, 0, Rat(1, 2)), FSet::full(I));
    CHECK(left == Rel(I, I,
                      {Cell::segment({0, Rat(1, 2)}, {Rat(1, 2), 0}), Cell::point(Rat(1, 2), 1)}));
    CHECK(restrict(F01, FSet::interval(I, 0, Rat(3, 8)), FSet::full(I)) ==
          Rel(I, I, {Cell::segment({0, Rat(1, 2)}, {Rat(3, 8), Rat(1, 8)})}));
    CHECK(restrict(F01, FSet::full(I), FSet::full(I)) == F01);
    CHECK(restrict(Rel::identity(I), FSet::point(I, Rat(1, 2)), FSet::full(I)) ==
          Rel(I, I, {Cell::point(Rat(1, 2), Rat(1, 2))}));
    CHECK_THROWS_AS(restrict(F01, FSet::interval(I, 0, Rat(1, 2), true, false), FSet::full(I)),
                    Error);
}

TEST_CASE("semantic equality is representation independent") {
    Rel split(I, I,
              {Cell::segment({0, Rat(1, 2)}, {Rat(1, 4), Rat(1, 4)}),
               Cell::segment({Rat(1, 4), Rat(1, 4)}, {Rat(1, 2), 0}),
               Cell::segment({Rat(1, 2), 1}, {Rat(3, 4), Rat(3, 4)}),
               Cell::segment({Rat(3, 4), Rat(3, 4)}, {1, Rat(1, 2)})});
    CHECK(equals(split, F01));
    Rel extra = rel_union(Rel::identity(I), Rel(I, I, {Cell::point(0, 1)}));
    CHECK_FALSE(equals(Rel::identity(I), extra));
    CHECK_THROWS_AS(equals(F01, Ft01), Error);
}

TEST_CASE("canonical form is idempotent") {
    Rng rng(17);
    for (int t = 0; t < 40; ++t) {
        Rel f = testutil::rand_rel(rng);
        Rel again(f.src(), f.dst(), f.cells());
        CHECK(again == f);
    }
}

TEST_CASE("canonical form survives duplicated and split representations") {
    Rng rng(19);
    for (int t = 0; t < 25; ++t) {
        Rel f = testutil::rand_rel(rng);
        // duplicating every cell changes nothing
        std::vector<Cell> doubled = f.cells();
        doubled.insert(doubled.end(), f.cells().begin(), f.cells().end());
        CHECK(Rel(f.src(), f.dst(), doubled) == f);
        // splitting each segment at a random interior point changes nothing
        std::vector<Cell> split;
        for (const Cell& c : f.cells()) {
            if (c.kind != Cell::Kind::Segment) {
                split.push_back(c);
                continue;
            }
            Rat t2(1 + static_cast<long>(rng() % 6), 8);
            Pt mid{c.v[0].x + t2 * (c.v[1].x - c.v[0].x), c.v[0].y + t2 * (c.v[1].y - c.v[0].y)};
            split.push_back(Cell::segment(c.v[0], mid));
            split.push_back(Cell::segment(mid, c.v[1]));
        }
        CHECK(Rel(f.src(), f.dst(), split) == f);
    }
}

TEST_CASE("composition fibers match imaged fibers pointwise") {
    Rng rng(21);
    for (int t = 0; t < 30; ++t) {
        Rel f = testutil::rand_rel(rng);
        Rel g = testutil::rand_rel(rng);
        Rel gf = compose(g, f);
        for (int s = 0; s < 6; ++s) {
            Rat x = testutil::rand_rat01(rng, 48);
            CHECK(fiber(gf, x) == image(g, fiber(f, x)));
        }
        // including the structural breakpoints of f itself
        for (const Rat& b : f.decomp().breaks) CHECK(fiber(gf, b) == image(g, fiber(f, b)));
    }
}

TEST_CASE("epsilon bands") {
    CHECK(Rel::v_band(I, 0) == Rel::identity(I));
    Rel square(I, I, {Cell::from_points({{0, 0}, {1, 0}, {1, 1}, {0, 1}})});
    CHECK(Rel::v_band(I, 1) == square);
    CHECK(image(Rel::v_band(I, Rat(1, 4)), FSet::point(I, Rat(1, 2))) ==
          FSet::interval(I, Rat(1, 4), Rat(3, 4)));
    CHECK_THROWS_AS(Rel::v_band(I, -1), Error);
}

TEST_CASE("modulus returns a verified delta") {
    CHECK(modulus(Rel::identity(I), FSet::interval(I, 0, Rat(1, 2)), Rat(1, 8)) == Rat(1, 8));
    Rat d = modulus(F01, FSet::point(I, Rat(1, 2)), Rat(1, 4));
    CHECK(d == Rat(1, 4));
    CHECK(image(F01, FSet::point(I, Rat(1, 2)).thicken(d, false))
              .subset_of(image(F01, FSet::point(I, Rat(1, 2))).thicken(Rat(1, 4), false)));
    Space big = Space::interval(-1, 1);
    Rat d2 = modulus(Ft01, FSet::interval(big, -1, 0), Rat(1, 8));
    CHECK(d2 > 0);
    CHECK(d2 <= Rat(1, 8));
}

TEST_CASE("image of composition equals composed images") {
    Rng rng(23);
    for (int t = 0; t < 60; ++t) {
        Rel f = testutil::rand_rel(rng);
        Rel g = testutil::rand_rel(rng);
        FSet a = testutil::rand_fset(rng, I);
        CHECK(image(compose(g, f), a) == image(g, image(f, a)));
    }
}

TEST_CASE("inverse and preimage laws for composition") {
    Rng rng(29);
    for (int t = 0; t < 60; ++t) {
        Rel f = testutil::rand_rel(rng);
        Rel g = testutil::rand_rel(rng);
        CHECK(inverse(compose(g, f)) == compose(inverse(f), inverse(g)));
        FSet b = testutil::rand_fset(rng, I);
        CHECK(preimage(compose(g, f), b) == preimage(f, preimage(g, b)));
        CHECK(costar(compose(g, f), b) == costar(f, costar(g, b)));
    }
}

TEST_CASE("preimage distributes over unions, costar over intersections") {
    Rng rng(31);
    for (int t = 0; t < 60; ++t) {
        Rel f = testutil::rand_rel(rng);
        FSet b1 = testutil::rand_fset(rng, I);
        FSet b2 = testutil::rand_fset(rng, I);
        CHECK(preimage(f, b1.unite(b2)) == preimage(f, b1).unite(preimage(f, b2)));
        CHECK(costar(f, b1.intersect(b2)) == costar(f, b1).intersect(costar(f, b2)));
        CHECK(costar(f, b1).subset_of(preimage(f, b1).unite(costar(f, FSet::empty(I)))));
    }
}

TEST_CASE("meeting criterion relates image, preimage and restriction") {
    Rng rng(37);
    for (int t = 0; t < 60; ++t) {
        Rel f = testutil::rand_rel(rng);
        FSet a = testutil::rand_fset(rng, I).closure();
        FSet b = testutil::rand_fset(rng, I).closure();
        bool m1 = !image(f, a).intersect(b).is_empty();
        bool m2 = !a.intersect(preimage(f, b)).is_empty();
        bool m3 = !restrict(f, a, b).is_empty();
        CHECK(m1 == m2);
        CHECK(m2 == m3);
    }
}

TEST_CASE("full domain characterizations agree") {
    Rng rng(41);
    for (int t = 0; t < 40; ++t) {
        Rel f = testutil::rand_rel(rng);
        bool full1 = costar(f, FSet::empty(I)).is_empty();
        bool full2 = preimage(f, FSet::full(I)) == FSet::full(I);
        CHECK(full1 == full2);
        for (int s = 0; s < 5 && full2; ++s) {
            Rat x = testutil::rand_rat01(rng);
            CHECK_FALSE(fiber(f, x).is_empty());
        }
    }
}

TEST_CASE("iterate additivity for same-sign exponents") {
    Rng rng(43);
    for (int t = 0; t < 15; ++t) {
        Rel f = testutil::rand_suitable(rng);
        for (long m : {0L, 1L, 2L})
            for (long n : {0L, 1L, 2L})
                CHECK(iterate(f, m + n) == compose(iterate(f, m), iterate(f, n)));
        CHECK(iterate(f, -2) == compose(iterate(f, -1), iterate(f, -1)));
    }
}

TEST_CASE("composition is associative") {
    Rng rng(47);
    for (int t = 0; t < 25; ++t) {
        Rel f = testutil::rand_rel(rng, 3);
        Rel g = testutil::rand_rel(rng, 3);
        Rel h = testutil::rand_rel(rng, 3);
        CHECK(compose(h, compose(g, f)) == compose(compose(h, g), f));
    }
}

TEST_CASE("independently built representations of one set compare equal") {
    // the unit square as one polygon, two triangles, and four fan triangles
    Rel square(I, I, {Cell::from_points({{0, 0}, {1, 0}, {1, 1}, {0, 1}})});
    Rel halves(I, I, {Cell::from_points({{0, 0}, {1, 0}, {1, 1}}),
                      Cell::from_points({{0, 0}, {1, 1}, {0, 1}})});
    Pt c{Rat(1, 2), Rat(1, 2)};
    Rel fan(I, I, {Cell::from_points({{0, 0}, {1, 0}, c}), Cell::from_points({{1, 0}, {1, 1}, c}),
                   Cell::from_points({{1, 1}, {0, 1}, c}), Cell::from_points({{0, 1}, {0, 0}, c})});
    CHECK(equals(square, halves));
    CHECK(equals(square, fan));
    // two triangles sharing an edge fuse into one quadrilateral
    Rel quad(I, I, {Cell::from_points({{0, 0}, {1, 0}, {1, Rat(1, 2)}, {0, 1}})});
    Rel tris(I, I, {Cell::from_points({{0, 0}, {1, 0}, {0, 1}}),
                    Cell::from_points({{1, 0}, {1, Rat(1, 2)}, {0, 1}})});
    CHECK(equals(quad, tris));
    // overlap with a redundant interior cell changes nothing
    Rel padded = rel_union(square, Rel(I, I, {Cell::from_points(
                                         {{Rat(1, 4), Rat(1, 4)},
                                          {Rat(3, 4), Rat(1, 4)},
                                          {Rat(1, 2), Rat(3, 4)}})}));
    CHECK(equals(padded, square));
}

TEST_CASE("operator identities hold across multi-component spaces") {
    Rng rng(59);
    Space Y({{Rat(-1, 2), 0}, {1, Rat(3, 2)}, {Rat(2), Rat(2)}});
    auto rand_cell = [&](const Space& sx, const Space& sy) {
        const SpaceComponent& cx = sx.components()[rng() % sx.components().size()];
        const SpaceComponent& cy = sy.components()[rng() % sy.components().size()];
        auto px = [&] { return testutil::rand_rat(rng, cx.lo, cx.hi, 12); };
        auto py = [&] { return testutil::rand_rat(rng, cy.lo, cy.hi, 12); };
        switch (rng() % 3) {
            case 0: return Cell::point(px(), py());
            case 1: {
                Pt a{px(), py()}, b{px(), py()};
                if (a == b) return Cell::point(a.x, a.y);
                return Cell::segment(a, b);
            }
            default: return Cell::from_points({{px(), py()}, {px(), py()}, {px(), py()}});
        }
    };
    for (int t = 0; t < 25; ++t) {
        std::vector<Cell> fc, gc;
        int nf = 1 + static_cast<int>(rng() % 3), ng = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < nf; ++i) fc.push_back(rand_cell(Y, Y));
        for (int i = 0; i < ng; ++i) gc.push_back(rand_cell(Y, Y));
        Rel f(Y, Y, fc), g(Y, Y, gc);
        Rel gf = compose(g, f);
        CHECK(inverse(gf) == compose(inverse(f), inverse(g)));
        FSet b = testutil::rand_fset(rng, Y);
        CHECK(preimage(gf, b) == preimage(f, preimage(g, b)));
        CHECK(costar(gf, b) == costar(f, costar(g, b)));
        FSet a = testutil::rand_fset(rng, Y);
        CHECK(image(gf, a) == image(g, image(f, a)));
        for (int s = 0; s < 4; ++s) {
            Rat x = testutil::rand_rat(rng, Rat(-1, 2), 0, 24);
            CHECK(fiber(gf, x) == image(g, fiber(f, x)));
        }
        CHECK(compose(Rel::identity(Y), f) == f);
        CHECK(compose(f, Rel::identity(Y)) == f);
    }
}

TEST_CASE("cells outside the space product are rejected") {
    Space two({{Rat(0), Rat(1)}, {Rat(2), Rat(3)}});
    CHECK_THROWS_AS(Rel(two, two, {Cell::segment({Rat(1, 2), 0}, {Rat(5, 2), 1})}), Error);
    CHECK_NOTHROW(Rel(two, two, {Cell::segment({0, 2}, {1, 3})}));
}

TEST_CASE("closure properties of image and costar") {
    Rng rng(53);
    for (int t = 0; t < 40; ++t) {
        Rel f = testutil::rand_rel(rng);
        FSet a = testutil::rand_fset(rng, I).closure();
        CHECK(image(f, a).is_closed());
        CHECK(preimage(f, a).is_closed());
        FSet u = testutil::rand_fset(rng, I).interior();
        CHECK(costar(f, u) == costar(f, u).interior());  // open when the input is open
    }
}
