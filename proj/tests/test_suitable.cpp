#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "relcalc/examples.hpp"
#include "relcalc/suitable.hpp"
#include "testutil.hpp"

using namespace relcalc;
using testutil::Rng;

namespace {
const Space I = Space::unit();
const Rel F01 = examples::interval_flip();
const Rel Ft01 = examples::crushing_extension();

Rel constant_half() {
    return Rel(I, I, {Cell::segment({0, Rat(1, 2)}, {1, Rat(1, 2)})});
}
}  // namespace

TEST_CASE("one_set finds the singleton-fiber locus exactly") {
    CHECK(one_set(F01) == FSet::interval(I, 0, Rat(1, 2), true, false)
                              .unite(FSet::interval(I, Rat(1, 2), 1, false, true)));
    CHECK(one_set(examples::flip_square_expected()) == FSet::interval(I, 0, 1, false, false));
    Fun lin(I, I, {{{0, 1, true, true}, Rat(1, 2), Rat(1, 4)}});
    CHECK(one_set(lin.graph_closure()) == FSet::full(I));
    Rel square(I, I, {Cell::from_points({{0, 0}, {1, 0}, {1, 1}, {0, 1}})});
    CHECK(one_set(square).is_empty());
}

TEST_CASE("function part round-trips through the graph closure") {
    Fun f = function_part(F01);
    CHECK(closure_of_function(f) == F01);
    CHECK(*f.eval(Rat(1, 4)) == Rat(1, 4));
    CHECK(*f.eval(Rat(3, 4)) == Rat(3, 4));
    CHECK_FALSE(f.eval(Rat(1, 2)).has_value());
}

TEST_CASE("closure of the two flip selections is the flip relation") {
    CHECK(closure_of_function(examples::interval_flip_selection(0)) == F01);
    CHECK(closure_of_function(examples::interval_flip_selection(1)) == F01);
    Fun idpieces(I, I, {{{0, Rat(1, 2), true, true}, 1, 0}, {{Rat(1, 2), 1, false, true}, 1, 0}});
    CHECK(closure_of_function(idpieces) == Rel::identity(I));
    Fun sparse(I, I, {{{0, Rat(1, 4), true, true}, 1, 0}});
    CHECK_THROWS_AS(closure_of_function(sparse), Error);
}

TEST_CASE("unique minimal subrelation extraction") {
    auto um = unique_minimal(examples::flip_square_expected());
    REQUIRE(std::holds_alternative<Rel>(um));
    CHECK(std::get<Rel>(um) == Rel::identity(I));

    auto bad = unique_minimal(compose(Ft01, Ft01));
    REQUIRE(std::holds_alternative<MinimalError>(bad));
    const MinimalError& e = std::get<MinimalError>(bad);
    CHECK(e.kind == MinimalError::Kind::NonUniqueMinimal);
    CHECK_FALSE(e.witness.is_empty());
    CHECK(e.witness.subset_of(FSet::interval(Space::interval(-1, 1), -1, 0)));

    Fun lin(I, I, {{{0, 1, true, true}, -1, 1}});
    auto total = unique_minimal(lin.graph_closure());
    REQUIRE(std::holds_alternative<Rel>(total));
    CHECK(std::get<Rel>(total) == lin.graph_closure());

    Rel partial(I, I, {Cell::segment({0, 0}, {Rat(1, 2), Rat(1, 2)})});
    auto nofull = unique_minimal(partial);
    REQUIRE(std::holds_alternative<MinimalError>(nofull));
    CHECK(std::get<MinimalError>(nofull).kind == MinimalError::Kind::NotFullDomain);
    CHECK(std::get<MinimalError>(nofull).witness ==
          FSet::interval(I, Rat(1, 2), 1, false, true));
}

TEST_CASE("first-projection irreducibility") {
    CHECK(is_pi1_irreducible(F01));
    CHECK_FALSE(is_pi1_irreducible(compose(F01, F01)));
    Rel square(I, I, {Cell::from_points({{0, 0}, {1, 0}, {1, 1}, {0, 1}})});
    CHECK_FALSE(is_pi1_irreducible(square));
}

TEST_CASE("second-projection almost openness") {
    CHECK(is_pi2_almost_open(F01));
    CHECK_FALSE(is_pi2_almost_open(Ft01));
    CHECK_FALSE(is_pi2_almost_open(constant_half()));
    // a crushed piece aimed at an isolated target point is almost open
    Space dotted({{Rat(0), Rat(1)}, {Rat(2), Rat(2)}});
    Rel crush(dotted, dotted, {Cell::segment({0, 2}, {1, 2}), Cell::point(2, 2)});
    CHECK(is_pi2_almost_open(crush));
    // an isolatable anomalous point above a dense good part is not
    Rel stray = rel_union(Rel::identity(I), Rel(I, I, {Cell::point(Rat(1, 2), Rat(3, 4))}));
    CHECK_FALSE(is_pi2_almost_open(stray));
    // a horizontal ledge inside the diagonal crushes boxes onto a
    // non-isolated value
    Rel ledge = rel_union(Rel::identity(I),
                          Rel(I, I, {Cell::segment({Rat(1, 4), 0}, {Rat(1, 2), 0})}));
    CHECK_FALSE(is_pi2_almost_open(ledge));
    // the same ledge aimed at an isolated destination point is fine
    Space dst2({{Rat(0), Rat(0)}, {Rat(1, 4), Rat(1)}});
    Rel ledge2(I, dst2,
               {Cell::segment({Rat(1, 4), Rat(1, 4)}, {1, 1}),
                Cell::segment({0, 0}, {Rat(1, 2), 0})});
    CHECK(is_pi2_almost_open(ledge2));
}

TEST_CASE("suitability reports for the worked relations") {
    Report r1 = suitability_report(F01);
    CHECK(r1.full_domain);
    CHECK(r1.one_dense);
    CHECK(r1.pi1_irreducible);
    CHECK(r1.pi2_almost_open);
    CHECK(r1.suitable);
    CHECK(r1.surjective);
    CHECK(r1.iso);
    CHECK(r1.witnesses.empty());

    Report r2 = suitability_report(Ft01);
    CHECK(r2.pi1_irreducible);
    CHECK_FALSE(r2.pi2_almost_open);
    CHECK_FALSE(r2.suitable);
    bool found = false;
    for (const auto& [name, w] : r2.witnesses)
        if (name == "pi2_almost_open") {
            found = true;
            CHECK(w.subset_of(FSet::interval(Space::interval(-1, 1), -1, 0)));
        }
    CHECK(found);

    Report r3 = suitability_report(constant_half());
    CHECK_FALSE(r3.pi2_almost_open);
    CHECK_FALSE(r3.suitable);
    CHECK_FALSE(r3.surjective);

    Report r4 = suitability_report(examples::two_branch_cover().graph_closure());
    CHECK(r4.suitable);
    CHECK(r4.surjective);
    CHECK(r4.iso);
}

TEST_CASE("suitable composition discards anomalous points") {
    CHECK(suitable_compose(F01, F01) == Rel::identity(I));
    Rel cover = examples::two_branch_cover().graph_closure();
    CHECK(suitable_compose(F01, cover) == examples::two_branch_composed().graph_closure());
    Rng rng(61);
    for (int t = 0; t < 10; ++t) {
        Rel f = testutil::rand_suitable(rng);
        CHECK(suitable_compose(Rel::identity(I), f) == f);
        CHECK(suitable_compose(f, Rel::identity(I)) == f);
    }
    CHECK_THROWS_AS(suitable_compose(F01, Ft01), Error);
}

TEST_CASE("suitable iterates") {
    CHECK(suitable_iterate(F01, 2) == Rel::identity(I));
    CHECK(suitable_iterate(F01, 3) == F01);
    CHECK(suitable_iterate(F01, -2) == Rel::identity(I));
    CHECK(suitable_iterate(F01, 0) == Rel::identity(I));
    CHECK_THROWS_AS(suitable_iterate(compose(F01, F01), 2), Error);
}

TEST_CASE("suitable inverse verifies both identities") {
    CHECK(suitable_inverse(F01) == F01);
    Rel cover = examples::two_branch_cover().graph_closure();
    Rel inv = suitable_inverse(cover);
    CHECK(inv == inverse(cover));
    CHECK_THROWS_AS(suitable_inverse(Ft01), Error);
    CHECK_THROWS_AS(suitable_inverse(constant_half()), Error);
}

TEST_CASE("selection check for the flip selections") {
    auto [s0, q0] = selection_check(examples::interval_flip_selection(0), F01);
    CHECK(s0);
    CHECK(q0);
    auto [s1, q1] = selection_check(examples::interval_flip_selection(1), F01);
    CHECK(s1);
    CHECK(q1);
    // constant with a perturbed point: a selection of its own closure, not
    // quasi-continuous
    Fun bump(I, I,
             {{{0, Rat(1, 2), true, false}, 0, 0}, {{Rat(1, 2), 1, false, true}, 0, 0}},
             {{Rat(1, 2), 1}});
    Rel closure = bump.graph_closure();
    auto [s2, q2] = selection_check(bump, closure);
    CHECK(s2);
    CHECK_FALSE(q2);
    auto [s3, q3] = selection_check(Fun(I, I, {{{0, 1, true, true}, 1, 0}}), Rel::identity(I));
    CHECK(s3);
    CHECK(q3);
    // graph sticking outside is not a selection
    auto [s4, q4] = selection_check(Fun(I, I, {{{0, 1, true, true}, 0, Rat(1, 4)}}), F01);
    CHECK_FALSE(s4);
    CHECK(q4);
}

TEST_CASE("map analysis of the two-branch cover") {
    MapAnalysis a = map_analysis(examples::two_branch_cover());
    Space Y = examples::two_branch_space();
    FSet expect_in = FSet::interval(Y, Rat(-1, 2), 0, true, false)
                         .unite(FSet::interval(Y, 1, Rat(3, 2), false, true));
    CHECK(a.in_set == expect_in);
    CHECK(a.open_set == expect_in);  // irreducible maps: openness locus = injectivity locus
    CHECK(a.almost_one_to_one);
    CHECK(a.irreducible);
    CHECK(a.almost_open);
}

TEST_CASE("map analysis of identity, constant and tent") {
    MapAnalysis id = map_analysis(Fun(I, I, {{{0, 1, true, true}, 1, 0}}));
    CHECK(id.in_set == FSet::full(I));
    CHECK(id.open_set == FSet::full(I));
    CHECK(id.irreducible);
    CHECK(id.almost_open);

    MapAnalysis c = map_analysis(Fun(I, I, {{{0, 1, true, true}, 0, Rat(1, 2)}}));
    CHECK(c.in_set.is_empty());
    CHECK_FALSE(c.almost_one_to_one);
    CHECK_FALSE(c.almost_open);
    CHECK_FALSE(c.irreducible);

    Fun tent(I, I, {{{0, Rat(1, 2), true, true}, 2, 0}, {{Rat(1, 2), 1, false, true}, -2, 2}});
    MapAnalysis t = map_analysis(tent);
    CHECK_FALSE(t.almost_one_to_one);
    CHECK(t.almost_open);

    CHECK_THROWS_AS(map_analysis(Fun(I, I, {{{0, Rat(1, 2), true, true}, 1, 0}})), Error);
    CHECK_THROWS_AS(map_analysis(examples::interval_flip_selection(0)), Error);
}

TEST_CASE("costar is dense in preimage for irreducible relations") {
    Rng rng(67);
    for (int t = 0; t < 8; ++t) {
        Rel f = testutil::rand_suitable(rng);
        for (int s = 0; s < 15; ++s) {
            Rat a = testutil::rand_rat01(rng), b = testutil::rand_rat01(rng);
            if (b < a) std::swap(a, b);
            if (a == b) continue;
            FSet v = FSet::interval(I, a, b, false, false);
            FSet cs = costar(f, v);
            FSet pre = preimage(f, v);
            CHECK(cs.subset_of(pre));
            CHECK(pre.subset_of(cs.closure()));
        }
    }
}

TEST_CASE("good open subsets are dense inside every open set") {
    Rng rng(71);
    for (int t = 0; t < 8; ++t) {
        Rel f = testutil::rand_suitable(rng);
        for (int s = 0; s < 10; ++s) {
            Rat a = testutil::rand_rat01(rng), b = testutil::rand_rat01(rng);
            if (b < a) std::swap(a, b);
            if (a == b) continue;
            FSet u = FSet::interval(I, a, b, false, false);
            FSet uf = u.intersect(costar(f, image(f, u).interior()));
            CHECK(u.subset_of(uf.closure()));
        }
    }
}

TEST_CASE("singleton loci interact with composition as expected") {
    Rng rng(73);
    for (int t = 0; t < 30; ++t) {
        Rel f = testutil::rand_suitable(rng);
        Rel g = testutil::rand_suitable(rng);
        FSet lhs = one_set(f).intersect(one_set(compose(g, f)));
        FSet rhs = one_set(f).intersect(preimage(f, one_set(g)));
        CHECK(lhs == rhs);
        // the composed singleton locus only grows after minimality trimming
        CHECK(one_set(compose(g, f)).subset_of(one_set(suitable_compose(g, f))));
    }
}

TEST_CASE("suitable composition matches the unique minimal route and stays suitable") {
    Rng rng(79);
    for (int t = 0; t < 40; ++t) {
        Rel f = testutil::rand_suitable(rng);
        Rel g = testutil::rand_suitable(rng);
        Rel bullet = suitable_compose(g, f);
        auto um = unique_minimal(compose(g, f));
        REQUIRE(std::holds_alternative<Rel>(um));
        CHECK(bullet == std::get<Rel>(um));
        CHECK(rel_subset(bullet, compose(g, f)));
        // sampled graph containment of the composed map part
        Fun ff = function_part(f);
        Fun fg = function_part(g);
        for (int s = 0; s < 8; ++s) {
            Rat x = testutil::rand_rat01(rng, 48);
            auto y = ff.eval(x);
            if (!y) continue;
            auto z = fg.eval(*y);
            if (!z) continue;
            CHECK(fiber(bullet, x).contains(*z));
        }
    }
}

TEST_CASE("suitable composition is associative") {
    Rng rng(83);
    for (int t = 0; t < 25; ++t) {
        Rel f = testutil::rand_suitable(rng);
        Rel g = testutil::rand_suitable(rng);
        Rel h = testutil::rand_suitable(rng);
        CHECK(suitable_compose(suitable_compose(h, g), f) ==
              suitable_compose(h, suitable_compose(g, f)));
    }
}

TEST_CASE("composition with an almost open map needs no trimming") {
    Rng rng(89);
    for (int t = 0; t < 20; ++t) {
        Rel f = testutil::rand_suitable(rng);
        Fun g = testutil::rand_pl_map(rng);  // continuous, nonzero slopes
        Rel gr = g.graph_closure();
        CHECK(suitable_compose(gr, f) == compose(gr, f));
    }
}

TEST_CASE("irreducible almost open maps invert cleanly") {
    Rel cover = examples::two_branch_cover().graph_closure();
    CHECK(compose(cover, inverse(cover)) == Rel::identity(I));
    CHECK(suitable_compose(inverse(cover), cover) == Rel::identity(examples::two_branch_space()));
    Rng rng(97);
    for (int t = 0; t < 10; ++t) {
        Fun g = testutil::rand_pl_map(rng, true);
        MapAnalysis ma = map_analysis(g);
        if (!ma.irreducible) continue;
        Rel gr = g.graph_closure();
        CHECK(compose(gr, inverse(gr)) == Rel::identity(I));
        CHECK(suitable_compose(inverse(gr), gr) == Rel::identity(I));
    }
}

TEST_CASE("irreducible maps are open exactly on the injectivity locus") {
    Rng rng(101);
    int seen = 0;
    for (int t = 0; t < 40 && seen < 10; ++t) {
        Fun g = testutil::rand_pl_map(rng, true);
        MapAnalysis ma = map_analysis(g);
        if (!ma.irreducible) continue;
        ++seen;
        CHECK(ma.in_set == ma.open_set);
    }
    CHECK(seen > 0);
    MapAnalysis cover = map_analysis(examples::two_branch_cover());
    CHECK(cover.in_set == cover.open_set);
}

TEST_CASE("irreducibility of compositions of surjections factors") {
    Space Y = examples::two_branch_space();
    // homeo o cover: still irreducible
    Fun hc(Y, I, {{{Rat(-1, 2), 0, true, true}, -1, Rat(1, 2)},
                  {{1, Rat(3, 2), true, true}, -1, Rat(3, 2)}});
    CHECK(map_analysis(examples::two_branch_cover()).irreducible);
    CHECK(map_analysis(Fun(I, I, {{{0, 1, true, true}, -1, 1}})).irreducible);
    CHECK(map_analysis(hc).irreducible);

    // tent o cover: the tent map is not almost one-to-one, and neither is
    // the composition (every point becomes doubly covered)
    Fun tent(I, I, {{{0, Rat(1, 2), true, true}, 2, 0}, {{Rat(1, 2), 1, false, true}, -2, 2}});
    CHECK_FALSE(map_analysis(tent).irreducible);
    Fun tc(Y, I, {{{Rat(-1, 2), 0, true, true}, 2, 1}, {{1, Rat(3, 2), true, true}, -2, 3}});
    CHECK(map_analysis(tc).in_set.is_empty());
    CHECK_FALSE(map_analysis(tc).irreducible);
}

TEST_CASE("full-domain subrelations of minimal relations coincide with them") {
    Rng rng(103);
    for (int t = 0; t < 20; ++t) {
        Rel f = testutil::rand_suitable(rng);
        if (!is_pi1_irreducible(f)) continue;
        for (const Cell& c : f.cells()) {
            std::vector<Cell> rest;
            for (const Cell& d : f.cells())
                if (!(d == c)) rest.push_back(d);
            Rel carved(I, I, rest);
            bool full = domain(carved) == FSet::full(I);
            if (full) CHECK(carved == f);
        }
    }
}

TEST_CASE("irreducible maps pair isolated points across the spaces") {
    Space dotted({{Rat(0), Rat(1)}, {Rat(2), Rat(2)}});
    Space image_space({{Rat(0), Rat(1)}, {Rat(5), Rat(5)}});
    Fun g(dotted, image_space, {{{0, 1, true, true}, 1, 0}}, {{2, 5}});
    MapAnalysis ma = map_analysis(g);
    CHECK(ma.irreducible);
    CHECK(ma.in_set.contains(2));  // isolated source pairs with isolated target
    // crushing the isolated point into the interval breaks openness there
    Fun bad(dotted, image_space, {{{0, 1, true, true}, 1, 0}}, {{2, Rat(1, 2)}});
    MapAnalysis mb = map_analysis(bad);
    CHECK_FALSE(mb.open_set.contains(2));
    CHECK_FALSE(mb.in_set.contains(2));
}

TEST_CASE("selections of the inverse of an irreducible map are quasi-continuous") {
    Space Y = examples::two_branch_space();
    Rel inv_cover = inverse(examples::two_branch_cover().graph_closure());
    // the inverse is single valued except at 1/2, where either branch works
    Fun selA(I, Y, {{{0, Rat(1, 2), true, true}, 1, Rat(-1, 2)},
                    {{Rat(1, 2), 1, false, true}, 1, Rat(1, 2)}});
    Fun selB(I, Y, {{{0, Rat(1, 2), true, false}, 1, Rat(-1, 2)},
                    {{Rat(1, 2), 1, true, true}, 1, Rat(1, 2)}});
    for (const Fun& sel : {selA, selB}) {
        auto [is_sel, quasi] = selection_check(sel, inv_cover);
        CHECK(is_sel);
        CHECK(quasi);
    }
    // injectivity interior is dense in the selection image interior
    MapAnalysis ma = map_analysis(examples::two_branch_cover());
    Fun sel(I, Y, {{{0, Rat(1, 2), true, true}, 1, Rat(-1, 2)},
                   {{Rat(1, 2), 1, false, true}, 1, Rat(1, 2)}});
    FSet img = image(sel.graph_closure(), FSet::full(I));
    CHECK(img.interior().subset_of(ma.in_set.interior().closure()));
}

TEST_CASE("randomized two-branch covers: selection images stay near the injectivity locus") {
    Rng rng(107);
    for (int t = 0; t < 12; ++t) {
        // random cover of [0,1] by two shifted intervals meeting at value c
        Rat c(1 + static_cast<long>(rng() % 14), 16);
        Space Y({{-c, 0}, {1, 2 - c}});
        Fun cover(Y, I, {{{-c, 0, true, true}, 1, c}, {{1, 2 - c, true, true}, 1, c - 1}});
        MapAnalysis ma = map_analysis(cover);
        CHECK(ma.irreducible);
        CHECK(ma.in_set == FSet::interval(Y, -c, 0, true, false)
                               .unite(FSet::interval(Y, 1, 2 - c, false, true)));
        Rel inv_cover = inverse(cover.graph_closure());
        // both selections of the inverse: the branch switch sits at c
        Fun selA(I, Y, {{{0, c, true, true}, 1, -c}, {{c, 1, false, true}, 1, 1 - c}});
        Fun selB(I, Y, {{{0, c, true, false}, 1, -c}, {{c, 1, true, true}, 1, 1 - c}});
        for (const Fun& sel : {selA, selB}) {
            auto [is_sel, quasi] = selection_check(sel, inv_cover);
            CHECK(is_sel);
            CHECK(quasi);
            FSet img = image(sel.graph_closure(), FSet::full(I));
            CHECK(img.interior().subset_of(ma.in_set.interior().closure()));
        }
    }
}

TEST_CASE("disjoint-union regression: pointwise costar does not imply minimality") {
    Space xy({{Rat(0), Rat(1)}, {Rat(2), Rat(3)}});
    Rel f(xy, Space::unit(),
          {Cell::segment({0, 0}, {1, 1}),
           Cell::from_points({{2, 0}, {3, 0}, {3, 1}, {2, 1}})});
    CHECK(domain(f) == FSet::full(xy));
    for (const Rat& a : {Rat(1, 8), Rat(1, 2)}) {
        FSet v = FSet::interval(I, a, a + Rat(1, 4), false, false);
        CHECK_FALSE(costar(f, v).is_empty());
    }
    CHECK_FALSE(is_pi1_irreducible(f));
}
