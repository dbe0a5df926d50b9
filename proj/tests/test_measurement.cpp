#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <qsl/pipeline.hpp>

using namespace qsl;

TEST_CASE("full B content on the mixed initial state is uniform") {
    algorithm alg(family_kind::grover, 2);
    auto dist = measure(alg.initial_state(), alg.b_hat());
    REQUIRE(dist.size() == 4);
    double total = 0;
    for (const auto& o : dist) {
        CHECK(o.probability == doctest::Approx(0.25).epsilon(1e-12));
        total += o.probability;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("grover final A content equals the choice with certainty") {
    algorithm alg(family_kind::grover, 2);
    for (std::uint64_t b = 0; b < 4; ++b) {
        auto fin = apply_stages(alg.sharp_state(b, alg.tag_of(b)),
                                alg.stages(identity_permutation(2)));
        auto dist = measure(fin, alg.a_hat());
        REQUIRE(dist.size() == 1);
        CHECK(dist[0].eigenvalue == b);
        CHECK(dist[0].probability == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("dj final A distinguishes constant from balanced") {
    algorithm alg(family_kind::dj, 2);
    for (const auto& t : alg.members) {
        auto fin = apply_stages(alg.sharp_state(t.b.value(), alg.tag_of(t.b.value())),
                                alg.stages(identity_permutation(alg.layout().nb)));
        double p_zero = 0;
        for (const auto& o : measure(fin, alg.a_hat()))
            if (o.eigenvalue == 0) p_zero = o.probability;
        std::uint64_t ones = 0;
        for (auto v : t.values) ones += v;
        bool constant = ones == 0 || ones == t.values.size();
        CHECK(p_zero == doctest::Approx(constant ? 1.0 : 0.0).epsilon(1e-12));
    }
}

TEST_CASE("cell and parity projections keep the right supports at half weight") {
    algorithm alg(family_kind::grover, 2);
    auto init = alg.initial_state();

    auto cell0 = project(init, observable::bit_cell(reg::b, 2, 0), 0);
    CHECK(cell0.weight == doctest::Approx(0.5).epsilon(1e-12));
    auto d0 = measure(cell0.post, alg.b_hat());
    REQUIRE(d0.size() == 2);
    CHECK(d0[0].eigenvalue == 0b00);
    CHECK(d0[1].eigenvalue == 0b01);

    auto px = project(init, observable::parity(reg::b, 2, 0b11), 0);
    CHECK(px.weight == doctest::Approx(0.5).epsilon(1e-12));
    auto dx = measure(px.post, alg.b_hat());
    REQUIRE(dx.size() == 2);
    CHECK(dx[0].eigenvalue == 0b00);
    CHECK(dx[1].eigenvalue == 0b11);
}

TEST_CASE("projecting the final mixture on one choice leaves the sharp run") {
    algorithm alg(family_kind::grover, 2);
    auto fin = apply_stages(alg.initial_state(), alg.stages(identity_permutation(2)));
    auto pr = project(fin, alg.b_hat(), 0b10);
    auto sharp_fin = apply_stages(alg.sharp_state(0b10, alg.tag_of(0b10)),
                                  alg.stages(identity_permutation(2)));
    CHECK(pr.weight == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(pr.post.distance(sharp_fin) < 1e-12);
}

TEST_CASE("deferred measurement equivalence holds for every family at n=2") {
    for (auto kind : {family_kind::grover, family_kind::dj, family_kind::simon}) {
        algorithm alg(kind, 2);
        auto perm = identity_permutation(alg.layout().nb);
        for (const auto& t : alg.members) {
            auto rep = deferred_equivalence(alg, t.b.value(), perm);
            CHECK(rep.equivalent);
            CHECK(rep.max_state_deviation < 1e-9);
            CHECK(rep.max_statistics_deviation < 1e-9);
            CHECK(rep.max_back_evolution_deviation < 1e-9);
        }
    }
}

TEST_CASE("deferred equivalence survives a nontrivial preparation map") {
    algorithm alg(family_kind::grover, 2);
    preparation_permutation perm{2, 0, 3, 1};
    for (std::uint64_t b = 0; b < 4; ++b) CHECK(deferred_equivalence(alg, b, perm).equivalent);
    for (int n : {3, 4}) {
        algorithm big(family_kind::grover, n);
        CHECK(deferred_equivalence(big, 1, transposition(n, 0, 1)).equivalent);
    }
}

TEST_CASE("content observables commute across registers and cells") {
    auto s = correlated_pair_state(2);
    auto r1 = commuting_order_check(s, observable::bit_cell(reg::b, 2, 0),
                                    observable::bit_cell(reg::b, 2, 1));
    CHECK(r1.max_deviation < 1e-12);
    auto r2 = commuting_order_check(s, observable::full_content(reg::b, 2),
                                    observable::full_content(reg::a, 2));
    CHECK(r2.max_deviation < 1e-12);
    // fully correlated: the diagonal carries all the joint weight
    for (const auto& [k, p] : r2.joint)
        CHECK(p == doctest::Approx(k.first == k.second ? 0.25 : 0.0).epsilon(1e-12));
}

TEST_CASE("projection is idempotent") {
    algorithm alg(family_kind::dj, 2);
    auto init = alg.initial_state();
    auto pr = project(init, observable::bit_cell(reg::b, 4, 0), 1);
    auto again = project(pr.post, observable::bit_cell(reg::b, 4, 0), 1);
    CHECK(again.weight == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(again.post.distance(pr.post) < 1e-12);
}

TEST_CASE("a cell projection halves the pair entropy") {
    auto s = correlated_pair_state(2);
    CHECK(entropy_of(s, {reg::b}) == doctest::Approx(2.0).epsilon(1e-9));
    auto pr = project(s, observable::bit_cell(reg::b, 2, 0), 0);
    CHECK(entropy_of(pr.post, {reg::b}) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(entropy_of(pr.post, {reg::a}) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("impossible outcomes raise a post selection error") {
    algorithm alg(family_kind::grover, 2);
    auto sharp = alg.sharp_state(0b00, alg.tag_of(0b00));
    CHECK_THROWS_AS(project(sharp, alg.b_hat(), 0b11), post_selection_error);
}

TEST_CASE("mismatched observable width is rejected") {
    algorithm alg(family_kind::grover, 2);
    CHECK_THROWS_AS(measure(alg.initial_state(), observable::full_content(reg::b, 3)),
                    std::invalid_argument);
    CHECK_THROWS_AS(observable::subset(reg::b, 2, {0b01, 0b01}), std::invalid_argument);
}
