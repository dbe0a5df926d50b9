#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <qsl/histories.hpp>

using namespace qsl;

TEST_CASE("grover share histories query the candidate set with both kickback terms") {
    sharing_context ctx(algorithm(family_kind::grover, 2));
    share sh{family_kind::grover, {{0b10, 0}}, {}}; // leftmost bit of b is 0
    auto hs = enumerate_histories(ctx, 0b00, sh);
    REQUIRE(hs.size() == 4);
    std::set<std::tuple<std::uint64_t, std::uint64_t, int, std::uint64_t>> got;
    for (const auto& h : hs) {
        CHECK(h.b == 0b00);
        got.insert({h.a, h.v_before, h.sign, h.v_after});
    }
    // querying the solution flips v, querying the other candidate leaves it
    std::set<std::tuple<std::uint64_t, std::uint64_t, int, std::uint64_t>> expected = {
        {0b00, 0, 1, 1}, {0b00, 1, -1, 0}, {0b01, 0, 1, 0}, {0b01, 1, -1, 1}};
    CHECK(got == expected);
}

TEST_CASE("dj share histories query the rows outside the half table") {
    sharing_context ctx(algorithm(family_kind::dj, 2));
    std::uint64_t b = bit_string::parse("0011").value();
    share half{family_kind::dj, {}, {{0, 0}, {1, 0}}};
    auto hs = enumerate_histories(ctx, b, half);
    REQUIRE(hs.size() == 4); // two free rows, two kickback terms
    for (const auto& h : hs) {
        CHECK((h.a == 2 || h.a == 3));
        CHECK(h.v_after == (h.v_before ^ 1)); // both free rows have value 1
        CHECK(h.sign == (h.v_before == 0 ? 1 : -1));
    }
}

TEST_CASE("simon share histories keep V at zero") {
    sharing_context ctx(algorithm(family_kind::simon, 2));
    std::uint64_t b = bit_string::parse("0011").value();
    share half{family_kind::simon, {}, {{0, 0}, {2, 1}}};
    auto hs = enumerate_histories(ctx, b, half);
    REQUIRE(hs.size() == 2);
    for (const auto& h : hs) {
        CHECK(h.v_before == 0);
        CHECK(h.sign == 1);
        CHECK((h.a == 1 || h.a == 3));
        CHECK(h.v_after == (h.a == 1 ? 0 : 1));
    }
}

TEST_CASE("inadmissible shares generate no histories") {
    sharing_context ctx(algorithm(family_kind::dj, 2));
    share mixed{family_kind::dj, {}, {{1, 0}, {2, 1}}};
    CHECK_THROWS_AS(enumerate_histories(ctx, bit_string::parse("0011").value(), mixed),
                    std::invalid_argument);
}

TEST_CASE("the full bundle is duplicate free and covers every argument") {
    for (auto kind : {family_kind::grover, family_kind::dj, family_kind::simon}) {
        sharing_context ctx(algorithm(kind, 2));
        auto bundle = full_bundle(ctx);
        std::set<std::tuple<phase_tag, int, std::uint64_t, std::uint64_t, std::uint64_t>> keys;
        for (const auto& h : bundle.histories) CHECK(keys.insert(h.key()).second);
        int v_terms = kind == family_kind::simon ? 1 : 2;
        CHECK(bundle.histories.size() == ctx.alg.members.size() * 4 * v_terms);
        // per member, each argument appears with every kickback term
        for (const auto& m : ctx.alg.members) {
            std::set<std::uint64_t> args;
            for (const auto& h : bundle.histories)
                if (h.b == m.b.value()) args.insert(h.a);
            CHECK(args == std::set<std::uint64_t>{0, 1, 2, 3});
        }
    }
}

TEST_CASE("superposing the bundle reconstructs the algorithm states at n=2") {
    for (auto kind : {family_kind::grover, family_kind::dj, family_kind::simon}) {
        sharing_context ctx(algorithm(kind, 2));
        auto rep = check_reconstruction(ctx, full_bundle(ctx));
        CHECK(rep.ok);
        CHECK(rep.before_deviation < 1e-9);
        CHECK(rep.after_deviation < 1e-9);
        CHECK(rep.final_deviation < 1e-9);
    }
}

TEST_CASE("reconstruction also holds for grover at odd n") {
    sharing_context ctx(algorithm(family_kind::grover, 3));
    auto rep = check_reconstruction(ctx, full_bundle(ctx));
    CHECK(rep.ok);
}

TEST_CASE("before-superposition carries a uniform A,V factor per choice") {
    sharing_context ctx(algorithm(family_kind::grover, 2));
    auto before = superpose_before(ctx, full_bundle(ctx));
    auto l = ctx.alg.layout();
    double mag = 1.0 / (4.0 * std::sqrt(2.0)); // 1/sqrt(32)
    for (const auto& m : ctx.alg.members) {
        std::uint64_t b = m.b.value();
        const vec& p = before.part(ctx.alg.tag_of(b));
        for (std::uint64_t a = 0; a < 4; ++a) {
            CHECK(p(static_cast<Eigen::Index>(l.index(b, a, 0))).real() ==
                  doctest::Approx(mag).epsilon(1e-9));
            CHECK(p(static_cast<Eigen::Index>(l.index(b, a, 1))).real() ==
                  doctest::Approx(-mag).epsilon(1e-9));
        }
    }
}

TEST_CASE("one history branches under the rotation with mean-inversion weights") {
    sharing_context ctx(algorithm(family_kind::grover, 2));
    history h;
    h.tag = ctx.alg.tag_of(0b00);
    h.b = 0b00;
    h.a = 0b00;
    h.v_before = 0;
    h.v_after = 1;
    history_bundle single{family_kind::grover, 2, {h}};
    auto branched = branch_under_ua(ctx, single);
    auto l = ctx.alg.layout();
    const vec& p = branched.part(h.tag);
    // row of 2|s><s| - I through a sharp A state: 2/N off the diagonal, 2/N - 1 on it
    CHECK(p(static_cast<Eigen::Index>(l.index(0, 0, 1))).real() == doctest::Approx(-0.5));
    for (std::uint64_t a = 1; a < 4; ++a)
        CHECK(p(static_cast<Eigen::Index>(l.index(0, a, 1))).real() == doctest::Approx(0.5));
}

TEST_CASE("simon end to end recovers the period from sampled strings") {
    algorithm alg(family_kind::simon, 2);
    std::mt19937_64 rng(4242);
    for (int rep = 0; rep < 20; ++rep) {
        auto res = simon_end_to_end(alg, bit_string::parse("0011").value(), rng);
        CHECK(res.h.str() == "01");
        CHECK(res.evaluations >= 1);
        for (const auto& s : res.distinct_nonzero)
            CHECK(s.dot(res.h) == 0);
    }
    algorithm big(family_kind::simon, 3);
    auto res3 = simon_end_to_end(big, big.members[40].b.value(), rng);
    CHECK(res3.h.value() == period_of(big.members[40]).h.value());
}
