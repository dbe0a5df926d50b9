#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <qsl/classical.hpp>

#include <random>

using namespace qsl;

namespace {

// Independent strategy-tree oracle: does a depth-d deterministic strategy
// exist that pins down the answer for every member of the set?
bool strategy_exists(const std::vector<function_table>& members,
                     const std::vector<std::uint64_t>& answers, int depth) {
    std::uint64_t first = answers.front();
    bool solved = true;
    for (auto a : answers)
        if (a != first) solved = false;
    if (solved) return true;
    if (depth == 0) return false;
    std::uint64_t rows = members.front().values.size();
    for (std::uint64_t q = 0; q < rows; ++q) {
        std::map<std::uint64_t, std::pair<std::vector<function_table>, std::vector<std::uint64_t>>>
            groups;
        for (std::size_t i = 0; i < members.size(); ++i) {
            auto& g = groups[members[i].values[q]];
            g.first.push_back(members[i]);
            g.second.push_back(answers[i]);
        }
        if (groups.size() < 2) continue;
        bool all = true;
        for (auto& [v, g] : groups)
            if (!strategy_exists(g.first, g.second, depth - 1)) all = false;
        if (all) return true;
    }
    return false;
}

std::uint64_t dj_answer(const function_table& t) {
    std::uint64_t ones = 0;
    for (auto v : t.values) ones += v;
    return ones == 0 || ones == t.values.size() ? 0 : 1;
}

} // namespace

TEST_CASE("the three families need three queries without advanced knowledge at n=2") {
    for (auto kind : {family_kind::grover, family_kind::dj, family_kind::simon}) {
        algorithm alg(kind, 2);
        auto res = worst_case_queries(kind, 2, query_goal::solve_problem, whole_family(alg));
        CHECK(res.worst_case_queries == 3);
        CHECK(!res.optimal_first_queries.empty());
    }
}

TEST_CASE("minimax matches an independent strategy-tree search for dj") {
    algorithm alg(family_kind::dj, 2);
    std::vector<std::uint64_t> answers;
    for (const auto& t : alg.members) answers.push_back(dj_answer(t));
    CHECK_FALSE(strategy_exists(alg.members, answers, 2));
    CHECK(strategy_exists(alg.members, answers, 3));
}

TEST_CASE("half knowledge brings every family down to one query at n=2") {
    for (auto kind : {family_kind::grover, family_kind::dj, family_kind::simon}) {
        auto row = speedup_report(kind, 2);
        CHECK(row.no_knowledge == 3);
        CHECK(row.with_knowledge_max == 1);
        CHECK(row.with_knowledge_min == 1);
        CHECK(row.quantum_calls == 1);
        CHECK(row.quantum_matches_advanced);
    }
}

TEST_CASE("grover at n=4 needs fifteen queries cold and three with half knowledge") {
    auto row = speedup_report(family_kind::grover, 4);
    CHECK(row.no_knowledge == 15);
    CHECK(row.with_knowledge_max == 3);
    CHECK(row.with_knowledge_min == 3);
    CHECK(row.quantum_calls == 3);
    CHECK(row.quantum_matches_advanced);
}

TEST_CASE("grover candidate sets of size k cost k-1 queries") {
    for (int n : {2, 3, 4}) {
        query_game game(family_kind::grover, n, query_goal::identify_b);
        std::uint64_t size = std::uint64_t{1} << n;
        for (std::uint64_t k = 1; k <= size; ++k) {
            knowledge_state ks;
            for (std::uint64_t b = 0; b < k; ++b) ks.candidates.push_back(b);
            CHECK(game.worst_case(ks) == static_cast<int>(k) - 1);
        }
    }
}

TEST_CASE("more candidates never cost fewer queries") {
    std::mt19937_64 rng(99);
    for (auto kind : {family_kind::dj, family_kind::simon}) {
        algorithm alg(kind, 2);
        query_game game(kind, 2, query_goal::solve_problem);
        auto everyone = whole_family(alg).candidates;
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<std::uint64_t> large, small;
            for (auto b : everyone)
                if (rng() & 1) large.push_back(b);
            if (large.empty()) continue;
            for (auto b : large)
                if (rng() & 1) small.push_back(b);
            if (small.empty()) continue;
            CHECK(game.worst_case({small}) <= game.worst_case({large}));
        }
    }
}

TEST_CASE("optimal first queries really achieve the minimax value") {
    query_game game(family_kind::simon, 2, query_goal::solve_problem);
    algorithm alg(family_kind::simon, 2);
    auto res = game.play(whole_family(alg));
    CHECK(res.worst_case_queries == 3);
    // at n=2 every argument is symmetric, so all four tie
    CHECK(res.optimal_first_queries.size() == 4);
}

TEST_CASE("identifying b exactly is at least as hard as solving the problem") {
    for (auto kind : {family_kind::grover, family_kind::dj, family_kind::simon}) {
        algorithm alg(kind, 2);
        query_game solve(kind, 2, query_goal::solve_problem);
        query_game identify(kind, 2, query_goal::identify_b);
        auto k = whole_family(alg);
        CHECK(identify.worst_case(k) >= solve.worst_case(k));
    }
}

TEST_CASE("unknown candidates and oversized families are rejected") {
    query_game game(family_kind::dj, 2, query_goal::solve_problem);
    CHECK_THROWS_AS(game.worst_case({{bit_string::parse("0001").value()}}), std::invalid_argument);
    // 72 members at n=3 exceed the exhaustive-search bound
    CHECK_THROWS_AS(query_game(family_kind::dj, 3, query_goal::solve_problem), capability_error);
}
