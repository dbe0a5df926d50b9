#pragma once

#include <limits>
#include <unordered_map>

#include "sharing.hpp"

namespace qsl {

enum class query_goal {
    identify_b,   // name Bob's exact choice
    solve_problem // Grover: locate the ball; DJ: constant vs balanced; Simon: find h
};

// What is known so far: the candidate b values consistent with everything
// observed. Initial knowledge is the whole family or a share-filtered subset.
struct knowledge_state {
    std::vector<std::uint64_t> candidates;
};

struct query_game_result {
    int worst_case_queries = 0;
    std::vector<std::uint64_t> optimal_first_queries; // all minimax ties
};

// Worst-case deterministic query complexity by exhaustive game-tree search:
// Alice picks the query, an adversary picks the worst consistent answer.
class query_game {
public:
    query_game(family_kind kind, int n, query_goal goal)
        : kind_(kind), n_(n), goal_(goal), members_(enumerate_family(kind, n)) {
        if (members_.size() > 64)
            throw capability_error("family of " + std::to_string(members_.size()) +
                                   " members exceeds the exhaustive-search bound of 64");
        for (std::size_t i = 0; i < members_.size(); ++i) {
            answers_.push_back(answer_of(members_[i]));
            index_by_b_[members_[i].b.value()] = i;
        }
    }

    std::uint64_t member_mask(const knowledge_state& k) const {
        std::uint64_t m = 0;
        for (auto b : k.candidates) {
            auto it = index_by_b_.find(b);
            if (it == index_by_b_.end())
                throw std::invalid_argument("candidate " + std::to_string(b) + " not in family");
            m |= std::uint64_t{1} << it->second;
        }
        if (m == 0) throw std::invalid_argument("candidate set must be nonempty");
        return m;
    }

    query_game_result play(const knowledge_state& k) {
        std::uint64_t mask = member_mask(k);
        query_game_result res;
        res.worst_case_queries = minimax(mask);
        if (res.worst_case_queries > 0) {
            int best = res.worst_case_queries;
            for (std::uint64_t a = 0; a < (std::uint64_t{1} << n_); ++a) {
                auto parts = split(mask, a);
                if (parts.size() < 2) continue;
                int worst = 0;
                for (auto p : parts) worst = std::max(worst, minimax(p));
                if (1 + worst == best) res.optimal_first_queries.push_back(a);
            }
        }
        return res;
    }

    int worst_case(const knowledge_state& k) { return play(k).worst_case_queries; }

private:
    // the quantity Alice must determine, per member
    std::uint64_t answer_of(const function_table& t) const {
        switch (goal_) {
            case query_goal::identify_b: return t.b.value();
            case query_goal::solve_problem:
                switch (kind_) {
                    case family_kind::grover: return t.b.value();
                    case family_kind::dj: {
                        std::uint64_t ones = 0;
                        for (auto v : t.values) ones += v;
                        return ones == 0 || ones == t.values.size() ? 0 : 1;
                    }
                    case family_kind::simon: return period_of(t).h.value();
                }
        }
        return 0;
    }

    bool solved(std::uint64_t mask) const {
        std::uint64_t ans = 0;
        bool first = true;
        for (std::size_t i = 0; i < members_.size(); ++i) {
            if (!(mask >> i & 1)) continue;
            if (first) {
                ans = answers_[i];
                first = false;
            } else if (answers_[i] != ans) {
                return false;
            }
        }
        return true;
    }

    std::vector<std::uint64_t> split(std::uint64_t mask, std::uint64_t a) const {
        std::unordered_map<std::uint64_t, std::uint64_t> by_value;
        for (std::size_t i = 0; i < members_.size(); ++i)
            if (mask >> i & 1) by_value[members_[i].values[a]] |= std::uint64_t{1} << i;
        std::vector<std::uint64_t> parts;
        for (auto& [v, m] : by_value) parts.push_back(m);
        return parts;
    }

    int minimax(std::uint64_t mask) {
        if (solved(mask)) return 0;
        auto it = memo_.find(mask);
        if (it != memo_.end()) return it->second;
        int best = std::numeric_limits<int>::max();
        for (std::uint64_t a = 0; a < (std::uint64_t{1} << n_); ++a) {
            auto parts = split(mask, a);
            if (parts.size() < 2) continue; // uninformative query
            int worst = 0;
            for (auto p : parts) worst = std::max(worst, minimax(p));
            best = std::min(best, 1 + worst);
        }
        memo_.emplace(mask, best);
        return best;
    }

    family_kind kind_;
    int n_;
    query_goal goal_;
    std::vector<function_table> members_;
    std::vector<std::uint64_t> answers_;
    std::unordered_map<std::uint64_t, std::size_t> index_by_b_;
    std::unordered_map<std::uint64_t, int> memo_;
};

inline query_game_result worst_case_queries(family_kind kind, int n, query_goal goal,
                                            const knowledge_state& k) {
    query_game g(kind, n, goal);
    return g.play(k);
}

inline knowledge_state whole_family(const algorithm& alg) {
    knowledge_state k;
    for (const auto& m : alg.members) k.candidates.push_back(m.b.value());
    return k;
}

// The speed-up comparison: classical counts with and without advanced
// knowledge of half of Bob's choice, against the quantum oracle-call count.
struct speedup_row {
    int no_knowledge = 0;
    int with_knowledge_max = 0; // worst over b and over admissible Alice shares
    int with_knowledge_min = 0;
    int quantum_calls = 0;
    bool quantum_matches_advanced = false;
};

inline speedup_row speedup_report(family_kind kind, int n) {
    algorithm alg(kind, n);
    sharing_context ctx(alg);
    query_game game(kind, n, query_goal::solve_problem);

    speedup_row row;
    row.no_knowledge = game.worst_case(whole_family(alg));

    int wmax = 0, wmin = std::numeric_limits<int>::max();
    for (const auto& m : alg.members) {
        std::uint64_t b = m.b.value();
        std::vector<share> shares = kind == family_kind::grover
                                        ? detail::grover_candidate_shares(alg, b)
                                        : good_half_tables(ctx, b);
        for (const auto& sh : shares) {
            knowledge_state k;
            for (auto c : candidate_set(alg, sh)) k.candidates.push_back(c);
            int w = game.worst_case(k);
            wmax = std::max(wmax, w);
            wmin = std::min(wmin, w);
        }
    }
    if (wmin == std::numeric_limits<int>::max()) wmin = 0;
    row.with_knowledge_max = wmax;
    row.with_knowledge_min = wmin;

    switch (kind) {
        case family_kind::grover: row.quantum_calls = alg.iterations(); break;
        case family_kind::dj: row.quantum_calls = 1; break;
        case family_kind::simon: row.quantum_calls = n - 1; break; // one call per iteration
    }
    row.quantum_matches_advanced = row.quantum_calls == row.with_knowledge_max;
    return row;
}

} // namespace qsl
