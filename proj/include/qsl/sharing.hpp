#pragma once

#include <functional>
#include <optional>
#include <set>

#include "pipeline.hpp"

namespace qsl {

// One share of the projection on Bob's choice. For Grover it is a set of
// independent parity observables on B with outcomes post-selected to match b;
// for DJ and Simon it is a set of table rows with their values (a half table).
struct share {
    family_kind kind = family_kind::grover;
    std::vector<std::pair<std::uint64_t, int>> parities; // (mask, post-selected bit)
    std::map<std::uint64_t, std::uint64_t> rows;         // argument -> value

    friend bool operator==(const share&, const share&) = default;
    friend auto operator<=>(const share&, const share&) = default;
};

struct sharing_pair {
    share alice_share;
    share bob_share;
    bool uses_parity_combinations = false; // any non-single-cell mask (Grover)
};

// Family members consistent with the share's post-selected outcomes.
inline std::set<std::uint64_t> candidate_set(const algorithm& alg, const share& sh) {
    std::set<std::uint64_t> out;
    for (const auto& m : alg.members) {
        std::uint64_t b = m.b.value();
        bool ok = true;
        if (sh.kind == family_kind::grover) {
            for (auto [mask, bit] : sh.parities)
                if ((std::popcount(b & mask) & 1) != bit) ok = false;
        } else {
            for (auto [a, val] : sh.rows)
                if (m.values[a] != val) ok = false;
        }
        if (ok) out.insert(b);
    }
    return out;
}

// Final pre-measurement state of the relativized algorithm plus its register
// entropies; computed once and reused across candidate checks.
struct sharing_context {
    algorithm alg;
    ensemble_state final_state;
    double entropy_b = 0;
    double entropy_a = 0;

    explicit sharing_context(const algorithm& a)
        : alg((check_size(a), a)),
          final_state(apply_stages(a.initial_state(), a.stages(identity_permutation(a.layout().nb)))) {
        entropy_b = entropy_of(final_state, {reg::b});
        entropy_a = entropy_of(final_state, {reg::a});
    }

    static void check_size(const algorithm& a) {
        if (a.layout().total_width() > 14)
            throw capability_error("sharing analysis bound exceeded: " +
                                   std::to_string(a.layout().total_width()) + " qubits > 14");
    }
};

// Condition (i): the two post-selected projections jointly single out b with
// no duplicated information. Grover: all masks of the pair independent and of
// joint full rank; DJ/Simon: disjoint row sets whose candidate sets intersect
// in exactly {b}.
inline bool check_condition_i(const algorithm& alg, std::uint64_t b, const sharing_pair& pair) {
    if (alg.kind == family_kind::grover) {
        std::vector<std::uint64_t> all;
        for (auto [m, bit] : pair.alice_share.parities) all.push_back(m);
        for (auto [m, bit] : pair.bob_share.parities) all.push_back(m);
        if (gf2_rank(all) != static_cast<int>(all.size())) return false; // duplicated information
        if (gf2_rank(all) != alg.n) return false;                        // under-determined
    } else {
        for (const auto& [a, val] : pair.alice_share.rows)
            if (pair.bob_share.rows.count(a)) return false;
    }
    auto ca = candidate_set(alg, pair.alice_share);
    auto cb = candidate_set(alg, pair.bob_share);
    std::set<std::uint64_t> joint;
    std::set_intersection(ca.begin(), ca.end(), cb.begin(), cb.end(),
                          std::inserter(joint, joint.begin()));
    return joint == std::set<std::uint64_t>{b};
}

namespace detail {

// Half-table admissibility: no share may alone fix the solution. DJ: all
// values equal and at most half the rows; Simon: no value appears twice
// (which would already fix the period).
inline bool half_table_predicate(family_kind kind, int rows_total,
                                 const std::map<std::uint64_t, std::uint64_t>& rows) {
    if (rows.empty()) return false;
    if (kind == family_kind::dj) {
        std::uint64_t first = rows.begin()->second;
        for (const auto& [a, v] : rows)
            if (v != first) return false;
        return 2 * static_cast<int>(rows.size()) <= rows_total;
    }
    std::set<std::uint64_t> seen;
    for (const auto& [a, v] : rows)
        if (!seen.insert(v).second) return false;
    return true;
}

} // namespace detail

// Per-share half of condition (ii): the projection on the share "properly"
// reduces the entropies of both rho_B and rho_A of the final state. For
// Grover the quantitative form is exactly p = n/2 post-selected bits.
inline bool share_admissible(const sharing_context& ctx, std::uint64_t b, const share& sh) {
    const algorithm& alg = ctx.alg;
    if (sh.kind != alg.kind) return false;
    if (alg.kind == family_kind::grover) {
        if (alg.n % 2 != 0) return false;
        if (static_cast<int>(sh.parities.size()) != alg.n / 2) return false;
        std::vector<std::uint64_t> masks;
        for (auto [m, bit] : sh.parities) {
            masks.push_back(m);
            if ((std::popcount(b & m) & 1) != bit) return false; // not post-selected to b
        }
        return gf2_rank(masks) == static_cast<int>(masks.size());
    }
    const auto& table = alg.member(b);
    for (const auto& [a, v] : sh.rows)
        if (table.values[a] != v) return false;
    if (!detail::half_table_predicate(alg.kind, table.rows(), sh.rows)) return false;
    auto cand = candidate_set(alg, sh);
    auto pr = project_b_support(ctx.final_state, cand);
    double sb = entropy_of(pr.post, {reg::b});
    double sa = entropy_of(pr.post, {reg::a});
    return sb < ctx.entropy_b - amp_tol && sa < ctx.entropy_a - amp_tol;
}

inline bool check_condition_ii(const sharing_context& ctx, std::uint64_t b, const sharing_pair& pair) {
    return share_admissible(ctx, b, pair.alice_share) && share_admissible(ctx, b, pair.bob_share);
}

// All admissible Alice shares of the table of f_b (DJ and Simon only).
inline std::vector<share> good_half_tables(const sharing_context& ctx, std::uint64_t b) {
    const algorithm& alg = ctx.alg;
    if (alg.kind == family_kind::grover)
        throw std::invalid_argument("good half tables are defined for DJ and Simon families");
    const auto& table = alg.member(b);
    int rows = table.rows();
    std::vector<share> out;
    for (std::uint64_t subset = 1; subset + 1 < (std::uint64_t{1} << rows); ++subset) {
        share sh;
        sh.kind = alg.kind;
        for (int a = 0; a < rows; ++a)
            if (subset >> a & 1) sh.rows[static_cast<std::uint64_t>(a)] = table.values[static_cast<std::size_t>(a)];
        if (share_admissible(ctx, b, sh)) out.push_back(std::move(sh));
    }
    return out;
}

namespace detail {

inline std::vector<share> grover_candidate_shares(const algorithm& alg, std::uint64_t b) {
    std::vector<share> out;
    if (alg.n % 2 != 0) return out;
    int p = alg.n / 2;
    std::uint64_t nmasks = (std::uint64_t{1} << alg.n) - 1;
    // all p-subsets of nonzero masks, kept when independent
    std::vector<std::uint64_t> masks;
    for (std::uint64_t m = 1; m <= nmasks; ++m) masks.push_back(m);
    std::vector<int> pick(static_cast<std::size_t>(p));
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == p) {
            share sh;
            sh.kind = family_kind::grover;
            std::vector<std::uint64_t> ms;
            for (int i : pick) {
                std::uint64_t m = masks[static_cast<std::size_t>(i)];
                ms.push_back(m);
                sh.parities.emplace_back(m, std::popcount(b & m) & 1);
            }
            if (gf2_rank(ms) == p) out.push_back(std::move(sh));
            return;
        }
        for (int i = start; i < static_cast<int>(masks.size()); ++i) {
            pick[static_cast<std::size_t>(depth)] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
    return out;
}

} // namespace detail

// Condition (iii): every division of the projection on Bob's choice that
// passes (i) and (ii), as duplicate-free unordered pairs in canonical order.
// Swapping the Alice/Bob assignment of any returned pair is again valid.
inline std::vector<sharing_pair> enumerate_sharings(const sharing_context& ctx, std::uint64_t b) {
    const algorithm& alg = ctx.alg;
    std::vector<share> candidates;
    if (alg.kind == family_kind::grover)
        candidates = detail::grover_candidate_shares(alg, b);
    else
        candidates = good_half_tables(ctx, b);
    std::vector<sharing_pair> out;
    for (std::size_t i = 0; i < candidates.size(); ++i)
        for (std::size_t j = i + 1; j < candidates.size(); ++j) {
            sharing_pair pair{candidates[i], candidates[j]};
            if (!check_condition_i(alg, b, pair)) continue;
            if (!check_condition_ii(ctx, b, pair)) continue;
            for (auto [m, bit] : pair.alice_share.parities)
                if (std::popcount(m) > 1) pair.uses_parity_combinations = true;
            for (auto [m, bit] : pair.bob_share.parities)
                if (std::popcount(m) > 1) pair.uses_parity_combinations = true;
            out.push_back(std::move(pair));
        }
    return out;
}

struct advanced_knowledge_report {
    projection end_projection;     // on the final pre-measurement state
    ensemble_state initial_state;  // back-evolved projection: Alice's knowledge
    std::set<std::uint64_t> b_support;
    double entropy_b_before = 0;
    double entropy_b_after = 0;
};

// Back-evolve the share's end-of-algorithm projection to before the run: the
// result is Alice knowing the share (e.g. the good half table) in advance.
inline advanced_knowledge_report advanced_knowledge_projection(const sharing_context& ctx,
                                                               std::uint64_t b, const share& sh) {
    if (!share_admissible(ctx, b, sh))
        throw std::invalid_argument("share is not Alice-admissible for this b");
    const algorithm& alg = ctx.alg;
    auto stages = alg.stages(identity_permutation(alg.layout().nb));
    advanced_knowledge_report rep;
    rep.end_projection = project_b_support(ctx.final_state, candidate_set(alg, sh));
    rep.initial_state = back_evolve(rep.end_projection.post, stages);
    rep.entropy_b_before = entropy_of(alg.initial_state(), {reg::b});
    rep.entropy_b_after = entropy_of(rep.initial_state, {reg::b});
    for (const auto& [t, v] : rep.initial_state.parts)
        for (std::size_t i = 0; i < rep.initial_state.layout.dim(); ++i)
            if (std::abs(v(static_cast<Eigen::Index>(i))) > amp_tol)
                rep.b_support.insert(rep.initial_state.layout.decompose(i).b);
    return rep;
}

} // namespace qsl
