#pragma once

#include "sharing.hpp"

namespace qsl {

// One classical computation history: a pair of sharp basis states around a
// single function evaluation, with a constant phase factor (one tag and a
// sign). The after-state replaces v by v xor f_b(a).
struct history {
    phase_tag tag = plain_tag;
    int sign = 1;
    std::uint64_t b = 0;
    std::uint64_t a = 0; // the queried argument
    std::uint64_t v_before = 0;
    std::uint64_t v_after = 0;
    share source; // the advanced-knowledge share that permitted the query

    // identity used for deduplication across shares
    auto key() const { return std::tuple{tag, sign, b, a, v_before}; }
};

struct history_bundle {
    family_kind kind = family_kind::grover;
    int n = 2;
    std::vector<history> histories;
};

namespace detail {

// Initial V contents present in the algorithm's preparation, with their
// signs: {(0,+),(1,-)} for the (|0>-|1>) kickback factor, {(0,+)} for Simon.
inline std::vector<std::pair<std::uint64_t, int>> v_components(family_kind kind) {
    if (kind == family_kind::simon) return {{0, 1}};
    return {{0, 1}, {1, -1}};
}

} // namespace detail

// Histories generated by one Alice share for one b: one history per query the
// share permits (Grover: arguments inside the candidate set; DJ/Simon:
// arguments outside the half table) and per initial V component.
inline std::vector<history> enumerate_histories(const sharing_context& ctx, std::uint64_t b,
                                                const share& sh) {
    const algorithm& alg = ctx.alg;
    if (!share_admissible(ctx, b, sh))
        throw std::invalid_argument("share is not admissible for this b");
    std::vector<std::uint64_t> queries;
    if (alg.kind == family_kind::grover) {
        for (auto c : candidate_set(alg, sh)) queries.push_back(c);
    } else {
        for (std::uint64_t a = 0; a < (std::uint64_t{1} << alg.n); ++a)
            if (!sh.rows.count(a)) queries.push_back(a);
    }
    std::vector<history> out;
    for (auto a : queries)
        for (auto [v0, sign] : detail::v_components(alg.kind)) {
            history h;
            h.tag = alg.tag_of(b);
            h.sign = sign;
            h.b = b;
            h.a = a;
            h.v_before = v0;
            h.v_after = v0 ^ oracle_value(alg.kind, alg.n, b, a);
            h.source = sh;
            out.push_back(std::move(h));
        }
    return out;
}

namespace detail {

// Alice share families used to build the full bundle. For Grover at odd n
// there is no p = n/2 split; rank-floor(n/2) parity sets still generate a
// complete query cover, which is what the reconstruction identity needs.
inline std::vector<share> alice_shares_for(const sharing_context& ctx, std::uint64_t b) {
    const algorithm& alg = ctx.alg;
    if (alg.kind != family_kind::grover) return good_half_tables(ctx, b);
    if (alg.n % 2 == 0) return grover_candidate_shares(alg, b);
    std::vector<share> out;
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << alg.n); ++m) {
        share sh;
        sh.kind = family_kind::grover;
        sh.parities.emplace_back(m, std::popcount(b & m) & 1);
        out.push_back(std::move(sh));
    }
    return out;
}

} // namespace detail

// Union over all b and all Alice shares, with exact duplicates (histories
// agreeing on tag, sign, b, a, v) merged once.
inline history_bundle full_bundle(const sharing_context& ctx) {
    const algorithm& alg = ctx.alg;
    history_bundle bundle{alg.kind, alg.n, {}};
    std::set<std::tuple<phase_tag, int, std::uint64_t, std::uint64_t, std::uint64_t>> seen;
    for (const auto& m : alg.members) {
        std::uint64_t b = m.b.value();
        for (const auto& sh : detail::alice_shares_for(ctx, b)) {
            std::vector<history> hs;
            if (alg.kind == family_kind::grover && alg.n % 2 != 0) {
                // bypass admissibility (no even split exists); same generation rule
                for (auto c : candidate_set(alg, sh))
                    for (auto [v0, sign] : detail::v_components(alg.kind)) {
                        history h;
                        h.tag = alg.tag_of(b);
                        h.sign = sign;
                        h.b = b;
                        h.a = c;
                        h.v_before = v0;
                        h.v_after = v0 ^ oracle_value(alg.kind, alg.n, b, c);
                        h.source = sh;
                        hs.push_back(std::move(h));
                    }
            } else {
                hs = enumerate_histories(ctx, b, sh);
            }
            for (auto& h : hs)
                if (seen.insert(h.key()).second) bundle.histories.push_back(std::move(h));
        }
    }
    return bundle;
}

namespace detail {

inline ensemble_state superpose_at(const sharing_context& ctx, const history_bundle& bundle,
                                   bool after) {
    ensemble_state s(ctx.alg.layout());
    for (const auto& h : bundle.histories) {
        std::uint64_t v = after ? h.v_after : h.v_before;
        s.part(h.tag)(static_cast<Eigen::Index>(s.layout.index(h.b, h.a, v))) +=
            static_cast<double>(h.sign);
    }
    s.renormalize();
    return s;
}

} // namespace detail

// Normalized sum of the before-states; for a complete bundle this is the
// pre-function-evaluation state of the algorithm.
inline ensemble_state superpose_before(const sharing_context& ctx, const history_bundle& bundle) {
    return detail::superpose_at(ctx, bundle, false);
}

// Normalized sum of the after-states; for a complete bundle this is the
// post-function-evaluation state.
inline ensemble_state superpose_after(const sharing_context& ctx, const history_bundle& bundle) {
    return detail::superpose_at(ctx, bundle, true);
}

// The basis rotation branches each history over all A values; the branches
// interfere to give the final pre-measurement state.
inline ensemble_state branch_under_ua(const sharing_context& ctx, const history_bundle& bundle) {
    return apply_ua(superpose_after(ctx, bundle), ctx.alg.rotation());
}

struct reconstruction_report {
    double before_deviation = 0; // vs the algorithm's pre-U_f state
    double after_deviation = 0;  // vs the post-U_f state
    double final_deviation = 0;  // vs the final pre-measurement state
    bool ok = false;
};

inline reconstruction_report check_reconstruction(const sharing_context& ctx,
                                                  const history_bundle& bundle) {
    const algorithm& alg = ctx.alg;
    ensemble_state pre = alg.initial_state();
    ensemble_state post = apply_uf(pre, alg.kind, alg.n);
    reconstruction_report rep;
    rep.before_deviation = superpose_before(ctx, bundle).distance(pre);
    rep.after_deviation = superpose_after(ctx, bundle).distance(post);
    rep.final_deviation = branch_under_ua(ctx, bundle).distance(apply_ua(post, alg.rotation()));
    rep.ok = rep.before_deviation <= amp_tol && rep.after_deviation <= amp_tol &&
             rep.final_deviation <= amp_tol;
    return rep;
}

} // namespace qsl
