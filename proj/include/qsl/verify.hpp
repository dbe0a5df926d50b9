#pragma once

#include <algorithm>

#include "trace.hpp"

namespace qsl {

struct check_result {
    std::string name;
    bool passed = false;
    double deviation = 0;
    std::string detail;
};

namespace detail {

inline void add(std::vector<check_result>& out, const std::string& name, bool passed,
                double deviation = 0, const std::string& detail = "") {
    out.push_back({name, passed, deviation, detail});
}

// closed-form grover n=2 states used as independent references
inline ensemble_state grover2_reference(const algorithm& alg, int stage) {
    auto l = alg.layout();
    ensemble_state s(l);
    for (std::uint64_t b = 0; b < 4; ++b) {
        vec& p = s.part(alg.tag_of(b));
        switch (stage) {
            case 0: // uniform A against the kickback factor
                for (std::uint64_t a = 0; a < 4; ++a) {
                    p(static_cast<Eigen::Index>(l.index(b, a, 0))) = 1.0 / (4.0 * std::sqrt(2.0));
                    p(static_cast<Eigen::Index>(l.index(b, a, 1))) = -1.0 / (4.0 * std::sqrt(2.0));
                }
                break;
            case 1: // after the function evaluation
                for (std::uint64_t a = 0; a < 4; ++a) {
                    double m = a == b ? -1.0 : 1.0;
                    p(static_cast<Eigen::Index>(l.index(b, a, 0))) = m / (4.0 * std::sqrt(2.0));
                    p(static_cast<Eigen::Index>(l.index(b, a, 1))) = -m / (4.0 * std::sqrt(2.0));
                }
                break;
            case 2: // after the rotation: perfectly correlated
                p(static_cast<Eigen::Index>(l.index(b, b, 0))) = 1.0 / (2.0 * std::sqrt(2.0));
                p(static_cast<Eigen::Index>(l.index(b, b, 1))) = -1.0 / (2.0 * std::sqrt(2.0));
                break;
        }
    }
    return s;
}

inline std::vector<preparation_permutation> all_permutations(int nb) {
    std::vector<std::uint64_t> base(std::size_t{1} << nb);
    for (std::size_t i = 0; i < base.size(); ++i) base[i] = i;
    std::vector<preparation_permutation> out;
    do {
        out.push_back(base);
    } while (std::next_permutation(base.begin(), base.end()));
    return out;
}

} // namespace detail

inline std::vector<check_result> verify_states() {
    std::vector<check_result> out;
    algorithm alg(family_kind::grover, 2);

    auto init = alg.initial_state();
    double d0 = init.distance(detail::grover2_reference(alg, 0));
    detail::add(out, "grover2-initial-state", d0 <= amp_tol, d0);

    auto post = apply_uf(init, family_kind::grover, 2);
    double d1 = post.distance(detail::grover2_reference(alg, 1));
    detail::add(out, "grover2-post-evaluation-state", d1 <= amp_tol, d1);

    auto fin = apply_ua(post, rotation_kind::inversion_about_mean);
    double d2 = fin.distance(detail::grover2_reference(alg, 2));
    detail::add(out, "grover2-final-state", d2 <= amp_tol, d2);

    // sharp-choice runs under every preparation permutation reach a=b
    double worst = 0;
    bool all_ok = true;
    for (const auto& perm : detail::all_permutations(2))
        for (std::uint64_t b = 0; b < 4; ++b) {
            auto rep = deferred_equivalence(alg, b, perm);
            worst = std::max({worst, rep.max_state_deviation, rep.max_statistics_deviation,
                              rep.max_back_evolution_deviation});
            if (!rep.equivalent) all_ok = false;
            auto first = project(alg.initial_state(), alg.b_hat(), inverse_permutation(perm)[b]);
            auto dist = measure(apply_stages(first.post, alg.stages(perm)), alg.a_hat());
            if (dist.size() != 1 || dist[0].eigenvalue != b) all_ok = false;
        }
    detail::add(out, "grover2-bob-film-all-permutations", all_ok, worst);

    // dj: constant members answer all zeros, balanced never do
    bool dj_ok = true;
    algorithm dj(family_kind::dj, 2);
    for (const auto& m : dj.members) {
        auto f = apply_stages(dj.sharp_state(m.b.value(), dj.tag_of(m.b.value())),
                              dj.stages(identity_permutation(dj.layout().nb)));
        double p_zero = 0;
        for (const auto& o : measure(f, dj.a_hat()))
            if (o.eigenvalue == 0) p_zero = o.probability;
        std::uint64_t ones = 0;
        for (auto v : m.values) ones += v;
        bool constant = ones == 0 || ones == m.values.size();
        if (std::abs(p_zero - (constant ? 1.0 : 0.0)) > amp_tol) dj_ok = false;
    }
    detail::add(out, "dj2-constant-vs-balanced-outcomes", dj_ok);

    // simon: outcome support is exactly the strings orthogonal to h
    bool simon_ok = true;
    algorithm sm(family_kind::simon, 2);
    for (const auto& m : sm.members) {
        auto f = apply_stages(sm.sharp_state(m.b.value(), sm.tag_of(m.b.value())),
                              sm.stages(identity_permutation(sm.layout().nb)));
        std::set<std::uint64_t> support;
        for (const auto& o : measure(f, sm.a_hat())) support.insert(o.eigenvalue);
        std::set<std::uint64_t> expected;
        for (const auto& s : orthogonal_strings({period_of(m).h}, 2)) expected.insert(s.value());
        if (support != expected) simon_ok = false;
    }
    detail::add(out, "simon2-outcomes-orthogonal-to-period", simon_ok);
    return out;
}

inline std::vector<check_result> verify_entropies() {
    std::vector<check_result> out;
    double s_pair = entropy_of(correlated_pair_state(2), {reg::b, reg::a});
    detail::add(out, "pair-state-entropy-two-bits", std::abs(s_pair - 2.0) <= amp_tol,
                std::abs(s_pair - 2.0));

    algorithm g(family_kind::grover, 2);
    auto gf = apply_stages(g.initial_state(), g.stages(identity_permutation(2)));
    double s_b = entropy_of(gf, {reg::b});
    detail::add(out, "grover2-final-choice-entropy", std::abs(s_b - 2.0) <= amp_tol,
                std::abs(s_b - 2.0));

    algorithm dj(family_kind::dj, 2);
    auto df = apply_stages(dj.initial_state(), dj.stages(identity_permutation(dj.layout().nb)));
    double db = entropy_of(df, {reg::b});
    double da = entropy_of(df, {reg::a});
    detail::add(out, "dj2-final-entropies-three-and-two-bits",
                std::abs(db - 3.0) <= amp_tol && std::abs(da - 2.0) <= amp_tol,
                std::max(std::abs(db - 3.0), std::abs(da - 2.0)));

    // every admissible one-bit share halves S(rho_B) of the initial mixture
    sharing_context ctx(g);
    bool halved = true;
    double worst = 0;
    for (std::uint64_t b = 0; b < 4; ++b)
        for (const auto& sh : detail::grover_candidate_shares(g, b)) {
            auto rep = advanced_knowledge_projection(ctx, b, sh);
            worst = std::max(worst, std::abs(rep.entropy_b_after - 1.0));
            if (std::abs(rep.entropy_b_before - 2.0) > amp_tol ||
                std::abs(rep.entropy_b_after - 1.0) > amp_tol)
                halved = false;
        }
    detail::add(out, "grover2-share-projection-halves-entropy", halved, worst);
    return out;
}

inline std::vector<check_result> verify_sharing() {
    std::vector<check_result> out;
    sharing_context g(algorithm(family_kind::grover, 2));
    bool g_ok = true;
    for (std::uint64_t b = 0; b < 4; ++b)
        if (enumerate_sharings(g, b).size() != 3) g_ok = false;
    detail::add(out, "grover2-three-divisions", g_ok);

    sharing_context dj(algorithm(family_kind::dj, 2));
    bool dj_ok = true;
    for (const auto& m : dj.alg.members) {
        std::uint64_t ones = 0;
        for (auto v : m.values) ones += v;
        bool constant = ones == 0 || ones == m.values.size();
        std::size_t expected = constant ? 3 : 1;
        if (enumerate_sharings(dj, m.b.value()).size() != expected) dj_ok = false;
    }
    detail::add(out, "dj2-division-counts", dj_ok);

    // the counterexample shares are rejected
    std::uint64_t b = bit_string::parse("0011").value();
    share lone{family_kind::dj, {}, {{0, 0}}};
    share mixed{family_kind::dj, {}, {{0, 0}, {1, 0}, {3, 1}}};
    bool rejected = !share_admissible(dj, b, lone) && !share_admissible(dj, b, mixed);
    detail::add(out, "dj2-counterexamples-rejected", rejected);

    sharing_context sm(algorithm(family_kind::simon, 2));
    auto good = good_half_tables(sm, b);
    auto has_rows = [&](std::set<std::uint64_t> rows) {
        for (const auto& sh : good) {
            std::set<std::uint64_t> r;
            for (const auto& [a, v] : sh.rows) r.insert(a);
            if (r == rows) return true;
        }
        return false;
    };
    detail::add(out, "simon2-half-tables-present",
                has_rows({0, 2}) && has_rows({1, 3}) && enumerate_sharings(sm, b).size() == 2);
    return out;
}

inline std::vector<check_result> verify_histories() {
    std::vector<check_result> out;
    for (auto kind : {family_kind::grover, family_kind::dj, family_kind::simon}) {
        sharing_context ctx(algorithm(kind, 2));
        auto rep = check_reconstruction(ctx, full_bundle(ctx));
        detail::add(out, std::string(family_name(kind)) + "2-history-reconstruction", rep.ok,
                    std::max({rep.before_deviation, rep.after_deviation, rep.final_deviation}));
    }
    sharing_context g3(algorithm(family_kind::grover, 3));
    auto rep = check_reconstruction(g3, full_bundle(g3));
    detail::add(out, "grover3-history-reconstruction", rep.ok,
                std::max({rep.before_deviation, rep.after_deviation, rep.final_deviation}));
    return out;
}

inline std::vector<check_result> verify_classical() {
    std::vector<check_result> out;
    for (auto kind : {family_kind::grover, family_kind::dj, family_kind::simon}) {
        auto row = speedup_report(kind, 2);
        bool ok = row.no_knowledge == 3 && row.with_knowledge_max == 1 &&
                  row.with_knowledge_min == 1 && row.quantum_calls == 1;
        detail::add(out, std::string(family_name(kind)) + "2-query-counts", ok);
    }
    auto big = speedup_report(family_kind::grover, 4);
    detail::add(out, "grover4-query-counts",
                big.no_knowledge == 15 && big.with_knowledge_max == 3 && big.quantum_calls == 3);
    return out;
}

inline check_result verify_family_file(const std::string& path) {
    try {
        auto f = load_family_file(path);
        return {"family-file-valid", true, 0,
                family_name(f.kind) + std::string(" n=") + std::to_string(f.n) + ", " +
                    std::to_string(f.subset.size()) + " explicit members"};
    } catch (const std::exception& e) {
        return {"family-file-valid", false, 0, e.what()};
    }
}

inline std::vector<check_result> verify_suite(const std::string& suite) {
    if (suite == "states") return verify_states();
    if (suite == "entropies") return verify_entropies();
    if (suite == "sharing") return verify_sharing();
    if (suite == "histories") return verify_histories();
    if (suite == "classical") return verify_classical();
    if (suite == "all") {
        std::vector<check_result> out;
        for (const char* s : {"states", "entropies", "sharing", "histories", "classical"})
            for (auto& c : verify_suite(s)) out.push_back(std::move(c));
        return out;
    }
    throw std::invalid_argument("unknown suite '" + suite +
                                "' (expected states, entropies, sharing, histories, classical or all)");
}

inline json checks_to_json(const std::vector<check_result>& checks) {
    json arr = json::array();
    bool all = true;
    for (const auto& c : checks) {
        arr.push_back({{"name", c.name},
                       {"passed", c.passed},
                       {"deviation", c.deviation},
                       {"detail", c.detail}});
        if (!c.passed) all = false;
    }
    return {{"checks", std::move(arr)}, {"passed", all}};
}

} // namespace qsl
