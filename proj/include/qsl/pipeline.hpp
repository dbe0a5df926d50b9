#pragma once

#include <random>

#include "measurement.hpp"
#include "oracles.hpp"
#include "unitaries.hpp"

namespace qsl {

// One oracle algorithm instance: family, size, register layout, stage plan.
struct algorithm {
    family_kind kind;
    int n;
    std::vector<function_table> members;

    algorithm(family_kind k, int size) : kind(k), n(size), members(enumerate_family(k, size)) {}

    register_layout layout() const {
        return register_layout(choice_width(kind, n), n, output_width(kind, n));
    }

    rotation_kind rotation() const {
        return kind == family_kind::grover ? rotation_kind::inversion_about_mean
                                           : rotation_kind::hadamard_a;
    }

    // Rounds of (U_f, U_A). Exact at n=2; floor((pi/4) 2^(n/2)) otherwise.
    int iterations() const {
        if (kind != family_kind::grover) return 1;
        int k = static_cast<int>(std::floor(M_PI / 4.0 * std::pow(2.0, n / 2.0)));
        return std::max(k, 1);
    }

    phase_tag tag_of(std::uint64_t b) const {
        for (std::size_t i = 0; i < members.size(); ++i)
            if (members[i].b.value() == b) return static_cast<phase_tag>(i);
        throw std::invalid_argument("b=" + bit_string(b, choice_width(kind, n)).str() +
                                    " is not a member of the family");
    }

    const function_table& member(std::uint64_t b) const {
        return members[static_cast<std::size_t>(tag_of(b))];
    }

    // A and V prepared as the algorithm requires: A uniform; V in (|0>-|1>)
    // for Grover and DJ (phase kickback), all zeros for Simon.
    vec av_preparation() const {
        register_layout l = layout();
        vec av = vec::Zero(static_cast<Eigen::Index>(l.dim_a() * l.dim_v()));
        for (std::uint64_t a = 0; a < l.dim_a(); ++a) {
            if (kind == family_kind::simon) {
                av(static_cast<Eigen::Index>(a * l.dim_v())) = 1;
            } else {
                av(static_cast<Eigen::Index>(a * l.dim_v())) = 1;
                av(static_cast<Eigen::Index>(a * l.dim_v() + 1)) = -1;
            }
        }
        av.normalize();
        return av;
    }

    // Maximally mixed B over the family, in the random phase representation:
    // one tag per member, B tensored with the A,V preparation.
    ensemble_state initial_state() const {
        register_layout l = layout();
        ensemble_state s(l);
        vec av = av_preparation();
        double c = 1.0 / std::sqrt(static_cast<double>(members.size()));
        for (std::size_t i = 0; i < members.size(); ++i) {
            vec& p = s.part(static_cast<phase_tag>(i));
            std::uint64_t b = members[i].b.value();
            for (std::uint64_t a = 0; a < l.dim_a(); ++a)
                for (std::uint64_t v = 0; v < l.dim_v(); ++v)
                    p(static_cast<Eigen::Index>(l.index(b, a, v))) =
                        c * av(static_cast<Eigen::Index>(a * l.dim_v() + v));
        }
        return s;
    }

    // Sharp-B state carrying the given phase tag (what Bob's measurement of
    // B-hat leaves behind).
    ensemble_state sharp_state(std::uint64_t b, phase_tag t) const {
        register_layout l = layout();
        ensemble_state s(l);
        vec av = av_preparation();
        vec& p = s.part(t);
        for (std::uint64_t a = 0; a < l.dim_a(); ++a)
            for (std::uint64_t v = 0; v < l.dim_v(); ++v)
                p(static_cast<Eigen::Index>(l.index(b, a, v))) =
                    av(static_cast<Eigen::Index>(a * l.dim_v() + v));
        return s;
    }

    // U_B then `iterations` rounds of (U_f, U_A).
    std::vector<pipeline_stage> stages(const preparation_permutation& perm) const {
        std::vector<pipeline_stage> st;
        pipeline_stage ub{pipeline_stage::op::ub, perm, kind, n, rotation()};
        st.push_back(ub);
        for (int i = 0; i < iterations(); ++i) {
            st.push_back({pipeline_stage::op::uf, {}, kind, n, rotation()});
            st.push_back({pipeline_stage::op::ua, {}, kind, n, rotation()});
        }
        return st;
    }

    observable b_hat() const { return observable::full_content(reg::b, choice_width(kind, n)); }
    observable a_hat() const { return observable::full_content(reg::a, n); }
};

// The B-A correlated state of the extended summary: a maximally mixed pair
// with perfectly correlated contents, V ancilla held at zero.
inline ensemble_state correlated_pair_state(int n) {
    register_layout l(n, n, 1);
    ensemble_state s(l);
    double c = 1.0 / std::sqrt(static_cast<double>(l.dim_b()));
    for (std::uint64_t b = 0; b < l.dim_b(); ++b)
        s.part(static_cast<phase_tag>(b))(static_cast<Eigen::Index>(l.index(b, b, 0))) = c;
    return s;
}

struct deferred_report {
    bool equivalent = false;
    double max_state_deviation = 0;      // Bob-first final vs end-projected final
    double max_statistics_deviation = 0; // A-hat distributions across the two paths
    double max_back_evolution_deviation = 0;
};

// Measuring B-hat before the pipeline vs projecting on b at the end must give
// the same final state and the same A-hat statistics, and the end projection
// back-evolved must equal the initial one.
inline deferred_report deferred_equivalence(const algorithm& alg, std::uint64_t b,
                                            const preparation_permutation& perm) {
    deferred_report rep;
    std::uint64_t source = inverse_permutation(perm)[b]; // the randomly selected value
    auto st = alg.stages(perm);

    // Bob's film: measure B-hat first (outcome post-selected to the source
    // value), then run the pipeline.
    ensemble_state initial = alg.initial_state();
    auto first = project(initial, alg.b_hat(), source);
    ensemble_state film_final = apply_stages(first.post, st);

    // Relativized: run the pipeline on the mixture, project on b at the end.
    ensemble_state end = apply_stages(initial, st);
    auto last = project(end, alg.b_hat(), b);

    rep.max_state_deviation = film_final.distance(last.post);

    auto da = measure(film_final, alg.a_hat());
    auto db = measure(last.post, alg.a_hat());
    std::map<std::uint64_t, double> ma, mb;
    for (auto& o : da) ma[o.eigenvalue] = o.probability;
    for (auto& o : db) mb[o.eigenvalue] = o.probability;
    for (auto& [e, p] : ma)
        rep.max_statistics_deviation =
            std::max(rep.max_statistics_deviation, std::abs(p - (mb.count(e) ? mb[e] : 0.0)));
    for (auto& [e, p] : mb)
        if (!ma.count(e)) rep.max_statistics_deviation = std::max(rep.max_statistics_deviation, p);

    // End projection back-evolved equals the initial projection.
    ensemble_state back = back_evolve(last.post, st);
    rep.max_back_evolution_deviation = back.distance(first.post);

    rep.equivalent = rep.max_state_deviation <= amp_tol &&
                     rep.max_statistics_deviation <= amp_tol &&
                     rep.max_back_evolution_deviation <= amp_tol;
    return rep;
}

inline std::uint64_t sample_outcome(const std::vector<measurement_outcome>& dist,
                                    std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double x = u(rng);
    double acc = 0;
    for (const auto& o : dist) {
        acc += o.probability;
        if (x < acc) return o.eigenvalue;
    }
    return dist.back().eigenvalue;
}

struct simon_run_result {
    std::vector<bit_string> shots;            // raw A-hat outcomes
    std::vector<bit_string> distinct_nonzero; // kept strings s_j, in discovery order
    bit_string h;
    int evaluations = 0; // one oracle call per shot
};

// Iterate the quantum part of Simon's algorithm until the kept strings span
// the space orthogonal to h, then recover h by solving s.h = 0 for all s.
inline simon_run_result simon_end_to_end(const algorithm& alg, std::uint64_t b,
                                         std::mt19937_64& rng) {
    if (alg.kind != family_kind::simon) throw std::invalid_argument("not a simon instance");
    ensemble_state final_state =
        apply_stages(alg.sharp_state(b, alg.tag_of(b)), alg.stages(identity_permutation(alg.layout().nb)));
    auto dist = measure(final_state, alg.a_hat());

    simon_run_result res;
    std::vector<std::uint64_t> kept;
    while (gf2_rank(kept) < alg.n - 1) {
        std::uint64_t s = sample_outcome(dist, rng);
        ++res.evaluations;
        res.shots.push_back(bit_string(s, alg.n));
        if (s == 0) continue; // tells nothing about b or the solution
        if (std::find(kept.begin(), kept.end(), s) == kept.end()) {
            kept.push_back(s);
            res.distinct_nonzero.push_back(bit_string(s, alg.n));
        }
        if (res.evaluations > 10000)
            throw std::runtime_error("simon iteration failed to converge");
    }
    // unique nonzero h orthogonal to every kept string
    for (std::uint64_t h = 1; h < (std::uint64_t{1} << alg.n); ++h) {
        bool ok = true;
        for (auto s : kept)
            if (std::popcount(s & h) & 1) ok = false;
        if (ok) {
            res.h = bit_string(h, alg.n);
            return res;
        }
    }
    throw std::runtime_error("no period consistent with the collected strings");
}

} // namespace qsl
