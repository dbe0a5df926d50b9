#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "state.hpp"

namespace qsl {

// Observable on the content of one register, expressed as a list of parity
// (XOR) masks over its bits. Full content and single cells are special cases:
// FULL is the list of unit masks, BIT_CELL(i) a single unit mask, PARITY(m) a
// single mask. SUBSET members must be linearly independent, so that combining
// observables never projects twice on the same information.
struct observable {
    reg target = reg::b;
    int width = 1;
    std::vector<std::uint64_t> masks;
    std::string label;

    static observable full_content(reg r, int width) {
        observable o{r, width, {}, "full"};
        for (int i = 0; i < width; ++i) o.masks.push_back(std::uint64_t{1} << (width - 1 - i));
        return o;
    }
    static observable bit_cell(reg r, int width, int cell) {
        if (cell < 0 || cell >= width) throw std::invalid_argument("bit cell index out of range");
        observable o{r, width, {std::uint64_t{1} << (width - 1 - cell)}, "cell" + std::to_string(cell)};
        return o;
    }
    static observable parity(reg r, int width, std::uint64_t mask) {
        observable o{r, width, {mask}, "parity:" + bit_string(mask, width).str()};
        o.check();
        return o;
    }
    static observable subset(reg r, int width, std::vector<std::uint64_t> masks) {
        observable o{r, width, std::move(masks), "subset"};
        o.check();
        return o;
    }

    void check() const {
        for (auto m : masks) {
            if (m == 0) throw std::invalid_argument("parity mask must be nonzero");
            if (m >> width) throw dimension_error("parity mask wider than register");
        }
        if (gf2_rank(masks) != static_cast<int>(masks.size()))
            throw std::invalid_argument("observable masks are not linearly independent");
    }

    // Packed eigenvalue: one parity bit per mask, first mask most significant.
    std::uint64_t eigenvalue(std::uint64_t content) const {
        std::uint64_t e = 0;
        for (auto m : masks) e = (e << 1) | static_cast<std::uint64_t>(std::popcount(content & m) & 1);
        return e;
    }
};

struct measurement_outcome {
    std::uint64_t eigenvalue = 0;
    double probability = 0;
};

namespace detail {

inline std::uint64_t content_of(const register_layout& layout, std::size_t idx, reg r) {
    auto sp = layout.decompose(idx);
    switch (r) {
        case reg::b: return sp.b;
        case reg::a: return sp.a;
        case reg::v: return sp.v;
    }
    return 0;
}

inline void check_compatible(const observable& obs, const register_layout& layout) {
    if (obs.width != layout.width_of(obs.target))
        throw std::invalid_argument("observable width does not match register layout");
}

} // namespace detail

// Born-rule distribution. All content observables are diagonal in the
// computational basis, so cross-tag phase averages never contribute.
inline std::vector<measurement_outcome> measure(const ensemble_state& state, const observable& obs) {
    detail::check_compatible(obs, state.layout);
    std::map<std::uint64_t, double> p;
    for (const auto& [t, v] : state.parts)
        for (std::size_t i = 0; i < state.layout.dim(); ++i) {
            double w = std::norm(v(static_cast<Eigen::Index>(i)));
            if (w == 0) continue;
            p[obs.eigenvalue(detail::content_of(state.layout, i, obs.target))] += w;
        }
    std::vector<measurement_outcome> out;
    for (const auto& [e, prob] : p)
        if (prob > 1e-15) out.push_back({e, prob});
    return out;
}

// Post-selected projection: the outcome is an explicit input, never sampled.
struct projection {
    observable obs;
    std::uint64_t outcome = 0;
    ensemble_state pre;
    ensemble_state post;   // renormalized
    double weight = 0;     // pre-projection probability
};

inline projection project(const ensemble_state& state, const observable& obs, std::uint64_t outcome) {
    detail::check_compatible(obs, state.layout);
    projection pr;
    pr.obs = obs;
    pr.outcome = outcome;
    pr.pre = state;
    pr.post = ensemble_state(state.layout);
    double weight = 0;
    for (const auto& [t, v] : state.parts) {
        vec w = vec::Zero(v.size());
        bool any = false;
        for (std::size_t i = 0; i < state.layout.dim(); ++i) {
            if (obs.eigenvalue(detail::content_of(state.layout, i, obs.target)) != outcome) continue;
            w(static_cast<Eigen::Index>(i)) = v(static_cast<Eigen::Index>(i));
            if (w(static_cast<Eigen::Index>(i)) != complex{0, 0}) any = true;
        }
        weight += w.squaredNorm();
        if (any) pr.post.parts.emplace(t, std::move(w));
    }
    if (weight < 1e-12)
        throw post_selection_error("outcome " + std::to_string(outcome) + " of observable " +
                                   obs.label + " has zero probability");
    pr.weight = weight;
    pr.post.renormalize();
    pr.post.drop_null_parts();
    return pr;
}

// Projection onto a set of B-contents (the candidate set of a share).
inline projection project_b_support(const ensemble_state& state, const std::set<std::uint64_t>& bs) {
    projection pr;
    pr.obs = observable{reg::b, state.layout.nb, {}, "b-support"};
    pr.pre = state;
    pr.post = ensemble_state(state.layout);
    double weight = 0;
    for (const auto& [t, v] : state.parts) {
        vec w = vec::Zero(v.size());
        for (std::size_t i = 0; i < state.layout.dim(); ++i)
            if (bs.count(state.layout.decompose(i).b))
                w(static_cast<Eigen::Index>(i)) = v(static_cast<Eigen::Index>(i));
        weight += w.squaredNorm();
        if (w.norm() > 0) pr.post.parts.emplace(t, std::move(w));
    }
    if (weight < 1e-12) throw post_selection_error("B support projection has zero probability");
    pr.weight = weight;
    pr.post.renormalize();
    pr.post.drop_null_parts();
    return pr;
}

struct order_check_report {
    double max_deviation = 0;
    // joint distribution keyed by (outcome of first-listed, outcome of second)
    std::map<std::pair<std::uint64_t, std::uint64_t>, double> joint;
};

// Joint distribution must not depend on measurement order.
inline order_check_report commuting_order_check(const ensemble_state& state, const observable& oa,
                                                const observable& ob) {
    auto joint_in_order = [&](const observable& first, const observable& second, bool swap_key) {
        std::map<std::pair<std::uint64_t, std::uint64_t>, double> j;
        for (const auto& mo : measure(state, first)) {
            auto pr = project(state, first, mo.eigenvalue);
            for (const auto& mo2 : measure(pr.post, second)) {
                auto key = swap_key ? std::make_pair(mo2.eigenvalue, mo.eigenvalue)
                                    : std::make_pair(mo.eigenvalue, mo2.eigenvalue);
                j[key] += mo.probability * mo2.probability;
            }
        }
        return j;
    };
    order_check_report rep;
    auto j_ab = joint_in_order(oa, ob, false);
    auto j_ba = joint_in_order(ob, oa, true);
    for (const auto& [k, p] : j_ab) {
        auto it = j_ba.find(k);
        double q = it == j_ba.end() ? 0.0 : it->second;
        rep.max_deviation = std::max(rep.max_deviation, std::abs(p - q));
    }
    for (const auto& [k, p] : j_ba)
        if (!j_ab.count(k)) rep.max_deviation = std::max(rep.max_deviation, p);
    rep.joint = std::move(j_ab);
    return rep;
}

} // namespace qsl
