#pragma once

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "state.hpp"

namespace qsl {

// Permutation of the B-basis values: perm[old] = new.
using preparation_permutation = std::vector<std::uint64_t>;

inline preparation_permutation identity_permutation(int nb) {
    preparation_permutation p(std::size_t{1} << nb);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

// Swap the source value with the desired one, identity elsewhere.
inline preparation_permutation transposition(int nb, std::uint64_t from, std::uint64_t to) {
    auto p = identity_permutation(nb);
    std::swap(p.at(from), p.at(to));
    return p;
}

inline void check_bijection(const preparation_permutation& p, const register_layout& layout) {
    if (p.size() != layout.dim_b())
        throw dimension_error("preparation permutation size does not match B width");
    std::vector<bool> seen(p.size(), false);
    for (auto x : p) {
        if (x >= p.size() || seen[x])
            throw std::invalid_argument("preparation map is not a bijection on B values");
        seen[x] = true;
    }
}

inline preparation_permutation inverse_permutation(const preparation_permutation& p) {
    preparation_permutation inv(p.size());
    for (std::uint64_t i = 0; i < p.size(); ++i) inv[p[i]] = i;
    return inv;
}

// U_B: permutes the B content, identity on A and V. Phase tags are left
// unpermuted; they are interchangeable symbols of independent uniform phases.
inline ensemble_state apply_ub(const ensemble_state& state, const preparation_permutation& perm) {
    check_bijection(perm, state.layout);
    ensemble_state out(state.layout);
    for (const auto& [t, v] : state.parts) {
        vec& w = out.part(t);
        for (std::size_t i = 0; i < state.layout.dim(); ++i) {
            auto sp = state.layout.decompose(i);
            w(static_cast<Eigen::Index>(state.layout.index(perm[sp.b], sp.a, sp.v))) +=
                v(static_cast<Eigen::Index>(i));
        }
    }
    return out;
}

// U_f: |b>|a>|v> -> |b>|a>|v xor f_b(a)>. Self-inverse.
inline ensemble_state apply_uf(const ensemble_state& state, family_kind kind, int n) {
    const auto& layout = state.layout;
    if (layout.nb != choice_width(kind, n) || layout.na != n || layout.nv != output_width(kind, n))
        throw dimension_error("layout does not match family widths");
    ensemble_state out(layout);
    for (const auto& [t, v] : state.parts) {
        vec& w = out.part(t);
        for (std::size_t i = 0; i < layout.dim(); ++i) {
            auto sp = layout.decompose(i);
            std::uint64_t fv = oracle_value(kind, n, sp.b, sp.a);
            w(static_cast<Eigen::Index>(layout.index(sp.b, sp.a, sp.v ^ fv))) +=
                v(static_cast<Eigen::Index>(i));
        }
    }
    return out;
}

enum class rotation_kind { inversion_about_mean, hadamard_a };

namespace detail {

inline mat a_rotation_matrix(rotation_kind kind, int na) {
    const auto d = Eigen::Index{1} << na;
    if (kind == rotation_kind::inversion_about_mean) {
        // D = 2|s><s| - I with |s> uniform over A
        return mat::Constant(d, d, complex{2.0 / static_cast<double>(d), 0}) - mat::Identity(d, d);
    }
    mat h1(2, 2);
    const double r = 1.0 / std::sqrt(2.0);
    h1 << r, r, r, -r;
    mat h = mat::Ones(1, 1);
    for (int q = 0; q < na; ++q) {
        mat next(h.rows() * 2, h.cols() * 2);
        next << h1(0, 0) * h, h1(0, 1) * h, h1(1, 0) * h, h1(1, 1) * h;
        h = std::move(next);
    }
    return h;
}

} // namespace detail

// U_A: basis rotation on register A only; the V factor is carried unchanged.
// Both variants are involutions (D^2 = I, H^2 = I).
inline ensemble_state apply_ua(const ensemble_state& state, rotation_kind kind) {
    const auto& layout = state.layout;
    const mat m = detail::a_rotation_matrix(kind, layout.na);
    ensemble_state out(layout);
    for (const auto& [t, v] : state.parts) {
        vec& w = out.part(t);
        vec slice(static_cast<Eigen::Index>(layout.dim_a()));
        for (std::uint64_t b = 0; b < layout.dim_b(); ++b)
            for (std::uint64_t vv = 0; vv < layout.dim_v(); ++vv) {
                for (std::uint64_t a = 0; a < layout.dim_a(); ++a)
                    slice(static_cast<Eigen::Index>(a)) =
                        v(static_cast<Eigen::Index>(layout.index(b, a, vv)));
                vec res = m * slice;
                for (std::uint64_t a = 0; a < layout.dim_a(); ++a)
                    w(static_cast<Eigen::Index>(layout.index(b, a, vv))) =
                        res(static_cast<Eigen::Index>(a));
            }
    }
    return out;
}

// One recorded step of the forward pipeline, replayable in reverse.
struct pipeline_stage {
    enum class op { ub, uf, ua } kind;
    preparation_permutation perm; // ub only
    family_kind family = family_kind::grover;
    int n = 2;
    rotation_kind rotation = rotation_kind::inversion_about_mean;
};

inline ensemble_state apply_stage(const ensemble_state& s, const pipeline_stage& st) {
    switch (st.kind) {
        case pipeline_stage::op::ub: return apply_ub(s, st.perm);
        case pipeline_stage::op::uf: return apply_uf(s, st.family, st.n);
        case pipeline_stage::op::ua: return apply_ua(s, st.rotation);
    }
    return s;
}

inline ensemble_state apply_stage_inverse(const ensemble_state& s, const pipeline_stage& st) {
    switch (st.kind) {
        case pipeline_stage::op::ub: return apply_ub(s, inverse_permutation(st.perm));
        case pipeline_stage::op::uf: return apply_uf(s, st.family, st.n); // xor involution
        case pipeline_stage::op::ua: return apply_ua(s, st.rotation);    // involution
    }
    return s;
}

inline ensemble_state apply_stages(ensemble_state s, const std::vector<pipeline_stage>& stages) {
    for (const auto& st : stages) s = apply_stage(s, st);
    return s;
}

// Exact inverses in reverse order; round-trip is the identity within tolerance.
inline ensemble_state back_evolve(ensemble_state s, const std::vector<pipeline_stage>& stages) {
    for (auto it = stages.rbegin(); it != stages.rend(); ++it) s = apply_stage_inverse(s, *it);
    return s;
}

} // namespace qsl
