#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <map>
#include <random>

#include "bits.hpp"
#include "errors.hpp"

namespace qsl {

using complex = std::complex<double>;
using vec = Eigen::VectorXcd;
using mat = Eigen::MatrixXcd;

constexpr double amp_tol = 1e-9;

// Identifier of one random phase symbol. Distinct tags are statistically
// independent uniform phases on [0, 2pi). `plain_tag` marks the deterministic
// (phase-free) part of a state.
using phase_tag = int;
constexpr phase_tag plain_tag = -1;

// Superposition with symbolic random phases: one amplitude vector per phase
// tag. The represented ket is sum_t e^{i phi_t} |part_t>, and the density
// operator is the average over all phases, under which cross-tag terms vanish.
struct ensemble_state {
    register_layout layout;
    std::map<phase_tag, vec> parts;

    ensemble_state() = default;
    explicit ensemble_state(register_layout l) : layout(l) {}

    vec& part(phase_tag t) {
        auto it = parts.find(t);
        if (it == parts.end())
            it = parts.emplace(t, vec::Zero(static_cast<Eigen::Index>(layout.dim()))).first;
        return it->second;
    }

    double norm2() const {
        double s = 0;
        for (const auto& [t, v] : parts) s += v.squaredNorm();
        return s;
    }

    void renormalize() {
        double n = std::sqrt(norm2());
        if (n < amp_tol) throw post_selection_error("cannot normalize a null state");
        for (auto& [t, v] : parts) v /= n;
    }

    void drop_null_parts(double tol = amp_tol) {
        for (auto it = parts.begin(); it != parts.end();) {
            if (it->second.norm() < tol)
                it = parts.erase(it);
            else
                ++it;
        }
    }

    // Max entrywise deviation against another state over the union of tags.
    double distance(const ensemble_state& o) const {
        if (!(layout.dim() == o.layout.dim())) return 1.0;
        double d = 0;
        auto scan = [&](const ensemble_state& x, const ensemble_state& y) {
            for (const auto& [t, v] : x.parts) {
                auto it = y.parts.find(t);
                if (it == y.parts.end())
                    d = std::max(d, v.cwiseAbs().maxCoeff());
                else
                    d = std::max(d, (v - it->second).cwiseAbs().maxCoeff());
            }
        };
        scan(*this, o);
        scan(o, *this);
        return d;
    }
};

// Hermitian PSD matrix on a register subset, trace one.
struct density_operator {
    mat rho;
    reg_set subset;

    double trace() const { return rho.trace().real(); }
};

namespace detail {

// Reshape one tagged component into a (kept x traced) matrix.
inline mat reshape_kept_traced(const register_layout& layout, reg_set kept, const vec& v) {
    reg_set traced = kept.complement();
    const auto kd = std::size_t{1} << layout.width_of(kept);
    const auto td = std::size_t{1} << layout.width_of(traced);
    mat m = mat::Zero(static_cast<Eigen::Index>(kd), static_cast<Eigen::Index>(td));
    for (std::size_t i = 0; i < layout.dim(); ++i) {
        auto sp = layout.decompose(i);
        m(static_cast<Eigen::Index>(layout.pack(kept, sp)),
          static_cast<Eigen::Index>(layout.pack(traced, sp))) += v(static_cast<Eigen::Index>(i));
    }
    return m;
}

} // namespace detail

// Phase-averaged density operator reduced to `subset`. The average kills all
// cross-tag terms exactly, so the result is the sum over tags of the partial
// trace of |part_t><part_t|.
inline density_operator ensemble_to_density(const ensemble_state& state, reg_set subset) {
    if (subset.empty()) throw std::invalid_argument("ensemble_to_density: empty register subset");
    const auto kd = std::size_t{1} << state.layout.width_of(subset);
    mat rho = mat::Zero(static_cast<Eigen::Index>(kd), static_cast<Eigen::Index>(kd));
    for (const auto& [t, v] : state.parts) {
        mat m = detail::reshape_kept_traced(state.layout, subset, v);
        rho += m * m.adjoint();
    }
    return {rho, subset};
}

// Entropy in bits; eigenvalues below tolerance contribute nothing.
inline double von_neumann_entropy(const density_operator& d) {
    Eigen::SelfAdjointEigenSolver<mat> es(d.rho, Eigen::EigenvaluesOnly);
    double s = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        double lam = es.eigenvalues()(i);
        if (lam < -1e-7) throw std::runtime_error("density operator not positive semidefinite");
        if (lam > 1e-12) s -= lam * std::log2(lam);
    }
    return s;
}

inline double entropy_of(const ensemble_state& state, reg_set subset) {
    return von_neumann_entropy(ensemble_to_density(state, subset));
}

// Independent cross-check of ensemble_to_density: draw concrete phases,
// average the outer products, partial-trace. Converges as O(1/sqrt(samples)).
inline density_operator monte_carlo_density(const ensemble_state& state, reg_set subset,
                                            std::size_t samples, std::mt19937_64& rng) {
    if (subset.empty()) throw std::invalid_argument("monte_carlo_density: empty register subset");
    if (samples < 1) throw std::invalid_argument("monte_carlo_density: samples must be >= 1");
    const auto kd = std::size_t{1} << state.layout.width_of(subset);
    mat rho = mat::Zero(static_cast<Eigen::Index>(kd), static_cast<Eigen::Index>(kd));
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    vec psi(static_cast<Eigen::Index>(state.layout.dim()));
    for (std::size_t s = 0; s < samples; ++s) {
        psi.setZero();
        for (const auto& [t, v] : state.parts) {
            complex f = (t == plain_tag) ? complex{1, 0} : std::polar(1.0, phase(rng));
            psi += f * v;
        }
        mat m = detail::reshape_kept_traced(state.layout, subset, psi);
        rho += m * m.adjoint();
    }
    rho /= static_cast<double>(samples);
    return {rho, subset};
}

} // namespace qsl
