#pragma once

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "classical.hpp"
#include "histories.hpp"

namespace qsl {

using json = nlohmann::ordered_json;

enum class run_mode {
    bob,        // B-hat measured before the pipeline
    relativized // pipeline on the mixture, choice projected at the end
};

inline std::string mode_name(run_mode m) { return m == run_mode::bob ? "bob" : "relativized"; }

inline run_mode parse_mode(const std::string& s) {
    if (s == "bob") return run_mode::bob;
    if (s == "relativized") return run_mode::relativized;
    throw std::invalid_argument("unknown mode '" + s + "' (expected bob or relativized)");
}

inline family_kind parse_kind(const std::string& s) {
    if (s == "grover") return family_kind::grover;
    if (s == "dj") return family_kind::dj;
    if (s == "simon") return family_kind::simon;
    throw std::invalid_argument("unknown algorithm '" + s + "' (expected grover, dj or simon)");
}

struct run_config {
    family_kind kind = family_kind::grover;
    int n = 2;
    std::string b_request = "random"; // bit string, or "random" resolved from the seed
    run_mode mode = run_mode::relativized;
    std::uint64_t seed = 0;
};

// --- serialization ------------------------------------------------------

inline json state_to_json(const ensemble_state& s) {
    json tags = json::array();
    for (const auto& [t, v] : s.parts) {
        json amps = json::array();
        for (std::size_t i = 0; i < s.layout.dim(); ++i) {
            complex c = v(static_cast<Eigen::Index>(i));
            if (c == complex{0, 0}) continue;
            auto sp = s.layout.decompose(i);
            amps.push_back({{"b", bit_string(sp.b, s.layout.nb).str()},
                            {"a", bit_string(sp.a, s.layout.na).str()},
                            {"v", bit_string(sp.v, s.layout.nv).str()},
                            {"re", c.real()},
                            {"im", c.imag()}});
        }
        tags.push_back({{"tag", t}, {"amplitudes", std::move(amps)}});
    }
    return {{"tags", std::move(tags)}};
}

inline ensemble_state state_from_json(const register_layout& layout, const json& j) {
    ensemble_state s(layout);
    for (const auto& tj : j.at("tags")) {
        vec& p = s.part(tj.at("tag").get<phase_tag>());
        for (const auto& aj : tj.at("amplitudes")) {
            std::size_t idx = layout.index(bit_string::parse(aj.at("b").get<std::string>()),
                                           bit_string::parse(aj.at("a").get<std::string>()),
                                           bit_string::parse(aj.at("v").get<std::string>()));
            p(static_cast<Eigen::Index>(idx)) =
                complex{aj.at("re").get<double>(), aj.at("im").get<double>()};
        }
    }
    return s;
}

inline json stage_record(const std::string& name, const ensemble_state& s) {
    return {{"stage", name},
            {"entropy_b", entropy_of(s, {reg::b})},
            {"entropy_a", entropy_of(s, {reg::a})},
            {"state", state_to_json(s)}};
}

inline json distribution_json(const std::vector<measurement_outcome>& dist, int width) {
    json out = json::array();
    for (const auto& o : dist)
        out.push_back({{"outcome", bit_string(o.eigenvalue, width).str()},
                       {"probability", o.probability}});
    return out;
}

inline json measurement_record(const std::string& label,
                               const std::vector<measurement_outcome>& dist, int width,
                               std::uint64_t selected) {
    return {{"observable", label},
            {"distribution", distribution_json(dist, width)},
            {"selected", bit_string(selected, width).str()}};
}

// --- the run command ----------------------------------------------------

inline std::string stage_name(const pipeline_stage& st, int round) {
    switch (st.kind) {
        case pipeline_stage::op::ub: return "U_B";
        case pipeline_stage::op::uf: return "U_f[" + std::to_string(round) + "]";
        case pipeline_stage::op::ua: return "U_A[" + std::to_string(round) + "]";
    }
    return "?";
}

inline json run_trace(const run_config& cfg) {
    algorithm alg(cfg.kind, cfg.n);
    std::mt19937_64 rng(cfg.seed);

    std::uint64_t b;
    if (cfg.b_request == "random") {
        std::uniform_int_distribution<std::size_t> pick(0, alg.members.size() - 1);
        b = alg.members[pick(rng)].b.value();
    } else {
        bit_string req = bit_string::parse(cfg.b_request);
        if (req.width() != choice_width(cfg.kind, cfg.n))
            throw std::invalid_argument("b has width " + std::to_string(req.width()) +
                                        ", family expects " +
                                        std::to_string(choice_width(cfg.kind, cfg.n)));
        if (!in_family(cfg.kind, cfg.n, req.value()))
            throw std::invalid_argument("b=" + req.str() + " is not a member of the family");
        b = req.value();
    }
    int bw = choice_width(cfg.kind, cfg.n);

    json doc;
    doc["config"] = {{"algo", family_name(cfg.kind)},
                     {"n", cfg.n},
                     {"b", bit_string(b, bw).str()},
                     {"b_requested", cfg.b_request},
                     {"mode", mode_name(cfg.mode)},
                     {"seed", cfg.seed}};

    json stages = json::array();
    json measurements = json::array();

    ensemble_state state = alg.initial_state();
    stages.push_back(stage_record("initial", state));

    if (cfg.mode == run_mode::bob) {
        auto dist = measure(state, alg.b_hat());
        auto pr = project(state, alg.b_hat(), b);
        measurements.push_back(measurement_record("B", dist, bw, b));
        state = pr.post;
        stages.push_back(stage_record("B projection", state));
    }

    auto st = alg.stages(identity_permutation(alg.layout().nb));
    int round = 0;
    for (const auto& s : st) {
        if (s.kind == pipeline_stage::op::uf) ++round;
        state = apply_stage(state, s);
        stages.push_back(stage_record(stage_name(s, round), state));
    }

    if (cfg.mode == run_mode::relativized) {
        auto dist = measure(state, alg.b_hat());
        auto pr = project(state, alg.b_hat(), b);
        measurements.push_back(measurement_record("B", dist, bw, b));
        state = pr.post;
        stages.push_back(stage_record("B projection", state));
    }

    auto adist = measure(state, alg.a_hat());
    std::uint64_t a_outcome = sample_outcome(adist, rng);
    measurements.push_back(measurement_record("A", adist, cfg.n, a_outcome));

    doc["stages"] = std::move(stages);
    doc["measurements"] = std::move(measurements);

    if (cfg.kind == family_kind::simon) {
        auto res = simon_end_to_end(alg, b, rng);
        json shots = json::array();
        for (const auto& s : res.shots) shots.push_back(s.str());
        json kept = json::array();
        for (const auto& s : res.distinct_nonzero) kept.push_back(s.str());
        doc["simon"] = {{"shots", std::move(shots)},
                        {"kept", std::move(kept)},
                        {"h", res.h.str()},
                        {"evaluations", res.evaluations}};
    }
    return doc;
}

// --- sharing and history documents -------------------------------------

inline json share_to_json(const algorithm& alg, const share& sh) {
    json j;
    if (sh.kind == family_kind::grover) {
        json ps = json::array();
        for (auto [m, bit] : sh.parities)
            ps.push_back({{"mask", bit_string(m, alg.n).str()}, {"outcome", bit}});
        j["parities"] = std::move(ps);
    } else {
        json rows = json::array();
        for (const auto& [a, v] : sh.rows)
            rows.push_back({{"arg", bit_string(a, alg.n).str()},
                            {"value", bit_string(v, output_width(alg.kind, alg.n)).str()}});
        j["rows"] = std::move(rows);
    }
    json cands = json::array();
    for (auto c : candidate_set(alg, sh))
        cands.push_back(bit_string(c, choice_width(alg.kind, alg.n)).str());
    j["candidates"] = std::move(cands);
    return j;
}

inline json sharing_document(const sharing_context& ctx, std::uint64_t b) {
    const algorithm& alg = ctx.alg;
    json doc;
    doc["config"] = {{"algo", family_name(alg.kind)},
                     {"n", alg.n},
                     {"b", bit_string(b, choice_width(alg.kind, alg.n)).str()}};
    json pairs = json::array();
    for (const auto& p : enumerate_sharings(ctx, b))
        pairs.push_back({{"alice", share_to_json(alg, p.alice_share)},
                         {"bob", share_to_json(alg, p.bob_share)},
                         {"uses_parity_combinations", p.uses_parity_combinations}});
    doc["pairs"] = std::move(pairs);
    return doc;
}

inline json histories_document(const sharing_context& ctx) {
    const algorithm& alg = ctx.alg;
    json doc;
    doc["config"] = {{"algo", family_name(alg.kind)}, {"n", alg.n}};
    auto bundle = full_bundle(ctx);
    json hs = json::array();
    for (const auto& h : bundle.histories)
        hs.push_back({{"tag", h.tag},
                      {"sign", h.sign},
                      {"b", bit_string(h.b, choice_width(alg.kind, alg.n)).str()},
                      {"a", bit_string(h.a, alg.n).str()},
                      {"v_before", bit_string(h.v_before, output_width(alg.kind, alg.n)).str()},
                      {"v_after", bit_string(h.v_after, output_width(alg.kind, alg.n)).str()}});
    doc["histories"] = std::move(hs);
    auto rep = check_reconstruction(ctx, bundle);
    doc["reconstruction"] = {{"before_deviation", rep.before_deviation},
                             {"after_deviation", rep.after_deviation},
                             {"final_deviation", rep.final_deviation},
                             {"ok", rep.ok}};
    return doc;
}

inline json speedup_document(family_kind kind, int n) {
    auto row = speedup_report(kind, n);
    return {{"algo", family_name(kind)},
            {"n", n},
            {"no_knowledge", row.no_knowledge},
            {"with_knowledge_max", row.with_knowledge_max},
            {"with_knowledge_min", row.with_knowledge_min},
            {"quantum_calls", row.quantum_calls},
            {"quantum_matches_advanced", row.quantum_matches_advanced}};
}

inline std::string speedup_csv(const json& doc) {
    std::ostringstream out;
    out << "algo,n,no_knowledge,with_knowledge_max,with_knowledge_min,quantum_calls,"
           "quantum_matches_advanced\n";
    out << doc.at("algo").get<std::string>() << ',' << doc.at("n").get<int>() << ','
        << doc.at("no_knowledge").get<int>() << ',' << doc.at("with_knowledge_max").get<int>()
        << ',' << doc.at("with_knowledge_min").get<int>() << ','
        << doc.at("quantum_calls").get<int>() << ','
        << (doc.at("quantum_matches_advanced").get<bool>() ? "true" : "false") << '\n';
    return out.str();
}

// --- family files -------------------------------------------------------

struct family_file {
    family_kind kind = family_kind::grover;
    int n = 2;
    std::vector<bit_string> subset; // empty means the whole family
};

inline family_file load_family_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open family file '" + path + "'");
    json j = json::parse(in);
    family_file f;
    f.kind = parse_kind(j.at("algo").get<std::string>());
    f.n = j.at("n").get<int>();
    if (j.contains("subset"))
        for (const auto& s : j.at("subset")) {
            bit_string b = bit_string::parse(s.get<std::string>());
            if (b.width() != choice_width(f.kind, f.n))
                throw validation_error("family file entry " + b.str() + " has width " +
                                       std::to_string(b.width()) + ", expected " +
                                       std::to_string(choice_width(f.kind, f.n)));
            if (!in_family(f.kind, f.n, b.value()))
                throw validation_error("family file entry " + b.str() +
                                       " is not a valid member table");
            f.subset.push_back(b);
        }
    return f;
}

} // namespace qsl
