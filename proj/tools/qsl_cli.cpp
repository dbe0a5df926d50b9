#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include <qsl/verify.hpp>

namespace {

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output path '" + out_path + "'");
    out << text;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"oracle-algorithm state lab"};
    app.require_subcommand(1);

    std::string algo = "grover";
    std::string b = "random";
    std::string mode = "relativized";
    std::string out_path;
    std::string format = "json";
    std::string family_path;
    std::string suite = "all";
    int n = 2;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* cmd, bool with_b) {
        cmd->add_option("--algo", algo, "family: grover, dj or simon");
        cmd->add_option("--n", n, "problem size");
        if (with_b) cmd->add_option("--b", b, "choice bit string, or 'random'");
        cmd->add_option("--out", out_path, "output path (default stdout)");
    };

    auto* run = app.add_subcommand("run", "run a pipeline and emit the trace");
    add_common(run, true);
    run->add_option("--mode", mode, "bob or relativized");
    run->add_option("--seed", seed, "sampling seed");
    run->add_option("--format", format, "json");

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", suite, "states, entropies, sharing, histories, classical or all");
    verify->add_option("--family", family_path, "family file to validate first");
    verify->add_option("--out", out_path, "output path (default stdout)");

    auto* share_cmd = app.add_subcommand("share", "enumerate the divisions of a choice");
    add_common(share_cmd, true);

    auto* hist = app.add_subcommand("histories", "emit the full history bundle");
    add_common(hist, false);

    auto* report = app.add_subcommand("report", "emit the speed-up comparison");
    add_common(report, false);
    report->add_option("--format", format, "json or csv");
    report->add_option("--family", family_path, "family file; a subset adds its query count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) {
            if (format != "json") throw std::invalid_argument("run emits json only");
            qsl::run_config cfg{qsl::parse_kind(algo), n, b, qsl::parse_mode(mode), seed};
            emit(qsl::run_trace(cfg).dump(2) + "\n", out_path);
            return 0;
        }
        if (share_cmd->parsed()) {
            if (b == "random")
                throw std::invalid_argument("share requires an explicit --b (analysis never samples)");
            qsl::sharing_context ctx(qsl::algorithm(qsl::parse_kind(algo), n));
            qsl::bit_string req = qsl::bit_string::parse(b);
            if (!qsl::in_family(ctx.alg.kind, n, req.value()))
                throw std::invalid_argument("b=" + req.str() + " is not a member of the family");
            emit(qsl::sharing_document(ctx, req.value()).dump(2) + "\n", out_path);
            return 0;
        }
        if (hist->parsed()) {
            qsl::sharing_context ctx(qsl::algorithm(qsl::parse_kind(algo), n));
            emit(qsl::histories_document(ctx).dump(2) + "\n", out_path);
            return 0;
        }
        if (report->parsed()) {
            std::vector<qsl::bit_string> subset;
            if (!family_path.empty()) {
                auto f = qsl::load_family_file(family_path);
                algo = qsl::family_name(f.kind);
                n = f.n;
                subset = f.subset;
            }
            qsl::family_kind kind = qsl::parse_kind(algo);
            qsl::json doc = qsl::speedup_document(kind, n);
            if (!subset.empty()) {
                qsl::knowledge_state k;
                for (const auto& m : subset) k.candidates.push_back(m.value());
                doc["subset_no_knowledge"] =
                    qsl::worst_case_queries(kind, n, qsl::query_goal::solve_problem, k)
                        .worst_case_queries;
            }
            if (format == "csv")
                emit(qsl::speedup_csv(doc), out_path);
            else if (format == "json")
                emit(doc.dump(2) + "\n", out_path);
            else
                throw std::invalid_argument("report formats are json and csv");
            return 0;
        }
        // verify
        std::vector<qsl::check_result> checks;
        if (!family_path.empty()) checks.push_back(qsl::verify_family_file(family_path));
        for (auto& c : qsl::verify_suite(suite)) checks.push_back(std::move(c));
        qsl::json doc = qsl::checks_to_json(checks);
        emit(doc.dump(2) + "\n", out_path);
        return doc.at("passed").get<bool>() ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const qsl::capability_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
