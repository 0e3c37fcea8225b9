#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "collatz/analysis.hpp"
#include "collatz/bitpoly.hpp"
#include "collatz/core.hpp"
#include "collatz/treegraph.hpp"
#include "collatz/verify.hpp"

namespace {

using collatz::BitPoly;

constexpr int kExitOk = 0;
constexpr int kExitDomainError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCheckFailed = 3;

struct InputValue {
    std::string decimal;
    std::string poly;

    void add_flags(CLI::App* cmd, bool required = true) {
        auto* n = cmd->add_option("--n", decimal, "input as a decimal integer");
        auto* p = cmd->add_option("--poly", poly, "input as polynomial text, e.g. \"x^4+x+1\"");
        n->excludes(p);
        p->excludes(n);
        if (required) {
            cmd->callback([this, cmd] {
                if (decimal.empty() && poly.empty())
                    throw CLI::RequiredError("--n or --poly");
            });
        }
    }

    BitPoly get() const {
        return !decimal.empty() ? BitPoly::from_decimal_string(decimal)
                                : BitPoly::parse_poly(poly);
    }
};

void emit(const std::string& doc, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << doc;
        if (!doc.empty() && doc.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << doc;
}

collatz::TableFormat table_format(const std::string& f) {
    if (f == "csv") return collatz::TableFormat::Csv;
    if (f == "json") return collatz::TableFormat::Json;
    return collatz::TableFormat::Text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact engine for the accelerated Collatz map on odd integers\n"
                 "viewed as binary polynomials (x = 2)."};
    app.require_subcommand(1);

    std::string format = "text";
    std::string out_path;
    app.add_option("--format", format, "output format: text|csv|json|dot")
        ->check(CLI::IsMember({"text", "csv", "json", "dot"}));
    app.add_option("--out", out_path, "write the document to a file instead of stdout");

    // step
    auto* step = app.add_subcommand("step", "one accelerated Collatz step");
    InputValue step_in;
    step_in.add_flags(step);

    // traj
    auto* traj = app.add_subcommand("traj", "full trajectory with statistics");
    InputValue traj_in;
    traj_in.add_flags(traj);
    collatz::TrajectoryLimits traj_limits;
    traj->add_option("--max-steps", traj_limits.max_steps, "step limit");
    traj->add_option("--max-degree", traj_limits.max_degree, "degree limit");

    // family
    auto* family = app.add_subcommand("family", "closed-form family constructors");
    std::string family_kind;
    std::uint64_t family_param = 0;
    std::vector<std::uint64_t> family_exps;
    family->add_option("--family", family_kind, "one of F|U|G|H|M")
        ->required()
        ->check(CLI::IsMember({"F", "U", "G", "H", "M"}));
    family->add_option("--p", family_param, "family parameter (p, k, or index)")->required();
    family->add_option("--exps", family_exps, "inner exponents for family F");

    // check
    auto* check = app.add_subcommand("check", "exact identity checks (exit 3 on failure)");
    std::string check_which;
    check->add_option("--which", check_which,
                      "corollary1|g-relations|h-chain|mersenne-prefix|fixed-point")
        ->required()
        ->check(CLI::IsMember(
            {"corollary1", "g-relations", "h-chain", "mersenne-prefix", "fixed-point"}));
    InputValue check_in;
    check_in.add_flags(check, /*required=*/false);
    std::uint64_t check_j = 1, check_p = 0, check_k = 2;
    check->add_option("--j", check_j, "lifting count for corollary1");
    check->add_option("--p", check_p, "parameter for g-relations / mersenne-prefix");
    check->add_option("--k", check_k, "parameter for h-chain");

    // census
    auto* census_cmd = app.add_subcommand("census", "per-residue-class single-step census");
    std::string census_lo, census_hi;
    unsigned census_workers = 0;
    census_cmd->add_option("--lo", census_lo, "range start (decimal)")->required();
    census_cmd->add_option("--hi", census_hi, "range end, exclusive (decimal)")->required();
    census_cmd->add_option("--workers", census_workers, "worker threads (default: all cores)");

    // drift
    auto* drift = app.add_subcommand("drift", "degree drift along a trajectory");
    InputValue drift_in;
    drift_in.add_flags(drift);
    bool drift_mersenne = false;
    drift->add_flag("--mersenne", drift_mersenne, "use the Mersenne-related bound branch");

    // table
    auto* table = app.add_subcommand("table", "reference tables");
    int table_which = 1;
    std::optional<std::uint64_t> table_max;
    table->add_option("--which", table_which, "table number: 1|2|3")
        ->required()
        ->check(CLI::Range(1, 3));
    table->add_option("--max", table_max, "row limit (defaults: 10 / 32 / 32)");

    // tree
    auto* tree = app.add_subcommand("tree", "forward Collatz graph with DOT export");
    std::uint64_t tree_degree = 4;
    collatz::TreeLimits tree_limits;
    std::string tree_label = "decimal";
    std::optional<std::uint64_t> tree_elide;
    tree->add_option("--max-degree", tree_degree, "seed all odd values of degree <= this");
    tree->add_option("--max-steps", tree_limits.max_steps, "per-seed closure budget");
    tree->add_option("--label", tree_label, "node labels: decimal|poly")
        ->check(CLI::IsMember({"decimal", "poly"}));
    tree->add_option("--elide-above", tree_elide,
                     "collapse runs of nodes above this degree into dotted edges");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "range convergence sweep");
    std::string verify_lo = "3", verify_hi;
    collatz::VerifyPolicy policy;
    std::string ckpt_path;
    bool resume = false;
    verify_cmd->add_option("--lo", verify_lo, "range start (decimal)");
    verify_cmd->add_option("--hi", verify_hi, "range end, exclusive (decimal)");
    verify_cmd->add_option("--floor", policy.floor, "already-verified floor (default 1)");
    verify_cmd->add_option("--workers", policy.workers, "worker threads (default: all cores)");
    verify_cmd->add_option("--step-limit", policy.step_limit, "per-value step limit");
    bool no_early_exit = false;
    verify_cmd->add_flag("--no-early-exit", no_early_exit, "iterate every value down to 1");
    verify_cmd->add_option("--checkpoint", ckpt_path, "checkpoint file to write");
    verify_cmd->add_flag("--resume", resume, "resume from --checkpoint instead of starting");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*step) {
            auto [value, q] = collatz::collatz_step(step_in.get());
            if (format == "text") {
                emit("value: " + value.to_decimal_string() + "\nq: " + std::to_string(q) + "\n",
                     out_path);
            } else {
                nlohmann::ordered_json j{{"value", value.to_decimal_string()}, {"q", q}};
                emit(j.dump(), out_path);
            }
        } else if (*traj) {
            const auto t = collatz::trajectory(traj_in.get(), traj_limits);
            if (format == "csv") {
                std::string doc = "step,q,value,degree\n";
                for (std::size_t i = 0; i < t.steps.size(); ++i)
                    doc += std::to_string(i + 1) + "," + std::to_string(t.steps[i].q) + "," +
                           t.steps[i].value.to_decimal_string() + "," +
                           std::to_string(t.steps[i].degree) + "\n";
                emit(doc, out_path);
            } else if (format == "text") {
                std::string doc = "start: " + t.start.to_decimal_string() + "\n";
                for (const auto& s : t.steps)
                    doc += "  q=" + std::to_string(s.q) + " -> " + s.value.to_decimal_string() +
                           " (degree " + std::to_string(s.degree) + ")\n";
                doc += "k: " + std::to_string(t.k) + "\nq_sum: " + std::to_string(t.q_sum) +
                       "\nmax_degree: " + std::to_string(t.max_degree) + "\nterminated: " +
                       (t.terminated == collatz::Terminated::ReachedOne ? "one"
                        : t.terminated == collatz::Terminated::StepLimit ? "step_limit"
                                                                         : "degree_limit") +
                       "\n";
                emit(doc, out_path);
            } else {
                emit(t.to_json(), out_path);
            }
        } else if (*family) {
            BitPoly v;
            if (family_kind == "F") {
                v = collatz::family_F(family_param,
                                      std::set<std::uint64_t>(family_exps.begin(),
                                                              family_exps.end()));
            } else if (family_kind == "U") {
                v = collatz::family_U(family_param);
            } else if (family_kind == "G") {
                v = collatz::family_G(family_param);
            } else if (family_kind == "H") {
                v = collatz::family_H(family_param);
            } else {
                v = collatz::family_mersenne(family_param);
            }
            if (format == "json") {
                nlohmann::ordered_json j{{"decimal", v.to_decimal_string()},
                                         {"poly", v.format_poly()},
                                         {"degree", v.degree()}};
                emit(j.dump(), out_path);
            } else {
                emit("decimal: " + v.to_decimal_string() + "\npoly: " + v.format_poly() + "\n",
                     out_path);
            }
        } else if (*check) {
            bool ok = false;
            if (check_which == "corollary1") {
                ok = collatz::check_corollary1(check_in.get(), check_j);
            } else if (check_which == "g-relations") {
                const auto rel = collatz::g_relations_check(check_p);
                ok = rel.ok;
                emit("r: " + std::to_string(rel.r) + "\n", out_path);
            } else if (check_which == "h-chain") {
                ok = collatz::h_chain_check(check_k);
            } else if (check_which == "mersenne-prefix") {
                ok = collatz::mersenne_prefix_check(check_p);
            } else {
                ok = collatz::fixed_point_check(check_in.get());
            }
            std::cerr << check_which << ": " << (ok ? "holds" : "FAILS") << "\n";
            return ok ? kExitOk : kExitCheckFailed;
        } else if (*census_cmd) {
            const auto rep = collatz::census(BitPoly::from_decimal_string(census_lo),
                                             BitPoly::from_decimal_string(census_hi),
                                             census_workers);
            emit(format == "json" ? rep.to_json() : rep.to_text(), out_path);
        } else if (*drift) {
            const auto t = collatz::trajectory(drift_in.get());
            const auto rep = collatz::drift_report(t, drift_mersenne);
            emit(format == "json" ? rep.to_json() : rep.to_text(), out_path);
        } else if (*table) {
            const auto f = table_format(format);
            std::string doc;
            if (table_which == 1)
                doc = collatz::render_table1(collatz::table1(table_max.value_or(10)), f);
            else if (table_which == 2)
                doc = collatz::render_table2(collatz::table2(table_max.value_or(32)), f);
            else
                doc = collatz::render_table3(collatz::table3(table_max.value_or(32)), f);
            emit(doc, out_path);
        } else if (*tree) {
            const auto g = collatz::build_tree(tree_degree, tree_limits);
            if (format == "json") {
                emit(collatz::to_graph_json(g), out_path);
            } else {
                collatz::DotOptions opts;
                opts.label = tree_label == "poly" ? collatz::NodeLabel::Poly
                                                  : collatz::NodeLabel::Decimal;
                opts.max_label_degree = tree_elide;
                emit(collatz::to_dot(g, opts), out_path);
            }
        } else if (*verify_cmd) {
            policy.early_exit = !no_early_exit;
            collatz::RangeReport rep;
            if (resume) {
                if (ckpt_path.empty()) {
                    std::cerr << "verify: --resume requires --checkpoint\n";
                    return kExitUsage;
                }
                rep = collatz::checkpoint_resume(ckpt_path, policy);
            } else {
                if (verify_hi.empty()) {
                    std::cerr << "verify: --hi is required\n";
                    return kExitUsage;
                }
                rep = collatz::verify_range(BitPoly::from_decimal_string(verify_lo),
                                            BitPoly::from_decimal_string(verify_hi), policy);
            }
            if (!ckpt_path.empty()) collatz::checkpoint_save(rep, ckpt_path);
            emit(rep.to_json(), out_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomainError;
    }
    return kExitOk;
}
