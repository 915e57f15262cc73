// illiq: arbitrage and deflator analysis for illiquid-market descriptions on
// finite event trees. One JSON report per input file on stdout, logs on
// stderr. Exit codes: 0 clean/affirmative, 10 arbitrage found, 11 no deflator,
// 12 not superhedgeable, 13 certified +infinity, 3 undecided (one-sided
// analytic verdict), 2 input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include "illiq/analysis.hpp"
#include "illiq/market_file.hpp"

using namespace illiq;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitUndecided = 3;
constexpr int kExitArbitrage = 10;
constexpr int kExitNoDeflator = 11;
constexpr int kExitNotHedgeable = 12;
constexpr int kExitInfinite = 13;

struct CommonArgs {
    std::vector<std::string> files;
    bool float_mode = false;
    bool allow_float_input = false;
    bool verify = false;
    int jobs = 1;
};

json rat_json(const Rat& q) { return rat_to_string(q); }

json extreal_json(const ExtReal& v) { return v.to_string(); }

json scalar_process_json(const ScalarProcess& p) {
    json out = json::array();
    for (const Rat& v : p) out.push_back(rat_json(v));
    return out;
}

json vector_process_json(const VectorProcess& p) {
    json out = json::array();
    for (const Vec& v : p) {
        json row = json::array();
        for (const Rat& x : v) row.push_back(rat_json(x));
        out.push_back(std::move(row));
    }
    return out;
}

json portfolio_json(const PortfolioProcess& x) { return vector_process_json(x); }

json flags_json(const HypothesisFlags& f) {
    return json{{"s_prime_finite", f.s_prime_finite},
                {"cones_hypotheses_verified", f.cones_hypotheses},
                {"closure_sensitive", f.closure_sensitive}};
}

json stats_json(const LpStats& s) { return json{{"lp_solves", s.solves}, {"simplex_pivots", s.pivots}}; }

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Arbitrage: return "arbitrage";
        case Verdict::NoArbitrage: return "no_arbitrage";
        default: return "undecided";
    }
}

json budget_report_json(const BudgetReport& r) {
    json nodes = json::array();
    for (const auto& e : r.per_node)
        nodes.push_back(json{{"residual", extreal_json(e.residual)},
                             {"exact", e.residual_exact},
                             {"constraint_ok", e.constraint_ok}});
    return json{{"feasible", r.feasible}, {"per_node", std::move(nodes)}};
}

json residuals_json(const DeflatorResiduals& r) {
    json nodes = json::array();
    for (const auto& e : r.per_node)
        nodes.push_back(json{{"price_membership", rat_json(e.price_membership)},
                             {"cone_membership", rat_json(e.cone_membership)}});
    return json{{"valid", r.valid}, {"per_node", std::move(nodes)}};
}

struct RunResult {
    json report;
    int exit_code = kExitOk;
};

json report_header(const std::string& command, const std::string& file, const std::string& text,
                   const CommonArgs& args) {
    char digest[32];
    std::snprintf(digest, sizeof digest, "%016llx",
                  static_cast<unsigned long long>(content_digest(text)));
    return json{{"command", command},
                {"file", file},
                {"instance_digest", digest},
                {"mode", args.float_mode ? "float" : "rational"}};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MarketFileError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ParsedMarket parse(const std::string& path, const std::string& text, const CommonArgs& args) {
    LoadOptions opt;
    opt.allow_float_input = args.allow_float_input;
    const auto slash = path.find_last_of('/');
    if (slash != std::string::npos) opt.base_dir = path.substr(0, slash);
    return load_market_text(text, opt);
}

RunResult run_check(const std::string& file, const CommonArgs& args, const std::string& mode) {
    const std::string text = slurp(file);
    const ParsedMarket market = parse(file, text, args);
    AnalysisOptions opt;
    opt.float_mode = args.float_mode;

    ArbitrageVerdict verdict;
    if (mode == "plain")
        verdict = check_arbitrage(market.instance, opt);
    else if (mode == "marginal")
        verdict = check_marginal_arbitrage(market.instance, opt);
    else
        verdict = check_scalable_arbitrage(market.instance, opt);

    RunResult out;
    out.report = report_header("check --mode " + mode, file, text, args);
    out.report["verdict"] = verdict_name(verdict.verdict);
    out.report["lp_value"] = rat_json(verdict.lp_value);
    out.report["hypotheses"] = flags_json(verdict.flags);
    out.report["lp_stats"] = stats_json(verdict.stats);
    if (verdict.exists() && !verdict.c.empty()) {
        out.report["certificate"] =
            json{{"portfolio", portfolio_json(verdict.x)}, {"claim", scalar_process_json(verdict.c)}};
        if (args.verify) {
            // replay through the independent budget checker on the instance the
            // verdict was decided on
            const MarketInstance decided =
                mode == "plain" ? market.instance
                                : derive_model(market.instance,
                                               mode == "marginal" ? ModelKind::Marginal
                                                                  : ModelKind::Scalable)
                                      .instance;
            out.report["verification"] = budget_report_json(budget_check(decided, verdict.x, verdict.c));
        }
    }
    out.exit_code = verdict.verdict == Verdict::Arbitrage    ? kExitArbitrage
                    : verdict.verdict == Verdict::NoArbitrage ? kExitOk
                                                              : kExitUndecided;
    return out;
}

RunResult run_deflator(const std::string& file, const CommonArgs& args, const std::string& kind_name,
                       const std::string& epsilon) {
    const std::string text = slurp(file);
    const ParsedMarket market = parse(file, text, args);
    const DeflatorKind kind =
        kind_name == "market" ? DeflatorKind::MarketPrice : DeflatorKind::MarginalPrice;
    AnalysisOptions opt;
    if (!epsilon.empty()) {
        const auto eps = parse_rat(epsilon);
        if (!eps || *eps <= 0) throw MarketFileError("--epsilon must be a positive rational");
        opt.epsilon_schedule = {*eps};
    }

    const DeflatorSearch search = find_deflator(market.instance, kind, opt);
    RunResult out;
    out.report = report_header("deflator --kind " + kind_name, file, text, args);
    out.report["hypotheses"] = flags_json(instance_flags(market.instance));
    out.report["lp_stats"] = stats_json(search.stats);
    json schedule = json::array();
    for (const Rat& e : opt.epsilon_schedule) schedule.push_back(rat_json(e));
    out.report["epsilon_schedule"] = std::move(schedule);
    if (search.found()) {
        const DeflatorCertificate& cert = *search.certificate;
        out.report["verdict"] = "deflator_found";
        out.report["certificate"] = json{{"epsilon", rat_json(cert.epsilon)},
                                         {"y", scalar_process_json(cert.y)},
                                         {"s", vector_process_json(cert.s)}};
        if (args.verify)
            out.report["verification"] = residuals_json(verify_deflator(market.instance, cert));
        out.exit_code = kExitOk;
    } else {
        out.report["verdict"] = "no_deflator";
        out.exit_code = kExitNoDeflator;
    }
    return out;
}

RunResult run_superhedge(const std::string& file, const CommonArgs& args, const std::string& claim_name,
                         const std::string& alpha_text) {
    const std::string text = slurp(file);
    const ParsedMarket market = parse(file, text, args);
    const auto it = market.claims.find(claim_name);
    if (it == market.claims.end()) throw MarketFileError("unknown claim '" + claim_name + "'");
    const auto alpha = parse_rat(alpha_text);
    if (!alpha || *alpha <= 0) throw MarketFileError("--alpha must be a positive rational");

    AnalysisOptions opt;
    opt.float_mode = args.float_mode;
    const MembershipResult res = membership_scaled(market.instance, it->second, *alpha, opt);

    RunResult out;
    out.report = report_header("superhedge --claim " + claim_name + " --alpha " + alpha_text, file,
                               text, args);
    out.report["hypotheses"] = flags_json(res.flags);
    out.report["lp_stats"] = stats_json(res.stats);
    switch (res.verdict) {
        case Membership::Yes: {
            out.report["verdict"] = "superhedgeable";
            out.exit_code = kExitOk;
            if (res.certificate) {
                out.report["certificate"] = json{{"portfolio", portfolio_json(*res.certificate)}};
                if (args.verify) {
                    const MarketInstance scaled = scale_instance(market.instance, *alpha);
                    out.report["verification"] =
                        budget_report_json(budget_check(scaled, *res.certificate, it->second));
                }
            }
            break;
        }
        case Membership::No:
            out.report["verdict"] = "not_superhedgeable";
            out.exit_code = kExitNotHedgeable;
            break;
        default:
            out.report["verdict"] = "undecided";
            out.exit_code = kExitUndecided;
    }
    return out;
}

RunResult run_sigma(const std::string& file, const CommonArgs& args, const std::string& deflator_name) {
    const std::string text = slurp(file);
    const ParsedMarket market = parse(file, text, args);
    const auto it = market.deflators.find(deflator_name);
    if (it == market.deflators.end()) throw MarketFileError("unknown deflator '" + deflator_name + "'");

    AnalysisOptions opt;
    const SigmaValue primal = sigma_primal(market.instance, it->second.y, opt);
    const SigmaValue dual = sigma_dual(market.instance, it->second.y, opt);

    RunResult out;
    out.report = report_header("sigma --deflator " + deflator_name, file, text, args);
    out.report["primal"] = extreal_json(primal.value);
    out.report["dual"] = extreal_json(dual.value);
    if (primal.value.is_finite() && dual.value.is_finite())
        out.report["gap"] = rat_json(dual.value.finite() - primal.value.finite());
    else
        out.report["gap"] = primal.value == dual.value ? "0" : "undefined";
    if (dual.attaining_v) out.report["attaining_v"] = vector_process_json(*dual.attaining_v);
    LpStats stats;
    stats.pivots = primal.stats.pivots + dual.stats.pivots;
    stats.solves = primal.stats.solves + dual.stats.solves;
    out.report["lp_stats"] = stats_json(stats);
    out.exit_code = primal.value.is_pos_inf() ? kExitInfinite : kExitOk;
    return out;
}

template <typename Fn>
int run_files(const CommonArgs& args, Fn&& runner) {
    struct Slot {
        json report;
        int code;
    };
    std::vector<Slot> slots(args.files.size());
    auto work = [&](size_t i) {
        try {
            RunResult r = runner(args.files[i]);
            slots[i] = Slot{std::move(r.report), r.exit_code};
        } catch (const std::exception& e) {
            slots[i] = Slot{json{{"file", args.files[i]}, {"error", e.what()}}, kExitInput};
        }
    };
    if (args.jobs <= 1 || args.files.size() <= 1) {
        for (size_t i = 0; i < args.files.size(); ++i) work(i);
    } else {
        std::vector<std::future<void>> futures;
        std::atomic<size_t> next{0};
        const int workers = std::min<int>(args.jobs, static_cast<int>(args.files.size()));
        for (int w = 0; w < workers; ++w)
            futures.push_back(std::async(std::launch::async, [&] {
                for (size_t i = next.fetch_add(1); i < args.files.size(); i = next.fetch_add(1)) work(i);
            }));
        for (auto& f : futures) f.get();
    }
    int code = kExitOk;
    for (const Slot& s : slots) {
        std::cout << s.report.dump(2) << "\n";
        code = std::max(code, s.code);
        if (s.code == kExitInput) std::cerr << "error: " << s.report.value("error", "") << "\n";
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"arbitrage and deflator analysis for illiquid markets on event trees"};
    app.require_subcommand(1);

    CommonArgs args;
    if (const char* env = std::getenv("ILLIQ_ARITH")) args.float_mode = std::string(env) == "float";

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("files", args.files, "market description files")->required()->expected(-1);
        cmd->add_flag("--float,!--rational", args.float_mode,
                      "floating-point LP pivoting (default from ILLIQ_ARITH)");
        cmd->add_flag("--allow-float", args.allow_float_input, "accept JSON number literals as input");
        cmd->add_flag("--verify", args.verify, "replay certificates through the independent checker");
        cmd->add_option("--jobs", args.jobs, "fan independent input files across worker threads");
    };

    std::string mode = "plain";
    CLI::App* check = app.add_subcommand("check", "decide an arbitrage condition");
    add_common(check);
    check->add_option("--mode", mode, "plain | marginal | scalable")
        ->check(CLI::IsMember({"plain", "marginal", "scalable"}));

    std::string kind = "market";
    std::string epsilon;
    CLI::App* deflator = app.add_subcommand("deflator", "search for a price deflator");
    add_common(deflator);
    deflator->add_option("--kind", kind, "market | marginal")
        ->check(CLI::IsMember({"market", "marginal"}));
    deflator->add_option("--epsilon", epsilon, "single positivity level (replaces the schedule)");

    std::string claim_name;
    std::string alpha = "1";
    CLI::App* superhedge = app.add_subcommand("superhedge", "claim membership in alpha C(S,D)");
    add_common(superhedge);
    superhedge->add_option("--claim", claim_name, "named claim from the input file")->required();
    superhedge->add_option("--alpha", alpha, "positive scale factor");

    std::string deflator_name;
    CLI::App* sigma = app.add_subcommand("sigma", "profit function value, primal and dual");
    add_common(sigma);
    sigma->add_option("--deflator", deflator_name, "named deflator from the input file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed())
            return run_files(args, [&](const std::string& f) { return run_check(f, args, mode); });
        if (deflator->parsed())
            return run_files(args,
                             [&](const std::string& f) { return run_deflator(f, args, kind, epsilon); });
        if (superhedge->parsed())
            return run_files(
                args, [&](const std::string& f) { return run_superhedge(f, args, claim_name, alpha); });
        if (sigma->parsed())
            return run_files(args,
                             [&](const std::string& f) { return run_sigma(f, args, deflator_name); });
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
