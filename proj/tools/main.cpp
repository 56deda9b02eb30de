#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pasv/errors.hpp"
#include "pasv/io.hpp"
#include "pasv/order_model.hpp"
#include "pasv/poset.hpp"
#include "pasv/rng.hpp"
#include "pasv/sampler.hpp"
#include "pasv/sweep.hpp"
#include "pasv/utility.hpp"
#include "pasv/valuation.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitUtility = 3;
constexpr int kExitCap = 4;

// Option values shared across subcommands. Flags override config-file
// fields, which override the built-in defaults recorded here.
struct Options {
    std::string config;
    std::string dag;
    std::string weights;
    std::string lambda_inline;
    std::string utility;
    std::string estimator = "auto";
    std::string groups;
    std::string out;
    std::string group_out;
    std::string positions_out;
    std::string format;
    std::uint64_t seed = 0;
    std::string target;
    std::string grid;
    std::string limit_reference;
    std::string mode;
    std::string candidate_edges;
    std::uint64_t count = 0;
    std::uint64_t burn_in = 0;
    std::uint64_t thinning = 0;
    bool have_count = false, have_burn_in = false, have_thinning = false;
    std::uint64_t cap = 100000;
    bool probs = false;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

// Overlays config-file fields onto options the user did not pass as flags.
void apply_config(const CLI::App& cmd, Options& opt) {
    if (opt.config.empty()) return;
    std::ifstream in(opt.config);
    if (!in) throw pasv::InvalidArgument("cannot open config file: " + opt.config);
    json cfg = json::parse(in, nullptr, false);
    if (cfg.is_discarded() || !cfg.is_object()) {
        throw pasv::InvalidArgument("invalid JSON config: " + opt.config);
    }
    auto given = [&](const std::string& flag) {
        auto* o = cmd.get_option_no_throw("--" + flag);
        return o != nullptr && o->count() > 0;
    };
    auto str = [&](const std::string& key, std::string& slot) {
        if (cfg.contains(key) && !given(key)) slot = cfg.at(key).get<std::string>();
    };
    str("dag", opt.dag);
    str("weights", opt.weights);
    str("lambda", opt.lambda_inline);
    str("utility", opt.utility);
    str("estimator", opt.estimator);
    str("groups", opt.groups);
    str("out", opt.out);
    str("group-out", opt.group_out);
    str("positions-out", opt.positions_out);
    str("format", opt.format);
    str("target", opt.target);
    str("grid", opt.grid);
    str("limit-reference", opt.limit_reference);
    str("mode", opt.mode);
    str("candidate-edges", opt.candidate_edges);
    if (cfg.contains("seed") && !given("seed")) opt.seed = cfg.at("seed").get<std::uint64_t>();
    if (cfg.contains("cap") && !given("cap")) opt.cap = cfg.at("cap").get<std::uint64_t>();
    if (cfg.contains("count") && !given("count")) {
        opt.count = cfg.at("count").get<std::uint64_t>();
        opt.have_count = true;
    }
    if (cfg.contains("burn-in") && !given("burn-in")) {
        opt.burn_in = cfg.at("burn-in").get<std::uint64_t>();
        opt.have_burn_in = true;
    }
    if (cfg.contains("thinning") && !given("thinning")) {
        opt.thinning = cfg.at("thinning").get<std::uint64_t>();
        opt.have_thinning = true;
    }
    if (cfg.contains("probs") && !given("probs")) opt.probs = cfg.at("probs").get<bool>();
}

pasv::DagFile load_dag_checked(const Options& opt) {
    if (opt.dag.empty()) throw pasv::InvalidArgument("--dag is required");
    if (!std::filesystem::exists(opt.dag)) {
        throw pasv::InvalidArgument("DAG file not found: " + opt.dag);
    }
    return pasv::load_dag(opt.dag);
}

pasv::Weights load_weights_checked(const Options& opt, const pasv::LabelMap& labels) {
    pasv::Weights w = pasv::Weights::uniform(labels.size());
    if (!opt.weights.empty()) {
        if (!std::filesystem::exists(opt.weights)) {
            throw pasv::InvalidArgument("weights file not found: " + opt.weights);
        }
        w = pasv::load_weights(opt.weights, labels);
    }
    if (!opt.lambda_inline.empty()) {
        for (const auto& item : split(opt.lambda_inline, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) {
                throw pasv::InvalidArgument("--lambda entries look like label=value");
            }
            w.lambda[labels.index(item.substr(0, eq))] = std::stod(item.substr(eq + 1));
        }
        w = pasv::Weights::of(std::move(w.lambda));
    }
    return w;
}

pasv::Bitset parse_player_set(const std::string& csv, const pasv::LabelMap& labels) {
    pasv::Bitset out(labels.size());
    for (const auto& label : split(csv, ',')) {
        if (!label.empty()) out.set(labels.index(label));
    }
    return out;
}

std::map<std::string, std::string> parse_kv(const std::string& s) {
    std::map<std::string, std::string> out;
    for (const auto& item : split(s, ';')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw pasv::InvalidArgument("expected key=value in utility spec: " + item);
        }
        out[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return out;
}

pasv::UtilityPtr build_utility(const Options& opt, const pasv::LabelMap& labels,
                               std::uint64_t seed) {
    if (opt.utility.empty()) throw pasv::InvalidArgument("--utility is required");
    const auto colon = opt.utility.find(':');
    const std::string kind = opt.utility.substr(0, colon);
    const std::string rest =
        colon == std::string::npos ? "" : opt.utility.substr(colon + 1);
    if (kind == "elementary") {
        return pasv::elementary_game(parse_player_set(rest, labels));
    }
    if (kind == "table") {
        return pasv::load_table_utility(rest, labels.size());
    }
    if (kind == "lineage") {
        return pasv::load_lineage_utility(rest, labels);
    }
    if (kind == "external") {
        if (rest.empty()) throw pasv::InvalidArgument("external utility needs a command");
        return pasv::external_utility(labels.size(), rest);
    }
    if (kind == "knn") {
        auto kv = parse_kv(rest);
        auto need = [&](const std::string& key) {
            auto it = kv.find(key);
            if (it == kv.end()) {
                throw pasv::InvalidArgument("knn utility spec is missing '" + key + "'");
            }
            return it->second;
        };
        const std::string label_col = kv.count("label") ? kv["label"] : "label";
        pasv::TabularDataset train = pasv::load_tabular_csv(need("train"), label_col);
        pasv::TabularDataset eval = pasv::load_tabular_csv(need("eval"), label_col);
        if (train.feature_count() != labels.size()) {
            throw pasv::InvalidArgument("knn feature count does not match the DAG");
        }
        const int k = std::stoi(need("k"));
        const int n_eval = std::stoi(need("n_eval"));
        const std::uint64_t knn_seed =
            kv.count("seed") ? std::stoull(kv["seed"]) : pasv::derive_seed(seed, "knn");
        return pasv::knn_imputation_utility(std::move(train), std::move(eval),
                                            pasv::load_predictor(need("predictor")), k,
                                            n_eval, knn_seed);
    }
    throw pasv::InvalidArgument("unknown utility kind: " + kind);
}

pasv::EstimatorConfig build_estimator(const Options& opt, int n, std::uint64_t seed,
                                      const std::string& purpose) {
    pasv::EstimatorConfig cfg;
    cfg.mh = pasv::MhConfig::suggested(n);
    cfg.mh.seed = pasv::derive_seed(seed, purpose);

    const auto colon = opt.estimator.find(':');
    const std::string kind = opt.estimator.substr(0, colon);
    const std::string rest =
        colon == std::string::npos ? "" : opt.estimator.substr(colon + 1);
    if (kind == "auto" || kind.empty()) {
        cfg.mode = pasv::EstimatorConfig::Mode::Auto;
        if (!rest.empty()) cfg.exact_cap = std::stoull(rest);
    } else if (kind == "exact") {
        cfg.mode = pasv::EstimatorConfig::Mode::Exact;
        if (!rest.empty()) cfg.exact_cap = std::stoull(rest);
    } else if (kind == "mh") {
        cfg.mode = pasv::EstimatorConfig::Mode::Mh;
        if (!rest.empty()) {
            const auto parts = split(rest, ',');
            if (parts.size() != 3) {
                throw pasv::InvalidArgument("mh estimator spec looks like mh:N_MC,B,tau");
            }
            cfg.mh.n_mc = std::stoull(parts[0]);
            cfg.mh.burn_in = std::stoull(parts[1]);
            cfg.mh.thinning = std::stoull(parts[2]);
        }
    } else {
        throw pasv::InvalidArgument("unknown estimator: " + opt.estimator);
    }
    if (opt.have_count) cfg.mh.n_mc = opt.count;
    if (opt.have_burn_in) cfg.mh.burn_in = opt.burn_in;
    if (opt.have_thinning) cfg.mh.thinning = opt.thinning;
    return cfg;
}

bool json_format(const Options& opt, const std::string& path) {
    if (opt.format == "json") return true;
    if (opt.format == "csv") return false;
    if (!opt.format.empty()) {
        throw pasv::InvalidArgument("unknown format: " + opt.format);
    }
    return std::filesystem::path(path).extension() == ".json";
}

void emit(const Options& opt, const std::string& path, const std::string& csv,
          const std::string& json_text) {
    const std::string& content = json_format(opt, path) ? json_text : csv;
    if (path.empty()) {
        std::cout << content;
    } else {
        pasv::atomic_write(path, content);
    }
}

std::string derived_group_out(const Options& opt) {
    if (!opt.group_out.empty()) return opt.group_out;
    if (opt.out.empty()) return "";
    std::filesystem::path p(opt.out);
    std::filesystem::path q = p.parent_path() / (p.stem().string() + ".groups" +
                                                 p.extension().string());
    return q.string();
}

int cmd_value(const Options& opt) {
    const pasv::DagFile dag = load_dag_checked(opt);
    const pasv::Weights w = load_weights_checked(opt, dag.labels);
    const pasv::UtilityPtr u = pasv::cached(build_utility(opt, dag.labels, opt.seed));
    const pasv::EstimatorConfig est =
        build_estimator(opt, dag.labels.size(), opt.seed, "value");

    if (!opt.positions_out.empty() && est.mode != pasv::EstimatorConfig::Mode::Mh) {
        throw pasv::InvalidArgument("--positions-out requires --estimator mh");
    }

    std::vector<std::string> groups;
    if (!opt.groups.empty()) groups = pasv::load_grouping(opt.groups, dag.labels);

    pasv::ValueReport report;
    std::string positions_csv;
    std::string positions_json;
    if (est.mode == pasv::EstimatorConfig::Mode::Mh) {
        auto [samples, stats] = pasv::mh_sample(dag.poset, w, est.mh);
        report = pasv::rov_estimate(samples, *u);
        if (!opt.positions_out.empty()) {
            std::vector<std::string> curve_groups = groups;
            if (curve_groups.empty()) curve_groups = dag.labels.labels;
            const auto curve = pasv::marginal_by_position(samples, *u, curve_groups);
            positions_csv = pasv::position_curve_csv(curve);
            positions_json = pasv::position_curve_json(curve);
        }
    } else {
        report = pasv::estimate_values(dag.poset, w, *u, est);
    }

    std::printf("efficiency check: value_sum=%.12g grand_total=%.12g gap=%.3e\n",
                report.value_sum, report.grand_total,
                report.value_sum - report.grand_total);

    emit(opt, opt.out, pasv::value_report_csv(report, dag.labels),
         pasv::value_report_json(report, dag.labels));
    if (!groups.empty()) {
        const auto g = pasv::group_values(report, groups);
        const std::string path = derived_group_out(opt);
        emit(opt, path, pasv::group_report_csv(g, report.n_samples),
             pasv::group_report_json(g, report.n_samples));
    }
    if (!positions_csv.empty()) {
        emit(opt, opt.positions_out, positions_csv, positions_json);
    }
    return kExitOk;
}

int cmd_sweep(const Options& opt) {
    const pasv::DagFile dag = load_dag_checked(opt);
    const pasv::Weights w = load_weights_checked(opt, dag.labels);
    const pasv::UtilityPtr u = pasv::cached(build_utility(opt, dag.labels, opt.seed));
    if (opt.target.empty()) throw pasv::InvalidArgument("--target is required");

    pasv::SweepSpec spec;
    spec.target = parse_player_set(opt.target, dag.labels);
    spec.baseline = w;
    spec.estimator = build_estimator(opt, dag.labels.size(), opt.seed, "sweep");
    spec.seed = opt.seed;
    if (opt.grid.empty()) {
        spec.grid = pasv::default_sweep_grid();
    } else {
        for (const auto& v : split(opt.grid, ',')) spec.grid.push_back(std::stod(v));
    }

    std::vector<std::string> groups;
    if (!opt.groups.empty()) groups = pasv::load_grouping(opt.groups, dag.labels);

    const pasv::SweepReport report = pasv::run_sweep(dag.poset, spec, *u);

    std::optional<pasv::ValueReport> reference;
    if (!opt.limit_reference.empty()) {
        if (opt.limit_reference == "maximal") {
            if (spec.target.count() != 1) {
                throw pasv::InvalidArgument(
                    "--limit-reference maximal needs a single-player target");
            }
            reference = pasv::limit_reference_maximal(dag.poset, w, spec.target.first(),
                                                      *u, spec.estimator);
        } else if (opt.limit_reference == "refine") {
            const auto op = dag.poset.ordered_partition();
            if (!op) {
                throw pasv::InvalidArgument(
                    "--limit-reference refine needs an ordered-partition DAG");
            }
            int layer = -1;
            bool consistent = true;
            spec.target.for_each([&](int i) {
                const int li = op->layer_of(i);
                if (layer < 0) layer = li;
                if (li != layer) consistent = false;
            });
            if (!consistent) {
                throw pasv::SubsetNotInLayer("target players span multiple layers");
            }
            reference = pasv::limit_reference_refine(*op, w, layer, spec.target, *u,
                                                     spec.estimator);
        } else {
            throw pasv::InvalidArgument("--limit-reference must be maximal or refine");
        }
    }

    const std::vector<std::string>* group_ptr = groups.empty() ? nullptr : &groups;
    emit(opt, opt.out,
         pasv::sweep_report_csv(report, dag.labels, reference ? &*reference : nullptr,
                                group_ptr),
         pasv::sweep_report_json(report, dag.labels, reference ? &*reference : nullptr,
                                 group_ptr));
    return kExitOk;
}

int cmd_sample(const Options& opt) {
    const pasv::DagFile dag = load_dag_checked(opt);
    const pasv::Weights w = load_weights_checked(opt, dag.labels);

    pasv::MhConfig cfg = pasv::MhConfig::suggested(dag.labels.size());
    cfg.seed = pasv::derive_seed(opt.seed, "sample");
    if (opt.have_count) cfg.n_mc = opt.count;
    if (opt.have_burn_in) cfg.burn_in = opt.burn_in;
    if (opt.have_thinning) cfg.thinning = opt.thinning;

    const auto [samples, stats] = pasv::mh_sample(dag.poset, w, cfg);
    std::fprintf(stderr,
                 "chain: steps=%llu proposals=%llu accepts=%llu acceptance_rate=%.6g\n",
                 static_cast<unsigned long long>(stats.steps_total),
                 static_cast<unsigned long long>(stats.proposals),
                 static_cast<unsigned long long>(stats.accepts),
                 stats.acceptance_rate());

    const std::string text = pasv::samples_jsonl(samples, dag.labels);
    if (opt.out.empty()) {
        std::cout << text;
    } else {
        pasv::atomic_write(opt.out, text);
    }
    return kExitOk;
}

int cmd_enumerate(const Options& opt) {
    const pasv::DagFile dag = load_dag_checked(opt);
    const pasv::Weights w = load_weights_checked(opt, dag.labels);
    const pasv::OrderDistribution d =
        pasv::exact_pasv_distribution(dag.poset, w, opt.cap);
    std::printf("count %zu\n", d.size());
    if (opt.probs) {
        for (std::size_t i = 0; i < d.size(); ++i) {
            json line = json::array();
            for (int player : d.support[i].order) line.push_back(dag.labels.label(player));
            std::printf("%s\t%.17g\n", line.dump().c_str(), d.prob[i]);
        }
    }
    return kExitOk;
}

int cmd_limit_check(const Options& opt) {
    const pasv::DagFile dag = load_dag_checked(opt);
    const pasv::Weights w = load_weights_checked(opt, dag.labels);
    if (opt.target.empty()) throw pasv::InvalidArgument("--target is required");

    if (!opt.candidate_edges.empty()) {
        const int target = dag.labels.index(opt.target);
        std::vector<std::pair<int, int>> edges;
        for (const auto& e : split(opt.candidate_edges, ',')) {
            const auto gt = e.find('>');
            if (gt == std::string::npos) {
                throw pasv::InvalidArgument("--candidate-edges entries look like a>b");
            }
            edges.emplace_back(dag.labels.index(e.substr(0, gt)),
                               dag.labels.index(e.substr(gt + 1)));
        }
        const double tv = pasv::limit_mismatch_demo(dag.poset, w, target, edges, opt.cap);
        std::printf("tv at lambda=1e8 vs candidate edges: %.6e\n", tv);
        std::printf("verdict: %s\n", tv < 1e-4 ? "equivalent" : "non-equivalent");
        return kExitOk;
    }

    pasv::Poset modified = dag.poset;
    pasv::Bitset target_set = parse_player_set(opt.target, dag.labels);
    if (opt.mode == "maximal") {
        if (target_set.count() != 1) {
            throw pasv::InvalidArgument("--mode maximal needs a single-player target");
        }
        modified = dag.poset.force_unique_maximal(target_set.first());
    } else if (opt.mode == "refine") {
        const auto op = dag.poset.ordered_partition();
        if (!op) {
            throw pasv::InvalidArgument("--mode refine needs an ordered-partition DAG");
        }
        int layer = -1;
        bool consistent = true;
        target_set.for_each([&](int i) {
            const int li = op->layer_of(i);
            if (layer < 0) layer = li;
            if (li != layer) consistent = false;
        });
        if (!consistent) throw pasv::SubsetNotInLayer("target players span multiple layers");
        modified = pasv::refine_layer_poset(*op, layer, target_set);
    } else {
        throw pasv::InvalidArgument("--mode must be maximal or refine");
    }

    std::vector<double> ref_lambda = w.lambda;
    target_set.for_each([&](int i) { ref_lambda[i] = 1.0; });
    const pasv::OrderDistribution reference =
        pasv::exact_pasv_distribution(modified, pasv::Weights::of(ref_lambda), opt.cap);

    std::vector<double> tvs;
    for (double scale : {1e2, 1e4, 1e6}) {
        std::vector<double> lambda = w.lambda;
        target_set.for_each([&](int i) { lambda[i] = scale; });
        const pasv::OrderDistribution d =
            pasv::exact_pasv_distribution(dag.poset, pasv::Weights::of(lambda), opt.cap);
        tvs.push_back(pasv::tv_distance(d, reference));
        std::printf("lambda=%.0e tv=%.6e\n", scale, tvs.back());
    }
    const bool decreasing = tvs[0] > tvs[1] && tvs[1] > tvs[2];
    const bool converged = tvs[2] < 1e-4;
    std::printf("verdict: %s\n", decreasing && converged ? "limit matches modified poset"
                                                         : "limit check FAILED");
    return decreasing && converged ? kExitOk : kExitCheckFailed;
}

void add_common(CLI::App* cmd, Options& opt) {
    cmd->add_option("--config", opt.config, "JSON config file; flags override its fields");
    cmd->add_option("--dag", opt.dag, "DAG file (JSON; see README for the two forms)");
    cmd->add_option("--weights", opt.weights,
                    "weights file (JSON lambda or base/exponents form)");
    cmd->add_option("--lambda", opt.lambda_inline,
                    "inline weights label=value[,label=value...]; overrides --weights");
    cmd->add_option("--seed", opt.seed, "master seed; sub-seeds derive per purpose");
    cmd->add_option("--out", opt.out, "output path (stdout when omitted)");
    cmd->add_option("--format", opt.format, "csv or json (default: by file extension)");
}

void add_estimator(CLI::App* cmd, Options& opt) {
    cmd->add_option("--estimator", opt.estimator,
                    "auto[:cap] | exact[:cap] | mh[:N_MC,B,tau]");
    cmd->add_option("--count", opt.count, "Monte Carlo sample count override");
    cmd->add_option("--burn-in", opt.burn_in, "chain burn-in override");
    cmd->add_option("--thinning", opt.thinning, "chain thinning override");
}

int run(int argc, char** argv) {
    CLI::App app{"Priority-aware Shapley values over precedence DAGs"};
    app.require_subcommand(1);

    Options opt;

    CLI::App* value = app.add_subcommand("value", "compute per-player values");
    add_common(value, opt);
    add_estimator(value, opt);
    value->add_option("--utility", opt.utility,
                      "elementary:L1,L2 | table:PATH | lineage:PATH | external:CMD | "
                      "knn:train=..;eval=..;predictor=..;k=..;n_eval=..[;label=..;seed=..]");
    value->add_option("--groups", opt.groups, "grouping JSON {player: group}");
    value->add_option("--group-out", opt.group_out, "group report path");
    value->add_option("--positions-out", opt.positions_out,
                      "marginal-by-position CSV (mh estimator only)");

    CLI::App* sweep = app.add_subcommand("sweep", "recompute values over a weight grid");
    add_common(sweep, opt);
    add_estimator(sweep, opt);
    sweep->add_option("--utility", opt.utility, "utility spec (see value --help)");
    sweep->add_option("--target", opt.target, "player label(s) to sweep, comma-separated");
    sweep->add_option("--grid", opt.grid, "comma-separated multipliers (default 2^-8..2^8)");
    sweep->add_option("--limit-reference", opt.limit_reference,
                      "append extreme-weight reference rows: maximal | refine");
    sweep->add_option("--groups", opt.groups,
                      "grouping JSON; sweep rows aggregate to group level");

    CLI::App* sample = app.add_subcommand("sample", "draw linear extensions (JSONL)");
    add_common(sample, opt);
    sample->add_option("--count", opt.count, "number of samples");
    sample->add_option("--burn-in", opt.burn_in, "chain burn-in");
    sample->add_option("--thinning", opt.thinning, "chain thinning");

    CLI::App* enumerate = app.add_subcommand("enumerate", "count/list linear extensions");
    add_common(enumerate, opt);
    enumerate->add_flag("--probs", opt.probs, "also print each extension and probability");
    enumerate->add_option("--cap", opt.cap, "extension count cap");

    CLI::App* limit = app.add_subcommand(
        "limit-check", "compare extreme weights against the modified-poset construction");
    add_common(limit, opt);
    limit->add_option("--target", opt.target,
                      "target player (maximal) or layer subset (refine)");
    limit->add_option("--mode", opt.mode, "maximal | refine");
    limit->add_option("--candidate-edges", opt.candidate_edges,
                      "a>b[,c>d...]: test a candidate edge set instead of a proposition");
    limit->add_option("--cap", opt.cap, "extension count cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        CLI::App* cmd = app.get_subcommands().front();
        auto has_flag = [&](const char* name) {
            auto* o = cmd->get_option_no_throw(name);
            return o != nullptr && o->count() > 0;
        };
        opt.have_count = has_flag("--count");
        opt.have_burn_in = has_flag("--burn-in");
        opt.have_thinning = has_flag("--thinning");
        apply_config(*cmd, opt);
        if (value->parsed()) return cmd_value(opt);
        if (sweep->parsed()) return cmd_sweep(opt);
        if (sample->parsed()) return cmd_sample(opt);
        if (enumerate->parsed()) return cmd_enumerate(opt);
        if (limit->parsed()) return cmd_limit_check(opt);
        return kExitConfig;
    } catch (const pasv::ExtensionCountExceedsCap& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCap;
    } catch (const pasv::UtilityProtocolError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUtility;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (...) {
        std::cerr << "error: unknown failure\n";
        return kExitConfig;
    }
}
