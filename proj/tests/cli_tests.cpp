#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "pasv/io.hpp"
#include "pasv/utility.hpp"
#include "pasv/valuation.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Workspace {
    fs::path dir;

    Workspace() {
        dir = fs::temp_directory_path() / ("pasv_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~Workspace() { fs::remove_all(dir); }

    fs::path write(const std::string& name, const std::string& content) const {
        const fs::path p = dir / name;
        std::ofstream out(p);
        out << content;
        return p;
    }

    RunResult run(const std::string& args) const {
        const fs::path out = dir / "stdout.txt";
        const fs::path err = dir / "stderr.txt";
        const std::string cmd = std::string(PASV_CLI_PATH) + " " + args + " > " +
                                out.string() + " 2> " + err.string();
        const int status = std::system(cmd.c_str());
        RunResult r;
        r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.out = slurp(out);
        r.err = slurp(err);
        return r;
    }
};

// player -> value from a report CSV.
std::map<std::string, double> parse_values(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line); // header
    std::map<std::string, double> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        out[line.substr(0, c1)] = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
    }
    return out;
}

const char* kNDag = R"({"n": 4, "edges": [[1,2],[3,2],[3,4]]})";

} // namespace

TEST_CASE("help is available and documents flags") {
    Workspace ws;
    const RunResult top = ws.run("--help");
    CHECK(top.exit_code == 0);
    CHECK(top.out.find("value") != std::string::npos);
    CHECK(top.out.find("limit-check") != std::string::npos);

    const RunResult value = ws.run("value --help");
    CHECK(value.exit_code == 0);
    for (const char* flag : {"--dag", "--weights", "--lambda", "--utility", "--estimator",
                             "--seed", "--out", "--format", "--groups", "--positions-out"}) {
        CHECK(value.out.find(flag) != std::string::npos);
    }
}

TEST_CASE("unknown flags and missing subcommands are rejected") {
    Workspace ws;
    CHECK(ws.run("value --no-such-flag").exit_code == 2);
    CHECK(ws.run("").exit_code == 2);
    CHECK(ws.run("frobnicate").exit_code == 2);
}

TEST_CASE("value command on the worked example") {
    Workspace ws;
    const fs::path dag = ws.write("dag.json", kNDag);
    const fs::path out = ws.dir / "values.csv";
    const RunResult r = ws.run("value --dag " + dag.string() +
                               " --utility elementary:1,3 --estimator exact --out " +
                               out.string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("efficiency check:") != std::string::npos);
    const auto values = parse_values(slurp(out));
    CHECK(values.at("1") == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(values.at("2") == doctest::Approx(0.0));
    CHECK(values.at("3") == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(values.at("4") == doctest::Approx(0.0));
}

TEST_CASE("value with weights and json output") {
    Workspace ws;
    const fs::path dag = ws.write("dag.json", kNDag);
    const fs::path weights = ws.write("w.json", R"({"lambda": {"4": 2.0}})");
    const fs::path out = ws.dir / "values.json";
    const RunResult r = ws.run("value --dag " + dag.string() + " --weights " +
                               weights.string() +
                               " --utility elementary:1,3 --estimator exact --out " +
                               out.string());
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(slurp(out));
    CHECK(j.at("values").at("1").get<double>() ==
          doctest::Approx(6.0 / 11).epsilon(1e-12));
    CHECK(j.at("values").at("3").get<double>() ==
          doctest::Approx(5.0 / 11).epsilon(1e-12));
}

TEST_CASE("group report") {
    Workspace ws;
    const fs::path dag = ws.write("dag.json", kNDag);
    const fs::path groups = ws.write("g.json",
                                     R"({"1": "left", "2": "left", "3": "right", "4": "right"})");
    const fs::path out = ws.dir / "values.csv";
    const RunResult r = ws.run("value --dag " + dag.string() +
                               " --utility elementary:1,3 --estimator exact --groups " +
                               groups.string() + " --out " + out.string());
    REQUIRE(r.exit_code == 0);
    const auto g = parse_values(slurp(ws.dir / "values.groups.csv"));
    CHECK(g.at("left") == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(g.at("right") == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("missing dag file names the path and exits 2") {
    Workspace ws;
    const RunResult r = ws.run("value --dag /no/such/file.json --utility elementary:1");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("/no/such/file.json") != std::string::npos);
}

TEST_CASE("exact estimator over the cap exits 4") {
    Workspace ws;
    nlohmann::json dag;
    dag["n"] = 30;
    dag["edges"] = nlohmann::json::array();
    const fs::path path = ws.write("big.json", dag.dump());
    const RunResult r = ws.run("value --dag " + path.string() +
                               " --utility elementary:1 --estimator exact:100000");
    CHECK(r.exit_code == 4);
}

TEST_CASE("external utility failures exit 3") {
    Workspace ws;
    const fs::path dag = ws.write("dag.json", kNDag);
    const RunResult r = ws.run("value --dag " + dag.string() +
                               " --utility \"external:exit 0\" --estimator exact");
    CHECK(r.exit_code == 3);
}

TEST_CASE("sample runs are seed-deterministic") {
    Workspace ws;
    const fs::path dag = ws.write("dag.json", kNDag);
    const fs::path a = ws.dir / "a.jsonl";
    const fs::path b = ws.dir / "b.jsonl";
    const fs::path c = ws.dir / "c.jsonl";
    REQUIRE(ws.run("sample --dag " + dag.string() + " --count 500 --burn-in 50 " +
                   "--thinning 2 --seed 7 --out " + a.string()).exit_code == 0);
    REQUIRE(ws.run("sample --dag " + dag.string() + " --count 500 --burn-in 50 " +
                   "--thinning 2 --seed 7 --out " + b.string()).exit_code == 0);
    REQUIRE(ws.run("sample --dag " + dag.string() + " --count 500 --burn-in 50 " +
                   "--thinning 2 --seed 8 --out " + c.string()).exit_code == 0);
    const std::string sa = slurp(a);
    const std::string sb = slurp(b);
    const std::string sc = slurp(c);
    CHECK(sa == sb);
    CHECK(sa != sc);
    const auto lines = [](const std::string& s) {
        return std::count(s.begin(), s.end(), '\n');
    };
    CHECK(lines(sa) == 500);
    CHECK(lines(sc) == 500);
}

TEST_CASE("chain dag always samples its unique extension") {
    Workspace ws;
    const fs::path dag = ws.write("chain.json", R"({"n": 3, "edges": [[1,2],[2,3]]})");
    const fs::path out = ws.dir / "s.jsonl";
    REQUIRE(ws.run("sample --dag " + dag.string() + " --count 50 --out " +
                   out.string()).exit_code == 0);
    std::istringstream in(slurp(out));
    std::string line;
    while (std::getline(in, line)) CHECK(line == "[\"1\",\"2\",\"3\"]");
}

TEST_CASE("enumerate prints the count and normalized probabilities") {
    Workspace ws;
    const fs::path dag = ws.write("dag.json", kNDag);
    const RunResult r = ws.run("enumerate --dag " + dag.string() +
                               " --lambda 4=2 --probs");
    REQUIRE(r.exit_code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "count 5");
    double total = 0.0;
    while (std::getline(in, line)) {
        const auto tab = line.find('\t');
        REQUIRE(tab != std::string::npos);
        total += std::stod(line.substr(tab + 1));
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    const fs::path chain = ws.write("chain.json", R"({"n": 2, "edges": [[1,2]]})");
    CHECK(ws.run("enumerate --dag " + chain.string()).out.find("count 1") == 0);

    nlohmann::json big;
    big["n"] = 30;
    big["edges"] = nlohmann::json::array();
    const fs::path bigpath = ws.write("big.json", big.dump());
    CHECK(ws.run("enumerate --dag " + bigpath.string() + " --cap 1000").exit_code == 4);
}

TEST_CASE("limit-check verdicts and exit codes") {
    Workspace ws;
    const fs::path dag = ws.write("dag.json", kNDag);

    const RunResult ok = ws.run("limit-check --dag " + dag.string() +
                                " --target 4 --mode maximal");
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("limit matches modified poset") != std::string::npos);

    const RunResult counter = ws.run("limit-check --dag " + dag.string() +
                                     " --target 3 --candidate-edges \"1>3\"");
    CHECK(counter.exit_code == 0);
    CHECK(counter.out.find("non-equivalent") != std::string::npos);

    CHECK(ws.run("limit-check --dag " + dag.string() + " --target 4 --mode bogus")
              .exit_code == 2);
    CHECK(ws.run("limit-check --dag " + dag.string() + " --target 1 --mode maximal")
              .exit_code == 2);
}

TEST_CASE("sweep command") {
    Workspace ws;
    const fs::path dag = ws.write("dag.json", kNDag);
    const fs::path out = ws.dir / "sweep.csv";
    std::string grid = "0.0625,0.125,0.25,0.5,1,2,4,8,16";
    const RunResult r = ws.run("sweep --dag " + dag.string() +
                               " --utility elementary:1,3 --target 1 --grid " + grid +
                               " --estimator exact --out " + out.string());
    REQUIRE(r.exit_code == 0);
    // 9 grid points x 4 players.
    std::istringstream in(slurp(out));
    std::string line;
    std::getline(in, line);
    CHECK(line == "grid_b,player_or_group,value,std_error,reference");
    std::vector<double> player1;
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        std::vector<std::string> f;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) f.push_back(field);
        REQUIRE(f.size() == 5);
        if (f[1] == "1") player1.push_back(std::stod(f[2]));
    }
    CHECK(rows == 36);
    REQUIRE(player1.size() == 9);
    CHECK(player1[4] == doctest::Approx(0.6).epsilon(1e-12));
    for (std::size_t i = 1; i < player1.size(); ++i) CHECK(player1[i] > player1[i - 1]);
}

TEST_CASE("single-point sweep equals the value command") {
    Workspace ws;
    const fs::path dag = ws.write("dag.json", kNDag);
    const fs::path sweep_out = ws.dir / "sweep.csv";
    const fs::path value_out = ws.dir / "value.csv";
    REQUIRE(ws.run("sweep --dag " + dag.string() +
                   " --utility elementary:1,3 --target 3 --grid 1 --estimator exact"
                   " --out " + sweep_out.string()).exit_code == 0);
    REQUIRE(ws.run("value --dag " + dag.string() +
                   " --utility elementary:1,3 --estimator exact --out " +
                   value_out.string()).exit_code == 0);
    const auto values = parse_values(slurp(value_out));
    std::istringstream in(slurp(sweep_out));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::vector<std::string> f;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) f.push_back(field);
        CHECK(std::stod(f[2]) == doctest::Approx(values.at(f[1])).epsilon(1e-14));
    }
}

TEST_CASE("sweep limit-reference rows and precondition failures") {
    Workspace ws;
    const fs::path dag = ws.write("dag.json", kNDag);
    const fs::path out = ws.dir / "sweep.csv";
    const RunResult r = ws.run("sweep --dag " + dag.string() +
                               " --utility elementary:1,3 --target 4 --grid 1,2,4" +
                               " --estimator exact --limit-reference maximal --out " +
                               out.string());
    REQUIRE(r.exit_code == 0);
    const std::string csv = slurp(out);
    CHECK(csv.find("inf,") != std::string::npos);
    CHECK(csv.find(",true") != std::string::npos);

    // Player 1 is not globally maximal.
    CHECK(ws.run("sweep --dag " + dag.string() +
                 " --utility elementary:1,3 --target 1 --grid 1,2" +
                 " --estimator exact --limit-reference maximal --out " + out.string())
              .exit_code == 2);
}

TEST_CASE("grouped sweep aggregates rows per group") {
    Workspace ws;
    const fs::path dag = ws.write("dag.json", kNDag);
    const fs::path groups = ws.write("g.json",
                                     R"({"1": "left", "2": "left", "3": "right", "4": "right"})");
    const fs::path out = ws.dir / "sweep.csv";
    const RunResult r = ws.run("sweep --dag " + dag.string() +
                               " --utility elementary:1,3 --target 1 --grid 1,4" +
                               " --estimator exact --groups " + groups.string() +
                               " --out " + out.string());
    REQUIRE(r.exit_code == 0);
    std::istringstream in(slurp(out));
    std::string line;
    std::getline(in, line);
    int rows = 0;
    double left_at_1 = -1;
    while (std::getline(in, line)) {
        ++rows;
        std::vector<std::string> f;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) f.push_back(field);
        REQUIRE(f.size() == 5);
        CHECK((f[1] == "left" || f[1] == "right"));
        if (f[0] == "1" && f[1] == "left") left_at_1 = std::stod(f[2]);
    }
    CHECK(rows == 4); // 2 grid points x 2 groups
    CHECK(left_at_1 == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("config file fields are used unless overridden by flags") {
    Workspace ws;
    const fs::path dag = ws.write("dag.json", kNDag);
    nlohmann::json cfg;
    cfg["dag"] = dag.string();
    cfg["utility"] = "elementary:1,3";
    cfg["estimator"] = "exact";
    const fs::path cfg_path = ws.write("cfg.json", cfg.dump());
    const fs::path out = ws.dir / "v.csv";

    const RunResult from_config =
        ws.run("value --config " + cfg_path.string() + " --out " + out.string());
    REQUIRE(from_config.exit_code == 0);
    CHECK(parse_values(slurp(out)).at("1") == doctest::Approx(0.6).epsilon(1e-12));

    const RunResult overridden = ws.run("value --config " + cfg_path.string() +
                                        " --utility elementary:2 --out " + out.string());
    REQUIRE(overridden.exit_code == 0);
    CHECK(parse_values(slurp(out)).at("2") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("positions-out requires the mh estimator") {
    Workspace ws;
    const fs::path dag = ws.write("dag.json", kNDag);
    const fs::path pos = ws.dir / "pos.csv";
    CHECK(ws.run("value --dag " + dag.string() +
                 " --utility elementary:1,3 --estimator exact --positions-out " +
                 pos.string()).exit_code == 2);
    CHECK_FALSE(fs::exists(pos));

    const RunResult r = ws.run("value --dag " + dag.string() +
                               " --utility elementary:1,3 --estimator mh:2000,100,1" +
                               " --positions-out " + pos.string());
    REQUIRE(r.exit_code == 0);
    CHECK(slurp(pos).find("group,position,mean_marginal,count") == 0);
}

TEST_CASE("every command is byte-deterministic given its flags and seed") {
    Workspace ws;
    const fs::path dag = ws.write("dag.json", kNDag);
    const fs::path a = ws.dir / "a.csv";
    const fs::path b = ws.dir / "b.csv";

    const std::string value_args = "value --dag " + dag.string() +
                                   " --utility elementary:1,3 --estimator mh:3000,200,2"
                                   " --seed 11 --out ";
    REQUIRE(ws.run(value_args + a.string()).exit_code == 0);
    REQUIRE(ws.run(value_args + b.string()).exit_code == 0);
    CHECK(slurp(a) == slurp(b));

    const std::string sweep_args = "sweep --dag " + dag.string() +
                                   " --utility elementary:1,3 --target 1 --grid 0.5,1,2"
                                   " --estimator mh:2000,100,1 --seed 3 --out ";
    REQUIRE(ws.run(sweep_args + a.string()).exit_code == 0);
    REQUIRE(ws.run(sweep_args + b.string()).exit_code == 0);
    CHECK(slurp(a) == slurp(b));

    const std::string enum_args =
        "enumerate --dag " + dag.string() + " --lambda 4=2 --probs";
    const RunResult e1 = ws.run(enum_args);
    const RunResult e2 = ws.run(enum_args);
    REQUIRE(e1.exit_code == 0);
    CHECK(e1.out == e2.out);
}

TEST_CASE("knn utility end to end") {
    Workspace ws;
    const fs::path dag = ws.write("dag.json",
                                  R"({"players": ["f0", "f1", "f2"], "edges": [["f0","f1"]]})");
    const fs::path train = ws.write("train.csv",
                                    "f0,f1,f2,label\n"
                                    "0.0,0.5,1.0,0\n1.0,1.5,0.0,1\n2.0,0.0,0.5,0\n"
                                    "0.5,2.0,1.5,1\n1.5,1.0,2.0,0\n2.5,2.5,0.5,1\n");
    const fs::path eval = ws.write("eval.csv",
                                   "f0,f1,f2,label\n"
                                   "0.2,0.4,1.1,0\n1.8,1.2,0.3,1\n0.9,1.9,1.4,1\n");
    const fs::path pred = ws.write("pred.json",
                                   R"({"classes": 2,
                                       "weights": [[0.8, -0.4, 0.3], [-0.5, 0.6, -0.2]],
                                       "bias": [0.1, -0.1]})");
    const fs::path out = ws.dir / "knn.csv";
    const RunResult r = ws.run(
        "value --dag " + dag.string() + " --utility \"knn:train=" + train.string() +
        ";eval=" + eval.string() + ";predictor=" + pred.string() +
        ";k=2;n_eval=3;seed=55\" --estimator exact --out " + out.string());
    REQUIRE(r.exit_code == 0);

    // Cross-check against the library evaluated directly.
    const pasv::TabularDataset train_d = pasv::load_tabular_csv(train, "label");
    const pasv::TabularDataset eval_d = pasv::load_tabular_csv(eval, "label");
    const pasv::UtilityPtr u = pasv::knn_imputation_utility(
        train_d, eval_d, pasv::load_predictor(pred), 2, 3, 55);
    const pasv::DagFile d = pasv::load_dag(dag);
    const pasv::ValueReport expect =
        pasv::exact_value(d.poset, pasv::Weights::uniform(3), *u);
    const auto values = parse_values(slurp(out));
    for (int i = 0; i < 3; ++i) {
        CHECK(values.at("f" + std::to_string(i)) ==
              doctest::Approx(expect.values[i]).epsilon(1e-12));
    }
}

TEST_CASE("failed runs leave no partial output file") {
    Workspace ws;
    const fs::path dag = ws.write("dag.json", kNDag);
    const fs::path out = ws.dir / "never.csv";
    // Utility errors on an unknown subset after the run starts.
    const fs::path table = ws.write("t.csv", "subset,value\n0,0\n");
    const RunResult r = ws.run("value --dag " + dag.string() + " --utility table:" +
                               table.string() + " --estimator exact --out " + out.string());
    CHECK(r.exit_code == 2);
    CHECK_FALSE(fs::exists(out));
    CHECK_FALSE(fs::exists(out.string() + ".tmp"));
}
