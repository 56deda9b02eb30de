#include "pasv/io.hpp"

#include <cmath>
#include <cstdio>
#include <tuple>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pasv/errors.hpp"

namespace pasv {

using nlohmann::json;

namespace {

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open file: " + path.string());
    json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw InvalidArgument("invalid JSON in " + path.string());
    return j;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double(const std::string& s, const std::string& context) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InvalidArgument("expected a number in " + context + ", got '" + s + "'");
    }
}

// Fixed 17-significant-digit formatting: round-trips doubles and is
// locale-independent.
std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

int LabelMap::index(const std::string& label) const {
    for (int i = 0; i < size(); ++i) {
        if (labels[i] == label) return i;
    }
    throw InvalidArgument("unknown player label: " + label);
}

LabelMap LabelMap::numeric(int n) {
    LabelMap m;
    m.labels.reserve(n);
    for (int i = 1; i <= n; ++i) m.labels.push_back(std::to_string(i));
    return m;
}

DagFile load_dag(const std::filesystem::path& path) {
    const json j = load_json(path);
    LabelMap labels;
    if (j.contains("players")) {
        for (const auto& p : j.at("players")) {
            labels.labels.push_back(p.get<std::string>());
        }
        for (std::size_t a = 0; a < labels.labels.size(); ++a) {
            for (std::size_t b = a + 1; b < labels.labels.size(); ++b) {
                if (labels.labels[a] == labels.labels[b]) {
                    throw InvalidArgument("duplicate player label: " + labels.labels[a]);
                }
            }
        }
    } else if (j.contains("n")) {
        labels = LabelMap::numeric(j.at("n").get<int>());
    } else {
        throw InvalidArgument("DAG file needs either 'players' or 'n': " + path.string());
    }

    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.value("edges", json::array())) {
        if (!e.is_array() || e.size() != 2) {
            throw InvalidArgument("each edge must be a pair: " + path.string());
        }
        int from, to;
        if (e[0].is_string()) {
            from = labels.index(e[0].get<std::string>());
            to = labels.index(e[1].get<std::string>());
        } else {
            // Compact form: 1-based node ids.
            from = labels.index(std::to_string(e[0].get<int>()));
            to = labels.index(std::to_string(e[1].get<int>()));
        }
        edges.emplace_back(from, to);
    }
    return DagFile{labels, Poset::from_edges(labels.size(), edges)};
}

Weights load_weights(const std::filesystem::path& path, const LabelMap& labels) {
    const json j = load_json(path);
    std::vector<double> lambda(labels.size(), 1.0);
    if (j.contains("lambda")) {
        for (const auto& [label, value] : j.at("lambda").items()) {
            lambda[labels.index(label)] = value.get<double>();
        }
    } else if (j.contains("base")) {
        const double base = j.at("base").get<double>();
        if (!(base > 0.0)) throw InvalidArgument("weight base must be positive");
        for (const auto& [label, value] : j.at("exponents").items()) {
            lambda[labels.index(label)] = std::pow(base, value.get<double>());
        }
    } else {
        throw InvalidArgument("weights file needs 'lambda' or 'base'+'exponents': " +
                              path.string());
    }
    return Weights::of(std::move(lambda));
}

std::vector<std::string> load_grouping(const std::filesystem::path& path,
                                       const LabelMap& labels) {
    const json j = load_json(path);
    std::vector<std::string> groups(labels.size());
    for (const auto& [label, group] : j.items()) {
        groups[labels.index(label)] = group.get<std::string>();
    }
    for (int i = 0; i < labels.size(); ++i) {
        if (groups[i].empty()) {
            throw IncompleteGrouping("no group for player " + labels.label(i));
        }
    }
    return groups;
}

UtilityPtr load_table_utility(const std::filesystem::path& path, int n) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open file: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw InvalidArgument("empty table file: " + path.string());
    std::map<std::string, double> entries;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 2) {
            throw InvalidArgument("table rows need subset,value: " + path.string());
        }
        entries[fields[0]] = parse_double(fields[1], path.string());
    }
    return table_utility(n, std::move(entries));
}

UtilityPtr load_lineage_utility(const std::filesystem::path& path, const LabelMap& labels) {
    const json j = load_json(path);
    LineageSpec spec;
    spec.sources = Bitset(labels.size());
    for (const auto& [label, gain] : j.at("sources").items()) {
        const int i = labels.index(label);
        spec.sources.set(i);
        spec.gains[i] = gain.get<double>();
    }
    const json copies = j.value("copies", json::object());
    for (const auto& [label, entry] : copies.items()) {
        const int copy = labels.index(label);
        spec.copy_to_source[copy] = labels.index(entry.at("source").get<std::string>());
        spec.noise_penalty[copy] = entry.value("penalty", 0.0);
    }
    return lineage_utility(spec);
}

PredictorPtr load_predictor(const std::filesystem::path& path) {
    const json j = load_json(path);
    const int classes = j.at("classes").get<int>();
    auto weights = j.at("weights").get<std::vector<std::vector<double>>>();
    auto bias = j.at("bias").get<std::vector<double>>();
    if (static_cast<int>(weights.size()) != classes) {
        throw InvalidArgument("predictor 'weights' must have one row per class");
    }
    return logistic_predictor(std::move(weights), std::move(bias));
}

TabularDataset load_tabular_csv(const std::filesystem::path& path,
                                const std::string& label_column) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open file: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw InvalidArgument("empty dataset: " + path.string());
    const auto header = split_csv_line(line);
    int label_idx = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == label_column) label_idx = static_cast<int>(i);
    }
    if (label_idx < 0) {
        throw InvalidArgument("label column '" + label_column + "' not found in " +
                              path.string());
    }
    TabularDataset data;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw InvalidArgument("ragged CSV row in " + path.string());
        }
        std::vector<double> row;
        row.reserve(fields.size() - 1);
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (static_cast<int>(i) == label_idx) {
                data.labels.push_back(static_cast<int>(parse_double(fields[i], path.string())));
            } else {
                row.push_back(parse_double(fields[i], path.string()));
            }
        }
        data.rows.push_back(std::move(row));
    }
    if (data.rows.empty()) throw InvalidArgument("dataset has no rows: " + path.string());
    return data;
}

std::string value_report_csv(const ValueReport& r, const LabelMap& labels) {
    std::ostringstream out;
    out << "player,value,std_error,n_samples\n";
    for (int i = 0; i < r.player_count(); ++i) {
        out << labels.label(i) << ',' << fmt_double(r.values[i]) << ','
            << fmt_double(r.std_errors[i]) << ',' << r.n_samples << '\n';
    }
    return out.str();
}

std::string value_report_json(const ValueReport& r, const LabelMap& labels) {
    json j;
    j["n_samples"] = r.n_samples;
    j["grand_total"] = r.grand_total;
    j["value_sum"] = r.value_sum;
    json values = json::object();
    json errors = json::object();
    for (int i = 0; i < r.player_count(); ++i) {
        values[labels.label(i)] = r.values[i];
        errors[labels.label(i)] = r.std_errors[i];
    }
    j["values"] = values;
    j["std_errors"] = errors;
    return j.dump(2) + "\n";
}

std::string group_report_csv(const std::map<std::string, std::pair<double, double>>& g,
                             std::uint64_t n_samples) {
    std::ostringstream out;
    out << "group,value,std_error,n_samples\n";
    for (const auto& [label, entry] : g) {
        out << label << ',' << fmt_double(entry.first) << ',' << fmt_double(entry.second)
            << ',' << n_samples << '\n';
    }
    return out.str();
}

std::string group_report_json(const std::map<std::string, std::pair<double, double>>& g,
                              std::uint64_t n_samples) {
    json j;
    j["n_samples"] = n_samples;
    json values = json::object();
    json errors = json::object();
    for (const auto& [label, entry] : g) {
        values[label] = entry.first;
        errors[label] = entry.second;
    }
    j["values"] = values;
    j["std_errors"] = errors;
    return j.dump(2) + "\n";
}

std::string position_curve_csv(const PositionCurve& c) {
    std::ostringstream out;
    out << "group,position,mean_marginal,count\n";
    for (std::size_t g = 0; g < c.group_labels.size(); ++g) {
        for (std::size_t pos = 0; pos < c.mean[g].size(); ++pos) {
            out << c.group_labels[g] << ',' << pos << ',' << fmt_double(c.mean[g][pos])
                << ',' << c.count[g][pos] << '\n';
        }
    }
    return out.str();
}

std::string position_curve_json(const PositionCurve& c) {
    json groups = json::object();
    for (std::size_t g = 0; g < c.group_labels.size(); ++g) {
        json cells = json::array();
        for (std::size_t pos = 0; pos < c.mean[g].size(); ++pos) {
            cells.push_back({{"position", pos},
                             {"mean_marginal", c.mean[g][pos]},
                             {"count", c.count[g][pos]}});
        }
        groups[c.group_labels[g]] = cells;
    }
    return groups.dump(2) + "\n";
}

namespace {

// (label, value, std_error) rows of one report, per player or per group.
std::vector<std::tuple<std::string, double, double>> report_rows(
    const ValueReport& r, const LabelMap& labels,
    const std::vector<std::string>* groups) {
    std::vector<std::tuple<std::string, double, double>> rows;
    if (groups == nullptr) {
        for (int i = 0; i < r.player_count(); ++i) {
            rows.emplace_back(labels.label(i), r.values[i], r.std_errors[i]);
        }
    } else {
        for (const auto& [label, entry] : group_values(r, *groups)) {
            rows.emplace_back(label, entry.first, entry.second);
        }
    }
    return rows;
}

} // namespace

std::string sweep_report_csv(const SweepReport& r, const LabelMap& labels,
                             const ValueReport* limit_ref,
                             const std::vector<std::string>* groups) {
    std::ostringstream out;
    out << "grid_b,player_or_group,value,std_error,reference\n";
    for (const auto& point : r.points) {
        for (const auto& [label, value, err] : report_rows(point.report, labels, groups)) {
            out << fmt_double(point.multiplier) << ',' << label << ','
                << fmt_double(value) << ',' << fmt_double(err) << ",false\n";
        }
    }
    if (limit_ref != nullptr) {
        for (const auto& [label, value, err] : report_rows(*limit_ref, labels, groups)) {
            out << "inf," << label << ',' << fmt_double(value) << ',' << fmt_double(err)
                << ",true\n";
        }
    }
    return out.str();
}

std::string sweep_report_json(const SweepReport& r, const LabelMap& labels,
                              const ValueReport* limit_ref,
                              const std::vector<std::string>* groups) {
    json points = json::array();
    for (const auto& point : r.points) {
        json values = json::object();
        json errors = json::object();
        for (const auto& [label, value, err] : report_rows(point.report, labels, groups)) {
            values[label] = value;
            errors[label] = err;
        }
        points.push_back({{"grid_b", point.multiplier},
                          {"values", values},
                          {"std_errors", errors}});
    }
    json j;
    j["points"] = points;
    json target = json::array();
    r.target.for_each([&](int i) { target.push_back(labels.label(i)); });
    j["target"] = target;
    if (limit_ref != nullptr) {
        json values = json::object();
        for (const auto& [label, value, err] : report_rows(*limit_ref, labels, groups)) {
            values[label] = value;
        }
        j["limit_reference"] = values;
    }
    return j.dump(2) + "\n";
}

std::string samples_jsonl(std::span<const Permutation> samples, const LabelMap& labels) {
    std::ostringstream out;
    for (const Permutation& pi : samples) {
        json line = json::array();
        for (int player : pi.order) line.push_back(labels.label(player));
        out << line.dump() << '\n';
    }
    return out.str();
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InvalidArgument("cannot write file: " + tmp.string());
        out << content;
        if (!out) throw InvalidArgument("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace pasv
