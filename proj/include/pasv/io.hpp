#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "pasv/order_model.hpp"
#include "pasv/poset.hpp"
#include "pasv/sweep.hpp"
#include "pasv/utility.hpp"
#include "pasv/valuation.hpp"

namespace pasv {

// Bijection between player labels and indices. Outputs always speak labels;
// the math core speaks indices.
struct LabelMap {
    std::vector<std::string> labels;

    int size() const { return static_cast<int>(labels.size()); }
    const std::string& label(int i) const { return labels[i]; }
    int index(const std::string& label) const; // throws InvalidArgument

    static LabelMap numeric(int n); // labels "1".."n"
};

struct DagFile {
    LabelMap labels;
    Poset poset;
};

// DAG file, two JSON forms:
//   {"players": ["a", "b", ...], "edges": [["a","b"], ...]}   a precedes b
//   {"n": 4, "edges": [[1,2],[3,2],[3,4]]}                    1-based ids
// Duplicate edges are deduplicated by the closure builder.
DagFile load_dag(const std::filesystem::path& path);

// Weights file:
//   {"lambda": {"a": 2.0, ...}}                (missing labels default to 1)
//   {"base": 8, "exponents": {"a": 2, ...}}    lambda_i = base^exponent_i
Weights load_weights(const std::filesystem::path& path, const LabelMap& labels);

// Grouping file: {"player label": "group label", ...}; must cover all players.
std::vector<std::string> load_grouping(const std::filesystem::path& path,
                                       const LabelMap& labels);

// Utility table CSV with header: subset,value (subset in canonical encoding).
UtilityPtr load_table_utility(const std::filesystem::path& path, int n);

// Lineage utility JSON:
//   {"sources": {"a": 1.0, ...},
//    "copies": {"c": {"source": "a", "penalty": 0.2}, ...}}
UtilityPtr load_lineage_utility(const std::filesystem::path& path, const LabelMap& labels);

// Predictor coefficients JSON: {"classes": m, "weights": [[...]], "bias": [...]}.
PredictorPtr load_predictor(const std::filesystem::path& path);

// Numeric CSV with header; the named column holds integer class labels,
// every other column is a feature (in header order).
TabularDataset load_tabular_csv(const std::filesystem::path& path,
                                const std::string& label_column);

// --- report writers ---------------------------------------------------------

std::string value_report_csv(const ValueReport& r, const LabelMap& labels);
std::string value_report_json(const ValueReport& r, const LabelMap& labels);

std::string group_report_csv(const std::map<std::string, std::pair<double, double>>& g,
                             std::uint64_t n_samples);
std::string group_report_json(const std::map<std::string, std::pair<double, double>>& g,
                              std::uint64_t n_samples);

std::string position_curve_csv(const PositionCurve& c);
std::string position_curve_json(const PositionCurve& c);

// grid_b,player_or_group,value,std_error,reference rows; limit-reference
// rows carry grid_b=inf and reference=true. With a grouping, rows aggregate
// to group level (one row per group per grid point).
std::string sweep_report_csv(const SweepReport& r, const LabelMap& labels,
                             const ValueReport* limit_ref = nullptr,
                             const std::vector<std::string>* groups = nullptr);
std::string sweep_report_json(const SweepReport& r, const LabelMap& labels,
                              const ValueReport* limit_ref = nullptr,
                              const std::vector<std::string>* groups = nullptr);

// One JSON array of labels per line.
std::string samples_jsonl(std::span<const Permutation> samples, const LabelMap& labels);

// Writes to <path>.tmp then renames, so failures never leave partial files.
void atomic_write(const std::filesystem::path& path, const std::string& content);

} // namespace pasv
