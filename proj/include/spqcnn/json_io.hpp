#pragma once

#include "spqcnn/bp.hpp"
#include "spqcnn/circuit.hpp"
#include "spqcnn/shot_engine.hpp"
#include "spqcnn/split_plan.hpp"
#include "spqcnn/train.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace spqcnn {

// JSON texts use two-space indentation with insertion-ordered keys; parse
// failures and unknown keys raise ConstructionError. Schemas:
//   group    {"n", "generators": [[images...], ...]}
//   plan     {"n", "group", "layers": [{"entries": [{"subgroup_elements",
//            "subset"}], "branches": [{"qubits", "lambda", "coset"}]}]}
//            ("entries" is omitted for layers without (H, P) provenance)
//   circuit  {"n", "n_slots", "plan", "gates": [{"kind", "qubits", "slot",
//            "sign", "layer", "branch"}]}
std::string group_to_json_text(const FiniteGroup& g);
FiniteGroup group_from_json_text(const std::string& text);

// JSON array of element lists, one per subgroup.
std::string subgroups_json_text(const std::vector<FiniteGroup>& subgroups);

std::string plan_to_json_text(const SplitPlan& plan);
SplitPlan plan_from_json_text(const std::string& text);

std::string circuit_to_json_text(const CircuitIR& circuit);
CircuitIR circuit_from_json_text(const std::string& text);

std::string validation_to_json_text(const ValidationReport& report);

TrainConfig train_config_from_json_text(const std::string& text);
std::string train_config_to_json_text(const TrainConfig& config);

// CSV columns: epoch, iteration, train_loss, test_loss, test_acc,
// shots_spent, r (empty when not measured). Numbers via format_double.
std::string train_csv(const TrainRecord& record);
// manifest names the run manifest governing the file; empty omits the key.
std::string train_summary_json_text(const TrainRecord& record, const std::string& manifest = "");

std::string bp_scan_json_text(const BpScan& scan, const std::string& manifest = "");
std::string efficiency_json_text(const EfficiencyReport& report, const std::string& manifest = "");
// CSV columns: batch_index, estimator, estimate.
std::string efficiency_csv(const EfficiencyReport& report);

struct RunManifest {
    std::string subcommand;
    std::string config_path; // empty when none
    std::vector<uint64_t> seeds;
    std::string out_path;
    std::string version;
    std::string timestamp;
    std::vector<std::string> outputs; // result files the run will write, manifest-relative
};

std::string tool_version();

// UTC ISO-8601; honors SOURCE_DATE_EPOCH so runs can be made byte-identical.
std::string manifest_timestamp();
RunManifest make_manifest(const std::string& subcommand, const std::string& config_path,
                          const std::vector<uint64_t>& seeds, const std::string& out_path);
std::string manifest_json_text(const RunManifest& manifest);

// Shortest stable decimal at 12 significant digits.
std::string format_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace spqcnn
