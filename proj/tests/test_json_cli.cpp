#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "spqcnn/circuit.hpp"
#include "spqcnn/error.hpp"
#include "spqcnn/group.hpp"
#include "spqcnn/json_io.hpp"
#include "spqcnn/presets.hpp"
#include "spqcnn/rng.hpp"
#include "spqcnn/split_plan.hpp"
#include "spqcnn/statevector.hpp"
#include "spqcnn/train.hpp"

#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

using namespace spqcnn;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> random_theta(int n_slots, uint64_t seed) {
    Rng rng(seed);
    std::vector<double> theta(static_cast<size_t>(n_slots));
    for (double& v : theta) v = rng.uniform(0.0, 2 * kPi);
    return theta;
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

StateVector plus_state(int n) {
    StateVector s(n);
    for (int q = 0; q < n; ++q) s.apply_h(q);
    return s;
}

// Fresh scratch directory per test binary run, removed at exit.
struct ScratchDir {
    fs::path path;
    ScratchDir() {
        path = fs::temp_directory_path() / ("spqcnn_json_cli_" + std::to_string(getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~ScratchDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

ScratchDir& scratch() {
    static ScratchDir s;
    return s;
}

int run_cli(const std::string& args, const std::string& stdout_file = "", const std::string& env_prefix = "") {
    std::string cmd = env_prefix.empty() ? "" : env_prefix + " ";
    cmd += std::string(SPQCNN_CLI_PATH) + " " + args;
    if (stdout_file.empty())
        cmd += " >/dev/null";
    else
        cmd += " >" + stdout_file;
    cmd += " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("group json round trip") {
    const FiniteGroup g = d4_cube_group();
    const std::string text = group_to_json_text(g);
    const FiniteGroup back = group_from_json_text(text);
    CHECK(back.n() == 8);
    CHECK(back.order() == 8);
    for (const auto& e : g.elements()) CHECK(back.contains(e));
    // Serializing the reconstruction is a fixed point.
    CHECK(group_to_json_text(back) == text);
}

TEST_CASE("group json rejects malformed input") {
    CHECK_THROWS_AS((void)group_from_json_text("not json at all"), ConstructionError);
    CHECK_THROWS_AS((void)group_from_json_text(R"({"n": 4})"), ConstructionError);
    CHECK_THROWS_AS((void)group_from_json_text(R"({"n": 4, "generators": [[1,0,3,2]], "extra": 1})"),
                    ConstructionError);
    // Generators acting on fewer qubits than n.
    CHECK_THROWS_AS((void)group_from_json_text(R"({"n": 8, "generators": [[1,0,3,2]]})"), ConstructionError);
}

TEST_CASE("plan json round trip preserves validity and shape") {
    for (const SplitPlan& plan : {cube_demo_plan(), ring_halving_plan(8, 3)}) {
        const std::string text = plan_to_json_text(plan);
        const SplitPlan back = plan_from_json_text(text);
        CHECK(back.n == plan.n);
        REQUIRE(back.layers.size() == plan.layers.size());
        for (size_t l = 0; l < plan.layers.size(); ++l) {
            REQUIRE(back.layers[l].branches.size() == plan.layers[l].branches.size());
            for (size_t b = 0; b < plan.layers[l].branches.size(); ++b) {
                CHECK(back.layers[l].branches[b].qubits == plan.layers[l].branches[b].qubits);
                CHECK(back.layers[l].branches[b].lambda == plan.layers[l].branches[b].lambda);
                CHECK(back.layers[l].branches[b].coset_index == plan.layers[l].branches[b].coset_index);
                CHECK(back.layers[l].branches[b].layer == int(l));
            }
        }
        CHECK(validate_plan(back).pass);
        CHECK(plan_to_json_text(back) == text);
    }
}

TEST_CASE("plan json rejects unknown keys at every level") {
    const std::string text = plan_to_json_text(ring_halving_plan(4, 2));
    nlohmann::json j = nlohmann::json::parse(text);
    {
        nlohmann::json bad = j;
        bad["comment"] = "hi";
        CHECK_THROWS_AS((void)plan_from_json_text(bad.dump()), ConstructionError);
    }
    {
        nlohmann::json bad = j;
        bad["layers"][0]["color"] = "red";
        CHECK_THROWS_AS((void)plan_from_json_text(bad.dump()), ConstructionError);
    }
    {
        nlohmann::json bad = j;
        bad["layers"][0]["branches"][0]["weight"] = 2;
        CHECK_THROWS_AS((void)plan_from_json_text(bad.dump()), ConstructionError);
    }
}

TEST_CASE("circuit json round trip is functionally identical") {
    const CircuitIR circuit = build_demo_circuit(Model::EquivariantSp, {1, 1, 1});
    const std::string text = circuit_to_json_text(circuit);
    const CircuitIR back = circuit_from_json_text(text);
    CHECK(back.n == circuit.n);
    CHECK(back.n_slots == circuit.n_slots);
    REQUIRE(back.gates.size() == circuit.gates.size());
    for (size_t i = 0; i < circuit.gates.size(); ++i) {
        CHECK(back.gates[i].kind == circuit.gates[i].kind);
        CHECK(back.gates[i].q0 == circuit.gates[i].q0);
        CHECK(back.gates[i].q1 == circuit.gates[i].q1);
        CHECK(back.gates[i].slot == circuit.gates[i].slot);
        CHECK(back.gates[i].sign == circuit.gates[i].sign);
        CHECK(back.gates[i].layer == circuit.gates[i].layer);
        CHECK(back.gates[i].branch == circuit.gates[i].branch);
    }
    const std::vector<double> theta = random_theta(circuit.n_slots, 77);
    StateVector a = plus_state(circuit.n);
    StateVector b = plus_state(circuit.n);
    apply_circuit(a, circuit, theta);
    apply_circuit(b, back, theta);
    for (size_t k = 0; k < a.dim(); ++k) CHECK(std::abs(a.amp(k) - b.amp(k)) == 0.0);
    CHECK(circuit_to_json_text(back) == text);
}

TEST_CASE("circuit json rejects inconsistent gates") {
    const CircuitIR circuit = build_demo_circuit(Model::EquivariantSp, {1, 1, 1});
    nlohmann::json j = nlohmann::json::parse(circuit_to_json_text(circuit));
    {
        nlohmann::json bad = j;
        bad["gates"][0]["qubits"] = std::vector<int>{0, 1}; // single-qubit kind, two qubits
        CHECK_THROWS_AS((void)circuit_from_json_text(bad.dump()), ConstructionError);
    }
    {
        nlohmann::json bad = j;
        bad["gates"][0]["note"] = 1;
        CHECK_THROWS_AS((void)circuit_from_json_text(bad.dump()), ConstructionError);
    }
}

TEST_CASE("train config round trip covers every field") {
    TrainConfig c;
    c.n_t = 7;
    c.n_epoch = 42;
    c.n_shot = 9;
    c.learning_rate = 0.05;
    c.beta1 = 0.8;
    c.beta2 = 0.95;
    c.epsilon_hat = 1e-7;
    c.seed = 123;
    c.use_data_seed = true;
    c.data_seed = 456;
    c.model = Model::NonequivariantSp;
    c.backend = Backend::Exact;
    c.gamma = 0.25;
    c.depths = {2, 1, 3};
    c.test_pairs = 33;
    c.eval_interval = 5;
    c.r_batches = 12;
    c.r_shots = 64;

    const std::string text = train_config_to_json_text(c);
    const TrainConfig back = train_config_from_json_text(text);
    CHECK(back.n_t == c.n_t);
    CHECK(back.n_epoch == c.n_epoch);
    CHECK(back.n_shot == c.n_shot);
    CHECK(back.learning_rate == c.learning_rate);
    CHECK(back.beta1 == c.beta1);
    CHECK(back.beta2 == c.beta2);
    CHECK(back.epsilon_hat == c.epsilon_hat);
    CHECK(back.seed == c.seed);
    CHECK(back.use_data_seed);
    CHECK(back.data_seed == c.data_seed);
    CHECK(back.model == c.model);
    CHECK(back.backend == c.backend);
    CHECK(back.gamma == c.gamma);
    CHECK(back.depths == c.depths);
    CHECK(back.test_pairs == c.test_pairs);
    CHECK(back.eval_interval == c.eval_interval);
    CHECK(back.r_batches == c.r_batches);
    CHECK(back.r_shots == c.r_shots);
}

TEST_CASE("train config data_seed key appears only when set") {
    TrainConfig c;
    CHECK_FALSE(contains(train_config_to_json_text(c), "data_seed"));
    c.use_data_seed = true;
    c.data_seed = 9;
    CHECK(contains(train_config_to_json_text(c), "\"data_seed\": 9"));

    const TrainConfig plain = train_config_from_json_text(R"({"n_t": 2})");
    CHECK_FALSE(plain.use_data_seed);
    CHECK(plain.n_t == 2);
    CHECK(plain.n_epoch == 100); // untouched fields keep their defaults

    const TrainConfig with = train_config_from_json_text(R"({"data_seed": 4})");
    CHECK(with.use_data_seed);
    CHECK(with.data_seed == 4);
}

TEST_CASE("train config rejects unknown keys and bad enum names") {
    CHECK_THROWS_AS((void)train_config_from_json_text(R"({"learning rate": 0.1})"), ConstructionError);
    CHECK_THROWS_AS((void)train_config_from_json_text(R"({"model": "classical"})"), ConstructionError);
    CHECK_THROWS_AS((void)train_config_from_json_text(R"({"backend": "gpu"})"), ConstructionError);
    CHECK_THROWS_AS((void)train_config_from_json_text(R"({"depths": [1, 2]})"), ConstructionError);
}

TEST_CASE("format_double prints shortest stable decimals") {
    CHECK(format_double(7.0) == "7");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-2.5) == "-2.5");
    CHECK(format_double(1e-5) == "1e-05");
    CHECK(format_double(1.0 / 3.0) == "0.333333333333");
    CHECK(format_double(0.0) == "0");
}

TEST_CASE("train csv columns and optional r cell") {
    TrainRecord rec;
    rec.epochs.resize(2);
    rec.epochs[0].epoch = 0;
    rec.epochs[0].iteration = 0;
    rec.epochs[0].train_loss = 1.5;
    rec.epochs[0].test_loss = 1.25;
    rec.epochs[0].test_acc = 0.5;
    rec.epochs[0].shots_spent = 0;
    rec.epochs[1].epoch = 1;
    rec.epochs[1].iteration = 4;
    rec.epochs[1].train_loss = 0.75;
    rec.epochs[1].test_loss = 0.5;
    rec.epochs[1].test_acc = 1.0;
    rec.epochs[1].shots_spent = 5780;
    rec.epochs[1].has_r = true;
    rec.epochs[1].r = 7.5;
    CHECK(train_csv(rec) ==
          "epoch,iteration,train_loss,test_loss,test_acc,shots_spent,r\n"
          "0,0,1.5,1.25,0.5,0,\n"
          "1,4,0.75,0.5,1,5780,7.5\n");
}

TEST_CASE("train summary json carries manifest reference and final row") {
    TrainRecord rec;
    rec.config.seed = 11;
    rec.n_slots = 3;
    rec.total_shots = 17;
    rec.epochs.resize(1);
    rec.epochs[0].epoch = 2;
    rec.epochs[0].iteration = 8;
    rec.epochs[0].test_acc = 0.75;
    rec.theta_final = {0.5, 1.0, 1.5};

    const nlohmann::json j = nlohmann::json::parse(train_summary_json_text(rec, "manifest.json"));
    CHECK(j.at("manifest") == "manifest.json");
    CHECK(j.at("model") == "eq-sp");
    CHECK(j.at("backend") == "shots");
    CHECK(j.at("seed") == 11);
    CHECK(j.at("n_slots") == 3);
    CHECK(j.at("total_shots") == 17);
    CHECK(j.at("final").at("epoch") == 2);
    CHECK(j.at("final").at("iteration") == 8);
    CHECK(j.at("final").at("test_acc") == 0.75);
    CHECK(j.at("theta_final").size() == 3);

    const nlohmann::json bare = nlohmann::json::parse(train_summary_json_text(rec));
    CHECK_FALSE(bare.contains("manifest"));
}

TEST_CASE("subgroups json lists every subgroup") {
    const std::vector<FiniteGroup> subs = all_subgroups(d4_cube_group());
    const nlohmann::json j = nlohmann::json::parse(subgroups_json_text(subs));
    REQUIRE(j.is_array());
    REQUIRE(j.size() == subs.size());
    for (size_t i = 0; i < subs.size(); ++i) CHECK(j[i].size() == size_t(subs[i].order()));
}

TEST_CASE("manifest timestamp honors SOURCE_DATE_EPOCH") {
    setenv("SOURCE_DATE_EPOCH", "0", 1);
    CHECK(manifest_timestamp() == "1970-01-01T00:00:00Z");
    setenv("SOURCE_DATE_EPOCH", "1000000000", 1);
    CHECK(manifest_timestamp() == "2001-09-09T01:46:40Z");
    unsetenv("SOURCE_DATE_EPOCH");
}

TEST_CASE("manifest json shape") {
    setenv("SOURCE_DATE_EPOCH", "0", 1);
    RunManifest m = make_manifest("train", "cfg.json", {1, 2}, "outdir");
    m.outputs = {"a.csv", "b.json"};
    const nlohmann::json j = nlohmann::json::parse(manifest_json_text(m));
    CHECK(j.at("subcommand") == "train");
    CHECK(j.at("config") == "cfg.json");
    CHECK(j.at("seeds") == std::vector<uint64_t>({1, 2}));
    CHECK(j.at("out") == "outdir");
    CHECK(j.at("version") == tool_version());
    CHECK(j.at("timestamp") == "1970-01-01T00:00:00Z");
    CHECK(j.at("outputs") == std::vector<std::string>({"a.csv", "b.json"}));

    const RunManifest bare = make_manifest("group", "", {}, "");
    CHECK(nlohmann::json::parse(manifest_json_text(bare)).at("config").is_null());
    unsetenv("SOURCE_DATE_EPOCH");
}

TEST_CASE("validation report json carries witnesses") {
    const ValidationReport bad = validate_plan(ring_halves_fixture(8));
    REQUIRE_FALSE(bad.pass);
    const nlohmann::json j = nlohmann::json::parse(validation_to_json_text(bad));
    CHECK(j.at("pass") == false);
    bool found_failure = false;
    for (const auto& e : j.at("entries")) {
        if (e.at("pass") == false) {
            found_failure = true;
            CHECK(e.at("witness").get<std::string>() != "");
        }
    }
    CHECK(found_failure);
    CHECK(j.at("summary").get<std::string>() != "");
}

TEST_CASE("cli exit codes separate usage, domain and success") {
    CHECK(run_cli("--version") == 0);
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("") == 2);                      // missing subcommand
    CHECK(run_cli("train --seed notanumber") == 2);
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("group --group nope") == 1);    // unknown preset is a domain error
    CHECK(run_cli("verify /nonexistent/plan.json") == 1);
}

TEST_CASE("cli group subcommand emits parseable groups") {
    const std::string out = scratch().file("group.json");
    CHECK(run_cli("group --group d4-cube --out " + out) == 0);
    const FiniteGroup g = group_from_json_text(read_text_file(out));
    CHECK(g.order() == 8);
    // Every file-writing run leaves a manifest next to the result.
    const nlohmann::json m = nlohmann::json::parse(read_text_file(scratch().file("group.json.manifest.json")));
    CHECK(m.at("subcommand") == "group");
    CHECK(m.at("outputs") == std::vector<std::string>({"group.json"}));

    const std::string subs = scratch().file("subgroups.json");
    CHECK(run_cli("group --group d4-cube --subgroups --out " + subs) == 0);
    CHECK(nlohmann::json::parse(read_text_file(subs)).size() == 10);

    const std::string ring = scratch().file("ring.json");
    CHECK(run_cli("group --group translation-ring6 --out " + ring) == 0);
    CHECK(group_from_json_text(read_text_file(ring)).order() == 6);
}

TEST_CASE("cli split then verify round trips through files") {
    const std::string plan_file = scratch().file("plan.json");
    CHECK(run_cli("split --group translation-ring8 --layers 3 --out " + plan_file) == 0);
    const std::string report_file = scratch().file("report.json");
    CHECK(run_cli("verify " + plan_file + " --out " + report_file) == 0);
    const nlohmann::json report = nlohmann::json::parse(read_text_file(report_file));
    CHECK(report.at("pass") == true);

    const std::string bad_file = scratch().file("bad_plan.json");
    write_text_file(bad_file, plan_to_json_text(ring_halves_fixture(8)));
    const std::string bad_report_file = scratch().file("bad_report.json");
    CHECK(run_cli("verify " + bad_file + " --out " + bad_report_file) == 1);
    CHECK(nlohmann::json::parse(read_text_file(bad_report_file)).at("pass") == false);
}

TEST_CASE("cli train writes per-seed files listed in the manifest") {
    TrainConfig c;
    c.n_t = 1;
    c.n_epoch = 2;
    c.backend = Backend::Exact;
    c.test_pairs = 2;
    c.depths = {1, 1, 1};
    const std::string cfg = scratch().file("train_cfg.json");
    write_text_file(cfg, train_config_to_json_text(c));
    const std::string out_dir = scratch().file("train_out");
    CHECK(run_cli("train --config " + cfg + " --seeds 4..5 --out " + out_dir) == 0);

    const nlohmann::json m = nlohmann::json::parse(read_text_file(out_dir + "/manifest.json"));
    CHECK(m.at("subcommand") == "train");
    CHECK(m.at("seeds") == std::vector<uint64_t>({4, 5}));
    for (const auto& name : m.at("outputs")) {
        CHECK(fs::exists(fs::path(out_dir) / name.get<std::string>()));
    }
    const nlohmann::json s4 = nlohmann::json::parse(read_text_file(out_dir + "/train_seed4_summary.json"));
    CHECK(s4.at("seed") == 4);
    CHECK(s4.at("manifest") == "manifest.json");
    CHECK(s4.at("total_shots") == 0); // exact backend spends no shots
    const std::string csv = read_text_file(out_dir + "/train_seed4.csv");
    CHECK(contains(csv, "epoch,iteration,train_loss,test_loss,test_acc,shots_spent,r\n"));
    CHECK(contains(csv, "\n0,0,"));
}

TEST_CASE("cli runs are byte identical under a pinned epoch") {
    TrainConfig c;
    c.n_t = 1;
    c.n_epoch = 2;
    c.backend = Backend::Shots;
    c.test_pairs = 2;
    c.depths = {1, 1, 1};
    const std::string cfg = scratch().file("repro_cfg.json");
    write_text_file(cfg, train_config_to_json_text(c));

    const std::string dir_a = scratch().file("repro_a");
    const std::string dir_b = scratch().file("repro_b");
    const std::string args = "train --config " + cfg + " --seed 9 --out ";
    const std::vector<std::string> names = {"manifest.json", "train_seed9.csv", "train_seed9_summary.json"};

    // Rerunning the identical invocation reproduces every file byte for byte.
    CHECK(run_cli(args + dir_a, "", "SOURCE_DATE_EPOCH=42") == 0);
    std::vector<std::string> first;
    for (const std::string& name : names) first.push_back(read_text_file(dir_a + "/" + name));
    fs::remove_all(dir_a);
    CHECK(run_cli(args + dir_a, "", "SOURCE_DATE_EPOCH=42") == 0);
    for (size_t i = 0; i < names.size(); ++i) {
        CHECK(read_text_file(dir_a + "/" + names[i]) == first[i]);
        CHECK(!first[i].empty());
    }

    // Result files do not depend on where they are written; only the manifest
    // records the invocation's paths.
    CHECK(run_cli(args + dir_b, "", "SOURCE_DATE_EPOCH=42") == 0);
    for (const std::string name : {"train_seed9.csv", "train_seed9_summary.json"}) {
        CHECK(read_text_file(dir_b + "/" + name) == read_text_file(dir_a + "/" + name));
    }
}

TEST_CASE("cli bench writes estimator csv and summary") {
    const std::string dir = scratch().file("bench_out");
    CHECK(run_cli("bench --shots 20 --batches 4 --out " + dir) == 0);
    const std::string csv = read_text_file(dir + "/bench.csv");
    CHECK(contains(csv, "batch_index,estimator,estimate\n"));
    CHECK(contains(csv, "0,sp,"));
    CHECK(contains(csv, "3,rand,"));
    CHECK_FALSE(contains(csv, "4,sp,"));
    const nlohmann::json summary = nlohmann::json::parse(read_text_file(dir + "/bench_summary.json"));
    CHECK(summary.at("batches") == 4);
    CHECK(summary.at("shots_per_batch") == 20);
    CHECK(summary.contains("v_sp"));
    CHECK(summary.contains("v_rand"));
    CHECK(summary.contains("r"));
}

TEST_CASE("cli gradcheck reports one row per slot") {
    const std::string out = scratch().file("gradcheck.csv");
    CHECK(run_cli("gradcheck --out " + out) == 0);
    const std::string csv = read_text_file(out);
    CHECK(contains(csv, "slot,analytic,finite_difference,abs_error,rel_error\n"));
    int lines = 0;
    for (char ch : csv)
        if (ch == '\n') ++lines;
    CHECK(lines == 1 + 88); // header plus one row per shared slot
}

TEST_CASE("cli bp-scan emits both ring sizes") {
    const std::string out = scratch().file("bp.json");
    CHECK(run_cli("bp-scan --samples 60 --out " + out) == 0);
    const nlohmann::json j = nlohmann::json::parse(read_text_file(out));
    CHECK(j.at("small").at("n") == 4);
    CHECK(j.at("large").at("n") == 8);
    CHECK(j.at("small").at("samples") == 60);
    CHECK(j.contains("fitted_exponent"));
}
