// Command-line front end. Subcommands: group, split, verify, train, bench,
// gradcheck, bp-scan. Exit codes: 0 success, 1 domain/validation failure,
// 2 usage error. Every file-writing run puts a manifest on disk before any
// result file.

#include "spqcnn/bp.hpp"
#include "spqcnn/circuit.hpp"
#include "spqcnn/error.hpp"
#include "spqcnn/gradient.hpp"
#include "spqcnn/group.hpp"
#include "spqcnn/heisenberg.hpp"
#include "spqcnn/json_io.hpp"
#include "spqcnn/presets.hpp"
#include "spqcnn/rng.hpp"
#include "spqcnn/shot_engine.hpp"
#include "spqcnn/split_plan.hpp"
#include "spqcnn/statevector.hpp"
#include "spqcnn/train.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace spqcnn;

namespace {

FiniteGroup group_preset(const std::string& name) {
    if (name == "d4-cube") return d4_cube_group();
    if (name == "d4-grid4x4") return d4_grid4x4_group();
    const std::string ring = "translation-ring";
    if (name.rfind(ring, 0) == 0) {
        std::string digits = name.substr(ring.size());
        if (digits.size() >= 2 && digits.front() == '(' && digits.back() == ')')
            digits = digits.substr(1, digits.size() - 2);
        if (!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos)
            return translation_ring_group(std::stoi(digits));
    }
    throw ConstructionError("unknown group preset: " + name +
                            " (available: d4-cube, d4-grid4x4, translation-ring<n>)");
}

std::vector<uint64_t> parse_seed_range(const std::string& s) {
    try {
        const auto pos = s.find("..");
        if (pos == std::string::npos) return {std::stoull(s)};
        const uint64_t a = std::stoull(s.substr(0, pos));
        const uint64_t b = std::stoull(s.substr(pos + 2));
        if (b < a) throw ConstructionError("seed range is descending: " + s);
        if (b - a >= 100000) throw ConstructionError("seed range too large: " + s);
        std::vector<uint64_t> out;
        for (uint64_t k = a; k <= b; ++k) out.push_back(k);
        return out;
    } catch (const std::invalid_argument&) {
        throw ConstructionError("cannot parse seeds (want k or a..b): " + s);
    } catch (const std::out_of_range&) {
        throw ConstructionError("seed out of range: " + s);
    }
}

// Writes a single result file together with its sibling manifest, manifest
// first. manifest_name_for gives the name result JSONs reference.
std::string manifest_name_for(const std::string& out_file) {
    return fs::path(out_file).filename().string() + ".manifest.json";
}

void emit_file(const std::string& subcommand, const std::string& config_path, const std::vector<uint64_t>& seeds,
               const std::string& out_file, const std::string& content) {
    const fs::path out(out_file);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    RunManifest m = make_manifest(subcommand, config_path, seeds, out_file);
    m.outputs = {out.filename().string()};
    write_text_file((out.parent_path() / manifest_name_for(out_file)).string(), manifest_json_text(m));
    write_text_file(out.string(), content);
}

struct GroupArgs {
    std::string preset;
    bool subgroups = false;
    std::string out;
};

int run_group(const GroupArgs& a) {
    const FiniteGroup g = group_preset(a.preset);
    const std::string text = a.subgroups ? subgroups_json_text(all_subgroups(g)) : group_to_json_text(g);
    if (a.out.empty())
        std::cout << text;
    else
        emit_file("group", "", {}, a.out, text);
    return 0;
}

struct SplitArgs {
    std::string preset;
    int layers = 3;
    std::string out;
};

int run_split(const SplitArgs& a) {
    const SplitPlan plan = auto_split(group_preset(a.preset), a.layers);
    const std::string text = plan_to_json_text(plan);
    if (a.out.empty())
        std::cout << text;
    else
        emit_file("split", "", {}, a.out, text);
    return 0;
}

struct VerifyArgs {
    std::string plan_file;
    std::string out;
};

int run_verify(const VerifyArgs& a) {
    const SplitPlan plan = plan_from_json_text(read_text_file(a.plan_file));
    const ValidationReport report = validate_plan(plan);
    const std::string text = validation_to_json_text(report);
    if (a.out.empty())
        std::cout << text;
    else
        emit_file("verify", a.plan_file, {}, a.out, text);
    return report.pass ? 0 : 1;
}

struct TrainArgs {
    std::string config;
    uint64_t seed = 0;
    bool seed_given = false;
    std::string seeds;
    std::string model;
    std::string backend;
    int shots = 0;
    bool shots_given = false;
    std::string out = ".";
    int jobs = 1;
};

int run_train(const TrainArgs& a) {
    TrainConfig base;
    if (!a.config.empty()) base = train_config_from_json_text(read_text_file(a.config));
    if (!a.model.empty()) base.model = model_from_name(a.model);
    if (!a.backend.empty()) base.backend = backend_from_name(a.backend);
    if (a.shots_given) base.n_shot = a.shots;

    std::vector<uint64_t> seeds;
    if (!a.seeds.empty())
        seeds = parse_seed_range(a.seeds);
    else
        seeds = {a.seed_given ? a.seed : base.seed};

    fs::create_directories(a.out);
    RunManifest m = make_manifest("train", a.config, seeds, a.out);
    for (uint64_t s : seeds) {
        m.outputs.push_back("train_seed" + std::to_string(s) + ".csv");
        m.outputs.push_back("train_seed" + std::to_string(s) + "_summary.json");
    }
    write_text_file((fs::path(a.out) / "manifest.json").string(), manifest_json_text(m));

    std::vector<TrainRecord> records(seeds.size());
    std::vector<std::string> errors(seeds.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= seeds.size()) return;
            TrainConfig c = base;
            c.seed = seeds[i];
            try {
                records[i] = train(c);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const int pool_size = std::max(1, std::min(a.jobs, int(seeds.size())));
    if (pool_size == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(pool_size);
        for (int t = 0; t < pool_size; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (size_t i = 0; i < seeds.size(); ++i)
        if (!errors[i].empty()) throw ConstructionError("seed " + std::to_string(seeds[i]) + ": " + errors[i]);

    for (size_t i = 0; i < seeds.size(); ++i) {
        const std::string stem = "train_seed" + std::to_string(seeds[i]);
        write_text_file((fs::path(a.out) / (stem + ".csv")).string(), train_csv(records[i]));
        write_text_file((fs::path(a.out) / (stem + "_summary.json")).string(),
                        train_summary_json_text(records[i], "manifest.json"));
        const EpochStats& last = records[i].epochs.back();
        std::cerr << "seed " << seeds[i] << ": epoch " << last.epoch << " test_acc " << format_double(last.test_acc)
                  << " test_loss " << format_double(last.test_loss) << "\n";
    }
    return 0;
}

struct BenchArgs {
    uint64_t seed = 1;
    int shots = 100;
    int batches = 10000;
    std::string model = "eq-sp";
    std::string out;
};

int run_bench(const BenchArgs& a) {
    const CircuitIR circuit = build_demo_circuit(model_from_name(a.model), {3, 3, 3});
    Rng init = Rng::keyed(a.seed, "init");
    std::vector<double> theta(circuit.n_slots);
    for (double& v : theta) v = init.uniform(0.0, 6.28318530717958647692);
    const TaskStates ts = demo_ground_states();
    Rng noise = Rng::keyed(a.seed, "bench-input");
    const StateVector input = sample_noisy_state(ts.psi1, 0.4, noise).state;
    Rng shots_rng = Rng::keyed(a.seed, "bench");
    const EfficiencyReport report =
        efficiency_ratio(circuit, theta, input, Observable::sum_x(circuit.n), a.shots, a.batches, shots_rng);
    if (a.out.empty()) {
        std::cout << efficiency_json_text(report);
        return 0;
    }
    fs::create_directories(a.out);
    RunManifest m = make_manifest("bench", "", {a.seed}, a.out);
    m.outputs = {"bench.csv", "bench_summary.json"};
    write_text_file((fs::path(a.out) / "manifest.json").string(), manifest_json_text(m));
    write_text_file((fs::path(a.out) / "bench.csv").string(), efficiency_csv(report));
    write_text_file((fs::path(a.out) / "bench_summary.json").string(),
                    efficiency_json_text(report, "manifest.json"));
    return 0;
}

struct GradcheckArgs {
    uint64_t seed = 1;
    std::string model = "eq-sp";
    std::string out;
};

int run_gradcheck(const GradcheckArgs& a) {
    const CircuitIR circuit = build_demo_circuit(model_from_name(a.model), {3, 3, 3});
    Rng angles = Rng::keyed(a.seed, "gradcheck");
    std::vector<double> theta(circuit.n_slots);
    for (double& v : theta) v = angles.uniform(0.0, 6.28318530717958647692);
    const TaskStates ts = demo_ground_states();
    Rng noise = Rng::keyed(a.seed, "gradcheck-input");
    const StateVector input = sample_noisy_state(ts.psi1, 0.4, noise).state;
    const Observable obs = Observable::sum_x(circuit.n);

    const GradientEngine engine(circuit, obs);
    const GradientEstimate est = engine.exact(theta, input);

    const double h = 1e-5;
    std::string csv = "slot,analytic,finite_difference,abs_error,rel_error\n";
    double worst_rel = 0.0;
    for (int slot = 0; slot < circuit.n_slots; ++slot) {
        std::vector<double> tp = theta, tm = theta;
        tp[slot] += h;
        tm[slot] -= h;
        StateVector sp = input, sm = input;
        apply_circuit(sp, circuit, tp);
        apply_circuit(sm, circuit, tm);
        const double fd = (exact_expectation(sp, obs) - exact_expectation(sm, obs)) / (2.0 * h);
        const double an = est.gradient[slot];
        const double abs_err = std::abs(an - fd);
        // Floored denominator keeps near-zero-gradient slots meaningful.
        const double rel_err = abs_err / std::max({std::abs(an), std::abs(fd), 1e-6});
        worst_rel = std::max(worst_rel, rel_err);
        csv += std::to_string(slot) + "," + format_double(an) + "," + format_double(fd) + "," +
               format_double(abs_err) + "," + format_double(rel_err) + "\n";
    }
    if (a.out.empty())
        std::cout << csv;
    else
        emit_file("gradcheck", "", {a.seed}, a.out, csv);
    std::cerr << "worst relative error " << format_double(worst_rel) << " over " << circuit.n_slots << " slots\n";
    return 0;
}

struct BpArgs {
    int samples = 10000;
    uint64_t seed = 1;
    std::string out;
};

int run_bp(const BpArgs& a) {
    const BpScan scan = bp_scan(a.samples, a.seed);
    if (a.out.empty())
        std::cout << bp_scan_json_text(scan);
    else
        emit_file("bp-scan", "", {a.seed}, a.out, bp_scan_json_text(scan, manifest_name_for(a.out)));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sp-QCNN toolkit: group-theoretic circuit splitting, simulation and training"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version());

    GroupArgs ga;
    auto* cmd_group = app.add_subcommand("group", "Print a preset symmetry group as JSON");
    cmd_group->add_option("--group", ga.preset, "preset: d4-cube, d4-grid4x4, translation-ring<n>")->required();
    cmd_group->add_flag("--subgroups", ga.subgroups, "print the full subgroup list instead");
    cmd_group->add_option("--out", ga.out, "output file (stdout when absent)");

    SplitArgs sa;
    auto* cmd_split = app.add_subcommand("split", "Build a split plan for a preset group");
    cmd_split->add_option("--group", sa.preset, "preset: d4-cube, d4-grid4x4, translation-ring<n>")->required();
    cmd_split->add_option("--layers", sa.layers, "layer count")->check(CLI::PositiveNumber);
    cmd_split->add_option("--out", sa.out, "output file (stdout when absent)");

    VerifyArgs va;
    auto* cmd_verify = app.add_subcommand("verify", "Check every splitting requirement of a plan file");
    cmd_verify->add_option("plan", va.plan_file, "plan JSON file")->required();
    cmd_verify->add_option("--out", va.out, "report file (stdout when absent)");

    TrainArgs ta;
    auto* cmd_train = app.add_subcommand("train", "Train the demo classifier over one or more seeds");
    cmd_train->add_option("--config", ta.config, "JSON training config");
    auto* opt_seed = cmd_train->add_option("--seed", ta.seed, "single seed (overrides config)");
    auto* opt_seeds = cmd_train->add_option("--seeds", ta.seeds, "seed range a..b (overrides config)");
    opt_seeds->excludes(opt_seed);
    cmd_train->add_option("--model", ta.model, "eq-sp, noneq-sp or eq-rand (overrides config)");
    cmd_train->add_option("--backend", ta.backend, "exact or shots (overrides config)");
    auto* opt_shots = cmd_train->add_option("--shots", ta.shots, "per-gate shot baseline (overrides config)");
    cmd_train->add_option("--out", ta.out, "output directory")->capture_default_str();
    cmd_train->add_option("--jobs", ta.jobs, "worker threads across seeds")->check(CLI::PositiveNumber);

    BenchArgs ba;
    auto* cmd_bench = app.add_subcommand("bench", "Measure the sp vs randomized estimator variance ratio");
    cmd_bench->add_option("--seed", ba.seed, "seed")->capture_default_str();
    cmd_bench->add_option("--shots", ba.shots, "shots per batch")->capture_default_str()->check(CLI::PositiveNumber);
    cmd_bench->add_option("--batches", ba.batches, "batch count")->capture_default_str()->check(CLI::PositiveNumber);
    cmd_bench->add_option("--model", ba.model, "eq-sp, noneq-sp or eq-rand")->capture_default_str();
    cmd_bench->add_option("--out", ba.out, "output directory (stdout summary when absent)");

    GradcheckArgs ca;
    auto* cmd_gradcheck = app.add_subcommand("gradcheck", "Compare parameter-shift gradients to finite differences");
    cmd_gradcheck->add_option("--seed", ca.seed, "seed")->capture_default_str();
    cmd_gradcheck->add_option("--model", ca.model, "eq-sp, noneq-sp or eq-rand")->capture_default_str();
    cmd_gradcheck->add_option("--out", ca.out, "CSV file (stdout when absent)");

    BpArgs pa;
    auto* cmd_bp = app.add_subcommand("bp-scan", "Monte Carlo cost-variance scan at n = 4 and n = 8");
    cmd_bp->add_option("--samples", pa.samples, "parameter draws per point")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd_bp->add_option("--seed", pa.seed, "seed")->capture_default_str();
    cmd_bp->add_option("--out", pa.out, "output file (stdout when absent)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    ta.seed_given = opt_seed->count() > 0;
    ta.shots_given = opt_shots->count() > 0;

    try {
        if (*cmd_group) return run_group(ga);
        if (*cmd_split) return run_split(sa);
        if (*cmd_verify) return run_verify(va);
        if (*cmd_train) return run_train(ta);
        if (*cmd_bench) return run_bench(ba);
        if (*cmd_gradcheck) return run_gradcheck(ca);
        if (*cmd_bp) return run_bp(pa);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
