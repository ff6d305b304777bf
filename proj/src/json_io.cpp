#include "spqcnn/json_io.hpp"

#include "spqcnn/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

namespace spqcnn {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

Json parse(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const std::exception& e) {
        throw ConstructionError(std::string("invalid JSON: ") + e.what());
    }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void require_keys(const Json& j, const std::vector<std::string>& allowed, const std::string& what) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConstructionError("unknown " + what + " key: " + key);
    }
}

Json group_json(const FiniteGroup& g) {
    Json out;
    out["n"] = g.n();
    Json gens = Json::array();
    for (const auto& e : g.elements()) gens.push_back(e.images());
    out["generators"] = std::move(gens);
    return out;
}

FiniteGroup group_from(const Json& j) {
    require_keys(j, {"n", "generators"}, "group");
    if (!j.contains("n") || !j.contains("generators")) throw ConstructionError("group needs n and generators");
    const int n = j.at("n").get<int>();
    std::vector<Permutation> gens;
    for (const auto& images : j.at("generators")) gens.push_back(Permutation(images.get<std::vector<int>>()));
    FiniteGroup g = generate_group(gens, n);
    if (g.n() != n) throw ConstructionError("group generators do not act on n qubits");
    return g;
}

Json plan_json(const SplitPlan& plan) {
    Json out;
    out["n"] = plan.n;
    out["group"] = group_json(plan.group);
    Json layers = Json::array();
    for (const auto& layer : plan.layers) {
        Json jl;
        if (layer.spec) {
            Json entries = Json::array();
            for (const auto& entry : layer.spec->entries) {
                Json je;
                Json elems = Json::array();
                for (const auto& e : entry.subgroup.elements()) elems.push_back(e.images());
                je["subgroup_elements"] = std::move(elems);
                je["subset"] = std::vector<int>(entry.subset.begin(), entry.subset.end());
                entries.push_back(std::move(je));
            }
            jl["entries"] = std::move(entries);
        }
        Json branches = Json::array();
        for (const auto& b : layer.branches) {
            Json jb;
            jb["qubits"] = std::vector<int>(b.qubits.begin(), b.qubits.end());
            jb["lambda"] = b.lambda;
            jb["coset"] = b.coset_index;
            branches.push_back(std::move(jb));
        }
        jl["branches"] = std::move(branches);
        layers.push_back(std::move(jl));
    }
    out["layers"] = std::move(layers);
    return out;
}

SplitPlan plan_from(const Json& j) {
    require_keys(j, {"n", "group", "layers"}, "plan");
    SplitPlan plan;
    plan.n = j.at("n").get<int>();
    plan.group = group_from(j.at("group"));
    int layer_index = 0;
    for (const auto& jl : j.at("layers")) {
        require_keys(jl, {"entries", "branches"}, "plan layer");
        PlanLayer layer;
        if (jl.contains("entries")) {
            LayerSpec spec;
            for (const auto& je : jl.at("entries")) {
                require_keys(je, {"subgroup_elements", "subset"}, "layer entry");
                std::vector<Permutation> elems;
                for (const auto& images : je.at("subgroup_elements"))
                    elems.push_back(Permutation(images.get<std::vector<int>>()));
                LayerEntry entry;
                entry.subgroup = FiniteGroup(elems);
                for (int q : je.at("subset").get<std::vector<int>>()) entry.subset.insert(q);
                spec.entries.push_back(std::move(entry));
            }
            layer.spec = std::move(spec);
        }
        for (const auto& jb : jl.at("branches")) {
            require_keys(jb, {"qubits", "lambda", "coset"}, "branch");
            Branch b;
            for (int q : jb.at("qubits").get<std::vector<int>>()) b.qubits.insert(q);
            b.lambda = jb.at("lambda").get<int>();
            b.coset_index = jb.at("coset").get<int>();
            b.layer = layer_index;
            layer.branches.push_back(std::move(b));
        }
        plan.layers.push_back(std::move(layer));
        ++layer_index;
    }
    return plan;
}

std::string gate_kind_name(GateKind k) {
    switch (k) {
    case GateKind::RX: return "rx";
    case GateKind::RZ: return "rz";
    case GateKind::RZZ: return "rzz";
    }
    return "";
}

GateKind gate_kind_from(const std::string& s) {
    if (s == "rx") return GateKind::RX;
    if (s == "rz") return GateKind::RZ;
    if (s == "rzz") return GateKind::RZZ;
    throw ConstructionError("unknown gate kind: " + s);
}

} // namespace

std::string group_to_json_text(const FiniteGroup& g) { return dump(group_json(g)); }

FiniteGroup group_from_json_text(const std::string& text) { return group_from(parse(text)); }

std::string subgroups_json_text(const std::vector<FiniteGroup>& subgroups) {
    Json out = Json::array();
    for (const auto& h : subgroups) {
        Json elems = Json::array();
        for (const auto& e : h.elements()) elems.push_back(e.images());
        out.push_back(std::move(elems));
    }
    return dump(out);
}

std::string plan_to_json_text(const SplitPlan& plan) { return dump(plan_json(plan)); }

SplitPlan plan_from_json_text(const std::string& text) { return plan_from(parse(text)); }

std::string circuit_to_json_text(const CircuitIR& circuit) {
    Json out;
    out["n"] = circuit.n;
    out["n_slots"] = circuit.n_slots;
    out["plan"] = plan_json(circuit.plan);
    Json gates = Json::array();
    for (const auto& g : circuit.gates) {
        Json jg;
        jg["kind"] = gate_kind_name(g.kind);
        jg["qubits"] = g.is_two_qubit() ? std::vector<int>{g.q0, g.q1} : std::vector<int>{g.q0};
        jg["slot"] = g.slot;
        jg["sign"] = g.sign;
        jg["layer"] = g.layer;
        jg["branch"] = g.branch;
        gates.push_back(std::move(jg));
    }
    out["gates"] = std::move(gates);
    return dump(out);
}

CircuitIR circuit_from_json_text(const std::string& text) {
    const Json j = parse(text);
    require_keys(j, {"n", "n_slots", "plan", "gates"}, "circuit");
    CircuitIR circuit;
    circuit.n = j.at("n").get<int>();
    circuit.n_slots = j.at("n_slots").get<int>();
    circuit.plan = plan_from(j.at("plan"));
    for (const auto& jg : j.at("gates")) {
        require_keys(jg, {"kind", "qubits", "slot", "sign", "layer", "branch"}, "gate");
        Gate g;
        g.kind = gate_kind_from(jg.at("kind").get<std::string>());
        const auto qubits = jg.at("qubits").get<std::vector<int>>();
        if (qubits.empty() || qubits.size() > 2 || (g.kind == GateKind::RZZ) != (qubits.size() == 2))
            throw ConstructionError("gate qubit list does not match its kind");
        g.q0 = qubits[0];
        g.q1 = qubits.size() == 2 ? qubits[1] : -1;
        g.slot = jg.at("slot").get<int>();
        g.sign = jg.at("sign").get<double>();
        if (jg.contains("layer")) g.layer = jg.at("layer").get<int>();
        if (jg.contains("branch")) g.branch = jg.at("branch").get<int>();
        circuit.gates.push_back(g);
    }
    return circuit;
}

std::string validation_to_json_text(const ValidationReport& report) {
    Json out;
    out["pass"] = report.pass;
    Json entries = Json::array();
    for (const auto& e : report.entries) {
        Json je;
        je["layer"] = e.layer;
        je["requirement"] = e.requirement;
        je["pass"] = e.pass;
        je["witness"] = e.witness;
        entries.push_back(std::move(je));
    }
    out["entries"] = std::move(entries);
    out["summary"] = report.summary();
    return dump(out);
}

TrainConfig train_config_from_json_text(const std::string& text) {
    const Json j = parse(text);
    require_keys(j,
                 {"n_t", "n_epoch", "n_shot", "learning_rate", "beta1", "beta2", "epsilon_hat", "seed", "data_seed",
                  "model", "backend", "gamma", "depths", "test_pairs", "eval_interval", "r_batches", "r_shots"},
                 "train config");
    TrainConfig c;
    if (j.contains("n_t")) c.n_t = j.at("n_t").get<int>();
    if (j.contains("n_epoch")) c.n_epoch = j.at("n_epoch").get<int>();
    if (j.contains("n_shot")) c.n_shot = j.at("n_shot").get<int>();
    if (j.contains("learning_rate")) c.learning_rate = j.at("learning_rate").get<double>();
    if (j.contains("beta1")) c.beta1 = j.at("beta1").get<double>();
    if (j.contains("beta2")) c.beta2 = j.at("beta2").get<double>();
    if (j.contains("epsilon_hat")) c.epsilon_hat = j.at("epsilon_hat").get<double>();
    if (j.contains("seed")) c.seed = j.at("seed").get<uint64_t>();
    if (j.contains("data_seed")) {
        c.use_data_seed = true;
        c.data_seed = j.at("data_seed").get<uint64_t>();
    }
    if (j.contains("model")) c.model = model_from_name(j.at("model").get<std::string>());
    if (j.contains("backend")) c.backend = backend_from_name(j.at("backend").get<std::string>());
    if (j.contains("gamma")) c.gamma = j.at("gamma").get<double>();
    if (j.contains("depths")) {
        const auto d = j.at("depths").get<std::vector<int>>();
        if (d.size() != 3) throw ConstructionError("depths needs exactly three entries");
        c.depths = {d[0], d[1], d[2]};
    }
    if (j.contains("test_pairs")) c.test_pairs = j.at("test_pairs").get<int>();
    if (j.contains("eval_interval")) c.eval_interval = j.at("eval_interval").get<int>();
    if (j.contains("r_batches")) c.r_batches = j.at("r_batches").get<int>();
    if (j.contains("r_shots")) c.r_shots = j.at("r_shots").get<int>();
    return c;
}

std::string train_config_to_json_text(const TrainConfig& c) {
    Json j;
    j["n_t"] = c.n_t;
    j["n_epoch"] = c.n_epoch;
    j["n_shot"] = c.n_shot;
    j["learning_rate"] = c.learning_rate;
    j["beta1"] = c.beta1;
    j["beta2"] = c.beta2;
    j["epsilon_hat"] = c.epsilon_hat;
    j["seed"] = c.seed;
    if (c.use_data_seed) j["data_seed"] = c.data_seed;
    j["model"] = model_name(c.model);
    j["backend"] = backend_name(c.backend);
    j["gamma"] = c.gamma;
    j["depths"] = std::vector<int>{c.depths[0], c.depths[1], c.depths[2]};
    j["test_pairs"] = c.test_pairs;
    j["eval_interval"] = c.eval_interval;
    j["r_batches"] = c.r_batches;
    j["r_shots"] = c.r_shots;
    return dump(j);
}

std::string train_csv(const TrainRecord& record) {
    std::string out = "epoch,iteration,train_loss,test_loss,test_acc,shots_spent,r\n";
    for (const auto& st : record.epochs) {
        out += std::to_string(st.epoch) + "," + std::to_string(st.iteration) + "," + format_double(st.train_loss) +
               "," + format_double(st.test_loss) + "," + format_double(st.test_acc) + "," +
               std::to_string(st.shots_spent) + ",";
        if (st.has_r) out += format_double(st.r);
        out += "\n";
    }
    return out;
}

std::string train_summary_json_text(const TrainRecord& record, const std::string& manifest) {
    Json j;
    if (!manifest.empty()) j["manifest"] = manifest;
    j["model"] = model_name(record.config.model);
    j["backend"] = backend_name(record.config.backend);
    j["seed"] = record.config.seed;
    j["n_slots"] = record.n_slots;
    j["total_shots"] = record.total_shots;
    const EpochStats& last = record.epochs.back();
    Json fin;
    fin["epoch"] = last.epoch;
    fin["iteration"] = last.iteration;
    fin["train_loss"] = last.train_loss;
    fin["test_loss"] = last.test_loss;
    fin["test_acc"] = last.test_acc;
    j["final"] = std::move(fin);
    j["theta_final"] = record.theta_final;
    return dump(j);
}

namespace {

Json bp_point_json(const BpPoint& p) {
    Json j;
    j["n"] = p.n;
    j["samples"] = p.samples;
    j["mean_c"] = p.mean_c;
    j["se_c"] = p.se_c;
    j["max_mean_sigmas"] = p.max_mean_sigmas;
    j["mean_cc"] = p.mean_cc;
    j["se_cc"] = p.se_cc;
    j["max_cross_sigmas"] = p.max_cross_sigmas;
    j["var_c"] = p.var_c;
    return j;
}

} // namespace

std::string bp_scan_json_text(const BpScan& scan, const std::string& manifest) {
    Json j;
    if (!manifest.empty()) j["manifest"] = manifest;
    j["small"] = bp_point_json(scan.small);
    j["large"] = bp_point_json(scan.large);
    j["fitted_exponent"] = scan.fitted_exponent;
    return dump(j);
}

std::string efficiency_json_text(const EfficiencyReport& report, const std::string& manifest) {
    Json j;
    if (!manifest.empty()) j["manifest"] = manifest;
    j["v_sp"] = report.v_sp;
    j["v_rand"] = report.v_rand;
    j["r"] = report.r_infinite ? Json("infinite") : Json(report.r);
    j["r_infinite"] = report.r_infinite;
    j["batches"] = report.batches;
    j["shots_per_batch"] = report.shots_per_batch;
    return dump(j);
}

std::string efficiency_csv(const EfficiencyReport& report) {
    std::string out = "batch_index,estimator,estimate\n";
    for (size_t i = 0; i < report.sp_means.size(); ++i)
        out += std::to_string(i) + ",sp," + format_double(report.sp_means[i]) + "\n";
    for (size_t i = 0; i < report.rand_means.size(); ++i)
        out += std::to_string(i) + ",rand," + format_double(report.rand_means[i]) + "\n";
    return out;
}

std::string tool_version() { return kVersion; }

std::string manifest_timestamp() {
    std::time_t t = 0;
    if (const char* sde = std::getenv("SOURCE_DATE_EPOCH")) {
        t = std::time_t(std::strtoll(sde, nullptr, 10));
    } else {
        t = std::time(nullptr);
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                  tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

RunManifest make_manifest(const std::string& subcommand, const std::string& config_path,
                          const std::vector<uint64_t>& seeds, const std::string& out_path) {
    RunManifest m;
    m.subcommand = subcommand;
    m.config_path = config_path;
    m.seeds = seeds;
    m.out_path = out_path;
    m.version = kVersion;
    m.timestamp = manifest_timestamp();
    return m;
}

std::string manifest_json_text(const RunManifest& manifest) {
    Json j;
    j["subcommand"] = manifest.subcommand;
    j["config"] = manifest.config_path.empty() ? Json(nullptr) : Json(manifest.config_path);
    j["seeds"] = manifest.seeds;
    j["out"] = manifest.out_path;
    j["version"] = manifest.version;
    j["timestamp"] = manifest.timestamp;
    j["outputs"] = manifest.outputs;
    return dump(j);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConstructionError("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConstructionError("cannot write file: " + path);
    out << content;
    if (!out) throw ConstructionError("write failed: " + path);
}

} // namespace spqcnn
