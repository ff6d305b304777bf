#include "spqcnn/train.hpp"

#include "spqcnn/error.hpp"
#include "spqcnn/gradient.hpp"
#include "spqcnn/presets.hpp"
#include "spqcnn/shot_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace spqcnn {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;
constexpr double kLogClamp = 1e-12;

// One pass over a dataset: mean cross entropy and accuracy, both exact.
std::pair<double, double> dataset_metrics(const CircuitIR& circuit, const std::vector<double>& theta,
                                          const std::vector<NoisyState>& data) {
    double loss = 0.0;
    int correct = 0;
    for (const auto& d : data) {
        const double p1 = predict_p1_exact(circuit, theta, d.state);
        loss += cross_entropy(p1, d.label);
        const int predicted = p1 > 0.5 ? 1 : 0;
        if (predicted == d.label) ++correct;
    }
    return {loss / double(data.size()), double(correct) / double(data.size())};
}

} // namespace

std::string model_name(Model m) {
    switch (m) {
    case Model::EquivariantSp: return "eq-sp";
    case Model::NonequivariantSp: return "noneq-sp";
    case Model::EquivariantRandomized: return "eq-rand";
    }
    return "";
}

std::string backend_name(Backend b) { return b == Backend::Exact ? "exact" : "shots"; }

Model model_from_name(const std::string& s) {
    if (s == "eq-sp") return Model::EquivariantSp;
    if (s == "noneq-sp") return Model::NonequivariantSp;
    if (s == "eq-rand") return Model::EquivariantRandomized;
    throw ConstructionError("unknown model: " + s);
}

Backend backend_from_name(const std::string& s) {
    if (s == "exact") return Backend::Exact;
    if (s == "shots") return Backend::Shots;
    throw ConstructionError("unknown backend: " + s);
}

void adam_step(std::vector<double>& theta, const std::vector<double>& grad, AdamState& state,
               const TrainConfig& config) {
    if (grad.size() != theta.size() || state.m.size() != theta.size() || state.v.size() != theta.size())
        throw DimensionError("optimizer state size mismatch");
    state.t += 1;
    const double bias1 = 1.0 - std::pow(config.beta1, double(state.t));
    const double bias2 = 1.0 - std::pow(config.beta2, double(state.t));
    for (size_t i = 0; i < theta.size(); ++i) {
        state.m[i] = config.beta1 * state.m[i] + (1.0 - config.beta1) * grad[i];
        state.v[i] = config.beta2 * state.v[i] + (1.0 - config.beta2) * grad[i] * grad[i];
        const double mhat = state.m[i] / bias1;
        const double vhat = state.v[i] / bias2;
        theta[i] -= config.learning_rate * mhat / (std::sqrt(vhat) + config.epsilon_hat);
    }
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double cross_entropy(double p1, int label) {
    const double p = label == 1 ? p1 : 1.0 - p1;
    return -std::log(std::max(p, kLogClamp));
}

double predict_p1_exact(const CircuitIR& circuit, const std::vector<double>& theta, const StateVector& input) {
    StateVector psi = input;
    apply_circuit(psi, circuit, theta);
    return logistic(exact_expectation(psi, Observable::sum_x(circuit.n)));
}

CircuitIR build_demo_circuit(Model model, const std::array<int, 3>& depths) {
    CircuitIR circuit = build_d4_ansatz(cube_demo_plan(), depths);
    if (model == Model::NonequivariantSp) circuit = strip_sharing(circuit);
    return circuit;
}

TrainRecord train(const TrainConfig& config) {
    if (config.n_t < 1 || config.n_shot < 1 || config.test_pairs < 1 || config.eval_interval < 1 ||
        config.n_epoch < 0)
        throw ConstructionError("invalid training configuration");

    const auto task = demo_ground_states();
    const uint64_t data_seed = config.use_data_seed ? config.data_seed : config.seed;
    Rng rng_train = Rng::keyed(data_seed, "train-data");
    Rng rng_test = Rng::keyed(data_seed, "test-data");
    Rng rng_init = Rng::keyed(config.seed, "init");
    Rng rng_shuffle = Rng::keyed(config.seed, "shuffle");
    Rng rng_shots = Rng::keyed(config.seed, "shots");

    const auto train_set = make_dataset(task.psi1, task.psi2, config.n_t, config.gamma, rng_train);
    const auto test_set = make_dataset(task.psi1, task.psi2, config.test_pairs, config.gamma, rng_test);

    const CircuitIR circuit = build_demo_circuit(config.model, config.depths);
    const Observable obs = Observable::sum_x(circuit.n);
    const GradientEngine engine(circuit, obs);

    std::vector<double> theta(circuit.n_slots);
    for (auto& t : theta) t = rng_init.uniform(0.0, kTwoPi);

    const long long budget = (2LL * block_gate_count(circuit) + 1) * config.n_shot;
    const GradientMode mode =
        config.model == Model::EquivariantRandomized ? GradientMode::Randomized : GradientMode::Sp;

    TrainRecord record;
    record.config = config;
    record.n_slots = circuit.n_slots;

    AdamState adam;
    adam.m.assign(circuit.n_slots, 0.0);
    adam.v.assign(circuit.n_slots, 0.0);

    long long iteration = 0;
    long long shots_spent = 0;
    auto record_epoch = [&](int epoch) {
        EpochStats st;
        st.epoch = epoch;
        st.iteration = iteration;
        std::tie(st.train_loss, std::ignore) = dataset_metrics(circuit, theta, train_set);
        std::tie(st.test_loss, st.test_acc) = dataset_metrics(circuit, theta, test_set);
        st.shots_spent = shots_spent;
        if (config.r_batches >= 2) {
            Rng rng_r = Rng::keyed(config.seed, "efficiency", uint64_t(epoch));
            const auto rep =
                efficiency_ratio(circuit, theta, test_set[0].state, obs, config.r_shots, config.r_batches, rng_r);
            st.has_r = true;
            st.r = rep.r;
        }
        record.epochs.push_back(st);
    };
    record_epoch(0);

    std::vector<int> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> grad(circuit.n_slots);
    for (int epoch = 1; epoch <= config.n_epoch; ++epoch) {
        rng_shuffle.shuffle(order);
        for (int idx : order) {
            const NoisyState& datum = train_set[size_t(idx)];
            const GradientEstimate est = config.backend == Backend::Exact
                                             ? engine.exact(theta, datum.state)
                                             : engine.sampled(theta, datum.state, budget, rng_shots, mode);
            const double chain = logistic(est.observable) - double(datum.label);
            for (size_t s = 0; s < grad.size(); ++s) grad[s] = chain * est.gradient[s];
            adam_step(theta, grad, adam, config);
            ++iteration;
            shots_spent += est.ledger.total_shots;
        }
        if (epoch % config.eval_interval == 0 || epoch == config.n_epoch) record_epoch(epoch);
    }
    record.theta_final = std::move(theta);
    record.total_shots = shots_spent;
    return record;
}

} // namespace spqcnn
