#pragma once

#include "spqcnn/circuit.hpp"
#include "spqcnn/heisenberg.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace spqcnn {

enum class Model { EquivariantSp, NonequivariantSp, EquivariantRandomized };
enum class Backend { Exact, Shots };

std::string model_name(Model m);
std::string backend_name(Backend b);
Model model_from_name(const std::string& s);
Backend backend_from_name(const std::string& s);

struct TrainConfig {
    int n_t = 10;    // training pairs; the dataset holds 2 n_t states
    int n_epoch = 100;
    int n_shot = 5;  // per-gate baseline of the shot budget formula
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon_hat = 1e-8;
    uint64_t seed = 1;
    // When set, the train/test datasets are drawn from this seed instead of
    // config.seed, so runs can vary the parameter initialization alone.
    bool use_data_seed = false;
    uint64_t data_seed = 0;
    Model model = Model::EquivariantSp;
    Backend backend = Backend::Shots;
    double gamma = 0.4;
    std::array<int, 3> depths{3, 3, 3};
    int test_pairs = 100;
    int eval_interval = 1; // epochs between metric rows (epoch 0 and the last always recorded)
    int r_batches = 0;     // efficiency-ratio batches per metric row; 0 disables the column
    int r_shots = 100;
};

struct EpochStats {
    int epoch = 0;
    long long iteration = 0; // SGD steps taken so far
    double train_loss = 0.0;
    double test_loss = 0.0;
    double test_acc = 0.0;
    long long shots_spent = 0;
    bool has_r = false;
    double r = 0.0;
};

struct TrainRecord {
    TrainConfig config;
    int n_slots = 0;
    std::vector<EpochStats> epochs; // epoch-0 row first
    std::vector<double> theta_final;
    long long total_shots = 0;
};

struct AdamState {
    std::vector<double> m, v;
    long long t = 0;
};

// Standard Adam update with bias correction; increments t.
void adam_step(std::vector<double>& theta, const std::vector<double>& grad, AdamState& state,
               const TrainConfig& config);

double logistic(double x);
// Cross entropy -[y log p1 + (1-y) log (1-p1)], log arguments clamped at 1e-12.
double cross_entropy(double p1, int label);

// p1 = logistic(<sum_j X_j>) evaluated exactly.
double predict_p1_exact(const CircuitIR& circuit, const std::vector<double>& theta, const StateVector& input);

// The demo classifier circuit: the shared-slot cube ansatz; the
// non-equivariant model has its parameter sharing stripped.
CircuitIR build_demo_circuit(Model model, const std::array<int, 3>& depths);

// Single-sample SGD with Adam on the two-Hamiltonian classification task.
// Streams (dataset, test set, init, shuffle, shots, efficiency) are keyed
// from config.seed; metrics are evaluated exactly at epoch boundaries.
TrainRecord train(const TrainConfig& config);

} // namespace spqcnn
