#include "spqcnn/gradient.hpp"

#include "spqcnn/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <tuple>
#include <utility>

namespace spqcnn {

namespace {

using cd = std::complex<double>;

// Two-point rule offset for e^{-i a P} rotations.
constexpr double kShift = 0.78539816339744830961; // pi / 4

std::set<int> owning_qubits(const CircuitIR& circuit, const Gate& g) {
    if (g.branch < 0) return {g.q0};
    if (g.layer < 0 || g.layer >= int(circuit.plan.layers.size())) throw IndexError("gate layer out of range");
    const auto& branches = circuit.plan.layers[g.layer].branches;
    if (g.branch >= int(branches.size())) throw IndexError("gate branch out of range");
    return branches[g.branch].qubits;
}

bool disjoint(const std::set<int>& a, const std::set<int>& b) {
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib)
            ++ia;
        else if (*ib < *ia)
            ++ib;
        else
            return false;
    }
    return true;
}

// ---- compiled evaluator ----------------------------------------------------
// Adjacent single-qubit rotations on one qubit fuse into a single 2x2 whose
// matrix is rebuilt from the angle table per evaluation; two-qubit gates stay
// diagonal phase ops. Gate order is preserved up to commuting single-qubit
// gates backward past ops that do not touch their qubit.

struct SubRot {
    GateKind kind = GateKind::RX;
    int position = 0; // index into the angle table
};

struct COp {
    bool zz = false;
    int q0 = 0;
    int q1 = -1;
    std::vector<SubRot> subs;
};

struct Compiled {
    std::vector<COp> ops;
    std::vector<int> pos_to_op; // gate position -> op index
};

Compiled compile(const CircuitIR& circuit) {
    Compiled cc;
    cc.pos_to_op.assign(circuit.gates.size(), -1);
    std::vector<int> last_touch(circuit.n, -1);
    for (int p = 0; p < int(circuit.gates.size()); ++p) {
        const Gate& g = circuit.gates[p];
        if (g.is_two_qubit()) {
            COp op;
            op.zz = true;
            op.q0 = g.q0;
            op.q1 = g.q1;
            op.subs.push_back({g.kind, p});
            cc.ops.push_back(std::move(op));
            int idx = int(cc.ops.size()) - 1;
            last_touch[g.q0] = idx;
            last_touch[g.q1] = idx;
            cc.pos_to_op[p] = idx;
        } else {
            int lt = last_touch[g.q0];
            if (lt >= 0 && !cc.ops[lt].zz) {
                cc.ops[lt].subs.push_back({g.kind, p});
                cc.pos_to_op[p] = lt;
            } else {
                COp op;
                op.q0 = g.q0;
                op.subs.push_back({g.kind, p});
                cc.ops.push_back(std::move(op));
                last_touch[g.q0] = int(cc.ops.size()) - 1;
                cc.pos_to_op[p] = last_touch[g.q0];
            }
        }
    }
    return cc;
}

void raw_apply_1q(std::vector<cd>& a, int q, cd m00, cd m01, cd m10, cd m11) {
    const size_t mask = size_t(1) << q;
    for (size_t i = 0; i < a.size(); ++i) {
        if (i & mask) continue;
        const cd a0 = a[i];
        const cd a1 = a[i | mask];
        a[i] = m00 * a0 + m01 * a1;
        a[i | mask] = m10 * a0 + m11 * a1;
    }
}

void apply_op(const COp& op, std::vector<cd>& a, const std::vector<double>& angle) {
    if (op.zz) {
        const double t = angle[op.subs[0].position];
        const cd same = std::polar(1.0, -t);
        const cd diff = std::polar(1.0, t);
        const size_t m0 = size_t(1) << op.q0;
        const size_t m1 = size_t(1) << op.q1;
        for (size_t i = 0; i < a.size(); ++i) a[i] *= (bool(i & m0) == bool(i & m1)) ? same : diff;
        return;
    }
    cd m00 = 1, m01 = 0, m10 = 0, m11 = 1;
    for (const SubRot& s : op.subs) {
        cd r00, r01, r10, r11;
        const double t = angle[s.position];
        if (s.kind == GateKind::RX) {
            const double c = std::cos(t), sn = std::sin(t);
            r00 = c;
            r01 = cd(0.0, -sn);
            r10 = cd(0.0, -sn);
            r11 = c;
        } else { // RZ
            r00 = std::polar(1.0, -t);
            r01 = 0;
            r10 = 0;
            r11 = std::polar(1.0, t);
        }
        const cd t00 = r00 * m00 + r01 * m10;
        const cd t01 = r00 * m01 + r01 * m11;
        const cd t10 = r10 * m00 + r11 * m10;
        const cd t11 = r10 * m01 + r11 * m11;
        m00 = t00;
        m01 = t01;
        m10 = t10;
        m11 = t11;
    }
    raw_apply_1q(a, op.q0, m00, m01, m10, m11);
}

void run_ops(const Compiled& cc, std::vector<cd>& a, const std::vector<double>& angle, size_t start_op) {
    for (size_t oi = start_op; oi < cc.ops.size(); ++oi) apply_op(cc.ops[oi], a, angle);
}

double raw_pauli(const std::vector<cd>& a, int q, Pauli p) {
    const size_t mask = size_t(1) << q;
    double acc = 0.0;
    if (p == Pauli::Z) {
        for (size_t i = 0; i < a.size(); ++i) acc += (i & mask) ? -std::norm(a[i]) : std::norm(a[i]);
        return acc;
    }
    for (size_t i = 0; i < a.size(); ++i) {
        if (i & mask) continue;
        const cd z = std::conj(a[i]) * a[i | mask];
        acc += (p == Pauli::X) ? z.real() : z.imag();
    }
    return 2.0 * acc;
}

} // namespace

std::vector<ShiftUnit> enumerate_shift_units(const CircuitIR& circuit) {
    // slot -> (layer, branch home) -> positions in gate order; tail gates get
    // one artificial home per qubit.
    std::map<int, std::map<std::pair<int, long long>, std::vector<int>>> by_slot;
    for (int p = 0; p < int(circuit.gates.size()); ++p) {
        const Gate& g = circuit.gates[p];
        if (g.slot < 0 || g.slot >= circuit.n_slots) throw IndexError("gate slot out of range");
        const long long home = g.branch >= 0 ? g.branch : -1 - (long long)g.q0;
        by_slot[g.slot][{g.layer, home}].push_back(p);
    }
    std::vector<ShiftUnit> units;
    for (const auto& [slot, homes] : by_slot) {
        std::map<int, size_t> occ_per_layer;
        for (const auto& [home, plist] : homes)
            occ_per_layer[home.first] = std::max(occ_per_layer[home.first], plist.size());
        for (const auto& [layer, kmax] : occ_per_layer) {
            for (size_t k = 0; k < kmax; ++k) {
                ShiftUnit u;
                u.slot = slot;
                u.occurrence = int(k);
                u.layer = layer;
                for (const auto& [home, plist] : homes) {
                    if (home.first != layer || k >= plist.size()) continue;
                    const int pos = plist[k];
                    u.positions.push_back(pos);
                    const auto bq = owning_qubits(circuit, circuit.gates[pos]);
                    u.affected.insert(bq.begin(), bq.end());
                }
                std::sort(u.positions.begin(), u.positions.end());
                units.push_back(std::move(u));
            }
        }
    }
    std::sort(units.begin(), units.end(), [](const ShiftUnit& a, const ShiftUnit& b) {
        return std::tie(a.layer, a.slot, a.occurrence) < std::tie(b.layer, b.slot, b.occurrence);
    });
    return units;
}

std::vector<ShiftGroup> pack_shift_groups(const std::vector<ShiftUnit>& units) {
    std::vector<ShiftGroup> groups;
    for (int ui = 0; ui < int(units.size()); ++ui) {
        bool placed = false;
        for (auto& g : groups) {
            if (!disjoint(g.affected, units[ui].affected)) continue;
            g.units.push_back(ui);
            g.affected.insert(units[ui].affected.begin(), units[ui].affected.end());
            placed = true;
            break;
        }
        if (!placed) {
            ShiftGroup g;
            g.units.push_back(ui);
            g.affected = units[ui].affected;
            groups.push_back(std::move(g));
        }
    }
    return groups;
}

std::vector<ShiftGroup> pack_shift_groups(const CircuitIR& circuit) {
    return pack_shift_groups(enumerate_shift_units(circuit));
}

double shift_gradient_exact(const CircuitIR& circuit, const std::vector<double>& theta, const StateVector& input,
                            const Observable& o, int slot) {
    if (slot < 0 || slot >= circuit.n_slots) throw IndexError("slot out of range");
    const auto positions = circuit.slot_positions();
    double d = 0.0;
    for (int pos : positions[slot]) {
        const double sign = circuit.gates[pos].sign;
        double e[2];
        for (int k = 0; k < 2; ++k) {
            const double dir = (k == 0) ? 1.0 : -1.0;
            StateVector psi = input;
            const std::vector<std::pair<int, double>> shift{{pos, dir * sign * kShift}};
            apply_circuit(psi, circuit, theta, &shift);
            e[k] = exact_expectation(psi, o);
        }
        d += e[0] - e[1];
    }
    return d;
}

// ---- engine -----------------------------------------------------------------

struct GradientEngine::Impl {
    CircuitIR circuit;
    Observable obs;
    double scale = 1.0;
    std::vector<int> term_qubits;
    std::vector<double> coeff; // per qubit, 0 when absent
    std::vector<Pauli> pauli;  // per qubit, valid where coeff != 0
    std::vector<char> has_term;

    std::vector<ShiftUnit> units;
    std::vector<ShiftGroup> groups_sp;
    std::vector<ShiftGroup> groups_rand;
    std::vector<size_t> unit_first_op;
    // per unit, per position: the observable qubits the position can move
    std::vector<std::vector<std::vector<int>>> readout;
    Compiled compiled;

    std::vector<double> base_angles(const std::vector<double>& theta) const {
        std::vector<double> a(circuit.gates.size());
        for (size_t p = 0; p < circuit.gates.size(); ++p)
            a[p] = circuit.gates[p].sign * theta[circuit.gates[p].slot];
        return a;
    }

    // State after every compiled op, so each shifted circuit restarts from
    // the op holding its earliest shifted gate.
    std::vector<std::vector<cd>> prefixes(const StateVector& input, const std::vector<double>& angle) const {
        std::vector<std::vector<cd>> pre(compiled.ops.size() + 1);
        pre[0] = input.amplitudes();
        for (size_t k = 0; k < compiled.ops.size(); ++k) {
            pre[k + 1] = pre[k];
            apply_op(compiled.ops[k], pre[k + 1], angle);
        }
        return pre;
    }

    void add_group_shift(std::vector<double>& angle, const ShiftGroup& g, double dir) const {
        for (int ui : g.units)
            for (int pos : units[ui].positions) angle[pos] += dir * circuit.gates[pos].sign * kShift;
    }

    size_t group_first_op(const ShiftGroup& g) const {
        size_t first = compiled.ops.size();
        for (int ui : g.units) first = std::min(first, unit_first_op[ui]);
        return first;
    }

    void rotate_for_measurement(std::vector<cd>& a) const {
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        for (int q : term_qubits) {
            if (pauli[q] == Pauli::Z) continue;
            if (pauli[q] == Pauli::X) {
                raw_apply_1q(a, q, inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2);
            } else { // Y: S-dagger then Hadamard
                raw_apply_1q(a, q, inv_sqrt2, cd(0.0, -inv_sqrt2), inv_sqrt2, cd(0.0, inv_sqrt2));
            }
        }
    }

    // Per-qubit outcome means from full-bitstring readout; indexed by qubit.
    std::vector<double> sp_qubit_means(const std::vector<cd>& amps, int shots, Rng& rng) const {
        std::vector<cd> rotated = amps;
        rotate_for_measurement(rotated);
        std::vector<double> cdf(rotated.size());
        double acc = 0.0;
        for (size_t i = 0; i < rotated.size(); ++i) {
            acc += std::norm(rotated[i]);
            cdf[i] = acc;
        }
        cdf.back() = std::max(cdf.back(), 1.0);
        std::vector<double> sums(circuit.n, 0.0);
        for (int s = 0; s < shots; ++s) {
            const double u = rng.uniform();
            const size_t idx = std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
            for (int q : term_qubits) sums[q] += (idx >> q) & 1 ? -1.0 : 1.0;
        }
        for (double& v : sums) v /= double(shots);
        return sums;
    }

    // Random-qubit estimator mean (unscaled: per-shot value n * c_q * x_q).
    double rand_mean(const std::vector<cd>& amps, int shots, Rng& rng) const {
        std::vector<cd> rotated = amps;
        rotate_for_measurement(rotated);
        std::vector<double> p_set(circuit.n, 0.0);
        for (size_t i = 0; i < rotated.size(); ++i) {
            const double w = std::norm(rotated[i]);
            if (w == 0.0) continue;
            for (int q = 0; q < circuit.n; ++q)
                if (i & (size_t(1) << q)) p_set[q] += w;
        }
        double acc = 0.0;
        for (int s = 0; s < shots; ++s) {
            const int q = int(rng.uniform_int(uint64_t(circuit.n)));
            const double outcome = rng.uniform() < p_set[q] ? -1.0 : 1.0;
            acc += double(circuit.n) * coeff[q] * outcome;
        }
        return acc / double(shots);
    }
};

GradientEngine::GradientEngine(const CircuitIR& circuit, Observable o) : impl_(new Impl) {
    Impl& im = *impl_;
    im.circuit = circuit;
    im.obs = std::move(o);
    im.scale = im.obs.scale(circuit.n);
    im.coeff.assign(circuit.n, 0.0);
    im.pauli.assign(circuit.n, Pauli::Z);
    im.has_term.assign(circuit.n, 0);
    for (const auto& t : im.obs.terms) {
        if (t.qubit < 0 || t.qubit >= circuit.n) throw IndexError("observable qubit out of range");
        if (im.has_term[t.qubit]) throw ConstructionError("one term per qubit expected");
        im.has_term[t.qubit] = 1;
        im.coeff[t.qubit] = t.coeff;
        im.pauli[t.qubit] = t.pauli;
        im.term_qubits.push_back(t.qubit);
    }
    std::sort(im.term_qubits.begin(), im.term_qubits.end());

    im.units = enumerate_shift_units(circuit);
    im.groups_sp = pack_shift_groups(im.units);
    for (int ui = 0; ui < int(im.units.size()); ++ui) {
        ShiftGroup g;
        g.units.push_back(ui);
        g.affected = im.units[ui].affected;
        im.groups_rand.push_back(std::move(g));
    }
    im.compiled = compile(circuit);
    im.unit_first_op.resize(im.units.size());
    im.readout.resize(im.units.size());
    for (size_t ui = 0; ui < im.units.size(); ++ui) {
        size_t first = im.compiled.ops.size();
        for (int pos : im.units[ui].positions) first = std::min(first, size_t(im.compiled.pos_to_op[pos]));
        im.unit_first_op[ui] = first;
        for (int pos : im.units[ui].positions) {
            std::vector<int> qubits;
            for (int q : owning_qubits(circuit, circuit.gates[pos]))
                if (im.has_term[q]) qubits.push_back(q);
            im.readout[ui].push_back(std::move(qubits));
        }
    }
}

GradientEngine::~GradientEngine() = default;

const std::vector<ShiftUnit>& GradientEngine::units() const { return impl_->units; }

const std::vector<ShiftGroup>& GradientEngine::groups(GradientMode mode) const {
    return mode == GradientMode::Sp ? impl_->groups_sp : impl_->groups_rand;
}

int GradientEngine::circuit_count(GradientMode mode) const { return 1 + 2 * int(groups(mode).size()); }

GradientEstimate GradientEngine::exact(const std::vector<double>& theta, const StateVector& input) const {
    const Impl& im = *impl_;
    if (int(theta.size()) != im.circuit.n_slots) throw DimensionError("theta size does not match slot count");
    if (input.n() != im.circuit.n) throw DimensionError("input qubit count does not match circuit");

    const auto angle0 = im.base_angles(theta);
    const auto prefix = im.prefixes(input, angle0);

    GradientEstimate out;
    out.gradient.assign(im.circuit.n_slots, 0.0);
    out.ledger.circuits = 1 + 2 * int(im.groups_sp.size());

    double obs = 0.0;
    for (int q : im.term_qubits) obs += im.coeff[q] * raw_pauli(prefix.back(), q, im.pauli[q]);
    out.observable = im.scale * obs;

    std::vector<double> angle(angle0.size());
    std::array<std::vector<double>, 2> expect;
    expect[0].assign(im.circuit.n, 0.0);
    expect[1].assign(im.circuit.n, 0.0);
    for (const auto& g : im.groups_sp) {
        const size_t first = im.group_first_op(g);
        for (int k = 0; k < 2; ++k) {
            angle = angle0;
            im.add_group_shift(angle, g, k == 0 ? 1.0 : -1.0);
            std::vector<cd> amps = prefix[first];
            run_ops(im.compiled, amps, angle, first);
            for (int q : im.term_qubits)
                if (g.affected.count(q)) expect[k][q] = raw_pauli(amps, q, im.pauli[q]);
        }
        for (int ui : g.units) {
            double d = 0.0;
            for (const auto& qs : im.readout[ui])
                for (int q : qs) d += im.coeff[q] * (expect[0][q] - expect[1][q]);
            out.gradient[im.units[ui].slot] += d;
        }
    }
    for (double& v : out.gradient) v *= im.scale;
    return out;
}

GradientEstimate GradientEngine::sampled(const std::vector<double>& theta, const StateVector& input,
                                         long long total_shot_budget, Rng& rng, GradientMode mode) const {
    const Impl& im = *impl_;
    if (int(theta.size()) != im.circuit.n_slots) throw DimensionError("theta size does not match slot count");
    if (input.n() != im.circuit.n) throw DimensionError("input qubit count does not match circuit");

    const auto& groups = mode == GradientMode::Sp ? im.groups_sp : im.groups_rand;
    const int n_circ = 1 + 2 * int(groups.size());
    if (total_shot_budget < n_circ) throw ConstructionError("shot budget below one shot per circuit");
    const long long base = total_shot_budget / n_circ;
    const int rem = int(total_shot_budget % n_circ);

    GradientEstimate out;
    out.gradient.assign(im.circuit.n_slots, 0.0);
    out.ledger.circuits = n_circ;
    out.ledger.shots_per_circuit.resize(n_circ);
    for (int i = 0; i < n_circ; ++i) {
        out.ledger.shots_per_circuit[i] = int(base) + (i < rem ? 1 : 0);
        out.ledger.total_shots += out.ledger.shots_per_circuit[i];
    }

    const auto angle0 = im.base_angles(theta);
    const auto prefix = im.prefixes(input, angle0);

    // Circuit 0: unshifted, supplies the observable estimate.
    if (mode == GradientMode::Sp) {
        const auto xbar = im.sp_qubit_means(prefix.back(), out.ledger.shots_per_circuit[0], rng);
        double v = 0.0;
        for (int q : im.term_qubits) v += im.coeff[q] * xbar[q];
        out.observable = v;
    } else {
        out.observable = im.rand_mean(prefix.back(), out.ledger.shots_per_circuit[0], rng);
    }

    std::vector<double> angle(angle0.size());
    for (size_t gi = 0; gi < groups.size(); ++gi) {
        const ShiftGroup& g = groups[gi];
        const size_t first = im.group_first_op(g);
        std::array<std::vector<double>, 2> xbar;
        std::array<double, 2> ohat = {0.0, 0.0};
        for (int k = 0; k < 2; ++k) {
            angle = angle0;
            im.add_group_shift(angle, g, k == 0 ? 1.0 : -1.0);
            std::vector<cd> amps = prefix[first];
            run_ops(im.compiled, amps, angle, first);
            const int shots = out.ledger.shots_per_circuit[1 + 2 * gi + k];
            if (mode == GradientMode::Sp)
                xbar[k] = im.sp_qubit_means(amps, shots, rng);
            else
                ohat[k] = im.rand_mean(amps, shots, rng);
        }
        if (mode == GradientMode::Sp) {
            for (int ui : g.units) {
                double d = 0.0;
                for (const auto& qs : im.readout[ui])
                    for (int q : qs) d += im.coeff[q] * (xbar[0][q] - xbar[1][q]);
                out.gradient[im.units[ui].slot] += d;
            }
        } else {
            out.gradient[im.units[g.units[0]].slot] += ohat[0] - ohat[1];
        }
    }
    for (double& v : out.gradient) v *= im.scale;
    out.observable *= im.scale;
    return out;
}

GradientEstimate gradient_exact(const CircuitIR& circuit, const std::vector<double>& theta, const StateVector& input,
                                const Observable& o) {
    return GradientEngine(circuit, o).exact(theta, input);
}

GradientEstimate estimate_gradient(const CircuitIR& circuit, const std::vector<double>& theta,
                                   const StateVector& input, const Observable& o, long long total_shot_budget,
                                   Rng& rng, GradientMode mode) {
    return GradientEngine(circuit, o).sampled(theta, input, total_shot_budget, rng, mode);
}

} // namespace spqcnn
