#pragma once

#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "qimg/network.hpp"
#include "qimg/subspace.hpp"
#include "qimg/tdd.hpp"

namespace qimg::testing {

inline Complex rand_complex(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    return {d(rng), d(rng)};
}

// Random entry vector with a configurable share of exact zeros so the
// zero-suppression paths get exercised.
inline std::vector<Complex> random_entries(std::mt19937_64& rng, size_t n,
                                           double zero_prob = 0.25) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Complex> out(n);
    for (auto& v : out)
        if (u(rng) >= zero_prob) v = rand_complex(rng);
    return out;
}

inline std::vector<Label> random_labels(std::mt19937_64& rng, int rank) {
    std::uniform_int_distribution<int> q(0, 5), l(1, 4);
    std::set<Label> s;
    while (static_cast<int>(s.size()) < rank) s.insert(Label{q(rng), l(rng)});
    return {s.begin(), s.end()};
}

inline double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Structural audit of the reduced/normalized form. Returns an empty string or
// the first violation found.
inline std::string canonical_violation(TddEngine& eng, Edge root) {
    if (edge_zero(root)) return root.node == kTerminal ? "" : "zero weight on non-terminal root";
    std::set<NodeId> seen;
    std::vector<NodeId> stack;
    if (root.node != kTerminal) stack.push_back(root.node);
    while (!stack.empty()) {
        NodeId n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) continue;
        Edge lo = eng.node_edge(n, 0), hi = eng.node_edge(n, 1);
        if (edge_zero(lo) && edge_zero(hi)) return "node with two zero children";
        Edge first = edge_zero(lo) ? hi : lo;
        if (first.w != Complex{1.0, 0.0}) return "first non-zero child weight is not exactly 1";
        if (lo.node == hi.node && key_equal(lo.w, hi.w)) return "redundant node";
        for (Edge e : {lo, hi}) {
            if (edge_zero(e)) {
                if (e.node != kTerminal) return "zero weight on non-terminal edge";
                continue;
            }
            if (e.node != kTerminal) {
                if (!(eng.node_label(n) < eng.node_label(e.node)))
                    return "child index not above parent";
                stack.push_back(e.node);
            }
        }
    }
    return "";
}

inline bool same_gate(const Gate& a, const Gate& b) {
    return a.kind == b.kind && a.qubits == b.qubits && a.theta == b.theta &&
           a.bits == b.bits && a.matrix == b.matrix && a.scale == b.scale;
}

inline bool same_system(const QuantumTransitionSystem& a,
                        const QuantumTransitionSystem& b) {
    if (a.n != b.n || a.symbols != b.symbols) return false;
    for (const auto& sym : a.symbols) {
        const auto& ka = a.operations.at(sym);
        const auto& kb = b.operations.at(sym);
        if (ka.size() != kb.size()) return false;
        for (size_t i = 0; i < ka.size(); ++i) {
            if (ka[i].gates.size() != kb[i].gates.size()) return false;
            for (size_t j = 0; j < ka[i].gates.size(); ++j)
                if (!same_gate(ka[i].gates[j], kb[i].gates[j])) return false;
        }
    }
    return a.init.kets == b.init.kets && a.init.vecs == b.init.vecs;
}

// Three-qubit bit-flip code round: syndrome extraction onto three ancillas,
// one symbol per syndrome value, each applying its projector and correction.
inline const char* bitflip_qts_text() {
    return R"(# bit-flip code: 3 data + 3 syndrome qubits
qubits 6
symbol s000
gate cx 0 3
gate cx 1 3
gate cx 1 4
gate cx 2 4
gate cx 0 5
gate cx 2 5
proj 3 4 5 000
symbol s101
gate cx 0 3
gate cx 1 3
gate cx 1 4
gate cx 2 4
gate cx 0 5
gate cx 2 5
proj 3 4 5 101
gate x 0
symbol s110
gate cx 0 3
gate cx 1 3
gate cx 1 4
gate cx 2 4
gate cx 0 5
gate cx 2 5
proj 3 4 5 110
gate x 1
symbol s011
gate cx 0 3
gate cx 1 3
gate cx 1 4
gate cx 2 4
gate cx 0 5
gate cx 2 5
proj 3 4 5 011
gate x 2
init
ket 100000
ket 010000
ket 001000
)";
}

// Interleaved operator addressing: per qubit the column bit then the row bit,
// qubit 0 most significant. Matches the sorted order of operator_labels(n).
inline size_t operator_addr(int x, int y, int n) {
    size_t a = 0;
    for (int q = 0; q < n; ++q) {
        a = (a << 1) | ((static_cast<size_t>(x) >> (n - 1 - q)) & 1);
        a = (a << 1) | ((static_cast<size_t>(y) >> (n - 1 - q)) & 1);
    }
    return a;
}

// Row-major matrix M[y * 2^n + x] to an operator Tdd and back.
inline Tdd dense_to_operator(TddEngine& eng, const std::vector<Complex>& flat, int n) {
    size_t dim = size_t{1} << n;
    std::vector<Complex> entries(dim * dim);
    for (size_t y = 0; y < dim; ++y)
        for (size_t x = 0; x < dim; ++x) entries[operator_addr(x, y, n)] = flat[y * dim + x];
    return eng.from_dense(entries, operator_labels(n));
}

inline std::vector<Complex> operator_to_dense(TddEngine& eng, const Tdd& t, int n) {
    std::vector<Complex> ent = eng.to_dense(t);
    size_t dim = size_t{1} << n;
    std::vector<Complex> flat(dim * dim);
    for (size_t y = 0; y < dim; ++y)
        for (size_t x = 0; x < dim; ++x) flat[y * dim + x] = ent[operator_addr(x, y, n)];
    return flat;
}

// Running three-qubit fixture: the projector onto span{v1, v2} with
// v1 = (1/sqrt(3))(|00> + |01> + |10>)|->  and  v2 = |11->.
// Its matrix is a 6x6 checkerboard of +-1/6 plus a 2x2 block of +-1/2:
//   P[y][x] = kProjSixths[y][x] / 6
inline const int kProjSixths[8][8] = {
    {1, -1, 1, -1, 1, -1, 0, 0},  {-1, 1, -1, 1, -1, 1, 0, 0},
    {1, -1, 1, -1, 1, -1, 0, 0},  {-1, 1, -1, 1, -1, 1, 0, 0},
    {1, -1, 1, -1, 1, -1, 0, 0},  {-1, 1, -1, 1, -1, 1, 0, 0},
    {0, 0, 0, 0, 0, 0, 3, -3},    {0, 0, 0, 0, 0, 0, -3, 3},
};

inline Tdd make_projector_fixture(TddEngine& eng) {
    std::vector<Complex> flat(64);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) flat[y * 8 + x] = Complex{kProjSixths[y][x] / 6.0, 0.0};
    return dense_to_operator(eng, flat, 3);
}

inline Tdd state_from_amplitudes(TddEngine& eng, const std::vector<Complex>& amps, int qubits) {
    return eng.from_dense(amps, state_labels(qubits));
}

// Amplitudes of v1 = (1/sqrt(3))(|00> + |01> + |10>)|->.
inline std::vector<Complex> v1_amps() {
    double a = 1.0 / std::sqrt(6.0);
    return {{a, 0}, {-a, 0}, {a, 0}, {-a, 0}, {a, 0}, {-a, 0}, {0, 0}, {0, 0}};
}

// Amplitudes of |11->.
inline std::vector<Complex> v2_amps() {
    double s = 1.0 / std::sqrt(2.0);
    return {{0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}, {s, 0}, {-s, 0}};
}

// Dense entries of the fully contracted network arranged as U[y * 2^n + x],
// x over the input labels, y over the outputs, qubit 0 most significant.
inline std::vector<Complex> network_operator_dense(TddEngine& eng, const TensorNet& net) {
    std::vector<Tdd> parts;
    for (const auto& m : net.members) parts.push_back(m.tensor);
    std::vector<Label> keep = net.inputs;
    keep.insert(keep.end(), net.outputs.begin(), net.outputs.end());
    Tdd op = fold_network(eng, parts, keep);
    size_t dim = size_t{1} << net.n;
    std::vector<Complex> flat(dim * dim, Complex{});
    for (size_t x = 0; x < dim; ++x)
        for (size_t y = 0; y < dim; ++y) {
            Assignment a;
            bool expressible = true;
            for (int q = 0; q < net.n && expressible; ++q) {
                int xb = static_cast<int>((x >> (net.n - 1 - q)) & 1);
                int yb = static_cast<int>((y >> (net.n - 1 - q)) & 1);
                if (net.inputs[q] == net.outputs[q]) {
                    // A wire whose input and output share one label is
                    // diagonal on that qubit: off-diagonal entries are 0.
                    if (xb != yb) expressible = false;
                    a[net.inputs[q]] = xb;
                } else {
                    a[net.inputs[q]] = xb;
                    a[net.outputs[q]] = yb;
                }
            }
            flat[y * dim + x] = expressible ? eng.evaluate(op, a) : Complex{};
        }
    return flat;
}

}  // namespace qimg::testing
