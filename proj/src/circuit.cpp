#include "qimg/circuit.hpp"

#include <algorithm>
#include <set>

namespace qimg {

namespace {
struct KindRow {
    GateKind kind;
    const char* name;
    int arity;  // -1 = variadic
    bool angle;
};
constexpr KindRow kKinds[] = {
    {GateKind::H, "h", 1, false},       {GateKind::X, "x", 1, false},
    {GateKind::Y, "y", 1, false},       {GateKind::Z, "z", 1, false},
    {GateKind::S, "s", 1, false},       {GateKind::T, "t", 1, false},
    {GateKind::Cx, "cx", 2, false},     {GateKind::Cz, "cz", 2, false},
    {GateKind::Ccx, "ccx", 3, false},   {GateKind::Swap, "swap", 2, false},
    {GateKind::Mcx, "mcx", -1, false},  {GateKind::Rz, "rz", 1, true},
    {GateKind::Cp, "cp", 2, true},      {GateKind::Proj, "proj", -1, false},
    {GateKind::Custom, "custom", -1, false},
};

const KindRow& row(GateKind k) {
    for (const auto& r : kKinds)
        if (r.kind == k) return r;
    throw Error("unknown gate kind");
}
}  // namespace

const char* gate_name(GateKind k) { return row(k).name; }

std::optional<GateKind> gate_kind_from_name(std::string_view name) {
    for (const auto& r : kKinds)
        if (name == r.name) return r.kind;
    return std::nullopt;
}

int gate_arity(GateKind k) { return row(k).arity; }
bool gate_has_angle(GateKind k) { return row(k).angle; }

void validate_gate(const Gate& g, int n) {
    const KindRow& r = row(g.kind);
    if (g.qubits.empty()) throw ShapeError(std::string(r.name) + ": no qubits");
    if (r.arity >= 0 && static_cast<int>(g.qubits.size()) != r.arity)
        throw ShapeError(std::string(r.name) + ": expects " + std::to_string(r.arity) +
                         " qubit(s), got " + std::to_string(g.qubits.size()));
    if (g.kind == GateKind::Mcx && g.qubits.size() < 2)
        throw ShapeError("mcx: needs at least one control and a target");
    std::set<int> seen;
    for (int q : g.qubits) {
        if (q < 0 || q >= n)
            throw ShapeError(std::string(r.name) + ": qubit " + std::to_string(q) +
                             " out of range for width " + std::to_string(n));
        if (!seen.insert(q).second)
            throw ShapeError(std::string(r.name) + ": duplicate qubit " + std::to_string(q));
    }
    if (g.kind == GateKind::Proj) {
        if (g.bits.size() != g.qubits.size())
            throw ShapeError("proj: pattern length must match qubit count");
        for (char c : g.bits)
            if (c != '0' && c != '1') throw ShapeError("proj: pattern must be over {0,1}");
    }
    if (g.kind == GateKind::Custom) {
        if (g.qubits.size() > 11) throw ShapeError("custom: at most 11 qubits");
        size_t dim = size_t{1} << g.qubits.size();
        if (g.matrix.size() != dim * dim)
            throw ShapeError("custom: matrix must be 2^k x 2^k over the listed qubits");
    }
    if (!std::isfinite(g.scale)) throw ShapeError("gate scale must be finite");
}

void validate_circuit(const Circuit& c) {
    if (c.n <= 0) throw ShapeError("circuit width must be positive");
    for (const Gate& g : c.gates) validate_gate(g, c.n);
}

void validate_system(const QuantumTransitionSystem& qts) {
    if (qts.n <= 0) throw ShapeError("system width must be positive");
    if (qts.symbols.empty()) throw ShapeError("system has no symbols");
    std::set<std::string> names(qts.symbols.begin(), qts.symbols.end());
    if (names.size() != qts.symbols.size()) throw ShapeError("duplicate symbol in listing");
    for (const auto& s : qts.symbols) {
        auto it = qts.operations.find(s);
        if (it == qts.operations.end() || it->second.empty())
            throw ShapeError("symbol " + s + " has no operators");
        for (const Circuit& c : it->second) {
            if (c.n != qts.n) throw ShapeError("operator width differs from system width");
            validate_circuit(c);
        }
    }
    for (const auto& k : qts.init.kets)
        if (static_cast<int>(k.size()) != qts.n)
            throw ShapeError("init ket length must equal qubit count");
    if (!qts.init.vecs.empty()) {
        // Explicit vectors carry 2^n amplitudes; wide systems must use kets.
        if (qts.n > 22) throw ShapeError("explicit init vectors need n <= 22");
        size_t want = size_t{1} << qts.n;
        for (const auto& v : qts.init.vecs)
            if (v.size() != want) throw ShapeError("init vector must have 2^n entries");
    }
}

}  // namespace qimg
