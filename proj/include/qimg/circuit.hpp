#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qimg/tdd.hpp"

namespace qimg {

enum class GateKind { H, X, Y, Z, S, T, Cx, Cz, Ccx, Swap, Mcx, Rz, Cp, Proj, Custom };

// One circuit element. For controlled kinds the qubit list is controls first,
// target last. A projector or custom matrix may be non-unitary; `scale`
// multiplies the whole tensor (scaled Kraus terms such as sqrt(p) I).
struct Gate {
    GateKind kind = GateKind::H;
    std::vector<int> qubits;
    double theta = 0.0;           // rz, cp
    std::string bits;             // proj: bit pattern, bits[i] goes with qubits[i]
    std::vector<Complex> matrix;  // custom: row-major 2^k x 2^k, qubits[0] = msb
    double scale = 1.0;
};

const char* gate_name(GateKind k);
std::optional<GateKind> gate_kind_from_name(std::string_view name);
// Fixed qubit count of a kind, or -1 when the kind is variadic.
int gate_arity(GateKind k);
bool gate_has_angle(GateKind k);

struct Circuit {
    int n = 0;
    std::vector<Gate> gates;
    std::string name;
};

// The initial subspace, spanned by all listed states.
struct InitSpec {
    std::vector<std::string> kets;           // tokens over {0,1,+,-}, length n
    std::vector<std::vector<Complex>> vecs;  // explicit amplitudes, length 2^n
    bool empty() const { return kets.empty() && vecs.empty(); }
};

// A family of quantum operations over n qubits: each symbol names one
// operation given by its Kraus operators, each a circuit fragment.
struct QuantumTransitionSystem {
    int n = 0;
    InitSpec init;
    std::vector<std::string> symbols;  // first-appearance order
    std::unordered_map<std::string, std::vector<Circuit>> operations;
    std::string name;
};

// Structural validation: qubit ranges, distinct qubits per gate, projector
// pattern lengths, custom matrix sizes, angle presence. Throws ShapeError or
// ParamError with a description of the first problem found.
void validate_gate(const Gate& g, int n);
void validate_circuit(const Circuit& c);
void validate_system(const QuantumTransitionSystem& qts);

}  // namespace qimg
