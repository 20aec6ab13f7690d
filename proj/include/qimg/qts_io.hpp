#pragma once

#include <string>

#include "qimg/circuit.hpp"

namespace qimg {

// Line-oriented transition-system format. '#' starts a comment.
//
//   qubits N
//   symbol NAME              (repeatable; a repeated name adds a Kraus operator)
//     gate GNAME q... [theta]
//     proj q... BITSTRING
//     op RxC q... a+bi ...   (row-major, R = C = 2^k over k listed qubits)
//     scale REAL             (multiplies the preceding element)
//   init
//     ket TOKENS             (chars from {0,1,+,-}, length N; repeatable)
//     vec a+bi ... (2^N entries)
//
// Reals serialize with 17 significant digits, so a round trip is bit-exact.
QuantumTransitionSystem parse_transition_system(const std::string& text);
std::string serialize_transition_system(const QuantumTransitionSystem& sys);

QuantumTransitionSystem load_transition_system(const std::string& path);
void save_transition_system(const QuantumTransitionSystem& sys, const std::string& path);

// "a+bi" tokens: a plain real, a pure imaginary ("2i"), or both parts.
Complex parse_complex(const std::string& token);
std::string format_complex(Complex v);
std::string format_real(double v);

}  // namespace qimg
