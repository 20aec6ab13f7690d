#pragma once

#include <string>

#include "qimg/circuit.hpp"

namespace qimg {

struct BenchParams {
    double p = 0.5;      // qrw: coin bit-flip probability, in (0,1)
    std::string hidden;  // bv: hidden string over the data qubits; empty = "1010..."
};

// Families: ghz | bv | qft | grover | qrw.
//   ghz     h + chain of cx, init |0...0>.
//   bv      data qubits 0..n-2, ancilla n-1 held in |->; oracle = cx onto the
//           ancilla per hidden '1' bit, H sandwich on data; init |0...0>|->.
//   qft     H + controlled-phase ladder, no terminal swaps; init |0...0>.
//   grover  n-1 search qubits + phase ancilla (needs n >= 3): mark |1...1>
//           via the Toffoli family, then the reflection about the mean; init
//           span{|+...+ ->, |1...1 ->} (the algorithm's invariant plane).
//   qrw     coin qubit 0 + n-1 position qubits; symbol "1" walks, symbol "2"
//           walks with a coin bit-flip error of probability p before the coin
//           toss; shift in/decrements the position register by the coin value.
QuantumTransitionSystem gen_benchmark(const std::string& family, int n,
                                      const BenchParams& params = {});

}  // namespace qimg
