#pragma once

#include "qimg/circuit.hpp"
#include "qimg/tdd.hpp"

namespace qimg {

// Per qubit slot: does the gate act diagonally there, so that the input and
// output wires share one index label? True for every qubit of a diagonal gate
// (z, s, t, rz, cz, cp, proj) and for the control qubits of cx/ccx/mcx.
std::vector<bool> merged_qubits(const Gate& g);

// Matrix element <out|G|in> over the gate's qubit list, qubits[0] = most
// significant bit. Computed on the fly so controlled gates with many (merged)
// controls never materialize a 2^k x 2^k matrix. The gate's scale is applied.
Complex gate_entry(const Gate& g, uint64_t out, uint64_t in);

// Tensor of the gate over explicit wire labels. in_labels[i]/out_labels[i]
// belong to g.qubits[i]; merged slots must pass in_labels[i] == out_labels[i].
Tdd gate_tensor(TddEngine& eng, const Gate& g, const std::vector<Label>& in_labels,
                const std::vector<Label>& out_labels);

}  // namespace qimg
