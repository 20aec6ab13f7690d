#pragma once

#include "qimg/circuit.hpp"
#include "qimg/gates.hpp"
#include "qimg/tdd.hpp"

namespace qimg {

struct NetMember {
    Tdd tensor;
    size_t gate_index;  // position in the source circuit
};

// A circuit lowered to connected tensors. Wire labels are {qubit, layer} with
// layers counted from 1 at the input; a qubit without any non-diagonal gate
// keeps one label, so its input and output coincide.
struct TensorNet {
    int n = 0;
    std::vector<NetMember> members;
    std::vector<Label> inputs;   // per qubit: {q, 1}
    std::vector<Label> outputs;  // per qubit: {q, last layer}
};

TensorNet circuit_to_network(TddEngine& eng, const Circuit& c);

// Graph over the network's (merged) index labels. Each gate forms a clique
// over its distinct labels and contributes |labels|-1 to each one's degree;
// parallel contributions from different gates accumulate.
struct IndexGraph {
    std::vector<Label> vertices;  // sorted
    std::unordered_map<Label, int, LabelHash> degree;
};

IndexGraph index_graph(const TensorNet& net);

// Contract the parts left to right. An index is summed out in the step that
// absorbs its last holder, unless listed in `keep`; an index shared by three
// or more parts is matched point-wise until that step. Every index outside
// `keep` must be held by at least two parts.
Tdd fold_network(TddEngine& eng, const std::vector<Tdd>& parts, const std::vector<Label>& keep);

}  // namespace qimg
