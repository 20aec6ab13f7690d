#include "qimg/network.hpp"

#include <set>

namespace qimg {

TensorNet circuit_to_network(TddEngine& eng, const Circuit& c) {
    validate_circuit(c);
    TensorNet net;
    net.n = c.n;
    std::vector<int32_t> layer(c.n, 1);
    for (size_t gi = 0; gi < c.gates.size(); ++gi) {
        const Gate& g = c.gates[gi];
        std::vector<bool> merged = merged_qubits(g);
        std::vector<Label> ins, outs;
        for (size_t i = 0; i < g.qubits.size(); ++i) {
            int q = g.qubits[i];
            Label in{q, layer[q]};
            Label out = in;
            if (!merged[i]) out = Label{q, ++layer[q]};
            ins.push_back(in);
            outs.push_back(out);
        }
        net.members.push_back({gate_tensor(eng, g, ins, outs), gi});
    }
    for (int q = 0; q < c.n; ++q) {
        net.inputs.push_back(Label{q, 1});
        net.outputs.push_back(Label{q, layer[q]});
    }
    return net;
}

IndexGraph index_graph(const TensorNet& net) {
    IndexGraph g;
    std::set<Label> verts;
    for (const auto& m : net.members) {
        const auto& labels = m.tensor.indices();
        for (Label l : labels) {
            verts.insert(l);
            g.degree[l] += static_cast<int>(labels.size()) - 1;
        }
    }
    for (Label l : net.inputs) verts.insert(l);
    for (Label l : net.outputs) verts.insert(l);
    for (Label l : verts) g.degree.emplace(l, 0);
    g.vertices.assign(verts.begin(), verts.end());
    return g;
}

Tdd fold_network(TddEngine& eng, const std::vector<Tdd>& parts, const std::vector<Label>& keep) {
    if (parts.empty()) return eng.scalar(Complex{1.0, 0.0});
    // remaining[l] = parts still to absorb that hold l, plus one if kept.
    std::unordered_map<Label, int, LabelHash> remaining;
    for (const Tdd& p : parts)
        for (Label l : p.indices()) ++remaining[l];
    for (Label l : keep) ++remaining[l];
    Tdd acc = parts[0];
    for (Label l : acc.indices()) --remaining[l];
    for (size_t i = 1; i < parts.size(); ++i) {
        const Tdd& m = parts[i];
        for (Label l : m.indices()) --remaining[l];
        std::vector<Label> sum;
        for (Label l : m.indices())
            if (remaining[l] == 0 && acc.has_index(l)) sum.push_back(l);
        acc = eng.contract(acc, m, sum);
    }
    for (Label l : acc.indices())
        if (remaining[l] == 0)
            throw PreconditionError("fold_network: index " + l.name() +
                                    " has a single holder and is not kept");
    return acc;
}

}  // namespace qimg
