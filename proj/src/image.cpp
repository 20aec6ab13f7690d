#include "qimg/image.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace qimg {

namespace {

using LabelSet = std::unordered_set<Label, LabelHash>;

// The input indices the image contraction sums over. A qubit whose input and
// output coincide is diagonal there; that shared index must stay open and be
// matched point-wise instead.
std::vector<Label> summed_inputs(const TensorNet& net) {
    std::vector<Label> sum;
    for (int q = 0; q < net.n; ++q)
        if (!(net.inputs[q] == net.outputs[q])) sum.push_back(net.inputs[q]);
    return sum;
}

// Moves a contraction result living on the network's output labels back onto
// the state layer so it can be joined and fed into the next step.
Tdd outputs_to_states(TddEngine& eng, const std::vector<Label>& outputs, const Tdd& t) {
    Relabeling map;
    map.reserve(outputs.size());
    for (size_t q = 0; q < outputs.size(); ++q)
        map.push_back({outputs[q], state_label(static_cast<int>(q))});
    return eng.relabel(t, map);
}

// Slice every part that holds one of the plan's labels at the bits encoded in
// `assignment`. The state is included: a sliced index may well be an input.
std::vector<Tdd> sliced_parts(TddEngine& eng, const Tdd& psi, const std::vector<Tdd>& members,
                              const std::vector<Label>& sliced, uint32_t assignment) {
    std::vector<Tdd> parts;
    parts.reserve(members.size() + 1);
    parts.push_back(psi);
    for (const Tdd& m : members) parts.push_back(m);
    for (Tdd& p : parts)
        for (size_t i = 0; i < sliced.size(); ++i)
            if (p.has_index(sliced[i])) p = eng.slice(p, sliced[i], (assignment >> i) & 1);
    return parts;
}

using Transform = std::function<Tdd(const Tdd&)>;

Transform basic_transform(TddEngine& eng, const TensorNet& net) {
    std::vector<Tdd> parts;
    parts.reserve(net.members.size());
    for (const NetMember& m : net.members) parts.push_back(m.tensor);
    std::vector<Label> keep;
    for (int q = 0; q < net.n; ++q) {
        keep.push_back(net.inputs[q]);
        if (!(net.outputs[q] == net.inputs[q])) keep.push_back(net.outputs[q]);
    }
    Tdd op = fold_network(eng, parts, keep);
    return [&eng, op, sum = summed_inputs(net), outs = net.outputs](const Tdd& psi) {
        return outputs_to_states(eng, outs, eng.contract(psi, op, sum));
    };
}

Transform addition_transform(TddEngine& eng, const TensorNet& net, int k, bool parallel) {
    PartitionPlan plan = plan_addition(net, k);
    std::vector<Tdd> members;
    members.reserve(net.members.size());
    for (const NetMember& m : net.members) members.push_back(m.tensor);
    return [&eng, members = std::move(members), sliced = std::move(plan.sliced),
            outs = net.outputs, parallel](const Tdd& psi) {
        const uint32_t nparts = uint32_t{1} << sliced.size();
        Tdd total = eng.zero(outs);
        if (!parallel || nparts == 1) {
            for (uint32_t a = 0; a < nparts; ++a)
                total = eng.add(total,
                                fold_network(eng, sliced_parts(eng, psi, members, sliced, a), outs));
            return outputs_to_states(eng, outs, total);
        }
        // Parallel folds: per-part worker engines over parts sliced up front;
        // the main engine is only read (import) while the workers run.
        std::vector<std::vector<Tdd>> inputs(nparts);
        for (uint32_t a = 0; a < nparts; ++a)
            inputs[a] = sliced_parts(eng, psi, members, sliced, a);
        std::vector<std::unique_ptr<TddEngine>> workers(nparts);
        {
            std::vector<Tdd> results(nparts);
            std::vector<std::exception_ptr> errors(nparts);
            std::vector<std::thread> threads;
            threads.reserve(nparts);
            for (uint32_t a = 0; a < nparts; ++a) {
                workers[a] = std::make_unique<TddEngine>();
                workers[a]->set_deadline(eng.deadline());
                threads.emplace_back([&, a] {
                    try {
                        std::vector<Tdd> local;
                        local.reserve(inputs[a].size());
                        for (const Tdd& p : inputs[a]) local.push_back(workers[a]->import(p));
                        results[a] = fold_network(*workers[a], local, outs);
                    } catch (...) {
                        errors[a] = std::current_exception();
                    }
                });
            }
            for (auto& t : threads) t.join();
            for (auto& e : errors)
                if (e) std::rethrow_exception(e);
            for (uint32_t a = 0; a < nparts; ++a) total = eng.add(total, eng.import(results[a]));
            // worker-owned handles die here, before their engines do
        }
        return outputs_to_states(eng, outs, total);
    };
}

Transform contraction_transform(TddEngine& eng, const TensorNet& net, const Circuit& c, int k1,
                                int k2) {
    PartitionPlan plan = plan_contraction(c, k1, k2);

    std::vector<const Tdd*> by_gate(c.gates.size(), nullptr);
    for (const NetMember& m : net.members) by_gate[m.gate_index] = &m.tensor;
    std::unordered_map<Label, int, LabelHash> holders;
    for (const NetMember& m : net.members)
        for (Label l : m.tensor.indices()) ++holders[l];
    LabelSet endpoints(net.inputs.begin(), net.inputs.end());
    endpoints.insert(net.outputs.begin(), net.outputs.end());

    // Column-major sweep order: time first, then ascending band.
    std::vector<const PartitionPlan::Block*> order;
    for (const auto& b : plan.blocks)
        if (!b.gates.empty()) order.push_back(&b);
    std::stable_sort(order.begin(), order.end(),
                     [](const PartitionPlan::Block* a, const PartitionPlan::Block* b) {
                         if (a->column != b->column) return a->column < b->column;
                         if (a->band != b->band) return a->band < b->band;
                         return a->gates.front() < b->gates.front();
                     });

    std::vector<Tdd> blocks;
    blocks.reserve(order.size());
    for (const PartitionPlan::Block* b : order) {
        if (b->gates.size() == 1) {
            blocks.push_back(*by_gate[b->gates.front()]);
            continue;
        }
        std::vector<Tdd> parts;
        parts.reserve(b->gates.size());
        std::unordered_map<Label, int, LabelHash> inside;
        for (size_t g : b->gates) {
            parts.push_back(*by_gate[g]);
            for (Label l : parts.back().indices()) ++inside[l];
        }
        std::vector<Label> keep;
        for (const auto& [l, cnt] : inside)
            if (cnt < holders[l] || endpoints.count(l)) keep.push_back(l);
        blocks.push_back(fold_network(eng, parts, keep));
    }

    return [&eng, blocks = std::move(blocks), outs = net.outputs](const Tdd& psi) {
        std::vector<Tdd> parts;
        parts.reserve(blocks.size() + 1);
        parts.push_back(psi);
        for (const Tdd& b : blocks) parts.push_back(b);
        return outputs_to_states(eng, outs, fold_network(eng, parts, outs));
    };
}

Transform make_transform(TddEngine& eng, const TensorNet& net, const Circuit& c,
                         const Method& m) {
    switch (m.kind) {
        case MethodKind::Basic: return basic_transform(eng, net);
        case MethodKind::Addition: return addition_transform(eng, net, m.k, m.parallel);
        case MethodKind::Contraction: return contraction_transform(eng, net, c, m.k1, m.k2);
    }
    throw ParamError("unknown image method");
}

ImageResult run_image(TddEngine& eng, const QuantumTransitionSystem& sys, const Subspace& s,
                      const Method& m) {
    if (s.n != sys.n) throw ShapeError("subspace is over a different qubit count than the system");
    if (m.kind == MethodKind::Addition && m.k < 0)
        throw ParamError("addition partition needs k >= 0");
    if (m.kind == MethodKind::Contraction && (m.k1 < 1 || m.k2 < 1))
        throw ParamError("contraction partition needs k1 >= 1 and k2 >= 1");
    auto t0 = std::chrono::steady_clock::now();
    eng.clear_caches();
    eng.reset_peak();
    ImageResult r;
    r.subspace = empty_subspace(eng, sys.n);
    const size_t full = sys.n < 63 ? size_t{1} << sys.n : static_cast<size_t>(-1);
    bool done = s.basis.empty();
    for (const std::string& sym : sys.symbols) {
        size_t count = 0;
        for (const Circuit& c : sys.operations.at(sym)) {
            if (done) break;
            TensorNet net = circuit_to_network(eng, c);
            Transform transform = make_transform(eng, net, c, m);
            for (const Tdd& psi : s.basis) {
                Tdd phi = transform(psi);
                ++count;
                join_state(eng, r.subspace, phi);
                if (r.subspace.dim() >= full) {
                    done = true;
                    break;
                }
            }
        }
        r.stats.contractions.push_back({sym, count});
    }
    r.stats.elapsed_secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.stats.peak_nodes = std::max<size_t>(1, eng.stats().peak_nodes);
    return r;
}

}  // namespace

PartitionPlan plan_addition(const TensorNet& net, int k) {
    if (k < 0) throw ParamError("addition partition needs k >= 0");
    IndexGraph g = index_graph(net);
    LabelSet open(net.outputs.begin(), net.outputs.end());
    std::vector<Label> eligible;
    for (Label l : g.vertices)
        if (!open.count(l)) eligible.push_back(l);
    std::sort(eligible.begin(), eligible.end(), [&](Label a, Label b) {
        int da = g.degree.at(a), db = g.degree.at(b);
        if (da != db) return da > db;
        return a < b;
    });
    PartitionPlan plan;
    plan.variant = PartitionPlan::Variant::Addition;
    size_t take = std::min<size_t>(static_cast<size_t>(k), eligible.size());
    plan.sliced.assign(eligible.begin(), eligible.begin() + take);
    plan.k = static_cast<int>(take);
    return plan;
}

PartitionPlan plan_contraction(const Circuit& c, int k1, int k2) {
    if (k1 < 1 || k2 < 1) throw ParamError("contraction partition needs k1 >= 1 and k2 >= 1");
    PartitionPlan plan;
    plan.variant = PartitionPlan::Variant::Contraction;
    plan.k1 = k1;
    plan.k2 = k2;
    plan.bands = (c.n + k1 - 1) / k1;

    std::vector<PartitionPlan::Block> straddlers;
    // cells[band][column], grown as columns appear
    std::vector<std::vector<std::vector<size_t>>> cells(plan.bands);
    int column = 0, crossing = 0;
    auto ensure_column = [&](int col) {
        for (auto& row : cells)
            if (static_cast<int>(row.size()) <= col) row.resize(col + 1);
    };
    ensure_column(0);
    for (size_t i = 0; i < c.gates.size(); ++i) {
        const Gate& g = c.gates[i];
        auto [lo, hi] = std::minmax_element(g.qubits.begin(), g.qubits.end());
        int band_lo = *lo / k1, band_hi = *hi / k1;
        if (band_lo != band_hi) {
            if (crossing == k2) {
                ++column;
                crossing = 0;
                ensure_column(column);
            }
            ++crossing;
            PartitionPlan::Block b;
            b.gates = {i};
            b.band = band_lo;
            b.column = column;
            b.straddling = true;
            straddlers.push_back(std::move(b));
        } else {
            cells[band_lo][column].push_back(i);
        }
    }
    plan.columns = column + 1;
    for (int band = 0; band < plan.bands; ++band)
        for (int col = 0; col < plan.columns; ++col) {
            PartitionPlan::Block b;
            b.gates = std::move(cells[band][col]);
            b.band = band;
            b.column = col;
            plan.blocks.push_back(std::move(b));
        }
    for (auto& b : straddlers) plan.blocks.push_back(std::move(b));
    return plan;
}

ImageResult basic_image(TddEngine& eng, const QuantumTransitionSystem& sys, const Subspace& s) {
    return run_image(eng, sys, s, Method{MethodKind::Basic, 0, 0, 0, false});
}

ImageResult addition_image(TddEngine& eng, const QuantumTransitionSystem& sys, const Subspace& s,
                           int k, bool parallel) {
    Method m;
    m.kind = MethodKind::Addition;
    m.k = k;
    m.parallel = parallel;
    return run_image(eng, sys, s, m);
}

ImageResult contraction_image(TddEngine& eng, const QuantumTransitionSystem& sys,
                              const Subspace& s, int k1, int k2) {
    Method m;
    m.kind = MethodKind::Contraction;
    m.k1 = k1;
    m.k2 = k2;
    return run_image(eng, sys, s, m);
}

ImageResult image(TddEngine& eng, const QuantumTransitionSystem& sys, const Subspace& s,
                  const Method& m) {
    return run_image(eng, sys, s, m);
}

ReachResult reachable(TddEngine& eng, const QuantumTransitionSystem& sys, const Subspace& start,
                      const Method& m, int max_iters) {
    if (max_iters < 1) throw ParamError("reachability needs at least one iteration");
    if (start.n != sys.n)
        throw ShapeError("start subspace is over a different qubit count than the system");
    auto t0 = std::chrono::steady_clock::now();
    ReachResult r;
    r.stats.peak_nodes = 1;
    Subspace s = start;
    const size_t full = sys.n < 63 ? size_t{1} << sys.n : static_cast<size_t>(-1);
    while (r.iterations < max_iters) {
        ++r.iterations;
        ImageResult step = image(eng, sys, s, m);
        Subspace next = join(eng, s, step.subspace);
        // engine peak currently covers this image call plus the join
        r.stats.peak_nodes = std::max(
            {r.stats.peak_nodes, step.stats.peak_nodes, eng.stats().peak_nodes});
        if (r.stats.contractions.empty()) {
            r.stats.contractions = step.stats.contractions;
        } else {
            for (size_t i = 0; i < step.stats.contractions.size(); ++i)
                r.stats.contractions[i].second += step.stats.contractions[i].second;
        }
        if (equal_subspace(eng, next, s)) {
            s = std::move(next);
            r.converged = true;
            break;
        }
        s = std::move(next);
        if (s.dim() >= full) {
            r.converged = true;
            break;
        }
        eng.sweep();
    }
    r.subspace = std::move(s);
    r.stats.elapsed_secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace qimg
