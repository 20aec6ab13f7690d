#include "qimg/gates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qimg {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// 2x2 matrices indexed [out][in].
constexpr Complex kX[2][2] = {{{0, 0}, {1, 0}}, {{1, 0}, {0, 0}}};
constexpr Complex kY[2][2] = {{{0, 0}, {0, -1}}, {{0, 1}, {0, 0}}};

Complex single_entry(GateKind k, double theta, int out, int in) {
    switch (k) {
        case GateKind::H:
            return Complex{(out && in) ? -kInvSqrt2 : kInvSqrt2, 0.0};
        case GateKind::X:
            return kX[out][in];
        case GateKind::Y:
            return kY[out][in];
        case GateKind::Z:
            return Complex{out != in ? 0.0 : (out ? -1.0 : 1.0), 0.0};
        case GateKind::S:
            if (out != in) return {};
            return out ? Complex{0.0, 1.0} : Complex{1.0, 0.0};
        case GateKind::T:
            if (out != in) return {};
            return out ? std::polar(1.0, std::numbers::pi / 4.0) : Complex{1.0, 0.0};
        case GateKind::Rz:
            if (out != in) return {};
            return std::polar(1.0, out ? theta / 2.0 : -theta / 2.0);
        default:
            throw Error("not a single-qubit kind");
    }
}

}  // namespace

std::vector<bool> merged_qubits(const Gate& g) {
    size_t k = g.qubits.size();
    switch (g.kind) {
        case GateKind::Z:
        case GateKind::S:
        case GateKind::T:
        case GateKind::Rz:
        case GateKind::Cz:
        case GateKind::Cp:
        case GateKind::Proj:
            return std::vector<bool>(k, true);
        case GateKind::Cx:
        case GateKind::Ccx:
        case GateKind::Mcx: {
            std::vector<bool> m(k, true);
            m.back() = false;  // target
            return m;
        }
        default:
            return std::vector<bool>(k, false);
    }
}

Complex gate_entry(const Gate& g, uint64_t out, uint64_t in) {
    size_t k = g.qubits.size();
    Complex v;
    switch (g.kind) {
        case GateKind::H:
        case GateKind::X:
        case GateKind::Y:
        case GateKind::Z:
        case GateKind::S:
        case GateKind::T:
        case GateKind::Rz:
            v = single_entry(g.kind, g.theta, static_cast<int>(out), static_cast<int>(in));
            break;
        case GateKind::Cz:
            v = Complex{out != in ? 0.0 : (in == 3 ? -1.0 : 1.0), 0.0};
            break;
        case GateKind::Cp:
            if (out != in)
                v = {};
            else
                v = in == 3 ? std::polar(1.0, g.theta) : Complex{1.0, 0.0};
            break;
        case GateKind::Cx:
        case GateKind::Ccx:
        case GateKind::Mcx: {
            // Controls are the high bits (qubits[0..k-2]), target the lowest.
            uint64_t cmask = ((uint64_t{1} << (k - 1)) - 1) << 1;
            bool fire = (in & cmask) == cmask;
            uint64_t want = fire ? (in ^ 1) : in;
            v = Complex{out == want ? 1.0 : 0.0, 0.0};
            break;
        }
        case GateKind::Swap: {
            uint64_t want = ((in & 1) << 1) | ((in >> 1) & 1);
            v = Complex{out == want ? 1.0 : 0.0, 0.0};
            break;
        }
        case GateKind::Proj: {
            uint64_t pat = 0;
            for (char c : g.bits) pat = (pat << 1) | (c == '1');
            v = Complex{(out == in && in == pat) ? 1.0 : 0.0, 0.0};
            break;
        }
        case GateKind::Custom:
            v = g.matrix[(out << k) | in];
            break;
        default:
            throw Error("unknown gate kind");
    }
    return g.scale == 1.0 ? v : v * g.scale;
}

Tdd gate_tensor(TddEngine& eng, const Gate& g, const std::vector<Label>& in_labels,
                const std::vector<Label>& out_labels) {
    size_t k = g.qubits.size();
    if (in_labels.size() != k || out_labels.size() != k)
        throw ShapeError("gate_tensor: one label pair per qubit");
    std::vector<bool> merged = merged_qubits(g);
    for (size_t i = 0; i < k; ++i)
        if (merged[i] != (in_labels[i] == out_labels[i]))
            throw ShapeError("gate_tensor: label merging disagrees with the gate kind");

    // Distinct labels in slot order: merged slots contribute one index,
    // the rest contribute (in, out).
    std::vector<Label> labels;
    for (size_t i = 0; i < k; ++i) {
        labels.push_back(in_labels[i]);
        if (!merged[i]) labels.push_back(out_labels[i]);
    }
    std::vector<Complex> entries(size_t{1} << labels.size());
    for (size_t a = 0; a < entries.size(); ++a) {
        uint64_t in = 0, out = 0;
        size_t pos = labels.size();
        for (size_t i = 0; i < k; ++i) {
            --pos;
            uint64_t ib = (a >> pos) & 1;
            uint64_t ob = ib;
            if (!merged[i]) {
                --pos;
                ob = (a >> pos) & 1;
            }
            in = (in << 1) | ib;
            out = (out << 1) | ob;
        }
        entries[a] = gate_entry(g, out, in);
    }
    return eng.from_dense(entries, labels);
}

}  // namespace qimg
