#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace qimg {

// A binary tensor index q<qubit>^<layer>. The engine's global order is
// lexicographic (qubit, layer): all of one qubit's wire segments sit next to
// each other, which is what keeps state and local-operator Tdds narrow.
//
// Conventions used throughout:
//   layer 1          canonical state / operator-input label of a qubit
//   layer 2          canonical row label of projectors (bra side)
//   layers 1..m      wire segments of a lowered circuit, input first
struct Label {
    int32_t qubit = 0;
    int32_t layer = 0;

    friend auto operator<=>(const Label&, const Label&) = default;

    std::string name() const {
        return "q" + std::to_string(qubit) + "^" + std::to_string(layer);
    }
};

inline Label state_label(int qubit) { return {static_cast<int32_t>(qubit), 1}; }
inline Label row_label(int qubit) { return {static_cast<int32_t>(qubit), 2}; }

struct LabelHash {
    size_t operator()(const Label& l) const {
        uint64_t v = (static_cast<uint64_t>(static_cast<uint32_t>(l.qubit)) << 32) |
                     static_cast<uint32_t>(l.layer);
        return std::hash<uint64_t>{}(v);
    }
};

}  // namespace qimg
