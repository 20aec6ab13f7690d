#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qimg/circuit.hpp"
#include "qimg/network.hpp"
#include "qimg/subspace.hpp"
#include "qimg/tdd.hpp"

namespace qimg {

enum class MethodKind { Basic, Addition, Contraction };

// How an image computation splits each Kraus operator's tensor network.
struct Method {
    MethodKind kind = MethodKind::Basic;
    int k = 1;              // addition: indices to slice
    int k1 = 4, k2 = 4;     // contraction: band height, straddler budget per column
    bool parallel = false;  // addition only: fold the 2^k parts on worker engines
};

// Concrete partition of one circuit / network. Addition plans list the sliced
// index labels; contraction plans carry a bands x columns grid of blocks plus
// one standalone block per gate that crosses a horizontal cut.
struct PartitionPlan {
    enum class Variant { Basic, Addition, Contraction };

    struct Block {
        std::vector<size_t> gates;  // positions in the source circuit
        int band = 0;               // lowest band the block touches
        int column = 0;
        bool straddling = false;
    };

    Variant variant = Variant::Basic;
    std::vector<Label> sliced;  // addition: pairwise distinct graph vertices
    int k = 0;                  // number of sliced indices (2^k parts)
    std::vector<Block> blocks;  // contraction: grid cells first, then straddlers
    int k1 = 0, k2 = 0;
    int bands = 0, columns = 0;
};

struct ImageStats {
    double elapsed_secs = 0.0;
    size_t peak_nodes = 1;
    // Per symbol: number of (basis state, Kraus operator) contractions run.
    std::vector<std::pair<std::string, size_t>> contractions;
};

struct ImageResult {
    Subspace subspace;
    ImageStats stats;
};

struct ReachResult {
    Subspace subspace;
    int iterations = 0;
    bool converged = false;
    ImageStats stats;
};

// Picks the k highest-degree index-graph vertices (ties broken by ascending
// label) to slice, skipping the network's open output indices, which must
// stay un-pinned. k is clamped to the number of eligible vertices.
PartitionPlan plan_addition(const TensorNet& net, int k);

// Horizontal bands of k1 qubit rows; scanning gates in circuit order, a
// vertical cut opens a new column whenever a band-crossing multi-qubit gate
// arrives and the current column already has k2 of them. Band-crossing gates
// become standalone blocks; every grid cell is listed even when empty.
PartitionPlan plan_contraction(const Circuit& c, int k1, int k2);

// Image T(S) with each Kraus operator pre-contracted to one operator Tdd.
ImageResult basic_image(TddEngine& eng, const QuantumTransitionSystem& sys, const Subspace& s);

// Image via 2^k sliced copies of each Kraus network; the per-part results are
// summed before joining, so the subspace equals basic_image's.
ImageResult addition_image(TddEngine& eng, const QuantumTransitionSystem& sys, const Subspace& s,
                           int k, bool parallel = false);

// Image via the block grid of plan_contraction: blocks are pre-contracted
// once per Kraus operator, then folded with each basis state column-major.
ImageResult contraction_image(TddEngine& eng, const QuantumTransitionSystem& sys,
                              const Subspace& s, int k1, int k2);

// Dispatch on method; resets the engine peak so stats cover this call only.
ImageResult image(TddEngine& eng, const QuantumTransitionSystem& sys, const Subspace& s,
                  const Method& m);

// Least fixpoint of S -> S v T(S) from `start`, capped at max_iters rounds.
// The iteration count includes the final confirming round; `converged` is
// false when the cap struck first.
ReachResult reachable(TddEngine& eng, const QuantumTransitionSystem& sys, const Subspace& start,
                      const Method& m, int max_iters);

}  // namespace qimg
