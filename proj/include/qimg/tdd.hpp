#pragma once

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qimg/errors.hpp"
#include "qimg/label.hpp"

namespace qimg {

using Complex = std::complex<double>;

// Unique-table and cache keys quantize each weight component to buckets of
// width 1e-10; arithmetic itself stays plain double precision.
constexpr double kKeyQuantum = 1e-10;

// A weight component is mapped to a canonical double for keying: bucket index
// for ordinary magnitudes, a disjoint scaled range for huge ones (where bucket
// arithmetic would overflow and tolerance is meaningless anyway). Adding 0.0
// flushes -0.0 to +0.0 so both zeros key (and hash) identically.
inline double key_component(double x) {
    if (std::abs(x) < 4e8) return std::nearbyint(x / kKeyQuantum) + 0.0;
    return x * 1e20;
}

inline bool key_equal(Complex a, Complex b) {
    return key_component(a.real()) == key_component(b.real()) &&
           key_component(a.imag()) == key_component(b.imag());
}

inline bool key_zero(Complex w) {
    return key_component(w.real()) == 0.0 && key_component(w.imag()) == 0.0;
}

using NodeId = uint32_t;
constexpr NodeId kTerminal = 0;

// Weighted edge. Invariant: weight 0 if and only if the edge points at the
// terminal node and denotes the zero sub-tensor.
struct Edge {
    Complex w{0.0, 0.0};
    NodeId node = kTerminal;
};

inline bool edge_zero(const Edge& e) { return e.w == Complex{0.0, 0.0}; }

struct EngineStats {
    size_t current_nodes = 0;
    size_t peak_nodes = 0;
};

class TddEngine;

// Value handle for a reduced ordered Tdd: a root edge plus the sorted set of
// binary indices the tensor ranges over (indices skipped on a path contribute
// a factor 1). Copies are cheap; the root is protected against engine sweeps
// for the handle's lifetime.
class Tdd {
public:
    Tdd() = default;
    Tdd(TddEngine* eng, Edge root, std::vector<Label> indices);
    Tdd(const Tdd& o);
    Tdd(Tdd&& o) noexcept;
    Tdd& operator=(const Tdd& o);
    Tdd& operator=(Tdd&& o) noexcept;
    ~Tdd();

    TddEngine* engine() const { return eng_; }
    const Edge& root() const { return root_; }
    const std::vector<Label>& indices() const { return indices_; }
    int rank() const { return static_cast<int>(indices_.size()); }
    bool valid() const { return eng_ != nullptr; }
    bool is_zero() const { return edge_zero(root_); }
    bool has_index(Label l) const;

private:
    TddEngine* eng_ = nullptr;
    Edge root_{};
    std::vector<Label> indices_;
};

using Assignment = std::unordered_map<Label, int, LabelHash>;
using Relabeling = std::vector<std::pair<Label, Label>>;

// Owns the unique table, the operation caches and the statistics counters.
// Single writer: all mutating calls must come from one thread at a time;
// concurrent computations use one engine each and move results across with
// import(). sweep() may only run between top-level operations (intermediate
// edges inside a running operation are not protected).
class TddEngine {
public:
    TddEngine();
    TddEngine(const TddEngine&) = delete;
    TddEngine& operator=(const TddEngine&) = delete;

    // --- node level ----------------------------------------------------
    // Normalizes, applies the reduction rules and hash-conses. Children must
    // sit strictly below idx in the global order.
    Edge make_node(Label idx, Edge lo, Edge hi);

    Label node_label(NodeId n) const;
    Edge node_edge(NodeId n, int which) const;

    // --- Tdd level -----------------------------------------------------
    Tdd make(Edge root, std::vector<Label> indices);
    Tdd zero(std::vector<Label> indices);
    Tdd scalar(Complex c);

    // Element-wise sum; index sets must coincide.
    Tdd add(const Tdd& a, const Tdd& b);
    // Tensor contraction: labels in `sum` (must occur in both operands) are
    // summed over; labels shared but not summed are matched point-wise and
    // stay open; the rest pass through.
    Tdd contract(const Tdd& a, const Tdd& b, const std::vector<Label>& sum);
    Tdd slice(const Tdd& a, Label x, int bit);
    Complex evaluate(const Tdd& a, const Assignment& assign) const;
    Tdd conj(const Tdd& a);
    // Bijective index renaming; handles order-changing maps by rebuilding.
    Tdd relabel(const Tdd& a, const Relabeling& map);
    // conj + relabel.
    Tdd adjoint(const Tdd& a, const Relabeling& map);
    Complex inner_product(const Tdd& a, const Tdd& b);
    double norm(const Tdd& a);
    Tdd scalar_mul(Complex c, const Tdd& a);
    // Entries in lexicographic order of the index set sorted by the global
    // order; rank capped at 22.
    std::vector<Complex> to_dense(const Tdd& a) const;
    // `labels` gives the bit significance of `entries` (first label = most
    // significant); any label order is accepted and permuted internally.
    Tdd from_dense(std::span<const Complex> entries, const std::vector<Label>& labels);
    double max_abs(const Tdd& a) const;
    // Rebuild a Tdd that lives in another engine inside this one.
    Tdd import(const Tdd& a);

    // --- memory & stats --------------------------------------------------
    EngineStats stats() const { return {live_, peak_}; }
    void reset_peak() { peak_ = live_; }
    // Mark-and-sweep from the protected roots; clears the operation caches.
    void sweep();
    void clear_caches();
    size_t unique_size() const { return live_; }

    void set_deadline(std::optional<std::chrono::steady_clock::time_point> d);
    std::optional<std::chrono::steady_clock::time_point> deadline() const { return deadline_; }

    // Root protection, used by the Tdd handle.
    void protect(NodeId n);
    void unprotect(NodeId n);

private:
    friend class Tdd;

    struct Node {
        Label label;
        Edge lo, hi;
    };

    struct NodeKey {
        Label label;
        NodeId lo, hi;
        double klo_re, klo_im, khi_re, khi_im;
        bool operator==(const NodeKey&) const = default;
    };
    struct NodeKeyHash {
        size_t operator()(const NodeKey& k) const;
    };

    struct EdgePairKey {
        NodeId a, b;
        double kre, kim;
        bool operator==(const EdgePairKey&) const = default;
    };
    struct EdgePairKeyHash {
        size_t operator()(const EdgePairKey& k) const;
    };

    struct SliceKey {
        NodeId n;
        Label x;
        int bit;
        bool operator==(const SliceKey&) const = default;
    };
    struct SliceKeyHash {
        size_t operator()(const SliceKey& k) const;
    };

    enum class ItemClass { AOnly, BOnly, Diag, Sum };
    struct WorkItem {
        Label label;
        ItemClass cls;
    };

    struct ContractKey {
        NodeId a, b;
        uint32_t pos;
        bool operator==(const ContractKey&) const = default;
    };
    struct ContractKeyHash {
        size_t operator()(const ContractKey& k) const;
    };

    Label level(NodeId n) const;
    void check_deadline();
    Edge add_rec(Edge a, Edge b);
    Edge contract_rec(Edge a, Edge b, size_t pos, const std::vector<WorkItem>& items,
                      std::unordered_map<ContractKey, Edge, ContractKeyHash>& memo);
    Edge slice_rec(Edge e, Label x, int bit);
    Edge conj_rec(NodeId n, std::unordered_map<NodeId, Edge>& memo);
    Edge reorder_rec(Edge e, size_t pos, const std::vector<Label>& target,
                     const std::vector<Label>& source);
    Edge from_dense_rec(std::span<const Complex> entries, const std::vector<Label>& sorted,
                        const std::vector<size_t>& strides, size_t pos, size_t addr);
    Edge import_rec(const TddEngine& src, Edge e, std::unordered_map<NodeId, Edge>& memo);
    void to_dense_rec(Edge e, size_t pos, size_t addr, const std::vector<Label>& sorted,
                      std::vector<Complex>& out) const;
    double max_abs_rec(NodeId n, std::unordered_map<NodeId, double>& memo) const;

    std::vector<Node> nodes_;
    std::vector<NodeId> free_;
    std::unordered_map<NodeKey, NodeId, NodeKeyHash> unique_;
    std::unordered_map<EdgePairKey, Edge, EdgePairKeyHash> add_cache_;
    std::unordered_map<SliceKey, Edge, SliceKeyHash> slice_cache_;
    std::unordered_map<NodeId, uint32_t> roots_;
    size_t live_ = 0;
    size_t peak_ = 0;
    std::optional<std::chrono::steady_clock::time_point> deadline_;
    uint64_t deadline_counter_ = 0;
};

}  // namespace qimg
