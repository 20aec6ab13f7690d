#include "qimg/tdd.hpp"

#include <algorithm>
#include <bit>
#include <cassert>

namespace qimg {

namespace {

constexpr Label kTerminalLabel{INT32_MAX, INT32_MAX};

// Child weights this far below their sibling (relative) denote a zero
// sub-tensor: far above double cancellation residue (~1e-16 rel), far below
// any meaningful ratio in the workload.
constexpr double kSnapRel = 1e-12;

inline uint64_t mix(uint64_t h, uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

inline uint64_t dbits(double d) { return std::bit_cast<uint64_t>(d); }

}  // namespace

// ---------------------------------------------------------------------------
// Tdd handle

Tdd::Tdd(TddEngine* eng, Edge root, std::vector<Label> indices)
    : eng_(eng), root_(root), indices_(std::move(indices)) {
    if (eng_) eng_->protect(root_.node);
}

Tdd::Tdd(const Tdd& o) : eng_(o.eng_), root_(o.root_), indices_(o.indices_) {
    if (eng_) eng_->protect(root_.node);
}

Tdd::Tdd(Tdd&& o) noexcept : eng_(o.eng_), root_(o.root_), indices_(std::move(o.indices_)) {
    o.eng_ = nullptr;
    o.root_ = Edge{};
}

Tdd& Tdd::operator=(const Tdd& o) {
    if (this == &o) return *this;
    if (o.eng_) o.eng_->protect(o.root_.node);
    if (eng_) eng_->unprotect(root_.node);
    eng_ = o.eng_;
    root_ = o.root_;
    indices_ = o.indices_;
    return *this;
}

Tdd& Tdd::operator=(Tdd&& o) noexcept {
    if (this == &o) return *this;
    if (eng_) eng_->unprotect(root_.node);
    eng_ = o.eng_;
    root_ = o.root_;
    indices_ = std::move(o.indices_);
    o.eng_ = nullptr;
    o.root_ = Edge{};
    return *this;
}

Tdd::~Tdd() {
    if (eng_) eng_->unprotect(root_.node);
}

bool Tdd::has_index(Label l) const {
    return std::binary_search(indices_.begin(), indices_.end(), l);
}

// ---------------------------------------------------------------------------
// Hashes

size_t TddEngine::NodeKeyHash::operator()(const NodeKey& k) const {
    uint64_t h = 0x243f6a8885a308d3ull;
    h = mix(h, (static_cast<uint64_t>(static_cast<uint32_t>(k.label.qubit)) << 32) |
                   static_cast<uint32_t>(k.label.layer));
    h = mix(h, k.lo);
    h = mix(h, k.hi);
    h = mix(h, dbits(k.klo_re));
    h = mix(h, dbits(k.klo_im));
    h = mix(h, dbits(k.khi_re));
    h = mix(h, dbits(k.khi_im));
    return static_cast<size_t>(h);
}

size_t TddEngine::EdgePairKeyHash::operator()(const EdgePairKey& k) const {
    uint64_t h = 0x13198a2e03707344ull;
    h = mix(h, k.a);
    h = mix(h, k.b);
    h = mix(h, dbits(k.kre));
    h = mix(h, dbits(k.kim));
    return static_cast<size_t>(h);
}

size_t TddEngine::SliceKeyHash::operator()(const SliceKey& k) const {
    uint64_t h = 0xa4093822299f31d0ull;
    h = mix(h, k.n);
    h = mix(h, (static_cast<uint64_t>(static_cast<uint32_t>(k.x.qubit)) << 32) |
                   static_cast<uint32_t>(k.x.layer));
    h = mix(h, static_cast<uint64_t>(k.bit));
    return static_cast<size_t>(h);
}

size_t TddEngine::ContractKeyHash::operator()(const ContractKey& k) const {
    uint64_t h = 0x082efa98ec4e6c89ull;
    h = mix(h, k.a);
    h = mix(h, k.b);
    h = mix(h, k.pos);
    return static_cast<size_t>(h);
}

// ---------------------------------------------------------------------------
// Engine basics

TddEngine::TddEngine() {
    nodes_.push_back(Node{kTerminalLabel, Edge{}, Edge{}});  // slot 0 = terminal
}

Label TddEngine::level(NodeId n) const {
    return n == kTerminal ? kTerminalLabel : nodes_[n].label;
}

Label TddEngine::node_label(NodeId n) const { return level(n); }

Edge TddEngine::node_edge(NodeId n, int which) const {
    return which ? nodes_[n].hi : nodes_[n].lo;
}

void TddEngine::protect(NodeId n) {
    if (n == kTerminal) return;
    ++roots_[n];
}

void TddEngine::unprotect(NodeId n) {
    if (n == kTerminal) return;
    auto it = roots_.find(n);
    assert(it != roots_.end());
    if (--it->second == 0) roots_.erase(it);
}

void TddEngine::set_deadline(std::optional<std::chrono::steady_clock::time_point> d) {
    deadline_ = d;
    deadline_counter_ = 0;
}

void TddEngine::check_deadline() {
    if (!deadline_) return;
    if ((++deadline_counter_ & 0xfffull) != 0) return;
    if (std::chrono::steady_clock::now() > *deadline_) throw TimeoutError{};
}

void TddEngine::clear_caches() {
    add_cache_.clear();
    slice_cache_.clear();
}

void TddEngine::sweep() {
    clear_caches();
    std::vector<char> mark(nodes_.size(), 0);
    std::vector<NodeId> stack;
    stack.reserve(roots_.size());
    for (const auto& [n, cnt] : roots_) {
        if (!mark[n]) {
            mark[n] = 1;
            stack.push_back(n);
        }
    }
    while (!stack.empty()) {
        NodeId n = stack.back();
        stack.pop_back();
        for (const Edge* e : {&nodes_[n].lo, &nodes_[n].hi}) {
            if (e->node != kTerminal && !mark[e->node]) {
                mark[e->node] = 1;
                stack.push_back(e->node);
            }
        }
    }
    for (auto it = unique_.begin(); it != unique_.end();) {
        if (!mark[it->second]) {
            free_.push_back(it->second);
            it = unique_.erase(it);
        } else {
            ++it;
        }
    }
    live_ = unique_.size();
}

// ---------------------------------------------------------------------------
// make_node: snap, normalize, reduce, hash-cons

Edge TddEngine::make_node(Label idx, Edge lo, Edge hi) {
    check_deadline();
    if (lo.node != kTerminal && !(idx < nodes_[lo.node].label))
        throw ConstructionError("make_node: low child index not below node index");
    if (hi.node != kTerminal && !(idx < nodes_[hi.node].label))
        throw ConstructionError("make_node: high child index not below node index");
    if (lo.w == Complex{}) lo = Edge{};
    if (hi.w == Complex{}) hi = Edge{};
    double a0 = std::abs(lo.w), a1 = std::abs(hi.w);
    double m = std::max(a0, a1);
    if (m == 0.0) return Edge{};
    if (a0 <= kSnapRel * m) lo = Edge{};
    if (a1 <= kSnapRel * m) hi = Edge{};
    // Divide by the first non-zero outgoing weight in (low, high) order and
    // push it onto the incoming edge.
    Complex wn;
    Edge nlo, nhi;
    if (!edge_zero(lo)) {
        wn = lo.w;
        nlo = Edge{Complex{1.0, 0.0}, lo.node};
        nhi = edge_zero(hi) ? Edge{} : Edge{hi.w / wn, hi.node};
    } else {
        wn = hi.w;
        nlo = Edge{};
        nhi = Edge{Complex{1.0, 0.0}, hi.node};
    }
    if (!std::isfinite(nhi.w.real()) || !std::isfinite(nhi.w.imag()) ||
        !std::isfinite(wn.real()) || !std::isfinite(wn.imag()))
        throw ConstructionError("make_node: non-finite weight after normalization");
    if (nlo.node == nhi.node && key_equal(nlo.w, nhi.w)) return Edge{wn, nlo.node};
    NodeKey key{idx,
                nlo.node,
                nhi.node,
                key_component(nlo.w.real()),
                key_component(nlo.w.imag()),
                key_component(nhi.w.real()),
                key_component(nhi.w.imag())};
    if (auto it = unique_.find(key); it != unique_.end()) return Edge{wn, it->second};
    NodeId id;
    if (!free_.empty()) {
        id = free_.back();
        free_.pop_back();
        nodes_[id] = Node{idx, nlo, nhi};
    } else {
        id = static_cast<NodeId>(nodes_.size());
        nodes_.push_back(Node{idx, nlo, nhi});
    }
    unique_.emplace(key, id);
    ++live_;
    if (live_ > peak_) peak_ = live_;
    return Edge{wn, id};
}

// ---------------------------------------------------------------------------
// Tdd construction

Tdd TddEngine::make(Edge root, std::vector<Label> indices) {
    if (!std::is_sorted(indices.begin(), indices.end()) ||
        std::adjacent_find(indices.begin(), indices.end()) != indices.end())
        throw ShapeError("index list must be strictly increasing");
    return Tdd(this, root, std::move(indices));
}

Tdd TddEngine::zero(std::vector<Label> indices) { return make(Edge{}, std::move(indices)); }

Tdd TddEngine::scalar(Complex c) {
    return make(c == Complex{} ? Edge{} : Edge{c, kTerminal}, {});
}

// ---------------------------------------------------------------------------
// add

Edge TddEngine::add_rec(Edge a, Edge b) {
    if (edge_zero(a)) return b;
    if (edge_zero(b)) return a;
    if (a.node == b.node) {
        Complex w = a.w + b.w;
        if (w == Complex{}) return Edge{};
        return Edge{w, a.node};
    }
    if (a.node > b.node) std::swap(a, b);
    Complex ratio = b.w / a.w;
    EdgePairKey key{a.node, b.node, key_component(ratio.real()), key_component(ratio.imag())};
    bool cacheable = std::isfinite(key.kre) && std::isfinite(key.kim);
    if (cacheable) {
        if (auto it = add_cache_.find(key); it != add_cache_.end())
            return Edge{it->second.w * a.w, it->second.node};
    }
    Label la = level(a.node), lb = level(b.node);
    Label top = std::min(la, lb);
    Edge r[2];
    for (int c = 0; c < 2; ++c) {
        Edge ac, bc;
        if (la == top) {
            const Edge& ch = c ? nodes_[a.node].hi : nodes_[a.node].lo;
            ac = edge_zero(ch) ? Edge{} : Edge{ch.w, ch.node};
        } else {
            ac = Edge{Complex{1.0, 0.0}, a.node};
        }
        if (lb == top) {
            const Edge& ch = c ? nodes_[b.node].hi : nodes_[b.node].lo;
            bc = edge_zero(ch) ? Edge{} : Edge{ratio * ch.w, ch.node};
        } else {
            bc = Edge{ratio, b.node};
        }
        r[c] = add_rec(ac, bc);
    }
    Edge res = make_node(top, r[0], r[1]);
    if (cacheable) add_cache_.emplace(key, res);
    return Edge{res.w * a.w, res.node};
}

Tdd TddEngine::add(const Tdd& a, const Tdd& b) {
    if (a.engine() != this || b.engine() != this) throw ShapeError("add: foreign engine");
    if (a.indices() != b.indices()) throw ShapeError("add: index sets differ");
    return make(add_rec(a.root(), b.root()), a.indices());
}

// ---------------------------------------------------------------------------
// contract

Edge TddEngine::contract_rec(Edge ea, Edge eb, size_t pos, const std::vector<WorkItem>& items,
                             std::unordered_map<ContractKey, Edge, ContractKeyHash>& memo) {
    if (edge_zero(ea) || edge_zero(eb)) return Edge{};
    Complex w = ea.w * eb.w;
    if (pos == items.size()) {
        assert(ea.node == kTerminal && eb.node == kTerminal);
        return Edge{w, kTerminal};
    }
    check_deadline();
    ContractKey key{ea.node, eb.node, static_cast<uint32_t>(pos)};
    if (auto it = memo.find(key); it != memo.end())
        return Edge{it->second.w * w, it->second.node};
    const WorkItem& item = items[pos];
    bool branch_a = level(ea.node) == item.label;
    bool branch_b = level(eb.node) == item.label;
    Edge res;
    if (!branch_a && !branch_b && item.cls != ItemClass::Sum) {
        res = contract_rec(Edge{Complex{1.0, 0.0}, ea.node}, Edge{Complex{1.0, 0.0}, eb.node},
                           pos + 1, items, memo);
    } else {
        Edge r[2];
        for (int c = 0; c < 2; ++c) {
            Edge ac = branch_a ? (c ? nodes_[ea.node].hi : nodes_[ea.node].lo)
                               : Edge{Complex{1.0, 0.0}, ea.node};
            Edge bc = branch_b ? (c ? nodes_[eb.node].hi : nodes_[eb.node].lo)
                               : Edge{Complex{1.0, 0.0}, eb.node};
            r[c] = contract_rec(ac, bc, pos + 1, items, memo);
        }
        if (item.cls == ItemClass::Sum)
            res = add_rec(r[0], r[1]);
        else
            res = make_node(item.label, r[0], r[1]);
    }
    memo.emplace(key, res);
    return Edge{res.w * w, res.node};
}

Tdd TddEngine::contract(const Tdd& a, const Tdd& b, const std::vector<Label>& sum) {
    if (a.engine() != this || b.engine() != this) throw ShapeError("contract: foreign engine");
    std::vector<Label> sumset(sum);
    std::sort(sumset.begin(), sumset.end());
    for (Label l : sumset)
        if (!a.has_index(l) || !b.has_index(l))
            throw ShapeError("contract: summed index " + l.name() + " missing from an operand");
    std::vector<WorkItem> items;
    std::vector<Label> out;
    items.reserve(a.indices().size() + b.indices().size());
    size_t i = 0, j = 0;
    const auto& ia = a.indices();
    const auto& ib = b.indices();
    while (i < ia.size() || j < ib.size()) {
        bool take_a = j == ib.size() || (i < ia.size() && ia[i] <= ib[j]);
        bool take_b = i == ia.size() || (j < ib.size() && ib[j] <= ia[i]);
        Label l = take_a ? ia[i] : ib[j];
        ItemClass cls;
        if (take_a && take_b)
            cls = std::binary_search(sumset.begin(), sumset.end(), l) ? ItemClass::Sum
                                                                      : ItemClass::Diag;
        else
            cls = take_a ? ItemClass::AOnly : ItemClass::BOnly;
        items.push_back({l, cls});
        if (cls != ItemClass::Sum) out.push_back(l);
        i += take_a;
        j += take_b;
    }
    std::unordered_map<ContractKey, Edge, ContractKeyHash> memo;
    Edge r = contract_rec(a.root(), b.root(), 0, items, memo);
    return make(r, std::move(out));
}

// ---------------------------------------------------------------------------
// slice

Edge TddEngine::slice_rec(Edge e, Label x, int bit) {
    if (edge_zero(e)) return e;
    Label le = level(e.node);
    if (x < le) return e;  // sub-tensor does not depend on x
    Node nd = nodes_[e.node];  // by value: make_node below may reallocate nodes_
    if (le == x) {
        const Edge& ch = bit ? nd.hi : nd.lo;
        if (edge_zero(ch)) return Edge{};
        return Edge{e.w * ch.w, ch.node};
    }
    SliceKey key{e.node, x, bit};
    Edge res;
    if (auto it = slice_cache_.find(key); it != slice_cache_.end()) {
        res = it->second;
    } else {
        res = make_node(nd.label, slice_rec(nd.lo, x, bit), slice_rec(nd.hi, x, bit));
        slice_cache_.emplace(key, res);
    }
    return Edge{res.w * e.w, res.node};
}

Tdd TddEngine::slice(const Tdd& a, Label x, int bit) {
    if (a.engine() != this) throw ShapeError("slice: foreign engine");
    if (!a.has_index(x)) throw ShapeError("slice: index " + x.name() + " not present");
    if (bit != 0 && bit != 1) throw ShapeError("slice: bit must be 0 or 1");
    std::vector<Label> out;
    out.reserve(a.indices().size() - 1);
    for (Label l : a.indices())
        if (l != x) out.push_back(l);
    return make(slice_rec(a.root(), x, bit), std::move(out));
}

// ---------------------------------------------------------------------------
// evaluate

Complex TddEngine::evaluate(const Tdd& a, const Assignment& assign) const {
    if (a.engine() != this) throw ShapeError("evaluate: foreign engine");
    Complex v = a.root().w;
    NodeId n = a.root().node;
    for (Label l : a.indices()) {
        auto it = assign.find(l);
        if (it == assign.end()) throw ShapeError("evaluate: no value for index " + l.name());
        if (it->second != 0 && it->second != 1) throw ShapeError("evaluate: values must be bits");
        if (n != kTerminal && nodes_[n].label == l) {
            const Edge& e = it->second ? nodes_[n].hi : nodes_[n].lo;
            v *= e.w;
            n = e.node;
            if (v == Complex{}) return Complex{};
        }
    }
    assert(n == kTerminal);
    return v;
}

// ---------------------------------------------------------------------------
// conj / relabel / adjoint

Edge TddEngine::conj_rec(NodeId n, std::unordered_map<NodeId, Edge>& memo) {
    if (n == kTerminal) return Edge{Complex{1.0, 0.0}, kTerminal};
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    Node nd = nodes_[n];  // by value: make_node below may reallocate nodes_
    Edge lo, hi;
    if (!edge_zero(nd.lo)) {
        Edge c = conj_rec(nd.lo.node, memo);
        lo = Edge{std::conj(nd.lo.w) * c.w, c.node};
    }
    if (!edge_zero(nd.hi)) {
        Edge c = conj_rec(nd.hi.node, memo);
        hi = Edge{std::conj(nd.hi.w) * c.w, c.node};
    }
    Edge res = make_node(nd.label, lo, hi);
    memo.emplace(n, res);
    return res;
}

Tdd TddEngine::conj(const Tdd& a) {
    if (a.engine() != this) throw ShapeError("conj: foreign engine");
    if (a.is_zero()) return a;
    std::unordered_map<NodeId, Edge> memo;
    Edge r = conj_rec(a.root().node, memo);
    return make(Edge{std::conj(a.root().w) * r.w, r.node}, a.indices());
}

Edge TddEngine::reorder_rec(Edge e, size_t pos, const std::vector<Label>& target,
                            const std::vector<Label>& source) {
    if (edge_zero(e)) return e;
    if (pos == target.size()) return e;
    Edge e0 = slice_rec(e, source[pos], 0);
    Edge e1 = slice_rec(e, source[pos], 1);
    return make_node(target[pos], reorder_rec(e0, pos + 1, target, source),
                     reorder_rec(e1, pos + 1, target, source));
}

Tdd TddEngine::relabel(const Tdd& a, const Relabeling& map) {
    if (a.engine() != this) throw ShapeError("relabel: foreign engine");
    std::unordered_map<Label, Label, LabelHash> fwd;
    for (const auto& [from, to] : map) {
        if (!a.has_index(from)) throw ShapeError("relabel: unknown source index " + from.name());
        if (!fwd.emplace(from, to).second)
            throw ShapeError("relabel: duplicate source index " + from.name());
    }
    if (fwd.size() != a.indices().size()) throw ShapeError("relabel: map must cover all indices");
    std::vector<Label> mapped;  // targets in source order
    mapped.reserve(a.indices().size());
    for (Label l : a.indices()) mapped.push_back(fwd.at(l));
    std::vector<Label> sorted_targets(mapped);
    std::sort(sorted_targets.begin(), sorted_targets.end());
    if (std::adjacent_find(sorted_targets.begin(), sorted_targets.end()) != sorted_targets.end())
        throw ShapeError("relabel: target indices collide");
    if (std::is_sorted(mapped.begin(), mapped.end())) {
        // Order-preserving: pure structural rename.
        std::unordered_map<NodeId, Edge> memo;
        struct Rec {
            TddEngine* e;
            const std::unordered_map<Label, Label, LabelHash>& m;
            std::unordered_map<NodeId, Edge>& memo;
            Edge operator()(NodeId n) {
                if (n == kTerminal) return Edge{Complex{1.0, 0.0}, kTerminal};
                if (auto it = memo.find(n); it != memo.end()) return it->second;
                Node nd = e->nodes_[n];  // by value: make_node may reallocate
                Edge lo, hi;
                if (!edge_zero(nd.lo)) {
                    Edge c = (*this)(nd.lo.node);
                    lo = Edge{nd.lo.w * c.w, c.node};
                }
                if (!edge_zero(nd.hi)) {
                    Edge c = (*this)(nd.hi.node);
                    hi = Edge{nd.hi.w * c.w, c.node};
                }
                Edge res = e->make_node(it_label(nd.label), lo, hi);
                memo.emplace(n, res);
                return res;
            }
            Label it_label(Label l) const {
                auto it = m.find(l);
                return it == m.end() ? l : it->second;
            }
        } rec{this, fwd, memo};
        if (a.is_zero()) return make(Edge{}, sorted_targets);
        Edge r = rec(a.root().node);
        return make(Edge{a.root().w * r.w, r.node}, sorted_targets);
    }
    // Order-changing: rebuild by slicing along the target order. Cost grows
    // with 2^rank; only small tensors ever need this path.
    std::vector<Label> source_for_target(sorted_targets.size());
    std::unordered_map<Label, Label, LabelHash> inv;
    for (const auto& [from, to] : fwd) inv.emplace(to, from);
    for (size_t k = 0; k < sorted_targets.size(); ++k)
        source_for_target[k] = inv.at(sorted_targets[k]);
    Edge r = reorder_rec(a.root(), 0, sorted_targets, source_for_target);
    return make(r, sorted_targets);
}

Tdd TddEngine::adjoint(const Tdd& a, const Relabeling& map) { return relabel(conj(a), map); }

// ---------------------------------------------------------------------------
// inner product, norm, scalar_mul

Complex TddEngine::inner_product(const Tdd& a, const Tdd& b) {
    if (a.engine() != this || b.engine() != this) throw ShapeError("inner_product: foreign engine");
    if (a.indices() != b.indices()) throw ShapeError("inner_product: index sets differ");
    Tdd ca = conj(a);
    Tdd s = contract(ca, b, a.indices());
    return s.root().w;
}

double TddEngine::norm(const Tdd& a) {
    Complex n2 = inner_product(a, a);
    return std::sqrt(std::max(0.0, n2.real()));
}

Tdd TddEngine::scalar_mul(Complex c, const Tdd& a) {
    if (a.engine() != this) throw ShapeError("scalar_mul: foreign engine");
    if (c == Complex{} || a.is_zero()) return zero(a.indices());
    return make(Edge{c * a.root().w, a.root().node}, a.indices());
}

// ---------------------------------------------------------------------------
// dense conversion

void TddEngine::to_dense_rec(Edge e, size_t pos, size_t addr, const std::vector<Label>& sorted,
                             std::vector<Complex>& out) const {
    if (edge_zero(e)) return;
    if (pos == sorted.size()) {
        out[addr] = e.w;
        return;
    }
    size_t stride = size_t{1} << (sorted.size() - 1 - pos);
    if (e.node != kTerminal && nodes_[e.node].label == sorted[pos]) {
        const Node& nd = nodes_[e.node];
        if (!edge_zero(nd.lo))
            to_dense_rec(Edge{e.w * nd.lo.w, nd.lo.node}, pos + 1, addr, sorted, out);
        if (!edge_zero(nd.hi))
            to_dense_rec(Edge{e.w * nd.hi.w, nd.hi.node}, pos + 1, addr + stride, sorted, out);
    } else {
        to_dense_rec(e, pos + 1, addr, sorted, out);
        to_dense_rec(e, pos + 1, addr + stride, sorted, out);
    }
}

std::vector<Complex> TddEngine::to_dense(const Tdd& a) const {
    if (a.engine() != this) throw ShapeError("to_dense: foreign engine");
    if (a.rank() > 22) throw CapacityError("to_dense: rank above 22");
    std::vector<Complex> out(size_t{1} << a.rank(), Complex{});
    to_dense_rec(a.root(), 0, 0, a.indices(), out);
    return out;
}

Edge TddEngine::from_dense_rec(std::span<const Complex> entries, const std::vector<Label>& sorted,
                               const std::vector<size_t>& strides, size_t pos, size_t addr) {
    if (pos == sorted.size()) {
        Complex v = entries[addr];
        return v == Complex{} ? Edge{} : Edge{v, kTerminal};
    }
    Edge e0 = from_dense_rec(entries, sorted, strides, pos + 1, addr);
    Edge e1 = from_dense_rec(entries, sorted, strides, pos + 1, addr + strides[pos]);
    return make_node(sorted[pos], e0, e1);
}

Tdd TddEngine::from_dense(std::span<const Complex> entries, const std::vector<Label>& labels) {
    if (labels.size() > 22) throw CapacityError("from_dense: rank above 22");
    if (entries.size() != (size_t{1} << labels.size()))
        throw ShapeError("from_dense: entry count is not 2^rank");
    std::vector<Label> sorted(labels);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ShapeError("from_dense: duplicate index label");
    std::vector<size_t> strides(sorted.size());
    for (size_t k = 0; k < sorted.size(); ++k) {
        size_t given = std::find(labels.begin(), labels.end(), sorted[k]) - labels.begin();
        strides[k] = size_t{1} << (labels.size() - 1 - given);
    }
    Edge r = from_dense_rec(entries, sorted, strides, 0, 0);
    return make(r, std::move(sorted));
}

// ---------------------------------------------------------------------------
// max_abs, import

double TddEngine::max_abs_rec(NodeId n, std::unordered_map<NodeId, double>& memo) const {
    if (n == kTerminal) return 1.0;
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    const Node& nd = nodes_[n];
    double m = 0.0;
    if (!edge_zero(nd.lo)) m = std::abs(nd.lo.w) * max_abs_rec(nd.lo.node, memo);
    if (!edge_zero(nd.hi)) m = std::max(m, std::abs(nd.hi.w) * max_abs_rec(nd.hi.node, memo));
    memo.emplace(n, m);
    return m;
}

double TddEngine::max_abs(const Tdd& a) const {
    if (a.engine() != this) throw ShapeError("max_abs: foreign engine");
    if (a.is_zero()) return 0.0;
    std::unordered_map<NodeId, double> memo;
    return std::abs(a.root().w) * max_abs_rec(a.root().node, memo);
}

Edge TddEngine::import_rec(const TddEngine& src, Edge e, std::unordered_map<NodeId, Edge>& memo) {
    if (edge_zero(e)) return Edge{};
    if (e.node == kTerminal) return Edge{e.w, kTerminal};
    Edge sub;
    if (auto it = memo.find(e.node); it != memo.end()) {
        sub = it->second;
    } else {
        const Node& nd = src.nodes_[e.node];
        Edge lo = import_rec(src, nd.lo, memo);
        Edge hi = import_rec(src, nd.hi, memo);
        sub = make_node(nd.label, lo, hi);
        memo.emplace(e.node, sub);
    }
    return Edge{e.w * sub.w, sub.node};
}

Tdd TddEngine::import(const Tdd& a) {
    if (a.engine() == this) return a;
    if (!a.valid()) throw ShapeError("import: invalid source");
    std::unordered_map<NodeId, Edge> memo;
    Edge r = import_rec(*a.engine(), a.root(), memo);
    return make(r, a.indices());
}

}  // namespace qimg
