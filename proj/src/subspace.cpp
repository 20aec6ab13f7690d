#include "qimg/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace qimg {

namespace {

// Per-token amplitude pair (amp of bit 0, amp of bit 1).
std::pair<Complex, Complex> token_amps(char c) {
    const double s = 1.0 / std::sqrt(2.0);
    switch (c) {
        case '0': return {{1.0, 0.0}, {0.0, 0.0}};
        case '1': return {{0.0, 0.0}, {1.0, 0.0}};
        case '+': return {{s, 0.0}, {s, 0.0}};
        case '-': return {{s, 0.0}, {-s, 0.0}};
        default: throw ParamError(std::string("unknown ket token '") + c + "'");
    }
}

Relabeling rows_to_states(const std::vector<Label>& indices) {
    Relabeling map;
    for (Label l : indices) map.push_back({l, state_label(l.qubit)});
    return map;
}

}  // namespace

std::vector<Label> state_labels(int n) {
    std::vector<Label> out;
    out.reserve(n);
    for (int q = 0; q < n; ++q) out.push_back(state_label(q));
    return out;
}

std::vector<Label> operator_labels(int n) {
    std::vector<Label> out;
    out.reserve(2 * static_cast<size_t>(n));
    for (int q = 0; q < n; ++q) {
        out.push_back(state_label(q));
        out.push_back(row_label(q));
    }
    return out;
}

Subspace empty_subspace(TddEngine& eng, int n) {
    Subspace s;
    s.n = n;
    s.projector = eng.zero(operator_labels(n));
    return s;
}

Tdd ket_state(TddEngine& eng, const std::string& tokens) {
    if (tokens.empty()) throw ShapeError("ket over zero qubits");
    int n = static_cast<int>(tokens.size());
    Edge e{Complex{1.0, 0.0}, kTerminal};
    for (int q = n - 1; q >= 0; --q) {
        auto [a0, a1] = token_amps(tokens[q]);
        Edge lo = a0 == Complex{} ? Edge{} : Edge{a0 * e.w, e.node};
        Edge hi = a1 == Complex{} ? Edge{} : Edge{a1 * e.w, e.node};
        e = eng.make_node(state_label(q), lo, hi);
    }
    return eng.make(e, state_labels(n));
}

Tdd outer_product(TddEngine& eng, const Tdd& v) {
    Relabeling to_rows;
    for (Label l : v.indices()) to_rows.push_back({l, row_label(l.qubit)});
    Tdd rows = eng.relabel(v, to_rows);
    return eng.contract(eng.conj(v), rows, {});
}

Tdd apply_operator(TddEngine& eng, const Tdd& op, const Tdd& psi) {
    Tdd out = eng.contract(op, psi, psi.indices());
    return eng.relabel(out, rows_to_states(out.indices()));
}

std::optional<std::pair<std::vector<int>, Tdd>> first_nonzero_column(TddEngine& eng,
                                                                     const Tdd& p, int n) {
    if (p.is_zero()) return std::nullopt;
    std::vector<int> bits(n, 0);
    Tdd t = p;
    for (int q = 0; q < n; ++q) {
        Tdd at0 = eng.slice(t, state_label(q), 0);
        if (!at0.is_zero()) {
            t = at0;
        } else {
            bits[q] = 1;
            t = eng.slice(t, state_label(q), 1);
        }
    }
    return std::make_pair(std::move(bits), eng.relabel(t, rows_to_states(t.indices())));
}

Subspace basis_decompose(TddEngine& eng, const Tdd& p, int n) {
    if (p.indices() != operator_labels(n))
        throw ShapeError("basis_decompose expects an operator over all column/row pairs");
    Subspace s;
    s.n = n;
    s.projector = p;
    const uint64_t cap = n < 63 ? (uint64_t{1} << n) : UINT64_MAX;
    Tdd rest = p;
    while (auto col = first_nonzero_column(eng, rest, n)) {
        double len = eng.norm(col->second);
        if (len <= kEpsZero) break;
        Tdd v = eng.scalar_mul(Complex{1.0 / len, 0.0}, col->second);
        s.basis.push_back(v);
        if (s.basis.size() > cap)
            throw NonProjectorError("column extraction did not terminate: not a projector");
        rest = eng.add(rest, eng.scalar_mul(Complex{-1.0, 0.0}, outer_product(eng, v)));
    }
    return s;
}

Tdd projector_from_basis(TddEngine& eng, const std::vector<Tdd>& basis, int n) {
    for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = i; j < basis.size(); ++j) {
            Complex ip = eng.inner_product(basis[i], basis[j]);
            Complex want = i == j ? Complex{1.0, 0.0} : Complex{};
            if (std::abs(ip - want) > kGramTol)
                throw PreconditionError("basis is not orthonormal");
        }
    Tdd p = eng.zero(operator_labels(n));
    for (const Tdd& v : basis) p = eng.add(p, outer_product(eng, v));
    return p;
}

bool join_state(TddEngine& eng, Subspace& s, const Tdd& psi) {
    Tdd u = s.basis.empty()
                ? psi
                : eng.add(psi, eng.scalar_mul(Complex{-1.0, 0.0},
                                              apply_operator(eng, s.projector, psi)));
    double len = eng.norm(u);
    if (len <= kEpsZero) return false;
    if (len < kReorthThreshold * eng.norm(psi)) {
        // Mostly-contained state: one more pass scrubs the first pass's
        // roundoff before the residual gets blown up by normalization.
        u = eng.add(u, eng.scalar_mul(Complex{-1.0, 0.0}, apply_operator(eng, s.projector, u)));
        len = eng.norm(u);
        if (len <= kEpsZero) return false;
    }
    Tdd v = eng.scalar_mul(Complex{1.0 / len, 0.0}, u);
    s.basis.push_back(v);
    s.projector = eng.add(s.projector, outer_product(eng, v));
    return true;
}

Subspace join(TddEngine& eng, const Subspace& a, const Subspace& b) {
    if (a.n != b.n) throw ShapeError("joining subspaces over different qubit counts");
    Subspace s = a;
    for (const Tdd& psi : b.basis) join_state(eng, s, psi);
    return s;
}

Subspace subspace_from_states(TddEngine& eng, const std::vector<Tdd>& states, int n) {
    Subspace s = empty_subspace(eng, n);
    for (const Tdd& psi : states) join_state(eng, s, psi);
    return s;
}

Subspace subspace_from_init(TddEngine& eng, const InitSpec& init, int n) {
    std::vector<Tdd> states;
    for (const std::string& k : init.kets) {
        if (static_cast<int>(k.size()) != n) throw ShapeError("ket length differs from qubit count");
        states.push_back(ket_state(eng, k));
    }
    for (const auto& v : init.vecs) states.push_back(eng.from_dense(v, state_labels(n)));
    return subspace_from_states(eng, states, n);
}

bool equal_subspace(TddEngine& eng, const Subspace& a, const Subspace& b) {
    if (a.n != b.n) throw ShapeError("comparing subspaces over different qubit counts");
    if (a.dim() != b.dim()) return false;
    Tdd diff = eng.add(a.projector, eng.scalar_mul(Complex{-1.0, 0.0}, b.projector));
    return eng.max_abs(diff) <= kProjTol;
}

}  // namespace qimg
