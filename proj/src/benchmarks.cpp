#include "qimg/benchmarks.hpp"

#include <cmath>
#include <numbers>

#include "qimg/errors.hpp"

namespace qimg {

namespace {

Gate g1(GateKind k, int q, double theta = 0.0) {
    Gate g;
    g.kind = k;
    g.qubits = {q};
    g.theta = theta;
    return g;
}

// Controlled X with the kind picked by qubit count (cx / ccx / mcx).
Gate cnx(std::vector<int> qubits) {
    Gate g;
    g.kind = qubits.size() == 2   ? GateKind::Cx
             : qubits.size() == 3 ? GateKind::Ccx
                                  : GateKind::Mcx;
    g.qubits = std::move(qubits);
    return g;
}

QuantumTransitionSystem one_symbol(int n, Circuit c, std::vector<std::string> kets,
                                   std::string name) {
    QuantumTransitionSystem sys;
    sys.n = n;
    sys.name = std::move(name);
    sys.symbols = {"u"};
    c.n = n;
    sys.operations["u"] = {std::move(c)};
    sys.init.kets = std::move(kets);
    validate_system(sys);
    return sys;
}

QuantumTransitionSystem gen_ghz(int n) {
    if (n < 2) throw ParamError("ghz needs at least 2 qubits");
    Circuit c;
    c.gates.push_back(g1(GateKind::H, 0));
    for (int q = 0; q + 1 < n; ++q) {
        Gate g;
        g.kind = GateKind::Cx;
        g.qubits = {q, q + 1};
        c.gates.push_back(g);
    }
    return one_symbol(n, std::move(c), {std::string(n, '0')}, "ghz");
}

QuantumTransitionSystem gen_bv(int n, std::string hidden) {
    if (n < 2) throw ParamError("bv needs at least 2 qubits (data + ancilla)");
    if (hidden.empty())
        for (int i = 0; i + 1 < n; ++i) hidden += i % 2 ? '0' : '1';
    if (hidden.size() != static_cast<size_t>(n - 1))
        throw ParamError("bv hidden string must cover the " + std::to_string(n - 1) +
                         " data qubits");
    for (char b : hidden)
        if (b != '0' && b != '1') throw ParamError("bv hidden string must be over {0,1}");
    Circuit c;
    for (int q = 0; q + 1 < n; ++q) c.gates.push_back(g1(GateKind::H, q));
    for (int q = 0; q + 1 < n; ++q)
        if (hidden[q] == '1') c.gates.push_back(cnx({q, n - 1}));
    for (int q = 0; q + 1 < n; ++q) c.gates.push_back(g1(GateKind::H, q));
    return one_symbol(n, std::move(c), {std::string(n - 1, '0') + "-"}, "bv");
}

QuantumTransitionSystem gen_qft(int n) {
    if (n < 1) throw ParamError("qft needs at least 1 qubit");
    Circuit c;
    for (int i = 0; i < n; ++i) {
        c.gates.push_back(g1(GateKind::H, i));
        for (int j = i + 1; j < n; ++j) {
            Gate g;
            g.kind = GateKind::Cp;
            g.qubits = {j, i};
            g.theta = std::numbers::pi / static_cast<double>(1 << (j - i));
            c.gates.push_back(g);
        }
    }
    return one_symbol(n, std::move(c), {std::string(n, '0')}, "qft");
}

QuantumTransitionSystem gen_grover(int n) {
    if (n < 3) throw ParamError("grover needs at least 3 qubits (2 search + ancilla)");
    int m = n - 1;  // search qubits 0..m-1, ancilla m
    Circuit c;
    // Oracle: flip the |-> ancilla exactly on |1...1>.
    std::vector<int> all(n);
    for (int q = 0; q < n; ++q) all[q] = q;
    c.gates.push_back(cnx(all));
    // Reflection about the mean over the search qubits.
    for (int q = 0; q < m; ++q) c.gates.push_back(g1(GateKind::H, q));
    for (int q = 0; q < m; ++q) c.gates.push_back(g1(GateKind::X, q));
    c.gates.push_back(g1(GateKind::H, m - 1));
    std::vector<int> search(m);
    for (int q = 0; q < m; ++q) search[q] = q;
    c.gates.push_back(cnx(search));
    c.gates.push_back(g1(GateKind::H, m - 1));
    for (int q = 0; q < m; ++q) c.gates.push_back(g1(GateKind::X, q));
    for (int q = 0; q < m; ++q) c.gates.push_back(g1(GateKind::H, q));
    return one_symbol(n, std::move(c),
                      {std::string(m, '+') + "-", std::string(m, '1') + "-"}, "grover");
}

// Conditional +1 on the position register (qubits 1..n-1, msb first) when the
// coin (qubit 0) is 1. Carries must read pre-increment bits, so the widest
// control set goes first.
void push_increment(Circuit& c, int n) {
    int m = n - 1;
    for (int j = m - 1; j >= 1; --j) {
        std::vector<int> qubits{0};
        for (int b = 0; b < j; ++b) qubits.push_back(n - 1 - b);  // low bits p0..p_{j-1}
        qubits.push_back(n - 1 - j);                              // target p_j
        c.gates.push_back(cnx(std::move(qubits)));
    }
    c.gates.push_back(cnx({0, n - 1}));
}

// Coin-conditional walk step: coin 1 increments, coin 0 decrements, using
// i-1 = ~(~i + 1) to reuse the increment ladder.
void push_shift(Circuit& c, int n) {
    push_increment(c, n);
    c.gates.push_back(g1(GateKind::X, 0));
    for (int q = 1; q < n; ++q) c.gates.push_back(g1(GateKind::X, q));
    push_increment(c, n);
    for (int q = 1; q < n; ++q) c.gates.push_back(g1(GateKind::X, q));
    c.gates.push_back(g1(GateKind::X, 0));
}

QuantumTransitionSystem gen_qrw(int n, double p) {
    if (n < 2) throw ParamError("qrw needs at least 2 qubits (coin + position)");
    if (!(p > 0.0 && p < 1.0)) throw ParamError("qrw probability must be in (0,1)");
    QuantumTransitionSystem sys;
    sys.n = n;
    sys.name = "qrw";
    sys.symbols = {"1", "2"};

    Circuit walk;
    walk.n = n;
    walk.gates.push_back(g1(GateKind::H, 0));
    push_shift(walk, n);
    sys.operations["1"] = {walk};

    // Faulty step: the coin may flip before the toss.
    Circuit keep = walk;
    keep.gates[0].scale = std::sqrt(p);
    Circuit flip;
    flip.n = n;
    flip.gates.push_back(g1(GateKind::X, 0));
    flip.gates[0].scale = std::sqrt(1.0 - p);
    flip.gates.push_back(g1(GateKind::H, 0));
    push_shift(flip, n);
    sys.operations["2"] = {std::move(keep), std::move(flip)};

    sys.init.kets = {std::string(n, '0')};
    validate_system(sys);
    return sys;
}

}  // namespace

QuantumTransitionSystem gen_benchmark(const std::string& family, int n,
                                      const BenchParams& params) {
    if (family == "ghz") return gen_ghz(n);
    if (family == "bv") return gen_bv(n, params.hidden);
    if (family == "qft") return gen_qft(n);
    if (family == "grover") return gen_grover(n);
    if (family == "qrw") return gen_qrw(n, params.p);
    throw ParamError("unknown benchmark family '" + family + "'");
}

}  // namespace qimg
