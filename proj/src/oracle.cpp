#include "qimg/oracle.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "qimg/errors.hpp"

namespace qimg {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;

size_t checked_dim(int n, const char* who) {
    if (n < 1 || n > kDenseMaxQubits)
        throw CapacityError(std::string(who) + ": dense path supports 1.." +
                            std::to_string(kDenseMaxQubits) + " qubits, got " +
                            std::to_string(n));
    return size_t{1} << n;
}

// m is row-major {m00, m01, m10, m11} acting on the register bit at `mask`.
void apply_single(DenseVec& v, size_t mask, const Complex m[4]) {
    for (size_t x = 0; x < v.size(); ++x) {
        if (x & mask) continue;
        Complex a = v[x];
        Complex b = v[x | mask];
        v[x] = m[0] * a + m[1] * b;
        v[x | mask] = m[2] * a + m[3] * b;
    }
}

Eigen::MatrixXcd stack_columns(const std::vector<DenseVec>& cols) {
    if (cols.empty()) throw ShapeError("orthonormal_columns: no columns");
    size_t dim = cols[0].size();
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(dim),
                       static_cast<Eigen::Index>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != dim)
            throw ShapeError("orthonormal_columns: ragged column lengths");
        for (size_t i = 0; i < dim; ++i)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cols[j][i];
    }
    return m;
}

// Left singular vectors with singular value above the cutoff.
Eigen::MatrixXcd orth_basis(const std::vector<DenseVec>& cols, double cutoff) {
    Eigen::MatrixXcd m = stack_columns(cols);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU);
    Eigen::Index rank = 0;
    while (rank < svd.singularValues().size() &&
           svd.singularValues()(rank) > cutoff)
        ++rank;
    return svd.matrixU().leftCols(rank);
}

DenseMat projector_of(const Eigen::MatrixXcd& basis, size_t dim) {
    Eigen::MatrixXcd p = basis * basis.adjoint();
    DenseMat out(dim * dim);
    for (size_t r = 0; r < dim; ++r)
        for (size_t c = 0; c < dim; ++c)
            out[r * dim + c] =
                p(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    return out;
}

std::vector<DenseVec> image_columns(const QuantumTransitionSystem& sys,
                                    const std::vector<DenseVec>& basis) {
    size_t dim = checked_dim(sys.n, "dense_image");
    std::vector<DenseVec> cols;
    for (const std::string& sym : sys.symbols)
        for (const Circuit& c : sys.operations.at(sym))
            for (const DenseVec& psi : basis) {
                if (psi.size() != dim)
                    throw ShapeError("dense_image: basis vector length mismatch");
                cols.push_back(apply_circuit(c, psi));
            }
    return cols;
}

DenseVec ket_vector(const std::string& tokens) {
    DenseVec v{Complex{1.0, 0.0}};
    for (char t : tokens) {
        Complex amp[2];
        switch (t) {
            case '0': amp[0] = {1, 0}; amp[1] = {0, 0}; break;
            case '1': amp[0] = {0, 0}; amp[1] = {1, 0}; break;
            case '+': amp[0] = {kInvSqrt2, 0}; amp[1] = {kInvSqrt2, 0}; break;
            case '-': amp[0] = {kInvSqrt2, 0}; amp[1] = {-kInvSqrt2, 0}; break;
            default: throw ParamError(std::string("ket token '") + t + "' not in {0,1,+,-}");
        }
        DenseVec next(v.size() * 2);
        for (size_t x = 0; x < v.size(); ++x) {
            next[x << 1] = v[x] * amp[0];
            next[(x << 1) | 1] = v[x] * amp[1];
        }
        v = std::move(next);
    }
    return v;
}

}  // namespace

void apply_gate(const Gate& g, int n, DenseVec& v) {
    size_t dim = checked_dim(n, "apply_gate");
    if (v.size() != dim) throw ShapeError("apply_gate: vector length mismatch");
    validate_gate(g, n);
    auto mask_of = [&](size_t slot) {
        return size_t{1} << (n - 1 - g.qubits[slot]);
    };
    switch (g.kind) {
        case GateKind::H: {
            const Complex m[4] = {{kInvSqrt2, 0}, {kInvSqrt2, 0}, {kInvSqrt2, 0}, {-kInvSqrt2, 0}};
            apply_single(v, mask_of(0), m);
            break;
        }
        case GateKind::X: {
            const Complex m[4] = {{0, 0}, {1, 0}, {1, 0}, {0, 0}};
            apply_single(v, mask_of(0), m);
            break;
        }
        case GateKind::Y: {
            const Complex m[4] = {{0, 0}, {0, -1}, {0, 1}, {0, 0}};
            apply_single(v, mask_of(0), m);
            break;
        }
        case GateKind::Z:
            for (size_t x = 0; x < dim; ++x)
                if (x & mask_of(0)) v[x] = -v[x];
            break;
        case GateKind::S:
            for (size_t x = 0; x < dim; ++x)
                if (x & mask_of(0)) v[x] *= Complex{0, 1};
            break;
        case GateKind::T:
            for (size_t x = 0; x < dim; ++x)
                if (x & mask_of(0)) v[x] *= std::polar(1.0, std::numbers::pi / 4);
            break;
        case GateKind::Rz:
            for (size_t x = 0; x < dim; ++x)
                v[x] *= std::polar(1.0, (x & mask_of(0)) ? g.theta / 2 : -g.theta / 2);
            break;
        case GateKind::Cx: {
            size_t c = mask_of(0), t = mask_of(1);
            for (size_t x = 0; x < dim; ++x)
                if ((x & c) && !(x & t)) std::swap(v[x], v[x | t]);
            break;
        }
        case GateKind::Cz: {
            size_t both = mask_of(0) | mask_of(1);
            for (size_t x = 0; x < dim; ++x)
                if ((x & both) == both) v[x] = -v[x];
            break;
        }
        case GateKind::Cp: {
            size_t both = mask_of(0) | mask_of(1);
            Complex ph = std::polar(1.0, g.theta);
            for (size_t x = 0; x < dim; ++x)
                if ((x & both) == both) v[x] *= ph;
            break;
        }
        case GateKind::Swap: {
            size_t a = mask_of(0), b = mask_of(1);
            for (size_t x = 0; x < dim; ++x)
                if ((x & a) && !(x & b)) std::swap(v[x], v[x ^ a ^ b]);
            break;
        }
        case GateKind::Ccx:
        case GateKind::Mcx: {
            size_t cm = 0;
            for (size_t s = 0; s + 1 < g.qubits.size(); ++s) cm |= mask_of(s);
            size_t t = mask_of(g.qubits.size() - 1);
            for (size_t x = 0; x < dim; ++x)
                if ((x & cm) == cm && !(x & t)) std::swap(v[x], v[x | t]);
            break;
        }
        case GateKind::Proj:
            for (size_t x = 0; x < dim; ++x) {
                bool keep = true;
                for (size_t s = 0; s < g.qubits.size() && keep; ++s)
                    keep = ((x >> (n - 1 - g.qubits[s])) & 1) == size_t(g.bits[s] - '0');
                if (!keep) v[x] = Complex{};
            }
            break;
        case GateKind::Custom: {
            size_t k = g.qubits.size();
            size_t sub = size_t{1} << k;
            size_t anymask = 0;
            for (size_t s = 0; s < k; ++s) anymask |= mask_of(s);
            std::vector<size_t> offset(sub, 0);
            for (size_t a = 0; a < sub; ++a)
                for (size_t s = 0; s < k; ++s)
                    if ((a >> (k - 1 - s)) & 1) offset[a] |= mask_of(s);
            std::vector<Complex> tmp(sub);
            for (size_t x = 0; x < dim; ++x) {
                if (x & anymask) continue;
                for (size_t in = 0; in < sub; ++in) tmp[in] = v[x | offset[in]];
                for (size_t out = 0; out < sub; ++out) {
                    Complex acc{};
                    for (size_t in = 0; in < sub; ++in)
                        acc += g.matrix[out * sub + in] * tmp[in];
                    v[x | offset[out]] = acc;
                }
            }
            break;
        }
    }
    if (g.scale != 1.0)
        for (Complex& a : v) a *= g.scale;
}

DenseVec apply_circuit(const Circuit& c, DenseVec v) {
    for (const Gate& g : c.gates) apply_gate(g, c.n, v);
    return v;
}

DenseMat kraus_matrix(const Circuit& c) {
    size_t dim = checked_dim(c.n, "kraus_matrix");
    DenseMat m(dim * dim);
    for (size_t x = 0; x < dim; ++x) {
        DenseVec v(dim, Complex{});
        v[x] = Complex{1, 0};
        v = apply_circuit(c, std::move(v));
        for (size_t y = 0; y < dim; ++y) m[y * dim + x] = v[y];
    }
    return m;
}

std::vector<DenseVec> orthonormal_columns(const std::vector<DenseVec>& cols,
                                          double cutoff) {
    if (cols.empty()) return {};
    Eigen::MatrixXcd u = orth_basis(cols, cutoff);
    std::vector<DenseVec> out(static_cast<size_t>(u.cols()));
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
        out[static_cast<size_t>(j)].resize(cols[0].size());
        for (Eigen::Index i = 0; i < u.rows(); ++i)
            out[static_cast<size_t>(j)][static_cast<size_t>(i)] = u(i, j);
    }
    return out;
}

DenseMat span_projector(const std::vector<DenseVec>& cols, double cutoff) {
    if (cols.empty()) throw ShapeError("span_projector: no columns");
    return projector_of(orth_basis(cols, cutoff), cols[0].size());
}

DenseMat dense_image(const QuantumTransitionSystem& sys,
                     const std::vector<DenseVec>& basis) {
    if (basis.empty()) throw ShapeError("dense_image: empty basis");
    return span_projector(image_columns(sys, basis));
}

std::pair<DenseMat, int> dense_reachable(const QuantumTransitionSystem& sys,
                                         const std::vector<DenseVec>& basis,
                                         int max_iters) {
    size_t dim = checked_dim(sys.n, "dense_reachable");
    std::vector<DenseVec> s = orthonormal_columns(basis);
    DenseMat p = span_projector(basis);
    for (int it = 1; it <= max_iters; ++it) {
        std::vector<DenseVec> cols = s;
        for (DenseVec& c : image_columns(sys, s)) cols.push_back(std::move(c));
        std::vector<DenseVec> s2 = orthonormal_columns(cols);
        DenseMat p2 = span_projector(cols);
        bool fixed = s2.size() == s.size() && compare_projectors(p2, p) <= 1e-8;
        if (fixed || s2.size() == dim) return {std::move(p2), it};
        s = std::move(s2);
        p = std::move(p2);
    }
    return {std::move(p), max_iters};
}

double compare_projectors(const DenseMat& a, const DenseMat& b) {
    if (a.size() != b.size())
        throw ShapeError("compare_projectors: shape mismatch");
    double worst = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

std::vector<DenseVec> init_vectors(const QuantumTransitionSystem& sys) {
    size_t dim = checked_dim(sys.n, "init_vectors");
    std::vector<DenseVec> out;
    for (const std::string& kets : sys.init.kets) {
        if (kets.size() != static_cast<size_t>(sys.n))
            throw ShapeError("init_vectors: ket token length mismatch");
        out.push_back(ket_vector(kets));
    }
    for (const DenseVec& v : sys.init.vecs) {
        if (v.size() != dim)
            throw ShapeError("init_vectors: amplitude vector length mismatch");
        out.push_back(v);
    }
    if (out.empty()) throw ShapeError("init_vectors: system declares no initial states");
    return out;
}

namespace {

// Deterministic draws independent of standard-library distribution details.
struct Draw {
    std::mt19937_64 rng;
    explicit Draw(uint64_t seed) : rng(seed) {}
    size_t pick(size_t k) { return static_cast<size_t>(rng() % k); }
    double real(double lo, double hi) {
        double u = static_cast<double>(rng() >> 11) * 0x1p-53;
        return lo + u * (hi - lo);
    }
    std::vector<int> qubits(int n, size_t k) {
        std::vector<int> all(n);
        for (int i = 0; i < n; ++i) all[i] = i;
        for (size_t i = 0; i < k; ++i)
            std::swap(all[i], all[i + pick(all.size() - i)]);
        all.resize(k);
        return all;
    }
};

Gate random_gate(Draw& d, int n) {
    static const GateKind singles[] = {GateKind::H, GateKind::X, GateKind::Y,
                                       GateKind::Z, GateKind::S, GateKind::T,
                                       GateKind::Rz};
    static const GateKind pairs[] = {GateKind::Cx, GateKind::Cz, GateKind::Cp,
                                     GateKind::Swap};
    Gate g;
    size_t roll = d.pick(100);
    if (roll < 12) {
        g.kind = GateKind::Proj;
        size_t k = 1 + d.pick(std::min(n, 2));
        g.qubits = d.qubits(n, k);
        for (size_t i = 0; i < k; ++i) g.bits += static_cast<char>('0' + d.pick(2));
    } else if (roll < 20) {
        g.kind = GateKind::Custom;
        g.qubits = d.qubits(n, 1);
        double th = d.real(0, std::numbers::pi);
        double ph = d.real(0, 2 * std::numbers::pi);
        g.matrix = {Complex{std::cos(th), 0},
                    -std::polar(std::sin(th), ph),
                    std::polar(std::sin(th), -ph),
                    Complex{std::cos(th), 0}};
    } else if (roll < 30 && n >= 3) {
        g.kind = GateKind::Ccx;
        g.qubits = d.qubits(n, 3);
    } else if (roll < 60 && n >= 2) {
        g.kind = pairs[d.pick(std::size(pairs))];
        g.qubits = d.qubits(n, 2);
    } else {
        g.kind = singles[d.pick(std::size(singles))];
        g.qubits = d.qubits(n, 1);
    }
    if (gate_has_angle(g.kind)) g.theta = d.real(0, 2 * std::numbers::pi);
    if (d.pick(100) < 15) g.scale = d.real(0.4, 1.3);
    return g;
}

}  // namespace

QuantumTransitionSystem random_instance(uint64_t seed, int n, int gate_budget,
                                        int kraus_count, int dim) {
    if (n < 1 || n > 6) throw ParamError("random_instance: n must be 1..6");
    if (kraus_count < 1) throw ParamError("random_instance: kraus_count must be >= 1");
    size_t space = size_t{1} << n;
    if (dim < 1 || static_cast<size_t>(dim) > space)
        throw ParamError("random_instance: dim must be 1..2^n");
    Draw d(seed);

    QuantumTransitionSystem sys;
    sys.n = n;
    sys.name = "random-" + std::to_string(seed);
    size_t nsym = kraus_count >= 2 && d.pick(2) == 1 ? 2 : 1;
    for (size_t s = 0; s < nsym; ++s) sys.symbols.push_back("s" + std::to_string(s));
    int per_op = std::max(1, gate_budget / kraus_count);
    for (int k = 0; k < kraus_count; ++k) {
        const std::string& sym =
            sys.symbols[k < static_cast<int>(nsym) ? k : d.pick(nsym)];
        Circuit c;
        c.n = n;
        for (int i = 0; i < per_op; ++i) c.gates.push_back(random_gate(d, n));
        sys.operations[sym].push_back(std::move(c));
    }

    // Initial subspace: dim orthonormal vectors from a random complex matrix.
    std::vector<DenseVec> raw(dim, DenseVec(space));
    for (auto& col : raw)
        for (Complex& a : col) a = Complex{d.real(-1, 1), d.real(-1, 1)};
    std::vector<DenseVec> ortho = orthonormal_columns(raw, 1e-6);
    while (ortho.size() < static_cast<size_t>(dim)) {
        DenseVec extra(space);
        for (Complex& a : extra) a = Complex{d.real(-1, 1), d.real(-1, 1)};
        raw.push_back(std::move(extra));
        ortho = orthonormal_columns(raw, 1e-6);
    }
    sys.init.vecs = std::move(ortho);
    validate_system(sys);
    return sys;
}

}  // namespace qimg
