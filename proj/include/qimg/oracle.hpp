#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qimg/circuit.hpp"
#include "qimg/tdd.hpp"

namespace qimg {

// Dense ground truth, independent of the decision-diagram engine: plain
// vectors of length 2^n and row-major 2^n x 2^n matrices, with qubit 0 as the
// most significant address bit. Capped at 12 qubits.
using DenseVec = std::vector<Complex>;
using DenseMat = std::vector<Complex>;

inline constexpr int kDenseMaxQubits = 12;

// In-place statevector update. Gate semantics are implemented from scratch
// here so the decision-diagram lowering is checked against an independent
// reading of the same conventions.
void apply_gate(const Gate& g, int n, DenseVec& v);

DenseVec apply_circuit(const Circuit& c, DenseVec v);

// Whole-register operator of a circuit: U[y * 2^n + x] = <y|C|x>.
DenseMat kraus_matrix(const Circuit& c);

// Orthonormal basis of span(cols); directions with singular value <= cutoff
// are dropped. Accepts rank-deficient and zero columns.
std::vector<DenseVec> orthonormal_columns(const std::vector<DenseVec>& cols,
                                          double cutoff = 1e-9);

// Projector onto span(cols). cols must be non-empty (the vector length fixes
// the dimension); a set of zero columns yields the zero matrix.
DenseMat span_projector(const std::vector<DenseVec>& cols, double cutoff = 1e-9);

// Image of the subspace spanned by `basis`: stacks E|psi> for every Kraus
// operator E of every symbol and every basis column, then projects onto the
// span.
DenseMat dense_image(const QuantumTransitionSystem& sys,
                     const std::vector<DenseVec>& basis);

// Fixpoint of S <- S v T(S), mirroring the engine's loop: stops when the
// projector stabilizes (max-entry diff <= 1e-8 at equal rank), the span fills
// the whole space, or the iteration cap is hit. The count includes the final
// confirming pass.
std::pair<DenseMat, int> dense_reachable(const QuantumTransitionSystem& sys,
                                         const std::vector<DenseVec>& basis,
                                         int max_iters);

// Max-entry |a - b|; shapes must agree.
double compare_projectors(const DenseMat& a, const DenseMat& b);

// Dense expansion of a system's declared initial subspace: kets (tokens over
// {0,1,+,-}) first, then verbatim amplitude vectors.
std::vector<DenseVec> init_vectors(const QuantumTransitionSystem& sys);

// Reproducible random transition system plus initial subspace (stored in
// init.vecs as `dim` orthonormal vectors). Gates are drawn from the named
// set with occasional projectors, scaled elements, and custom matrices.
QuantumTransitionSystem random_instance(uint64_t seed, int n, int gate_budget,
                                        int kraus_count, int dim);

}  // namespace qimg
