#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qimg/circuit.hpp"
#include "qimg/tdd.hpp"

namespace qimg {

// A vector norm at or below this is treated as the zero vector.
inline constexpr double kEpsZero = 1e-10;
// Two projectors are the same subspace when no entry differs by more.
inline constexpr double kProjTol = 1e-8;
// A Gram-Schmidt residual shorter than this fraction of the input gets one
// repeated orthogonalization pass before normalizing.
inline constexpr double kReorthThreshold = 1e-4;
// Largest tolerated deviation of a claimed orthonormal basis from I.
inline constexpr double kGramTol = 1e-6;

// States live on {q, 1}; operators pair each column {q, 1} with a row {q, 2}.
std::vector<Label> state_labels(int n);
std::vector<Label> operator_labels(int n);

// A subspace of the n-qubit state space, kept in two redundant forms: an
// orthonormal basis of state Tdds and the projector P = sum |v_i><v_i| as an
// operator Tdd with entry P(x@1, y@2) = <y|P|x>. All Tdds of one subspace
// belong to the same engine, and every operation below keeps it that way.
struct Subspace {
    int n = 0;
    std::vector<Tdd> basis;
    Tdd projector;

    size_t dim() const { return basis.size(); }
};

Subspace empty_subspace(TddEngine& eng, int n);

// Product state from per-qubit tokens over {0,1,+,-}; built node by node, so
// it works far beyond the dense conversion cap.
Tdd ket_state(TddEngine& eng, const std::string& tokens);

// |v><v| as an operator Tdd: the column layer carries conj(v), the row layer v.
Tdd outer_product(TddEngine& eng, const Tdd& v);

// op applied to a state: contract over the column labels, then move the open
// rows back onto the state layer.
Tdd apply_operator(TddEngine& eng, const Tdd& op, const Tdd& psi);

// Lexicographically first column assignment x whose column P|x> is not
// identically zero, together with that column as a state Tdd. Walks one
// column label at a time, trying bit 0 first and descending into a slice iff
// it is non-zero, which is exact by the weight-zero invariant. Returns
// nullopt for the zero operator.
std::optional<std::pair<std::vector<int>, Tdd>> first_nonzero_column(TddEngine& eng,
                                                                     const Tdd& p, int n);

// Peels an orthonormal basis off a projector: repeatedly takes the first
// non-zero column u, stops when its norm falls to kEpsZero, otherwise appends
// u/|u| and subtracts the rank-one piece. A genuine projector exhausts after
// rank many rounds; anything still producing columns after 2^n of them raises
// NonProjectorError. The returned subspace keeps the given p as projector.
Subspace basis_decompose(TddEngine& eng, const Tdd& p, int n);

// sum |v_i><v_i| over an orthonormal family; PreconditionError when the Gram
// matrix deviates from I by more than kGramTol.
Tdd projector_from_basis(TddEngine& eng, const std::vector<Tdd>& basis, int n);

// One Gram-Schmidt step: extends s by psi unless psi already lies in s (the
// residual norm is <= kEpsZero). Returns whether the dimension grew.
bool join_state(TddEngine& eng, Subspace& s, const Tdd& psi);

// Smallest subspace containing both operands.
Subspace join(TddEngine& eng, const Subspace& a, const Subspace& b);

// Span of arbitrary (not necessarily independent or normalized) states.
Subspace subspace_from_states(TddEngine& eng, const std::vector<Tdd>& states, int n);

// Span of the initial states declared by a transition system.
Subspace subspace_from_init(TddEngine& eng, const InitSpec& init, int n);

// Same dimension and projectors equal entry-wise within kProjTol. Both
// subspaces must live in `eng`.
bool equal_subspace(TddEngine& eng, const Subspace& a, const Subspace& b);

}  // namespace qimg
