#include <cmath>
#include <random>

#include "doctest.h"
#include "qimg/oracle.hpp"
#include "qimg/subspace.hpp"
#include "test_helpers.hpp"

using namespace qimg;
using namespace qimg::testing;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

std::vector<Complex> normalized(std::vector<Complex> v) {
    double s = 0.0;
    for (auto c : v) s += std::norm(c);
    for (auto& c : v) c /= std::sqrt(s);
    return v;
}

// Random orthonormal family of the requested size over n qubits.
std::vector<DenseVec> random_orthonormal(std::mt19937_64& rng, int n, int count) {
    size_t dim = size_t{1} << n;
    std::vector<DenseVec> cols;
    while (true) {
        cols.clear();
        for (int i = 0; i < count; ++i) {
            DenseVec v(dim);
            for (auto& c : v) c = rand_complex(rng);
            cols.push_back(std::move(v));
        }
        auto orth = orthonormal_columns(cols);
        if (static_cast<int>(orth.size()) == count) return orth;
    }
}

double basis_gram_deviation(TddEngine& eng, const std::vector<Tdd>& basis) {
    double worst = 0.0;
    for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = 0; j < basis.size(); ++j) {
            Complex want = i == j ? Complex{1.0, 0.0} : Complex{};
            worst = std::max(worst, std::abs(eng.inner_product(basis[i], basis[j]) - want));
        }
    return worst;
}

}  // namespace

TEST_CASE("ket product states") {
    TddEngine eng;

    SUBCASE("plus plus minus amplitudes") {
        Tdd t = ket_state(eng, "++-");
        auto d = eng.to_dense(t);
        REQUIRE(d.size() == 8);
        double a = 1.0 / std::sqrt(8.0);
        for (int x = 0; x < 8; ++x) {
            double want = (x & 1) ? -a : a;
            CHECK(std::abs(d[x] - Complex{want, 0.0}) <= 1e-12);
        }
    }
    SUBCASE("computational basis string is one-hot") {
        Tdd t = ket_state(eng, "0101");
        auto d = eng.to_dense(t);
        for (int x = 0; x < 16; ++x)
            CHECK(d[x] == (x == 0b0101 ? Complex{1.0, 0.0} : Complex{}));
    }
    SUBCASE("wide product state never densifies") {
        std::string tokens(40, '0');
        tokens[17] = '+';
        tokens[39] = '-';
        Tdd t = ket_state(eng, tokens);
        CHECK(t.rank() == 40);
        CHECK(eng.norm(t) == doctest::Approx(1.0).epsilon(1e-12));
        Assignment all0;
        for (int q = 0; q < 40; ++q) all0[state_label(q)] = 0;
        CHECK(std::abs(eng.evaluate(t, all0) - Complex{0.5, 0.0}) <= 1e-12);
    }
    SUBCASE("bad input") {
        CHECK_THROWS_AS(ket_state(eng, "01a"), ParamError);
        CHECK_THROWS_AS(ket_state(eng, ""), ShapeError);
    }
}

TEST_CASE("outer product and operator application") {
    TddEngine eng;

    SUBCASE("outer product entries are v[y] conj(v[x])") {
        std::vector<Complex> amps =
            normalized({{0.3, 0.4}, {-0.1, 0.9}, {0.7, 0.0}, {0.2, -0.5}});
        Tdd v = state_from_amplitudes(eng, amps, 2);
        auto flat = operator_to_dense(eng, outer_product(eng, v), 2);
        for (int y = 0; y < 4; ++y)
            for (int x = 0; x < 4; ++x)
                CHECK(std::abs(flat[y * 4 + x] - amps[y] * std::conj(amps[x])) <= 1e-12);
    }
    SUBCASE("projector applied to a basis state picks its column") {
        Tdd P = make_projector_fixture(eng);
        Tdd col = apply_operator(eng, P, ket_state(eng, "000"));
        auto d = eng.to_dense(col);
        for (int y = 0; y < 8; ++y)
            CHECK(std::abs(d[y] - Complex{kProjSixths[y][0] / 6.0, 0.0}) <= 1e-12);
    }
    SUBCASE("rank one operator projects onto its vector") {
        Tdd v = state_from_amplitudes(eng, v1_amps(), 3);
        Tdd w = ket_state(eng, "010");
        Tdd got = apply_operator(eng, outer_product(eng, v), w);
        // |v><v|w> with <v|w> = 1/sqrt(6)
        Complex ip = eng.inner_product(v, w);
        CHECK(std::abs(ip - Complex{1.0 / std::sqrt(6.0), 0.0}) <= 1e-12);
        auto d = eng.to_dense(got);
        auto vd = v1_amps();
        for (int y = 0; y < 8; ++y) CHECK(std::abs(d[y] - vd[y] * ip) <= 1e-12);
    }
}

TEST_CASE("first non-zero column walk") {
    TddEngine eng;

    SUBCASE("fixture projector yields column 000") {
        Tdd P = make_projector_fixture(eng);
        auto col = first_nonzero_column(eng, P, 3);
        REQUIRE(col.has_value());
        CHECK(col->first == std::vector<int>{0, 0, 0});
        auto d = eng.to_dense(col->second);
        for (int y = 0; y < 8; ++y)
            CHECK(std::abs(d[y] - Complex{kProjSixths[y][0] / 6.0, 0.0}) <= 1e-12);
        CHECK(col->second.indices() == state_labels(3));
    }
    SUBCASE("zero operator has no column") {
        CHECK(!first_nonzero_column(eng, eng.zero(operator_labels(2)), 2).has_value());
    }
    SUBCASE("walk skips columns that are exactly zero") {
        Tdd P = outer_product(eng, ket_state(eng, "11"));
        auto col = first_nonzero_column(eng, P, 2);
        REQUIRE(col.has_value());
        CHECK(col->first == std::vector<int>{1, 1});
        auto d = eng.to_dense(col->second);
        for (int y = 0; y < 4; ++y)
            CHECK(d[y] == (y == 3 ? Complex{1.0, 0.0} : Complex{}));
    }
    SUBCASE("walk prefers bit zero when the column is non-zero") {
        Tdd P = outer_product(eng, ket_state(eng, "+-"));
        auto col = first_nonzero_column(eng, P, 2);
        REQUIRE(col.has_value());
        CHECK(col->first == std::vector<int>{0, 0});
        // column 00 of |+-><+-| is (1/2)|+->
        auto d = eng.to_dense(col->second);
        CHECK(std::abs(d[0] - Complex{0.25, 0.0}) <= 1e-12);
        CHECK(std::abs(d[1] - Complex{-0.25, 0.0}) <= 1e-12);
    }
}

TEST_CASE("basis decomposition") {
    TddEngine eng;

    SUBCASE("fixture projector peels v1 then v2") {
        Tdd P = make_projector_fixture(eng);
        Subspace s = basis_decompose(eng, P, 3);
        REQUIRE(s.dim() == 2);
        auto b0 = eng.to_dense(s.basis[0]);
        auto b1 = eng.to_dense(s.basis[1]);
        CHECK(max_diff(b0, v1_amps()) <= 1e-10);
        CHECK(max_diff(b1, v2_amps()) <= 1e-10);
        // the stored projector is the input
        CHECK(eng.max_abs(eng.add(s.projector, eng.scalar_mul(Complex{-1.0, 0.0}, P))) ==
              0.0);
    }
    SUBCASE("identity over one qubit decomposes into the standard basis") {
        Tdd eye = dense_to_operator(eng, {{1, 0}, {0, 0}, {0, 0}, {1, 0}}, 1);
        Subspace s = basis_decompose(eng, eye, 1);
        REQUIRE(s.dim() == 2);
        CHECK(eng.to_dense(s.basis[0]) == std::vector<Complex>{{1, 0}, {0, 0}});
        CHECK(eng.to_dense(s.basis[1]) == std::vector<Complex>{{0, 0}, {1, 0}});
    }
    SUBCASE("random projectors round trip through their basis") {
        std::mt19937_64 rng(4242);
        for (int trial = 0; trial < 24; ++trial) {
            int n = 2 + static_cast<int>(rng() % 3);
            int r = 1 + static_cast<int>(rng() % (size_t{1} << n));
            auto orth = random_orthonormal(rng, n, r);
            DenseMat dense = span_projector(orth);
            Subspace s = basis_decompose(eng, dense_to_operator(eng, dense, n), n);
            REQUIRE(s.dim() == static_cast<size_t>(r));
            CHECK(basis_gram_deviation(eng, s.basis) <= 1e-9);
            auto rebuilt = operator_to_dense(eng, projector_from_basis(eng, s.basis, n), n);
            CHECK(max_diff(rebuilt, dense) <= 1e-8);
        }
    }
    SUBCASE("non-idempotent input is rejected") {
        Tdd half = dense_to_operator(eng, {{0.5, 0}, {0, 0}, {0, 0}, {0, 0}}, 1);
        CHECK_THROWS_AS(basis_decompose(eng, half, 1), NonProjectorError);
    }
    SUBCASE("operand must be an operator over every qubit") {
        CHECK_THROWS_AS(basis_decompose(eng, ket_state(eng, "00"), 2), ShapeError);
    }
}

TEST_CASE("projector from an orthonormal basis") {
    TddEngine eng;

    SUBCASE("empty basis gives the zero operator") {
        Tdd p = projector_from_basis(eng, {}, 2);
        CHECK(p.is_zero());
        CHECK(p.indices() == operator_labels(2));
    }
    SUBCASE("single computational state") {
        auto flat = operator_to_dense(eng, projector_from_basis(eng, {ket_state(eng, "0")}, 1), 1);
        CHECK(max_diff(flat, {{1, 0}, {0, 0}, {0, 0}, {0, 0}}) == 0.0);
    }
    SUBCASE("the two fixture vectors rebuild the fixture matrix") {
        Tdd v1 = state_from_amplitudes(eng, v1_amps(), 3);
        Tdd v2 = state_from_amplitudes(eng, v2_amps(), 3);
        Tdd p = projector_from_basis(eng, {v1, v2}, 3);
        Tdd want = make_projector_fixture(eng);
        CHECK(eng.max_abs(eng.add(p, eng.scalar_mul(Complex{-1.0, 0.0}, want))) <= 1e-12);
    }
    SUBCASE("non-orthonormal families are rejected") {
        CHECK_THROWS_AS(
            projector_from_basis(eng, {ket_state(eng, "0"), ket_state(eng, "+")}, 1),
            PreconditionError);
        Tdd shrunk = eng.scalar_mul(Complex{0.5, 0.0}, ket_state(eng, "0"));
        CHECK_THROWS_AS(projector_from_basis(eng, {shrunk}, 1), PreconditionError);
    }
}

TEST_CASE("join runs Gram-Schmidt") {
    TddEngine eng;

    SUBCASE("plus-plus-minus joined with one-one-minus spans the fixture") {
        Subspace a = subspace_from_states(eng, {ket_state(eng, "++-")}, 3);
        Subspace b = subspace_from_states(eng, {ket_state(eng, "11-")}, 3);
        Subspace s = join(eng, a, b);
        REQUIRE(s.dim() == 2);
        Tdd want = make_projector_fixture(eng);
        CHECK(eng.max_abs(eng.add(s.projector, eng.scalar_mul(Complex{-1.0, 0.0}, want))) <=
              1e-9);
        // second vector is -(1/(2 sqrt 3))(|00> + |01> + |10> - 3|11>)|->
        double k = 1.0 / (2.0 * std::sqrt(3.0));
        std::vector<Complex> w(8);
        const double g[4] = {-k, -k, -k, 3.0 * k};
        for (int x = 0; x < 8; ++x)
            w[x] = Complex{g[x >> 1] * kInvSqrt2 * ((x & 1) ? -1.0 : 1.0), 0.0};
        CHECK(max_diff(eng.to_dense(s.basis[1]), w) <= 1e-12);
    }
    SUBCASE("join with itself changes nothing") {
        Subspace s = basis_decompose(eng, make_projector_fixture(eng), 3);
        Subspace t = join(eng, s, s);
        CHECK(t.dim() == 2);
        CHECK(equal_subspace(eng, s, t));
    }
    SUBCASE("orthogonal joins add dimensions and projectors") {
        std::mt19937_64 rng(99);
        for (int trial = 0; trial < 12; ++trial) {
            int n = 2 + static_cast<int>(rng() % 3);
            int r1 = 1 + static_cast<int>(rng() % 2), r2 = 1 + static_cast<int>(rng() % 2);
            auto orth = random_orthonormal(rng, n, r1 + r2);
            std::vector<Tdd> ta, tb;
            for (int i = 0; i < r1; ++i) ta.push_back(state_from_amplitudes(eng, orth[i], n));
            for (int i = r1; i < r1 + r2; ++i)
                tb.push_back(state_from_amplitudes(eng, orth[i], n));
            Subspace a = subspace_from_states(eng, ta, n);
            Subspace b = subspace_from_states(eng, tb, n);
            Subspace s = join(eng, a, b);
            REQUIRE(s.dim() == static_cast<size_t>(r1 + r2));
            Tdd sum = eng.add(a.projector, b.projector);
            CHECK(eng.max_abs(eng.add(s.projector, eng.scalar_mul(Complex{-1.0, 0.0}, sum))) <=
                  1e-8);
            CHECK(equal_subspace(eng, s, join(eng, b, a)));
        }
    }
    SUBCASE("a nearly contained state still comes out orthonormal") {
        Tdd v1 = state_from_amplitudes(eng, v1_amps(), 3);
        Tdd v2 = state_from_amplitudes(eng, v2_amps(), 3);
        Subspace a = subspace_from_states(eng, {v1}, 3);
        // psi = normalize(v1 + 1e-5 v2): the residual against span{v1} is tiny,
        // which forces the repeated orthogonalization pass.
        Tdd psi = eng.add(v1, eng.scalar_mul(Complex{1e-5, 0.0}, v2));
        psi = eng.scalar_mul(Complex{1.0 / eng.norm(psi), 0.0}, psi);
        Subspace s = join(eng, a, subspace_from_states(eng, {psi}, 3));
        REQUIRE(s.dim() == 2);
        CHECK(basis_gram_deviation(eng, s.basis) <= 1e-9);
        CHECK(std::abs(std::abs(eng.inner_product(s.basis[1], v2)) - 1.0) <= 1e-6);
    }
    SUBCASE("qubit count mismatch") {
        Subspace a = empty_subspace(eng, 2), b = empty_subspace(eng, 3);
        CHECK_THROWS_AS(join(eng, a, b), ShapeError);
    }
}

TEST_CASE("span of arbitrary states") {
    TddEngine eng;

    SUBCASE("non-orthogonal generators of the fixture subspace") {
        Subspace s =
            subspace_from_states(eng, {ket_state(eng, "++-"), ket_state(eng, "11-")}, 3);
        REQUIRE(s.dim() == 2);
        Tdd want = make_projector_fixture(eng);
        CHECK(eng.max_abs(eng.add(s.projector, eng.scalar_mul(Complex{-1.0, 0.0}, want))) <=
              1e-9);
    }
    SUBCASE("duplicates and zero states are skipped") {
        Tdd v1 = state_from_amplitudes(eng, v1_amps(), 3);
        Subspace s = subspace_from_states(eng, {v1, eng.zero(state_labels(3)), v1}, 3);
        CHECK(s.dim() == 1);
    }
    SUBCASE("dependent family collapses to its rank") {
        std::vector<Complex> p = {{kInvSqrt2, 0}, {kInvSqrt2, 0}};
        std::vector<Complex> m = {{kInvSqrt2, 0}, {-kInvSqrt2, 0}};
        Subspace s = subspace_from_states(
            eng,
            {state_from_amplitudes(eng, p, 1), state_from_amplitudes(eng, m, 1),
             ket_state(eng, "1")},
            1);
        CHECK(s.dim() == 2);
    }
    SUBCASE("global phase does not change the span") {
        Tdd v1 = state_from_amplitudes(eng, v1_amps(), 3);
        Complex phase = std::polar(1.0, 1.234);
        Subspace a = subspace_from_states(eng, {v1}, 3);
        Subspace b = subspace_from_states(eng, {eng.scalar_mul(phase, v1)}, 3);
        CHECK(equal_subspace(eng, a, b));
    }
    SUBCASE("random families give orthonormal bases") {
        std::mt19937_64 rng(7);
        for (int trial = 0; trial < 20; ++trial) {
            int n = 2 + static_cast<int>(rng() % 3);
            int count = 1 + static_cast<int>(rng() % 5);
            std::vector<Tdd> states;
            for (int i = 0; i < count; ++i)
                states.push_back(
                    state_from_amplitudes(eng, random_entries(rng, size_t{1} << n, 0.2), n));
            Subspace s = subspace_from_states(eng, states, n);
            CHECK(s.dim() <= static_cast<size_t>(count));
            CHECK(basis_gram_deviation(eng, s.basis) <= 1e-9);
        }
    }
}

TEST_CASE("initial subspace of a transition system") {
    TddEngine eng;

    SUBCASE("kets and explicit vectors combine") {
        InitSpec init;
        init.kets = {"00"};
        init.vecs = {{{0, 0}, {0, 0}, {0, 0}, {1, 0}}};
        Subspace s = subspace_from_init(eng, init, 2);
        REQUIRE(s.dim() == 2);
        std::vector<Complex> want(16);
        want[operator_addr(0, 0, 2)] = Complex{1.0, 0.0};
        want[operator_addr(3, 3, 2)] = Complex{1.0, 0.0};
        CHECK(max_diff(eng.to_dense(s.projector), want) <= 1e-12);
    }
    SUBCASE("empty init spans nothing") {
        Subspace s = subspace_from_init(eng, InitSpec{}, 2);
        CHECK(s.dim() == 0);
        CHECK(s.projector.is_zero());
    }
    SUBCASE("ket length must match the register") {
        InitSpec init;
        init.kets = {"010"};
        CHECK_THROWS_AS(subspace_from_init(eng, init, 2), ShapeError);
    }
}

TEST_CASE("subspace equality") {
    TddEngine eng;

    SUBCASE("decomposed and joined forms of the fixture agree") {
        Subspace a = basis_decompose(eng, make_projector_fixture(eng), 3);
        Subspace b =
            subspace_from_states(eng, {ket_state(eng, "++-"), ket_state(eng, "11-")}, 3);
        CHECK(equal_subspace(eng, a, b));
    }
    SUBCASE("different dimensions") {
        Subspace a = subspace_from_states(eng, {ket_state(eng, "++-")}, 3);
        Subspace b = basis_decompose(eng, make_projector_fixture(eng), 3);
        CHECK(!equal_subspace(eng, a, b));
    }
    SUBCASE("same dimension, different spans") {
        Subspace a = subspace_from_states(eng, {ket_state(eng, "0")}, 1);
        Subspace b = subspace_from_states(eng, {ket_state(eng, "1")}, 1);
        CHECK(!equal_subspace(eng, a, b));
    }
    SUBCASE("register size mismatch throws") {
        Subspace a = empty_subspace(eng, 1), b = empty_subspace(eng, 2);
        CHECK_THROWS_AS(equal_subspace(eng, a, b), ShapeError);
    }
}
