#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mroot/errors.hpp"
#include "mroot/noether.hpp"
#include "mroot/oracle.hpp"

#include "support.hpp"

using namespace mroot;
using namespace mroot::testsupport;

namespace {

Monomial mono(std::vector<int> e) {
    return Monomial(std::move(e));
}

Poly from_terms(int nvars, std::initializer_list<std::pair<std::vector<int>, cd>> terms) {
    Poly p(nvars);
    for (const auto& [e, c] : terms) p.add_term(Monomial(std::vector<int>(e)), c);
    return p;
}

// {x1^2 - x2, x2^2}: multiplicity 4 at the origin, null direction e1.
PolySystem spec_pair() {
    return PolySystem(
        {from_terms(2, {{{2, 0}, 1.0}, {{0, 1}, -1.0}}), from_terms(2, {{{0, 2}, 1.0}})}, 2);
}

double coeff_distance(const DiffOp& a, const DiffOp& b) {
    return (a - b).max_abs_coeff();
}

void check_composition_identity(const NoetherBasis& basis) {
    CHECK(composition_identity_defect(basis) <= 1e-10);
}

} // namespace

TEST_CASE("build_p_k: order two is always the pure second derivative") {
    const PolySystem f = spec_pair();
    const NoetherBasis basis = initial_basis(f, Point({0.0, 0.0}));
    CHECK(build_p_k(basis, 2) == DiffOp::basis(mono({2, 0})));
}

TEST_CASE("basis extension on the multiplicity-4 pair") {
    const PolySystem f = spec_pair();
    const Point origin({0.0, 0.0});
    NoetherBasis basis = initial_basis(f, origin);

    // Order 2: a_{2,2} = 1, L_2 = D(2,0) + D(0,1).
    ExtendOutcome o2 = extend_basis(f, origin, basis, 1e-8);
    REQUIRE(o2.extended);
    basis = o2.basis;
    CHECK(std::abs(basis.param(2, 2) - cd(1.0)) < 1e-12);
    CHECK(coeff_distance(basis.ops[2], DiffOp::basis(mono({2, 0})) + DiffOp::basis(mono({0, 1}))) <
          1e-12);

    // Order 3: P_3 = D(3,0) + D(1,1) and a_{3,2} = 0.
    ExtendOutcome o3 = extend_basis(f, origin, basis, 1e-8);
    REQUIRE(o3.extended);
    CHECK(coeff_distance(o3.p_k, DiffOp::basis(mono({3, 0})) + DiffOp::basis(mono({1, 1}))) < 1e-12);
    basis = o3.basis;
    CHECK(std::abs(basis.param(3, 2)) < 1e-12);
    CHECK(coeff_distance(basis.ops[3], DiffOp::basis(mono({3, 0})) + DiffOp::basis(mono({1, 1}))) <
          1e-12);

    // Order 4: the rank test fails, mu = 4.
    ExtendOutcome o4 = extend_basis(f, origin, basis, 1e-8);
    CHECK_FALSE(o4.extended);
    CHECK(basis.mu() == 4);
}

TEST_CASE("build_basis stops at the multiplicity and exposes the last matrix") {
    const PolySystem f = spec_pair();
    const BasisBuild bb = build_basis(f, Point({0.0, 0.0}), 1e-8);
    CHECK(bb.basis.mu() == 4);
    CHECK(bb.final_matrix.rows() == 2);
    CHECK(bb.final_matrix.cols() == 2);
    // Residuals of an exact basis at the exact root are tiny.
    for (double r : bb.basis.residuals) CHECK(r < 1e-12);
}

TEST_CASE("build_p_k: decoupled parameters give the pure derivative") {
    // With all a_{k,j} = 0 the parameter-free parts stay D(k, 0, ..., 0).
    Poly f1(3);
    f1.add_term(mono({3, 0, 0}), 1.0);
    PolySystem f({f1, Poly::variable(3, 1), Poly::variable(3, 2)}, 3);
    const BasisBuild bb = build_basis(f, Point({0.0, 0.0, 0.0}), 1e-8);
    CHECK(bb.basis.mu() == 3);
    CHECK(build_p_k(bb.basis, 3) == DiffOp::basis(mono({3, 0, 0})));
}

TEST_CASE("univariate termination by the coefficient scale") {
    Poly p(1);
    p.add_term(mono({2}), 1.0);
    const PolySystem f({p}, 1);
    const BasisBuild bb = build_basis(f, Point({0.0}), 1e-8);
    CHECK(bb.basis.mu() == 2);
    CHECK(bb.final_matrix.rows() == 1);
    CHECK(std::abs(bb.final_matrix(0, 0) - cd(1.0)) < 1e-14);
}

TEST_CASE("phi_1 of the parameter-free part recovers the previous operator") {
    for (uint64_t seed : {51ull, 52ull}) {
        const Planted pl = make_planted(seed, 3, 4);
        const Vec r1 = pl.null_dir;
        const Matrix r = complete_unitary(r1);
        const PolySystem h = compose_linear(pl.f, r);
        const Point z(r.adjoint().mul(pl.root.coords));
        const BasisBuild bb = build_basis(h, z, 1e-6);
        REQUIRE(bb.basis.mu() == 4);
        for (int k = 2; k <= bb.basis.mu(); ++k) {
            const DiffOp p = build_p_k(bb.basis, k);
            CHECK(coeff_distance(phi(p, 0), bb.basis.ops[k - 1]) < 1e-12);
        }
    }
}

TEST_CASE("closedness: lowered operators stay in the span of earlier ones") {
    for (uint64_t seed : {61ull, 62ull, 63ull}) {
        const Planted pl = make_planted(seed, 3, 5);
        const Matrix r = complete_unitary(pl.null_dir);
        const PolySystem h = compose_linear(pl.f, r);
        const Point z(r.adjoint().mul(pl.root.coords));
        const BasisBuild bb = build_basis(h, z, 1e-6);
        REQUIRE(bb.basis.mu() == 5);
        for (int k = 1; k < bb.basis.mu(); ++k) {
            std::vector<DiffOp> lower(bb.basis.ops.begin(), bb.basis.ops.begin() + k);
            for (int j = 0; j < h.nvars(); ++j) {
                const DiffOp low = phi(bb.basis.ops[k], j);
                CHECK(span_residual(low, lower) <= 1e-8);
            }
        }
    }
}

TEST_CASE("annihilation scales linearly with the error in the point") {
    const Planted pl = make_planted(71, 2, 4);
    Rng rng(72);
    const Vec u = rng.unit_vector(2);
    for (double eps : {1e-3, 1e-5}) {
        const Point near(pl.root.coords + cd(eps) * u);
        // Use the exact null direction: the rotation is frozen across eps.
        const Matrix r = complete_unitary(pl.null_dir);
        const PolySystem h = compose_linear(pl.f, r);
        const Point z(r.adjoint().mul(near.coords));
        const BasisBuild bb = build_basis(h, z, 1e-2);
        REQUIRE(bb.basis.mu() == 4);
        for (int k = 0; k < 4; ++k) CHECK(bb.basis.residuals[k] <= 100.0 * eps);
    }
}

TEST_CASE("annihilation sharpens to eps^2 after the null-vector rotation") {
    // When the rotation is recomputed at the regularized Newton point, the
    // residuals of all but the top operator drop to second order.
    const Planted pl = make_planted(73, 3, 4);
    Rng rng(74);
    const Vec u = rng.unit_vector(3);
    for (double eps : {1e-3, 1e-4}) {
        const Point x(pl.root.coords + cd(eps) * u);
        const auto step = regularized_newton_step(pl.f, x);
        const Point x1(x.coords + step.y);
        const Vec r1 = null_vector(jacobian(pl.f, x1), 1e-2);
        const Matrix r = complete_unitary(r1);
        const PolySystem h = compose_linear(pl.f, r);
        const Point z(r.adjoint().mul(x1.coords));
        const BasisBuild bb = build_basis(h, z, 1e-2);
        REQUIRE(bb.basis.mu() == 4);
        for (int i = 0; i + 1 < bb.basis.mu(); ++i)
            CHECK(bb.basis.residuals[i] <= 100.0 * eps * eps);
    }
}

TEST_CASE("operator composition identity for the parameter-free parts") {
    // Exact identity between the composed operator ladder and the next
    // parameter-free part, checked coefficient-wise for every basis.
    const PolySystem pair = spec_pair();
    check_composition_identity(build_basis(pair, Point({0.0, 0.0}), 1e-8).basis);

    for (uint64_t seed : {81ull, 82ull}) {
        for (int s : {2, 3}) {
            for (int mu : {3, 5, 6}) {
                const Planted pl = make_planted(seed * 7 + s + mu, s, mu);
                const Matrix r = complete_unitary(pl.null_dir);
                const PolySystem h = compose_linear(pl.f, r);
                const Point z(r.adjoint().mul(pl.root.coords));
                const BasisBuild bb = build_basis(h, z, 1e-6);
                REQUIRE(bb.basis.mu() == mu);
                check_composition_identity(bb.basis);
            }
        }
    }
}

TEST_CASE("basis length matches the brute-force multiplicity") {
    for (uint64_t seed : {91ull, 92ull}) {
        for (int s : {2, 3}) {
            for (int mu : {2, 3, 4}) {
                const Planted pl = make_planted(seed * 13 + 2 * s + mu, s, mu);
                const Matrix r = complete_unitary(pl.null_dir);
                const PolySystem h = compose_linear(pl.f, r);
                const Point z(r.adjoint().mul(pl.root.coords));
                const BasisBuild bb = build_basis(h, z, 1e-6);
                const MultiplicityResult mr = multiplicity(pl.f, pl.root, 1e-8);
                CHECK(bb.basis.mu() == mu);
                CHECK(mr.mu == mu);
            }
        }
    }
}

TEST_CASE("degenerate parameterization raises an error") {
    // A system where the near-null combination has a vanishing leading
    // weight: the order matrix [P_2(F), dF/dx_2] with P_2(F) of full size
    // and dF/dx_2 tiny forces the singular vector toward e_2.
    Poly f1 = from_terms(2, {{{2, 0}, 1.0}});            // x^2
    Poly f2 = from_terms(2, {{{0, 1}, 1e-12}});          // 1e-12 y
    const PolySystem f({f1, f2}, 2);
    NoetherBasis basis = initial_basis(f, Point({0.0, 0.0}));
    CHECK_THROWS_AS(extend_basis(f, Point({0.0, 0.0}), basis, 0.5), DegenerateError);
}
