#pragma once

#include <string>
#include <vector>

#include "mroot/linalg.hpp"
#include "mroot/noether.hpp"
#include "mroot/random.hpp"
#include "mroot/sysfile.hpp"

namespace mroot::testsupport {

inline Vec real_unit(Rng& rng, int n) {
    Vec v(n);
    for (cd& c : v) c = rng.gauss();
    const double nn = norm2(v);
    for (cd& c : v) c /= nn;
    return v;
}

/// Breadth-one system with a known root and multiplicity, built as
///   f_1 = x_1^mu + sum_j c_j (x_j - q_j(x_1)),  f_j = x_j - q_j(x_1)
/// (q_j of valuation >= 2, so the local ideal is (x_1^mu, x_2 - q_2, ...)),
/// then pushed through a random unitary change of variables and a shift.
struct Planted {
    PolySystem f;
    Point root;
    int mu = 0;
    Vec null_dir; // unit null vector of the Jacobian at the root
};

inline Planted make_planted(uint64_t seed, int s, int mu) {
    Rng rng(seed);
    const int qdeg = std::min(mu, 4);

    std::vector<Poly> base;
    Poly f1(s);
    Monomial top = Monomial::unit(s);
    top.e[0] = mu;
    f1.add_term(top, 1.0);
    for (int j = 1; j < s; ++j) {
        Poly fj = Poly::variable(s, j);
        for (int d = 2; d <= qdeg; ++d) {
            Monomial m = Monomial::unit(s);
            m.e[0] = d;
            fj.add_term(m, -0.5 * rng.complex_gauss());
        }
        const cd cj = cd(0.4 + 0.8 * rng.uniform()) * std::polar(1.0, 6.2831853 * rng.uniform());
        f1 = f1 + fj.scaled(cj);
        base.push_back(fj);
    }
    std::vector<Poly> polys;
    polys.push_back(f1);
    for (auto& p : base) polys.push_back(p);
    PolySystem fbase(std::move(polys), s);

    const Matrix w = rng.unitary(s);
    Vec root(s);
    for (cd& c : root) c = 0.5 * rng.complex_gauss();

    // F(x) = F_base(W* (x - root)).
    const PolySystem t = compose_linear(fbase, w.adjoint());
    std::vector<Poly> shifted;
    Point minus_root(root);
    for (cd& c : minus_root.coords) c = -c;
    for (const Poly& p : t.polys()) shifted.push_back(taylor_at(p, minus_root));

    Planted out;
    out.f = PolySystem(std::move(shifted), s);
    out.root = Point(std::move(root));
    out.mu = mu;
    out.null_dir = w.col(0);
    return out;
}

/// Relative least-squares residual of target against the span of basis
/// (as coefficient vectors over the union of their monomial supports).
inline double span_residual(const DiffOp& target, const std::vector<DiffOp>& basis) {
    std::map<Monomial, int, GradedLexLess> index;
    auto index_terms = [&](const DiffOp& op) {
        for (const auto& [m, c] : op.terms())
            index.emplace(m, static_cast<int>(index.size()));
    };
    index_terms(target);
    for (const DiffOp& b : basis) index_terms(b);
    const int rows = static_cast<int>(index.size());
    const int cols = static_cast<int>(basis.size());
    Vec rhs(rows, cd(0.0));
    for (const auto& [m, c] : target.terms()) rhs[index.at(m)] = c;
    const double rhs_norm = norm2(rhs);
    if (rhs_norm == 0.0) return 0.0;
    if (cols == 0) return 1.0;
    Matrix a(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (const auto& [m, c] : basis[j].terms()) a(index.at(m), j) = c;
    // Pseudo-inverse solve; the basis may be numerically rank-deficient.
    const SvdFactorization sv = svd(a);
    const Vec ub = sv.u.mul_adjoint(rhs);
    Vec w(cols, cd(0.0));
    for (size_t i = 0; i < sv.singvals.size(); ++i)
        if (sv.singvals[i] > 1e-13 * sv.singvals.front()) w[i] = ub[i] / sv.singvals[i];
    const Vec x = sv.v.mul(w);
    return norm2(a.mul(x) - rhs) / rhs_norm;
}

inline SystemFile load_corpus(const std::string& name) {
    return load_system(std::string(MROOT_CORPUS_DIR) + "/" + name);
}

/// L_k . d/dz_1 + sum_j (2 a_{2,j} L_{k-1} + ... + k a_{k,j} L_1) . d/dz_j,
/// the composed ladder that must equal (k+1) P_{k+1} exactly.
inline DiffOp composed_ladder(const NoetherBasis& basis, int k) {
    const int n = basis.ops[0].nvars();
    DiffOp q = times_partial(basis.ops[k], 0);
    for (int jm = 2; jm <= n; ++jm) {
        DiffOp combo(n);
        for (int i = 2; i <= k; ++i)
            combo = combo + basis.ops[k + 1 - i].scaled(static_cast<double>(i) * basis.param(i, jm));
        if (!combo.is_zero()) q = q + times_partial(combo, jm - 1);
    }
    return q;
}

/// Worst relative coefficient defect of the composition identity across
/// all orders of the basis.
inline double composition_identity_defect(const NoetherBasis& basis) {
    double worst = 0.0;
    for (int k = 1; k + 1 <= basis.mu(); ++k) {
        const DiffOp q = composed_ladder(basis, k);
        const DiffOp p = build_p_k(basis, k + 1).scaled(static_cast<double>(k + 1));
        const double scale = std::max(1.0, p.max_abs_coeff());
        worst = std::max(worst, (q - p).max_abs_coeff() / scale);
    }
    return worst;
}

} // namespace mroot::testsupport
