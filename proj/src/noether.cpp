#include "mroot/noether.hpp"

#include <cmath>
#include <stdexcept>

#include "mroot/errors.hpp"

namespace mroot {

NoetherBasis initial_basis(const PolySystem& f, const Point& pt) {
    NoetherBasis b;
    b.ops.push_back(DiffOp::identity(f.nvars()));
    b.ops.push_back(DiffOp::first_order(f.nvars(), 0));
    b.params.resize(2);
    b.residuals.push_back(norm2(apply(b.ops[0], f, pt)));
    b.residuals.push_back(norm2(apply(b.ops[1], f, pt)));
    return b;
}

DiffOp build_p_k(const NoetherBasis& basis, int k) {
    if (k < 2 || k > basis.mu()) throw std::invalid_argument("build_p_k: order out of range");
    const int n = basis.ops[0].nvars();
    DiffOp p = psi(basis.ops[k - 1], 0, {});
    std::set<int> mask;
    for (int jm = 2; jm <= n; ++jm) {
        mask.insert(jm - 2); // alpha_1 = ... = alpha_{j-1} = 0
        DiffOp q(n);
        for (int i = 2; i <= k - 1; ++i) q = q + basis.ops[k - i].scaled(basis.param(i, jm));
        if (!q.is_zero()) p = p + psi(q, jm - 1, mask);
    }
    return p;
}

ExtendOutcome extend_basis(const PolySystem& f, const Point& pt, const NoetherBasis& basis, double tau) {
    const int n = f.nvars();
    const int t = f.npolys();
    const int k = basis.mu();

    ExtendOutcome out;
    out.p_k = build_p_k(basis, k);
    const Vec col_p = apply(out.p_k, f, pt);

    if (n == 1) {
        out.order_matrix = Matrix(t, 1);
        out.order_matrix.set_col(0, col_p);
        out.sigma_min = norm2(col_p);
        out.sigma_max = coefficient_scale(f, pt);
        if (out.sigma_min >= tau * out.sigma_max) {
            out.extended = false;
            out.basis = basis;
            return out;
        }
        out.extended = true;
        out.basis = basis;
        out.basis.ops.push_back(out.p_k);
        out.basis.params.emplace_back();
        out.basis.residuals.push_back(out.sigma_min);
        return out;
    }

    Matrix m(t, n);
    m.set_col(0, col_p);
    const Matrix jac = jacobian(f, pt);
    for (int jm = 2; jm <= n; ++jm)
        for (int i = 0; i < t; ++i) m(i, jm - 1) = jac(i, jm - 1);
    out.order_matrix = m;

    const SvdFactorization sv = svd(m);
    out.sigma_max = sv.singvals.front();
    out.sigma_min = sv.singvals.back();
    if (out.sigma_min >= tau * out.sigma_max) {
        out.extended = false;
        out.basis = basis;
        return out;
    }

    Vec w = sv.v.col(n - 1);
    if (std::abs(w[0]) <= 1e-8)
        throw DegenerateError("extend_basis: leading entry of the order-" + std::to_string(k) +
                              " singular vector is too small");
    const cd lead = w[0];
    for (cd& c : w) c /= lead;
    w[0] = 1.0;

    DiffOp l_k = out.p_k;
    std::vector<cd> row(n - 1);
    for (int jm = 2; jm <= n; ++jm) {
        row[jm - 2] = w[jm - 1];
        l_k = l_k + DiffOp::basis(Monomial::var(n, jm - 1), w[jm - 1]);
    }

    out.extended = true;
    out.basis = basis;
    out.basis.ops.push_back(l_k);
    out.basis.params.push_back(std::move(row));
    out.basis.residuals.push_back(norm2(apply(l_k, f, pt)));
    return out;
}

BasisBuild build_basis(const PolySystem& f, const Point& pt, double tau, int max_mu) {
    NoetherBasis basis = initial_basis(f, pt);
    for (;;) {
        if (basis.mu() > max_mu)
            throw BreadthError("build_basis: no terminating order found up to mu = " +
                               std::to_string(max_mu));
        ExtendOutcome out = extend_basis(f, pt, basis, tau);
        if (!out.extended) {
            BasisBuild done;
            done.basis = std::move(out.basis);
            done.final_matrix = std::move(out.order_matrix);
            done.p_mu = std::move(out.p_k);
            done.final_sigma_min = out.sigma_min;
            done.final_sigma_max = out.sigma_max;
            return done;
        }
        basis = std::move(out.basis);
    }
}

std::vector<DiffOp> augmented_noether_basis(const NoetherBasis& base) {
    const int mu = base.mu();
    if (mu < 2) throw std::invalid_argument("augmented_noether_basis: base basis must have mu >= 2");
    const int n = base.ops[0].nvars();
    const int nn = 2 * n;

    std::vector<DiffOp> lt;
    lt.push_back(DiffOp::identity(nn));
    if (mu - 2 < 1) return lt;

    DiffOp l1 = DiffOp::first_order(nn, 0);
    for (int jm = 2; jm <= n; ++jm)
        l1 = l1 + DiffOp::basis(Monomial::var(nn, n + jm - 1), 2.0 * base.param(2, jm));
    lt.push_back(l1);

    for (int k = 2; k <= mu - 2; ++k) {
        DiffOp pt = build_p_k(base, k).embedded(nn);
        std::set<int> mask; // alpha_{n+2} = ... = alpha_{n+j-1} = 0
        for (int jm = 2; jm <= n; ++jm) {
            if (jm > 2) mask.insert(n + jm - 2);
            DiffOp q(nn);
            for (int i = 2; i <= k; ++i)
                q = q + lt[k + 1 - i].scaled(static_cast<double>(i) * base.param(i, jm));
            if (!q.is_zero()) pt = pt + psi(q, n + jm - 1, mask);
        }
        DiffOp l = pt;
        for (int jm = 2; jm <= n; ++jm) {
            l = l + DiffOp::basis(Monomial::var(nn, jm - 1), base.param(k, jm));
            l = l + DiffOp::basis(Monomial::var(nn, n + jm - 1),
                                  static_cast<double>(k + 1) * base.param(k + 1, jm));
        }
        lt.push_back(l);
    }
    return lt;
}

} // namespace mroot
