#include "mroot/oracle.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "mroot/errors.hpp"
#include "mroot/linalg.hpp"

namespace mroot {

namespace {

void enumerate_monomials(int nvars, int max_degree, std::vector<Monomial>& out) {
    // Graded-lex ascending, matching the canonical term order.
    Monomial m = Monomial::unit(nvars);
    std::vector<Monomial> bucket;
    std::function<void(int, int)> rec = [&](int var, int left) {
        if (var == nvars - 1) {
            m.e[var] = left;
            bucket.push_back(m);
            m.e[var] = 0;
            return;
        }
        for (int e = left; e >= 0; --e) {
            m.e[var] = e;
            rec(var + 1, left - e);
        }
        m.e[var] = 0;
    };
    GradedLexLess less;
    for (int d = 0; d <= max_degree; ++d) {
        bucket.clear();
        rec(0, d);
        std::sort(bucket.begin(), bucket.end(), [&](const Monomial& a, const Monomial& b) { return less(a, b); });
        out.insert(out.end(), bucket.begin(), bucket.end());
    }
}

} // namespace

MacaulayMatrix macaulay_matrix(const PolySystem& f, const Point& pt, int order) {
    if (order < 1) throw std::invalid_argument("macaulay_matrix: order must be >= 1");
    MacaulayMatrix mm;
    mm.order = order;
    enumerate_monomials(f.nvars(), order, mm.cols);

    std::vector<Monomial> shifts;
    enumerate_monomials(f.nvars(), order - 1, shifts);

    std::map<Monomial, int, GradedLexLess> col_index;
    for (size_t j = 0; j < mm.cols.size(); ++j) col_index.emplace(mm.cols[j], static_cast<int>(j));

    std::vector<Poly> taylors;
    for (const Poly& p : f.polys()) taylors.push_back(taylor_at(p, pt));

    const int rows = f.npolys() * static_cast<int>(shifts.size());
    mm.m = Matrix(rows, static_cast<int>(mm.cols.size()));
    int row = 0;
    for (int i = 0; i < f.npolys(); ++i) {
        for (const Monomial& beta : shifts) {
            // Row of (x - pt)^beta f_i: Taylor coefficient at alpha equals
            // the coefficient of alpha - beta in the Taylor expansion of f_i.
            for (const auto& [gamma, c] : taylors[i].terms()) {
                Monomial alpha = gamma;
                for (int v = 0; v < f.nvars(); ++v) alpha.e[v] += beta.e[v];
                if (alpha.degree() > order) continue;
                mm.m(row, col_index.at(alpha)) = c;
            }
            ++row;
        }
    }
    return mm;
}

namespace {

int numerical_nullity(const Matrix& m, double tau) {
    const SvdFactorization sv = svd(m);
    const double sig1 = sv.singvals.front();
    int rank = 0;
    for (double s : sv.singvals)
        if (sig1 > 0.0 && s >= tau * sig1) ++rank;
    return m.cols() - rank;
}

} // namespace

MultiplicityResult multiplicity(const PolySystem& f, const Point& pt, double tau, int k_max) {
    MultiplicityResult res;
    res.nullity_by_order.push_back(1); // order 0: the evaluation functional
    int prev = 1;
    for (int k = 1; k <= k_max; ++k) {
        const MacaulayMatrix mm = macaulay_matrix(f, pt, k);
        const int nullity = numerical_nullity(mm.m, tau);
        res.nullity_by_order.push_back(nullity);
        if (nullity == prev) {
            res.mu = nullity;
            res.rho = k;
            // Null space columns of V, reinterpreted as operators.
            const SvdFactorization sv = svd(mm.m);
            const int ncols = mm.m.cols();
            for (int j = ncols - nullity; j < ncols; ++j) {
                DiffOp op(f.nvars());
                for (int irow = 0; irow < ncols; ++irow) {
                    const cd c = sv.v(irow, j);
                    if (std::abs(c) > 0.0) op.add_term(mm.cols[irow], c);
                }
                res.dual_basis.push_back(op);
            }
            return res;
        }
        prev = nullity;
    }
    throw NoStabilizationError("multiplicity: nullity did not stabilize by order " + std::to_string(k_max));
}

std::vector<DiffOp> dual_basis_bruteforce(const PolySystem& f, const Point& pt, double tau, int k_max) {
    return multiplicity(f, pt, tau, k_max).dual_basis;
}

} // namespace mroot
