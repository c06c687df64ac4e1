#include "mroot/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mroot/errors.hpp"

namespace mroot {

namespace {

cd unit_phase(cd z) {
    const double a = std::abs(z);
    return a == 0.0 ? cd(1.0) : z / a;
}

// Make the largest-magnitude entry of column j of v real positive, and
// apply the same phase change to column j of u so u sigma v* is preserved.
void fix_column_phase(Matrix& v, Matrix& u, int j) {
    int arg = 0;
    double best = -1.0;
    for (int i = 0; i < v.rows(); ++i) {
        const double a = std::abs(v(i, j));
        if (a > best) {
            best = a;
            arg = i;
        }
    }
    const cd s = std::conj(unit_phase(v(arg, j)));
    for (int i = 0; i < v.rows(); ++i) v(i, j) *= s;
    if (j < u.cols())
        for (int i = 0; i < u.rows(); ++i) u(i, j) *= s;
}

// One-sided Jacobi for rows >= cols. Returns U (rows x rows, completed to a
// full unitary basis), the cols singular values and V (cols x cols).
SvdFactorization jacobi_svd_tall(const Matrix& a) {
    const int m = a.rows(), n = a.cols();
    Matrix b = a;
    Matrix v = Matrix::identity(n);

    const double tol = 1e-14;
    const int sweep_cap = 60;
    double scale = 0.0;
    for (int j = 0; j < n; ++j) scale = std::max(scale, norm2(b.col(j)));
    // Columns this far below the matrix scale are numerical debris; they
    // never decorrelate and would keep the sweep loop spinning.
    const double zero_floor = scale * 1e-140;
    for (int sweep = 0;; ++sweep) {
        if (sweep >= sweep_cap) throw std::runtime_error("svd: Jacobi sweep cap exceeded");
        bool rotated = false;
        for (int j = 0; j < n; ++j) {
            double cn = 0.0;
            for (int i = 0; i < m; ++i) cn += std::norm(b(i, j));
            if (cn > 0.0 && std::sqrt(cn) <= zero_floor)
                for (int i = 0; i < m; ++i) b(i, j) = 0.0;
        }
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0;
                cd apq = 0.0;
                for (int i = 0; i < m; ++i) {
                    app += std::norm(b(i, p));
                    aqq += std::norm(b(i, q));
                    apq += std::conj(b(i, p)) * b(i, q);
                }
                const double off = std::abs(apq);
                if (app == 0.0 || aqq == 0.0 || off <= tol * std::sqrt(app) * std::sqrt(aqq))
                    continue;
                rotated = true;
                const cd beta = apq / off;
                const double zeta = (aqq - app) / (2.0 * off);
                const double sgn = zeta >= 0.0 ? 1.0 : -1.0;
                const double t = sgn / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                for (int i = 0; i < m; ++i) {
                    const cd bp = b(i, p), bq = b(i, q);
                    b(i, p) = cs * bp - sn * std::conj(beta) * bq;
                    b(i, q) = sn * beta * bp + cs * bq;
                }
                for (int i = 0; i < n; ++i) {
                    const cd vp = v(i, p), vq = v(i, q);
                    v(i, p) = cs * vp - sn * std::conj(beta) * vq;
                    v(i, q) = sn * beta * vp + cs * vq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sig(n);
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += std::norm(b(i, j));
        sig[j] = std::sqrt(s);
    }

    // Sort columns by descending singular value (stable for determinism).
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return sig[x] > sig[y]; });

    SvdFactorization out;
    out.u = Matrix(m, m);
    out.v = Matrix(n, n);
    out.singvals.resize(n);
    const double sig_max = sig.empty() ? 0.0 : sig[order[0]];
    int ucols = 0;
    for (int j = 0; j < n; ++j) {
        const int src = order[j];
        out.singvals[j] = sig[src];
        for (int i = 0; i < n; ++i) out.v(i, j) = v(i, src);
        if (sig[src] > sig_max * 1e-13 && sig[src] > 0.0) {
            for (int i = 0; i < m; ++i) out.u(i, j) = b(i, src) / sig[src];
            ucols = j + 1;
        }
    }

    // Complete U to a full orthonormal basis (columns for zero singular
    // values and, when m > n, the orthogonal complement).
    for (int j = ucols; j < m; ++j) {
        Vec w;
        for (int cand = 0; cand < m; ++cand) {
            w.assign(m, cd(0.0));
            w[cand] = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (int k = 0; k < j; ++k) {
                    cd proj = 0.0;
                    for (int i = 0; i < m; ++i) proj += std::conj(out.u(i, k)) * w[i];
                    for (int i = 0; i < m; ++i) w[i] -= proj * out.u(i, k);
                }
            }
            if (norm2(w) > 0.1) break;
        }
        const double nw = norm2(w);
        if (nw == 0.0) throw std::runtime_error("svd: basis completion failed");
        for (int i = 0; i < m; ++i) out.u(i, j) = w[i] / nw;
    }

    for (int j = 0; j < n; ++j) fix_column_phase(out.v, out.u, j);
    // Phase-fix the completed U columns as well, for determinism.
    for (int j = n; j < m; ++j) {
        int arg = 0;
        double best = -1.0;
        for (int i = 0; i < m; ++i)
            if (std::abs(out.u(i, j)) > best) {
                best = std::abs(out.u(i, j));
                arg = i;
            }
        const cd s = std::conj(unit_phase(out.u(arg, j)));
        for (int i = 0; i < m; ++i) out.u(i, j) *= s;
    }
    return out;
}

} // namespace

SvdFactorization svd(const Matrix& a) {
    if (a.rows() == 0 || a.cols() == 0) throw std::invalid_argument("svd: empty matrix");
    if (a.rows() >= a.cols()) return jacobi_svd_tall(a);
    SvdFactorization t = jacobi_svd_tall(a.adjoint());
    SvdFactorization out;
    out.u = std::move(t.v);
    out.v = std::move(t.u);
    out.singvals = std::move(t.singvals);
    return out;
}

RegularizedStep regularized_newton_step(const PolySystem& f, const Point& x) {
    const Matrix a = jacobian(f, x);
    Vec b = f.evaluate(x);
    for (cd& c : b) c = -c;

    const SvdFactorization sv = svd(a);
    const int nsig = static_cast<int>(sv.singvals.size());
    const double sigma_n = sv.singvals.back();

    const Vec ub = sv.u.mul_adjoint(b);
    Vec w(a.cols(), cd(0.0));
    for (int i = 0; i < nsig; ++i) {
        const double s = sv.singvals[i];
        const double den = s * s + sigma_n;
        if (den > 0.0) w[i] = (s / den) * ub[i];
    }

    RegularizedStep step;
    step.y = sv.v.mul(w);
    step.sigma_n = sigma_n;
    step.residual = norm2(a.mul(step.y) - b);
    return step;
}

Vec null_vector(const Matrix& a, double tau) {
    const SvdFactorization sv = svd(a);
    const double sig1 = sv.singvals.front();
    int small = 0;
    if (sig1 == 0.0) {
        small = a.cols();
    } else {
        for (double s : sv.singvals)
            if (s < tau * sig1) ++small;
        // Columns of V beyond min(t, s) span an exact null space.
        small += a.cols() - static_cast<int>(sv.singvals.size());
    }
    if (small != 1)
        throw BreadthError("null_vector: expected exactly one singular value below tau*sigma_1, found " +
                           std::to_string(small));
    Vec r = sv.v.col(a.cols() - 1);
    // Phase already fixed inside svd(); renormalize to be safe.
    const double nr = norm2(r);
    for (cd& c : r) c /= nr;
    return r;
}

Matrix complete_unitary(const Vec& r1) {
    const int n = static_cast<int>(r1.size());
    if (n == 0) throw std::invalid_argument("complete_unitary: empty vector");
    if (std::abs(norm2(r1) - 1.0) > 1e-12)
        throw std::invalid_argument("complete_unitary: input is not a unit vector");

    const cd s = unit_phase(r1[0]);
    // Householder reflector sending r1 to -s * e1.
    Vec w = r1;
    w[0] += s;
    const double wn2 = [&] {
        double acc = 0.0;
        for (const cd& c : w) acc += std::norm(c);
        return acc;
    }();

    Matrix r = Matrix::identity(n);
    if (wn2 > 0.0) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r(i, j) -= 2.0 * w[i] * std::conj(w[j]) / wn2;
    }
    // R = H * diag(-s, 1, ..., 1): flip the first column's phase so that
    // R e1 = r1, then pin the column to r1 exactly.
    for (int i = 0; i < n; ++i) r(i, 0) *= -s;
    for (int i = 0; i < n; ++i) r(i, 0) = r1[i];
    return r;
}

Vec least_squares_solve(const Matrix& m, const Vec& rhs, double rank_rtol) {
    if (static_cast<int>(rhs.size()) != m.rows())
        throw std::invalid_argument("least_squares_solve: size mismatch");
    const SvdFactorization sv = svd(m);
    const double sig1 = sv.singvals.front();
    int rank = 0;
    for (double s : sv.singvals)
        if (s >= rank_rtol * sig1 && s > 0.0) ++rank;
    if (rank < m.cols())
        throw RankError("least_squares_solve: numerical rank " + std::to_string(rank) + " < " +
                        std::to_string(m.cols()) + " columns");
    const Vec ub = sv.u.mul_adjoint(rhs);
    Vec w(m.cols(), cd(0.0));
    for (int i = 0; i < static_cast<int>(sv.singvals.size()); ++i) w[i] = ub[i] / sv.singvals[i];
    return sv.v.mul(w);
}

Vec smallest_right_singular_vector(const Matrix& m) {
    const SvdFactorization sv = svd(m);
    Vec v = sv.v.col(m.cols() - 1);
    if (std::abs(v[0]) <= 1e-8)
        throw DegenerateError("smallest_right_singular_vector: leading entry magnitude " +
                              std::to_string(std::abs(v[0])) + " too small to normalize");
    const cd lead = v[0];
    for (cd& c : v) c /= lead;
    v[0] = 1.0;
    return v;
}

} // namespace mroot
