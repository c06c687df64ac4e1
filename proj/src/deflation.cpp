#include "mroot/deflation.hpp"

#include <stdexcept>

#include "mroot/errors.hpp"
#include "mroot/linalg.hpp"

namespace mroot {

namespace {

Poly embed_poly(const Poly& p, int new_nvars) {
    Poly out(new_nvars);
    for (const auto& [m, c] : p.terms()) {
        Monomial big = Monomial::unit(new_nvars);
        for (int v = 0; v < m.nvars(); ++v) big.e[v] = m.e[v];
        out.add_term(big, c);
    }
    return out;
}

} // namespace

AugmentedSystem augment_j(const PolySystem& f, const Vec& h) {
    if (static_cast<int>(h.size()) != f.nvars())
        throw std::invalid_argument("augment_j: h has wrong dimension");
    if (norm2(h) == 0.0) throw std::invalid_argument("augment_j: h must be nonzero");

    const int n = f.nvars();
    const int nn = 2 * n;
    std::vector<Poly> polys;
    for (const Poly& p : f.polys()) polys.push_back(embed_poly(p, nn));
    for (const Poly& p : f.polys()) {
        Poly row(nn);
        for (int j = 0; j < n; ++j) {
            const Poly dj = embed_poly(p.partial(j), nn);
            row = row + dj * Poly::variable(nn, n + j);
        }
        polys.push_back(row);
    }
    Poly last(nn);
    for (int j = 0; j < n; ++j) last.add_term(Monomial::var(nn, n + j), std::conj(h[j]));
    last.add_term(Monomial::unit(nn), -1.0);
    polys.push_back(last);

    AugmentedSystem out;
    out.system = PolySystem(std::move(polys), nn);
    out.h = h;
    return out;
}

AugmentedSystem augment_g(const PolySystem& h) {
    if (h.npolys() != h.nvars()) throw std::invalid_argument("augment_g: system must be square");
    Vec e1(h.nvars(), cd(0.0));
    e1[0] = 1.0;
    return augment_j(h, e1);
}

Point lift_point(const Point& x, const Vec& nu) {
    Vec c = x.coords;
    c.insert(c.end(), nu.begin(), nu.end());
    return Point(std::move(c));
}

std::vector<AugmentedSystem> deflation_chain(const PolySystem& f, const Point& x, double tau) {
    std::vector<AugmentedSystem> chain;
    PolySystem cur = f;
    Point pt = x;
    const int cap = 32;
    for (;;) {
        const Matrix a = jacobian(cur, pt);
        const SvdFactorization sv = svd(a);
        const double sig1 = sv.singvals.front();
        int small = 0;
        Vec r1;
        if (cur.nvars() == 1) {
            // A single column cannot be gap-tested against itself; compare
            // to the local coefficient scale instead.
            if (sig1 >= tau * coefficient_scale(cur, pt)) break;
            small = 1;
            r1 = Vec{1.0};
        } else if (sig1 == 0.0) {
            small = a.cols();
        } else {
            for (double s : sv.singvals)
                if (s < tau * sig1) ++small;
            small += a.cols() - static_cast<int>(sv.singvals.size());
        }
        if (small == 0) break;
        if (small >= 2)
            throw BreadthError("deflation_chain: corank " + std::to_string(small) +
                               " appeared mid-chain");
        if (r1.empty()) r1 = null_vector(a, tau);
        // h = r1 maximizes |h* r1| = 1, so the lifted nu is r1 itself.
        AugmentedSystem aug = augment_j(cur, r1);
        pt = lift_point(pt, r1);
        cur = aug.system;
        chain.push_back(std::move(aug));
        if (static_cast<int>(chain.size()) > cap)
            throw BreadthError("deflation_chain: chain did not terminate within " +
                               std::to_string(cap) + " stages");
    }
    return chain;
}

} // namespace mroot
