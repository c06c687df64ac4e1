#include "mroot/diffop.hpp"

#include <cmath>
#include <stdexcept>

namespace mroot {

DiffOp DiffOp::basis(const Monomial& alpha, cd c) {
    DiffOp l(alpha.nvars());
    l.add_term(alpha, c);
    return l;
}

DiffOp DiffOp::identity(int nvars) {
    return basis(Monomial::unit(nvars));
}

DiffOp DiffOp::first_order(int nvars, int v) {
    return basis(Monomial::var(nvars, v));
}

int DiffOp::order() const {
    if (terms_.empty()) return -1;
    return terms_.rbegin()->first.degree();
}

void DiffOp::add_term(const Monomial& m, cd c) {
    if (m.nvars() != nvars_) throw std::invalid_argument("DiffOp::add_term: variable count mismatch");
    if (c == cd(0.0)) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == cd(0.0)) terms_.erase(it);
    }
}

cd DiffOp::coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? cd(0.0) : it->second;
}

DiffOp DiffOp::operator+(const DiffOp& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("DiffOp +: variable count mismatch");
    DiffOp r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

DiffOp DiffOp::operator-(const DiffOp& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("DiffOp -: variable count mismatch");
    DiffOp r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}

DiffOp DiffOp::scaled(cd s) const {
    DiffOp r(nvars_);
    if (s == cd(0.0)) return r;
    for (const auto& [m, c] : terms_) r.add_term(m, s * c);
    return r;
}

DiffOp DiffOp::embedded(int new_nvars) const {
    if (new_nvars < nvars_) throw std::invalid_argument("DiffOp::embedded: cannot shrink");
    DiffOp r(new_nvars);
    for (const auto& [m, c] : terms_) {
        Monomial big = Monomial::unit(new_nvars);
        for (int v = 0; v < nvars_; ++v) big.e[v] = m.e[v];
        r.add_term(big, c);
    }
    return r;
}

double DiffOp::max_abs_coeff() const {
    double s = 0.0;
    for (const auto& [m, c] : terms_) s = std::max(s, std::abs(c));
    return s;
}

DiffOp phi(const DiffOp& l, int j) {
    if (j < 0 || j >= l.nvars()) throw std::invalid_argument("phi: index out of range");
    DiffOp r(l.nvars());
    for (const auto& [m, c] : l.terms()) {
        if (m.e[j] == 0) continue;
        Monomial low = m;
        low.e[j] -= 1;
        r.add_term(low, c);
    }
    return r;
}

DiffOp psi(const DiffOp& l, int j, const std::set<int>& zero_mask) {
    if (j < 0 || j >= l.nvars()) throw std::invalid_argument("psi: index out of range");
    DiffOp r(l.nvars());
    for (const auto& [m, c] : l.terms()) {
        bool keep = true;
        for (int masked : zero_mask) {
            if (masked < 0 || masked >= l.nvars()) throw std::invalid_argument("psi: mask out of range");
            if (m.e[masked] != 0) {
                keep = false;
                break;
            }
        }
        if (!keep) continue;
        Monomial high = m;
        high.e[j] += 1;
        r.add_term(high, c);
    }
    return r;
}

DiffOp times_partial(const DiffOp& l, int j) {
    if (j < 0 || j >= l.nvars()) throw std::invalid_argument("times_partial: index out of range");
    DiffOp r(l.nvars());
    for (const auto& [m, c] : l.terms()) {
        Monomial high = m;
        high.e[j] += 1;
        r.add_term(high, c * static_cast<double>(high.e[j]));
    }
    return r;
}

namespace {

// Derivative cache keyed by exponent vector; each derivative is reached by
// differentiating from a previously computed one.
class DerivCache {
  public:
    explicit DerivCache(const Poly& f) { cache_.emplace(Monomial::unit(f.nvars()), f); }

    const Poly& get(const Monomial& alpha) {
        auto it = cache_.find(alpha);
        if (it != cache_.end()) return it->second;
        int v = 0;
        while (alpha.e[v] == 0) ++v;
        Monomial parent = alpha;
        parent.e[v] -= 1;
        Poly d = get(parent).partial(v);
        return cache_.emplace(alpha, std::move(d)).first->second;
    }

  private:
    std::map<Monomial, Poly, GradedLexLess> cache_;
};

double alpha_factorial(const Monomial& m) {
    double r = 1.0;
    for (int e : m.e) r *= factorial(e);
    return r;
}

} // namespace

cd apply(const DiffOp& l, const Poly& f, const Point& pt) {
    if (l.nvars() != f.nvars() || pt.size() != f.nvars())
        throw std::invalid_argument("apply: dimension mismatch");
    DerivCache cache(f);
    cd sum = 0.0;
    for (const auto& [alpha, c] : l.terms())
        sum += c * cache.get(alpha).evaluate(pt.coords) / alpha_factorial(alpha);
    return sum;
}

Vec apply(const DiffOp& l, const PolySystem& f, const Point& pt) {
    if (l.nvars() != f.nvars() || pt.size() != f.nvars())
        throw std::invalid_argument("apply: dimension mismatch");
    Vec out(f.npolys());
    for (int i = 0; i < f.npolys(); ++i) {
        DerivCache cache(f.poly(i));
        cd sum = 0.0;
        for (const auto& [alpha, c] : l.terms())
            sum += c * cache.get(alpha).evaluate(pt.coords) / alpha_factorial(alpha);
        out[i] = sum;
    }
    return out;
}

DiffOp gamma_r(const DiffOp& l, const Matrix& r) {
    if (r.rows() != l.nvars() || r.cols() != l.nvars())
        throw std::invalid_argument("gamma_r: matrix shape mismatch");
    // View L as a polynomial in the derivative symbols with coefficients
    // c_alpha / alpha!, push each d/dz_i to sum_j R_{j,i} d/dx_j (plain
    // transpose, no conjugation), expand, and restore the factorials.
    Poly symbol(l.nvars());
    for (const auto& [alpha, c] : l.terms()) symbol.add_term(alpha, c / alpha_factorial(alpha));
    Matrix rt(l.nvars(), l.nvars());
    for (int i = 0; i < l.nvars(); ++i)
        for (int j = 0; j < l.nvars(); ++j) rt(i, j) = r(j, i);
    const Poly pushed = compose_linear(symbol, rt);
    DiffOp out(l.nvars());
    for (const auto& [beta, c] : pushed.terms()) out.add_term(beta, c * alpha_factorial(beta));
    return out;
}

} // namespace mroot
