#include "mroot/poly.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mroot {

Monomial Monomial::var(int nvars, int v) {
    if (v < 0 || v >= nvars) throw std::invalid_argument("Monomial::var: index out of range");
    Monomial m = unit(nvars);
    m.e[v] = 1;
    return m;
}

int Monomial::degree() const {
    int d = 0;
    for (int x : e) d += x;
    return d;
}

bool GradedLexLess::operator()(const Monomial& a, const Monomial& b) const {
    const int da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    return a.e < b.e;
}

Poly Poly::constant(int nvars, cd c) {
    Poly p(nvars);
    p.add_term(Monomial::unit(nvars), c);
    return p;
}

Poly Poly::variable(int nvars, int v) {
    Poly p(nvars);
    p.add_term(Monomial::var(nvars, v), 1.0);
    return p;
}

int Poly::degree() const {
    if (terms_.empty()) return -1;
    return terms_.rbegin()->first.degree();
}

void Poly::add_term(const Monomial& m, cd c) {
    if (m.nvars() != nvars_) throw std::invalid_argument("Poly::add_term: variable count mismatch");
    if (c == cd(0.0)) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == cd(0.0)) terms_.erase(it);
    }
}

cd Poly::coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? cd(0.0) : it->second;
}

Poly Poly::operator+(const Poly& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("Poly +: variable count mismatch");
    Poly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("Poly -: variable count mismatch");
    Poly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("Poly *: variable count mismatch");
    Poly r(nvars_);
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) {
            Monomial m = ma;
            for (int v = 0; v < nvars_; ++v) m.e[v] += mb.e[v];
            r.add_term(m, ca * cb);
        }
    return r;
}

Poly Poly::scaled(cd s) const {
    Poly r(nvars_);
    if (s == cd(0.0)) return r;
    for (const auto& [m, c] : terms_) r.add_term(m, s * c);
    return r;
}

namespace {
cd powi(cd base, int n) {
    cd r = 1.0;
    while (n > 0) {
        if (n & 1) r *= base;
        base *= base;
        n >>= 1;
    }
    return r;
}
} // namespace

cd Poly::evaluate(const Vec& pt) const {
    if (static_cast<int>(pt.size()) != nvars_)
        throw std::invalid_argument("Poly::evaluate: dimension mismatch");
    cd sum = 0.0;
    for (const auto& [m, c] : terms_) {
        cd t = c;
        for (int v = 0; v < nvars_; ++v)
            if (m.e[v] > 0) t *= powi(pt[v], m.e[v]);
        sum += t;
    }
    return sum;
}

Poly Poly::partial(int var) const {
    if (var < 0 || var >= nvars_) throw std::invalid_argument("Poly::partial: index out of range");
    Poly r(nvars_);
    for (const auto& [m, c] : terms_) {
        if (m.e[var] == 0) continue;
        Monomial d = m;
        d.e[var] -= 1;
        r.add_term(d, c * static_cast<double>(m.e[var]));
    }
    return r;
}

double Poly::max_abs_coeff() const {
    double s = 0.0;
    for (const auto& [m, c] : terms_) s = std::max(s, std::abs(c));
    return s;
}

std::string Poly::to_string(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    // Highest-degree terms first.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        cd coeff = c;
        if (first) {
            if (coeff.imag() == 0.0 && coeff.real() < 0.0) {
                out << "-";
                coeff = -coeff;
            }
        } else {
            if (coeff.imag() == 0.0 && coeff.real() < 0.0) {
                out << " - ";
                coeff = -coeff;
            } else {
                out << " + ";
            }
        }
        first = false;
        std::ostringstream mono;
        bool any_var = false;
        for (int v = 0; v < nvars_; ++v) {
            if (m.e[v] == 0) continue;
            if (any_var) mono << "*";
            mono << names[v];
            if (m.e[v] > 1) mono << "^" << m.e[v];
            any_var = true;
        }
        auto fmt = [](double x) {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", x);
            return std::string(buf);
        };
        const bool is_one = coeff == cd(1.0);
        if (coeff.imag() == 0.0) {
            if (!is_one || !any_var) out << fmt(coeff.real());
        } else if (coeff.real() == 0.0) {
            out << fmt(coeff.imag()) << "*i";
        } else {
            out << "(" << fmt(coeff.real());
            if (coeff.imag() >= 0.0)
                out << " + " << fmt(coeff.imag()) << "*i)";
            else
                out << " - " << fmt(-coeff.imag()) << "*i)";
        }
        if (any_var) {
            if (!is_one || coeff.imag() != 0.0) out << "*";
            out << mono.str();
        }
    }
    return out.str();
}

bool Point::finite() const {
    for (const cd& c : coords)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

PolySystem::PolySystem(std::vector<Poly> polys, int nvars) : polys_(std::move(polys)), nvars_(nvars) {
    if (nvars_ < 1) throw std::invalid_argument("PolySystem: need at least one variable");
    if (static_cast<int>(polys_.size()) < nvars_)
        throw std::invalid_argument("PolySystem: need t >= s (square or overdetermined)");
    for (const Poly& p : polys_)
        if (p.nvars() != nvars_) throw std::invalid_argument("PolySystem: variable count mismatch");
}

Vec PolySystem::evaluate(const Point& pt) const {
    if (pt.size() != nvars_) throw std::invalid_argument("PolySystem::evaluate: dimension mismatch");
    Vec r(polys_.size());
    for (size_t i = 0; i < polys_.size(); ++i) r[i] = polys_[i].evaluate(pt.coords);
    return r;
}

Matrix jacobian(const PolySystem& f, const Point& pt) {
    if (pt.size() != f.nvars()) throw std::invalid_argument("jacobian: dimension mismatch");
    Matrix j(f.npolys(), f.nvars());
    for (int i = 0; i < f.npolys(); ++i)
        for (int v = 0; v < f.nvars(); ++v) j(i, v) = f.poly(i).partial(v).evaluate(pt.coords);
    return j;
}

namespace {

// Cache of powers of the per-variable substitution polynomials, shared
// across the terms of one substitution.
class PowerCache {
  public:
    PowerCache(std::vector<Poly> bases, int nvars) : bases_(std::move(bases)), pows_(bases_.size()) {
        for (auto& p : pows_) p.push_back(Poly::constant(nvars, 1.0));
    }

    const Poly& get(int var, int e) {
        auto& tower = pows_[var];
        while (static_cast<int>(tower.size()) <= e) tower.push_back(tower.back() * bases_[var]);
        return tower[e];
    }

  private:
    std::vector<Poly> bases_;
    std::vector<std::vector<Poly>> pows_;
};

Poly substitute(const Poly& f, PowerCache& cache) {
    Poly out(f.nvars());
    for (const auto& [m, c] : f.terms()) {
        Poly t = Poly::constant(f.nvars(), c);
        for (int v = 0; v < f.nvars(); ++v)
            if (m.e[v] > 0) t = t * cache.get(v, m.e[v]);
        out = out + t;
    }
    return out;
}

} // namespace

Poly compose_linear(const Poly& f, const Matrix& r) {
    if (r.rows() != f.nvars() || r.cols() != f.nvars())
        throw std::invalid_argument("compose_linear: matrix shape mismatch");
    std::vector<Poly> rows;
    for (int i = 0; i < f.nvars(); ++i) {
        Poly line(f.nvars());
        for (int j = 0; j < f.nvars(); ++j) line.add_term(Monomial::var(f.nvars(), j), r(i, j));
        rows.push_back(line);
    }
    PowerCache cache(std::move(rows), f.nvars());
    return substitute(f, cache);
}

PolySystem compose_linear(const PolySystem& f, const Matrix& r) {
    if (r.rows() != f.nvars() || r.cols() != f.nvars())
        throw std::invalid_argument("compose_linear: matrix shape mismatch");
    std::vector<Poly> rows;
    for (int i = 0; i < f.nvars(); ++i) {
        Poly line(f.nvars());
        for (int j = 0; j < f.nvars(); ++j) line.add_term(Monomial::var(f.nvars(), j), r(i, j));
        rows.push_back(line);
    }
    PowerCache cache(std::move(rows), f.nvars());
    std::vector<Poly> out;
    out.reserve(f.npolys());
    for (const Poly& p : f.polys()) out.push_back(substitute(p, cache));
    return PolySystem(std::move(out), f.nvars());
}

Poly taylor_at(const Poly& f, const Point& pt) {
    if (pt.size() != f.nvars()) throw std::invalid_argument("taylor_at: dimension mismatch");
    std::vector<Poly> shifted;
    for (int v = 0; v < f.nvars(); ++v) {
        Poly line = Poly::variable(f.nvars(), v);
        line.add_term(Monomial::unit(f.nvars()), pt.coords[v]);
        shifted.push_back(line);
    }
    PowerCache cache(std::move(shifted), f.nvars());
    return substitute(f, cache);
}

double coefficient_scale(const PolySystem& f, const Point& pt) {
    double scale = 0.0;
    for (const Poly& p : f.polys()) {
        const Poly t = taylor_at(p, pt);
        for (const auto& [m, c] : t.terms()) scale = std::max(scale, std::abs(c));
    }
    return scale;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

} // namespace mroot
