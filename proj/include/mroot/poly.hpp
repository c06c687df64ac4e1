#pragma once

#include <map>
#include <string>
#include <vector>

#include "mroot/matrix.hpp"

namespace mroot {

/// Exponent vector of a monomial x_1^{e_1} ... x_s^{e_s}.
struct Monomial {
    std::vector<int> e;

    Monomial() = default;
    explicit Monomial(std::vector<int> exps) : e(std::move(exps)) {}
    static Monomial unit(int nvars) { return Monomial(std::vector<int>(nvars, 0)); }
    static Monomial var(int nvars, int v);

    int nvars() const { return static_cast<int>(e.size()); }
    int degree() const;

    bool operator==(const Monomial& o) const { return e == o.e; }
};

/// Graded lexicographic order: first by total degree, then lexicographically
/// on the exponent vector. Gives every polynomial a canonical term order.
struct GradedLexLess {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

using TermMap = std::map<Monomial, cd, GradedLexLess>;

/// Sparse multivariate polynomial with complex coefficients. Stored
/// coefficients are never exactly zero.
class Poly {
  public:
    Poly() = default;
    explicit Poly(int nvars) : nvars_(nvars) {}
    static Poly constant(int nvars, cd c);
    static Poly variable(int nvars, int v); // the monomial x_v

    int nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const; // -1 for the zero polynomial

    void add_term(const Monomial& m, cd c);
    cd coeff(const Monomial& m) const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly scaled(cd s) const;

    bool operator==(const Poly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

    cd evaluate(const Vec& pt) const;
    Poly partial(int var) const; // unnormalized d/dx_var, 0-based index
    double max_abs_coeff() const;

    std::string to_string(const std::vector<std::string>& names) const;

  private:
    int nvars_ = 0;
    TermMap terms_;
};

struct Point {
    Vec coords;

    Point() = default;
    explicit Point(Vec c) : coords(std::move(c)) {}
    int size() const { return static_cast<int>(coords.size()); }
    bool finite() const;
};

/// An ordered list of polynomials sharing one variable set; square or
/// overdetermined (t >= s >= 1).
class PolySystem {
  public:
    PolySystem() = default;
    PolySystem(std::vector<Poly> polys, int nvars);

    int nvars() const { return nvars_; }
    int npolys() const { return static_cast<int>(polys_.size()); }
    const Poly& poly(int i) const { return polys_[i]; }
    const std::vector<Poly>& polys() const { return polys_; }

    Vec evaluate(const Point& pt) const;

  private:
    std::vector<Poly> polys_;
    int nvars_ = 0;
};

/// Jacobian of F at pt: entry (i, j) = d f_i / d x_j evaluated at pt.
Matrix jacobian(const PolySystem& f, const Point& pt);

/// Exact coefficient-level substitution H(z) = F(R z) for a square matrix R.
Poly compose_linear(const Poly& f, const Matrix& r);
PolySystem compose_linear(const PolySystem& f, const Matrix& r);

/// Taylor expansion around pt: returns g with g(y) = f(pt + y) exactly, so
/// the coefficient of y^alpha in g equals the normalized derivative
/// (1/alpha!) d^alpha f (pt).
Poly taylor_at(const Poly& f, const Point& pt);

/// Largest Taylor-coefficient magnitude of the system at pt; the natural
/// local scale when there is no second singular value to compare against.
double coefficient_scale(const PolySystem& f, const Point& pt);

double factorial(int n);

} // namespace mroot
