#pragma once

#include <set>

#include "mroot/poly.hpp"

namespace mroot {

/// Finite complex-linear combination of the normalized differential
/// operators D(alpha) = (1/alpha!) d^|alpha| / dx^alpha. Canonical sparse
/// form: no stored coefficient is exactly zero.
class DiffOp {
  public:
    DiffOp() = default;
    explicit DiffOp(int nvars) : nvars_(nvars) {}
    /// D(alpha) with coefficient c.
    static DiffOp basis(const Monomial& alpha, cd c = 1.0);
    /// D(0, ..., 0), the evaluation functional.
    static DiffOp identity(int nvars);
    /// D(0, .., 1, .., 0) = d/dx_v (0-based v).
    static DiffOp first_order(int nvars, int v);

    int nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int order() const; // max |alpha|, -1 when zero

    void add_term(const Monomial& m, cd c);
    cd coeff(const Monomial& m) const;

    DiffOp operator+(const DiffOp& o) const;
    DiffOp operator-(const DiffOp& o) const;
    DiffOp scaled(cd s) const;

    bool operator==(const DiffOp& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

    /// Extend to a larger variable set; new exponents are zero.
    DiffOp embedded(int new_nvars) const;

    double max_abs_coeff() const;

  private:
    int nvars_ = 0;
    TermMap terms_;
};

/// Index-lowering ("integration") morphism: D(alpha) -> D(alpha - e_j),
/// terms with alpha_j = 0 vanish. 0-based j.
DiffOp phi(const DiffOp& l, int j);

/// Index-raising morphism with a zero filter: drops terms whose exponent is
/// nonzero on any masked index, then raises index j by one. 0-based.
DiffOp psi(const DiffOp& l, int j, const std::set<int>& zero_mask);

/// Right-composition with d/dx_j under the factorial normalization:
/// D(alpha) . d/dx_j = (alpha_j + 1) D(alpha + e_j).
DiffOp times_partial(const DiffOp& l, int j);

/// L(F) evaluated at pt: component i is
/// sum_alpha c_alpha (1/alpha!) d^alpha f_i (pt).
Vec apply(const DiffOp& l, const PolySystem& f, const Point& pt);
cd apply(const DiffOp& l, const Poly& f, const Point& pt);

/// Pushforward of a differential operator under the substitution x = R z:
/// gamma_r(L)(F) at x equals L(F(R .)) at R^{-1} x.
DiffOp gamma_r(const DiffOp& l, const Matrix& r);

} // namespace mroot
