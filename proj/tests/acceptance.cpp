// End-to-end acceptance suite. Each case prints one PASS/FAIL line so a
// full run reads as a checklist.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>

#include "mroot/deflation.hpp"
#include "mroot/oracle.hpp"
#include "mroot/refiner.hpp"

#include "support.hpp"

using namespace mroot;
using namespace mroot::testsupport;

namespace {

struct Verdict {
    bool ok = true;
    void require(bool cond) { ok = ok && cond; }
};

void report(int criterion, const char* what, bool ok) {
    std::printf("[criterion %d] %-4s %s\n", criterion, ok ? "PASS" : "FAIL", what);
    CHECK(ok);
}

// The twenty planted systems shared by the contraction criteria:
// s in {1..4} x mu in {2..6}.
struct PlantedCase {
    Planted pl;
    double tau_coarse; // rank tolerance at eps = 1e-2
    double tau_fine;   // rank tolerance at eps = 1e-3
};

std::vector<PlantedCase> planted_corpus() {
    std::vector<PlantedCase> out;
    for (int s = 1; s <= 4; ++s)
        for (int mu = 2; mu <= 6; ++mu) {
            PlantedCase c{make_planted(9000 + 37 * s + mu, s, mu),
                          s == 1 ? 0.35 : 0.08, s == 1 ? 0.30 : 0.02};
            out.push_back(std::move(c));
        }
    return out;
}

struct TableRow {
    const char* file;
    std::vector<double> milestones;
};

} // namespace

TEST_CASE("criterion 1: benchmark digit milestones") {
    // Sourced systems whose known root matches the published profile; the
    // starting guesses recorded in the files have two correct digits.
    // Exceeding a milestone is a pass; each sweep may trail by one digit.
    const std::vector<TableRow> rows = {
        {"ojika1.sys", {2, 5, 11, 15}}, {"ojika2.sys", {2, 5, 10, 14}},
        {"ojika3.sys", {2, 4, 9, 14}},  {"decker2.sys", {2, 5, 15}},
        {"dz3.sys", {2, 5, 13}},        {"sy5.sys", {2, 5, 11, 14}},
    };
    bool all_ok = true;
    for (const TableRow& row : rows) {
        const SystemFile sf = load_corpus(row.file);
        RefinerConfig cfg;
        cfg.tau = sf.recommended_tau.value_or(1e-2);
        const auto t0 = std::chrono::steady_clock::now();
        const RefinementTrace tr = refine(sf.system, *sf.initial_guess, cfg, sf.known_root);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const std::vector<double> digits = tr.digit_sequence();

        Verdict v;
        v.require(secs < 1.0);
        v.require(std::abs(digits[0] - row.milestones[0]) <= 1.0);
        v.require(digits.size() >= row.milestones.size());
        for (size_t i = 1; i < row.milestones.size() && i < digits.size(); ++i)
            v.require(digits[i] >= row.milestones[i] - 1.0);

        std::printf("[criterion 1] %-4s %-12s digits", v.ok ? "PASS" : "FAIL", row.file);
        for (size_t i = 0; i < digits.size(); ++i) std::printf(" %.1f", digits[i]);
        std::printf("  (target");
        for (double m : row.milestones) std::printf(" %g", m);
        std::printf(", %.0f ms)\n", secs * 1e3);
        all_ok = all_ok && v.ok;
    }
    report(1, "published digit milestones, 2-digit starts, < 1 s each", all_ok);
}

TEST_CASE("criterion 2: one sweep contracts quadratically") {
    const auto corpus = planted_corpus();
    double fitted_c = 0.0;
    double slope_sum = 0.0;
    int slope_count = 0;
    bool sweeps_clean = true;
    for (const PlantedCase& c : corpus) {
        Rng rng(1000 + c.pl.mu + 11 * c.pl.f.nvars());
        const Vec u = rng.unit_vector(c.pl.f.nvars());
        double err_coarse = 0.0, err_fine = 0.0;
        for (double eps : {1e-2, 1e-3}) {
            RefinerConfig cfg;
            cfg.tau = eps == 1e-2 ? c.tau_coarse : c.tau_fine;
            const Point x(c.pl.root.coords + cd(eps) * u);
            auto [out, rec] = sweep(c.pl.f, x, cfg);
            sweeps_clean = sweeps_clean && rec.status == SweepStatus::ok && rec.mu == c.pl.mu;
            const double err = std::max(norm2(out.coords - c.pl.root.coords), 1e-17);
            fitted_c = std::max(fitted_c, err / (eps * eps));
            (eps == 1e-2 ? err_coarse : err_fine) = err;
        }
        // A sweep that already hit the rounding floor has no measurable
        // slope; it satisfies the bound trivially and is left out here.
        if (err_fine > 1e-16) {
            slope_sum += std::log10(err_coarse / err_fine);
            ++slope_count;
        }
    }
    const double mean_slope = slope_sum / slope_count;
    std::printf(
        "[criterion 2] fitted C = %.2f over %zu systems, mean log-log slope = %.2f (%d resolvable)\n",
        fitted_c, corpus.size(), mean_slope, slope_count);
    report(2, "one-sweep error <= C eps^2 with C <= 100 and slope >= 1.8",
           sweeps_clean && fitted_c <= 100.0 && mean_slope >= 1.8);
}

TEST_CASE("criterion 3: regularized Newton contracts") {
    const auto corpus = planted_corpus();
    double c_step = 0.0, c_residual = 0.0;
    for (const PlantedCase& c : corpus) {
        Rng rng(2000 + c.pl.mu + 11 * c.pl.f.nvars());
        const Vec u = rng.unit_vector(c.pl.f.nvars());
        for (double eps : {1e-2, 1e-3}) {
            const Point x(c.pl.root.coords + cd(eps) * u);
            const RegularizedStep step = regularized_newton_step(c.pl.f, x);
            c_step = std::max(c_step, norm2(step.y) / eps);
            const Point moved(x.coords + step.y);
            c_residual = std::max(c_residual, norm2(c.pl.f.evaluate(moved)) / (eps * eps));
        }
    }
    std::printf("[criterion 3] ||y|| <= %.2f eps, ||F(x+y)|| <= %.2f eps^2\n", c_step, c_residual);
    report(3, "regularized step: ||y|| = O(eps), residual = O(eps^2), C <= 100",
           c_step <= 100.0 && c_residual <= 100.0);
}

TEST_CASE("criterion 4: rotated components split into fast and slow") {
    const auto corpus = planted_corpus();
    double worst_fast = 0.0; // bound on |z_i - z_i,e| / eps^2 for i >= 2
    double worst_slow = 1e9; // bound on |z_1 - z_1,e| / eps from below
    for (const PlantedCase& c : corpus) {
        const int s = c.pl.f.nvars();
        if (s == 1) continue; // no fast components to speak of
        Rng rng(3000 + c.pl.mu + 11 * s);
        const Vec u = rng.unit_vector(s);
        for (double eps : {1e-2, 1e-3}) {
            const Point x(c.pl.root.coords + cd(eps) * u);
            const RegularizedStep step = regularized_newton_step(c.pl.f, x);
            const Point x1(x.coords + step.y);
            const Vec r1 = null_vector(jacobian(c.pl.f, x1), eps == 1e-2 ? 0.08 : 0.02);
            const Matrix r = complete_unitary(r1);
            const Vec z = r.adjoint().mul(x1.coords);
            const Vec ze = r.adjoint().mul(c.pl.root.coords);
            worst_slow = std::min(worst_slow, std::abs(z[0] - ze[0]) / eps);
            for (int i = 1; i < s; ++i)
                worst_fast = std::max(worst_fast, std::abs(z[i] - ze[i]) / (eps * eps));
        }
    }
    std::printf("[criterion 4] fast components <= %.2f eps^2, slow component >= eps / %.2f\n",
                worst_fast, 1.0 / worst_slow);
    report(4, "after steps 1-2: |z_i - z_i,e| = O(eps^2) for i >= 2, |z_1 - z_1,e| = Theta(eps)",
           worst_fast <= 100.0 && worst_slow >= 1.0 / 100.0);
}

TEST_CASE("criterion 5: basis validity against the brute-force oracle") {
    const char* files[] = {"ojika1.sys",           "ojika2.sys",        "ojika3.sys",
                           "decker2.sys",          "dz3.sys",           "sy5.sys",
                           "synth_overdet_mu2.sys", "synth_3var_mu3.sys", "synth_3var_mu5.sys",
                           "synth_mu10.sys",       "synth_univar_mu3.sys"};
    bool all_ok = true;
    for (const char* name : files) {
        const SystemFile sf = load_corpus(name);
        Verdict v;

        // Brute-force multiplicity with the breadth-one nullity ladder.
        const MultiplicityResult mr = multiplicity(sf.system, *sf.known_root, 1e-6);
        v.require(mr.mu == *sf.expected_mu);
        for (size_t k = 0; k < mr.nullity_by_order.size(); ++k)
            v.require(mr.nullity_by_order[k] ==
                      static_cast<int>(std::min(k + 1, static_cast<size_t>(mr.mu))));

        // Rotate the null direction first and build the incremental basis.
        Vec r1;
        if (sf.system.nvars() == 1) {
            r1 = Vec{1.0};
        } else {
            r1 = null_vector(jacobian(sf.system, *sf.known_root), 1e-6);
        }
        const Matrix r = complete_unitary(r1);
        const PolySystem h = compose_linear(sf.system, r);
        const Point z(r.adjoint().mul(sf.known_root->coords));
        const BasisBuild bb = build_basis(h, z, sf.recommended_tau.value_or(1e-4));
        v.require(bb.basis.mu() == mr.mu);

        // Closedness and membership of every operator in the oracle span.
        for (int k = 1; k < bb.basis.mu(); ++k) {
            std::vector<DiffOp> lower(bb.basis.ops.begin(), bb.basis.ops.begin() + k);
            for (int j = 0; j < h.nvars(); ++j)
                v.require(span_residual(phi(bb.basis.ops[k], j), lower) <= 1e-8);
        }
        const MultiplicityResult mh = multiplicity(h, z, 1e-6);
        for (const DiffOp& op : bb.basis.ops)
            v.require(span_residual(op, mh.dual_basis) <= 1e-6);

        std::printf("[criterion 5] %-4s %-22s mu=%d rho=%d\n", v.ok ? "PASS" : "FAIL", name, mr.mu,
                    mr.rho);
        all_ok = all_ok && v.ok;
    }
    report(5, "closedness <= 1e-8, basis length == oracle mu, nullity ladder", all_ok);
}

TEST_CASE("criterion 6: composition identity for the parameter-free parts") {
    double worst = 0.0;
    // Corpus systems, including the multiplicity-10 case.
    for (const char* name : {"ojika1.sys", "decker2.sys", "dz3.sys", "synth_3var_mu5.sys",
                             "synth_mu10.sys"}) {
        const SystemFile sf = load_corpus(name);
        Vec r1 = sf.system.nvars() == 1 ? Vec{1.0}
                                        : null_vector(jacobian(sf.system, *sf.known_root), 1e-6);
        const Matrix r = complete_unitary(r1);
        const PolySystem h = compose_linear(sf.system, r);
        const Point z(r.adjoint().mul(sf.known_root->coords));
        const BasisBuild bb = build_basis(h, z, sf.recommended_tau.value_or(1e-4));
        worst = std::max(worst, composition_identity_defect(bb.basis));
    }
    // Planted systems across shapes.
    for (uint64_t seed : {7100ull, 7200ull})
        for (int s : {2, 3, 4})
            for (int mu : {4, 6}) {
                const Planted pl = make_planted(seed + 5 * s + mu, s, mu);
                const Matrix r = complete_unitary(pl.null_dir);
                const PolySystem h = compose_linear(pl.f, r);
                const Point z(r.adjoint().mul(pl.root.coords));
                const BasisBuild bb = build_basis(h, z, 1e-6);
                worst = std::max(worst, composition_identity_defect(bb.basis));
            }
    std::printf("[criterion 6] worst relative defect %.2e across bases up to mu = 10\n", worst);
    report(6, "composed ladder equals (k+1) x parameter-free part, <= 1e-10", worst <= 1e-10);
}

TEST_CASE("criterion 7: deflation drops the multiplicity by one") {
    bool all_ok = true;

    // Oracle multiplicities of one deflation stage, mu = 2..6.
    struct DropCase {
        const char* label;
        SystemFile sf;
    };
    std::vector<DropCase> cases;
    cases.push_back({"x^2 (mu 2)", parse_system("vars: x\npoly: x^2\nroot: 0\nmu: 2\n")});
    cases.push_back({"ojika1 (mu 3)", load_corpus("ojika1.sys")});
    cases.push_back({"decker2 (mu 4)", load_corpus("decker2.sys")});
    cases.push_back({"dz3 (mu 5)", load_corpus("dz3.sys")});
    cases.push_back({"x^6 (mu 6)", parse_system("vars: x\npoly: x^6\nroot: 0\nmu: 6\n")});
    for (const DropCase& c : cases) {
        Vec r1;
        if (c.sf.system.nvars() == 1) {
            r1 = Vec{1.0};
        } else {
            r1 = null_vector(jacobian(c.sf.system, *c.sf.known_root), 1e-6);
        }
        const AugmentedSystem aug = augment_j(c.sf.system, r1);
        const Point lifted = lift_point(*c.sf.known_root, r1);
        const int mu_aug = multiplicity(aug.system, lifted, 1e-6).mu;
        const bool ok = mu_aug == *c.sf.expected_mu - 1;
        std::printf("[criterion 7] %-4s %-16s oracle mu: %d -> %d\n", ok ? "PASS" : "FAIL",
                    c.label, *c.sf.expected_mu, mu_aug);
        all_ok = all_ok && ok;
    }

    // Chain lengths equal mu - 1.
    struct ChainCase {
        const char* label;
        PolySystem f;
        Point start;
        int mu;
    };
    std::vector<ChainCase> chains;
    for (int mu = 2; mu <= 6; ++mu) {
        Poly p(1);
        p.add_term(Monomial(std::vector<int>{mu}), 1.0);
        chains.push_back({"x^mu", PolySystem({p}, 1), Point({1e-9}), mu});
    }
    {
        const SystemFile d2 = load_corpus("decker2.sys");
        chains.push_back({"decker2", d2.system, *d2.known_root, 4});
        const SystemFile o1 = load_corpus("ojika1.sys");
        chains.push_back({"ojika1", o1.system, *o1.known_root, 3});
        const Planted pl = make_planted(7301, 3, 3);
        chains.push_back({"planted s3", pl.f, pl.root, 3});
    }
    for (const ChainCase& c : chains) {
        const auto chain = deflation_chain(c.f, c.start, 1e-5);
        const bool ok = static_cast<int>(chain.size()) == c.mu - 1;
        if (!ok)
            std::printf("[criterion 7] FAIL %s chain length %zu != %d\n", c.label, chain.size(),
                        c.mu - 1);
        all_ok = all_ok && ok;
    }
    report(7, "augmented multiplicity mu - 1 and chain length mu - 1", all_ok);
}

TEST_CASE("criterion 8: refinement-path matrices stay small") {
    bool all_ok = true;
    for (const char* name : {"ojika1.sys", "ojika2.sys", "decker2.sys", "dz3.sys", "sy5.sys",
                             "synth_overdet_mu2.sys", "synth_mu10.sys", "synth_univar_mu3.sys"}) {
        const SystemFile sf = load_corpus(name);
        RefinerConfig cfg;
        cfg.tau = sf.recommended_tau.value_or(1e-2);
        MatrixAllocStats stats;
        {
            MatrixAllocWatch watch;
            refine(sf.system, *sf.initial_guess, cfg, sf.known_root);
            stats = watch.stats();
        }
        const int bound = std::max(sf.system.npolys(), sf.system.nvars()) + 1;
        const bool ok = stats.max_side() <= bound;
        std::printf("[criterion 8] %-4s %-22s max side %d (bound %d, %ld matrices)\n",
                    ok ? "PASS" : "FAIL", name, stats.max_side(), bound, stats.count);
        all_ok = all_ok && ok;
    }
    report(8, "no matrix exceeds max(t, s) + 1 per side on the refinement path", all_ok);
}
