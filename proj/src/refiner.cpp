#include "mroot/refiner.hpp"

#include <algorithm>
#include <cmath>

#include "mroot/errors.hpp"

namespace mroot {

double digits_from_error(double err) {
    return -std::log10(std::max(err, 1e-17));
}

std::pair<Point, SweepRecord> sweep(const PolySystem& f, const Point& x, const RefinerConfig& cfg) {
    if (!x.finite()) throw std::invalid_argument("sweep: non-finite point");
    SweepRecord rec;

    // Step 1: regularized Newton.
    const RegularizedStep step = regularized_newton_step(f, x);
    rec.sigma_n = step.sigma_n;
    rec.y_norm = norm2(step.y);
    Point x1(x.coords + step.y);

    try {
        // Step 2: null vector of F'(x + y), rotation H(z) = F(R z). In one
        // variable every multiple root has corank one and the null
        // direction is trivial, so the gap test only applies for s >= 2.
        Vec r1;
        if (f.nvars() == 1) {
            r1 = Vec{1.0};
        } else {
            const Matrix a1 = jacobian(f, x1);
            r1 = null_vector(a1, cfg.tau);
        }
        const Matrix r = complete_unitary(r1);
        const PolySystem h = compose_linear(f, r);
        const Point z(r.adjoint().mul(x1.coords));

        // Step 3: closed basis of the Max Noether space of H at z.
        const BasisBuild bb = build_basis(h, z, cfg.tau, cfg.max_mu);
        rec.mu = bb.basis.mu();

        // Step 4: [P_mu(H)(z), dH/dz_2, ..., dH/dz_n] v = -L_{mu-1}(H)(z).
        Vec rhs = apply(bb.basis.ops[rec.mu - 1], h, z);
        for (cd& c : rhs) c = -c;
        const Vec v = least_squares_solve(bb.final_matrix, rhs, cfg.tau);
        rec.delta = v[0] / static_cast<double>(rec.mu);

        // Step 5: x + y + delta r_1.
        Point out(x1.coords + rec.delta * r1);
        rec.residual = norm2(f.evaluate(out));
        return {std::move(out), rec};
    } catch (const BreadthError& e) {
        rec.status = SweepStatus::breadth_error;
        rec.note = e.what();
    } catch (const RankError& e) {
        rec.status = SweepStatus::rank_error;
        rec.note = e.what();
    } catch (const DegenerateError& e) {
        rec.status = SweepStatus::degenerate_error;
        rec.note = e.what();
    }
    rec.residual = norm2(f.evaluate(x1));
    return {std::move(x1), rec};
}

std::vector<double> RefinementTrace::digit_sequence() const {
    std::vector<double> d;
    d.push_back(initial_digits);
    for (const TraceEntry& e : entries) d.push_back(e.digits);
    return d;
}

RefinementTrace refine(const PolySystem& f, const Point& x0, const RefinerConfig& cfg,
                       const std::optional<Point>& known_root) {
    RefinementTrace trace;
    trace.initial_residual = norm2(f.evaluate(x0));

    const bool have_root = known_root.has_value();
    auto digits_of = [&](const Point& p) {
        return digits_from_error(norm_inf(p.coords - known_root->coords));
    };
    trace.initial_digits = have_root ? digits_of(x0) : digits_from_error(trace.initial_residual);

    Point x = x0;
    double prev_digits = trace.initial_digits;
    double prev_correction = -1.0;

    for (int it = 0; it < cfg.max_sweeps; ++it) {
        auto [next, rec] = sweep(f, x, cfg);

        if (rec.status == SweepStatus::breadth_error && cfg.fallback_newton) {
            // The point looks regular at this tolerance; take one plain
            // Newton step instead.
            try {
                const Matrix a = jacobian(f, x);
                Vec b = f.evaluate(x);
                for (cd& c : b) c = -c;
                const Vec y = least_squares_solve(a, b, 1e-12);
                next = Point(x.coords + y);
                rec.residual = norm2(f.evaluate(next));
                rec.status = SweepStatus::fallback_newton;
            } catch (const RankError&) {
                // Keep the regularized Newton point from the sweep.
            }
        }

        const double correction = norm_inf(next.coords - x.coords);
        x = next;

        TraceEntry entry;
        entry.rec = rec;
        entry.point = x;
        entry.digits = have_root ? digits_of(x) : digits_from_error(correction);
        trace.entries.push_back(entry);

        const bool sweep_failed =
            rec.status != SweepStatus::ok && rec.status != SweepStatus::fallback_newton;

        if (cfg.target_residual > 0.0 && rec.residual <= cfg.target_residual) {
            trace.status = RefineStatus::converged;
            break;
        }
        if (cfg.target_digits > 0.0 && entry.digits >= cfg.target_digits) {
            trace.status = RefineStatus::converged;
            break;
        }
        if (have_root) {
            if (entry.digits >= 16.5) {
                trace.status = RefineStatus::converged;
                break;
            }
            // Stop once a sweep no longer gains half a digit.
            if (entry.digits <= prev_digits + 0.5) {
                const double best = std::max(entry.digits, prev_digits);
                trace.status = best >= 11.0 ? RefineStatus::converged : RefineStatus::saturated;
                if (sweep_failed) trace.status = RefineStatus::breadth_failed;
                break;
            }
            prev_digits = entry.digits;
        } else {
            const double scale = 1.0 + norm_inf(x.coords);
            if (correction <= 1e-13 * scale) {
                trace.status = RefineStatus::converged;
                break;
            }
            if (prev_correction >= 0.0 && correction >= 0.5 * prev_correction) {
                trace.status = RefineStatus::saturated;
                if (sweep_failed) trace.status = RefineStatus::breadth_failed;
                break;
            }
            prev_correction = correction;
        }
        if (it == cfg.max_sweeps - 1 && sweep_failed) {
            trace.status = RefineStatus::breadth_failed;
        }
    }

    if (!have_root && !trace.entries.empty()) {
        // Backfill the digit estimates: the size of the next correction
        // estimates the error at the preceding point.
        for (size_t i = 0; i + 1 < trace.entries.size(); ++i) {
            const double step_norm =
                norm_inf(trace.entries[i + 1].point.coords - trace.entries[i].point.coords);
            trace.entries[i].digits = digits_from_error(step_norm);
        }
        TraceEntry& last = trace.entries.back();
        const int mu = std::max(last.rec.mu, 1);
        last.digits = digits_from_error(std::pow(std::max(last.rec.residual, 1e-300), 1.0 / mu));
    }

    // Report the most accurate iterate; a sweep past saturation can lose
    // a little ground to rounding noise in delta.
    trace.final_point = x;
    if (have_root && !trace.entries.empty()) {
        const TraceEntry* best = &trace.entries.front();
        for (const TraceEntry& e : trace.entries)
            if (e.digits > best->digits) best = &e;
        trace.final_point = best->point;
    }
    return trace;
}

} // namespace mroot
