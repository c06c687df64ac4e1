#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mroot/errors.hpp"
#include "mroot/random.hpp"
#include "mroot/refiner.hpp"
#include "mroot/sysfile.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mroot;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitBreadth = 3;
constexpr int kExitNoConvergence = 4;

struct RunOptions {
    double tol = 1e-4;
    bool tol_given = false;
    int max_sweeps = 10;
    int max_mu = 50;
    double digits_target = 0.0;
    uint64_t seed = 1;
    double perturb = 0.0;
    bool json_out = false;
    bool fallback_newton = true;
};

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", x);
    return buf;
}

const char* status_name(RefineStatus s) {
    switch (s) {
        case RefineStatus::converged: return "converged";
        case RefineStatus::saturated: return "saturated";
        case RefineStatus::max_sweeps: return "max-sweeps";
        case RefineStatus::breadth_failed: return "breadth-failed";
    }
    return "?";
}

const char* sweep_status_name(SweepStatus s) {
    switch (s) {
        case SweepStatus::ok: return "ok";
        case SweepStatus::fallback_newton: return "newton-fallback";
        case SweepStatus::breadth_error: return "breadth-error";
        case SweepStatus::rank_error: return "rank-error";
        case SweepStatus::degenerate_error: return "degenerate";
    }
    return "?";
}

Point starting_point(const SystemFile& sf, const RunOptions& opt) {
    if (opt.perturb > 0.0) {
        if (!sf.known_root)
            throw std::runtime_error("--perturb needs a root: line in the system file");
        Rng rng(opt.seed);
        Vec u(sf.system.nvars());
        for (cd& c : u) c = rng.gauss();
        const double nn = norm2(u);
        Vec coords = sf.known_root->coords;
        for (int i = 0; i < sf.system.nvars(); ++i) coords[i] += opt.perturb * u[i] / nn;
        return Point(std::move(coords));
    }
    if (sf.initial_guess) return *sf.initial_guess;
    if (sf.known_root)
        throw std::runtime_error("no guess: line; pass --perturb to start from the known root");
    throw std::runtime_error("system file has neither guess: nor root:");
}

json trace_to_json(const std::string& name, const SystemFile& sf, const RefinementTrace& tr,
                   double tol, double elapsed_ms) {
    json j;
    j["system"] = name;
    j["tol"] = tol;
    j["status"] = status_name(tr.status);
    j["initial_digits"] = tr.initial_digits;
    j["initial_residual"] = tr.initial_residual;
    j["elapsed_ms"] = elapsed_ms;
    if (sf.expected_mu) j["expected_mu"] = *sf.expected_mu;
    json sweeps = json::array();
    for (const TraceEntry& e : tr.entries) {
        json s;
        s["residual"] = e.rec.residual;
        s["sigma_n"] = e.rec.sigma_n;
        s["mu"] = e.rec.mu;
        s["delta"] = {e.rec.delta.real(), e.rec.delta.imag()};
        s["digits"] = e.digits;
        s["status"] = sweep_status_name(e.rec.status);
        if (!e.rec.note.empty()) s["note"] = e.rec.note;
        sweeps.push_back(std::move(s));
    }
    j["sweeps"] = std::move(sweeps);
    json final_pt = json::array();
    for (const cd& c : tr.final_point.coords) final_pt.push_back({c.real(), c.imag()});
    j["final_point"] = std::move(final_pt);
    json dig = json::array();
    for (double d : tr.digit_sequence()) dig.push_back(d);
    j["digits_trace"] = std::move(dig);
    return j;
}

void print_report(const std::string& name, const SystemFile& sf, const RefinementTrace& tr,
                  double tol) {
    std::string mu_note = sf.expected_mu ? ", expected mu=" + std::to_string(*sf.expected_mu) : "";
    std::printf("system: %s   (t=%d, s=%d%s)   tol=%g\n", name.c_str(), sf.system.npolys(),
                sf.system.nvars(), mu_note.c_str(), tol);
    std::printf("%-6s %-23s %-23s %-4s %-32s %s\n", "sweep", "|F(x)|", "sigma_n", "mu", "delta",
                "digits");
    std::printf("%-6s %-23s %-23s %-4s %-32s %.2f\n", "0", fmt(tr.initial_residual).c_str(), "-",
                "-", "-", tr.initial_digits);
    int i = 1;
    for (const TraceEntry& e : tr.entries) {
        std::printf("%-6d %-23s %-23s %-4d %-32s %.2f", i++, fmt(e.rec.residual).c_str(),
                    fmt(e.rec.sigma_n).c_str(), e.rec.mu, format_complex(e.rec.delta).c_str(),
                    e.digits);
        if (e.rec.status != SweepStatus::ok) std::printf("  [%s]", sweep_status_name(e.rec.status));
        std::printf("\n");
    }
    std::printf("digits trace: ");
    bool first = true;
    for (double d : tr.digit_sequence()) {
        std::printf(first ? "%.1f" : " -> %.1f", d);
        first = false;
    }
    std::printf("\nstatus: %s\nrefined point:\n", status_name(tr.status));
    for (int v = 0; v < tr.final_point.size(); ++v)
        std::printf("  %s = %s\n", sf.variables[v].c_str(),
                    format_complex(tr.final_point.coords[v]).c_str());
}

int exit_code(const RefinementTrace& tr) {
    switch (tr.status) {
        case RefineStatus::converged: return kExitOk;
        case RefineStatus::breadth_failed: return kExitBreadth;
        default: return kExitNoConvergence;
    }
}

int run_one(const std::string& path, const RunOptions& opt, json* json_sink) {
    SystemFile sf = load_system(path);
    RunOptions local = opt;
    if (!opt.tol_given && sf.recommended_tau) local.tol = *sf.recommended_tau;

    RefinerConfig cfg;
    cfg.tau = local.tol;
    cfg.max_sweeps = local.max_sweeps;
    cfg.max_mu = local.max_mu;
    cfg.target_digits = local.digits_target;
    cfg.fallback_newton = local.fallback_newton;

    const Point start = starting_point(sf, local);
    const auto t0 = std::chrono::steady_clock::now();
    const RefinementTrace tr = refine(sf.system, start, cfg, sf.known_root);
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    const std::string name = fs::path(path).stem().string();
    if (json_sink) {
        *json_sink = trace_to_json(name, sf, tr, local.tol, ms);
    } else if (local.json_out) {
        std::cout << trace_to_json(name, sf, tr, local.tol, ms).dump(2) << "\n";
    } else {
        print_report(name, sf, tr, local.tol);
        std::printf("elapsed: %.1f ms\n", ms);
    }
    return exit_code(tr);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Refine breadth-one (corank-1 Jacobian) multiple roots of polynomial systems"};
    app.require_subcommand(1);

    RunOptions opt;
    std::string path;
    std::vector<std::string> bench_paths;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--tol", opt.tol,
                        "rank-gap tolerance tau (overrides a tau: line in the file)")
            ->check(CLI::PositiveNumber)
            ->each([&](const std::string&) { opt.tol_given = true; });
        cmd->add_option("--max-sweeps", opt.max_sweeps, "sweep cap")->check(CLI::PositiveNumber);
        cmd->add_option("--max-mu", opt.max_mu, "order cap for the basis construction");
        cmd->add_option("--digits-target", opt.digits_target, "stop after reaching this accuracy");
        cmd->add_option("--seed", opt.seed, "seed for --perturb");
        cmd->add_option("--perturb", opt.perturb,
                        "start from root + perturb * (seeded random unit vector)");
        cmd->add_flag("--json", opt.json_out, "machine-readable output");
        cmd->add_flag("--fallback-newton,!--no-fallback-newton", opt.fallback_newton,
                      "plain Newton sweep when the point looks regular (default on)");
    };

    CLI::App* run_cmd = app.add_subcommand("run", "refine one system");
    run_cmd->add_option("file", path, "system file")->required();
    add_common(run_cmd);

    CLI::App* bench_cmd = app.add_subcommand("bench", "run a corpus of system files");
    bench_cmd->add_option("paths", bench_paths, "files or directories with .sys files")->required();
    add_common(bench_cmd);

    CLI::App* print_cmd =
        app.add_subcommand("print", "parse a system file and print its canonical form");
    print_cmd->add_option("file", path, "system file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return run_one(path, opt, nullptr);

        if (print_cmd->parsed()) {
            std::cout << print_system(load_system(path));
            return kExitOk;
        }

        std::vector<std::string> files;
        for (const std::string& p : bench_paths) {
            if (fs::is_directory(p)) {
                for (const auto& e : fs::directory_iterator(p))
                    if (e.path().extension() == ".sys") files.push_back(e.path().string());
            } else {
                files.push_back(p);
            }
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) {
            std::cerr << "bench: no .sys files found\n";
            return kExitParse;
        }
        int worst = kExitOk;
        json all = json::array();
        for (const std::string& f : files) {
            if (opt.json_out) {
                json j;
                const int rc = run_one(f, opt, &j);
                j["exit_code"] = rc;
                all.push_back(std::move(j));
                worst = std::max(worst, rc);
            } else {
                std::printf("==== %s ====\n", f.c_str());
                worst = std::max(worst, run_one(f, opt, nullptr));
                std::printf("\n");
            }
        }
        if (opt.json_out) std::cout << all.dump(2) << "\n";
        return worst;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const BreadthError& e) {
        std::cerr << "breadth violation: " << e.what() << "\n";
        return kExitBreadth;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }
}
