// Command-line front end: each subcommand runs one experiment and writes a CSV
// (stdout unless --out) plus an optional metadata sidecar (--meta).
#include <CLI11.hpp>

#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "heis/config.hpp"
#include "heis/experiments.hpp"
#include "heis/exponents.hpp"
#include "heis/report.hpp"
#include "heis/simd.hpp"

using namespace heis;

namespace {

struct Output {
    std::string out_path;
    std::string meta_path;
};

void emit(const Output& o, const std::string& csv, const Metadata& meta, const std::string& summary) {
    if (o.out_path.empty()) {
        std::cout << csv;
        std::cerr << summary;
    } else {
        std::ofstream f(o.out_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write '" + o.out_path + "'");
        f << csv;
        std::cout << summary;
    }
    if (!o.meta_path.empty()) {
        std::ofstream f(o.meta_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write '" + o.meta_path + "'");
        f << metadata_text(meta);
    }
}

ExperimentConfig config_or_default(const std::string& path, const ExperimentConfig& base = {}) {
    return path.empty() ? base : load_config(path, base);
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
        if (used == 0 || used != item.size()) throw std::invalid_argument("bad number in list: '" + item + "'");
        out.push_back(v);
    }
    return out;
}

std::string fmt(const EstimateWithError& e) { return csv_number(e.value) + " +- " + csv_number(e.std_error); }

TestFunction function_or_ball(const std::optional<std::string>& text, int n) {
    return text ? parse_function(*text) : fn::ball(n, 1.0);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bilinear fractional integrals on the Heisenberg group: evaluation and experiments"};
    app.require_subcommand(1);
    Output out;
    std::string simd = "auto";
    app.add_option("--simd", simd, "kernel backend: auto, scalar or avx2")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

    auto add_io = [&](CLI::App* sub) {
        sub->add_option("--out", out.out_path, "CSV destination (default stdout)");
        sub->add_option("--meta", out.meta_path, "metadata sidecar path");
    };

    // check-exponents
    ExponentConfig ec;
    bool stein_weiss = false;
    auto* check = app.add_subcommand("check-exponents", "classify an exponent configuration");
    check->add_option("--n", ec.n)->required();
    check->add_option("--lambda", ec.lambda)->required();
    check->add_option("--p", ec.p)->required();
    check->add_option("--q", ec.q)->required();
    check->add_option("--alpha", ec.alpha)->required();
    check->add_option("--beta", ec.beta)->required();
    check->add_option("--gamma", ec.gamma);
    check->add_flag("--stein-weiss", stein_weiss, "use gamma = -alpha - beta");

    // eval-operator
    std::string op = "B", at, config_path;
    auto* eval = app.add_subcommand("eval-operator", "estimate B, I or S at one point");
    eval->add_option("--op", op)->check(CLI::IsMember({"B", "I", "S"}));
    eval->add_option("--at", at, "comma separated coordinates x1..xn,y1..yn,t")->required();
    eval->add_option("--config", config_path);
    add_io(eval);

    // norm-ratio
    bool no_sweep = false;
    auto* ratio = app.add_subcommand("norm-ratio", "boundedness experiment for the weighted operator");
    ratio->add_option("--config", config_path)->required();
    ratio->add_flag("--no-scale-sweep", no_sweep);
    add_io(ratio);

    // divergence
    std::string family_text, truncations_text = "8,16,32";
    auto* div = app.add_subcommand("divergence", "truncated ratio scan for a counterexample family");
    div->add_option("--family", family_text)->required()->check(CLI::IsMember({"a", "b", "b-mirrored", "c", "d"}));
    div->add_option("--config", config_path);
    div->add_option("--truncations", truncations_text);
    add_io(div);

    // weak-endpoint
    double lambda = 1.0;
    int n = 1, k_last = 6;
    auto* weak = app.add_subcommand("weak-endpoint", "weak-type profile at p = q = 1");
    weak->add_option("--lambda", lambda)->required();
    weak->add_option("--n", n);
    weak->add_option("--k-last", k_last);
    weak->add_option("--config", config_path, "quadrature and norm settings");
    add_io(weak);

    // tiling-audit
    double half_width = 50.0;
    std::int64_t samples = 100000;
    std::uint64_t seed = 1;
    auto* tiling = app.add_subcommand("tiling-audit", "coverage and overlap audit of the lattice tiling");
    tiling->add_option("--half-width", half_width)->required();
    tiling->add_option("--samples", samples)->required();
    tiling->add_option("--seed", seed);
    tiling->add_option("--n", n);
    add_io(tiling);

    CLI11_PARSE(app, argc, argv);

    try {
        if (simd != "auto") {
            const auto b = simd == "avx2" ? simd::Backend::Avx2 : simd::Backend::Scalar;
            if (!simd::backend_available(b)) throw std::invalid_argument("backend '" + simd + "' is not available");
            simd::set_active_backend(b);
        }

        if (*check) {
            Classification c;
            if (stein_weiss) {
                ec.gamma = -ec.alpha - ec.beta;
                c = stein_weiss_characterize(ec.alpha, ec.beta, ec.lambda, ec.p, ec.q, ec.Q());
            } else {
                c = characterize(ec);
            }
            std::cout << "verdict: " << verdict_name(c.verdict) << "\n";
            if (!c.witnesses.empty()) std::cout << "witnesses: " << c.witness_list() << "\n";
            if (auto r = derived_r(ec.p, ec.q, ec.lambda, ec.alpha, ec.beta, ec.gamma, ec.Q()))
                std::cout << "r: " << csv_number(*r) << "\n";
            for (const auto& a : c.annotations) std::cout << "note: " << a << "\n";
            switch (c.verdict) {
                case Verdict::Bounded: return 0;
                case Verdict::Unbounded: return 2;
                case Verdict::Inadmissible: return 3;
            }
        }

        if (*eval) {
            const ExperimentConfig cfg = config_or_default(config_path);
            const int dim = 2 * cfg.exponents.n + 1;
            const auto coords = parse_list(at);
            if (static_cast<int>(coords.size()) != dim)
                throw std::invalid_argument("--at needs " + std::to_string(dim) + " coordinates for n = " +
                                            std::to_string(cfg.exponents.n));
            const GroupPoint x = GroupPoint::from_coords(cfg.exponents.n, coords.data());
            const TestFunction f = function_or_ball(cfg.f_text, cfg.exponents.n);
            const TestFunction g = function_or_ball(cfg.g_text, cfg.exponents.n);
            const auto& e = cfg.exponents;
            OperatorEstimate est;
            if (op == "B") est = eval_B_lambda(f, g, x, e.lambda, cfg.quadrature);
            else if (op == "I") est = eval_I_lambda(f, x, e.lambda, cfg.quadrature);
            else est = eval_S(f, g, x, e.alpha, e.beta, e.gamma, e.lambda, cfg.quadrature);
            std::ostringstream csv;
            write_point_csv(csv, {op, x, est});
            Metadata meta{"eval-operator --op " + op + " --at " + at, config_to_text(cfg),
                          {{"value", csv_number(est.value)}, {"std_error", csv_number(est.std_error)},
                           {"f", to_text(f)}, {"g", to_text(g)}}};
            emit(out, csv.str(), meta, op + "(x) = " + fmt(est) + "\n");
            return 0;
        }

        if (*ratio) {
            const ExperimentConfig cfg = load_config(config_path);
            const int dim = cfg.exponents.n;
            const auto rep = boundedness_experiment(function_or_ball(cfg.f_text, dim), function_or_ball(cfg.g_text, dim),
                                                    cfg.exponents, cfg.quadrature, cfg.norms, !no_sweep);
            std::ostringstream csv;
            write_boundedness_csv(csv, rep);
            Metadata meta{"norm-ratio", config_to_text(cfg),
                          {{"verdict", rep.degenerate ? "degenerate" : "finite"},
                           {"ratio", csv_number(rep.ratio.value)},
                           {"ratio_error", csv_number(rep.ratio.std_error)},
                           {"scale_stable", rep.scale_stable ? "true" : "false"},
                           {"f", rep.f_text},
                           {"g", rep.g_text}}};
            std::string summary = "ratio = " + fmt(rep.ratio) + (rep.degenerate ? " (degenerate)" : "") + "\n";
            for (const auto& sp : rep.scale_sweep) summary += "  s = " + csv_number(sp.s) + ": " + fmt(sp.ratio) + "\n";
            if (!rep.scale_sweep.empty())
                summary += std::string("scale sweep ") + (rep.scale_stable ? "stable" : "NOT stable") + "\n";
            emit(out, csv.str(), meta, summary);
            return 0;
        }

        if (*div) {
            const Family fam = family_from_name(family_text);
            const DivergenceSetup d = default_divergence_setup(fam);
            ExperimentConfig base;
            base.exponents = d.exponents;
            base.family = d.family;
            const ExperimentConfig cfg = config_or_default(config_path, base);
            const auto rep =
                divergence_scan(fam, cfg.exponents, cfg.family, parse_list(truncations_text), cfg.quadrature);
            std::ostringstream csv;
            write_divergence_csv(csv, rep);
            Metadata meta{"divergence --family " + family_text + " --truncations " + truncations_text,
                          config_to_text(cfg),
                          {{"target", condition_name(family_target(fam))},
                           {"verdict", rep.diverging ? "diverging" : "not-diverging"},
                           {"min_factor", csv_number(cfg.family.min_factor)},
                           {"slope", csv_number(rep.slope)}}};
            std::string summary;
            for (const auto& s : rep.steps) summary += "K = " + csv_number(s.truncation) + ": " + fmt(s.ratio) + "\n";
            summary += std::string("verdict: ") + (rep.diverging ? "diverging" : "not diverging") + "\n";
            emit(out, csv.str(), meta, summary);
            return 0;
        }

        if (*weak) {
            const ExperimentConfig cfg = config_or_default(config_path);
            const NormEstimatorConfig ncfg = endpoint_threshold_grid(cfg.norms, lambda, n);
            const auto rep = weak_type_endpoint_experiment(lambda, n, cfg.quadrature, ncfg, k_last);
            std::ostringstream csv;
            write_endpoint_csv(csv, rep);
            Metadata meta{"weak-endpoint --lambda " + csv_number(lambda) + " --n " + std::to_string(n),
                          config_to_text(cfg),
                          {{"weak_norm", csv_number(rep.weak.value)},
                           {"profile_spread", csv_number(rep.profile_spread)},
                           {"shell_spread", csv_number(rep.shell_spread)}}};
            emit(out, csv.str(), meta,
                 "weak norm = " + fmt(rep.weak) + "\nprofile spread = " + csv_number(rep.profile_spread) +
                     "\nshell spread = " + csv_number(rep.shell_spread) + "\n");
            return 0;
        }

        if (*tiling) {
            const auto rep = tiling_audit(half_width, samples, seed, n);
            std::ostringstream csv;
            write_tiling_csv(csv, rep);
            Metadata meta{"tiling-audit",
                          "",
                          {{"coverage_failures", std::to_string(rep.coverage_failures)},
                           {"consistency_failures", std::to_string(rep.consistency_failures)},
                           {"containment_failures", std::to_string(rep.containment_failures)},
                           {"max_overlap", std::to_string(rep.max_overlap)}}};
            emit(out, csv.str(), meta,
                 "coverage failures = " + std::to_string(rep.coverage_failures) +
                     "\nmax enlarged overlap = " + std::to_string(rep.max_overlap) + "\n");
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
