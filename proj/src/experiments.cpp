#include "heis/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "heis/lattice.hpp"

namespace heis {

PointFunction operator_output(const TestFunction& f, const TestFunction& g, const ExponentConfig& cfg,
                              const QuadratureConfig& qcfg) {
    return [f, g, cfg, qcfg](const GroupPoint& x, std::int64_t id) {
        return eval_S(f, g, x, cfg.alpha, cfg.beta, cfg.gamma, cfg.lambda, qcfg, id).value;
    };
}

namespace {

struct RatioParts {
    NormEstimate out, fnorm, gnorm;
    EstimateWithError ratio;
    bool degenerate = false;
};

RatioParts norm_ratio(const TestFunction& f, const TestFunction& g, const ExponentConfig& cfg,
                      const QuadratureConfig& qcfg, const NormEstimatorConfig& ncfg) {
    RatioParts parts;
    const double r = cfg.r();
    parts.fnorm = lp_norm(f, cfg.p, cfg.n, ncfg);
    parts.gnorm = lp_norm(g, cfg.q, cfg.n, ncfg);
    parts.out = lp_norm(operator_output(f, g, cfg, qcfg), r, cfg.n, ncfg);
    const double den = parts.fnorm.value * parts.gnorm.value;
    if (den == 0.0) {
        parts.degenerate = true;
        parts.ratio.value = std::numeric_limits<double>::quiet_NaN();
        parts.ratio.std_error = std::numeric_limits<double>::quiet_NaN();
        return parts;
    }
    parts.ratio.value = parts.out.value / den;
    auto rel = [](const EstimateWithError& e) { return e.value > 0.0 ? e.std_error / e.value : 0.0; };
    parts.ratio.std_error = parts.ratio.value * std::sqrt(std::pow(rel(parts.out), 2) + std::pow(rel(parts.fnorm), 2) +
                                                          std::pow(rel(parts.gnorm), 2));
    parts.ratio.samples_used = parts.out.samples_used;
    return parts;
}

}  // namespace

BoundednessReport boundedness_experiment(const TestFunction& f, const TestFunction& g, const ExponentConfig& cfg,
                                         const QuadratureConfig& qcfg, const NormEstimatorConfig& ncfg,
                                         bool scale_sweep) {
    const Admissibility adm = admissible(cfg);
    if (!adm.ok) {
        std::string w;
        for (auto c : adm.witnesses) w += std::string(w.empty() ? "" : ";") + condition_name(c);
        throw std::invalid_argument("boundedness experiment needs an admissible configuration (violated: " + w + ")");
    }
    qcfg.validate();
    ncfg.validate();
    BoundednessReport rep;
    rep.exponents = cfg;
    rep.quadrature = qcfg;
    rep.norms = ncfg;
    rep.f_text = to_text(f);
    rep.g_text = to_text(g);
    rep.r = cfg.r();
    RatioParts base = norm_ratio(f, g, cfg, qcfg, ncfg);
    rep.output_norm = base.out;
    rep.f_norm = base.fnorm;
    rep.g_norm = base.gnorm;
    rep.ratio = base.ratio;
    rep.degenerate = base.degenerate;
    if (!scale_sweep || rep.degenerate) return rep;

    const double scales[] = {0.25, 1.0, 4.0};
    for (int i = 0; i < 3; ++i) {
        const double s = scales[i];
        if (s == 1.0) {
            rep.scale_sweep.push_back({s, rep.ratio});
            continue;
        }
        // follow the dilated supports so the same strata stay populated
        const int shift = static_cast<int>(std::lround(std::log2(s)));
        QuadratureConfig q = qcfg;
        q.k_min += shift;
        q.k_max += shift;
        q.seed = derive_seed(qcfg.seed, {0x5ca1e, i});
        NormEstimatorConfig nc = ncfg;
        nc.j_min -= shift;
        nc.j_max -= shift;
        nc.seed = derive_seed(ncfg.seed, {0x5ca1e, i});
        const RatioParts part = norm_ratio(fn::dilate(s, f), fn::dilate(s, g), cfg, q, nc);
        rep.scale_sweep.push_back({s, part.ratio});
    }
    for (std::size_t a = 0; a < rep.scale_sweep.size(); ++a)
        for (std::size_t b = a + 1; b < rep.scale_sweep.size(); ++b) {
            const auto& x = rep.scale_sweep[a].ratio;
            const auto& y = rep.scale_sweep[b].ratio;
            if (std::fabs(x.value - y.value) > 3.0 * std::hypot(x.std_error, y.std_error)) rep.scale_stable = false;
        }
    return rep;
}

DivergenceReport divergence_scan(Family family, const ExponentConfig& cfg, const FamilySetup& setup,
                                 const std::vector<double>& truncations, const QuadratureConfig& qcfg) {
    check_family_pairing(family, cfg, setup);
    if (truncations.size() < 2) throw std::invalid_argument("divergence scan needs at least two truncations");
    for (std::size_t i = 1; i < truncations.size(); ++i)
        if (!(truncations[i] > truncations[i - 1])) throw std::invalid_argument("truncations must increase");
    DivergenceReport rep;
    rep.family = family;
    rep.exponents = cfg;
    rep.setup = setup;
    rep.quadrature = qcfg;
    rep.mirrored = family == Family::BMirrored;
    for (double K : truncations) rep.steps.push_back(witness_ratio(family, cfg, setup, K, qcfg));

    rep.diverging = true;
    for (std::size_t i = 1; i < rep.steps.size(); ++i) {
        const double a = rep.steps[i - 1].ratio.value, b = rep.steps[i].ratio.value;
        const double doublings = std::log2(truncations[i] / truncations[i - 1]);
        const double factor = (a > 0.0 && b > 0.0) ? std::pow(b / a, 1.0 / doublings) : 0.0;
        rep.growth_factors.push_back(factor);
        if (!(factor >= setup.min_factor)) rep.diverging = false;
    }
    // least squares of log ratio against log K
    const auto m = static_cast<double>(rep.steps.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& st : rep.steps) {
        const double x = std::log(st.truncation), y = std::log(std::max(st.ratio.value, 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double det = m * sxx - sx * sx;
    rep.slope = (m * sxy - sx * sy) / det;
    const double icpt = (sy - rep.slope * sx) / m;
    if (rep.steps.size() > 2) {
        double rss = 0.0;
        for (const auto& st : rep.steps) {
            const double e = std::log(std::max(st.ratio.value, 1e-300)) - icpt - rep.slope * std::log(st.truncation);
            rss += e * e;
        }
        rep.slope_error = std::sqrt(rss / (m - 2.0) * m / det);
    }
    return rep;
}

NormEstimatorConfig endpoint_threshold_grid(NormEstimatorConfig base, double lambda, int n) {
    const int Q = 2 * n + 2;
    const double peak = Q * koranyi_ball_volume(n) / lambda;
    base.threshold_count = 15;
    base.threshold_start = std::ldexp(peak, -15);
    return base;
}

EndpointReport weak_type_endpoint_experiment(double lambda, int n, const QuadratureConfig& qcfg,
                                             const NormEstimatorConfig& ncfg, int k_last) {
    GroupParams params(n);
    const int Q = params.Q();
    if (!(lambda > 0.0 && lambda < Q)) throw std::invalid_argument("lambda must lie in (0, Q)");
    if (k_last < 0) throw std::invalid_argument("k_last must be >= 0");
    EndpointReport rep;
    rep.lambda = lambda;
    rep.n = n;
    rep.r = 1.0 / (2.0 - lambda / Q);
    rep.quadrature = qcfg;
    rep.norms = ncfg;
    const TestFunction ball = fn::ball(n, 1.0);
    const PointFunction B = [&](const GroupPoint& x, std::int64_t id) {
        return eval_B_lambda(ball, ball, x, lambda, qcfg, id).value;
    };
    rep.weak = weak_lr_norm(B, rep.r, n, ncfg);
    double lo = kInf, hi = 0.0;
    for (const auto& p : rep.weak.profile) {
        lo = std::min(lo, p.value);
        hi = std::max(hi, p.value);
    }
    rep.profile_spread = lo > 0.0 ? hi / lo : kInf;

    lo = kInf;
    hi = 0.0;
    for (int k = 0; k <= k_last; ++k) {
        const PointFunction Bk = [&, k](const GroupPoint& x, std::int64_t id) {
            return eval_shell_piece(ball, ball, x, k, qcfg, id).value;
        };
        NormEstimatorConfig nc = ncfg;
        nc.seed = derive_seed(ncfg.seed, {0x5e11, k});
        const NormEstimate half = lp_norm(Bk, 0.5, n, nc);
        const double scale = std::pow(2.0, 0.5 * Q * k);
        // ||B_k||_{1/2}^{1/2} is the raw integral of B_k^{1/2}
        EstimateWithError e{scale * half.integral, scale * half.integral_error, half.samples_used};
        rep.shells.push_back(k);
        rep.shell_norms.push_back(e);
        lo = std::min(lo, e.value);
        hi = std::max(hi, e.value);
    }
    rep.shell_spread = lo > 0.0 ? hi / lo : kInf;
    return rep;
}

TilingReport tiling_audit(double half_width, std::int64_t samples, std::uint64_t seed, int n) {
    GroupParams params(n);
    if (!(half_width > 0.0)) throw std::invalid_argument("half-width must be positive");
    if (samples < 1) throw std::invalid_argument("sample count must be positive");
    TilingReport rep;
    rep.n = n;
    rep.half_width = half_width;
    rep.samples = samples;
    rep.seed = seed;
    rep.min_overlap = std::numeric_limits<std::int64_t>::max();
    const int radius = default_search_radius(n);
    Rng rng(seed, {0x711e});
    GroupPoint x(n);
    for (std::int64_t i = 0; i < samples; ++i) {
        for (int c = 0; c <= 2 * n; ++c) x.set_coord(c, rng.uniform(-half_width, half_width));
        if (!cube_contains(locate(x), x)) ++rep.consistency_failures;
        if (overlap_count(x, 1, CubeKind::Plain) != 1) ++rep.coverage_failures;
        const std::int64_t k = overlap_count(x, radius, CubeKind::Enlarged);
        rep.max_overlap = std::max(rep.max_overlap, k);
        rep.min_overlap = std::min(rep.min_overlap, k);
    }
    const std::int64_t probes = std::max<std::int64_t>(1, samples / 10);
    for (std::int64_t i = 0; i < probes; ++i) {
        for (int c = 0; c <= 2 * n; ++c) x.set_coord(c, rng.uniform(-half_width, half_width));
        const LatticeIndex a = locate(x);
        if (!enlarged_contains(a, sample_enlarged_cube_point(a, rng))) ++rep.containment_failures;
    }
    return rep;
}

}  // namespace heis
