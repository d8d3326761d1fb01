#include "heis/witness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "heis/simd.hpp"

namespace heis {

const char* family_name(Family f) {
    switch (f) {
        case Family::A: return "a";
        case Family::B: return "b";
        case Family::BMirrored: return "b-mirrored";
        case Family::C: return "c";
        case Family::D: return "d";
    }
    return "?";
}

Family family_from_name(const std::string& s) {
    for (Family f : {Family::A, Family::B, Family::BMirrored, Family::C, Family::D})
        if (s == family_name(f)) return f;
    throw std::invalid_argument("unknown family '" + s + "' (expected a, b, b-mirrored, c or d)");
}

Condition family_target(Family f) {
    switch (f) {
        case Family::A: return Condition::III;
        case Family::B: return Condition::I;
        case Family::BMirrored: return Condition::II;
        case Family::C: return Condition::IV;
        case Family::D: return Condition::RVsPQ;
    }
    return Condition::I;
}

DivergenceSetup default_divergence_setup(Family f) {
    DivergenceSetup d;
    d.exponents.n = 1;
    d.exponents.lambda = 1.0;
    switch (f) {
        case Family::A:
            d.exponents.p = d.exponents.q = 1.0 / 0.575;
            d.exponents.alpha = d.exponents.beta = -1.75;
            d.exponents.gamma = 3.75;
            break;
        case Family::B:
            d.exponents.p = 16.0;
            d.exponents.q = 2.0;
            d.exponents.alpha = 3.6;
            d.exponents.beta = -3.5;
            d.exponents.gamma = 0.0;
            break;
        case Family::BMirrored:
            d.exponents.p = 2.0;
            d.exponents.q = 16.0;
            d.exponents.alpha = -3.5;
            d.exponents.beta = 3.6;
            d.exponents.gamma = 0.0;
            break;
        case Family::C:
            d.exponents.p = d.exponents.q = 2.0;
            d.exponents.alpha = d.exponents.beta = d.exponents.gamma = -1.0 / 3.0;
            break;
        case Family::D:
            d.exponents.p = d.exponents.q = 2.0;
            d.exponents.alpha = d.exponents.beta = 1.5;
            d.exponents.gamma = 6.0;
            break;
    }
    return d;
}

void check_family_pairing(Family f, const ExponentConfig& cfg, const FamilySetup& setup) {
    const Classification cls = characterize(cfg);
    const Condition target = family_target(f);
    const bool exact = cls.witnesses.size() == 1 && cls.witnesses.front() == target;
    const Verdict expected = f == Family::D ? Verdict::Inadmissible : Verdict::Unbounded;
    if (cls.verdict != expected || !exact) {
        std::string got = verdict_name(cls.verdict);
        if (!cls.witnesses.empty()) got += " (" + cls.witness_list() + ")";
        throw std::invalid_argument(std::string("family ") + family_name(f) + " needs a configuration violating exactly " +
                                    condition_name(target) + ", got " + got);
    }
    if (!(setup.N >= 3.0)) throw std::invalid_argument("divergence families need N >= 3");
    if (setup.inner_samples < 1) throw std::invalid_argument("inner_samples must be >= 1");
    if (!(setup.min_factor > 1.0)) throw std::invalid_argument("min_factor must exceed 1");
    const double Q = cfg.Q();
    const double s = 1.0 / cfg.p + 1.0 / cfg.q;
    switch (f) {
        case Family::A:
            if (!(setup.M < Q * setup.N)) throw std::invalid_argument("family (a) needs M < QN");
            if (!(setup.M * s - Q * setup.N > 0.0)) throw std::invalid_argument("family (a) needs M(1/p+1/q) - QN > 0");
            break;
        case Family::B:
            if (!(setup.s < Q / cfg.p)) throw std::invalid_argument("family (b) needs s < Q/p");
            if (!(setup.s + cfg.alpha < Q)) throw std::invalid_argument("family (b) needs s + alpha < Q");
            break;
        case Family::BMirrored:
            if (!(setup.s < Q / cfg.q)) throw std::invalid_argument("mirrored family (b) needs s < Q/q");
            if (!(setup.s + cfg.beta < Q)) throw std::invalid_argument("mirrored family (b) needs s + beta < Q");
            break;
        case Family::C:
            break;
        case Family::D: {
            const double tau1 = 1.0 / cfg.p + setup.epsilon, tau2 = 1.0 / cfg.q + setup.epsilon;
            if (!(setup.epsilon > 0.0)) throw std::invalid_argument("family (d) needs epsilon > 0");
            if (!(tau1 + tau2 <= cfg.inv_r())) throw std::invalid_argument("family (d) needs tau1 + tau2 <= 1/r");
            break;
        }
    }
}

FunctionPair family_functions(Family f, const ExponentConfig& cfg, const FamilySetup& setup, double truncation) {
    FamilyParams P{cfg.n, setup.N, setup.M, cfg.p, cfg.q, truncation};
    switch (f) {
        case Family::A: return family_a_pair(P);
        case Family::B: return family_b_pair(P, setup.s);
        case Family::BMirrored: return family_b_mirrored_pair(P, setup.s);
        case Family::C: return family_c_pair(P);
        case Family::D:
            return family_d_pair(cfg.p, cfg.q, 1.0 / cfg.p + setup.epsilon, 1.0 / cfg.q + setup.epsilon, cfg.n,
                                 16.0 * truncation);
    }
    throw std::logic_error("unreachable");
}

GroupPoint sample_unit_ball(int n, Rng& rng) {
    GroupPoint v(n);
    do {
        for (int c = 0; c <= 2 * n; ++c) v.set_coord(c, rng.uniform(-1.0, 1.0));
    } while (!(knorm(v) < 1.0) || knorm(v) == 0.0);
    return v;
}

GroupPoint sample_unit_direction(int n, Rng& rng) {
    const GroupPoint v = sample_unit_ball(n, rng);
    return dilate(1.0 / knorm(v), v);
}

namespace {

struct Accumulator {
    double integral = 0.0;
    double variance = 0.0;
    std::int64_t samples = 0;

    // adds a block of iid draws X with E[X] = block integral
    void add_block(double s1, double s2, std::int64_t count) {
        const auto N = static_cast<double>(count);
        const double mean = s1 / N;
        integral += mean;
        if (count > 1) variance += std::max(0.0, s2 / N - mean * mean) / (N - 1.0);
        samples += count;
    }
    EstimateWithError estimate() const { return {integral, std::sqrt(variance), samples}; }
};

std::int64_t truncation_tag(double K) { return static_cast<std::int64_t>(std::llround(K * 1024.0)); }

// uniform in {lo <= |x| < hi}, optionally restricted to the positive orthant
GroupPoint sample_shell(int n, double lo, double hi, bool orthant, Rng& rng) {
    GroupPoint x(n);
    for (;;) {
        for (int c = 0; c < 2 * n; ++c) x.z(c) = orthant ? hi * rng.uniform() : rng.uniform(-hi, hi);
        x.t() = orthant ? hi * hi * rng.uniform() : rng.uniform(-hi * hi, hi * hi);
        const double r = knorm(x);
        if (r >= lo && r < hi) return x;
    }
}

double shell_volume(int n, double lo, double hi) {
    const int Q = 2 * n + 2;
    return koranyi_ball_volume(n) * (std::pow(hi, Q) - std::pow(lo, Q));
}

GroupPoint orthant(GroupPoint p) {
    for (int c = 0; c <= 2 * p.n(); ++c) p.set_coord(c, std::fabs(p.coord(c)));
    return p;
}

EstimateWithError family_a_integral(const ExponentConfig& cfg, const FamilySetup& setup, double K,
                                    const QuadratureConfig& qcfg, double r) {
    const int n = cfg.n;
    const int Q = cfg.Q();
    const LatticeTable table(n, 0.0, K);
    const auto& groups = table.groups();
    const std::size_t G = groups.size();
    std::vector<double> side(G), weight(G), prefix(G + 1, 0.0);
    const double kernel_power = cfg.lambda - Q - cfg.alpha - cfg.beta;
    const double weight_power = setup.M / cfg.p + setup.M / cfg.q;
    for (std::size_t i = 0; i < G; ++i) {
        const auto& g = groups[i];
        const double m = static_cast<double>(g.m), t = static_cast<double>(g.t);
        const double anchor = std::sqrt(std::sqrt(16.0 * m * m + 4.0 * t * t));  // |2a|
        side[i] = std::pow(g.norm, -(setup.N + 1.0));
        weight[i] = g.multiplicity * std::pow(g.norm, weight_power) * std::pow(anchor, kernel_power);
        prefix[i + 1] = prefix[i] + weight[i];
    }
    const auto& kern = simd::active();
    auto S = [&](const GroupPoint& x) {
        double xs[2 * kMaxN + 1];
        double zmax = 0.0, sat = 1.0;
        for (int c = 0; c <= 2 * n; ++c) xs[c] = x.coord(c);
        for (int c = 0; c < 2 * n; ++c) {
            zmax = std::max(zmax, xs[c]);
            sat *= 2.0 * xs[c];
        }
        sat *= 2.0 * xs[2 * n];
        const double t_min = std::max(zmax, std::sqrt(xs[2 * n]));
        const double t_sat = std::max(2.0 * zmax, std::sqrt(2.0 * xs[2 * n]));
        const auto i_sat = static_cast<std::size_t>(
            std::partition_point(side.begin(), side.end(), [&](double v) { return v >= t_sat; }) - side.begin());
        const auto i_min = static_cast<std::size_t>(
            std::partition_point(side.begin(), side.end(), [&](double v) { return v > t_min; }) - side.begin());
        double total = prefix[i_sat] * sat;
        if (i_min > i_sat)
            total += kern.box_overlap_sum(n, weight.data() + i_sat, side.data() + i_sat, i_min - i_sat, xs);
        return std::pow(knorm(x), -cfg.gamma) * total;
    };

    const double r_K = std::pow(K, -(setup.N + 1.0));
    const int j_lo = static_cast<int>(std::floor(std::log2(r_K))) - 6;
    const int j_hi = 0;
    const int strata = j_hi - j_lo + 1;
    const std::int64_t per = std::max<std::int64_t>(16, qcfg.samples_per_shell / strata);
    const double orthant_fraction = std::ldexp(1.0, -(2 * n + 1));
    Accumulator acc;
    for (int j = j_lo; j <= j_hi; ++j) {
        Rng rng(qcfg.seed, {0xA, truncation_tag(K), j});
        const double lo = std::ldexp(1.0, j), hi = 2.0 * lo;
        const double vol = shell_volume(n, lo, hi) * orthant_fraction;
        double s1 = 0.0, s2 = 0.0;
        for (std::int64_t i = 0; i < per; ++i) {
            const double v = vol * std::pow(S(sample_shell(n, lo, hi, true, rng)), r);
            s1 += v;
            s2 += v * v;
        }
        acc.add_block(s1, s2, per);
    }
    return acc.estimate();
}

// Cell sampler over lattice groups with probability proportional to exp(log_weight).
class GroupPicker {
public:
    explicit GroupPicker(const std::vector<double>& log_weight) : cdf_(log_weight.size()) {
        const double top = *std::max_element(log_weight.begin(), log_weight.end());
        double acc = 0.0;
        for (std::size_t i = 0; i < log_weight.size(); ++i) {
            acc += std::exp(log_weight[i] - top);
            cdf_[i] = acc;
        }
        total_ = acc;
    }
    std::size_t pick(Rng& rng, double& prob) const {
        const double u = rng.uniform() * total_;
        auto idx = static_cast<std::size_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
        if (idx >= cdf_.size()) idx = cdf_.size() - 1;
        const double lo = idx == 0 ? 0.0 : cdf_[idx - 1];
        prob = (cdf_[idx] - lo) / total_;
        return idx;
    }

private:
    std::vector<double> cdf_;
    double total_ = 0.0;
};

EstimateWithError family_b_integral(const ExponentConfig& cfg, const FamilySetup& setup, double K,
                                    const QuadratureConfig& qcfg, double r, bool mirrored) {
    const int n = cfg.n;
    const int Q = cfg.Q();
    const FunctionPair fg = family_functions(mirrored ? Family::BMirrored : Family::B, cfg, setup, K);
    // exponent on the singular (power) side and on the lattice side
    const double sing_alpha = mirrored ? cfg.beta : cfg.alpha;
    const double lat_alpha = mirrored ? cfg.alpha : cfg.beta;
    const double lat_exp = mirrored ? cfg.p : cfg.q;
    const double sigma = setup.s + sing_alpha;
    const double radial_power = Q - sigma;
    const LatticeTable table(n, std::numbers::e, K);
    const auto& groups = table.groups();
    if (groups.empty()) throw std::invalid_argument("truncation leaves no lattice cells");
    LatticeSumSpec lat{n, LatticeShape::Box, setup.N, Q * (setup.N - 1.0) / lat_exp, 2.0 / lat_exp, std::numbers::e, K};

    std::vector<double> logw(groups.size());
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const auto& g = groups[i];
        const double rad = lat.radius(g.norm);
        const double cell = Q * std::log(0.5 * rad);
        const double logS = -cfg.gamma * std::log(g.norm) + std::log(lat.weight(g.norm)) -
                            lat_alpha * std::log(2.0 * g.norm) + (cfg.lambda - Q) * std::log(g.norm) +
                            radial_power * std::log(0.5 * rad);
        logw[i] = std::log(g.multiplicity) + cell + r * logS;
    }
    const GroupPicker picker(logw);
    const double polar = Q * koranyi_ball_volume(n) / (radial_power * std::ldexp(1.0, 2 * n + 1));

    Rng rng(qcfg.seed, {mirrored ? 0xB2 : 0xB, truncation_tag(K)});
    double s1 = 0.0, s2 = 0.0;
    const std::int64_t cells = qcfg.samples_per_shell;
    for (std::int64_t c = 0; c < cells; ++c) {
        double prob = 0.0;
        const auto& g = groups[picker.pick(rng, prob)];
        const double rad = lat.radius(g.norm);
        const GroupPoint a = table.sample_member(g, rng);
        GroupPoint x = a;
        double rho0 = kInf;
        for (int k = 0; k < 2 * n; ++k) {
            const double xi = 0.5 * rad * rng.uniform();
            x.z(k) += xi;
            rho0 = std::min(rho0, 2.0 * xi);
        }
        const double xi_t = 0.25 * rad * rad * rng.uniform();
        x.t() += xi_t;
        rho0 = std::min(rho0, std::sqrt(2.0 * xi_t));

        double inner = 0.0;
        for (int i = 0; i < setup.inner_samples; ++i) {
            const double rho = rho0 * std::pow(rng.uniform(), 1.0 / radial_power);
            const GroupPoint w = dilate(rho, orthant(sample_unit_direction(n, rng)));
            // w is the argument of the singular factor
            GroupPoint y, fa, ga;
            if (!mirrored) {
                y = multiply(inverse(w), x);
                fa = w;
                ga = multiply(x, y);
            } else {
                y = multiply(inverse(x), w);
                fa = multiply(x, inverse(y));
                ga = w;
            }
            const double fv = evaluate(fg.f, fa);
            if (fv == 0.0) continue;
            const double gv = evaluate(fg.g, ga);
            if (gv == 0.0) continue;
            inner += fv * gv * std::pow(knorm(fa), -cfg.alpha) * std::pow(knorm(ga), -cfg.beta) *
                     std::pow(knorm(y), cfg.lambda - Q) * std::pow(rho, sigma);
        }
        inner /= setup.inner_samples;
        const double Sx = std::pow(knorm(x), -cfg.gamma) * polar * std::pow(rho0, radial_power) * inner;
        const double v = g.multiplicity * std::pow(0.5 * rad, Q) * std::pow(Sx, r) / prob;
        s1 += v;
        s2 += v * v;
    }
    Accumulator acc;
    acc.add_block(s1, s2, cells);
    return acc.estimate();
}

EstimateWithError family_c_integral(const ExponentConfig& cfg, const FamilySetup& setup, double K,
                                    const QuadratureConfig& qcfg, double r) {
    const int n = cfg.n;
    const int Q = cfg.Q();
    const FunctionPair fg = family_functions(Family::C, cfg, setup, K);
    const LatticeTable table(n, std::numbers::e, K);
    const auto& groups = table.groups();
    if (groups.empty()) throw std::invalid_argument("truncation leaves no lattice cells");
    LatticeSumSpec fs{n, LatticeShape::Ball, setup.N, Q * (setup.N - 1.0) / cfg.p, 2.0 / cfg.p, std::numbers::e, K};
    LatticeSumSpec gs = fs;
    gs.weight_power = Q * (setup.N - 1.0) / cfg.q;
    gs.log_power = 2.0 / cfg.q;
    const double CQ = koranyi_ball_volume(n);

    std::vector<double> logw(groups.size());
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const auto& g = groups[i];
        const double rad = fs.radius(g.norm);
        const double logS = -(cfg.gamma + cfg.alpha + cfg.beta) * std::log(g.norm) + std::log(fs.weight(g.norm)) +
                            std::log(gs.weight(g.norm)) + cfg.lambda * std::log(rad);
        logw[i] = std::log(g.multiplicity) + Q * std::log(rad) + r * logS;
    }
    const GroupPicker picker(logw);

    Rng rng(qcfg.seed, {0xC, truncation_tag(K)});
    double s1 = 0.0, s2 = 0.0;
    const std::int64_t cells = qcfg.samples_per_shell;
    for (std::int64_t c = 0; c < cells; ++c) {
        double prob = 0.0;
        const auto& g = groups[picker.pick(rng, prob)];
        const double rad = fs.radius(g.norm);
        const GroupPoint a = table.sample_member(g, rng);
        const GroupPoint offset = dilate(rad, sample_unit_ball(n, rng));
        const GroupPoint x = multiply(a, offset);
        const double reach = 2.0 * rad - knorm(offset);
        double inner = 0.0;
        for (int i = 0; i < setup.inner_samples; ++i) {
            const double rho = reach * std::pow(rng.uniform(), 1.0 / cfg.lambda);
            const GroupPoint y = dilate(rho, sample_unit_direction(n, rng));
            const GroupPoint fa = multiply(x, inverse(y));
            const double fv = evaluate(fg.f, fa);
            if (fv == 0.0) continue;
            const GroupPoint ga = multiply(x, y);
            const double gv = evaluate(fg.g, ga);
            if (gv == 0.0) continue;
            inner += fv * gv * std::pow(knorm(fa), -cfg.alpha) * std::pow(knorm(ga), -cfg.beta);
        }
        inner /= setup.inner_samples;
        const double Sx =
            std::pow(knorm(x), -cfg.gamma) * Q * CQ * std::pow(reach, cfg.lambda) / cfg.lambda * inner;
        const double v = g.multiplicity * CQ * std::pow(rad, Q) * std::pow(Sx, r) / prob;
        s1 += v;
        s2 += v * v;
    }
    Accumulator acc;
    acc.add_block(s1, s2, cells);
    return acc.estimate();
}

EstimateWithError family_d_integral(const ExponentConfig& cfg, const FamilySetup& setup, double K,
                                    const QuadratureConfig& qcfg, double r) {
    const int n = cfg.n;
    const int Q = cfg.Q();
    const FunctionPair fg = family_functions(Family::D, cfg, setup, K);
    const double CQ = koranyi_ball_volume(n);
    const int j_lo = 5;
    const int j_hi = static_cast<int>(std::floor(std::log2(8.0 * K))) - 1;
    if (j_hi < j_lo) throw std::invalid_argument("family (d) needs truncation >= 8");
    const int strata = j_hi - j_lo + 1;
    const std::int64_t per = std::max<std::int64_t>(16, qcfg.samples_per_shell / strata);
    Accumulator acc;
    for (int j = j_lo; j <= j_hi; ++j) {
        Rng rng(qcfg.seed, {0xD, truncation_tag(K), j});
        const double lo = std::ldexp(1.0, j), hi = 2.0 * lo;
        const double vol = shell_volume(n, lo, hi);
        double s1 = 0.0, s2 = 0.0;
        for (std::int64_t k = 0; k < per; ++k) {
            const GroupPoint x = sample_shell(n, lo, hi, false, rng);
            const double reach = 0.5 * knorm(x);
            double inner = 0.0;
            for (int i = 0; i < setup.inner_samples; ++i) {
                const double rho = reach * std::pow(rng.uniform(), 1.0 / cfg.lambda);
                const GroupPoint y = dilate(rho, sample_unit_direction(n, rng));
                const GroupPoint fa = multiply(x, inverse(y));
                const GroupPoint ga = multiply(x, y);
                const double fv = evaluate(fg.f, fa), gv = evaluate(fg.g, ga);
                inner += fv * gv * std::pow(knorm(fa), -cfg.alpha) * std::pow(knorm(ga), -cfg.beta);
            }
            inner /= setup.inner_samples;
            const double Sx =
                std::pow(knorm(x), -cfg.gamma) * Q * CQ * std::pow(reach, cfg.lambda) / cfg.lambda * inner;
            const double v = vol * std::pow(Sx, r);
            s1 += v;
            s2 += v * v;
        }
        acc.add_block(s1, s2, per);
    }
    return acc.estimate();
}

// ||f||_p for f = |y|^{-s} on Q(0,1): radial importance sampling over the
// orthant ball that contains the unit cube.
EstimateWithError power_cube_norm(int n, double s, double p, std::uint64_t seed) {
    const int Q = 2 * n + 2;
    const double sigma = s * p;
    const double radial_power = Q - sigma;
    const double R = std::pow(4.0 * n * n + 1.0, 0.25);
    const double factor =
        Q * koranyi_ball_volume(n) * std::pow(R, radial_power) / (radial_power * std::ldexp(1.0, 2 * n + 1));
    const TestFunction cube = fn::cube(n, 1.0);
    Rng rng(seed, {0xF0});
    const std::int64_t N = 1 << 17;
    std::int64_t hits = 0;
    for (std::int64_t i = 0; i < N; ++i) {
        const double rho = R * std::pow(rng.uniform(), 1.0 / radial_power);
        if (evaluate(cube, dilate(rho, orthant(sample_unit_direction(n, rng)))) != 0.0) ++hits;
    }
    const double frac = static_cast<double>(hits) / N;
    const double integral = factor * frac;
    const double err = factor * std::sqrt(frac * (1.0 - frac) / N);
    return {std::pow(integral, 1.0 / p), std::pow(integral, 1.0 / p) / p * err / integral, N};
}

}  // namespace

WitnessEstimate witness_ratio(Family f, const ExponentConfig& cfg, const FamilySetup& setup, double truncation,
                              const QuadratureConfig& qcfg) {
    check_family_pairing(f, cfg, setup);
    qcfg.validate();
    if (!(truncation >= 4.0) || !std::isfinite(truncation)) throw std::invalid_argument("truncation must be finite and >= 4");
    const double r = cfg.r();
    WitnessEstimate out;
    out.truncation = truncation;

    EstimateWithError integral;
    switch (f) {
        case Family::A: integral = family_a_integral(cfg, setup, truncation, qcfg, r); break;
        case Family::B: integral = family_b_integral(cfg, setup, truncation, qcfg, r, false); break;
        case Family::BMirrored: integral = family_b_integral(cfg, setup, truncation, qcfg, r, true); break;
        case Family::C: integral = family_c_integral(cfg, setup, truncation, qcfg, r); break;
        case Family::D: integral = family_d_integral(cfg, setup, truncation, qcfg, r); break;
    }
    out.numerator.samples_used = integral.samples_used;
    if (integral.value > 0.0) {
        out.numerator.value = std::pow(integral.value, 1.0 / r);
        out.numerator.std_error = out.numerator.value / r * integral.std_error / integral.value;
    }

    const FunctionPair fg = family_functions(f, cfg, setup, truncation);
    double den = 1.0, den_rel = 0.0;
    auto absorb = [&](const TestFunction& h, double p) {
        if (auto exact = analytic_norm(h, p, cfg.n)) {
            den *= *exact;
            return;
        }
        const EstimateWithError e = power_cube_norm(cfg.n, setup.s, p, qcfg.seed);
        den *= e.value;
        den_rel = std::hypot(den_rel, e.std_error / e.value);
    };
    absorb(fg.f, cfg.p);
    absorb(fg.g, cfg.q);
    out.denominator = {den, den * den_rel, 0};

    out.ratio.value = out.numerator.value / den;
    const double num_rel = out.numerator.value > 0.0 ? out.numerator.std_error / out.numerator.value : 0.0;
    out.ratio.std_error = out.ratio.value * std::hypot(num_rel, den_rel);
    out.ratio.samples_used = out.numerator.samples_used;
    return out;
}

}  // namespace heis
