#include "heis/norms.hpp"

#include <cmath>
#include <future>
#include <stdexcept>

#include "heis/simd.hpp"

namespace heis {

void NormEstimatorConfig::validate() const {
    if (j_min > j_max) throw std::invalid_argument("norm strata need j_min <= j_max");
    if (samples_per_stratum < 2) throw std::invalid_argument("samples_per_stratum must be >= 2");
    if (!(threshold_start > 0.0)) throw std::invalid_argument("threshold_start must be positive");
    if (threshold_count < 1) throw std::invalid_argument("threshold_count must be >= 1");
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
}

std::vector<double> NormEstimatorConfig::thresholds() const {
    std::vector<double> t(threshold_count);
    for (int i = 0; i < threshold_count; ++i) t[i] = std::ldexp(threshold_start, i);
    return t;
}

PointFunction as_point_function(const TestFunction& f) {
    return [f](const GroupPoint& x, std::int64_t) { return evaluate(f, x); };
}

double NormEstimate::low_tail() const {
    if (strata.empty() || integral == 0.0) return 0.0;
    return std::fabs(strata.front().integral.value / integral);
}

double NormEstimate::high_tail() const {
    if (strata.empty() || integral == 0.0) return 0.0;
    return std::fabs(strata.back().integral.value / integral);
}

namespace {

StratumSamples sample_one(const PointFunction& fn, int n, const NormEstimatorConfig& cfg, int j) {
    const int dim = 2 * n + 1;
    const std::size_t B = ShellSampler::kBatch;
    const double lo = std::ldexp(1.0, j);
    const double hi = 2.0 * lo;
    StratumSamples out;
    out.j = j;
    out.proposals = cfg.samples_per_stratum;
    out.weight = std::ldexp(1.0, dim) * std::pow(hi, 2 * n + 2) / static_cast<double>(out.proposals);
    Rng rng(cfg.seed, {0x4e4f524d, j});
    std::vector<double> pts(dim * B), norms(B);
    double coords[2 * kMaxN + 1];
    const std::int64_t base = static_cast<std::int64_t>(j - cfg.j_min) * cfg.samples_per_stratum;
    for (std::int64_t done = 0; done < out.proposals;) {
        const auto chunk = static_cast<std::size_t>(std::min<std::int64_t>(B, out.proposals - done));
        for (std::size_t i = 0; i < chunk; ++i) {
            for (int c = 0; c < 2 * n; ++c) pts[c * B + i] = hi * (2.0 * rng.uniform() - 1.0);
            pts[2 * n * B + i] = hi * hi * (2.0 * rng.uniform() - 1.0);
        }
        simd::active().knorm(n, pts.data(), B, chunk, norms.data());
        for (std::size_t i = 0; i < chunk; ++i) {
            if (norms[i] < lo || norms[i] >= hi) continue;
            for (int c = 0; c < dim; ++c) coords[c] = pts[c * B + i];
            out.values.push_back(fn(GroupPoint::from_coords(n, coords), base + done + static_cast<std::int64_t>(i)));
        }
        done += static_cast<std::int64_t>(chunk);
    }
    return out;
}

}  // namespace

std::vector<StratumSamples> sample_strata(const PointFunction& fn, int n, const NormEstimatorConfig& cfg) {
    cfg.validate();
    GroupParams check(n);
    const int count = cfg.j_max - cfg.j_min + 1;
    std::vector<StratumSamples> out(count);
    auto run = [&](int idx) { out[idx] = sample_one(fn, n, cfg, cfg.j_min + idx); };
    if (cfg.threads <= 1) {
        for (int i = 0; i < count; ++i) run(i);
    } else {
        std::vector<std::future<void>> jobs;
        for (int w = 0; w < cfg.threads; ++w)
            jobs.push_back(std::async(std::launch::async, [&, w] {
                for (int i = w; i < count; i += cfg.threads) run(i);
            }));
        for (auto& j : jobs) j.get();
    }
    return out;
}

NormEstimate lp_norm(const PointFunction& fn, double p, int n, const NormEstimatorConfig& cfg) {
    if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
    const auto strata = sample_strata(fn, n, cfg);
    NormEstimate out;
    double var = 0.0;
    for (const auto& s : strata) {
        double s1 = 0.0, s2 = 0.0;
        for (double v : s.values) {
            const double w = std::pow(std::fabs(v), p);
            s1 += w;
            s2 += w * w;
        }
        const auto N = static_cast<double>(s.proposals);
        const double box = s.weight * N;
        const double mean = s1 / N;
        StratumContribution c;
        c.j = s.j;
        c.integral.value = box * mean;
        c.integral.std_error = box * std::sqrt(std::max(0.0, s2 / N - mean * mean) / (N - 1.0));
        c.integral.samples_used = s.proposals;
        out.integral += c.integral.value;
        var += c.integral.std_error * c.integral.std_error;
        out.samples_used += s.proposals;
        out.strata.push_back(c);
    }
    out.integral_error = std::sqrt(var);
    if (out.integral > 0.0) {
        out.value = std::pow(out.integral, 1.0 / p);
        out.std_error = out.value / p * out.integral_error / out.integral;
    }
    return out;
}

NormEstimate lp_norm(const TestFunction& f, double p, int n, const NormEstimatorConfig& cfg) {
    return lp_norm(as_point_function(f), p, n, cfg);
}

WeakNormEstimate weak_lr_norm(const PointFunction& fn, double r, int n, const NormEstimatorConfig& cfg) {
    if (!(r > 0.0)) throw std::invalid_argument("r must be positive");
    const auto strata = sample_strata(fn, n, cfg);
    WeakNormEstimate out;
    out.thresholds = cfg.thresholds();
    for (const auto& s : strata) out.samples_used += s.proposals;
    for (double t : out.thresholds) {
        double m = 0.0, var = 0.0;
        for (const auto& s : strata) {
            std::int64_t hits = 0;
            for (double v : s.values)
                if (std::fabs(v) > t) ++hits;
            const auto N = static_cast<double>(s.proposals);
            const double frac = static_cast<double>(hits) / N;
            const double box = s.weight * N;
            m += box * frac;
            var += box * box * frac * (1.0 - frac) / N;
        }
        EstimateWithError me{m, std::sqrt(var), out.samples_used};
        EstimateWithError pe;
        pe.samples_used = out.samples_used;
        if (m > 0.0) {
            pe.value = t * std::pow(m, 1.0 / r);
            pe.std_error = pe.value / r * me.std_error / m;
        }
        out.measures.push_back(me);
        out.profile.push_back(pe);
    }
    for (std::size_t i = 0; i < out.profile.size(); ++i)
        if (out.profile[i].value > out.profile[out.argmax].value) out.argmax = i;
    out.value = out.profile[out.argmax].value;
    out.std_error = out.profile[out.argmax].std_error;
    return out;
}

WeakNormEstimate weak_lr_norm(const TestFunction& f, double r, int n, const NormEstimatorConfig& cfg) {
    return weak_lr_norm(as_point_function(f), r, n, cfg);
}

}  // namespace heis
