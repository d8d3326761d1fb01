#include "heis/operators.hpp"

#include <cmath>
#include <future>
#include <stdexcept>

#include "heis/simd.hpp"

namespace heis {

void QuadratureConfig::validate() const {
    if (k_min > k_max) throw std::invalid_argument("quadrature needs k_min <= k_max");
    if (samples_per_shell < 1000) throw std::invalid_argument("quadrature needs samples_per_shell >= 1000");
    if (!(relative_tolerance > 0.0)) throw std::invalid_argument("relative_tolerance must be positive");
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
}

double OperatorEstimate::outer_tail() const {
    if (shells.empty() || value == 0.0) return 0.0;
    return std::fabs(shells.front().estimate.value / value);
}

double OperatorEstimate::inner_tail() const {
    if (shells.empty() || value == 0.0) return 0.0;
    return std::fabs(shells.back().estimate.value / value);
}

bool OperatorEstimate::tails_within(double tolerance) const {
    return outer_tail() <= tolerance && inner_tail() <= tolerance;
}

ShellSampler::ShellSampler(int n, int k, const QuadratureConfig& cfg, std::int64_t stream)
    : n_(n), rng_(cfg.seed, {stream, k}) {
    GroupParams check(n);
    (void)check;
    cfg.validate();
    hi_ = std::ldexp(1.0, -k);
    lo_ = 0.5 * hi_;
    half_z_ = hi_;
    half_t_ = hi_ * hi_;
    const double box = std::ldexp(1.0, 2 * n + 1) * std::pow(hi_, 2 * n + 2);
    budget_ = cfg.samples_per_shell;
    weight_ = box / static_cast<double>(budget_);
    scratch_.resize((2 * n + 1) * kBatch);
    scratch_norm_.resize(kBatch);
}

std::size_t ShellSampler::next_batch(std::vector<double>& pts, std::vector<double>& norms) {
    const int dim = 2 * n_ + 1;
    pts.resize(dim * kBatch);
    norms.resize(kBatch);
    std::size_t accepted = 0;
    while (accepted == 0 && proposals_ < budget_) {
        const auto chunk = static_cast<std::size_t>(std::min<std::int64_t>(kBatch, budget_ - proposals_));
        for (std::size_t i = 0; i < chunk; ++i) {
            for (int c = 0; c < 2 * n_; ++c) scratch_[c * kBatch + i] = half_z_ * (2.0 * rng_.uniform() - 1.0);
            scratch_[2 * n_ * kBatch + i] = half_t_ * (2.0 * rng_.uniform() - 1.0);
        }
        simd::active().knorm(n_, scratch_.data(), kBatch, chunk, scratch_norm_.data());
        for (std::size_t i = 0; i < chunk; ++i) {
            const double r = scratch_norm_[i];
            if (r < lo_ || r >= hi_) continue;
            for (int c = 0; c < dim; ++c) pts[c * kBatch + accepted] = scratch_[c * kBatch + i];
            norms[accepted] = r;
            ++accepted;
        }
        proposals_ += static_cast<std::int64_t>(chunk);
    }
    return accepted;
}

std::vector<std::pair<GroupPoint, double>> shell_sample(int n, int k, const QuadratureConfig& cfg, std::int64_t stream) {
    ShellSampler s(n, k, cfg, stream);
    std::vector<double> pts, norms;
    std::vector<std::pair<GroupPoint, double>> out;
    double coords[2 * kMaxN + 1];
    while (std::size_t got = s.next_batch(pts, norms)) {
        for (std::size_t i = 0; i < got; ++i) {
            for (int c = 0; c <= 2 * n; ++c) coords[c] = pts[c * ShellSampler::kBatch + i];
            out.emplace_back(GroupPoint::from_coords(n, coords), s.weight());
        }
    }
    return out;
}

EstimateWithError ball_volume_estimate(int n, const QuadratureConfig& cfg, double radius) {
    cfg.validate();
    GroupParams params(n);
    if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
    const std::int64_t total = cfg.samples_per_shell * (cfg.k_max - cfg.k_min + 1);
    Rng rng(cfg.seed, {-1, 0x6261});
    const std::size_t B = ShellSampler::kBatch;
    const int dim = 2 * n + 1;
    std::vector<double> pts(dim * B), norms(B);
    std::int64_t hits = 0;
    for (std::int64_t done = 0; done < total;) {
        const auto chunk = static_cast<std::size_t>(std::min<std::int64_t>(B, total - done));
        for (std::size_t i = 0; i < chunk; ++i) {
            for (int c = 0; c < 2 * n; ++c) pts[c * B + i] = radius * (2.0 * rng.uniform() - 1.0);
            pts[2 * n * B + i] = radius * radius * (2.0 * rng.uniform() - 1.0);
        }
        simd::active().knorm(n, pts.data(), B, chunk, norms.data());
        for (std::size_t i = 0; i < chunk; ++i)
            if (norms[i] < radius) ++hits;
        done += static_cast<std::int64_t>(chunk);
    }
    const double box = std::ldexp(1.0, dim) * std::pow(radius, params.Q());
    const double frac = static_cast<double>(hits) / static_cast<double>(total);
    EstimateWithError e;
    e.value = box * frac;
    e.std_error = box * std::sqrt(frac * (1.0 - frac) / static_cast<double>(total));
    e.samples_used = total;
    return e;
}

namespace {

struct Integrand {
    const TestFunction* f;
    const TestFunction* g;  // null means g == 1
    double alpha;
    double beta;
    double kernel_power;
};

EstimateWithError integrate_shell(const Integrand& in, const GroupPoint& x, int k, const QuadratureConfig& cfg,
                                  std::int64_t stream) {
    const int n = x.n();
    const int dim = 2 * n + 1;
    const std::size_t B = ShellSampler::kBatch;
    ShellSampler sampler(n, k, cfg, stream);
    const auto& kern = simd::active();
    const std::vector<double> xc = x.coords();
    std::vector<double> pts, norms, left(dim * B), right(dim * B), left_norm(B), right_norm(B);
    double coords[2 * kMaxN + 1];
    auto gather = [&](const std::vector<double>& soa, std::size_t i) {
        for (int c = 0; c < dim; ++c) coords[c] = soa[c * B + i];
        return GroupPoint::from_coords(n, coords);
    };

    double s1 = 0.0, s2 = 0.0;
    while (std::size_t got = sampler.next_batch(pts, norms)) {
        kern.left_mul(n, xc.data(), pts.data(), B, got, -1.0, left.data(), B);
        if (in.g) kern.left_mul(n, xc.data(), pts.data(), B, got, 1.0, right.data(), B);
        if (in.alpha != 0.0) kern.knorm(n, left.data(), B, got, left_norm.data());
        if (in.g && in.beta != 0.0) kern.knorm(n, right.data(), B, got, right_norm.data());
        for (std::size_t i = 0; i < got; ++i) {
            double v = evaluate(*in.f, gather(left, i));
            if (v == 0.0) continue;
            if (in.g) {
                const double gv = evaluate(*in.g, gather(right, i));
                if (gv == 0.0) continue;
                v *= gv;
                if (in.beta != 0.0) v *= std::pow(right_norm[i], -in.beta);
            }
            if (in.alpha != 0.0) v *= std::pow(left_norm[i], -in.alpha);
            if (in.kernel_power != 0.0) v *= std::pow(norms[i], in.kernel_power);
            s1 += v;
            s2 += v * v;
        }
    }
    const auto N = static_cast<double>(sampler.proposals());
    const double box = sampler.weight() * N;
    const double mean = s1 / N;
    const double var = std::max(0.0, s2 / N - mean * mean);
    EstimateWithError e;
    e.value = box * mean;
    e.std_error = box * std::sqrt(var / (N - 1.0));
    e.samples_used = sampler.proposals();
    return e;
}

OperatorEstimate integrate_shells(const Integrand& in, const GroupPoint& x, const QuadratureConfig& cfg,
                                  std::int64_t stream) {
    cfg.validate();
    const int count = cfg.k_max - cfg.k_min + 1;
    OperatorEstimate out;
    out.shells.resize(count);
    auto run = [&](int idx) {
        const int k = cfg.k_min + idx;
        out.shells[idx] = {k, integrate_shell(in, x, k, cfg, stream)};
    };
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
    double var = 0.0;
    for (const auto& s : out.shells) {
        out.value += s.estimate.value;
        var += s.estimate.std_error * s.estimate.std_error;
        out.samples_used += s.estimate.samples_used;
    }
    out.std_error = std::sqrt(var);
    return out;
}

void check_lambda(double lambda, int n) {
    const int Q = 2 * n + 2;
    if (!(lambda > 0.0 && lambda < Q)) throw std::invalid_argument("lambda must lie in (0, Q)");
}

}  // namespace

EstimateWithError eval_shell_piece(const TestFunction& f, const TestFunction& g, const GroupPoint& x, int k,
                                   const QuadratureConfig& cfg, std::int64_t stream) {
    cfg.validate();
    return integrate_shell({&f, &g, 0.0, 0.0, 0.0}, x, k, cfg, stream);
}

OperatorEstimate eval_B_lambda(const TestFunction& f, const TestFunction& g, const GroupPoint& x, double lambda,
                               const QuadratureConfig& cfg, std::int64_t stream) {
    check_lambda(lambda, x.n());
    return integrate_shells({&f, &g, 0.0, 0.0, lambda - (2 * x.n() + 2)}, x, cfg, stream);
}

OperatorEstimate eval_I_lambda(const TestFunction& f, const GroupPoint& x, double lambda, const QuadratureConfig& cfg,
                               std::int64_t stream) {
    check_lambda(lambda, x.n());
    return integrate_shells({&f, nullptr, 0.0, 0.0, lambda - (2 * x.n() + 2)}, x, cfg, stream);
}

OperatorEstimate eval_S(const TestFunction& f, const TestFunction& g, const GroupPoint& x, double alpha, double beta,
                        double gamma, double lambda, const QuadratureConfig& cfg, std::int64_t stream) {
    check_lambda(lambda, x.n());
    const double xn = knorm(x);
    if (xn == 0.0) throw std::domain_error("S is singular at x = 0");
    OperatorEstimate out = integrate_shells({&f, &g, alpha, beta, lambda - (2 * x.n() + 2)}, x, cfg, stream);
    if (gamma != 0.0) {
        const double w = std::pow(xn, -gamma);
        out.value *= w;
        out.std_error *= w;
        for (auto& s : out.shells) {
            s.estimate.value *= w;
            s.estimate.std_error *= w;
        }
    }
    return out;
}

}  // namespace heis
