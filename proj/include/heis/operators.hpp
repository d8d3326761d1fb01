#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "heis/group.hpp"
#include "heis/test_functions.hpp"

namespace heis {

struct QuadratureConfig {
    int k_min = -4;
    int k_max = 20;
    std::int64_t samples_per_shell = 4096;
    std::uint64_t seed = 1;
    double relative_tolerance = 1e-2;
    int threads = 1;  // shells are split across threads; results do not depend on it

    void validate() const;
};

struct EstimateWithError {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t samples_used = 0;
};

struct ShellEstimate {
    int k = 0;
    EstimateWithError estimate;
};

struct OperatorEstimate : EstimateWithError {
    std::vector<ShellEstimate> shells;
    // |contribution| of the first and last shell relative to |total|
    double inner_tail() const;
    double outer_tail() const;
    bool tails_within(double tolerance) const;
};

// Accepted points of shell k (2^{-k-1} <= |y| < 2^{-k}) by rejection from
// delta_{2^{-k}}([-1,1]^{2n} x [-1,1]); all share one density weight.
class ShellSampler {
public:
    ShellSampler(int n, int k, const QuadratureConfig& cfg, std::int64_t stream = 0);

    // Up to kBatch accepted points in SoA layout (stride kBatch); returns count,
    // 0 once the proposal budget is spent.
    std::size_t next_batch(std::vector<double>& pts, std::vector<double>& norms);
    double weight() const { return weight_; }
    std::int64_t proposals() const { return proposals_; }
    int n() const { return n_; }

    static constexpr std::size_t kBatch = 256;

private:
    int n_;
    double lo_, hi_, half_z_, half_t_;
    double weight_;
    std::int64_t budget_;
    std::int64_t proposals_ = 0;
    Rng rng_;
    std::vector<double> scratch_, scratch_norm_;
};

std::vector<std::pair<GroupPoint, double>> shell_sample(int n, int k, const QuadratureConfig& cfg, std::int64_t stream = 0);

// |B(0, radius)| by rejection from its bounding box, samples_per_shell * shell count proposals.
EstimateWithError ball_volume_estimate(int n, const QuadratureConfig& cfg, double radius = 1.0);

// int_{shell k} f(x y^{-1}) g(x y) dy
EstimateWithError eval_shell_piece(const TestFunction& f, const TestFunction& g, const GroupPoint& x, int k,
                                   const QuadratureConfig& cfg, std::int64_t stream = 0);

OperatorEstimate eval_B_lambda(const TestFunction& f, const TestFunction& g, const GroupPoint& x, double lambda,
                               const QuadratureConfig& cfg, std::int64_t stream = 0);

OperatorEstimate eval_I_lambda(const TestFunction& f, const GroupPoint& x, double lambda, const QuadratureConfig& cfg,
                               std::int64_t stream = 0);

OperatorEstimate eval_S(const TestFunction& f, const TestFunction& g, const GroupPoint& x, double alpha, double beta,
                        double gamma, double lambda, const QuadratureConfig& cfg, std::int64_t stream = 0);

}  // namespace heis
