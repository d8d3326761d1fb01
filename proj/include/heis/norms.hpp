#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "heis/group.hpp"
#include "heis/operators.hpp"
#include "heis/test_functions.hpp"

namespace heis {

struct NormEstimatorConfig {
    int j_min = -12;
    int j_max = 12;
    std::int64_t samples_per_stratum = 1024;
    std::uint64_t seed = 1;
    double threshold_start = 1e-2;
    int threshold_count = 15;  // grid t_i = threshold_start * 2^i
    int threads = 1;

    void validate() const;
    std::vector<double> thresholds() const;
};

// Pointwise function of x; sample_id is unique per x-sample and lets operator
// outputs draw independent inner streams.
using PointFunction = std::function<double(const GroupPoint&, std::int64_t sample_id)>;

PointFunction as_point_function(const TestFunction& f);

struct StratumContribution {
    int j = 0;
    EstimateWithError integral;  // int over the stratum of |F|^p
};

struct NormEstimate : EstimateWithError {
    double integral = 0.0;  // int |F|^p
    double integral_error = 0.0;
    std::vector<StratumContribution> strata;
    // |first| and |last| stratum integrals relative to the total
    double low_tail() const;
    double high_tail() const;
};

NormEstimate lp_norm(const PointFunction& fn, double p, int n, const NormEstimatorConfig& cfg);
NormEstimate lp_norm(const TestFunction& f, double p, int n, const NormEstimatorConfig& cfg);

struct WeakNormEstimate : EstimateWithError {
    std::vector<double> thresholds;
    std::vector<EstimateWithError> measures;  // |{|F| > t}|
    std::vector<EstimateWithError> profile;   // t |{|F| > t}|^{1/r}
    std::size_t argmax = 0;
};

WeakNormEstimate weak_lr_norm(const PointFunction& fn, double r, int n, const NormEstimatorConfig& cfg);
WeakNormEstimate weak_lr_norm(const TestFunction& f, double r, int n, const NormEstimatorConfig& cfg);

// Accepted samples of stratum 2^j <= |x| < 2^{j+1} with their values.
struct StratumSamples {
    int j = 0;
    double weight = 0.0;  // box volume / proposals
    std::int64_t proposals = 0;
    std::vector<double> values;
};

std::vector<StratumSamples> sample_strata(const PointFunction& fn, int n, const NormEstimatorConfig& cfg);

}  // namespace heis
