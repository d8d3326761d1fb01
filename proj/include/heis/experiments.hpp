#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heis/exponents.hpp"
#include "heis/norms.hpp"
#include "heis/operators.hpp"
#include "heis/test_functions.hpp"
#include "heis/witness.hpp"

namespace heis {

struct ScalePoint {
    double s = 1.0;
    EstimateWithError ratio;
};

struct BoundednessReport {
    ExponentConfig exponents;
    QuadratureConfig quadrature;
    NormEstimatorConfig norms;
    std::string f_text, g_text;
    double r = 0.0;
    NormEstimate output_norm;  // ||S(f,g)||_r
    NormEstimate f_norm;       // ||f||_p
    NormEstimate g_norm;       // ||g||_q
    EstimateWithError ratio;
    bool degenerate = false;  // ||f|| ||g|| == 0
    std::vector<ScalePoint> scale_sweep;
    bool scale_stable = true;  // pairwise within 3 combined standard errors
};

// x -> S_{alpha,beta,gamma}(f,g)(x), one inner stream per x-sample.
PointFunction operator_output(const TestFunction& f, const TestFunction& g, const ExponentConfig& cfg,
                              const QuadratureConfig& qcfg);

BoundednessReport boundedness_experiment(const TestFunction& f, const TestFunction& g, const ExponentConfig& cfg,
                                         const QuadratureConfig& qcfg, const NormEstimatorConfig& ncfg,
                                         bool scale_sweep = true);

struct DivergenceReport {
    Family family = Family::A;
    ExponentConfig exponents;
    FamilySetup setup;
    QuadratureConfig quadrature;
    std::vector<WitnessEstimate> steps;
    std::vector<double> growth_factors;  // per truncation doubling
    double slope = 0.0;                  // d log ratio / d log K
    double slope_error = 0.0;
    bool diverging = false;
    bool mirrored = false;
};

DivergenceReport divergence_scan(Family family, const ExponentConfig& cfg, const FamilySetup& setup,
                                 const std::vector<double>& truncations, const QuadratureConfig& qcfg);

struct EndpointReport {
    double lambda = 1.0;
    int n = 1;
    double r = 1.0;
    QuadratureConfig quadrature;
    NormEstimatorConfig norms;
    WeakNormEstimate weak;
    double profile_spread = 0.0;  // max / min of the profile over the grid
    std::vector<int> shells;
    std::vector<EstimateWithError> shell_norms;  // 2^{Qk/2} ||B_k||_{1/2}^{1/2}
    double shell_spread = 0.0;
};

// Threshold grid [B(0)/2^15, B(0)/2], B(0) = Q C_Q / lambda.
NormEstimatorConfig endpoint_threshold_grid(NormEstimatorConfig base, double lambda, int n);

EndpointReport weak_type_endpoint_experiment(double lambda, int n, const QuadratureConfig& qcfg,
                                             const NormEstimatorConfig& ncfg, int k_last = 6);

struct TilingReport {
    int n = 1;
    double half_width = 0.0;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
    std::int64_t coverage_failures = 0;     // points not in exactly one plain cube
    std::int64_t consistency_failures = 0;  // cube_contains(locate(x), x) false
    std::int64_t containment_failures = 0;  // enlarged-cube samples outside the superset
    std::int64_t max_overlap = 0;
    std::int64_t min_overlap = 0;
};

TilingReport tiling_audit(double half_width, std::int64_t samples, std::uint64_t seed, int n = 1);

}  // namespace heis
