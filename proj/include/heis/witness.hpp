#pragma once

#include <cstdint>
#include <string>

#include "heis/exponents.hpp"
#include "heis/group.hpp"
#include "heis/operators.hpp"
#include "heis/rng.hpp"
#include "heis/test_functions.hpp"

namespace heis {

enum class Family { A, B, BMirrored, C, D };

const char* family_name(Family f);
Family family_from_name(const std::string& s);
// The condition each counterexample family is built to break.
Condition family_target(Family f);

struct FamilySetup {
    double N = 4.0;         // lattice decay exponent
    double M = 15.5;        // family (a) growth exponent
    double s = 0.2;         // family (b) power singularity
    double epsilon = 0.5;   // family (d): tau1 = 1/p + eps, tau2 = 1/q + eps
    int inner_samples = 16; // radial samples per witness point
    double min_factor = 1.5;
};

struct DivergenceSetup {
    ExponentConfig exponents;
    FamilySetup family;
};

// Stock parameters for n = 1; each breaks exactly its target condition.
DivergenceSetup default_divergence_setup(Family f);

// Throws std::invalid_argument when cfg does not break exactly the family's
// target condition or the side constraints fail.
void check_family_pairing(Family f, const ExponentConfig& cfg, const FamilySetup& setup);

FunctionPair family_functions(Family f, const ExponentConfig& cfg, const FamilySetup& setup, double truncation);

struct WitnessEstimate {
    double truncation = 0.0;
    EstimateWithError numerator;    // lower bound for ||S(f_K, g_K)||_r
    EstimateWithError denominator;  // ||f_K||_p ||g_K||_q
    EstimateWithError ratio;
};

// Witness-region lower bound of the truncated norm ratio; x-samples (or
// cells) = qcfg.samples_per_shell, streams keyed by qcfg.seed.
WitnessEstimate witness_ratio(Family f, const ExponentConfig& cfg, const FamilySetup& setup, double truncation,
                              const QuadratureConfig& qcfg);

// Uniform point of B(0,1) and its radial projection onto the unit sphere.
GroupPoint sample_unit_ball(int n, Rng& rng);
GroupPoint sample_unit_direction(int n, Rng& rng);

}  // namespace heis
