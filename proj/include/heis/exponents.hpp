#pragma once

#include <optional>
#include <string>
#include <vector>

namespace heis {

inline constexpr double kDefaultSlack = 1e-12;

struct ExponentConfig {
    int n = 1;
    double lambda = 1.0;
    double p = 2.0;
    double q = 2.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;

    int Q() const { return 2 * n + 2; }
    // 1/r from the homogeneity relation; may be non-positive
    double inv_r() const;
    // throws std::domain_error when 1/r <= 0
    double r() const;
    // n >= 1, p, q in (1, inf), lambda in (0, Q)
    void validate() const;
};

enum class Verdict { Bounded, Unbounded, Inadmissible };

enum class Condition { I, II, III, IV, HomogeneityPositivity, RVsPQ, AlphaBound, BetaBound, GammaBound };

const char* verdict_name(Verdict v);
const char* condition_name(Condition c);
Condition condition_from_name(const std::string& s);

struct Classification {
    Verdict verdict = Verdict::Bounded;
    std::vector<Condition> witnesses;
    std::vector<std::string> annotations;

    bool has(Condition c) const;
    std::string witness_list() const;  // ';'-joined names
};

// r from 1/r = 1/p + 1/q - (lambda - alpha - beta - gamma)/Q; nullopt when 1/r <= 0.
std::optional<double> derived_r(double p, double q, double lambda, double alpha, double beta, double gamma, int Q);

struct Admissibility {
    bool ok = true;
    std::vector<Condition> witnesses;
};

Admissibility admissible(const ExponentConfig& cfg, double slack = kDefaultSlack);
Classification characterize(const ExponentConfig& cfg, double slack = kDefaultSlack);
Classification stein_weiss_characterize(double alpha, double beta, double lambda, double p, double q, int Q,
                                        double slack = kDefaultSlack);

}  // namespace heis
