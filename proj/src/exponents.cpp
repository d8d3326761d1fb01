#include "heis/exponents.hpp"

#include <cmath>
#include <stdexcept>

namespace heis {
namespace {

bool strictly_less(double lhs, double rhs, double slack) { return lhs < rhs - slack; }
bool at_most(double lhs, double rhs, double slack) { return lhs <= rhs + slack; }

void check_exponents(double p, double q, double lambda, int Q) {
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must lie in (1, inf)");
    if (!(q > 1.0) || !std::isfinite(q)) throw std::invalid_argument("q must lie in (1, inf)");
    if (!(lambda > 0.0 && lambda < Q)) throw std::invalid_argument("lambda must lie in (0, Q)");
}

}  // namespace

double ExponentConfig::inv_r() const {
    return 1.0 / p + 1.0 / q - (lambda - alpha - beta - gamma) / Q();
}

double ExponentConfig::r() const {
    const double v = inv_r();
    if (!(v > 0.0)) throw std::domain_error("homogeneity relation gives 1/r <= 0");
    return 1.0 / v;
}

void ExponentConfig::validate() const {
    if (n < 1) throw std::invalid_argument("n must be positive");
    check_exponents(p, q, lambda, Q());
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(gamma))
        throw std::invalid_argument("weight exponents must be finite");
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Bounded: return "Bounded";
        case Verdict::Unbounded: return "Unbounded";
        case Verdict::Inadmissible: return "Inadmissible";
    }
    return "?";
}

const char* condition_name(Condition c) {
    switch (c) {
        case Condition::I: return "I";
        case Condition::II: return "II";
        case Condition::III: return "III";
        case Condition::IV: return "IV";
        case Condition::HomogeneityPositivity: return "homogeneity-positivity";
        case Condition::RVsPQ: return "r-vs-pq";
        case Condition::AlphaBound: return "alpha-bound";
        case Condition::BetaBound: return "beta-bound";
        case Condition::GammaBound: return "gamma-bound";
    }
    return "?";
}

Condition condition_from_name(const std::string& s) {
    for (Condition c : {Condition::I, Condition::II, Condition::III, Condition::IV, Condition::HomogeneityPositivity,
                        Condition::RVsPQ, Condition::AlphaBound, Condition::BetaBound, Condition::GammaBound})
        if (s == condition_name(c)) return c;
    throw std::invalid_argument("unknown condition name: " + s);
}

bool Classification::has(Condition c) const {
    for (auto w : witnesses)
        if (w == c) return true;
    return false;
}

std::string Classification::witness_list() const {
    std::string out;
    for (std::size_t i = 0; i < witnesses.size(); ++i) {
        if (i) out += ';';
        out += condition_name(witnesses[i]);
    }
    return out;
}

std::optional<double> derived_r(double p, double q, double lambda, double alpha, double beta, double gamma, int Q) {
    check_exponents(p, q, lambda, Q);
    const double inv = 1.0 / p + 1.0 / q - (lambda - alpha - beta - gamma) / Q;
    if (!(inv > 0.0)) return std::nullopt;
    return 1.0 / inv;
}

Admissibility admissible(const ExponentConfig& cfg, double slack) {
    cfg.validate();
    const double Q = cfg.Q();
    const double inv = cfg.inv_r();
    Admissibility out;
    auto fail = [&](Condition c) {
        out.ok = false;
        out.witnesses.push_back(c);
    };
    if (!strictly_less(cfg.alpha, Q * (1.0 - 1.0 / cfg.p), slack)) fail(Condition::AlphaBound);
    if (!strictly_less(cfg.beta, Q * (1.0 - 1.0 / cfg.q), slack)) fail(Condition::BetaBound);
    if (!strictly_less(0.0, inv, slack)) {
        fail(Condition::HomogeneityPositivity);
    } else if (!strictly_less(cfg.gamma, Q * inv, slack)) {
        fail(Condition::GammaBound);
    }
    // 1/r <= 1/p + 1/q  <=>  alpha + beta + gamma <= lambda
    if (!at_most(cfg.alpha + cfg.beta + cfg.gamma, cfg.lambda, slack)) fail(Condition::RVsPQ);
    return out;
}

Classification characterize(const ExponentConfig& cfg, double slack) {
    Classification out;
    const Admissibility adm = admissible(cfg, slack);
    if (!adm.ok) {
        out.verdict = Verdict::Inadmissible;
        out.witnesses = adm.witnesses;
        return out;
    }
    const double floor_ = -cfg.Q() + cfg.lambda;
    if (!at_most(floor_, cfg.beta + cfg.gamma, slack)) out.witnesses.push_back(Condition::I);
    if (!at_most(floor_, cfg.gamma + cfg.alpha, slack)) out.witnesses.push_back(Condition::II);
    if (!at_most(floor_, cfg.alpha + cfg.beta, slack)) out.witnesses.push_back(Condition::III);
    if (!at_most(0.0, cfg.alpha + cfg.beta + cfg.gamma, slack)) out.witnesses.push_back(Condition::IV);
    out.verdict = out.witnesses.empty() ? Verdict::Bounded : Verdict::Unbounded;
    if (std::fabs(cfg.alpha + cfg.beta + cfg.gamma - cfg.lambda) <= slack)
        out.annotations.emplace_back("boundary: 1/r = 1/p + 1/q");
    return out;
}

Classification stein_weiss_characterize(double alpha, double beta, double lambda, double p, double q, int Q,
                                        double slack) {
    check_exponents(p, q, lambda, Q);
    const double inv = 1.0 / p + 1.0 / q - lambda / Q;
    if (!(inv > 0.0)) throw std::invalid_argument("Stein-Weiss form needs 1/p + 1/q - lambda/Q > 0");
    Classification out;
    if (!strictly_less(alpha, Q * (1.0 - 1.0 / p), slack)) out.witnesses.push_back(Condition::AlphaBound);
    if (!strictly_less(beta, Q * (1.0 - 1.0 / q), slack)) out.witnesses.push_back(Condition::BetaBound);
    if (!strictly_less(-Q * inv, alpha + beta, slack)) out.witnesses.push_back(Condition::GammaBound);
    if (!out.witnesses.empty()) {
        out.verdict = Verdict::Inadmissible;
        return out;
    }
    if (!at_most(alpha, Q - lambda, slack)) out.witnesses.push_back(Condition::I);
    if (!at_most(beta, Q - lambda, slack)) out.witnesses.push_back(Condition::II);
    if (!at_most(-Q + lambda, alpha + beta, slack)) out.witnesses.push_back(Condition::III);
    out.verdict = out.witnesses.empty() ? Verdict::Bounded : Verdict::Unbounded;
    return out;
}

}  // namespace heis
