#include "heis/test_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "heis/lattice.hpp"

namespace heis {

namespace {

TestFunction make(Node node) { return TestFunction(std::make_shared<const Node>(std::move(node))); }

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double lattice_value(const LatticeSumSpec& spec, const GroupPoint& x) {
    if (x.n() != spec.n) throw std::invalid_argument("lattice sum dimension mismatch");
    LatticeIndex a(spec.n);
    const int zd = 2 * spec.n;
    if (spec.shape == LatticeShape::Box) {
        for (int c = 0; c <= zd; ++c) a[c] = static_cast<std::int64_t>(std::floor(0.5 * x.coord(c)));
    } else {
        for (int c = 0; c < zd; ++c) a[c] = static_cast<std::int64_t>(std::nearbyint(x.z(c)));
        a[zd] = static_cast<std::int64_t>(std::nearbyint(twisted_height(a, x)));
    }
    const GroupPoint ap = a.point();
    const double norm = knorm(ap);
    if (!(norm > spec.min_norm) || norm > spec.truncation) return 0.0;
    const double r = spec.radius(norm);
    if (spec.shape == LatticeShape::Box) {
        for (int c = 0; c < zd; ++c)
            if (x.z(c) - 2.0 * ap.z(c) > r) return 0.0;
        if (x.t() - 2.0 * ap.t() > r * r) return 0.0;
    } else {
        if (!(knorm(multiply(inverse(ap), x)) < 2.0 * r)) return 0.0;
    }
    return spec.weight(norm);
}

double evaluate_node(const Node& node, const GroupPoint& x);

double evaluate_fn(const TestFunction& f, const GroupPoint& x) { return evaluate_node(f.node(), x); }

double evaluate_node(const Node& node, const GroupPoint& x) {
    return std::visit(
        overloaded{
            [](const ZeroFn&) { return 0.0; },
            [&](const IndicatorBall& b) {
                return knorm(multiply(inverse(b.center), x)) < b.radius ? 1.0 : 0.0;
            },
            [&](const IndicatorCube& c) {
                if (c.corner.n() != x.n()) throw std::invalid_argument("cube dimension mismatch");
                for (int i = 0; i < x.zdim(); ++i) {
                    const double d = x.z(i) - c.corner.z(i);
                    if (d < 0.0 || d > c.side) return 0.0;
                }
                const double d = x.t() - c.corner.t();
                return (d < 0.0 || d > c.side * c.side) ? 0.0 : 1.0;
            },
            [&](const PowerWeight& w) {
                double base = 1.0;
                if (w.support) {
                    base = evaluate_fn(*w.support, x);
                    if (base == 0.0) return 0.0;
                }
                const double norm = knorm(x);
                if (norm == 0.0) {
                    if (w.s > 0.0) throw std::domain_error("power weight evaluated at its singular point");
                    return w.s == 0.0 ? base : 0.0;
                }
                return base * std::pow(norm, -w.s);
            },
            [&](const LogPowerTail& l) {
                const double norm = knorm(x);
                if (!(norm > l.cutoff) || norm > l.outer) return 0.0;
                return std::pow(norm, -l.power) * std::pow(std::log(norm), -l.tau);
            },
            [&](const LatticeSum& s) { return lattice_value(s.spec, x); },
            [&](const Scale& s) { return s.c * evaluate_fn(s.inner, x); },
            [&](const Dilate& d) { return evaluate_fn(d.inner, dilate(d.s, x)); },
            [&](const Sum& s) {
                double acc = 0.0;
                for (const auto& item : s.items) acc += evaluate_fn(item, x);
                return acc;
            },
        },
        node.v);
}

void check_n(int n) {
    if (n < 1 || n > kMaxN) throw std::invalid_argument("n out of range");
}

}  // namespace

void LatticeSumSpec::validate() const {
    check_n(n);
    if (!(decay >= 3.0)) throw std::invalid_argument("lattice decay exponent N must be >= 3 for disjoint supports");
    if (!(min_norm >= 0.0)) throw std::invalid_argument("lattice min_norm must be nonnegative");
    if (!(truncation > min_norm)) throw std::invalid_argument("lattice truncation must exceed min_norm");
    if (log_power != 0.0 && !(min_norm >= 1.0))
        throw std::invalid_argument("log-weighted lattice sums need min_norm >= 1");
    if (shape == LatticeShape::Ball && !(min_norm >= 2.0))
        throw std::invalid_argument("ball-shaped lattice cells need min_norm >= 2");
    if (!std::isfinite(weight_power) || !std::isfinite(log_power)) throw std::invalid_argument("lattice weights must be finite");
}

double LatticeSumSpec::radius(double norm) const { return std::pow(norm, -decay); }

double LatticeSumSpec::weight(double norm) const {
    double w = std::pow(norm, weight_power);
    if (log_power != 0.0) w *= std::pow(std::log(norm), -log_power);
    return w;
}

double LatticeSumSpec::cell_measure(double norm) const {
    const int Q = 2 * n + 2;
    const double r = radius(norm);
    if (shape == LatticeShape::Box) return std::pow(r, Q);
    return koranyi_ball_volume(n) * std::pow(2.0 * r, Q);
}

TestFunction::TestFunction() : node_(std::make_shared<const Node>(Node{ZeroFn{}})) {}

namespace fn {
TestFunction zero() { return TestFunction(); }
TestFunction ball(const GroupPoint& center, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
    return make(Node{IndicatorBall{center, radius}});
}
TestFunction ball(int n, double radius) { return ball(GroupPoint(n), radius); }
TestFunction cube(const GroupPoint& corner, double side) {
    if (!(side > 0.0)) throw std::invalid_argument("cube side must be positive");
    return make(Node{IndicatorCube{corner, side}});
}
TestFunction cube(int n, double side) { return cube(GroupPoint(n), side); }
TestFunction power(double s, std::optional<TestFunction> support) {
    if (!std::isfinite(s)) throw std::invalid_argument("power exponent must be finite");
    return make(Node{PowerWeight{s, std::move(support)}});
}
TestFunction logtail(double power, double tau, double cutoff, double outer) {
    if (!(cutoff >= 1.0)) throw std::invalid_argument("log tail cutoff must be >= 1");
    if (!(outer > cutoff)) throw std::invalid_argument("log tail outer radius must exceed cutoff");
    return make(Node{LogPowerTail{power, tau, cutoff, outer}});
}
TestFunction lattice(const LatticeSumSpec& spec) {
    spec.validate();
    return make(Node{LatticeSum{spec}});
}
TestFunction scale(double c, TestFunction inner) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("scale factor must be finite and nonnegative");
    return make(Node{Scale{c, std::move(inner)}});
}
TestFunction dilate(double s, TestFunction inner) {
    if (!(s > 0.0)) throw std::invalid_argument("dilation factor must be positive");
    return make(Node{Dilate{s, std::move(inner)}});
}
TestFunction sum(std::vector<TestFunction> items) { return make(Node{Sum{std::move(items)}}); }
}  // namespace fn

double evaluate(const TestFunction& f, const GroupPoint& x) { return evaluate_node(f.node(), x); }

double lattice_norm_pow(const LatticeSumSpec& spec, double p) {
    spec.validate();
    if (!std::isfinite(spec.truncation)) throw std::invalid_argument("series norm needs a finite truncation");
    const LatticeTable table(spec.n, spec.min_norm, spec.truncation);
    double acc = 0.0;
    for (const auto& g : table.groups())
        acc += g.multiplicity * std::pow(spec.weight(g.norm), p) * spec.cell_measure(g.norm);
    return acc;
}

std::optional<double> analytic_norm(const TestFunction& f, double p, int n) {
    if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
    check_n(n);
    const int Q = 2 * n + 2;
    return std::visit(
        overloaded{
            [](const ZeroFn&) -> std::optional<double> { return 0.0; },
            [&](const IndicatorBall& b) -> std::optional<double> {
                return std::pow(koranyi_ball_volume(n) * std::pow(b.radius, Q), 1.0 / p);
            },
            [&](const IndicatorCube& c) -> std::optional<double> { return std::pow(c.side, Q / p); },
            [](const PowerWeight&) -> std::optional<double> { return std::nullopt; },
            [&](const LogPowerTail& l) -> std::optional<double> {
                if (std::fabs(l.power * p - Q) > 1e-12) return std::nullopt;
                // |x|^{-Q} (log|x|)^{-tau p} in polar form: Q C_Q int du / u^{tau p}, u = log r
                const double e = l.tau * p;
                const double lo = std::log(l.cutoff);
                const double hi = std::log(l.outer);
                double radial;
                if (std::fabs(e - 1.0) < 1e-14) {
                    radial = std::log(hi) - std::log(lo);
                } else {
                    const double upper = std::isfinite(hi) ? std::pow(hi, 1.0 - e) : (e > 1.0 ? 0.0 : kInf);
                    radial = (upper - std::pow(lo, 1.0 - e)) / (1.0 - e);
                }
                return std::pow(Q * koranyi_ball_volume(n) * radial, 1.0 / p);
            },
            [&](const LatticeSum& s) -> std::optional<double> {
                return std::pow(lattice_norm_pow(s.spec, p), 1.0 / p);
            },
            [&](const Scale& s) -> std::optional<double> {
                auto inner = analytic_norm(s.inner, p, n);
                if (!inner) return std::nullopt;
                return s.c * *inner;
            },
            [&](const Dilate& d) -> std::optional<double> {
                auto inner = analytic_norm(d.inner, p, n);
                if (!inner) return std::nullopt;
                return std::pow(d.s, -Q / p) * *inner;
            },
            [&](const Sum& s) -> std::optional<double> {
                if (s.items.empty()) return 0.0;
                if (s.items.size() == 1) return analytic_norm(s.items.front(), p, n);
                return std::nullopt;
            },
        },
        f.node().v);
}

LatticeTable::LatticeTable(int n, double min_norm, double max_norm) : n_(n) {
    check_n(n);
    if (!std::isfinite(max_norm) || max_norm < 0.0) throw std::invalid_argument("lattice table needs finite max norm");
    const auto K = static_cast<std::int64_t>(std::floor(max_norm));
    const std::int64_t mmax = K * K;
    // counts[m] = #{a' in Z^{2n} : |a'|^2 = m}, by repeated convolution with the squares
    std::vector<double> counts(mmax + 1, 0.0);
    counts[0] = 1.0;
    for (int c = 0; c < 2 * n; ++c) {
        std::vector<double> next(mmax + 1, 0.0);
        for (std::int64_t m = 0; m <= mmax; ++m) {
            if (counts[m] == 0.0) continue;
            for (std::int64_t k = 0; m + k * k <= mmax; ++k) next[m + k * k] += counts[m] * (k == 0 ? 1.0 : 2.0);
        }
        counts.swap(next);
    }
    const double k4 = static_cast<double>(K) * K * K * K;
    for (std::int64_t m = 0; m <= mmax; ++m) {
        if (counts[m] == 0.0) continue;
        const double m2 = static_cast<double>(m) * m;
        for (std::int64_t t = 0; m2 + static_cast<double>(t) * t <= k4; ++t) {
            const double norm = std::sqrt(std::sqrt(m2 + static_cast<double>(t) * t));
            if (!(norm > min_norm) || norm > max_norm) continue;
            groups_.push_back({m, t, counts[m] * (t == 0 ? 1.0 : 2.0), norm});
        }
    }
    std::sort(groups_.begin(), groups_.end(), [](const LatticeGroup& a, const LatticeGroup& b) {
        if (a.norm != b.norm) return a.norm < b.norm;
        if (a.m != b.m) return a.m < b.m;
        return a.t < b.t;
    });
}

GroupPoint LatticeTable::sample_member(const LatticeGroup& g, Rng& rng) const {
    const auto side = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(g.m))));
    GroupPoint a(n_);
    for (;;) {
        std::int64_t m = 0;
        for (int c = 0; c < 2 * n_; ++c) {
            const auto v = static_cast<std::int64_t>(rng.index(2 * side + 1)) - side;
            a.z(c) = static_cast<double>(v);
            m += v * v;
        }
        if (m == g.m) break;
    }
    const double sign = (g.t != 0 && (rng.bits() & 1)) ? -1.0 : 1.0;
    a.t() = sign * static_cast<double>(g.t);
    return a;
}

FunctionPair family_a_pair(const FamilyParams& P) {
    const int Q = 2 * P.n + 2;
    if (!(P.N >= 3.0)) throw std::invalid_argument("family (a) needs N >= 3");
    if (!(P.M < Q * P.N)) throw std::invalid_argument("family (a) needs M < QN so that f lies in L^p");
    LatticeSumSpec s{P.n, LatticeShape::Box, P.N + 1.0, P.M / P.p, 0.0, 0.0, P.truncation};
    FunctionPair out;
    out.f = fn::lattice(s);
    s.weight_power = P.M / P.q;
    out.g = fn::lattice(s);
    return out;
}

namespace {
TestFunction log_lattice(const FamilyParams& P, LatticeShape shape, double exponent) {
    const int Q = 2 * P.n + 2;
    if (!(P.N >= 3.0)) throw std::invalid_argument("lattice families need N >= 3");
    return fn::lattice({P.n, shape, P.N, Q * (P.N - 1.0) / exponent, 2.0 / exponent, std::numbers::e, P.truncation});
}
}  // namespace

FunctionPair family_b_pair(const FamilyParams& P, double s) {
    const int Q = 2 * P.n + 2;
    if (!(s < Q / P.p)) throw std::invalid_argument("family (b) needs s < Q/p so that f lies in L^p");
    FunctionPair out;
    out.f = fn::power(s, fn::cube(P.n, 1.0));
    out.g = log_lattice(P, LatticeShape::Box, P.q);
    return out;
}

FunctionPair family_b_mirrored_pair(const FamilyParams& P, double s) {
    const int Q = 2 * P.n + 2;
    if (!(s < Q / P.q)) throw std::invalid_argument("mirrored family (b) needs s < Q/q so that g lies in L^q");
    FunctionPair out;
    out.f = log_lattice(P, LatticeShape::Box, P.p);
    out.g = fn::power(s, fn::cube(P.n, 1.0));
    out.mirrored = true;
    return out;
}

FunctionPair family_c_pair(const FamilyParams& P) {
    FunctionPair out;
    out.f = log_lattice(P, LatticeShape::Ball, P.p);
    out.g = log_lattice(P, LatticeShape::Ball, P.q);
    return out;
}

FunctionPair family_d_pair(double p, double q, double tau1, double tau2, int n, double outer) {
    check_n(n);
    if (!(p > 0.0 && q > 0.0)) throw std::invalid_argument("exponents must be positive");
    if (!(tau1 > 1.0 / p)) throw std::invalid_argument("family (d) needs tau1 > 1/p");
    if (!(tau2 > 1.0 / q)) throw std::invalid_argument("family (d) needs tau2 > 1/q");
    const int Q = 2 * n + 2;
    FunctionPair out;
    out.f = fn::logtail(Q / p, tau1, 16.0, outer);
    out.g = fn::logtail(Q / q, tau2, 16.0, outer);
    return out;
}

}  // namespace heis
