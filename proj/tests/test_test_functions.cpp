#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "heis/group.hpp"
#include "heis/rng.hpp"
#include "heis/test_functions.hpp"
#include "heis/witness.hpp"

using namespace heis;

namespace {

struct Cell {
    GroupPoint a;
    double norm;
};

// every lattice point of H^1 with lo < |a| <= hi, by brute force
std::vector<Cell> enumerate_cells(double lo, double hi) {
    std::vector<Cell> out;
    const auto zr = static_cast<int>(std::ceil(hi)), tr = static_cast<int>(std::ceil(hi * hi));
    for (int x = -zr; x <= zr; ++x)
        for (int y = -zr; y <= zr; ++y)
            for (int t = -tr; t <= tr; ++t) {
                const GroupPoint a({double(x), double(y)}, double(t));
                const double nrm = std::pow(std::pow(x * x + y * y, 2.0) + double(t) * t, 0.25);
                if (nrm > lo && nrm <= hi) out.push_back({a, nrm});
            }
    return out;
}

double weight_of(double norm, double wp, double lp) { return std::pow(norm, wp) * std::pow(std::log(norm), -lp); }

GroupPoint point_in_box_cell(const GroupPoint& a, double r, Rng& rng) {
    return GroupPoint({2 * a.z(0) + r * rng.uniform(), 2 * a.z(1) + r * rng.uniform()}, 2 * a.t() + r * r * rng.uniform());
}

}  // namespace

TEST_CASE("pointwise examples") {
    CHECK(evaluate(fn::ball(1, 1.0), GroupPoint({3.0, 4.0}, 0.0)) == 0.0);
    CHECK(evaluate(fn::ball(1, 1.0), GroupPoint({0.5, 0.0}, 0.1)) == 1.0);
    CHECK(evaluate(fn::power(2.0), GroupPoint({3.0, 0.0}, 0.0)) == doctest::Approx(1.0 / 9.0));
    CHECK_THROWS_AS(evaluate(fn::power(2.0), GroupPoint(1)), std::domain_error);
    CHECK(evaluate(fn::power(0.0), GroupPoint(1)) == 1.0);
    CHECK(evaluate(fn::zero(), GroupPoint({1.0, 1.0}, 1.0)) == 0.0);
    // Q(0,2) = [0,2]^2 x [0,4]
    CHECK(evaluate(fn::cube(1, 2.0), GroupPoint({1.9, 0.1}, 3.9)) == 1.0);
    CHECK(evaluate(fn::cube(1, 2.0), GroupPoint({1.9, 0.1}, 4.1)) == 0.0);
    CHECK(evaluate(fn::scale(3.0, fn::ball(1, 1.0)), GroupPoint(1)) == 3.0);
    CHECK(evaluate(fn::sum({fn::ball(1, 1.0), fn::ball(1, 2.0)}), GroupPoint({1.5, 0.0}, 0.0)) == 1.0);
    // dilate(s, f)(x) = f(delta_s x)
    CHECK(evaluate(fn::dilate(4.0, fn::ball(1, 1.0)), GroupPoint({0.2, 0.0}, 0.0)) == 1.0);
    CHECK(evaluate(fn::dilate(4.0, fn::ball(1, 1.0)), GroupPoint({0.3, 0.0}, 0.0)) == 0.0);
}

TEST_CASE("family (a) worked value and origin") {
    FamilyParams P;
    P.N = 3;
    P.M = 1;
    P.p = P.q = 2;
    const auto pair = family_a_pair(P);
    CHECK(evaluate(pair.f, GroupPoint({2.5, 0.5}, 0.5)) == doctest::Approx(1.0));
    CHECK(evaluate(pair.f, GroupPoint(1)) == 0.0);
    // p == q gives f == g
    Rng rng(1);
    for (int i = 0; i < 500; ++i) {
        const GroupPoint x({rng.uniform(-9, 9), rng.uniform(-9, 9)}, rng.uniform(-40, 40));
        CHECK(evaluate(pair.f, x) == evaluate(pair.g, x));
    }
    P.M = 12.5;  // M >= QN
    CHECK_THROWS_AS(family_a_pair(P), std::invalid_argument);
    P.M = 1;
    P.N = 2.5;
    CHECK_THROWS_AS(family_a_pair(P), std::invalid_argument);
}

TEST_CASE("family (b) examples") {
    FamilyParams P;
    P.p = 2;
    P.q = 2;
    const auto pair = family_b_pair(P, 0.5);
    CHECK(evaluate(pair.f, GroupPoint({0.5, 0.0}, 0.0)) == doctest::Approx(std::sqrt(2.0)));
    Rng rng(4);
    for (int i = 0; i < 2000; ++i) {
        GroupPoint x({rng.uniform(-3, 3), rng.uniform(-3, 3)}, rng.uniform(-9, 9));
        if (knorm(x) < std::numbers::e) CHECK(evaluate(pair.g, x) == 0.0);
    }
    CHECK_THROWS_AS(family_b_pair(P, 2.0), std::invalid_argument);  // s >= Q/p
    const auto mirrored = family_b_mirrored_pair(P, 0.5);
    CHECK(mirrored.mirrored);
    CHECK(evaluate(mirrored.g, GroupPoint({0.5, 0.0}, 0.0)) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("family (c) supports contain both products") {
    FamilyParams P;
    const auto pair = family_c_pair(P);
    CHECK(evaluate(pair.f, GroupPoint(1)) == 0.0);
    Rng rng(6);
    const GroupPoint a({3.0, 1.0}, -3.0);  // |a| > e, inside the sum
    const double r = std::pow(knorm(a), -P.N);
    for (int i = 0; i < 500; ++i) {
        const GroupPoint x = multiply(a, dilate(r, sample_unit_ball(1, rng)));
        const GroupPoint y = dilate(r, sample_unit_ball(1, rng));
        CHECK(evaluate(pair.f, multiply(x, y)) > 0.0);
        CHECK(evaluate(pair.f, multiply(x, inverse(y))) > 0.0);
    }
}

TEST_CASE("family (d) examples") {
    const auto pair = family_d_pair(2.0, 2.0, 1.0, 1.0);
    CHECK(evaluate(pair.f, GroupPoint({8.0, 0.0}, 0.0)) == 0.0);
    const double e4 = std::exp(4.0);
    CHECK(evaluate(pair.f, GroupPoint({e4, 0.0}, 0.0)) == doctest::Approx(std::exp(-8.0) / 4.0).epsilon(1e-12));
    CHECK_THROWS_AS(family_d_pair(2.0, 2.0, 0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(family_d_pair(2.0, 2.0, 1.0, 0.4), std::invalid_argument);
    // closed form of ||f||_p when p tau > 1: int_16^inf Q C_Q r^{-1} (log r)^{-p tau} dr
    const double Q = 4, CQ = koranyi_ball_volume(1);
    const double expect = std::pow(Q * CQ * std::pow(std::log(16.0), 1.0 - 2.0) / (2.0 - 1.0), 0.5);
    const auto a = analytic_norm(pair.f, 2.0, 1);
    REQUIRE(a.has_value());
    CHECK(*a == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("analytic norms of simple descriptors") {
    const double CQ = koranyi_ball_volume(1);
    CHECK(*analytic_norm(fn::ball(1, 1.0), 2.0, 1) == doctest::Approx(std::sqrt(CQ)));
    CHECK(*analytic_norm(fn::ball(1, 2.0), 1.0, 1) == doctest::Approx(16.0 * CQ));
    CHECK(*analytic_norm(fn::cube(1, 2.0), 1.0, 1) == doctest::Approx(16.0));
    CHECK(*analytic_norm(fn::zero(), 3.0, 1) == 0.0);
    CHECK(*analytic_norm(fn::scale(2.0, fn::ball(1, 1.0)), 2.0, 1) == doctest::Approx(2.0 * std::sqrt(CQ)));
    // ||f(delta_s .)||_p = s^{-Q/p} ||f||_p
    CHECK(*analytic_norm(fn::dilate(2.0, fn::ball(1, 1.0)), 2.0, 1) == doctest::Approx(std::sqrt(CQ) / 4.0));
}

TEST_CASE("lattice series against brute-force enumeration") {
    const auto cells = enumerate_cells(std::numbers::e, 6.0);
    const double CQ = koranyi_ball_volume(1);
    for (auto shape : {LatticeShape::Box, LatticeShape::Ball}) {
        const LatticeSumSpec spec{1, shape, 4.0, 3.0, 1.0, std::numbers::e, 6.0};
        for (double p : {1.0, 2.0, 1.7}) {
            double expect = 0.0;
            for (const auto& c : cells) {
                const double r = std::pow(c.norm, -4.0);
                const double meas = shape == LatticeShape::Box ? std::pow(r, 4) : CQ * std::pow(2 * r, 4);
                expect += std::pow(weight_of(c.norm, 3.0, 1.0), p) * meas;
            }
            CHECK(lattice_norm_pow(spec, p) == doctest::Approx(expect).epsilon(1e-12));
        }
    }
    const LatticeTable table(1, std::numbers::e, 6.0);
    double members = 0.0;
    for (const auto& g : table.groups()) members += g.multiplicity;
    CHECK(members == static_cast<double>(cells.size()));
}

TEST_CASE("lattice supports are pairwise disjoint and evaluate to their weight") {
    // the 100 smallest |a| in the family (a) box layout, N = 3 (the minimum accepted)
    auto cells = enumerate_cells(0.0, 3.0);
    std::sort(cells.begin(), cells.end(), [](const Cell& x, const Cell& y) { return x.norm < y.norm; });
    cells.resize(100);
    const LatticeSumSpec spec{1, LatticeShape::Box, 4.0, 1.0, 0.0, 0.0, 10.0};
    const auto f = fn::lattice(spec);
    Rng rng(9);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const double r = std::pow(cells[i].norm, -4.0);
        for (int k = 0; k < 100; ++k) {
            const GroupPoint x = point_in_box_cell(cells[i].a, r, rng);
            CHECK(evaluate(f, x) == doctest::Approx(cells[i].norm));
            for (std::size_t j = 0; j < cells.size(); ++j) {
                if (j == i) continue;
                const double rj = std::pow(cells[j].norm, -4.0);
                const GroupPoint d = euclid_add(x, euclid_scale(-2.0, cells[j].a));
                const bool inside = d.z(0) >= 0 && d.z(0) <= rj && d.z(1) >= 0 && d.z(1) <= rj && d.t() >= 0 &&
                                    d.t() <= rj * rj;
                CHECK_FALSE(inside);
            }
        }
    }
    // ball layout: a . B(0, 2 r_a) with N = 3
    const LatticeSumSpec bspec{1, LatticeShape::Ball, 3.0, 0.0, 0.0, 2.0, 10.0};
    const auto h = fn::lattice(bspec);
    auto far = enumerate_cells(2.0, 4.0);
    far.resize(std::min<std::size_t>(far.size(), 100));
    for (std::size_t i = 0; i < far.size(); ++i) {
        const double r = std::pow(far[i].norm, -3.0);
        for (int k = 0; k < 50; ++k) {
            const GroupPoint x = multiply(far[i].a, dilate(2 * r, sample_unit_ball(1, rng)));
            CHECK(evaluate(h, x) == 1.0);
            for (std::size_t j = 0; j < far.size(); ++j)
                if (j != i) CHECK(knorm(multiply(inverse(far[j].a), x)) >= 2 * std::pow(far[j].norm, -3.0));
        }
    }
}

TEST_CASE("cell sampling reproduces the series norm") {
    // importance sample: uniform lattice cell, uniform point inside, evaluate f
    const double T = 20.0;
    const auto cells = enumerate_cells(std::numbers::e, T);
    FamilyParams P;
    P.p = 2;
    P.q = 2;
    P.truncation = T;
    const auto g = family_b_pair(P, 0.5).g;  // box cells, log weights
    const LatticeSumSpec spec{1, LatticeShape::Box, 4.0, 4.0 * 3.0 / 2.0, 1.0, std::numbers::e, T};
    Rng rng(12);
    const int draws = 20000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < draws; ++i) {
        const auto& c = cells[rng.index(cells.size())];
        const double r = std::pow(c.norm, -4.0);
        const double v = std::pow(evaluate(g, point_in_box_cell(c.a, r, rng)), 2.0) * std::pow(r, 4);
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / draws, var = sum2 / draws - mean * mean;
    const double est = mean * cells.size(), err = std::sqrt(var / (draws - 1)) * cells.size();
    CHECK(std::fabs(est - lattice_norm_pow(spec, 2.0)) <= 3 * err);
    // tail of the convergent series is small
    const LatticeSumSpec longer = [&] { auto s = spec; s.truncation = 40.0; return s; }();
    CHECK(lattice_norm_pow(longer, 2.0) - lattice_norm_pow(spec, 2.0) < 0.1 * lattice_norm_pow(spec, 2.0));
}

TEST_CASE("descriptor text round trip") {
    FamilyParams P;
    P.M = 15.5;
    P.p = P.q = 1.0 / 0.575;
    const std::vector<TestFunction> items = {
        fn::zero(),
        fn::ball(1, 1.0),
        fn::ball(GroupPoint({0.25, -1.0 / 3.0}, 0.1), 0.75),
        fn::cube(GroupPoint({1.0, 2.0, 3.0, 4.0}, 5.0), 0.5),
        fn::power(0.2, fn::cube(1, 1.0)),
        fn::power(1.5),
        fn::logtail(-2.0, 0.75, 16.0, 4096.0),
        fn::scale(2.5, fn::dilate(0.25, fn::ball(1, 1.0))),
        fn::sum({fn::ball(1, 1.0), fn::cube(1, 2.0)}),
        family_a_pair(P).f,
        family_c_pair(P).g,
    };
    Rng rng(3);
    for (const auto& f : items) {
        const std::string text = to_text(f);
        const TestFunction back = parse_function(text);
        CHECK(to_text(back) == text);
        const int n = text.find("1, 2, 3") != std::string::npos || text.find("[1,2,3,4,5]") != std::string::npos ? 2 : 1;
        for (int i = 0; i < 200; ++i) {
            GroupPoint x(n);
            for (int c = 0; c <= 2 * n; ++c) x.set_coord(c, rng.uniform(-3, 3));
            CHECK(evaluate(back, x) == evaluate(f, x));
        }
    }
    CHECK(to_text(parse_function("ball(n=1, radius=2)")) == to_text(fn::ball(1, 2.0)));
}

TEST_CASE("descriptor parse errors") {
    CHECK_THROWS(parse_function("ball(n=1)"));
    CHECK_THROWS(parse_function("ball(n=1, radius=1, colour=3)"));
    CHECK_THROWS(parse_function("blob()"));
    CHECK_THROWS(parse_function("ball(n=1, radius=1"));
    CHECK_THROWS(parse_function("ball(n=1, radius=1) trailing"));
    CHECK_THROWS(parse_function("power(s=abc)"));
    CHECK_THROWS(parse_function("lattice(n=1, shape=triangle, decay=4, weight=0, log=0, min_norm=0, truncation=8)"));
}
