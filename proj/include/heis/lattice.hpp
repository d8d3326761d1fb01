#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "heis/group.hpp"
#include "heis/rng.hpp"

namespace heis {

struct LatticeIndex {
    int n = 1;
    std::array<std::int64_t, 2 * kMaxN + 1> a{};

    LatticeIndex() = default;
    explicit LatticeIndex(int n_) : n(n_) {}
    LatticeIndex(int n_, const std::vector<std::int64_t>& v);

    std::int64_t& operator[](int c) { return a[c]; }
    std::int64_t operator[](int c) const { return a[c]; }
    std::int64_t t() const { return a[2 * n]; }
    GroupPoint point() const;

    friend bool operator==(const LatticeIndex& x, const LatticeIndex& y);
};

enum class CubeKind { Plain, Enlarged };

// t - Im(a'.conj(z))/2: the vertical coordinate of x seen from the column a'.
double twisted_height(const LatticeIndex& a, const GroupPoint& x);

LatticeIndex locate(const GroupPoint& x);
bool cube_contains(const LatticeIndex& a, const GroupPoint& x);
// x in a.([-4,4]^{2n} x [-16,16])
bool enlarged_contains(const LatticeIndex& a, const GroupPoint& x);

int default_search_radius(int n);
// Indices a with |a'_c - locate(x)'_c| <= radius and the vertical index within
// radius^2 of the twisted height of x over a'.
std::int64_t overlap_count(const GroupPoint& x, int radius, CubeKind kind = CubeKind::Enlarged);

// a . q1 . b . q2^{-1} . q3 with q_i uniform in Q_0 and b uniform in B(0,1).
GroupPoint sample_enlarged_cube_point(const LatticeIndex& a, Rng& rng);

}  // namespace heis
