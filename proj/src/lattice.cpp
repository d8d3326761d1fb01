#include "heis/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace heis {

LatticeIndex::LatticeIndex(int n_, const std::vector<std::int64_t>& v) : n(n_) {
    if (static_cast<int>(v.size()) != 2 * n_ + 1) throw std::invalid_argument("lattice index needs 2n+1 components");
    for (int c = 0; c <= 2 * n_; ++c) a[c] = v[c];
}

GroupPoint LatticeIndex::point() const {
    GroupPoint p(n);
    for (int c = 0; c <= 2 * n; ++c) p.set_coord(c, static_cast<double>(a[c]));
    return p;
}

bool operator==(const LatticeIndex& x, const LatticeIndex& y) {
    if (x.n != y.n) return false;
    for (int c = 0; c <= 2 * x.n; ++c)
        if (x.a[c] != y.a[c]) return false;
    return true;
}

double twisted_height(const LatticeIndex& a, const GroupPoint& x) {
    const int n = x.n();
    double sym = 0.0;
    for (int j = 0; j < n; ++j)
        sym += -static_cast<double>(a[n + j]) * x.z(j) + static_cast<double>(a[j]) * x.z(n + j);
    return x.t() + 0.5 * sym;
}

LatticeIndex locate(const GroupPoint& x) {
    LatticeIndex a(x.n());
    for (int c = 0; c < x.zdim(); ++c) a[c] = static_cast<std::int64_t>(std::floor(x.z(c)));
    a[x.zdim()] = static_cast<std::int64_t>(std::floor(twisted_height(a, x)));
    return a;
}

bool cube_contains(const LatticeIndex& a, const GroupPoint& x) {
    if (a.n != x.n()) throw std::invalid_argument("lattice index dimension mismatch");
    for (int c = 0; c < x.zdim(); ++c) {
        const double lo = static_cast<double>(a[c]);
        if (!(x.z(c) >= lo && x.z(c) < lo + 1.0)) return false;
    }
    const double h = twisted_height(a, x);
    const double lo = static_cast<double>(a.t());
    return h >= lo && h < lo + 1.0;
}

bool enlarged_contains(const LatticeIndex& a, const GroupPoint& x) {
    if (a.n != x.n()) throw std::invalid_argument("lattice index dimension mismatch");
    for (int c = 0; c < x.zdim(); ++c) {
        const double d = x.z(c) - static_cast<double>(a[c]);
        if (d < -4.0 || d > 4.0) return false;
    }
    const double h = twisted_height(a, x) - static_cast<double>(a.t());
    return h >= -16.0 && h <= 16.0;
}

int default_search_radius(int n) { return static_cast<int>(std::ceil(4.0 * std::sqrt(static_cast<double>(n)))); }

std::int64_t overlap_count(const GroupPoint& x, int radius, CubeKind kind) {
    if (radius < 1) throw std::invalid_argument("search radius must be positive");
    const int zd = x.zdim();
    const LatticeIndex home = locate(x);
    const std::int64_t span = 2 * static_cast<std::int64_t>(radius) + 1;
    std::int64_t columns = 1;
    for (int c = 0; c < zd; ++c) columns *= span;

    std::int64_t count = 0;
    LatticeIndex a(x.n());
    for (std::int64_t col = 0; col < columns; ++col) {
        std::int64_t rest = col;
        for (int c = 0; c < zd; ++c) {
            a[c] = home[c] + rest % span - radius;
            rest /= span;
        }
        const double height = twisted_height(a, x);
        const auto base = static_cast<std::int64_t>(std::floor(height));
        const std::int64_t reach = static_cast<std::int64_t>(radius) * radius;
        if (kind == CubeKind::Plain) {
            for (std::int64_t at = base - reach; at <= base + reach; ++at) {
                a[zd] = at;
                if (cube_contains(a, x)) ++count;
            }
            continue;
        }
        bool column_ok = true;
        for (int c = 0; c < zd && column_ok; ++c) {
            const double d = x.z(c) - static_cast<double>(a[c]);
            column_ok = d >= -4.0 && d <= 4.0;
        }
        if (!column_ok) continue;
        for (std::int64_t at = base - reach; at <= base + reach; ++at) {
            const double h = height - static_cast<double>(at);
            if (h >= -16.0 && h <= 16.0) ++count;
        }
    }
    return count;
}

GroupPoint sample_enlarged_cube_point(const LatticeIndex& a, Rng& rng) {
    const int n = a.n;
    auto unit_cube = [&] {
        GroupPoint q(n);
        for (int c = 0; c <= 2 * n; ++c) q.set_coord(c, rng.uniform());
        return q;
    };
    GroupPoint b(n);
    do {
        for (int c = 0; c <= 2 * n; ++c) b.set_coord(c, rng.uniform(-1.0, 1.0));
    } while (knorm(b) >= 1.0);
    GroupPoint p = multiply(a.point(), unit_cube());
    p = multiply(p, b);
    p = multiply(p, inverse(unit_cube()));
    return multiply(p, unit_cube());
}

}  // namespace heis
