#include "heis/group.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace heis {

GroupParams::GroupParams(int n_) : n(n_) {
    if (n_ < 1 || n_ > kMaxN)
        throw std::invalid_argument("n must be in [1, " + std::to_string(kMaxN) + "]");
}

GroupPoint::GroupPoint(int n) : n_(n) {
    if (n < 1 || n > kMaxN)
        throw std::invalid_argument("n must be in [1, " + std::to_string(kMaxN) + "]");
}

GroupPoint::GroupPoint(const std::vector<double>& z, double t) {
    if (z.empty() || z.size() % 2 != 0 || z.size() > 2 * kMaxN)
        throw std::invalid_argument("z must have even length 2n with 1 <= n <= " + std::to_string(kMaxN));
    n_ = static_cast<int>(z.size() / 2);
    for (std::size_t i = 0; i < z.size(); ++i) z_[i] = z[i];
    t_ = t;
    if (!finite()) throw std::invalid_argument("group point coordinates must be finite");
}

GroupPoint::GroupPoint(std::initializer_list<double> z, double t)
    : GroupPoint(std::vector<double>(z), t) {}

GroupPoint GroupPoint::from_coords(int n, const double* coords) {
    GroupPoint p(n);
    for (int c = 0; c < 2 * n; ++c) p.z_[c] = coords[c];
    p.t_ = coords[2 * n];
    return p;
}

void GroupPoint::set_coord(int c, double v) {
    if (c == 2 * n_)
        t_ = v;
    else
        z_[c] = v;
}

bool GroupPoint::finite() const {
    for (int i = 0; i < 2 * n_; ++i)
        if (!std::isfinite(z_[i])) return false;
    return std::isfinite(t_);
}

std::vector<double> GroupPoint::coords() const {
    std::vector<double> out(z_.begin(), z_.begin() + 2 * n_);
    out.push_back(t_);
    return out;
}

bool operator==(const GroupPoint& a, const GroupPoint& b) {
    if (a.n_ != b.n_ || a.t_ != b.t_) return false;
    for (int i = 0; i < 2 * a.n_; ++i)
        if (a.z_[i] != b.z_[i]) return false;
    return true;
}

static void require_same_dim(const GroupPoint& a, const GroupPoint& b) {
    if (a.n() != b.n()) throw std::invalid_argument("group point dimension mismatch");
}

double symplectic(const GroupPoint& a, const GroupPoint& b) {
    require_same_dim(a, b);
    const int n = a.n();
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += a.z(n + j) * b.z(j) - a.z(j) * b.z(n + j);
    return s;
}

GroupPoint multiply(const GroupPoint& x, const GroupPoint& y) {
    require_same_dim(x, y);
    GroupPoint out(x.n());
    for (int i = 0; i < x.zdim(); ++i) out.z(i) = x.z(i) + y.z(i);
    out.t() = x.t() + y.t() + 0.5 * symplectic(x, y);
    return out;
}

GroupPoint inverse(const GroupPoint& x) {
    GroupPoint out(x.n());
    for (int i = 0; i < x.zdim(); ++i) out.z(i) = -x.z(i);
    out.t() = -x.t();
    return out;
}

GroupPoint dilate(double r, const GroupPoint& x) {
    if (!(r > 0.0)) throw std::invalid_argument("dilation factor must be positive");
    GroupPoint out(x.n());
    for (int i = 0; i < x.zdim(); ++i) out.z(i) = r * x.z(i);
    out.t() = r * r * x.t();
    return out;
}

double knorm(const GroupPoint& x) {
    double s = 0.0;
    for (int i = 0; i < x.zdim(); ++i) s += x.z(i) * x.z(i);
    return std::sqrt(std::sqrt(s * s + x.t() * x.t()));
}

GroupPoint sandwich(const GroupPoint& x, const GroupPoint& xi) {
    return multiply(multiply(x, xi), x);
}

GroupPoint euclid_add(const GroupPoint& a, const GroupPoint& b) {
    require_same_dim(a, b);
    GroupPoint out(a.n());
    for (int i = 0; i < a.zdim(); ++i) out.z(i) = a.z(i) + b.z(i);
    out.t() = a.t() + b.t();
    return out;
}

GroupPoint euclid_scale(double c, const GroupPoint& a) {
    GroupPoint out(a.n());
    for (int i = 0; i < a.zdim(); ++i) out.z(i) = c * a.z(i);
    out.t() = c * a.t();
    return out;
}

double koranyi_ball_volume(int n) {
    // |B(0,1)| = int_{|z|<1} 2 sqrt(1 - |z|^4) dz, done in polar form over C^n.
    const double pi = std::numbers::pi;
    const double sphere = std::pow(pi, n) / std::tgamma(n + 1.0);
    return sphere * std::sqrt(pi) * std::tgamma(0.5 * n + 1.0) / std::tgamma(0.5 * n + 1.5);
}

}  // namespace heis
