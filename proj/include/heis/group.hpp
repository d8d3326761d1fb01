#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace heis {

// Largest supported complex dimension; keeps points on the stack.
inline constexpr int kMaxN = 8;

struct GroupParams {
    int n = 1;
    explicit GroupParams(int n_);
    int Q() const { return 2 * n + 2; }
};

// (z, t) with z stored as (x_1..x_n, y_1..y_n).
class GroupPoint {
public:
    GroupPoint() = default;
    explicit GroupPoint(int n);
    GroupPoint(const std::vector<double>& z, double t);
    GroupPoint(std::initializer_list<double> z, double t);

    static GroupPoint from_coords(int n, const double* coords);

    int n() const { return n_; }
    int zdim() const { return 2 * n_; }
    int dim() const { return 2 * n_ + 1; }

    double z(int i) const { return z_[i]; }
    double& z(int i) { return z_[i]; }
    double t() const { return t_; }
    double& t() { return t_; }

    // coordinate c in [0, 2n], with c == 2n meaning t
    double coord(int c) const { return c == 2 * n_ ? t_ : z_[c]; }
    void set_coord(int c, double v);

    bool finite() const;
    std::vector<double> coords() const;

    friend bool operator==(const GroupPoint& a, const GroupPoint& b);

private:
    int n_ = 1;
    std::array<double, 2 * kMaxN> z_{};
    double t_ = 0.0;
};

// Im(z . conj(w)) = sum_j (y_j u_j - x_j v_j) with z = x + iy, w = u + iv.
double symplectic(const GroupPoint& a, const GroupPoint& b);

GroupPoint multiply(const GroupPoint& x, const GroupPoint& y);
GroupPoint inverse(const GroupPoint& x);
GroupPoint dilate(double r, const GroupPoint& x);
double knorm(const GroupPoint& x);
GroupPoint sandwich(const GroupPoint& x, const GroupPoint& xi);

// Euclidean coordinatewise operations.
GroupPoint euclid_add(const GroupPoint& a, const GroupPoint& b);
GroupPoint euclid_scale(double c, const GroupPoint& a);

// |B(0,1)| in closed form.
double koranyi_ball_volume(int n);

}  // namespace heis
