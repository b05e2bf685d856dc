#include "qtf/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qtf {

namespace {
bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

Grid::Grid(int dim, int n_axis, double box_scale, double dealias_fraction)
    : dim_(dim),
      n_axis_(n_axis),
      box_scale_(box_scale),
      dealias_fraction_(dealias_fraction) {
    if (dim_ != 2 && dim_ != 3)
        throw std::invalid_argument("Grid: dim must be 2 or 3");
    if (n_axis_ < 8 || !is_power_of_two(n_axis_))
        throw std::invalid_argument("Grid: n_axis must be a power of two >= 8");
    if (box_scale_ <= 0.0)
        throw std::invalid_argument("Grid: box_scale must be positive");
    if (dealias_fraction_ <= 0.0 || dealias_fraction_ > 1.0)
        throw std::invalid_argument("Grid: dealias_fraction must be in (0,1]");

    num_points_ = 1;
    for (int a = 0; a < dim_; ++a) num_points_ *= static_cast<std::size_t>(n_axis_);

    const double side = 2.0 * std::numbers::pi * box_scale_;
    volume_ = std::pow(side, dim_);
    spacing_ = side / n_axis_;

    const double cutoff = dealias_fraction_ * n_axis_ / 2.0;
    dealias_limit_ = static_cast<int>(std::floor(cutoff + 1e-12));

    ksq_.resize(num_points_);
    keep_.resize(num_points_);
    int m[3] = {0, 0, 0};
    for (std::size_t flat = 0; flat < num_points_; ++flat) {
        mode_ints(flat, m);
        double s = 0.0;
        bool ok = true;
        for (int a = 0; a < dim_; ++a) {
            const double k = m[a] / box_scale_;
            s += k * k;
            if (std::abs(m[a]) > cutoff) ok = false;
        }
        ksq_[flat] = s;
        keep_[flat] = ok ? 1 : 0;
    }
}

void Grid::axis_coords(std::size_t flat, int* out) const {
    for (int a = dim_ - 1; a >= 0; --a) {
        out[a] = static_cast<int>(flat % n_axis_);
        flat /= n_axis_;
    }
}

void Grid::mode_ints(std::size_t flat, int* out) const {
    axis_coords(flat, out);
    for (int a = 0; a < dim_; ++a) out[a] = mode_int(out[a]);
}

void Grid::wavevector(std::size_t flat, double* out) const {
    int m[3];
    mode_ints(flat, m);
    for (int a = 0; a < dim_; ++a) out[a] = m[a] / box_scale_;
}

void Grid::point(std::size_t flat, double* out) const {
    int c[3];
    axis_coords(flat, c);
    for (int a = 0; a < dim_; ++a) out[a] = spacing_ * c[a];
}

bool Grid::operator==(const Grid& other) const {
    return dim_ == other.dim_ && n_axis_ == other.n_axis_ &&
           box_scale_ == other.box_scale_ &&
           dealias_fraction_ == other.dealias_fraction_;
}

GridPtr make_grid(int dim, int n_axis, double box_scale, double dealias_fraction) {
    return std::make_shared<Grid>(dim, n_axis, box_scale, dealias_fraction);
}

}  // namespace qtf
