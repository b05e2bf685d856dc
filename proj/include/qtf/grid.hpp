#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

namespace qtf {

// Uniform periodic grid on [0, 2*pi*box_scale)^dim, n_axis points per axis.
//
// Retained wavenumbers along each axis are the integers {-n/2+1, ..., n/2}
// scaled by 1/box_scale; the 2/3-rule dealias mask drops every mode with any
// axis index above dealias_fraction * n/2.
class Grid {
public:
    Grid(int dim, int n_axis, double box_scale = 1.0,
         double dealias_fraction = 2.0 / 3.0);

    int dim() const { return dim_; }
    int n_axis() const { return n_axis_; }
    double box_scale() const { return box_scale_; }
    double dealias_fraction() const { return dealias_fraction_; }

    std::size_t num_points() const { return num_points_; }
    double volume() const { return volume_; }
    double spacing() const { return spacing_; }

    // integer mode index along one axis for array coordinate i in [0, n_axis)
    int mode_int(int i) const { return i <= n_axis_ / 2 ? i : i - n_axis_; }
    // physical wavenumber component
    double wavenumber(int i) const { return mode_int(i) / box_scale_; }
    // largest retained |integer mode| after dealiasing
    int dealias_limit() const { return dealias_limit_; }

    void axis_coords(std::size_t flat, int* out) const;
    void mode_ints(std::size_t flat, int* out) const;
    void wavevector(std::size_t flat, double* out) const;
    double k_squared(std::size_t flat) const { return ksq_[flat]; }
    bool dealias_keep(std::size_t flat) const { return keep_[flat] != 0; }

    // physical coordinates of grid point `flat`
    void point(std::size_t flat, double* out) const;

    bool operator==(const Grid& other) const;
    bool operator!=(const Grid& other) const { return !(*this == other); }

private:
    int dim_;
    int n_axis_;
    double box_scale_;
    double dealias_fraction_;
    std::size_t num_points_;
    double volume_;
    double spacing_;
    int dealias_limit_;
    std::vector<double> ksq_;
    std::vector<uint8_t> keep_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(int dim, int n_axis, double box_scale = 1.0,
                  double dealias_fraction = 2.0 / 3.0);

}  // namespace qtf
