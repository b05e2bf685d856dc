#pragma once

#include <complex>
#include <vector>

#include "qtf/grid.hpp"

namespace qtf {

// Tensor-valued band-limited field stored as Fourier coefficients.
//
// `shape` is the tensor shape of the pointwise value: {} scalar, {d} vector,
// {m,n} matrix, {m,n,d} gradient-of-matrix. Components are stored flat in
// row-major shape order, each as a full complex coefficient array over the
// grid. Fields are value types; operations return new snapshots.
class Field {
public:
    Field() = default;
    Field(GridPtr grid, std::vector<int> shape);

    static Field scalar(GridPtr grid) { return Field(std::move(grid), {}); }
    static Field vector(GridPtr grid);
    static Field matrix(GridPtr grid, int rows, int cols);

    const GridPtr& grid() const { return grid_; }
    const std::vector<int>& shape() const { return shape_; }
    int rank() const { return static_cast<int>(shape_.size()); }
    int ncomp() const { return ncomp_; }
    std::size_t num_modes() const { return grid_->num_points(); }
    bool empty() const { return grid_ == nullptr; }

    int cidx() const { return 0; }
    int cidx(int i) const { return i; }
    int cidx(int i, int j) const { return i * shape_[1] + j; }
    int cidx(int i, int j, int k) const {
        return (i * shape_[1] + j) * shape_[2] + k;
    }

    std::complex<double>* comp(int c) { return comp_[c].data(); }
    const std::complex<double>* comp(int c) const { return comp_[c].data(); }
    std::vector<std::complex<double>>& comp_vec(int c) { return comp_[c]; }
    const std::vector<std::complex<double>>& comp_vec(int c) const { return comp_[c]; }

    // physical-space views (real part of the inverse transform)
    std::vector<std::vector<double>> to_physical() const;
    static Field from_physical(GridPtr grid, std::vector<int> shape,
                               const std::vector<std::vector<double>>& values);

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(double s);

    void apply_dealias();
    void enforce_hermitian();
    void remove_mean();

    double norm_l2() const;                 // sqrt(int |f|^2 dx), Parseval
    double inner_l2(const Field& other) const;
    double max_abs_physical() const;        // grid max of pointwise Frobenius norm
    double hermitian_defect() const;        // max |c(k) - conj(c(-k))|
    bool finite() const;

private:
    GridPtr grid_;
    std::vector<int> shape_;
    int ncomp_ = 0;
    std::vector<std::vector<std::complex<double>>> comp_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field f);

}  // namespace qtf
