#pragma once

#include <vector>

#include "qtf/field.hpp"

namespace qtf {

// Physical-space companion of Field for forming nonlinear products. All
// binary ops are pointwise over grid points; shapes follow matrix rules.
struct PhysArray {
    GridPtr grid;
    std::vector<int> shape;
    std::vector<std::vector<double>> comp;

    int ncomp() const { return static_cast<int>(comp.size()); }
    std::size_t npts() const { return grid->num_points(); }
    int rows() const { return shape.empty() ? 1 : shape[0]; }
    int cols() const { return shape.size() < 2 ? 1 : shape[1]; }
    int cidx(int i, int j) const { return i * shape[1] + j; }
};

PhysArray to_phys(const Field& f);
// Forward transform; dealiasing applied by default (every nonlinear product
// goes through here).
Field to_spectral(const PhysArray& p, bool dealias = true);

namespace pw {

PhysArray zeros(GridPtr grid, std::vector<int> shape);
PhysArray constant_matrix(GridPtr grid, const std::vector<std::vector<double>>& m);
PhysArray identity(GridPtr grid, int n);

PhysArray add(const PhysArray& a, const PhysArray& b);
PhysArray sub(const PhysArray& a, const PhysArray& b);
PhysArray scale(double s, const PhysArray& a);
// a + s*b
PhysArray axpy(const PhysArray& a, double s, const PhysArray& b);

PhysArray matmul(const PhysArray& a, const PhysArray& b);
PhysArray transpose(const PhysArray& a);
PhysArray trace(const PhysArray& a);                       // {m,m} -> scalar
PhysArray contract(const PhysArray& a, const PhysArray& b);  // sum_ij a_ij b_ij
PhysArray mul_scalar_field(const PhysArray& s, const PhysArray& a);
// zero-pad a {d,d} matrix field into {dt,dt}
PhysArray embed_matrix(const PhysArray& a, int dt);
// contract a {m,n,d} gradient against a {d} vector over the last index
PhysArray dot_last(const PhysArray& grad, const PhysArray& v);

}  // namespace pw

}  // namespace qtf
