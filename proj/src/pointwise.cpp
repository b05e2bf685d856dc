#include "qtf/pointwise.hpp"

#include <stdexcept>

namespace qtf {

PhysArray to_phys(const Field& f) {
    PhysArray p;
    p.grid = f.grid();
    p.shape = f.shape();
    p.comp = f.to_physical();
    return p;
}

Field to_spectral(const PhysArray& p, bool dealias) {
    Field f = Field::from_physical(p.grid, p.shape, p.comp);
    if (dealias) f.apply_dealias();
    return f;
}

namespace pw {

namespace {
int shape_ncomp(const std::vector<int>& shape) {
    int n = 1;
    for (int s : shape) n *= s;
    return n;
}
}  // namespace

PhysArray zeros(GridPtr grid, std::vector<int> shape) {
    PhysArray p;
    p.shape = std::move(shape);
    p.comp.assign(shape_ncomp(p.shape),
                  std::vector<double>(grid->num_points(), 0.0));
    p.grid = std::move(grid);
    return p;
}

PhysArray constant_matrix(GridPtr grid,
                          const std::vector<std::vector<double>>& m) {
    const int rows = static_cast<int>(m.size());
    const int cols = static_cast<int>(m[0].size());
    PhysArray p = zeros(grid, {rows, cols});
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            p.comp[i * cols + j].assign(p.npts(), m[i][j]);
    return p;
}

PhysArray identity(GridPtr grid, int n) {
    PhysArray p = zeros(std::move(grid), {n, n});
    for (int i = 0; i < n; ++i) p.comp[i * n + i].assign(p.npts(), 1.0);
    return p;
}

PhysArray add(const PhysArray& a, const PhysArray& b) {
    PhysArray out = a;
    for (int c = 0; c < out.ncomp(); ++c)
        for (std::size_t i = 0; i < out.comp[c].size(); ++i)
            out.comp[c][i] += b.comp[c][i];
    return out;
}

PhysArray sub(const PhysArray& a, const PhysArray& b) {
    PhysArray out = a;
    for (int c = 0; c < out.ncomp(); ++c)
        for (std::size_t i = 0; i < out.comp[c].size(); ++i)
            out.comp[c][i] -= b.comp[c][i];
    return out;
}

PhysArray scale(double s, const PhysArray& a) {
    PhysArray out = a;
    for (auto& v : out.comp)
        for (auto& x : v) x *= s;
    return out;
}

PhysArray axpy(const PhysArray& a, double s, const PhysArray& b) {
    PhysArray out = a;
    for (int c = 0; c < out.ncomp(); ++c)
        for (std::size_t i = 0; i < out.comp[c].size(); ++i)
            out.comp[c][i] += s * b.comp[c][i];
    return out;
}

PhysArray matmul(const PhysArray& a, const PhysArray& b) {
    if (a.shape.size() != 2 || b.shape.size() != 2 || a.shape[1] != b.shape[0])
        throw std::invalid_argument("pw::matmul: shape mismatch");
    const int m = a.shape[0], k = a.shape[1], n = b.shape[1];
    PhysArray out = zeros(a.grid, {m, n});
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            auto& dst = out.comp[i * n + j];
            for (int l = 0; l < k; ++l) {
                const auto& ai = a.comp[i * k + l];
                const auto& bj = b.comp[l * n + j];
                for (std::size_t p = 0; p < dst.size(); ++p)
                    dst[p] += ai[p] * bj[p];
            }
        }
    return out;
}

PhysArray transpose(const PhysArray& a) {
    const int m = a.shape[0], n = a.shape[1];
    PhysArray out = zeros(a.grid, {n, m});
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) out.comp[j * m + i] = a.comp[i * n + j];
    return out;
}

PhysArray trace(const PhysArray& a) {
    const int n = a.shape[0];
    PhysArray out = zeros(a.grid, {});
    auto& dst = out.comp[0];
    for (int i = 0; i < n; ++i) {
        const auto& diag = a.comp[i * n + i];
        for (std::size_t p = 0; p < dst.size(); ++p) dst[p] += diag[p];
    }
    return out;
}

PhysArray contract(const PhysArray& a, const PhysArray& b) {
    if (a.shape != b.shape)
        throw std::invalid_argument("pw::contract: shape mismatch");
    PhysArray out = zeros(a.grid, {});
    auto& dst = out.comp[0];
    for (int c = 0; c < a.ncomp(); ++c)
        for (std::size_t p = 0; p < dst.size(); ++p)
            dst[p] += a.comp[c][p] * b.comp[c][p];
    return out;
}

PhysArray mul_scalar_field(const PhysArray& s, const PhysArray& a) {
    if (!s.shape.empty())
        throw std::invalid_argument("pw::mul_scalar_field: first arg not scalar");
    PhysArray out = a;
    for (int c = 0; c < out.ncomp(); ++c)
        for (std::size_t p = 0; p < out.comp[c].size(); ++p)
            out.comp[c][p] *= s.comp[0][p];
    return out;
}

PhysArray embed_matrix(const PhysArray& a, int dt) {
    const int d = a.shape[0];
    if (d == dt) return a;
    PhysArray out = zeros(a.grid, {dt, dt});
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out.comp[i * dt + j] = a.comp[i * a.shape[1] + j];
    return out;
}

PhysArray dot_last(const PhysArray& grad, const PhysArray& v) {
    const int d = v.shape[0];
    if (grad.shape.back() != d)
        throw std::invalid_argument("pw::dot_last: trailing index mismatch");
    std::vector<int> shape(grad.shape.begin(), grad.shape.end() - 1);
    PhysArray out = zeros(grad.grid, shape);
    for (int c = 0; c < out.ncomp(); ++c) {
        auto& dst = out.comp[c];
        for (int axis = 0; axis < d; ++axis) {
            const auto& gc = grad.comp[c * d + axis];
            const auto& vc = v.comp[axis];
            for (std::size_t p = 0; p < dst.size(); ++p) dst[p] += gc[p] * vc[p];
        }
    }
    return out;
}

}  // namespace pw

}  // namespace qtf
