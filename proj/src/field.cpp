#include "qtf/field.hpp"

#include <cmath>
#include <stdexcept>

#include "qtf/fft.hpp"

namespace qtf {

namespace {
int shape_ncomp(const std::vector<int>& shape) {
    int n = 1;
    for (int s : shape) n *= s;
    return n;
}
}  // namespace

Field::Field(GridPtr grid, std::vector<int> shape)
    : grid_(std::move(grid)), shape_(std::move(shape)) {
    ncomp_ = shape_ncomp(shape_);
    comp_.assign(ncomp_, std::vector<std::complex<double>>(grid_->num_points()));
}

Field Field::vector(GridPtr grid) {
    const int d = grid->dim();
    return Field(std::move(grid), {d});
}

Field Field::matrix(GridPtr grid, int rows, int cols) {
    return Field(std::move(grid), {rows, cols});
}

std::vector<std::vector<double>> Field::to_physical() const {
    std::vector<std::vector<double>> out(ncomp_);
    std::vector<std::complex<double>> work;
    for (int c = 0; c < ncomp_; ++c) {
        work = comp_[c];
        fft::inverse(*grid_, work.data());
        out[c].resize(work.size());
        for (std::size_t i = 0; i < work.size(); ++i) out[c][i] = work[i].real();
    }
    return out;
}

Field Field::from_physical(GridPtr grid, std::vector<int> shape,
                           const std::vector<std::vector<double>>& values) {
    Field f(std::move(grid), std::move(shape));
    if (static_cast<int>(values.size()) != f.ncomp())
        throw std::invalid_argument("from_physical: component count mismatch");
    for (int c = 0; c < f.ncomp(); ++c) {
        if (values[c].size() != f.num_modes())
            throw std::invalid_argument("from_physical: grid size mismatch");
        auto& dst = f.comp_[c];
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = values[c][i];
        fft::forward(*f.grid_, dst.data());
    }
    return f;
}

Field& Field::operator+=(const Field& other) {
    if (!(*grid_ == *other.grid_) || shape_ != other.shape_)
        throw std::invalid_argument("Field +=: incompatible fields");
    for (int c = 0; c < ncomp_; ++c)
        for (std::size_t i = 0; i < comp_[c].size(); ++i)
            comp_[c][i] += other.comp_[c][i];
    return *this;
}

Field& Field::operator-=(const Field& other) {
    if (!(*grid_ == *other.grid_) || shape_ != other.shape_)
        throw std::invalid_argument("Field -=: incompatible fields");
    for (int c = 0; c < ncomp_; ++c)
        for (std::size_t i = 0; i < comp_[c].size(); ++i)
            comp_[c][i] -= other.comp_[c][i];
    return *this;
}

Field& Field::operator*=(double s) {
    for (auto& v : comp_)
        for (auto& z : v) z *= s;
    return *this;
}

void Field::apply_dealias() {
    for (int c = 0; c < ncomp_; ++c)
        for (std::size_t i = 0; i < comp_[c].size(); ++i)
            if (!grid_->dealias_keep(i)) comp_[c][i] = 0.0;
}

void Field::enforce_hermitian() {
    const int n = grid_->n_axis();
    const int d = grid_->dim();
    int c[3], m[3];
    for (int comp = 0; comp < ncomp_; ++comp) {
        auto& v = comp_[comp];
        for (std::size_t flat = 0; flat < v.size(); ++flat) {
            grid_->axis_coords(flat, c);
            std::size_t mirror = 0;
            for (int a = 0; a < d; ++a) {
                m[a] = (n - c[a]) % n;
                mirror = mirror * n + m[a];
            }
            if (mirror < flat) continue;
            const std::complex<double> avg =
                0.5 * (v[flat] + std::conj(v[mirror]));
            v[flat] = avg;
            v[mirror] = std::conj(avg);
        }
    }
}

void Field::remove_mean() {
    for (int c = 0; c < ncomp_; ++c) comp_[c][0] = 0.0;
}

double Field::norm_l2() const {
    double s = 0.0;
    for (int c = 0; c < ncomp_; ++c)
        for (const auto& z : comp_[c]) s += std::norm(z);
    return std::sqrt(grid_->volume() * s);
}

double Field::inner_l2(const Field& other) const {
    if (!(*grid_ == *other.grid_) || shape_ != other.shape_)
        throw std::invalid_argument("inner_l2: incompatible fields");
    double s = 0.0;
    for (int c = 0; c < ncomp_; ++c)
        for (std::size_t i = 0; i < comp_[c].size(); ++i)
            s += (comp_[c][i] * std::conj(other.comp_[c][i])).real();
    return grid_->volume() * s;
}

double Field::max_abs_physical() const {
    const auto phys = to_physical();
    double best = 0.0;
    for (std::size_t i = 0; i < num_modes(); ++i) {
        double s = 0.0;
        for (int c = 0; c < ncomp_; ++c) s += phys[c][i] * phys[c][i];
        best = std::max(best, s);
    }
    return std::sqrt(best);
}

double Field::hermitian_defect() const {
    const int n = grid_->n_axis();
    const int d = grid_->dim();
    int c[3];
    double worst = 0.0;
    for (int comp = 0; comp < ncomp_; ++comp) {
        const auto& v = comp_[comp];
        for (std::size_t flat = 0; flat < v.size(); ++flat) {
            grid_->axis_coords(flat, c);
            std::size_t mirror = 0;
            for (int a = 0; a < d; ++a) mirror = mirror * n + (n - c[a]) % n;
            worst = std::max(worst, std::abs(v[flat] - std::conj(v[mirror])));
        }
    }
    return worst;
}

bool Field::finite() const {
    for (const auto& v : comp_)
        for (const auto& z : v)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field f) { return f *= s; }

}  // namespace qtf
