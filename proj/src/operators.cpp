#include "qtf/operators.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace qtf {

Field gradient(const Field& f) {
    const auto& g = *f.grid();
    const int d = g.dim();
    std::vector<int> shape = f.shape();
    shape.push_back(d);
    Field out(f.grid(), shape);
    double k[3];
    for (int c = 0; c < f.ncomp(); ++c) {
        const auto* src = f.comp(c);
        for (int axis = 0; axis < d; ++axis) {
            auto* dst = out.comp(c * d + axis);
            for (std::size_t i = 0; i < f.num_modes(); ++i) {
                g.wavevector(i, k);
                dst[i] = std::complex<double>(0.0, k[axis]) * src[i];
            }
        }
    }
    return out;
}

Field divergence(const Field& f) {
    const auto& g = *f.grid();
    const int d = g.dim();
    if (f.rank() < 1 || f.shape().back() != d)
        throw std::invalid_argument("divergence: last index must match grid dim");
    std::vector<int> shape = f.shape();
    shape.pop_back();
    Field out(f.grid(), shape);
    double k[3];
    for (int c = 0; c < out.ncomp(); ++c) {
        auto* dst = out.comp(c);
        for (std::size_t i = 0; i < f.num_modes(); ++i) {
            g.wavevector(i, k);
            std::complex<double> s = 0.0;
            for (int axis = 0; axis < d; ++axis)
                s += std::complex<double>(0.0, k[axis]) * f.comp(c * d + axis)[i];
            dst[i] = s;
        }
    }
    return out;
}

Field laplacian(const Field& f) {
    Field out = f;
    const auto& g = *f.grid();
    for (int c = 0; c < out.ncomp(); ++c) {
        auto* dst = out.comp(c);
        for (std::size_t i = 0; i < f.num_modes(); ++i) dst[i] *= -g.k_squared(i);
    }
    return out;
}

Field leray_project(const Field& v) {
    const auto& g = *v.grid();
    const int d = g.dim();
    if (v.shape() != std::vector<int>{d})
        throw std::invalid_argument("leray_project: expects a d-vector field");
    Field out = v;
    double k[3];
    for (std::size_t i = 0; i < v.num_modes(); ++i) {
        const double ksq = g.k_squared(i);
        if (ksq == 0.0) continue;
        g.wavevector(i, k);
        std::complex<double> kdotv = 0.0;
        for (int a = 0; a < d; ++a) kdotv += k[a] * v.comp(a)[i];
        kdotv /= ksq;
        for (int a = 0; a < d; ++a) out.comp(a)[i] -= k[a] * kdotv;
    }
    return out;
}

Field spectral_cutoff(const Field& f, int n) {
    if (n < 0) throw std::invalid_argument("spectral_cutoff: n must be >= 0");
    const auto& g = *f.grid();
    const double lo = std::pow(2.0, -n);
    const double hi = std::pow(2.0, n);
    Field out = f;
    for (std::size_t i = 0; i < f.num_modes(); ++i) {
        const double kabs = std::sqrt(g.k_squared(i));
        if (kabs < lo || kabs > hi)
            for (int c = 0; c < out.ncomp(); ++c) out.comp(c)[i] = 0.0;
    }
    return out;
}

namespace {

// chi(x) = A exp(-1/(1-|x|^2)) on the unit ball; the multiplier is its
// radial Fourier transform normalized to 1 at rho = 0:
//   d=2:  chihat(rho) ~ int_0^1 w(r) J0(rho r) r dr
//   d=3:  chihat(rho) ~ int_0^1 w(r) sinc(rho r) r^2 dr
// evaluated with a fixed-order Gauss-Legendre rule (the integrand is smooth;
// 96 nodes hold up to rho of a few hundred, beyond which the multiplier is
// negligible anyway).
constexpr int kQuadOrder = 96;

struct QuadRule {
    double node[kQuadOrder];
    double weight[kQuadOrder];
};

const QuadRule& gauss_legendre_01() {
    static QuadRule rule = [] {
        QuadRule r;
        // Newton iteration on Legendre polynomials, mapped from [-1,1] to [0,1].
        const int n = kQuadOrder;
        for (int i = 0; i < n; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int j = 2; j <= n; ++j) {
                    double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                const double dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            r.node[i] = 0.5 * (x + 1.0);
            r.weight[i] = 1.0 / ((1.0 - x * x) * dp * dp);
        }
        return r;
    }();
    return rule;
}

double bump(double r) {
    const double t = 1.0 - r * r;
    return t > 0.0 ? std::exp(-1.0 / t) : 0.0;
}

double sinc(double x) {
    if (std::abs(x) < 1e-6) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

double mollifier_raw(double rho, int dim) {
    const auto& q = gauss_legendre_01();
    double s = 0.0;
    for (int i = 0; i < kQuadOrder; ++i) {
        const double r = q.node[i];
        double kernel;
        if (dim == 2)
            kernel = std::cyl_bessel_j(0, rho * r) * r;
        else
            kernel = sinc(rho * r) * r * r;
        s += q.weight[i] * bump(r) * kernel;
    }
    return s;
}

double mollifier_cached(double rho, int dim) {
    static std::map<std::pair<int, long long>, double> cache;
    static std::mutex mutex;
    // rho values repeat across modes; key on a fine fixed quantization
    const long long key = static_cast<long long>(std::llround(rho * 1e9));
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find({dim, key});
    if (it != cache.end()) return it->second;
    const double v = mollifier_raw(rho, dim) / mollifier_raw(0.0, dim);
    cache.emplace(std::make_pair(dim, key), v);
    return v;
}

}  // namespace

double mollifier_multiplier(double rho, int dim) {
    return mollifier_cached(std::abs(rho), dim);
}

Field mollify(const Field& f, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("mollify: eps must be positive");
    const auto& g = *f.grid();
    Field out = f;
    for (std::size_t i = 0; i < f.num_modes(); ++i) {
        const double m =
            mollifier_multiplier(eps * std::sqrt(g.k_squared(i)), g.dim());
        for (int c = 0; c < out.ncomp(); ++c) out.comp(c)[i] *= m;
    }
    return out;
}

}  // namespace qtf
