#include "qtf/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace qtf::fft {

namespace {

// FFTW's FORWARD sign is exp(-i k x), which matches our analysis transform;
// plans are cached per (dim, n_axis, sign). FFTW_UNALIGNED lets one plan
// serve any caller buffer, and fftw_execute_dft on distinct buffers is
// thread-safe (the planner itself is not, hence the mutex).
struct PlanKey {
    int dim;
    int n;
    int sign;
    bool operator<(const PlanKey& o) const {
        if (dim != o.dim) return dim < o.dim;
        if (n != o.n) return n < o.n;
        return sign < o.sign;
    }
};

fftw_plan acquire_plan(const Grid& grid, int sign) {
    static std::map<PlanKey, fftw_plan> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    const PlanKey key{grid.dim(), grid.n_axis(), sign};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::vector<std::complex<double>> scratch(grid.num_points());
    int dims[3] = {grid.n_axis(), grid.n_axis(), grid.n_axis()};
    fftw_plan plan = fftw_plan_dft(
        grid.dim(), dims, reinterpret_cast<fftw_complex*>(scratch.data()),
        reinterpret_cast<fftw_complex*>(scratch.data()), sign,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(key, plan);
    return plan;
}

}  // namespace

void forward(const Grid& grid, std::complex<double>* data) {
    fftw_plan plan = acquire_plan(grid, FFTW_FORWARD);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
    const double scale = 1.0 / static_cast<double>(grid.num_points());
    for (std::size_t i = 0; i < grid.num_points(); ++i) data[i] *= scale;
}

void inverse(const Grid& grid, std::complex<double>* data) {
    fftw_plan plan = acquire_plan(grid, FFTW_BACKWARD);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
}

}  // namespace qtf::fft
