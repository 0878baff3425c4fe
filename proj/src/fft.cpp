#include "bklab/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace bklab {

namespace {
// fftw plan creation/destruction is not thread-safe; execution is.
std::mutex g_planner_mutex;
}  // namespace

void fft2_inplace(std::vector<cplx>& data, int nx, int ny, int sign) {
    if (nx < 1 || ny < 1 || data.size() != static_cast<std::size_t>(nx) * ny)
        throw std::invalid_argument("fft2_inplace: size mismatch");
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(g_planner_mutex);
        plan = fftw_plan_dft_2d(ny, nx, buf, buf,
                                sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                FFTW_ESTIMATE);
    }
    if (!plan) throw std::runtime_error("fft2_inplace: fftw planning failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(g_planner_mutex);
        fftw_destroy_plan(plan);
    }
}

void ifft2_inplace(std::vector<cplx>& data, int nx, int ny) {
    fft2_inplace(data, nx, ny, +1);
    const double scale = 1.0 / (static_cast<double>(nx) * ny);
    for (auto& v : data) v *= scale;
}

}  // namespace bklab
