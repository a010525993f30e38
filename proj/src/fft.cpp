#include "fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace oamlab::detail {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Plan {
  fftw_plan handle = nullptr;
  ~Plan() {
    if (handle) {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(handle);
    }
  }
};

fftw_complex* as_fftw(std::span<std::complex<double>> data) {
  return reinterpret_cast<fftw_complex*>(data.data());
}

}  // namespace

void fft2d(std::span<std::complex<double>> data, std::size_t n_x, std::size_t n_y, bool inverse) {
  Plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.handle = fftw_plan_dft_2d(static_cast<int>(n_y), static_cast<int>(n_x), as_fftw(data),
                                   as_fftw(data), inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                                   FFTW_ESTIMATE);
  }
  fftw_execute(plan.handle);
  if (inverse) {
    const double norm = 1.0 / static_cast<double>(n_x * n_y);
    for (auto& v : data) v *= norm;
  }
}

void fft_rows(std::span<std::complex<double>> data, std::size_t n, std::size_t count) {
  Plan plan;
  {
    std::lock_guard lock(planner_mutex());
    int len = static_cast<int>(n);
    plan.handle = fftw_plan_many_dft(1, &len, static_cast<int>(count), as_fftw(data), nullptr, 1,
                                     len, as_fftw(data), nullptr, 1, len, FFTW_FORWARD,
                                     FFTW_ESTIMATE);
  }
  fftw_execute(plan.handle);
}

}  // namespace oamlab::detail
