#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace hatk::detail {
namespace {

struct Buffer {
  explicit Buffer(std::size_t n)
      : ptr(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {}
  ~Buffer() { fftw_free(ptr); }
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;
  fftw_complex* ptr;
};

// Plans are created once per shape and reused; fftw_execute_dft on a
// fresh aligned buffer is thread-safe, planning is not.
class PlanCache {
 public:
  fftw_plan get(std::size_t n0, int dim, int sign) {
    std::lock_guard lock(mu_);
    auto key = std::make_tuple(n0, dim, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::size_t total = dim == 1 ? n0 : n0 * n0;
    Buffer tmp(total);
    fftw_plan p = dim == 1
                      ? fftw_plan_dft_1d(static_cast<int>(n0), tmp.ptr, tmp.ptr, sign, FFTW_ESTIMATE)
                      : fftw_plan_dft_2d(static_cast<int>(n0), static_cast<int>(n0), tmp.ptr,
                                         tmp.ptr, sign, FFTW_ESTIMATE);
    plans_.emplace(key, p);
    return p;
  }

  ~PlanCache() {
    for (auto& [k, p] : plans_) fftw_destroy_plan(p);
  }

 private:
  std::mutex mu_;
  std::map<std::tuple<std::size_t, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void dft_inplace(std::complex<double>* data, std::size_t n0, int dimension, int sign) {
  std::size_t total = dimension == 1 ? n0 : n0 * n0;
  fftw_plan plan = cache().get(n0, dimension, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
  Buffer buf(total);
  std::memcpy(buf.ptr, data, sizeof(fftw_complex) * total);
  fftw_execute_dft(plan, buf.ptr, buf.ptr);
  std::memcpy(static_cast<void*>(data), buf.ptr, sizeof(fftw_complex) * total);
}

}  // namespace hatk::detail
