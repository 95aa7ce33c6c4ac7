#include "diracsim/fft.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include <fftw3.h>

namespace diracsim::fft {
namespace {

using PlanKey = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t, int>;

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once under the lock and kept for the process
// lifetime. FFTW_ESTIMATE keeps plan selection deterministic.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(const PlanKey& key) {
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    const auto [n, howmany, stride, dist, sign] = key;
    std::vector<cplx> scratch((howmany - 1) * dist + (n - 1) * stride + 1);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    int len = static_cast<int>(n);
    fftw_plan plan = fftw_plan_many_dft(1, &len, static_cast<int>(howmany), buf, nullptr,
                                        static_cast<int>(stride), static_cast<int>(dist), buf,
                                        nullptr, static_cast<int>(stride),
                                        static_cast<int>(dist), sign,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void transform(cplx* data, std::size_t n, std::size_t howmany, std::size_t stride,
               std::size_t dist, Direction dir) {
  if (n == 0 || howmany == 0) return;
  const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
  fftw_plan plan = cache().get({n, howmany, stride, dist, sign});
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, buf, buf);
  const real scale = 1.0 / std::sqrt(static_cast<real>(n));
  for (std::size_t h = 0; h < howmany; ++h) {
    for (std::size_t i = 0; i < n; ++i) data[h * dist + i * stride] *= scale;
  }
}

}  // namespace diracsim::fft
