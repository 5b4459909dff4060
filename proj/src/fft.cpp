#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace errinvar::detail {
namespace {

// The FFTW planner is not thread-safe; execution of an existing plan on
// new arrays is. Plans are created once under the lock and never freed.
std::mutex planner_mutex;
std::map<std::pair<std::size_t, bool>, fftw_plan> plans;

fftw_plan plan_for(std::size_t n, bool forward) {
  std::lock_guard lock(planner_mutex);
  auto key = std::make_pair(n, forward);
  auto it = plans.find(key);
  if (it != plans.end()) return it->second;
  auto* in = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  // ESTIMATE keeps planning deterministic, so reruns are bit-identical.
  fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), in, out, forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(in);
  fftw_free(out);
  plans.emplace(key, p);
  return p;
}

}  // namespace

void fft_inplace(std::vector<std::complex<double>>& data, bool forward) {
  if (data.empty()) return;
  std::vector<std::complex<double>> out(data.size());
  fftw_execute_dft(plan_for(data.size(), forward), reinterpret_cast<fftw_complex*>(data.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  data.swap(out);
}

}  // namespace errinvar::detail
