#ifndef ARVESON_FFT_HPP
#define ARVESON_FFT_HPP

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

#include "arveson/common.hpp"

namespace arveson::fft {

// Centered DFT along one axis of a row-major complex array.
//
// Samples live on x_j = (j - m) * step, j = 0..N-1, m = (N-1)/2 (N odd).
// Output lives on the dual grid w_k = 2*pi*(k - m) / (N * step) and equals
//   g_k = sum_j exp(-i * sig * w_k * x_j) * f_j.
// sig = +1 is the plain e^{-iwx} convention; sig = -1 flips the frequency
// axis (used for the spatial axis under the Minkowski inner product).
//
// Realized through FFTW with pre/post phase twiddles:
//   g_k = e^{-2*pi*i*m^2/N} * e^{2*pi*i*m*k/N} * FFT_k[ e^{2*pi*i*m*j/N} f_j ]
// (conjugated throughout when sig = -1).

namespace detail {

class PlanCache {
 public:
  static fftw_plan get(int n, int direction) {
    static PlanCache cache;
    std::lock_guard<std::mutex> lock(cache.mu_);
    auto key = std::make_pair(n, direction);
    auto it = cache.plans_.find(key);
    if (it != cache.plans_.end()) return it->second;
    std::vector<cd> buf(static_cast<std::size_t>(n));
    fftw_plan p = fftw_plan_dft_1d(
        n, reinterpret_cast<fftw_complex*>(buf.data()),
        reinterpret_cast<fftw_complex*>(buf.data()), direction, FFTW_ESTIMATE);
    cache.plans_.emplace(key, p);
    return p;
  }

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& kv : plans_) fftw_destroy_plan(kv.second);
  }
  std::mutex mu_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

inline void centered_line(std::vector<cd>& line, int sig) {
  const int n = static_cast<int>(line.size());
  if (n % 2 == 0) throw Error("fft: grid sizes must be odd (origin-centered)");
  const int m = (n - 1) / 2;
  const double s = (sig >= 0) ? 1.0 : -1.0;
  for (int j = 0; j < n; ++j)
    line[static_cast<std::size_t>(j)] *= std::polar(1.0, s * kTwoPi * m * j / n);
  fftw_plan plan = PlanCache::get(n, sig >= 0 ? FFTW_FORWARD : FFTW_BACKWARD);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(line.data()),
                   reinterpret_cast<fftw_complex*>(line.data()));
  const cd corner = std::polar(1.0, -s * kTwoPi * static_cast<double>(m) * m / n);
  for (int k = 0; k < n; ++k)
    line[static_cast<std::size_t>(k)] *= corner * std::polar(1.0, s * kTwoPi * m * k / n);
}

}  // namespace detail

// In-place transform along `axis` of a row-major array with the given shape.
// invert = true applies the exact inverse (conjugate kernel, 1/N scaling).
inline void transform_axis(std::vector<cd>& data, const std::vector<int>& shape,
                           int axis, int sig, bool invert = false) {
  const int d = static_cast<int>(shape.size());
  long total = 1;
  for (int s : shape) total *= s;
  if (static_cast<long>(data.size()) != total) throw Error("fft: shape mismatch");
  const int n = shape[static_cast<std::size_t>(axis)];
  long inner = 1;
  for (int a = axis + 1; a < d; ++a) inner *= shape[static_cast<std::size_t>(a)];
  const long outer = total / (static_cast<long>(n) * inner);

  const int eff_sig = invert ? -sig : sig;
  std::vector<cd> line(static_cast<std::size_t>(n));
  for (long o = 0; o < outer; ++o) {
    for (long i = 0; i < inner; ++i) {
      const long base = o * n * inner + i;
      for (int j = 0; j < n; ++j)
        line[static_cast<std::size_t>(j)] = data[static_cast<std::size_t>(base + j * inner)];
      detail::centered_line(line, eff_sig);
      const double scale = invert ? 1.0 / n : 1.0;
      for (int j = 0; j < n; ++j)
        data[static_cast<std::size_t>(base + j * inner)] =
            line[static_cast<std::size_t>(j)] * scale;
    }
  }
}

}  // namespace arveson::fft

#endif  // ARVESON_FFT_HPP
