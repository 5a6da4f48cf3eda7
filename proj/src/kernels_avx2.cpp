// AVX2 variants. Compiled with -mavx2; only reached after a runtime
// __builtin_cpu_supports check in the dispatcher.

#include "burstlab/kernels.hpp"

#include <immintrin.h>

namespace burstlab::kernels::avx2 {

double sum(std::span<const double> x) {
  const double* p = x.data();
  std::size_t n = x.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(p + i));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) total += p[i];
  return total;
}

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size() < b.size() ? a.size() : b.size();
  const double* pa = a.data();
  const double* pb = b.data();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i));
    acc = _mm256_add_pd(acc, prod);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) total += pa[i] * pb[i];
  return total;
}

std::size_t count_gt(std::span<const double> x, double threshold) {
  const double* p = x.data();
  std::size_t n = x.size();
  const __m256d thr = _mm256_set1_pd(threshold);
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d cmp = _mm256_cmp_pd(_mm256_loadu_pd(p + i), thr, _CMP_GT_OQ);
    count += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(cmp)));
  }
  for (; i < n; ++i)
    if (p[i] > threshold) ++count;
  return count;
}

void indices_gt(std::span<const double> x, double threshold, std::vector<std::uint32_t>& out) {
  out.clear();
  const double* p = x.data();
  std::size_t n = x.size();
  const __m256d thr = _mm256_set1_pd(threshold);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d cmp = _mm256_cmp_pd(_mm256_loadu_pd(p + i), thr, _CMP_GT_OQ);
    int mask = _mm256_movemask_pd(cmp);
    while (mask) {
      const int lane = __builtin_ctz(static_cast<unsigned>(mask));
      out.push_back(static_cast<std::uint32_t>(i + static_cast<std::size_t>(lane)));
      mask &= mask - 1;
    }
  }
  for (; i < n; ++i)
    if (p[i] > threshold) out.push_back(static_cast<std::uint32_t>(i));
}

}  // namespace burstlab::kernels::avx2
