#include "burstlab/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace burstlab::kernels {

namespace scalar {

double sum(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v;
  return acc;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  const std::size_t n = a.size() < b.size() ? a.size() : b.size();
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

std::size_t count_gt(std::span<const double> x, double threshold) {
  std::size_t n = 0;
  for (double v : x)
    if (v > threshold) ++n;
  return n;
}

void indices_gt(std::span<const double> x, double threshold, std::vector<std::uint32_t>& out) {
  out.clear();
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > threshold) out.push_back(static_cast<std::uint32_t>(i));
}

}  // namespace scalar

namespace {

Isa resolve_isa() {
  if (const char* env = std::getenv("BURSTLAB_ISA")) {
    if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
#if defined(BURSTLAB_HAVE_AVX2)
    if (std::strcmp(env, "avx2") == 0 && __builtin_cpu_supports("avx2")) return Isa::avx2;
#endif
    return Isa::scalar;
  }
#if defined(BURSTLAB_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2")) return Isa::avx2;
#endif
  return Isa::scalar;
}

}  // namespace

Isa active_isa() {
  static const Isa isa = resolve_isa();
  return isa;
}

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::avx2: return "avx2";
    case Isa::scalar: break;
  }
  return "scalar";
}

double sum(std::span<const double> x) {
#if defined(BURSTLAB_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::sum(x);
#endif
  return scalar::sum(x);
}

double dot(std::span<const double> a, std::span<const double> b) {
#if defined(BURSTLAB_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::dot(a, b);
#endif
  return scalar::dot(a, b);
}

std::size_t count_gt(std::span<const double> x, double threshold) {
#if defined(BURSTLAB_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::count_gt(x, threshold);
#endif
  return scalar::count_gt(x, threshold);
}

void indices_gt(std::span<const double> x, double threshold, std::vector<std::uint32_t>& out) {
#if defined(BURSTLAB_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::indices_gt(x, threshold, out);
#endif
  scalar::indices_gt(x, threshold, out);
}

}  // namespace burstlab::kernels
