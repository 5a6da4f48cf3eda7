#pragma once
// Data-parallel primitives behind the segmentation and statistics hot loops.
//
// Each kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant selected once at runtime. Comparison kernels (count_gt, indices_gt)
// are bit-exact across variants; the reductions (sum, dot) may differ in the
// last ulps because vector lanes reassociate the additions.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace burstlab::kernels {

enum class Isa { scalar, avx2 };

// Variant picked for this process: AVX2 when the CPU supports it, unless the
// environment variable BURSTLAB_ISA ("scalar" | "avx2") overrides the choice.
Isa active_isa();
const char* isa_name(Isa isa);

double sum(std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);

// Number of elements strictly greater than `threshold`.
std::size_t count_gt(std::span<const double> x, double threshold);

// Indices of elements strictly greater than `threshold`, ascending.
void indices_gt(std::span<const double> x, double threshold, std::vector<std::uint32_t>& out);

namespace scalar {
double sum(std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);
std::size_t count_gt(std::span<const double> x, double threshold);
void indices_gt(std::span<const double> x, double threshold, std::vector<std::uint32_t>& out);
}  // namespace scalar

#if defined(BURSTLAB_HAVE_AVX2)
namespace avx2 {
double sum(std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);
std::size_t count_gt(std::span<const double> x, double threshold);
void indices_gt(std::span<const double> x, double threshold, std::vector<std::uint32_t>& out);
}  // namespace avx2
#endif

}  // namespace burstlab::kernels
