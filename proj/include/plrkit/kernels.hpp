#pragma once

// Data-parallel inner loops shared by the slope, Ekeland, and certificate
// sweeps. Every kernel has a scalar reference and an AVX2 variant; the two
// must return bit-identical results (same operation order, no FMA).

#include <cstddef>
#include <limits>
#include <span>
#include <string_view>

namespace plrkit::kernels {

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

/// Result of an arg-max / arg-min reduction. `index == npos` iff the input was empty.
struct ArgBest {
  double value;
  std::size_t index;
};

/// Coordinates stored structure-of-arrays: coords[k][j] is coordinate k of point j.
struct PointBlock {
  std::span<const double* const> coords;
  std::size_t count;
};

struct KernelTable {
  Isa isa;

  /// out[j] = sqrt(sum_k (coords[k][j] - q[k])^2), summed in increasing k.
  void (*distances)(PointBlock pts, const double* q, double* out);

  /// max_j max(0, fx - fy[j]) / d[j]. Ties prefer the smaller d[j], then the lower j.
  ArgBest (*max_descent_quotient)(double fx, const double* fy, const double* d, std::size_t n);

  /// max_j |fx - fy[j]| / d[j]; ties keep the lower j.
  ArgBest (*max_abs_quotient)(double fx, const double* fy, const double* d, std::size_t n);

  /// min_j (fy[j] - fx) + s * d[j] + k * d[j]^2; ties keep the lower j.
  ArgBest (*min_slope_margin)(double fx, const double* fy, const double* d, double s, double k,
                              std::size_t n);

  /// min_j (fy[j] - fx) - <p, y_j - x> + k * |y_j - x|^2; ties keep the lower j.
  ArgBest (*min_plr_margin)(PointBlock pts, const double* fy, const double* x, double fx,
                            const double* p, double k);
};

/// True when the running CPU can execute the given variant.
bool supported(Isa isa);

/// Kernel table for a specific variant; throws InputError when unsupported.
const KernelTable& table(Isa isa);

/// The table chosen at first use: AVX2 when the CPU has it, else scalar.
/// The environment variable PLRKIT_KERNELS=scalar forces the reference path.
const KernelTable& active();

namespace scalar {
extern const KernelTable kTable;
}

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
extern const KernelTable kTable;
}
#endif

}  // namespace plrkit::kernels
