#include <cmath>

#include "plrkit/kernels.hpp"

namespace plrkit::kernels::scalar {
namespace {

void distances(PointBlock pts, const double* q, double* out) {
  const std::size_t dim = pts.coords.size();
  for (std::size_t j = 0; j < pts.count; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double diff = pts.coords[k][j] - q[k];
      acc = acc + diff * diff;
    }
    out[j] = std::sqrt(acc);
  }
}

ArgBest max_descent_quotient(double fx, const double* fy, const double* d, std::size_t n) {
  ArgBest best{-std::numeric_limits<double>::infinity(), npos};
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    double num = fx - fy[j];
    num = num < 0.0 ? 0.0 : num;
    const double q = num / d[j];
    if (q > best.value || (q == best.value && d[j] < best_d)) {
      best = {q, j};
      best_d = d[j];
    }
  }
  return best;
}

ArgBest max_abs_quotient(double fx, const double* fy, const double* d, std::size_t n) {
  ArgBest best{-std::numeric_limits<double>::infinity(), npos};
  for (std::size_t j = 0; j < n; ++j) {
    const double q = std::fabs(fx - fy[j]) / d[j];
    if (q > best.value) best = {q, j};
  }
  return best;
}

ArgBest min_slope_margin(double fx, const double* fy, const double* d, double s, double k,
                         std::size_t n) {
  ArgBest best{std::numeric_limits<double>::infinity(), npos};
  for (std::size_t j = 0; j < n; ++j) {
    const double m = ((fy[j] - fx) + s * d[j]) + k * (d[j] * d[j]);
    if (m < best.value) best = {m, j};
  }
  return best;
}

ArgBest min_plr_margin(PointBlock pts, const double* fy, const double* x, double fx, const double* p,
                       double k) {
  const std::size_t dim = pts.coords.size();
  ArgBest best{std::numeric_limits<double>::infinity(), npos};
  for (std::size_t j = 0; j < pts.count; ++j) {
    double lin = 0.0;
    double sq = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double diff = pts.coords[i][j] - x[i];
      lin = lin + p[i] * diff;
      sq = sq + diff * diff;
    }
    const double m = ((fy[j] - fx) - lin) + k * sq;
    if (m < best.value) best = {m, j};
  }
  return best;
}

}  // namespace

const KernelTable kTable{Isa::scalar,      distances,        max_descent_quotient,
                         max_abs_quotient, min_slope_margin, min_plr_margin};

}  // namespace plrkit::kernels::scalar
