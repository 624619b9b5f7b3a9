// Compiled with -mavx2 (no -mfma): every lane performs exactly the scalar
// reference's operations in the same order.

#include <immintrin.h>

#include <array>
#include <cmath>
#include <cstdint>

#include "plrkit/kernels.hpp"

namespace plrkit::kernels::avx2 {
namespace {

struct Lanes {
  alignas(32) std::array<double, 4> value;
  alignas(32) std::array<double, 4> aux;
  alignas(32) std::array<std::int64_t, 4> index;
};

inline __m256i lane_offsets() { return _mm256_setr_epi64x(0, 1, 2, 3); }

inline __m256d blend_index(__m256i current, __m256i candidate, __m256d mask) {
  return _mm256_blendv_pd(_mm256_castsi256_pd(current), _mm256_castsi256_pd(candidate), mask);
}

void distances(PointBlock pts, const double* q, double* out) {
  const std::size_t dim = pts.coords.size();
  const std::size_t n = pts.count;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < dim; ++k) {
      const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(pts.coords[k] + j), _mm256_set1_pd(q[k]));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
    }
    _mm256_storeu_pd(out + j, _mm256_sqrt_pd(acc));
  }
  for (; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double diff = pts.coords[k][j] - q[k];
      acc = acc + diff * diff;
    }
    out[j] = std::sqrt(acc);
  }
}

ArgBest max_descent_quotient(double fx, const double* fy, const double* d, std::size_t n) {
  const double ninf = -std::numeric_limits<double>::infinity();
  const double pinf = std::numeric_limits<double>::infinity();
  ArgBest best{ninf, npos};
  double best_d = pinf;
  std::size_t j = 0;
  if (n >= 4) {
    __m256d bv = _mm256_set1_pd(ninf);
    __m256d bd = _mm256_set1_pd(pinf);
    __m256i bi = _mm256_set1_epi64x(-1);
    __m256i idx = lane_offsets();
    const __m256i step = _mm256_set1_epi64x(4);
    const __m256d vfx = _mm256_set1_pd(fx);
    const __m256d zero = _mm256_setzero_pd();
    for (; j + 4 <= n; j += 4) {
      const __m256d dj = _mm256_loadu_pd(d + j);
      __m256d num = _mm256_sub_pd(vfx, _mm256_loadu_pd(fy + j));
      num = _mm256_blendv_pd(num, zero, _mm256_cmp_pd(num, zero, _CMP_LT_OQ));
      const __m256d q = _mm256_div_pd(num, dj);
      const __m256d gt = _mm256_cmp_pd(q, bv, _CMP_GT_OQ);
      const __m256d tie = _mm256_and_pd(_mm256_cmp_pd(q, bv, _CMP_EQ_OQ), _mm256_cmp_pd(dj, bd, _CMP_LT_OQ));
      const __m256d take = _mm256_or_pd(gt, tie);
      bv = _mm256_blendv_pd(bv, q, take);
      bd = _mm256_blendv_pd(bd, dj, take);
      bi = _mm256_castpd_si256(blend_index(bi, idx, take));
      idx = _mm256_add_epi64(idx, step);
    }
    Lanes lanes;
    _mm256_store_pd(lanes.value.data(), bv);
    _mm256_store_pd(lanes.aux.data(), bd);
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes.index.data()), bi);
    for (int l = 0; l < 4; ++l) {
      if (lanes.index[l] < 0) continue;
      const auto li = static_cast<std::size_t>(lanes.index[l]);
      const double v = lanes.value[l];
      const double ld = lanes.aux[l];
      const bool better = best.index == npos || v > best.value ||
                          (v == best.value && (ld < best_d || (ld == best_d && li < best.index)));
      if (better) {
        best = {v, li};
        best_d = ld;
      }
    }
  }
  for (; j < n; ++j) {
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
  std::size_t j = 0;
  if (n >= 4) {
    __m256d bv = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
    __m256i bi = _mm256_set1_epi64x(-1);
    __m256i idx = lane_offsets();
    const __m256i step = _mm256_set1_epi64x(4);
    const __m256d vfx = _mm256_set1_pd(fx);
    const __m256d sign = _mm256_set1_pd(-0.0);
    for (; j + 4 <= n; j += 4) {
      const __m256d diff = _mm256_sub_pd(vfx, _mm256_loadu_pd(fy + j));
      const __m256d q = _mm256_div_pd(_mm256_andnot_pd(sign, diff), _mm256_loadu_pd(d + j));
      const __m256d take = _mm256_cmp_pd(q, bv, _CMP_GT_OQ);
      bv = _mm256_blendv_pd(bv, q, take);
      bi = _mm256_castpd_si256(blend_index(bi, idx, take));
      idx = _mm256_add_epi64(idx, step);
    }
    Lanes lanes;
    _mm256_store_pd(lanes.value.data(), bv);
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes.index.data()), bi);
    for (int l = 0; l < 4; ++l) {
      if (lanes.index[l] < 0) continue;
      const auto li = static_cast<std::size_t>(lanes.index[l]);
      if (best.index == npos || lanes.value[l] > best.value ||
          (lanes.value[l] == best.value && li < best.index)) {
        best = {lanes.value[l], li};
      }
    }
  }
  for (; j < n; ++j) {
    const double q = std::fabs(fx - fy[j]) / d[j];
    if (q > best.value) best = {q, j};
  }
  return best;
}

ArgBest combine_min(const Lanes& lanes, ArgBest best) {
  for (int l = 0; l < 4; ++l) {
    if (lanes.index[l] < 0) continue;
    const auto li = static_cast<std::size_t>(lanes.index[l]);
    if (best.index == npos || lanes.value[l] < best.value ||
        (lanes.value[l] == best.value && li < best.index)) {
      best = {lanes.value[l], li};
    }
  }
  return best;
}

ArgBest min_slope_margin(double fx, const double* fy, const double* d, double s, double k,
                         std::size_t n) {
  ArgBest best{std::numeric_limits<double>::infinity(), npos};
  std::size_t j = 0;
  if (n >= 4) {
    __m256d bv = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    __m256i bi = _mm256_set1_epi64x(-1);
    __m256i idx = lane_offsets();
    const __m256i step = _mm256_set1_epi64x(4);
    const __m256d vfx = _mm256_set1_pd(fx);
    const __m256d vs = _mm256_set1_pd(s);
    const __m256d vk = _mm256_set1_pd(k);
    for (; j + 4 <= n; j += 4) {
      const __m256d dj = _mm256_loadu_pd(d + j);
      const __m256d head = _mm256_add_pd(_mm256_sub_pd(_mm256_loadu_pd(fy + j), vfx), _mm256_mul_pd(vs, dj));
      const __m256d m = _mm256_add_pd(head, _mm256_mul_pd(vk, _mm256_mul_pd(dj, dj)));
      const __m256d take = _mm256_cmp_pd(m, bv, _CMP_LT_OQ);
      bv = _mm256_blendv_pd(bv, m, take);
      bi = _mm256_castpd_si256(blend_index(bi, idx, take));
      idx = _mm256_add_epi64(idx, step);
    }
    Lanes lanes;
    _mm256_store_pd(lanes.value.data(), bv);
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes.index.data()), bi);
    best = combine_min(lanes, best);
  }
  for (; j < n; ++j) {
    const double m = ((fy[j] - fx) + s * d[j]) + k * (d[j] * d[j]);
    if (m < best.value) best = {m, j};
  }
  return best;
}

ArgBest min_plr_margin(PointBlock pts, const double* fy, const double* x, double fx, const double* p,
                       double k) {
  const std::size_t dim = pts.coords.size();
  const std::size_t n = pts.count;
  ArgBest best{std::numeric_limits<double>::infinity(), npos};
  std::size_t j = 0;
  if (n >= 4) {
    __m256d bv = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    __m256i bi = _mm256_set1_epi64x(-1);
    __m256i idx = lane_offsets();
    const __m256i step = _mm256_set1_epi64x(4);
    const __m256d vfx = _mm256_set1_pd(fx);
    const __m256d vk = _mm256_set1_pd(k);
    for (; j + 4 <= n; j += 4) {
      __m256d lin = _mm256_setzero_pd();
      __m256d sq = _mm256_setzero_pd();
      for (std::size_t i = 0; i < dim; ++i) {
        const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(pts.coords[i] + j), _mm256_set1_pd(x[i]));
        lin = _mm256_add_pd(lin, _mm256_mul_pd(_mm256_set1_pd(p[i]), diff));
        sq = _mm256_add_pd(sq, _mm256_mul_pd(diff, diff));
      }
      const __m256d head = _mm256_sub_pd(_mm256_sub_pd(_mm256_loadu_pd(fy + j), vfx), lin);
      const __m256d m = _mm256_add_pd(head, _mm256_mul_pd(vk, sq));
      const __m256d take = _mm256_cmp_pd(m, bv, _CMP_LT_OQ);
      bv = _mm256_blendv_pd(bv, m, take);
      bi = _mm256_castpd_si256(blend_index(bi, idx, take));
      idx = _mm256_add_epi64(idx, step);
    }
    Lanes lanes;
    _mm256_store_pd(lanes.value.data(), bv);
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes.index.data()), bi);
    best = combine_min(lanes, best);
  }
  for (; j < n; ++j) {
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

const KernelTable kTable{Isa::avx2,        distances,        max_descent_quotient,
                         max_abs_quotient, min_slope_margin, min_plr_margin};

}  // namespace plrkit::kernels::avx2
