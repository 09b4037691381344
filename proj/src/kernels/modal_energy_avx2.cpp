#include <immintrin.h>

#include "dissiplab/kernels/modal_energy.hpp"

namespace dissiplab::kernels {

// Four xi lanes per register. Operation order mirrors modal_energy_scalar.
void modal_energy_avx2(const ModalBatch& b, std::size_t n_t, double* out) {
  const std::size_t s = b.stride;
  const std::size_t full = b.lanes / 4 * 4;
  for (std::size_t l = 0; l < full; l += 4) {
    __m256d pr[16], pi[16], rr[4], ri[4], zr[4], zi[4];
    for (int m = 0; m < 16; ++m) {
      pr[m] = _mm256_loadu_pd(&b.p_re[m * s + l]);
      pi[m] = _mm256_loadu_pd(&b.p_im[m * s + l]);
    }
    for (int j = 0; j < 4; ++j) {
      rr[j] = _mm256_loadu_pd(&b.r_re[j * s + l]);
      ri[j] = _mm256_loadu_pd(&b.r_im[j * s + l]);
      zr[j] = _mm256_set1_pd(1.0);
      zi[j] = _mm256_setzero_pd();
    }
    for (std::size_t k = 0; k < n_t; ++k) {
      __m256d energy = _mm256_setzero_pd();
      for (int i = 0; i < 4; ++i) {
        __m256d ur = _mm256_setzero_pd();
        __m256d ui = _mm256_setzero_pd();
        for (int j = 0; j < 4; ++j) {
          const __m256d a = _mm256_sub_pd(_mm256_mul_pd(pr[4 * i + j], zr[j]), _mm256_mul_pd(pi[4 * i + j], zi[j]));
          const __m256d c = _mm256_add_pd(_mm256_mul_pd(pr[4 * i + j], zi[j]), _mm256_mul_pd(pi[4 * i + j], zr[j]));
          ur = _mm256_add_pd(ur, a);
          ui = _mm256_add_pd(ui, c);
        }
        energy = _mm256_add_pd(energy, _mm256_add_pd(_mm256_mul_pd(ur, ur), _mm256_mul_pd(ui, ui)));
      }
      _mm256_storeu_pd(out + k * s + l, energy);
      for (int j = 0; j < 4; ++j) {
        const __m256d nr = _mm256_sub_pd(_mm256_mul_pd(zr[j], rr[j]), _mm256_mul_pd(zi[j], ri[j]));
        const __m256d ni = _mm256_add_pd(_mm256_mul_pd(zr[j], ri[j]), _mm256_mul_pd(zi[j], rr[j]));
        zr[j] = nr;
        zi[j] = ni;
      }
    }
  }

  if (full < b.lanes) {
    // tail lanes through the scalar reference on a shifted view
    ModalBatch tail(b.lanes - full);
    const std::size_t ts = tail.stride;
    for (std::size_t l = full; l < b.lanes; ++l) {
      for (int m = 0; m < 16; ++m) {
        tail.p_re[m * ts + (l - full)] = b.p_re[m * s + l];
        tail.p_im[m * ts + (l - full)] = b.p_im[m * s + l];
      }
      for (int j = 0; j < 4; ++j) {
        tail.r_re[j * ts + (l - full)] = b.r_re[j * s + l];
        tail.r_im[j * ts + (l - full)] = b.r_im[j * s + l];
      }
    }
    std::vector<double> buf(n_t * ts);
    modal_energy_scalar(tail, n_t, buf.data());
    for (std::size_t k = 0; k < n_t; ++k)
      for (std::size_t l = full; l < b.lanes; ++l) out[k * s + l] = buf[k * ts + (l - full)];
  }
}

}  // namespace dissiplab::kernels
