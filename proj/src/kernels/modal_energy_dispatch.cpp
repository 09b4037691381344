#include <cstdlib>
#include <cstring>

#include "dissiplab/kernels/modal_energy.hpp"

namespace dissiplab::kernels {

#ifndef DISSIPLAB_HAVE_AVX2
void modal_energy_avx2(const ModalBatch& batch, std::size_t n_t, double* out) {
  modal_energy_scalar(batch, n_t, out);
}
#endif

const char* to_string(SimdLevel level) { return level == SimdLevel::Avx2 ? "avx2" : "scalar"; }

bool avx2_available() {
#if defined(DISSIPLAB_HAVE_AVX2)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

SimdLevel active_simd_level() {
  const char* env = std::getenv("DISSIPLAB_SIMD");
  if (env && std::strcmp(env, "scalar") == 0) return SimdLevel::Scalar;
  return avx2_available() ? SimdLevel::Avx2 : SimdLevel::Scalar;
}

void modal_energy(const ModalBatch& batch, std::size_t n_t, double* out) {
  if (active_simd_level() == SimdLevel::Avx2)
    modal_energy_avx2(batch, n_t, out);
  else
    modal_energy_scalar(batch, n_t, out);
}

}  // namespace dissiplab::kernels
