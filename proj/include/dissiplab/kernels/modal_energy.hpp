#pragma once

#include <cstddef>
#include <vector>

namespace dissiplab::kernels {

/// Structure-of-arrays batch of Fourier modes. For lane l (one xi node):
///   U_i(t_k) = sum_j P_ij z_j(k),  z_j(k) = r_j^k,
/// with P_ij = V_ij c_j from the eigendecomposition and r_j = exp(lambda_j dt).
/// Entry (i, j) of P for lane l lives at p_re[(4 i + j) * stride + l]; entry j
/// of r at r_re[j * stride + l]. stride >= lanes.
struct ModalBatch {
  std::size_t lanes = 0;
  std::size_t stride = 0;
  std::vector<double> p_re;
  std::vector<double> p_im;
  std::vector<double> r_re;
  std::vector<double> r_im;

  explicit ModalBatch(std::size_t n_lanes = 0);
  void resize(std::size_t n_lanes);
};

/// out[k * stride + l] = |U(t_k)|^2 for k in [0, n_t). Only mul/add/sub are
/// used, in the same order on every path, so all variants agree bitwise.
void modal_energy_scalar(const ModalBatch& batch, std::size_t n_t, double* out);
void modal_energy_avx2(const ModalBatch& batch, std::size_t n_t, double* out);

enum class SimdLevel { Scalar, Avx2 };

const char* to_string(SimdLevel level);

/// Best level supported by the build and the CPU; DISSIPLAB_SIMD=scalar
/// forces the scalar path.
SimdLevel active_simd_level();
bool avx2_available();

void modal_energy(const ModalBatch& batch, std::size_t n_t, double* out);

}  // namespace dissiplab::kernels
