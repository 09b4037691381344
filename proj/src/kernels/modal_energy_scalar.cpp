#include "dissiplab/kernels/modal_energy.hpp"

namespace dissiplab::kernels {

ModalBatch::ModalBatch(std::size_t n_lanes) { resize(n_lanes); }

void ModalBatch::resize(std::size_t n_lanes) {
  lanes = n_lanes;
  stride = (n_lanes + 3) / 4 * 4;
  p_re.assign(16 * stride, 0.0);
  p_im.assign(16 * stride, 0.0);
  r_re.assign(4 * stride, 0.0);
  r_im.assign(4 * stride, 0.0);
}

void modal_energy_scalar(const ModalBatch& b, std::size_t n_t, double* out) {
  const std::size_t s = b.stride;
  for (std::size_t l = 0; l < b.lanes; ++l) {
    double zr[4] = {1.0, 1.0, 1.0, 1.0};
    double zi[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < n_t; ++k) {
      double energy = 0.0;
      for (int i = 0; i < 4; ++i) {
        double ur = 0.0;
        double ui = 0.0;
        for (int j = 0; j < 4; ++j) {
          const double pr = b.p_re[(4 * i + j) * s + l];
          const double pi = b.p_im[(4 * i + j) * s + l];
          ur = ur + (pr * zr[j] - pi * zi[j]);
          ui = ui + (pr * zi[j] + pi * zr[j]);
        }
        energy = energy + (ur * ur + ui * ui);
      }
      out[k * s + l] = energy;
      for (int j = 0; j < 4; ++j) {
        const double rr = b.r_re[j * s + l];
        const double ri = b.r_im[j * s + l];
        const double nr = zr[j] * rr - zi[j] * ri;
        const double ni = zr[j] * ri + zi[j] * rr;
        zr[j] = nr;
        zi[j] = ni;
      }
    }
  }
}

}  // namespace dissiplab::kernels
