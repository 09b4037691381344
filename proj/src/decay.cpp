#include "dissiplab/decay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "dissiplab/csv.hpp"
#include "dissiplab/dispersion.hpp"
#include "dissiplab/errors.hpp"
#include "dissiplab/kernels/modal_energy.hpp"
#include "dissiplab/parallel.hpp"

namespace dissiplab {

namespace {

constexpr double kTailTol = 1e-12;
constexpr double kRefinementTol = 1e-6;
constexpr std::size_t kChunk = 64;
constexpr int kMaxLyapunovHalvings = 40;

using CMat4Col = Eigen::Matrix<Complex, 4, 4>;
using HermitianSolver = Eigen::SelfAdjointEigenSolver<CMat4Col>;

double quad_form(const Mat4& a, const CVec4& u) {
  Complex s = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s += std::conj(u(i)) * a(i, j) * u(j);
  return s.real();
}

double min_hermitian_eig(const CMat4Col& h) {
  HermitianSolver solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

double max_hermitian_eig(const CMat4Col& h) {
  HermitianSolver solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(3);
}

// i K A0h: Hermitian when K A0h is skew.
CMat4Col weight_matrix(const SymmetricSystem& ss, const Mat4& K) {
  const Mat4 ka = K * ss.A0h;
  CMat4Col w;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) w(i, j) = Complex(0.0, 0.5 * (ka(i, j) - ka(j, i)));
  return w;
}

// H with dM/dt = -<U, H U>.
CMat4Col dissipation_matrix(const SymmetricSystem& ss, const Mat4& K, double xi, double delta) {
  const double s = delta * xi / (1.0 + xi * xi);
  const Mat4 n = ss.L + xi * xi * ss.Bh;
  const Mat4 ka1 = sym_part(K * ss.A1h);
  const Mat4 comm = K * n - n * K.transpose();
  CMat4Col h;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      h(i, j) = Complex(2.0 * n(i, j) + 2.0 * s * xi * ka1(i, j), -s * 0.5 * (comm(i, j) - comm(j, i)));
  return h;
}

CMat4Col m_form(const SymmetricSystem& ss, const CMat4Col& w, double s) {
  CMat4Col m = -s * w;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) += ss.A0h(i, j);
  return m;
}

std::vector<double> simpson_weights(std::size_t n, double h) {
  std::vector<double> w(n + 1);
  for (std::size_t m = 0; m <= n; ++m) {
    const double c = (m == 0 || m == n) ? 1.0 : (m % 2 == 1 ? 4.0 : 2.0);
    w[m] = c * h / 3.0;
  }
  return w;
}

// Per-chunk sums for every l and t: norm^2 integrands and envelope integrands.
struct ChunkSums {
  std::vector<double> norm;      // [l][t] flattened
  std::vector<double> envelope;  // [l][t] flattened
  std::size_t fallback = 0;
};

void add_into(ChunkSums& a, const ChunkSums& b) {
  for (std::size_t i = 0; i < a.norm.size(); ++i) a.norm[i] += b.norm[i];
  for (std::size_t i = 0; i < a.envelope.size(); ++i) a.envelope[i] += b.envelope[i];
  a.fallback += b.fallback;
}

// Pairwise reduction over chunks in a fixed tree.
ChunkSums reduce_pairwise(std::vector<ChunkSums>& parts, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return parts[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  ChunkSums left = reduce_pairwise(parts, lo, mid);
  const ChunkSums right = reduce_pairwise(parts, mid, hi);
  add_into(left, right);
  return left;
}

struct Integrals {
  std::vector<std::vector<double>> norm_sq;
  std::vector<std::vector<double>> envelope_sq;
  std::size_t fallback = 0;
};

Integrals integrate(const SymmetricSystem& ss, const InitialData& data, const std::vector<int>& l_list,
                    double xi_cut, std::size_t n_xi, double dt, std::size_t n_t, double k_sharp) {
  const double h = xi_cut / static_cast<double>(n_xi);
  const std::vector<double> weights = simpson_weights(n_xi, h);
  const std::size_t nodes = n_xi + 1;
  const std::size_t n_chunks = (nodes + kChunk - 1) / kChunk;
  const std::size_t nl = l_list.size();
  std::vector<ChunkSums> parts(n_chunks);

  parallel_for(n_chunks, [&](std::size_t c) {
    const std::size_t first = c * kChunk;
    const std::size_t lanes = std::min(kChunk, nodes - first);
    kernels::ModalBatch batch(lanes);
    const std::size_t s = batch.stride;
    std::vector<double> energy(n_t * s, 0.0);
    std::vector<std::size_t> fallback_lanes;
    std::vector<std::vector<double>> fallback_energy;

    for (std::size_t l = 0; l < lanes; ++l) {
      const double xi = static_cast<double>(first + l) * h;
      const ModePropagator prop(ss, xi);
      const CVec4 u0 = data.transform(xi);
      if (prop.diagonalized()) {
        const CVec4 coef = prop.eigenvectors_inverse() * u0;
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) {
            const Complex p = prop.eigenvectors()(i, j) * coef(j);
            batch.p_re[(4 * i + j) * s + l] = p.real();
            batch.p_im[(4 * i + j) * s + l] = p.imag();
          }
        for (int j = 0; j < 4; ++j) {
          const Complex r = std::exp(prop.eigenvalues()[j] * dt);
          batch.r_re[j * s + l] = r.real();
          batch.r_im[j * s + l] = r.imag();
        }
      } else {
        const CMat4 step = prop.matrix(dt);
        std::vector<double> e(n_t);
        CVec4 u = u0;
        for (std::size_t k = 0; k < n_t; ++k) {
          e[k] = u.squaredNorm();
          u = step * u;
        }
        fallback_lanes.push_back(l);
        fallback_energy.push_back(std::move(e));
      }
    }
    kernels::modal_energy(batch, n_t, energy.data());
    for (std::size_t f = 0; f < fallback_lanes.size(); ++f)
      for (std::size_t k = 0; k < n_t; ++k) energy[k * s + fallback_lanes[f]] = fallback_energy[f][k];

    ChunkSums& out = parts[c];
    out.norm.assign(nl * n_t, 0.0);
    out.envelope.assign(nl * n_t, 0.0);
    out.fallback = fallback_lanes.size();
    for (std::size_t l = 0; l < lanes; ++l) {
      const std::size_t m = first + l;
      const double xi = static_cast<double>(m) * h;
      const double g0 = data.transform(xi).squaredNorm();
      const double rate = 2.0 * k_sharp * xi * xi / (1.0 + xi * xi);
      for (std::size_t li = 0; li < nl; ++li) {
        const double wl = weights[m] * std::pow(xi, 2 * l_list[li]);
        for (std::size_t k = 0; k < n_t; ++k) {
          const double t = static_cast<double>(k) * dt;
          out.norm[li * n_t + k] += wl * energy[k * s + l];
          out.envelope[li * n_t + k] += wl * g0 * std::exp(-rate * t);
        }
      }
    }
  });

  const ChunkSums total = reduce_pairwise(parts, 0, n_chunks);
  Integrals r;
  r.fallback = total.fallback;
  r.norm_sq.assign(nl, std::vector<double>(n_t));
  r.envelope_sq.assign(nl, std::vector<double>(n_t));
  for (std::size_t li = 0; li < nl; ++li)
    for (std::size_t k = 0; k < n_t; ++k) {
      r.norm_sq[li][k] = 2.0 * total.norm[li * n_t + k];
      r.envelope_sq[li][k] = 2.0 * total.envelope[li * n_t + k];
    }
  return r;
}

}  // namespace

InitialData InitialData::gaussian(const Vec4& v0, double width) {
  if (!(width > 0.0)) throw DomainError("Gaussian width must be positive");
  if (!v0.allFinite()) throw DomainError("amplitude must be finite");
  InitialData d;
  d.v0 = v0;
  d.width = width;
  return d;
}

CVec4 InitialData::transform(double xi) const {
  const double g = width * std::exp(-0.5 * width * width * xi * xi);
  return (v0 * g).cast<Complex>();
}

double InitialData::moment(int l) const {
  if (l < 0) throw DomainError("derivative order must be non-negative");
  return v0.squaredNorm() * std::tgamma(l + 0.5) * std::pow(width, 1 - 2 * l);
}

double InitialData::norm(int l) const { return std::sqrt(moment(l)); }

double InitialData::l1_norm() const { return v0.norm() * width * std::sqrt(2.0 * M_PI); }

double InitialData::tail_fraction(int l, double xi_cut) const {
  if (l < 0) throw DomainError("derivative order must be non-negative");
  // regularized upper incomplete gamma Q(l + 1/2, x), x = w^2 xi_cut^2
  const double x = width * width * xi_cut * xi_cut;
  double q = std::erfc(std::sqrt(x));
  for (int k = 0; k < l; ++k) {
    const double a = k + 0.5;
    q += std::exp(a * std::log(x) - x - std::lgamma(a + 1.0));
  }
  return q;
}

ModePropagator::ModePropagator(const SymmetricSystem& ss, double xi) : xi_(xi), generator_(fourier_generator(ss, xi)) {
  const CMat4Col g = generator_;
  Eigen::ComplexEigenSolver<CMat4Col> solver(g, true);
  if (solver.info() == Eigen::Success) {
    v_ = solver.eigenvectors();
    for (int j = 0; j < 4; ++j) lambda_[j] = solver.eigenvalues()(j);
    condition_ = condition_number(v_);
    if (std::isfinite(condition_) && condition_ <= kMaxEigenbasisCondition) {
      v_inv_ = CMat4Col(v_).fullPivLu().inverse();
      diagonalized_ = v_inv_.allFinite();
    }
  } else {
    condition_ = std::numeric_limits<double>::infinity();
  }
}

CMat4 ModePropagator::matrix(double t) const {
  if (t == 0.0) return CMat4::Identity();
  if (!diagonalized_) return expm(generator_ * Complex(t, 0.0));
  CMat4 scaled = v_;
  for (int j = 0; j < 4; ++j) scaled.col(j) *= std::exp(lambda_[j] * t);
  return scaled * v_inv_;
}

CVec4 ModePropagator::apply(const CVec4& u0, double t) const {
  if (t < 0.0) throw DomainError("t must be non-negative");
  if (t == 0.0) return u0;
  if (!diagonalized_) return expm(generator_ * Complex(t, 0.0)) * u0;
  CVec4 coef = v_inv_ * u0;
  for (int j = 0; j < 4; ++j) coef(j) *= std::exp(lambda_[j] * t);
  return v_ * coef;
}

CVec4 evolve_mode(const SymmetricSystem& ss, double xi, const CVec4& u0hat, double t) {
  if (t < 0.0) throw DomainError("t must be non-negative");
  if (t == 0.0) return u0hat;
  return ModePropagator(ss, xi).apply(u0hat, t);
}

ModeTrajectory sample_trajectory(const SymmetricSystem& ss, double xi, const CVec4& u0hat, double dt,
                                 std::size_t n_steps) {
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  const ModePropagator prop(ss, xi);
  ModeTrajectory traj;
  traj.xi = xi;
  traj.dt = dt;
  traj.samples.resize(n_steps + 1);
  for (std::size_t k = 0; k <= n_steps; ++k) traj.samples[k] = prop.apply(u0hat, static_cast<double>(k) * dt);
  return traj;
}

double energy_balance_residual(const SymmetricSystem& ss, const ModeTrajectory& traj) {
  const auto& u = traj.samples;
  if (u.size() < 3) throw DomainError("energy balance needs at least three samples");
  const double xi2 = traj.xi * traj.xi;
  std::vector<double> e(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) e[k] = 0.5 * quad_form(ss.A0h, u[k]);
  if (!(e[0] > 0.0)) throw DomainError("initial energy must be positive");
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < u.size(); ++k) {
    const double rate = (e[k + 1] - e[k - 1]) / (2.0 * traj.dt);
    const double dissipation = quad_form(ss.L, u[k]) + xi2 * quad_form(ss.Bh, u[k]);
    worst = std::max(worst, std::abs(rate + dissipation));
  }
  return worst / e[0];
}

Complex lyapunov_functional(const SymmetricSystem& ss, const Mat4& K, double xi, double delta, const CVec4& u) {
  const double s = delta * xi / (1.0 + xi * xi);
  const Mat4 ka = K * ss.A0h;
  Complex energy = 0.0;
  Complex cross = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      energy += std::conj(u(i)) * ss.A0h(i, j) * u(j);
      cross += std::conj(u(i)) * Complex(0.0, ka(i, j)) * u(j);
    }
  return energy - s * cross;
}

LyapunovParameters auto_lyapunov_delta(const SymmetricSystem& ss, const CompensatingMatrix& K) {
  const std::vector<double> grid = make_grid(1e-3, 1e3, 400, Spacing::Log);
  const CMat4Col w = weight_matrix(ss, K.K);
  LyapunovParameters p;
  p.gamma = min_eigenvalue(sym_part(K.K * ss.A1h) + ss.Bh + ss.L);

  double delta = 1.0;
  for (int h = 0; h < kMaxLyapunovHalvings; ++h, delta *= 0.5) {
    bool ok = true;
    for (double xi : grid) {
      const double s = delta * xi / (1.0 + xi * xi);
      const CMat4Col hm = dissipation_matrix(ss, K.K, xi, delta);
      if (min_hermitian_eig(hm) < -1e-14 * hm.cwiseAbs().maxCoeff() || !(min_hermitian_eig(m_form(ss, w, s)) > 0.0)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    p.delta = delta;
    p.halvings = h;
    double c1 = 0.0;
    for (double sign : {-1.0, 1.0}) {
      const CMat4Col m = m_form(ss, w, sign * 0.5 * delta);
      c1 = std::max({c1, max_hermitian_eig(m), 1.0 / min_hermitian_eig(m)});
    }
    p.C1 = c1;
    p.k_theory = 0.5 * delta * p.gamma / c1;
    return p;
  }
  throw DeltaRangeError("no Lyapunov weight delta in 40 halvings gives a positive, dissipated M");
}

LyapunovResult lyapunov_check(const SymmetricSystem& ss, const Mat4& K, double xi, double delta,
                              const ModeTrajectory& traj) {
  if (traj.samples.empty()) throw DomainError("empty trajectory");
  if (delta < 0.0) throw DomainError("delta must be non-negative");
  LyapunovResult r;
  std::vector<Complex> m(traj.samples.size());
  double d = delta;
  bool found = false;
  for (int h = 0; h <= kMaxLyapunovHalvings; ++h, d *= 0.5) {
    bool positive = true;
    for (std::size_t k = 0; k < m.size(); ++k) {
      m[k] = lyapunov_functional(ss, K, xi, d, traj.samples[k]);
      if (!(m[k].real() > 0.0)) positive = false;
    }
    if (positive) {
      r.delta = d;
      r.halvings = h;
      found = true;
      break;
    }
  }
  if (!found) throw DeltaRangeError("M is not positive along the trajectory for any halved delta");

  const double scale = m[0].real();
  r.positive = true;
  r.min_value_rel = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < m.size(); ++k) {
    r.max_imag_rel = std::max(r.max_imag_rel, std::abs(m[k].imag()) / scale);
    r.min_value_rel = std::min(r.min_value_rel, m[k].real() / scale);
    if (k > 0) r.max_increase_rel = std::max(r.max_increase_rel, (m[k].real() - m[k - 1].real()) / scale);
  }
  r.real = r.max_imag_rel <= kLyapunovTol;
  r.non_increasing = r.max_increase_rel <= kLyapunovTol;
  r.passed = r.real && r.positive && r.non_increasing;
  return r;
}

PointwiseBoundCheck check_pointwise_bound(const SymmetricSystem& ss, double k, const std::vector<double>& xi_grid,
                                          const std::vector<double>& t_grid) {
  PointwiseBoundCheck r;
  const auto eigs = jacobi_eigenvalues(ss.A0h);
  r.C1 = std::sqrt(eigs[3] / eigs[0]);
  Vec4 half;
  for (int i = 0; i < 4; ++i) half(i) = std::sqrt(ss.A0h(i, i));
  std::vector<double> worst(xi_grid.size(), 0.0);
  std::vector<std::size_t> bad(xi_grid.size(), 0);
  parallel_for(xi_grid.size(), [&](std::size_t a) {
    const double xi = xi_grid[a];
    const ModePropagator prop(ss, xi);
    for (double t : t_grid) {
      CMat4Col weighted = prop.matrix(t);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) weighted(i, j) *= half(i) / half(j);
      const double norm = Eigen::JacobiSVD<CMat4Col>(weighted).singularValues()(0);
      const double ratio = norm / (r.C1 * std::exp(-k * xi * xi * t / (1.0 + xi * xi)));
      worst[a] = std::max(worst[a], ratio);
      if (ratio > 1.0 + 1e-12) ++bad[a];
    }
  });
  r.points = xi_grid.size() * t_grid.size();
  for (std::size_t a = 0; a < xi_grid.size(); ++a) {
    r.worst_ratio = std::max(r.worst_ratio, worst[a]);
    r.violations += bad[a];
  }
  return r;
}

double fit_log_slope(const std::vector<double>& t, const std::vector<double>& y, double t_min) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_min) continue;
    if (!(y[i] > 0.0)) throw DomainError("log fit needs positive values");
    const double x = std::log1p(t[i]);
    const double v = std::log(y[i]);
    sx += x;
    sy += v;
    sxx += x * x;
    sxy += x * v;
    ++n;
  }
  if (n < 2) throw DomainError("log fit needs at least two points in the window");
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

DecayTrace decay_trace(const SymmetricSystem& ss, const CompensatingMatrix& K, const InitialData& data,
                       double t_max, const QuadratureSpec& quadrature, const DecayOptions& options) {
  if (!(t_max > 0.0)) throw DomainError("t_max must be positive");
  if (options.n_t < 2) throw DomainError("n_t must be at least 2");
  if (quadrature.n_xi < 2 || quadrature.n_xi % 2 != 0) throw QuadratureError("n_xi must be even and >= 2");
  if (options.l_list.empty()) throw DomainError("l_list is empty");

  DecayTrace tr;
  tr.l_list = options.l_list;
  tr.xi_cut = quadrature.xi_cut.value_or(8.0 / data.width);
  if (!(tr.xi_cut > 0.0)) throw QuadratureError("xi_cut must be positive");
  tr.n_xi = quadrature.n_xi;
  for (int l : tr.l_list) {
    const double tail = data.tail_fraction(l, tr.xi_cut);
    if (tail > kTailTol)
      throw QuadratureError("Gaussian tail beyond xi_cut is " + format_double(tail) + " of the l = " +
                            std::to_string(l) + " moment");
  }
  tr.k_sharp = options.k_sharp ? *options.k_sharp : scan(ss, 1e-3, 1e3, 200).k_sharp;

  const std::size_t n_t = options.n_t;
  const double dt = t_max / static_cast<double>(n_t - 1);
  tr.t_grid.resize(n_t);
  for (std::size_t k = 0; k < n_t; ++k) tr.t_grid[k] = static_cast<double>(k) * dt;

  const Integrals base = integrate(ss, data, tr.l_list, tr.xi_cut, tr.n_xi, dt, n_t, tr.k_sharp);
  tr.fallback_modes = base.fallback;
  if (options.refinement_check) {
    const Integrals fine = integrate(ss, data, tr.l_list, tr.xi_cut, 2 * tr.n_xi, dt, n_t, tr.k_sharp);
    for (std::size_t li = 0; li < tr.l_list.size(); ++li)
      for (std::size_t k = 0; k < n_t; ++k) {
        const double a = std::sqrt(base.norm_sq[li][k]);
        const double b = std::sqrt(fine.norm_sq[li][k]);
        tr.refinement_change = std::max(tr.refinement_change, std::abs(a - b) / b);
      }
    if (tr.refinement_change > kRefinementTol)
      throw QuadratureError("doubling n_xi changed a norm by " + format_double(tr.refinement_change));
  }

  const auto a0_eigs = jacobi_eigenvalues(ss.A0h);
  tr.envelope_constant = a0_eigs[3] / a0_eigs[0];
  tr.fit_t_min = t_max / 10.0;
  for (std::size_t li = 0; li < tr.l_list.size(); ++li) {
    std::vector<double> norm(n_t), env(n_t);
    for (std::size_t k = 0; k < n_t; ++k) {
      norm[k] = std::sqrt(base.norm_sq[li][k]);
      env[k] = tr.envelope_constant * std::sqrt(base.envelope_sq[li][k]);
      if (norm[k] > env[k] * (1.0 + 1e-12)) ++tr.envelope_violations;
    }
    tr.fitted_slopes.push_back(fit_log_slope(tr.t_grid, norm, tr.fit_t_min));
    tr.norms.push_back(std::move(norm));
    tr.envelopes.push_back(std::move(env));
  }

  // Fourier energy identity and Lyapunov functional on sample modes.
  const CVec4 direction = (data.v0 / data.v0.norm()).cast<Complex>();
  for (double xi : options.energy_check_xi) {
    const ModeTrajectory traj = sample_trajectory(ss, xi, direction, 1e-3, 10000);
    tr.energy_residual = std::max(tr.energy_residual, energy_balance_residual(ss, traj));
  }

  tr.lyapunov = auto_lyapunov_delta(ss, K);
  std::vector<CVec4> starts;
  for (int i = 0; i < 4; ++i) starts.push_back(CVec4::Unit(i));
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  for (int i = 0; i < 4; ++i) {
    CVec4 v;
    for (int j = 0; j < 4; ++j) v(j) = Complex(normal(rng), normal(rng));
    starts.push_back(v / v.norm());
  }
  tr.M_monotone = true;
  for (double xi : options.lyapunov_check_xi)
    for (const CVec4& u0 : starts) {
      const ModeTrajectory traj = sample_trajectory(ss, xi, u0, 0.01, 2000);
      const LyapunovResult lr = lyapunov_check(ss, K.K, xi, tr.lyapunov.delta, traj);
      if (!lr.passed || lr.halvings != 0) tr.M_monotone = false;
    }
  return tr;
}

void write_csv(const DecayTrace& trace, std::ostream& out) {
  std::vector<std::string> header = {"t"};
  for (int l : trace.l_list) header.push_back("norm_l" + std::to_string(l));
  for (int l : trace.l_list) header.push_back("envelope_l" + std::to_string(l));
  CsvWriter w(out, header);
  for (std::size_t k = 0; k < trace.t_grid.size(); ++k) {
    std::vector<double> row = {trace.t_grid[k]};
    for (const auto& n : trace.norms) row.push_back(n[k]);
    for (const auto& e : trace.envelopes) row.push_back(e[k]);
    w.row(row);
  }
}

}  // namespace dissiplab
