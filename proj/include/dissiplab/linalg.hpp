#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>

namespace dissiplab {

using Complex = std::complex<double>;
using Mat4 = Eigen::Matrix<double, 4, 4, Eigen::RowMajor>;
using Vec4 = Eigen::Matrix<double, 4, 1>;
using CMat4 = Eigen::Matrix<Complex, 4, 4, Eigen::RowMajor>;
using CVec4 = Eigen::Matrix<Complex, 4, 1>;

/// Eigenvalues of a real symmetric 4x4 matrix, ascending, by cyclic Jacobi
/// rotations. Small eigenvalues of positive definite matrices come out with
/// high relative accuracy, which QR-based solvers do not guarantee.
std::array<double, 4> jacobi_eigenvalues(const Mat4& a);

/// Same, also returning orthonormal eigenvectors as columns of `vectors`
/// (column i belongs to eigenvalue i).
std::array<double, 4> jacobi_eigen(const Mat4& a, Mat4& vectors);

inline double min_eigenvalue(const Mat4& a) { return jacobi_eigenvalues(a)[0]; }

/// Smallest eigenvalue of D^{-1/2} A D^{-1/2} with D = diag(A). Returns 0 when a
/// diagonal entry is not positive (A cannot be positive definite then).
double scaled_min_eigenvalue(const Mat4& a);

/// max_ij |a_ij - a_ji|
double symmetry_residual(const Mat4& a);

/// max_ij |a_ij + a_ji|
double skew_residual(const Mat4& a);

inline Mat4 sym_part(const Mat4& a) { return 0.5 * (a + a.transpose()); }

/// Matrix exponential by scaling and squaring with a Taylor series.
CMat4 expm(const CMat4& a);

/// 2-norm condition number (ratio of extreme singular values).
double condition_number(const CMat4& a);

}  // namespace dissiplab
