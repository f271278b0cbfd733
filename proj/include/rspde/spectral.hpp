#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "rspde/errors.hpp"
#include "rspde/grid.hpp"

namespace rspde {

// Eigenpairs of n^2 A: lambda_j = -j^2 pi^2 c_j with shape factor
// c_j = sin^2(j pi / 2n) / (j pi / 2n)^2, and eigenvectors
// e_j(k) = sqrt(2/n) sin(j k pi / n), j = 1..n-1. The sine matrix
// S[j][k] = e_j(k) is symmetric and involutory (S S = I), so the semigroup
// exp(n^2 A t) acts as S diag(exp(lambda_j t)) S.
class SpectralBasis {
 public:
  explicit SpectralBasis(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  int modes() const { return grid_.interior_count(); }

  // 1-based mode index j = 1..n-1.
  double eigenvalue(int j) const;
  double shape_factor(int j) const;
  std::vector<double> eigenvector(int j) const;
  std::pair<double, std::vector<double>> eigenpair(int j) const;

  // Sine-transform coordinates: coeffs[j-1] = <v, e_j>. Involutory, so the
  // same routine maps coefficients back to node values.
  void transform(std::span<const double> v, std::span<double> coeffs) const;

  // out = exp(n^2 A t) e. Requires t >= 0.
  void semigroup_apply(double t, std::span<const double> e, std::span<double> out) const;
  std::vector<double> semigroup_apply(double t, std::span<const double> e) const;

  // Piecewise-linear lift of phi_j sampled at the nodes (phi_j^n).
  double phi_lift(int j, double x) const;

 private:
  GridSpec grid_;
  std::vector<double> eigenvalues_;    // lambda_j, j = 1..n-1
  std::vector<double> shape_factors_;  // c_j
  std::vector<double> sine_;           // (n-1)^2 matrix S, row-major
};

// phi_j(x) = sqrt(2) sin(j pi x), the continuum Dirichlet eigenfunctions.
inline double phi(int j, double x) { return std::sqrt(2.0) * std::sin(j * M_PI * x); }

// Truncation rule for the infinite heat-kernel series: keep K terms with
// exp(-K^2 pi^2 t) below tolerance, plus a fixed safety margin.
struct KernelTruncation {
  double tolerance = 1e-10;

  int max_terms(double t) const {
    if (t <= 0.0) throw DomainError("KernelTruncation: t must be > 0");
    const double k = std::sqrt(std::log(1.0 / tolerance) / (M_PI * M_PI * t));
    return static_cast<int>(std::ceil(k)) + 5;
  }
};

// G^n(t,x,y) = sum_j exp(lambda_j t) phi_j^n(x) phi_j(k_n(y)), t > 0.
double discrete_kernel(const SpectralBasis& basis, double t, double x, double y);

// Dirichlet heat kernel G(t,x,y) = sum_k exp(-k^2 pi^2 t) phi_k(x) phi_k(y),
// truncated per trunc. t > 0 (the series diverges pointwise at t = 0).
double continuum_kernel(double t, double x, double y, const KernelTruncation& trunc = {});

}  // namespace rspde
