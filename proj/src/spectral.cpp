#include "rspde/spectral.hpp"

#include <algorithm>

namespace rspde {

SpectralBasis::SpectralBasis(const GridSpec& grid) : grid_(grid) {
  const int m = grid_.interior_count();
  const int n = grid_.n;
  eigenvalues_.resize(m);
  shape_factors_.resize(m);
  for (int j = 1; j <= m; ++j) {
    const double half_angle = j * M_PI / (2.0 * n);
    const double s = std::sin(half_angle);
    shape_factors_[j - 1] = (s * s) / (half_angle * half_angle);
    eigenvalues_[j - 1] = -4.0 * static_cast<double>(n) * n * s * s;
  }
  sine_.resize(static_cast<size_t>(m) * m);
  const double scale = std::sqrt(2.0 / n);
  for (int j = 1; j <= m; ++j)
    for (int k = 1; k <= m; ++k)
      sine_[static_cast<size_t>(j - 1) * m + (k - 1)] = scale * std::sin(j * k * M_PI / n);
}

double SpectralBasis::eigenvalue(int j) const {
  if (j < 1 || j > modes()) throw IndexError("SpectralBasis: mode index out of range");
  return eigenvalues_[j - 1];
}

double SpectralBasis::shape_factor(int j) const {
  if (j < 1 || j > modes()) throw IndexError("SpectralBasis: mode index out of range");
  return shape_factors_[j - 1];
}

std::vector<double> SpectralBasis::eigenvector(int j) const {
  if (j < 1 || j > modes()) throw IndexError("SpectralBasis: mode index out of range");
  const int m = modes();
  return {sine_.begin() + static_cast<size_t>(j - 1) * m, sine_.begin() + static_cast<size_t>(j) * m};
}

std::pair<double, std::vector<double>> SpectralBasis::eigenpair(int j) const {
  return {eigenvalue(j), eigenvector(j)};
}

void SpectralBasis::transform(std::span<const double> v, std::span<double> coeffs) const {
  const int m = modes();
  if (static_cast<int>(v.size()) != m || static_cast<int>(coeffs.size()) != m)
    throw DimensionError("SpectralBasis: vector length != n-1");
  for (int j = 0; j < m; ++j) {
    const double* row = sine_.data() + static_cast<size_t>(j) * m;
    double acc = 0.0;
    for (int k = 0; k < m; ++k) acc += row[k] * v[k];
    coeffs[j] = acc;
  }
}

void SpectralBasis::semigroup_apply(double t, std::span<const double> e, std::span<double> out) const {
  if (t < 0.0) throw DomainError("semigroup_apply: t must be >= 0");
  const int m = modes();
  if (static_cast<int>(e.size()) != m || static_cast<int>(out.size()) != m)
    throw DimensionError("semigroup_apply: vector length != n-1");
  std::vector<double> coeffs(m);
  transform(e, coeffs);
  for (int j = 0; j < m; ++j) coeffs[j] *= std::exp(eigenvalues_[j] * t);
  transform(coeffs, out);
}

std::vector<double> SpectralBasis::semigroup_apply(double t, std::span<const double> e) const {
  std::vector<double> out(modes());
  semigroup_apply(t, e, out);
  return out;
}

double SpectralBasis::phi_lift(int j, double x) const {
  if (j < 1 || j > modes()) throw IndexError("SpectralBasis: mode index out of range");
  if (x < 0.0 || x > 1.0) throw DomainError("phi_lift: x outside [0,1]");
  const int n = grid_.n;
  const int m = modes();
  int k = static_cast<int>(std::floor(n * x));
  if (k >= n) return 0.0;
  const double root_n = std::sqrt(static_cast<double>(n));
  const double* row = sine_.data() + static_cast<size_t>(j - 1) * m;
  // phi_j(k/n) = sqrt(n) e_j(k)
  const double left = (k == 0) ? 0.0 : root_n * row[k - 1];
  const double right = (k == n - 1) ? 0.0 : root_n * row[k];
  return left + (n * x - k) * (right - left);
}

double discrete_kernel(const SpectralBasis& basis, double t, double x, double y) {
  if (t <= 0.0) throw DomainError("discrete_kernel: t must be > 0");
  if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0)
    throw DomainError("discrete_kernel: point outside [0,1]");
  const double yk = grid_floor(y, basis.grid());
  double acc = 0.0;
  for (int j = 1; j <= basis.modes(); ++j)
    acc += std::exp(basis.eigenvalue(j) * t) * basis.phi_lift(j, x) * phi(j, yk);
  return acc;
}

double continuum_kernel(double t, double x, double y, const KernelTruncation& trunc) {
  if (t <= 0.0) throw DomainError("continuum_kernel: t must be > 0");
  if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0)
    throw DomainError("continuum_kernel: point outside [0,1]");
  const int terms = trunc.max_terms(t);
  // sin(k pi x) via the three-term recurrence; one sin/cos pair per argument.
  const double cx = std::cos(M_PI * x), cy = std::cos(M_PI * y);
  double sx1 = std::sin(M_PI * x), sy1 = std::sin(M_PI * y);
  double sx0 = 0.0, sy0 = 0.0;
  double acc = 0.0;
  for (int k = 1; k <= terms; ++k) {
    acc += 2.0 * std::exp(-static_cast<double>(k) * k * M_PI * M_PI * t) * sx1 * sy1;
    const double sx2 = 2.0 * cx * sx1 - sx0;
    const double sy2 = 2.0 * cy * sy1 - sy0;
    sx0 = sx1;
    sx1 = sx2;
    sy0 = sy1;
    sy1 = sy2;
  }
  return acc;
}

}  // namespace rspde
