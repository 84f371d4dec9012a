#include "tvlab/linear_solve.hpp"

#include <cmath>

#include "tvlab/errors.hpp"

namespace tvlab {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

// Diagonal of (I - c L): 1 + c * (sum of adjacent face weights) / h^2.
std::vector<double> operator_diagonal(const FaceCoefficients& faces, double c) {
  const Grid& g = faces.grid;
  const int nx = g.cells(0);
  const int ny = g.cells(1);
  std::vector<double> d(g.size(), 1.0);
  const double ihx2 = 1.0 / (g.spacing(0) * g.spacing(0));
  for (int j = 0; j < ny; ++j) {
    const double* f = &faces.x_faces[static_cast<std::size_t>(j) * (nx + 1)];
    for (int i = 0; i < nx; ++i) d[g.index(i, j)] += c * (f[i] + f[i + 1]) * ihx2;
  }
  if (g.dim() == 2) {
    const double ihy2 = 1.0 / (g.spacing(1) * g.spacing(1));
    for (int i = 0; i < nx; ++i) {
      const double* f = &faces.y_faces[static_cast<std::size_t>(i) * (ny + 1)];
      for (int j = 0; j < ny; ++j) d[g.index(i, j)] += c * (f[j] + f[j + 1]) * ihy2;
    }
  }
  return d;
}

}  // namespace

CgStats solve_implicit_diffusion(const FaceCoefficients& faces, double c,
                                 const std::vector<double>& b, std::vector<double>& x,
                                 double tol, int max_iter) {
  const std::size_t n = b.size();
  if (x.size() != n || faces.grid.size() != n) throw FieldError("grid mismatch");
  if (max_iter < 0) max_iter = static_cast<int>(10 * n);

  const std::vector<double> diag = operator_diagonal(faces, c);
  std::vector<double> Ax(n), r(n), z(n), p(n), Ap(n);

  auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
    apply_diffusion(faces, in, out);
    for (std::size_t k = 0; k < n; ++k) out[k] = in[k] - c * out[k];
  };

  const double bnorm = std::sqrt(dot(b, b));
  if (!std::isfinite(bnorm)) throw StepFailure("non-finite right-hand side");

  CgStats stats;
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return stats;
  }

  apply(x, Ax);
  for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - Ax[k];
  double rnorm = std::sqrt(dot(r, r));
  for (std::size_t k = 0; k < n; ++k) z[k] = r[k] / diag[k];
  p = z;
  double rz = dot(r, z);

  while (rnorm > tol * bnorm) {
    if (stats.iterations >= max_iter) {
      throw StepFailure("conjugate gradients did not converge");
    }
    apply(p, Ap);
    const double pAp = dot(p, Ap);
    if (!(pAp > 0.0)) throw StepFailure("conjugate gradients broke down");
    const double alpha = rz / pAp;
    for (std::size_t k = 0; k < n; ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * Ap[k];
    }
    rnorm = std::sqrt(dot(r, r));
    if (!std::isfinite(rnorm)) throw StepFailure("non-finite residual in linear solve");
    for (std::size_t k = 0; k < n; ++k) z[k] = r[k] / diag[k];
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
    ++stats.iterations;
  }
  stats.relative_residual = rnorm / bnorm;

  // The exact solution has sum(x) = sum(b); restore it to round-off.
  double sb = 0.0;
  double sx = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sb += b[k];
    sx += x[k];
  }
  const double shift = (sb - sx) / static_cast<double>(n);
  for (double& v : x) v += shift;
  return stats;
}

}  // namespace tvlab
