#include "tvlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tvlab/errors.hpp"

namespace tvlab {

namespace {

void check_axis(double length, int cells) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw DomainError("grid length must be positive and finite");
  }
  if (cells < 4) {
    throw DomainError("grid needs at least 4 cells per axis, got " + std::to_string(cells));
  }
}

void check_p(double p) {
  if (!(p >= 2.0)) throw DomainError("exponent p must satisfy p >= 2");
}

// One-sided at the two ends, centred elsewhere. Used for the mixed
// derivative so that affine fields have a vanishing Hessian.
double first_difference(const std::vector<double>& v, std::size_t base, std::size_t stride,
                        int k, int n, double h) {
  if (k == 0) return (v[base + stride] - v[base]) / h;
  if (k == n - 1) return (v[base + (n - 1) * stride] - v[base + (n - 2) * stride]) / h;
  return (v[base + (k + 1) * stride] - v[base + (k - 1) * stride]) / (2.0 * h);
}

double second_difference(const std::vector<double>& v, std::size_t base, std::size_t stride,
                         int k, int n, double h) {
  const int c = std::clamp(k, 1, n - 2);
  return (v[base + (c + 1) * stride] - 2.0 * v[base + c * stride] +
          v[base + (c - 1) * stride]) /
         (h * h);
}

}  // namespace

Grid::Grid(double length, int cells)
    : dim_(1), lengths_{length, 1.0}, cells_{cells, 1}, spacing_{0.0, 1.0} {
  check_axis(length, cells);
  spacing_[0] = length / cells;
}

Grid::Grid(double lx, double ly, int nx, int ny)
    : dim_(2), lengths_{lx, ly}, cells_{nx, ny}, spacing_{0.0, 0.0} {
  check_axis(lx, nx);
  check_axis(ly, ny);
  spacing_[0] = lx / nx;
  spacing_[1] = ly / ny;
}

double Grid::min_spacing() const {
  return dim_ == 2 ? std::min(spacing_[0], spacing_[1]) : spacing_[0];
}

ScalarField::ScalarField(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) throw FieldError("field length does not match grid");
}

ScalarField ScalarField::sample(const Grid& g, const std::function<double(double, double)>& fn) {
  ScalarField out(g);
  for (int j = 0; j < g.cells(1); ++j) {
    const double y = g.dim() == 2 ? g.center(1, j) : 0.0;
    for (int i = 0; i < g.cells(0); ++i) out[g.index(i, j)] = fn(g.center(0, i), y);
  }
  return out;
}

void ScalarField::require_finite() const {
  for (double x : values) {
    if (!std::isfinite(x)) throw FieldError("non-finite field");
  }
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double x : values) m = std::max(m, std::abs(x));
  return m;
}

double ScalarField::min() const { return *std::min_element(values.begin(), values.end()); }
double ScalarField::max() const { return *std::max_element(values.begin(), values.end()); }

double ScalarField::integral() const {
  double s = 0.0;
  for (double x : values) s += x;
  return s * grid.cell_volume();
}

VectorField::VectorField(const Grid& g) : grid(g) {
  components[0].assign(g.size(), 0.0);
  if (g.dim() == 2) components[1].assign(g.size(), 0.0);
}

void VectorField::require_finite() const {
  for (int a = 0; a < grid.dim(); ++a) {
    for (double x : components[a]) {
      if (!std::isfinite(x)) throw FieldError("non-finite field");
    }
  }
}

double VectorField::norm2(std::size_t k) const {
  double s = components[0][k] * components[0][k];
  if (grid.dim() == 2) s += components[1][k] * components[1][k];
  return s;
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw FieldError("grid mismatch");
}

VectorField gradient(const ScalarField& phi) {
  phi.require_finite();
  const Grid& g = phi.grid;
  VectorField out(g);
  const int nx = g.cells(0);
  const int ny = g.cells(1);
  const auto& v = phi.values;

  const double inv2hx = 0.5 / g.spacing(0);
  for (int j = 0; j < ny; ++j) {
    const std::size_t row = g.index(0, j);
    for (int i = 1; i < nx - 1; ++i) out[0][row + i] = (v[row + i + 1] - v[row + i - 1]) * inv2hx;
  }
  if (g.dim() == 2) {
    const double inv2hy = 0.5 / g.spacing(1);
    for (int j = 1; j < ny - 1; ++j) {
      for (int i = 0; i < nx; ++i) {
        out[1][g.index(i, j)] = (v[g.index(i, j + 1)] - v[g.index(i, j - 1)]) * inv2hy;
      }
    }
  }
  return out;
}

ScalarField divergence(const VectorField& G) {
  G.require_finite();
  const Grid& g = G.grid;
  ScalarField out(g);
  const int nx = g.cells(0);
  const int ny = g.cells(1);

  // Faces i-1/2 for i = 0..nx, evaluated row by row.
  std::vector<double> face(static_cast<std::size_t>(std::max(nx, ny)) + 1);
  {
    const auto& c = G[0];
    const double invh = 1.0 / g.spacing(0);
    for (int j = 0; j < ny; ++j) {
      const std::size_t row = g.index(0, j);
      face[0] = 0.5 * (3.0 * c[row] - c[row + 1]);
      for (int i = 1; i < nx; ++i) face[i] = 0.5 * (c[row + i - 1] + c[row + i]);
      face[nx] = 0.5 * (3.0 * c[row + nx - 1] - c[row + nx - 2]);
      for (int i = 0; i < nx; ++i) out[row + i] = (face[i + 1] - face[i]) * invh;
    }
  }
  if (g.dim() == 2) {
    const auto& c = G[1];
    const double invh = 1.0 / g.spacing(1);
    for (int i = 0; i < nx; ++i) {
      auto at = [&](int j) { return c[g.index(i, j)]; };
      face[0] = 0.5 * (3.0 * at(0) - at(1));
      for (int j = 1; j < ny; ++j) face[j] = 0.5 * (at(j - 1) + at(j));
      face[ny] = 0.5 * (3.0 * at(ny - 1) - at(ny - 2));
      for (int j = 0; j < ny; ++j) out[g.index(i, j)] += (face[j + 1] - face[j]) * invh;
    }
  }
  return out;
}

double boundary_flux(const VectorField& G) {
  G.require_finite();
  const Grid& g = G.grid;
  const int nx = g.cells(0);
  const int ny = g.cells(1);
  double total = 0.0;
  {
    const auto& c = G[0];
    const double area = g.dim() == 2 ? g.spacing(1) : 1.0;
    for (int j = 0; j < ny; ++j) {
      const std::size_t row = g.index(0, j);
      const double left = 0.5 * (3.0 * c[row] - c[row + 1]);
      const double right = 0.5 * (3.0 * c[row + nx - 1] - c[row + nx - 2]);
      total += (right - left) * area;
    }
  }
  if (g.dim() == 2) {
    const auto& c = G[1];
    const double area = g.spacing(0);
    for (int i = 0; i < nx; ++i) {
      const double bottom = 0.5 * (3.0 * c[g.index(i, 0)] - c[g.index(i, 1)]);
      const double top = 0.5 * (3.0 * c[g.index(i, ny - 1)] - c[g.index(i, ny - 2)]);
      total += (top - bottom) * area;
    }
  }
  return total;
}

ScalarField laplacian_neumann(const ScalarField& phi) {
  phi.require_finite();
  const Grid& g = phi.grid;
  ScalarField out(g);
  const int nx = g.cells(0);
  const int ny = g.cells(1);
  const auto& v = phi.values;

  const double ihx2 = 1.0 / (g.spacing(0) * g.spacing(0));
  for (int j = 0; j < ny; ++j) {
    const std::size_t row = g.index(0, j);
    for (int i = 0; i < nx; ++i) {
      const double left = i > 0 ? v[row + i - 1] : v[row + i];
      const double right = i < nx - 1 ? v[row + i + 1] : v[row + i];
      out[row + i] = (left - 2.0 * v[row + i] + right) * ihx2;
    }
  }
  if (g.dim() == 2) {
    const double ihy2 = 1.0 / (g.spacing(1) * g.spacing(1));
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const std::size_t k = g.index(i, j);
        const double down = j > 0 ? v[g.index(i, j - 1)] : v[k];
        const double up = j < ny - 1 ? v[g.index(i, j + 1)] : v[k];
        out[k] += (down - 2.0 * v[k] + up) * ihy2;
      }
    }
  }
  return out;
}

ScalarField hessian_frobenius(const ScalarField& phi) {
  phi.require_finite();
  const Grid& g = phi.grid;
  ScalarField out(g);
  const int nx = g.cells(0);
  const int ny = g.cells(1);
  const auto& v = phi.values;
  const double hx = g.spacing(0);

  if (g.dim() == 1) {
    for (int i = 0; i < nx; ++i) out[i] = std::abs(second_difference(v, 0, 1, i, nx, hx));
    return out;
  }

  const double hy = g.spacing(1);
  const std::size_t sx = 1;
  const std::size_t sy = static_cast<std::size_t>(nx);
  // d/dy at every cell first, then d/dx of that for the mixed term.
  std::vector<double> dy(g.size());
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) dy[g.index(i, j)] = first_difference(v, g.index(i, 0), sy, j, ny, hy);
  }
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t k = g.index(i, j);
      const double dxx = second_difference(v, g.index(0, j), sx, i, nx, hx);
      const double dyy = second_difference(v, g.index(i, 0), sy, j, ny, hy);
      const double dxy = first_difference(dy, g.index(0, j), sx, i, nx, hx);
      out[k] = std::sqrt(dxx * dxx + dyy * dyy + 2.0 * dxy * dxy);
    }
  }
  return out;
}

double lp_gradient_norm(const ScalarField& phi, double p) {
  check_p(p);
  const VectorField grad = gradient(phi);
  const double half = 0.5 * p;
  double s = 0.0;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const double m2 = grad.norm2(k);
    s += p == 2.0 ? m2 : std::pow(m2, half);
  }
  return s * phi.grid.cell_volume();
}

double weighted_dissipation(const ScalarField& phi, double p) {
  check_p(p);
  const VectorField grad = gradient(phi);
  const ScalarField hess = hessian_frobenius(phi);
  const double half = 0.5 * (p - 2.0);
  double s = 0.0;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const double weight = p == 2.0 ? 1.0 : std::pow(grad.norm2(k), half);
    s += weight * hess[k] * hess[k];
  }
  return s * phi.grid.cell_volume();
}

double lp_norm_p(const ScalarField& phi, double p) {
  phi.require_finite();
  double s = 0.0;
  for (double x : phi.values) s += std::pow(std::abs(x), p);
  return s * phi.grid.cell_volume();
}

}  // namespace tvlab
