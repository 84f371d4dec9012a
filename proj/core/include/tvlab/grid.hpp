#pragma once

// Uniform cell-centred tensor grids on intervals and rectangles, the
// finite-difference operators built on them, and the L^p-type integrals
// every energy monitor is assembled from.
//
// Boundary convention: homogeneous Neumann via mirrored ghost cells. The
// ghost value equals the adjacent interior cell, so every boundary face
// carries a zero normal difference.

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace tvlab {

class Grid {
 public:
  /// 1D interval (0, length) split into `cells` cells.
  Grid(double length, int cells);
  /// 2D rectangle (0, lx) x (0, ly).
  Grid(double lx, double ly, int nx, int ny);

  int dim() const { return dim_; }
  int cells(int axis) const { return cells_[axis]; }
  double length(int axis) const { return lengths_[axis]; }
  double spacing(int axis) const { return spacing_[axis]; }
  std::size_t size() const { return static_cast<std::size_t>(cells_[0]) * cells_[1]; }
  double cell_volume() const { return spacing_[0] * (dim_ == 2 ? spacing_[1] : 1.0); }
  double domain_volume() const { return lengths_[0] * (dim_ == 2 ? lengths_[1] : 1.0); }
  double min_spacing() const;

  std::size_t index(int i, int j = 0) const {
    return static_cast<std::size_t>(j) * cells_[0] + i;
  }
  /// Cell-centre coordinate along `axis` of cell number `k`.
  double center(int axis, int k) const { return (k + 0.5) * spacing_[axis]; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int dim_;
  std::array<double, 2> lengths_;
  std::array<int, 2> cells_;
  std::array<double, 2> spacing_;
};

struct ScalarField {
  Grid grid;
  std::vector<double> values;

  explicit ScalarField(const Grid& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}
  ScalarField(const Grid& g, std::vector<double> v);

  /// Samples `fn(x, y)` at cell centres (y = 0 in 1D).
  static ScalarField sample(const Grid& g, const std::function<double(double, double)>& fn);

  double& operator[](std::size_t k) { return values[k]; }
  double operator[](std::size_t k) const { return values[k]; }
  std::size_t size() const { return values.size(); }

  /// Throws FieldError("non-finite field") if any entry is NaN/Inf.
  void require_finite() const;
  double max_abs() const;
  double min() const;
  double max() const;
  /// Midpoint-rule integral over the domain.
  double integral() const;
};

struct VectorField {
  Grid grid;
  std::array<std::vector<double>, 2> components;

  explicit VectorField(const Grid& g);

  std::vector<double>& operator[](int axis) { return components[axis]; }
  const std::vector<double>& operator[](int axis) const { return components[axis]; }

  void require_finite() const;
  /// Squared Euclidean magnitude at cell k.
  double norm2(std::size_t k) const;
};

void require_same_grid(const Grid& a, const Grid& b);

/// Centred differences in the interior. At boundary cells the normal
/// component is the one-sided difference against the mirrored ghost,
/// which is exactly zero.
VectorField gradient(const ScalarField& phi);

/// Conservative flux-difference divergence. Face values are arithmetic
/// means of the adjacent cells; boundary faces use linear extrapolation
/// from the two nearest cells, so the discrete integral of the result
/// equals boundary_flux(g) exactly up to round-off.
ScalarField divergence(const VectorField& g);

/// Net outward flux of a cell-centred vector field through the domain
/// boundary, using the same boundary face values as divergence().
double boundary_flux(const VectorField& g);

/// 3-point (1D) / 5-point (2D) Laplacian with mirrored ghost cells.
ScalarField laplacian_neumann(const ScalarField& phi);

/// Pointwise Frobenius norm of the discrete Hessian. Pure second
/// differences use the centred 3-point stencil, shifted one cell inwards
/// at the boundary; the mixed derivative is the product of first
/// differences that become one-sided at the boundary. Affine fields map
/// to zero everywhere.
ScalarField hessian_frobenius(const ScalarField& phi);

/// Integral of |grad phi|^p. Requires p >= 2.
double lp_gradient_norm(const ScalarField& phi, double p);

/// Integral of |grad phi|^(p-2) |D^2 phi|^2. Requires p >= 2.
double weighted_dissipation(const ScalarField& phi, double p);

/// Integral of |phi|^p.
double lp_norm_p(const ScalarField& phi, double p);

}  // namespace tvlab
