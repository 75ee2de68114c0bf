#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "revmass/dual.hpp"

namespace revmass {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
/// d[k](i, j) = d_k T_ij
using Deriv1 = std::array<Mat3, 3>;
/// d[l][k](i, j) = d_l d_k T_ij
using Deriv2 = std::array<Deriv1, 3>;
using Deriv3 = std::array<Deriv2, 3>;
/// gamma[k](i, j) = Gamma^k_ij
using Christoffel = std::array<Mat3, 3>;

class MetricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// phi = 1 + m / (2 r) with its Euclidean gradient and Hessian.
struct ConformalFactor {
  double m = 0.0;

  double value(const Vec3& x) const;
  Vec3 gradient(const Vec3& x) const;
  Mat3 hessian(const Vec3& x) const;
  /// n . grad phi
  double normal_derivative(const Vec3& x, const Vec3& n) const;
};

/// Symmetric tensor field b_ij with coordinate derivatives to third order.
class PerturbationField {
 public:
  template <typename S>
  using Tensor = std::array<std::array<S, 3>, 3>;

  PerturbationField(std::string name, bool axisymmetric,
                    std::function<Mat3(const Vec3&)> b,
                    std::function<Deriv1(const Vec3&)> db,
                    std::function<Deriv2(const Vec3&)> d2b,
                    std::function<Deriv3(const Vec3&)> d3b);

  /// Builds all derivative callbacks from one generic callable
  /// `f(const std::array<S,3>& x) -> Tensor<S>` by nested forward-mode
  /// differentiation.
  template <typename F>
  static PerturbationField from_generic(std::string name, bool axisymmetric, F f);

  const std::string& name() const { return name_; }
  bool axisymmetric() const { return axisymmetric_; }

  Mat3 b_at(const Vec3& x) const { return b_(x); }
  Deriv1 db_at(const Vec3& x) const { return db_(x); }
  Deriv2 d2b_at(const Vec3& x) const { return d2b_(x); }
  Deriv3 d3b_at(const Vec3& x) const { return d3b_(x); }

 private:
  std::string name_;
  bool axisymmetric_;
  std::function<Mat3(const Vec3&)> b_;
  std::function<Deriv1(const Vec3&)> db_;
  std::function<Deriv2(const Vec3&)> d2b_;
  std::function<Deriv3(const Vec3&)> d3b_;
};

/// Named axisymmetric presets, all O(r^-2) with matching derivative decay:
///   radial: c x_i x_j / r^4
///   bump:   c exp(-4 z^2 / r^2) delta_ij / r^2
///   mixed:  c z (x_i e3_j + e3_i x_j) / r^4
PerturbationField make_perturbation(const std::string& preset, double amplitude);
std::vector<std::string> perturbation_presets();

enum class MetricKind { euclidean, schwarzschild, perturbed };

MetricKind metric_kind_from_string(const std::string& s);
std::string to_string(MetricKind k);

/// g_ij = phi^4 delta_ij + b_ij on R^3 minus a ball of radius r_min.
/// Immutable once built.
class AmbientMetric {
 public:
  MetricKind kind() const { return kind_; }
  double mass() const { return factor_.m; }
  double r_min() const { return r_min_; }
  const ConformalFactor& conformal_factor() const { return factor_; }
  const std::optional<PerturbationField>& perturbation() const { return b_; }
  std::string name() const;

  Mat3 metric_at(const Vec3& x) const;
  Deriv1 dmetric_at(const Vec3& x) const;
  Deriv2 d2metric_at(const Vec3& x) const;
  /// Levi-Civita connection from dmetric_at.
  Christoffel christoffel_at(const Vec3& x) const;
  /// Scalar curvature from first and second metric derivatives.
  double scalar_curvature(const Vec3& x) const;

 private:
  friend AmbientMetric build_metric(MetricKind, double, std::optional<PerturbationField>, double);
  MetricKind kind_ = MetricKind::euclidean;
  ConformalFactor factor_;
  std::optional<PerturbationField> b_;
  double r_min_ = 1.0;
};

/// Throws MetricError when m <= 0 for curved kinds, when a perturbation is
/// missing, not axisymmetric, decays too slowly, or breaks positivity at
/// r_min.
AmbientMetric build_metric(MetricKind kind, double m,
                           std::optional<PerturbationField> b = std::nullopt,
                           double r_min = 1.0);

struct DecayReport {
  std::vector<double> shells;
  /// sup[s][k] = sup over the shell of r^(2+k) |d^k b|, max-abs component
  std::vector<std::array<double, 4>> sup;
  bool bounded = true;
};

/// Samples a fixed angular set on each shell. `bounded` is cleared when any
/// weighted norm on the last shell exceeds twice its value on the first.
DecayReport validate_decay(const AmbientMetric& metric, std::span<const double> shells);
DecayReport validate_decay(const PerturbationField& b, std::span<const double> shells);

/// n . grad phi at a surface point; not defined for the Euclidean metric.
double normal_derivative_phi(const AmbientMetric& metric, const Vec3& x, const Vec3& n);

/// Fixed, deterministic directions used for shell sampling.
std::vector<Vec3> shell_directions();

// ---------------------------------------------------------------------------

template <typename F>
PerturbationField PerturbationField::from_generic(std::string name, bool axisymmetric, F f) {
  using D1 = Dual<double>;
  using D2 = Dual<D1>;
  using D3 = Dual<D2>;

  auto b = [f](const Vec3& x) {
    const auto t = f(std::array<double, 3>{x(0), x(1), x(2)});
    Mat3 out;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) out(i, j) = t[i][j];
    return out;
  };

  auto db = [f](const Vec3& x) {
    Deriv1 out;
    for (int k = 0; k < 3; ++k) {
      std::array<D1, 3> p;
      for (int i = 0; i < 3; ++i) p[i] = D1(x(i), i == k ? 1.0 : 0.0);
      const auto t = f(p);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[k](i, j) = t[i][j].d;
    }
    return out;
  };

  auto d2b = [f](const Vec3& x) {
    Deriv2 out;
    for (int l = 0; l < 3; ++l)
      for (int k = l; k < 3; ++k) {
        std::array<D2, 3> p;
        for (int i = 0; i < 3; ++i)
          p[i] = D2(D1(x(i), i == k ? 1.0 : 0.0), D1(i == l ? 1.0 : 0.0, 0.0));
        const auto t = f(p);
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) {
            out[l][k](i, j) = t[i][j].d.d;
            out[k][l](i, j) = t[i][j].d.d;
          }
      }
    return out;
  };

  auto d3b = [f](const Vec3& x) {
    Deriv3 out;
    for (int n = 0; n < 3; ++n)
      for (int l = n; l < 3; ++l)
        for (int k = l; k < 3; ++k) {
          std::array<D3, 3> p;
          for (int i = 0; i < 3; ++i) {
            const D2 inner(D1(x(i), i == k ? 1.0 : 0.0), D1(i == l ? 1.0 : 0.0, 0.0));
            const D2 outer(D1(i == n ? 1.0 : 0.0, 0.0), D1(0.0, 0.0));
            p[i] = D3(inner, outer);
          }
          const auto t = f(p);
          const std::array<std::array<int, 3>, 6> perms{{{n, l, k}, {n, k, l}, {l, n, k},
                                                         {l, k, n}, {k, n, l}, {k, l, n}}};
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
              for (const auto& q : perms) out[q[0]][q[1]][q[2]](i, j) = t[i][j].d.d.d;
        }
    return out;
  };

  return PerturbationField(std::move(name), axisymmetric, b, db, d2b, d3b);
}

}  // namespace revmass
