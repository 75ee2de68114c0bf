#include "revmass/ambient_metric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace revmass {

namespace {

template <typename S>
using Point = std::array<S, 3>;
template <typename S>
using Tensor = PerturbationField::Tensor<S>;

template <typename S>
S radius_squared(const Point<S>& x) {
  return x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
}

double max_abs(const Mat3& m) { return m.cwiseAbs().maxCoeff(); }

void require_nonzero(const Vec3& x) {
  if (x.squaredNorm() == 0.0) throw MetricError("metric evaluated at the origin");
}

}  // namespace

double ConformalFactor::value(const Vec3& x) const {
  require_nonzero(x);
  return 1.0 + m / (2.0 * x.norm());
}

Vec3 ConformalFactor::gradient(const Vec3& x) const {
  require_nonzero(x);
  const double r = x.norm();
  return -m / (2.0 * r * r * r) * x;
}

Mat3 ConformalFactor::hessian(const Vec3& x) const {
  require_nonzero(x);
  const double r = x.norm();
  const double r3 = r * r * r;
  return -m / 2.0 * (Mat3::Identity() / r3 - 3.0 * x * x.transpose() / (r3 * r * r));
}

double ConformalFactor::normal_derivative(const Vec3& x, const Vec3& n) const {
  return n.dot(gradient(x));
}

PerturbationField::PerturbationField(std::string name, bool axisymmetric,
                                     std::function<Mat3(const Vec3&)> b,
                                     std::function<Deriv1(const Vec3&)> db,
                                     std::function<Deriv2(const Vec3&)> d2b,
                                     std::function<Deriv3(const Vec3&)> d3b)
    : name_(std::move(name)),
      axisymmetric_(axisymmetric),
      b_(std::move(b)),
      db_(std::move(db)),
      d2b_(std::move(d2b)),
      d3b_(std::move(d3b)) {}

std::vector<std::string> perturbation_presets() { return {"radial", "bump", "mixed"}; }

PerturbationField make_perturbation(const std::string& preset, double amplitude) {
  const double c = amplitude;
  if (preset == "radial") {
    return PerturbationField::from_generic("radial", true, [c](const auto& x) {
      using S = std::decay_t<decltype(x[0])>;
      const S r2 = radius_squared(x);
      const S scale = S(c) / (r2 * r2);
      Tensor<S> t;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t[i][j] = scale * x[i] * x[j];
      return t;
    });
  }
  if (preset == "bump") {
    return PerturbationField::from_generic("bump", true, [c](const auto& x) {
      using S = std::decay_t<decltype(x[0])>;
      const S r2 = radius_squared(x);
      const S diag = S(c) * exp(S(-4.0) * x[2] * x[2] / r2) / r2;
      Tensor<S> t;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t[i][j] = i == j ? diag : S(0.0);
      return t;
    });
  }
  if (preset == "mixed") {
    return PerturbationField::from_generic("mixed", true, [c](const auto& x) {
      using S = std::decay_t<decltype(x[0])>;
      const S r2 = radius_squared(x);
      const S scale = S(c) * x[2] / (r2 * r2);
      Tensor<S> t;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          S entry(0.0);
          if (j == 2) entry = entry + x[i];
          if (i == 2) entry = entry + x[j];
          t[i][j] = scale * entry;
        }
      return t;
    });
  }
  throw MetricError("unknown perturbation preset '" + preset + "'");
}

MetricKind metric_kind_from_string(const std::string& s) {
  if (s == "euclidean") return MetricKind::euclidean;
  if (s == "schwarzschild") return MetricKind::schwarzschild;
  if (s == "perturbed") return MetricKind::perturbed;
  throw MetricError("unknown metric kind '" + s + "'");
}

std::string to_string(MetricKind k) {
  switch (k) {
    case MetricKind::euclidean: return "euclidean";
    case MetricKind::schwarzschild: return "schwarzschild";
    case MetricKind::perturbed: return "perturbed";
  }
  return "euclidean";
}

std::string AmbientMetric::name() const {
  if (kind_ == MetricKind::perturbed && b_) return "perturbed:" + b_->name();
  return to_string(kind_);
}

Mat3 AmbientMetric::metric_at(const Vec3& x) const {
  if (kind_ == MetricKind::euclidean) return Mat3::Identity();
  const double phi = factor_.value(x);
  Mat3 g = std::pow(phi, 4) * Mat3::Identity();
  if (b_) g += b_->b_at(x);
  return g;
}

Deriv1 AmbientMetric::dmetric_at(const Vec3& x) const {
  Deriv1 d;
  for (auto& m : d) m.setZero();
  if (kind_ == MetricKind::euclidean) return d;
  const double phi = factor_.value(x);
  const Vec3 grad = factor_.gradient(x);
  for (int k = 0; k < 3; ++k) d[k] = 4.0 * phi * phi * phi * grad(k) * Mat3::Identity();
  if (b_) {
    const Deriv1 db = b_->db_at(x);
    for (int k = 0; k < 3; ++k) d[k] += db[k];
  }
  return d;
}

Deriv2 AmbientMetric::d2metric_at(const Vec3& x) const {
  Deriv2 d;
  for (auto& row : d)
    for (auto& m : row) m.setZero();
  if (kind_ == MetricKind::euclidean) return d;
  const double phi = factor_.value(x);
  const Vec3 grad = factor_.gradient(x);
  const Mat3 hess = factor_.hessian(x);
  for (int l = 0; l < 3; ++l)
    for (int k = 0; k < 3; ++k)
      d[l][k] = (12.0 * phi * phi * grad(l) * grad(k) + 4.0 * phi * phi * phi * hess(l, k)) *
                Mat3::Identity();
  if (b_) {
    const Deriv2 d2b = b_->d2b_at(x);
    for (int l = 0; l < 3; ++l)
      for (int k = 0; k < 3; ++k) d[l][k] += d2b[l][k];
  }
  return d;
}

namespace {

// S[l](i, j) = d_i g_jl + d_j g_il - d_l g_ij
std::array<Mat3, 3> lowered_connection(const Deriv1& dg) {
  std::array<Mat3, 3> s;
  for (int l = 0; l < 3; ++l)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s[l](i, j) = dg[i](j, l) + dg[j](i, l) - dg[l](i, j);
  return s;
}

Christoffel raise(const Mat3& ginv, const std::array<Mat3, 3>& s) {
  Christoffel gamma;
  for (int k = 0; k < 3; ++k) {
    gamma[k].setZero();
    for (int l = 0; l < 3; ++l) gamma[k] += 0.5 * ginv(k, l) * s[l];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < i; ++j) gamma[k](i, j) = gamma[k](j, i);
  }
  return gamma;
}

}  // namespace

Christoffel AmbientMetric::christoffel_at(const Vec3& x) const {
  const Mat3 ginv = metric_at(x).inverse();
  return raise(ginv, lowered_connection(dmetric_at(x)));
}

double AmbientMetric::scalar_curvature(const Vec3& x) const {
  const Mat3 g = metric_at(x);
  const Mat3 ginv = g.inverse();
  const Deriv1 dg = dmetric_at(x);
  const Deriv2 d2g = d2metric_at(x);
  const auto s = lowered_connection(dg);
  const Christoffel gamma = raise(ginv, s);

  // dgamma[m][k](i, j) = d_m Gamma^k_ij
  std::array<Christoffel, 3> dgamma;
  for (int m = 0; m < 3; ++m) {
    const Mat3 dginv = -ginv * dg[m] * ginv;
    std::array<Mat3, 3> ds;
    for (int l = 0; l < 3; ++l)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          ds[l](i, j) = d2g[m][i](j, l) + d2g[m][j](i, l) - d2g[m][l](i, j);
    for (int k = 0; k < 3; ++k) {
      dgamma[m][k].setZero();
      for (int l = 0; l < 3; ++l)
        dgamma[m][k] += 0.5 * (dginv(k, l) * s[l] + ginv(k, l) * ds[l]);
    }
  }

  // Ricci R_ij = d_k G^k_ij - d_j G^k_ik + G^k_kl G^l_ij - G^k_jl G^l_ik
  double scalar = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double ric = 0.0;
      for (int k = 0; k < 3; ++k) {
        ric += dgamma[k][k](i, j) - dgamma[j][k](i, k);
        for (int l = 0; l < 3; ++l)
          ric += gamma[k](k, l) * gamma[l](i, j) - gamma[k](j, l) * gamma[l](i, k);
      }
      scalar += ginv(i, j) * ric;
    }
  return scalar;
}

std::vector<Vec3> shell_directions() {
  // Fibonacci lattice plus the six coordinate axes.
  constexpr int kCount = 64;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<Vec3> dirs;
  dirs.reserve(kCount + 6);
  for (int k = 0; k < 3; ++k) {
    dirs.push_back(Vec3::Unit(2 - k));
    dirs.push_back(-Vec3::Unit(2 - k));
  }
  for (int i = 0; i < kCount; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / kCount;
    const double rho = std::sqrt(1.0 - z * z);
    const double t = golden * i;
    dirs.emplace_back(rho * std::cos(t), rho * std::sin(t), z);
  }
  return dirs;
}

DecayReport validate_decay(const PerturbationField& b, std::span<const double> shells) {
  DecayReport report;
  report.shells.assign(shells.begin(), shells.end());
  const auto dirs = shell_directions();
  for (double r : shells) {
    std::array<double, 4> sup{0.0, 0.0, 0.0, 0.0};
    for (const Vec3& dir : dirs) {
      const Vec3 x = r * dir;
      sup[0] = std::max(sup[0], r * r * max_abs(b.b_at(x)));
      for (const Mat3& m : b.db_at(x)) sup[1] = std::max(sup[1], r * r * r * max_abs(m));
      for (const auto& row : b.d2b_at(x))
        for (const Mat3& m : row) sup[2] = std::max(sup[2], std::pow(r, 4) * max_abs(m));
      for (const auto& plane : b.d3b_at(x))
        for (const auto& row : plane)
          for (const Mat3& m : row) sup[3] = std::max(sup[3], std::pow(r, 5) * max_abs(m));
    }
    report.sup.push_back(sup);
  }
  if (report.sup.size() >= 2)
    for (int k = 0; k < 4; ++k)
      if (report.sup.back()[k] > 2.0 * report.sup.front()[k]) report.bounded = false;
  return report;
}

DecayReport validate_decay(const AmbientMetric& metric, std::span<const double> shells) {
  if (metric.perturbation()) return validate_decay(*metric.perturbation(), shells);
  DecayReport report;
  report.shells.assign(shells.begin(), shells.end());
  report.sup.assign(shells.size(), {0.0, 0.0, 0.0, 0.0});
  return report;
}

AmbientMetric build_metric(MetricKind kind, double m, std::optional<PerturbationField> b,
                           double r_min) {
  if (!(r_min > 0.0)) throw MetricError("build_metric: r_min must be positive");
  AmbientMetric g;
  g.kind_ = kind;
  g.r_min_ = r_min;
  if (kind == MetricKind::euclidean) return g;
  if (!(m > 0.0)) throw MetricError("build_metric: mass must be positive");
  g.factor_.m = m;
  if (kind == MetricKind::schwarzschild) return g;

  if (!b) throw MetricError("build_metric: perturbed metric needs a perturbation field");
  if (!b->axisymmetric())
    throw MetricError("build_metric: perturbation must be axisymmetric");
  const std::array<double, 4> shells{r_min, 10.0 * r_min, 100.0 * r_min, 1000.0 * r_min};
  if (!validate_decay(*b, shells).bounded)
    throw MetricError("build_metric: perturbation '" + b->name() +
                      "' violates the r^-2 decay conditions");
  g.b_ = std::move(b);
  for (const Vec3& dir : shell_directions()) {
    const Eigen::SelfAdjointEigenSolver<Mat3> eig(g.metric_at(r_min * dir));
    if (!(eig.eigenvalues().minCoeff() > 0.0))
      throw MetricError("build_metric: metric not positive definite at r_min");
  }
  return g;
}

double normal_derivative_phi(const AmbientMetric& metric, const Vec3& x, const Vec3& n) {
  if (metric.kind() == MetricKind::euclidean)
    throw MetricError("normal_derivative_phi: Euclidean metric has no conformal factor");
  return metric.conformal_factor().normal_derivative(x, n);
}

}  // namespace revmass
