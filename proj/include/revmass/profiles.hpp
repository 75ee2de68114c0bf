#pragma once

#include <array>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace revmass {

class ProfileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Values and first three derivatives of the generating curve at one
/// parameter value: w[k] = d^k w / dphi^k, same for h.
struct CurveJet {
  std::array<double, 4> w{};
  std::array<double, 4> h{};

  double speed_squared() const { return w[1] * w[1] + h[1] * h[1]; }
  /// Signed curvature numerator w'h'' - w''h'.
  double turning() const { return w[1] * h[2] - w[2] * h[1]; }
};

/// Principal curvatures of the unit-scale surface (a = 1), outward normal.
/// Divide by a for the surface at scale a.
struct UnitCurvatures {
  double meridian = 0.0;
  double parallel = 0.0;

  double mean() const { return meridian + parallel; }
  double gauss() const { return meridian * parallel; }
};

/// Raw formulas; the parallel curvature is 0/0 where w = 0.
UnitCurvatures unit_curvatures(const CurveJet& jet);

/// Generating curve (w, h) of a closed surface of revolution. The surface at
/// scale a is (a w cos t, a w sin t, a h), phi in [0, l].
///
/// Profiles are immutable and cheap to copy; evaluation is reentrant.
class Profile {
 public:
  using Evaluator = std::function<CurveJet(double)>;

  Profile(std::string name, double l, Evaluator eval, bool arclength);

  const std::string& name() const { return name_; }
  double l() const { return l_; }
  bool arclength() const { return arclength_; }

  CurveJet operator()(double phi) const { return (*eval_)(phi); }

  /// Mirror h -> -h.
  Profile flipped() const;

  /// Unit-scale principal curvatures; at and near the poles the parallel
  /// curvature is replaced by the meridian one (poles are umbilic).
  UnitCurvatures curvatures(double phi, double pole_margin = 1e-4) const;

 private:
  std::string name_;
  double l_;
  std::shared_ptr<const Evaluator> eval_;
  bool arclength_;
};

enum class Builtin { sphere, ellipsoid_112, custom };

Builtin builtin_from_string(const std::string& name);
std::string to_string(Builtin b);

/// Closed-form profiles. sphere: (sin, cos) on [0, pi]. ellipsoid_112:
/// (sin, 2 cos) on [0, pi]. custom: spheroid (A sin, B cos) with
/// params = {A, B}.
Profile make_builtin(Builtin which, const std::vector<double>& params = {});

/// Least-squares Chebyshev profile through sampled (phi, w, h) rows. The
/// parameter is shifted to start at 0; small corrections enforce
/// w(0) = w(l) = h'(0) = h'(l) = 0 exactly.
Profile profile_from_samples(std::string name, const std::vector<double>& phi,
                             const std::vector<double>& w,
                             const std::vector<double>& h);

/// Reads a CSV with header `phi,w,h`.
Profile read_profile_csv(const std::string& path);

/// Same image curve, parametrized by arclength. Accuracy of the inverse
/// arclength map is controlled by tol.
Profile reparametrize_arclength(const Profile& p, double tol = 1e-12);

/// Orients the profile so that h(0) > h(l) (flips otherwise).
Profile oriented(const Profile& p);

/// Length of the generating curve.
double curve_length(const Profile& p);

/// Checks pole closure and interior positivity of w, and h' < 0 inside.
/// Throws ProfileError naming the first violated identity.
void check_profile_invariants(const Profile& p, double tol = 1e-12,
                              std::size_t nodes = 2048);

struct SurfaceFamily {
  std::function<Profile(double)> profile_at;
  std::vector<double> scales;

  static SurfaceFamily constant(Profile p, std::vector<double> scales);
  void validate() const;
};

/// Best constants for K >= C1/a^2, 0 < H <= C2/a, C3 a <= r <= C4 a.
struct ConditionConstants {
  double C1 = 0.0;
  double C2 = 0.0;
  double C3 = 0.0;
  double C4 = 0.0;
};

/// Scans 2047 interior nodes plus the two pole limits at every scale.
ConditionConstants validate_conditions(const SurfaceFamily& family);

}  // namespace revmass
