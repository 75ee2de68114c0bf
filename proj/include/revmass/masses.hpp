#pragma once

#include <string>

#include "revmass/ambient_metric.hpp"
#include "revmass/numerics.hpp"
#include "revmass/profiles.hpp"

namespace revmass {

/// (1/8 pi) int (H0 - H) dsigma, dsigma induced by the ambient metric.
Integral brown_york(const Profile& p, double a, const AmbientMetric& metric,
                    const QuadSpec& quad = {});

/// Same integrand against the Euclidean area element of S_a.
Integral brown_york_flat_area(const Profile& p, double a, const AmbientMetric& metric,
                              const QuadSpec& quad = {});

/// sqrt(A / 16 pi) (1 - (1/16 pi) int H^2 dsigma)
Integral hawking(const Profile& p, double a, const AmbientMetric& metric,
                 const QuadSpec& quad = {});

/// (1/16 pi) int (g_ij,i - g_ii,j) nu^j dSigma0 over S_a with the Euclidean
/// normal and area element.
Integral adm_flux(const Profile& p, double a, const AmbientMetric& metric,
                  const QuadSpec& quad = {});

/// Area of S_a in the ambient metric.
Integral area(const Profile& p, double a, const AmbientMetric& metric, const QuadSpec& quad = {});

/// Euclidean area of S_a.
Integral flat_area(const Profile& p, double a, const QuadSpec& quad = {});

/// 2 pi a int (4 f' w w'/h' + 2 f'' w^2/h' - 2 f' w^2 h''/h'^2) dphi with f the
/// conformal factor along the profile. The integrand is the derivative of
/// 2 f' w^2 / h', so the value is zero up to quadrature error.
Integral cancellation_diagnostic(const Profile& p, double a, const AmbientMetric& metric,
                                 const QuadSpec& quad = {});

struct MassReport {
  double a = 0.0;
  std::string metric;
  std::string profile;
  double m_by = 0.0;
  double m_hawking = 0.0;
  double m_adm_flux = 0.0;
  double area = 0.0;
  double sup_H0_minus_H = 0.0;
  double diag_cancellation = 0.0;
  double quad_err = 0.0;
};

MassReport mass_report(const Profile& p, double a, const AmbientMetric& metric,
                       const QuadSpec& quad = {});

}  // namespace revmass
