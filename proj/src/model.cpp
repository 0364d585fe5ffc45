#include "rgshock/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rgs {

void ModelSpec::finalize() {
  df_coeffs = poly_derivative(f_coeffs);
  d2f_coeffs = poly_derivative(df_coeffs);
  dM_coeffs = poly_derivative(M_coeffs);
  d2M_coeffs = poly_derivative(dM_coeffs);
}

ModelSpec preset_burgers_linear(double eps) {
  ModelSpec m;
  m.f_coeffs = {0.0, 0.0, 0.5};  // u^2/2
  m.M_coeffs = {0.0, 1.0};       // u
  m.L = 1.0;
  m.u_minus = eps;
  m.u_plus = -eps;
  m.name = "burgers-linear";
  m.finalize();
  return m;
}

ModelSpec preset_cubic_m(double eps) {
  ModelSpec m;
  m.f_coeffs = {0.0, 0.0, 0.5};
  m.M_coeffs = {0.0, 1.0, 0.0, 0.1};  // u + u^3/10
  m.L = 1.0;
  m.u_minus = eps;
  m.u_plus = -eps;
  m.name = "cubic-M";
  m.finalize();
  return m;
}

const AssumptionEntry* AssumptionReport::find(const std::string& id) const {
  for (const auto& e : entries)
    if (e.id == id) return &e;
  return nullptr;
}

AssumptionReport check_assumptions(const ModelSpec& spec, double aprime0,
                                   double b0) {
  constexpr int kGrid = 256;
  AssumptionReport rep;
  rep.grid_points = kGrid;

  const double ulo = spec.u_plus, uhi = spec.u_minus;

  // A0: smoothness.  Polynomial data is C^infinity by construction.
  rep.entries.push_back(
      {"A0", true, 1.0, true, "polynomial fluxes are smooth"});

  // Sample the u-grid once, checking for non-finite values as we go.
  double min_d2f = std::numeric_limits<double>::infinity();
  double min_LdM = std::numeric_limits<double>::infinity();
  double max_absf = 0.0;
  for (int i = 0; i < kGrid; ++i) {
    const double u = ulo + (uhi - ulo) * double(i) / double(kGrid - 1);
    const double fv = spec.f(u), d2 = spec.d2f(u), dm = spec.dM(u);
    if (!std::isfinite(fv) || !std::isfinite(d2) || !std::isfinite(dm))
      throw std::runtime_error(
          "check_assumptions: non-finite model value at u=" +
          std::to_string(u));
    min_d2f = std::min(min_d2f, d2);
    min_LdM = std::min(min_LdM, spec.L * dm);
    max_absf = std::max(max_absf, std::abs(fv));
  }

  rep.entries.push_back({"A1", min_d2f > 0.0, min_d2f, true,
                         "min d2f over check grid"});

  // A2: Rankine-Hugoniot.  Margin convention differs here: exact equality
  // (margin 0) passes, so the margin is the tolerance minus the defect.
  const double tol_rh = 1e-12 * std::max(1.0, max_absf);
  const double defect = std::abs(spec.f(spec.u_minus) - spec.f(spec.u_plus));
  rep.entries.push_back({"A2", defect <= tol_rh, tol_rh - defect, true,
                         "f(u-) - f(u+) defect vs tolerance " +
                             std::to_string(tol_rh)});

  const double a3 = spec.u_minus - spec.u_plus;
  rep.entries.push_back({"A3", a3 > 0.0, a3, true, "u- minus u+"});

  // A4 with the three distinguished values recorded in the note.
  const double u_star_guess = 0.5 * (ulo + uhi);
  const double at_minus = spec.L * spec.dM(spec.u_minus);
  const double at_plus = spec.L * spec.dM(spec.u_plus);
  const double at_star = spec.L * spec.dM(u_star_guess);
  rep.entries.push_back(
      {"A4", min_LdM > 0.0, min_LdM, true,
       "global min of L dM; at u+: " + std::to_string(at_plus) +
           ", midpoint: " + std::to_string(at_star) +
           ", u-: " + std::to_string(at_minus)});

  // Corner conditions.  These compare the radiative damping at the sonic
  // point against the corner slope of the profile.
  const bool corner_ok = std::isfinite(aprime0);
  for (int k = 1; k <= 4; ++k) {
    AssumptionEntry e;
    e.id = "A5_" + std::to_string(k);
    if (corner_ok) {
      e.margin = spec.L * b0 + (double(k) + 0.5) * aprime0;
      e.pass = e.margin > 0.0;
      e.note = "L b(0) + (k+1/2) a'(0)";
    } else {
      e.pass = true;
      e.applicable = false;
      e.margin = 0.0;
      e.note = "not applicable: profile has a subshock, no smooth corner";
    }
    rep.entries.push_back(e);
  }
  {
    AssumptionEntry e;
    e.id = "LM+2a'(0)";
    if (corner_ok) {
      e.margin = spec.L * b0 + 2.0 * aprime0;
      e.pass = e.margin > 0.0;
      e.note = "combined corner condition";
    } else {
      e.pass = true;
      e.applicable = false;
      e.margin = 0.0;
      e.note = "not applicable: profile has a subshock, no smooth corner";
    }
    rep.entries.push_back(e);
  }

  rep.all_pass = true;
  for (const auto& e : rep.entries) rep.all_pass = rep.all_pass && e.pass;
  return rep;
}

CoefficientSamples coefficient_functions(const ModelSpec& spec,
                                         const std::vector<double>& x,
                                         const std::vector<double>& U) {
  if (x.size() != U.size() || x.size() < 3)
    throw std::invalid_argument("coefficient_functions: bad grid");
  CoefficientSamples cs;
  cs.a.resize(x.size());
  cs.b.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    cs.a[i] = spec.df(U[i]);
    cs.b[i] = spec.dM(U[i]);
  }

  // Validate the normalization: exactly one sign change in a, located at
  // the node nearest x = 0.  Nodes where a is numerically zero inherit the
  // sign of the previous node for the purpose of the count.
  int changes = 0;
  std::size_t change_at = 0;
  double prev = cs.a[0];
  for (std::size_t i = 1; i < x.size(); ++i) {
    double cur = cs.a[i];
    if (cur == 0.0) cur = prev;
    if (prev != 0.0 && cur != 0.0 && (prev > 0) != (cur > 0)) {
      ++changes;
      change_at = i;
    }
    prev = cur;
  }
  if (changes != 1)
    throw std::runtime_error(
        "coefficient_functions: a(x) must change sign exactly once, found " +
        std::to_string(changes) + " changes");
  std::size_t nearest = 0;
  for (std::size_t i = 1; i < x.size(); ++i)
    if (std::abs(x[i]) < std::abs(x[nearest])) nearest = i;
  // The change is detected at the first node on the new sign; accept the
  // crossing if the zero lies between change_at-1 and change_at and the
  // nearest-to-origin node is one of the two.
  if (nearest + 1 != change_at && nearest != change_at)
    throw std::runtime_error(
        "coefficient_functions: sign change of a(x) is not at the node "
        "nearest x=0");
  return cs;
}

}  // namespace rgs
