#include "zzspec/dirac.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zzspec/errors.hpp"
#include "zzspec/oracle.hpp"

namespace zzspec {

void UnitSystem::validate() const {
  if (!(m >= 0.0) || !std::isfinite(m)) throw ConfigError("mass must be >= 0");
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("speed c must be > 0");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ConfigError("hbar must be > 0");
}

double dirac_energy(double lambda, const UnitSystem& units) {
  const double q = units.m * units.c / units.hbar;
  return units.hbar * units.c * std::sqrt(q * q + lambda);
}

EssentialSpectrum essential_from_threshold(std::optional<double> laplace_threshold,
                                           const UnitSystem& units) {
  units.validate();
  EssentialSpectrum out;
  out.mass_point = units.rest_energy();
  out.mass_point_note = units.m != 0.0
                            ? "isolated essential point; not an eigenvalue of the minus branch"
                            : "isolated essential point";
  if (laplace_threshold) {
    if (!(*laplace_threshold > 0.0)) throw NumericalError("threshold must be > 0");
    out.laplace_threshold = laplace_threshold;
    const double eps = dirac_energy(*laplace_threshold, units);
    out.threshold = eps;
    out.bands.push_back(Band{-eps, -eps, true, false});
    out.bands.push_back(Band{eps, eps, false, true});
  }
  return out;
}

DiracSpectrum map_spectrum(const EigResult& laplacian, std::optional<double> threshold,
                           const UnitSystem& units, int dim) {
  if (dim != 2 && dim != 3) throw ConfigError("dim must be 2 or 3");
  DiracSpectrum out;
  out.dim = dim;
  out.units = units;
  out.essential = essential_from_threshold(threshold, units);
  const int r = dim == 2 ? 1 : 2;

  std::vector<std::pair<double, double>> ev;
  for (std::size_t i = 0; i < laplacian.eigenvalues.size(); ++i) {
    const double l = laplacian.eigenvalues[i];
    if (!(l > 0.0)) throw NumericalError("non-positive Laplacian eigenvalue");
    const double res = i < laplacian.residuals.size() ? laplacian.residuals[i] : 0.0;
    ev.emplace_back(l, res);
  }
  std::sort(ev.begin(), ev.end());

  for (std::size_t i = 0; i < ev.size();) {
    std::size_t j = i + 1;
    while (j < ev.size() && ev[j].first - ev[j - 1].first <= kClusterTolerance * ev[j - 1].first)
      ++j;
    DiracPair p;
    double sum = 0.0;
    for (std::size_t q = i; q < j; ++q) {
      sum += ev[q].first;
      p.residual = std::max(p.residual, ev[q].second);
    }
    p.laplace = sum / static_cast<double>(j - i);
    p.laplace_multiplicity = static_cast<int>(j - i);
    p.multiplicity = r * p.laplace_multiplicity;
    p.plus = dirac_energy(p.laplace, units);
    p.minus = -p.plus;
    if (!threshold) {
      out.discrete.push_back(p);
    } else if (std::abs(p.laplace - *threshold) <= kNearThreshold * *threshold) {
      out.near_threshold.push_back(p);
    } else if (p.laplace < *threshold) {
      out.discrete.push_back(p);
    } else {
      out.excluded.push_back(p);
    }
    i = j;
  }
  return out;
}

void require_supported_geometry(const std::string& kind) {
  static const char* supported[] = {"bent_strip", "deformed_strip", "coupled_strips",
                                    "l_shape",    "cross",          "loop_strip",
                                    "cross_section", "twisted_fiber"};
  static const char* out_of_scope[] = {"curved_layer", "bulged_layer", "fichera_layer",
                                       "bent_tube",    "coupled_layers"};
  for (const char* s : supported)
    if (kind == s) return;
  for (const char* s : out_of_scope)
    if (kind == s)
      throw OutOfScopeError("geometry '" + kind + "' is not modelled by the solver");
  throw ConfigError("unknown geometry kind '" + kind + "'");
}

EssentialSpectrum essential_bands(const DomainSpec& spec, const UnitSystem& units,
                                  std::optional<double> fiber_bottom) {
  if (std::holds_alternative<TwistedFiber>(spec.geometry)) {
    if (!fiber_bottom) throw ConfigError("twisted fibre needs the fibre-operator bottom");
    return essential_from_threshold(fiber_bottom, units);
  }
  return essential_from_threshold(continuum_threshold(spec), units);
}

double ppw_constant_2d() {
  const double r = bessel_zero(0.0, 1) / bessel_zero(1.0, 1);
  return r * r;
}

double ppw_constant_3d() {
  const double r = std::numbers::pi / bessel_zero(1.5, 1);
  return r * r;
}

double ppw_bound(int dim, double cross, int pairs, const UnitSystem& units) {
  if (pairs < 1) throw ConfigError("ppw bound needs N >= 1");
  if (!(cross > 0.0)) throw ConfigError("ppw bound needs a positive cross-section datum");
  units.validate();
  const double factor = std::pow(3.0, 1 - pairs);
  double lap = 0.0;
  if (dim == 2) {
    const double t = std::numbers::pi / (2.0 * cross);
    lap = factor * ppw_constant_2d() * t * t;
  } else if (dim == 3) {
    lap = factor * ppw_constant_3d() * cross;
  } else {
    throw ConfigError("dim must be 2 or 3");
  }
  return dirac_energy(lap, units);
}

EssentialSpectrum fichera_essential(double eps_inf, const UnitSystem& units) {
  if (!(eps_inf > 0.0)) throw ConfigError("eps_inf must be > 0");
  return essential_from_threshold(eps_inf, units);
}

}  // namespace zzspec
