#include "renorm/truncation.hpp"

#include <algorithm>
#include <cmath>

#include "renorm/errors.hpp"

namespace renorm {

namespace {

void require_positive_level(double k) {
  if (!(k > 0.0)) throw DomainError("truncation level must be positive");
}

// Odd function with slope 1 on [0, a], linear ramp to 0 on [a, a + w], 0 beyond.
RenormFunction ramp_cutoff(double a, double w) {
  RenormFunction f;
  f.slope = [a, w](double r) {
    const double x = std::abs(r);
    if (x < a) return 1.0;
    if (x <= a + w) return (a + w - x) / w;
    return 0.0;
  };
  f.value = [a, w](double r) {
    const double x = std::abs(r);
    double v;
    if (x <= a) {
      v = x;
    } else if (x <= a + w) {
      const double d = x - a;
      v = a + d - 0.5 * d * d / w;
    } else {
      v = a + 0.5 * w;
    }
    return std::copysign(v, r);
  };
  f.curvature = [a, w](double r) {
    const double x = std::abs(r);
    if (x >= a && x <= a + w) return r > 0.0 ? -1.0 / w : (r < 0.0 ? 1.0 / w : 0.0);
    return 0.0;
  };
  return f;
}

}  // namespace

double truncate(double r, double k) {
  require_positive_level(k);
  return std::min(k, std::max(r, -k));
}

double theta(double r, double k) {
  require_positive_level(k);
  const double a = std::abs(r);
  return a < k ? 0.5 * r * r : k * a - 0.5 * k * k;
}

void CutoffSpec::validate() const {
  switch (kind) {
    case CutoffKind::hard_truncation:
      if (!(k > 0.0)) throw DomainError("cutoff: k must be positive");
      break;
    case CutoffKind::smooth_renorm:
      if (!(M > 0.0)) throw DomainError("cutoff: M must be positive");
      break;
    case CutoffKind::uniqueness_plateau:
      if (!(s > 0.0) || !(sigma > 0.0)) throw DomainError("cutoff: s and sigma must be positive");
      break;
  }
}

RenormFunction smooth_renorm(const CutoffSpec& spec) {
  if (spec.kind != CutoffKind::smooth_renorm) throw DomainError("smooth_renorm: wrong cutoff kind");
  spec.validate();
  const double blend = kSmoothRenormBlendFraction * spec.M;
  return ramp_cutoff(spec.M - blend, blend);
}

RenormFunction uniqueness_plateau(const CutoffSpec& spec) {
  if (spec.kind != CutoffKind::uniqueness_plateau)
    throw DomainError("uniqueness_plateau: wrong cutoff kind");
  spec.validate();
  return ramp_cutoff(spec.s, spec.sigma);
}

RenormFunction make_cutoff(const CutoffSpec& spec) {
  switch (spec.kind) {
    case CutoffKind::smooth_renorm:
      return smooth_renorm(spec);
    case CutoffKind::uniqueness_plateau:
      return uniqueness_plateau(spec);
    case CutoffKind::hard_truncation:
      break;
  }
  spec.validate();
  const double k = spec.k;
  return {[k](double r) { return truncate(r, k); },
          [k](double r) { return std::abs(r) < k ? 1.0 : 0.0; }, [](double) { return 0.0; }};
}

RenormFunction zero_renorm() {
  const auto zero = [](double) { return 0.0; };
  return {zero, zero, zero};
}

RenormFunction identity_renorm() {
  return {[](double r) { return r; }, [](double) { return 1.0; }, [](double) { return 0.0; }};
}

Field time_regularize(const Field& u, double k, const TimeRegularizer& reg) {
  require_positive_level(k);
  if (!(reg.mu > 0.0)) throw DomainError("time_regularize: mu must be positive");
  if (reg.psi.size() != u.n_nodes()) throw DomainError("time_regularize: psi has wrong size");

  Field eta(u.grid_ptr());
  const double decay = std::exp(-reg.mu * u.grid().dt());
  const double gain = -std::expm1(-reg.mu * u.grid().dt());
  auto first = eta.slice(0);
  for (std::size_t i = 0; i < first.size(); ++i) first[i] = truncate(reg.psi[i], k);
  for (std::size_t n = 1; n < u.n_levels(); ++n) {
    const auto prev = eta.slice(n - 1);
    const auto un = u.slice(n);
    auto next = eta.slice(n);
    for (std::size_t i = 0; i < next.size(); ++i)
      next[i] = decay * prev[i] + gain * truncate(un[i], k);
  }
  return eta;
}

}  // namespace renorm
