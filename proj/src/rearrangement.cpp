#include "renorm/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "renorm/errors.hpp"

namespace renorm {

namespace {

void check_cells(const CellFunction& u) {
  if (u.values.size() != u.measures.size())
    throw DomainError("cell function: values and measures differ in length");
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    if (!std::isfinite(u.values[i])) throw DomainError("cell function: non-finite value");
    if (!(u.measures[i] >= 0.0)) throw DomainError("cell function: negative measure");
  }
}

// |values| sorted ascending, carrying measures.
std::vector<std::pair<double, double>> sorted_magnitudes(const CellFunction& u) {
  check_cells(u);
  std::vector<std::pair<double, double>> pairs(u.values.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) pairs[i] = {std::abs(u.values[i]), u.measures[i]};
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

}  // namespace

double RearrangementTable::decreasing(double s) const {
  if (s < 0.0) throw DomainError("rearrangement evaluated at negative argument");
  double acc = 0.0;
  for (std::size_t j = thresholds.size(); j-- > 0;) {
    acc += measures[j];
    if (s < acc) return thresholds[j];
  }
  return 0.0;
}

double RearrangementTable::cumulative(double t) const {
  double acc = 0.0, integral = 0.0;
  for (std::size_t j = thresholds.size(); j-- > 0;) {
    const double take = std::min(measures[j], std::max(0.0, t - acc));
    integral += thresholds[j] * take;
    acc += measures[j];
    if (acc >= t) break;
  }
  return integral;
}

void LorentzIndex::validate() const {
  if (!(p >= 1.0) || !(q >= 1.0)) throw DomainError("Lorentz index requires p, q >= 1");
}

double distribution(const CellFunction& u, double t) {
  if (!(t >= 0.0)) throw DomainError("distribution: level must be nonnegative");
  check_cells(u);
  double m = 0.0;
  for (std::size_t i = 0; i < u.values.size(); ++i)
    if (std::abs(u.values[i]) > t) m += u.measures[i];
  return m;
}

RearrangementTable rearrange(const CellFunction& u) {
  const auto pairs = sorted_magnitudes(u);
  RearrangementTable table;
  for (const auto& [v, m] : pairs) {
    if (!table.thresholds.empty() && table.thresholds.back() == v) {
      table.measures.back() += m;
    } else {
      table.thresholds.push_back(v);
      table.measures.push_back(m);
    }
    table.total_measure += m;
  }
  return table;
}

double maximal_average(const RearrangementTable& table, double t) {
  if (!(t > 0.0) || t > table.total_measure)
    throw DomainError("maximal_average: t must lie in (0, total measure]");
  return table.cumulative(t) / t;
}

double lorentz_norm(const RearrangementTable& table, const LorentzIndex& idx) {
  idx.validate();
  const std::size_t J = table.thresholds.size();

  if (std::isinf(idx.q)) {
    if (std::isinf(idx.p)) return J == 0 ? 0.0 : table.thresholds.back();
    const double e = 1.0 / idx.p;
    double best = 0.0;
    double start = 0.0, before = 0.0;  // left endpoint of the piece and the integral up to it
    const auto g = [e](double t, double integral) { return std::pow(t, e - 1.0) * integral; };
    for (std::size_t j = J; j-- > 0;) {
      const double v = table.thresholds[j];
      const double end = start + table.measures[j];
      const double at_end = before + v * table.measures[j];
      if (end > 0.0) best = std::max(best, g(end, at_end));
      // On the piece, t^{e-1} (C + v t) with C = before - v*start has one critical point.
      const double C = before - v * start;
      if (v > 0.0 && idx.p > 1.0) {
        const double tc = (idx.p - 1.0) * C / v;
        if (tc > start && tc < end) best = std::max(best, g(tc, C + v * tc));
      }
      start = end;
      before = at_end;
    }
    return best;
  }

  const double ratio = idx.q / idx.p;  // zero when p is infinite
  double sum = 0.0, start = 0.0;
  for (std::size_t j = J; j-- > 0;) {
    const double v = table.thresholds[j];
    const double end = start + table.measures[j];
    if (v > 0.0 && table.measures[j] > 0.0) {
      if (std::isinf(idx.p)) return kInf;
      sum += std::pow(v, idx.q) * (std::pow(end, ratio) - std::pow(start, ratio)) / ratio;
    }
    start = end;
  }
  return std::pow(sum, 1.0 / idx.q);
}

double lorentz_norm(const CellFunction& u, const LorentzIndex& idx) {
  return lorentz_norm(rearrange(u), idx);
}

double lebesgue_norm(const RearrangementTable& table, double p) {
  if (!(p >= 1.0)) throw DomainError("lebesgue_norm: p must be >= 1");
  if (std::isinf(p)) return table.thresholds.empty() ? 0.0 : table.thresholds.back();
  double sum = 0.0;
  for (std::size_t j = 0; j < table.thresholds.size(); ++j)
    sum += std::pow(table.thresholds[j], p) * table.measures[j];
  return std::pow(sum, 1.0 / p);
}

double lebesgue_norm_via_distribution(const CellFunction& u, double p) {
  if (!(p >= 1.0) || std::isinf(p))
    throw DomainError("lebesgue_norm_via_distribution: need 1 <= p < inf");
  const auto pairs = sorted_magnitudes(u);
  // delta is constant on [a_{j-1}, a_j) and equals the measure of the cells at or above a_j.
  double tail = 0.0;
  for (const auto& pr : pairs) tail += pr.second;
  double sum = 0.0, prev = 0.0;
  for (std::size_t i = 0; i < pairs.size();) {
    const double a = pairs[i].first;
    if (a > prev) sum += tail * (std::pow(a, p) - std::pow(prev, p));
    double removed = 0.0;
    std::size_t j = i;
    while (j < pairs.size() && pairs[j].first == a) removed += pairs[j++].second;
    tail -= removed;
    prev = a;
    i = j;
  }
  return std::pow(sum, 1.0 / p);
}

}  // namespace renorm
