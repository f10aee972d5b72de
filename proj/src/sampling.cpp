#include "kontact/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "kontact/errors.hpp"

namespace kontact {

namespace {

constexpr long kGrid = 4096;  // sample values are multiples of range/kGrid

bool satisfies(const std::vector<Expr>& constraints, const Point& p) {
  for (const auto& c : constraints) {
    try {
      Number v = evaluate(c, p);
      if (v.exact ? sgn(v.q) <= 0 : !(v.d > 0.0)) return false;
    } catch (const DomainError&) {
      return false;
    }
  }
  return true;
}

}  // namespace

void SampleDomain::add_variables(const std::vector<std::string>& names) {
  for (const auto& n : names) {
    if (std::find(variables.begin(), variables.end(), n) == variables.end()) variables.push_back(n);
  }
}

std::pair<Rational, Rational> SampleDomain::range_of(const std::string& name) const {
  auto it = ranges.find(name);
  return it == ranges.end() ? default_range : it->second;
}

SampleSet::SampleSet(const SampleDomain& domain, const SampleConfig& config)
    : domain_(domain), config_(config) {
  for (const auto& c : domain_.constraints) domain_.add_variables(free_variables(c));
  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<long> grid(0, kGrid);
  const int wanted = std::max(1, config.n_points);
  const long budget = static_cast<long>(wanted) * config.max_attempts_per_point;
  for (long attempt = 0; attempt < budget && static_cast<int>(points_.size()) < wanted; ++attempt) {
    Point p;
    for (const auto& name : domain_.variables) {
      auto [lo, hi] = domain_.range_of(name);
      Rational v = lo + (hi - lo) * Rational(grid(rng), kGrid);
      v.canonicalize();
      p.emplace(name, Number::rational(v));
    }
    if (satisfies(domain_.constraints, p)) points_.push_back(std::move(p));
  }
  if (points_.empty()) throw SampleDomainEmpty("no admissible sample point found");
}

void absorb(ZeroTest& acc, const ZeroTest& t) {
  if (t.verdict == ZeroVerdict::NonZero || acc.verdict == ZeroVerdict::NonZero) {
    acc.verdict = ZeroVerdict::NonZero;
  } else if (t.verdict == ZeroVerdict::Inconclusive) {
    acc.verdict = ZeroVerdict::Inconclusive;
  }
  acc.max_residual = std::max(acc.max_residual, t.max_residual);
  acc.points_used = std::max(acc.points_used, t.points_used);
  acc.exact_points = std::max(acc.exact_points, t.exact_points);
}

ZeroTest zero_test(const Expr& e, const SampleSet& samples) {
  const SampleConfig& cfg = samples.config();
  ZeroTest out;
  bool any_fail = false;
  bool all_fail_near = true;
  for (const auto& p : samples.points()) {
    try {
      if (auto q = evaluate_exact(e, p)) {
        ++out.points_used;
        ++out.exact_points;
        if (sgn(*q) != 0) {
          any_fail = true;
          all_fail_near = false;
          out.max_residual = std::max(out.max_residual, std::abs(q->get_d()));
        }
        continue;
      }
      const ScaledValue v = evaluate_scaled(e, p);
      ++out.points_used;
      const double r = std::abs(v.value);
      const double tol = cfg.atol + cfg.rtol * v.scale;
      out.max_residual = std::max(out.max_residual, r);
      if (r > tol) {
        any_fail = true;
        if (r > 1e3 * tol) all_fail_near = false;
      }
    } catch (const DomainError&) {
      // Undefined here; the identity is claimed on the open domain only.
    }
  }
  if (out.points_used == 0) throw SampleDomainEmpty("expression undefined at every sample point");
  if (!any_fail) {
    out.verdict = ZeroVerdict::Zero;
  } else if (all_fail_near) {
    out.verdict = ZeroVerdict::Inconclusive;
  } else {
    out.verdict = ZeroVerdict::NonZero;
  }
  return out;
}

ZeroTest zero_test(const Expr& e, const SampleDomain& domain, const SampleConfig& config) {
  SampleDomain d = domain;
  d.add_variables(free_variables(e));
  return zero_test(e, SampleSet(d, config));
}

bool is_probably_zero(const Expr& e, const SampleSet& samples) { return zero_test(e, samples).zero(); }

bool is_probably_zero(const Expr& e, const SampleDomain& domain, const SampleConfig& config) {
  return zero_test(e, domain, config).zero();
}

double max_abs(const Expr& e, const SampleSet& samples) {
  double m = 0.0;
  for (const auto& p : samples.points()) {
    try {
      m = std::max(m, std::abs(evaluate_double(e, p)));
    } catch (const DomainError&) {
    }
  }
  return m;
}

}  // namespace kontact
