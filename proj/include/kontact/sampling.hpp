#ifndef KONTACT_SAMPLING_HPP
#define KONTACT_SAMPLING_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "kontact/expr.hpp"

namespace kontact {

/// Tolerances and sampling parameters shared by every zero test.
struct SampleConfig {
  std::uint64_t seed = 42;
  int n_points = 64;
  double atol = 1e-10;
  double rtol = 1e-9;
  double rank_threshold = 1e-8;  // relative to the largest singular value
  int max_attempts_per_point = 400;
};

/// Where random points are drawn from: per-variable closed ranges and
/// constraint expressions that must be strictly positive.
struct SampleDomain {
  std::vector<std::string> variables;
  std::map<std::string, std::pair<Rational, Rational>> ranges;
  std::pair<Rational, Rational> default_range{Rational(1, 2), Rational(2)};
  std::vector<Expr> constraints;

  /// Adds variables not yet listed (kept in insertion order).
  void add_variables(const std::vector<std::string>& names);
  std::pair<Rational, Rational> range_of(const std::string& name) const;
};

/// A reproducible batch of exact rational points inside a domain.
class SampleSet {
 public:
  SampleSet() = default;
  SampleSet(const SampleDomain& domain, const SampleConfig& config);

  const std::vector<Point>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const SampleConfig& config() const { return config_; }
  const SampleDomain& domain() const { return domain_; }

 private:
  SampleDomain domain_;
  SampleConfig config_;
  std::vector<Point> points_;
};

enum class ZeroVerdict { Zero, NonZero, Inconclusive };

struct ZeroTest {
  ZeroVerdict verdict = ZeroVerdict::Zero;
  double max_residual = 0.0;  // largest |value| seen
  int points_used = 0;
  int exact_points = 0;

  bool zero() const { return verdict == ZeroVerdict::Zero; }
};

/// Folds t into acc: worst verdict wins, residuals and counts accumulate.
void absorb(ZeroTest& acc, const ZeroTest& t);

/// Probabilistic identity test: zero iff |e(p)| <= atol + rtol * scale(p) at
/// every sampled point (exact comparison where the value is rational). Points
/// where e is undefined are skipped; SampleDomainEmpty if none remain.
/// Inconclusive when every failing point sits within a thousand tolerances.
ZeroTest zero_test(const Expr& e, const SampleSet& samples);
ZeroTest zero_test(const Expr& e, const SampleDomain& domain, const SampleConfig& config);

bool is_probably_zero(const Expr& e, const SampleSet& samples);
bool is_probably_zero(const Expr& e, const SampleDomain& domain, const SampleConfig& config = {});

/// Maximum |e| over the sample set (float evaluation).
double max_abs(const Expr& e, const SampleSet& samples);

}  // namespace kontact

#endif  // KONTACT_SAMPLING_HPP
