#include "kontact/kcontact.hpp"

#include <algorithm>

#include "kontact/errors.hpp"
#include "kontact/linalg.hpp"

namespace kontact {

KContactStructure::KContactStructure(RkOneForm eta) : eta_(std::move(eta)) {
  if (eta_.empty()) throw KMismatch("a k-contact form needs k >= 1");
  for (const auto& f : eta_) {
    require_same_chart(f.chart(), eta_.front().chart());
    if (f.degree() != 1) throw InvalidArgument("k-contact components must be one-forms");
  }
  for (const auto& f : eta_) d_eta_.push_back(exterior_derivative(f));
}

std::vector<Expr> KContactStructure::coefficients() const {
  std::vector<Expr> out;
  for (const auto& f : eta_) {
    for (const auto& [k, c] : f.terms()) out.push_back(c);
  }
  for (const auto& f : d_eta_) {
    for (const auto& [k, c] : f.terms()) out.push_back(c);
  }
  return out;
}

SampleDomain KContactStructure::domain() const { return domain_for(chart(), coefficients()); }

Eigen::MatrixXd eta_matrix(const KContactStructure& s, const Point& p) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(s.k(), s.dim());
  for (int a = 0; a < s.k(); ++a) {
    for (const auto& [key, c] : s.eta()[static_cast<std::size_t>(a)].terms()) m(a, key[0]) = evaluate_double(c, p);
  }
  return m;
}

std::vector<Eigen::MatrixXd> d_eta_matrices(const KContactStructure& s, const Point& p) {
  std::vector<Eigen::MatrixXd> out;
  for (const auto& w : s.d_eta()) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(s.dim(), s.dim());
    for (const auto& [key, c] : w.terms()) {
      const double v = evaluate_double(c, p);
      m(key[0], key[1]) = v;
      m(key[1], key[0]) = -v;
    }
    out.push_back(std::move(m));
  }
  return out;
}

Eigen::MatrixXd field_matrix(const std::vector<VectorField>& fields, const Point& p) {
  if (fields.empty()) return {};
  const int dim = fields.front().chart().dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, static_cast<Eigen::Index>(fields.size()));
  for (std::size_t c = 0; c < fields.size(); ++c) {
    for (int i = 0; i < dim; ++i) {
      const Expr& e = fields[c][i];
      if (!e.is_zero()) m(i, static_cast<Eigen::Index>(c)) = evaluate_double(e, p);
    }
  }
  return m;
}

Expr pairing(const DifferentialForm& w, const VectorField& x, const VectorField& y) {
  if (w.degree() != 2) throw InvalidArgument("pairing needs a 2-form");
  return interior_product(y, interior_product(x, w)).coeff({});
}

// ---------------------------------------------------------------------------
// Verification

PointRanks ranks_at(const KContactStructure& s, const Point& p, double rank_threshold) {
  const Eigen::MatrixXd eta = eta_matrix(s, p);
  const auto omegas = d_eta_matrices(s, p);
  Eigen::MatrixXd stacked(s.k() * s.dim(), s.dim());
  for (int a = 0; a < s.k(); ++a) stacked.middleRows(a * s.dim(), s.dim()) = omegas[static_cast<std::size_t>(a)];
  Eigen::MatrixXd both(stacked.rows() + s.k(), s.dim());
  both << eta, stacked;
  PointRanks pr;
  pr.point = p;
  pr.eta_rank = numeric_rank(eta, rank_threshold);
  pr.d_eta_kernel = s.dim() - numeric_rank(stacked, rank_threshold);
  pr.intersection = s.dim() - numeric_rank(both, rank_threshold);
  pr.condition1 = pr.eta_rank == s.k();
  pr.condition2 = pr.d_eta_kernel == s.k();
  pr.condition3 = pr.intersection == 0;
  return pr;
}

StructureReport verify_kcontact(const KContactStructure& s, const SampleConfig& config, int n_points) {
  SampleConfig cfg = config;
  cfg.n_points = n_points;
  SampleSet samples(s.domain(), cfg);
  StructureReport r;
  r.k = s.k();
  r.dim = s.dim();
  r.condition1 = r.condition2 = r.condition3 = true;
  for (const auto& p : samples.points()) {
    PointRanks pr;
    try {
      pr = ranks_at(s, p, cfg.rank_threshold);
    } catch (const DomainError&) {
      ++r.undefined_points;
      continue;
    }
    r.condition1 = r.condition1 && pr.condition1;
    r.condition2 = r.condition2 && pr.condition2;
    r.condition3 = r.condition3 && pr.condition3;
    if (!(pr.condition1 && pr.condition2 && pr.condition3)) {
      r.degenerate_points.push_back(static_cast<int>(r.points.size()));
    }
    r.points.push_back(std::move(pr));
  }
  if (r.points.empty()) throw SampleDomainEmpty("structure undefined at every sample point");
  return r;
}

// ---------------------------------------------------------------------------
// Reeb frame

ReebFrame compute_reeb(const KContactStructure& s, const SampleConfig& config) {
  const int k = s.k(), dim = s.dim();
  std::vector<std::vector<Expr>> a;  // rows x dim
  std::vector<std::vector<Expr>> b;  // rows x k
  for (int beta = 0; beta < k; ++beta) {
    std::vector<Expr> row(static_cast<std::size_t>(dim), Expr(0));
    for (const auto& [key, c] : s.eta()[static_cast<std::size_t>(beta)].terms()) row[static_cast<std::size_t>(key[0])] = c;
    std::vector<Expr> rhs(static_cast<std::size_t>(k), Expr(0));
    rhs[static_cast<std::size_t>(beta)] = 1;
    a.push_back(std::move(row));
    b.push_back(std::move(rhs));
  }
  for (int beta = 0; beta < k; ++beta) {
    const auto& w = s.d_eta()[static_cast<std::size_t>(beta)];
    for (int j = 0; j < dim; ++j) {
      std::vector<Expr> row(static_cast<std::size_t>(dim), Expr(0));
      bool any = false;
      for (int i = 0; i < dim; ++i) {
        if (i == j) continue;
        Expr c = w.coeff({i, j});
        if (!c.is_zero()) {
          row[static_cast<std::size_t>(i)] = c;
          any = true;
        }
      }
      if (!any) continue;
      a.push_back(std::move(row));
      b.push_back(std::vector<Expr>(static_cast<std::size_t>(k), Expr(0)));
    }
  }

  SampleSet samples(s.domain(), config);
  auto verdict = [&](const Expr& e) {
    if (e.is_constant()) return e.is_zero() ? ZeroVerdict::Zero : ZeroVerdict::NonZero;
    return zero_test(e, samples).verdict;
  };

  const std::size_t rows = a.size();
  std::vector<std::size_t> pivot_row(static_cast<std::size_t>(dim));
  std::size_t next = 0;
  for (int c = 0; c < dim; ++c) {
    const auto col = static_cast<std::size_t>(c);
    std::optional<std::size_t> pivot;
    for (std::size_t r = next; r < rows && !pivot; ++r) {
      switch (verdict(a[r][col])) {
        case ZeroVerdict::NonZero:
          pivot = r;
          break;
        case ZeroVerdict::Inconclusive:
          throw ZeroTestInconclusive("ambiguous pivot for coordinate " + s.chart().coordinate(c));
        case ZeroVerdict::Zero:
          a[r][col] = 0;
          break;
      }
    }
    if (!pivot) throw SingularSystem("Reeb system has no pivot for coordinate " + s.chart().coordinate(c));
    std::swap(a[*pivot], a[next]);
    std::swap(b[*pivot], b[next]);
    const Expr inv = pow(a[next][col], -1);
    for (auto& e : a[next]) e = e * inv;
    for (auto& e : b[next]) e = e * inv;
    a[next][col] = 1;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == next || a[r][col].is_zero()) continue;
      const Expr f = a[r][col];
      for (std::size_t j = 0; j < a[r].size(); ++j) {
        if (!a[next][j].is_zero()) a[r][j] = a[r][j] - f * a[next][j];
      }
      for (std::size_t j = 0; j < b[r].size(); ++j) {
        if (!b[next][j].is_zero()) b[r][j] = b[r][j] - f * b[next][j];
      }
      a[r][col] = 0;
    }
    pivot_row[col] = next++;
  }
  for (std::size_t r = next; r < rows; ++r) {
    for (const auto& e : b[r]) {
      const ZeroVerdict v = verdict(e);
      if (v == ZeroVerdict::Inconclusive) throw ZeroTestInconclusive("ambiguous consistency row in Reeb system");
      if (v == ZeroVerdict::NonZero) throw SingularSystem("Reeb system is inconsistent");
    }
  }

  ReebFrame frame;
  for (int alpha = 0; alpha < k; ++alpha) {
    std::vector<Expr> comps;
    for (int c = 0; c < dim; ++c) {
      Expr e = b[pivot_row[static_cast<std::size_t>(c)]][static_cast<std::size_t>(alpha)];
      if (!e.is_constant() && verdict(e) == ZeroVerdict::Zero) e = 0;
      comps.push_back(e);
    }
    frame.fields.emplace_back(s.chart(), std::move(comps));
  }
  return frame;
}

ZeroTest check_reeb_frame(const KContactStructure& s, const ReebFrame& f, const SampleConfig& config) {
  if (static_cast<int>(f.fields.size()) != s.k()) throw KMismatch("frame size differs from k");
  std::vector<DifferentialForm> residuals;
  std::vector<Expr> exprs;
  for (int a = 0; a < s.k(); ++a) {
    for (int b = 0; b < s.k(); ++b) {
      const auto& r = f.fields[static_cast<std::size_t>(a)];
      Expr duality = interior_product(r, s.eta()[static_cast<std::size_t>(b)]).coeff({}) - Expr(a == b ? 1 : 0);
      exprs.push_back(duality);
      DifferentialForm ann = interior_product(r, s.d_eta()[static_cast<std::size_t>(b)]);
      for (const auto& [key, c] : ann.terms()) exprs.push_back(c);
    }
  }
  SampleSet samples(domain_for(s.chart(), exprs), config);
  ZeroTest acc;
  acc.points_used = static_cast<int>(samples.size());
  for (const auto& e : exprs) {
    if (!e.is_zero()) absorb(acc, zero_test(e, samples));
  }
  return acc;
}

bool check_reeb_commutation(const ReebFrame& f, const SampleConfig& config) {
  if (f.fields.empty()) return true;
  std::vector<VectorField> brackets;
  std::vector<Expr> exprs;
  for (std::size_t a = 0; a < f.fields.size(); ++a) {
    for (std::size_t b = a + 1; b < f.fields.size(); ++b) {
      brackets.push_back(lie_bracket(f.fields[a], f.fields[b]));
      for (const auto& c : brackets.back().components()) exprs.push_back(c);
    }
  }
  bool all_structural = std::all_of(exprs.begin(), exprs.end(), [](const Expr& e) { return e.is_zero(); });
  if (all_structural) return true;
  SampleSet samples(domain_for(f.fields.front().chart(), exprs), config);
  return std::all_of(brackets.begin(), brackets.end(),
                     [&](const VectorField& x) { return zero_test(x, samples).zero(); });
}

// ---------------------------------------------------------------------------
// Canonical structure and polarizations

std::string canonical_s(int alpha) { return "s_" + std::to_string(alpha); }
std::string canonical_q(int i) { return "q_" + std::to_string(i); }
std::string canonical_p(int alpha, int i) { return "p_" + std::to_string(alpha) + "_" + std::to_string(i); }

KContactStructure canonical_structure(int n, int k) {
  if (n < 1 || k < 1) throw InvalidArgument("canonical structure needs n, k >= 1");
  std::vector<std::string> coords;
  for (int a = 1; a <= k; ++a) coords.push_back(canonical_s(a));
  for (int i = 1; i <= n; ++i) coords.push_back(canonical_q(i));
  for (int a = 1; a <= k; ++a) {
    for (int i = 1; i <= n; ++i) coords.push_back(canonical_p(a, i));
  }
  Chart chart(coords);
  RkOneForm eta;
  for (int a = 1; a <= k; ++a) {
    DifferentialForm e = DifferentialForm::basis(chart, canonical_s(a));
    for (int i = 1; i <= n; ++i) e.add({chart.index_of(canonical_q(i))}, -var(canonical_p(a, i)));
    eta.push_back(std::move(e));
  }
  return KContactStructure(std::move(eta));
}

std::optional<int> polarized_n(int dim, int k) {
  if (dim <= k || (dim - k) % (k + 1) != 0) return std::nullopt;
  return (dim - k) / (k + 1);
}

PolarizationReport check_polarization(const KContactStructure& s, const std::vector<VectorField>& v,
                                      const SampleConfig& config, int n_points) {
  for (const auto& x : v) require_same_chart(x.chart(), s.chart());
  PolarizationReport r;
  if (auto n = polarized_n(s.dim(), s.k())) r.expected_rank = *n * s.k();

  std::vector<Expr> annihilation, isotropy;
  for (const auto& x : v) {
    for (const auto& eta : s.eta()) annihilation.push_back(interior_product(x, eta).coeff({}));
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      for (const auto& w : s.d_eta()) isotropy.push_back(pairing(w, v[i], v[j]));
    }
  }
  std::vector<VectorField> brackets;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) brackets.push_back(lie_bracket(v[i], v[j]));
  }

  std::vector<Expr> all = s.coefficients();
  all.insert(all.end(), annihilation.begin(), annihilation.end());
  for (const auto& x : v) all.insert(all.end(), x.components().begin(), x.components().end());
  SampleSet samples(domain_for(s.chart(), all), config);

  auto all_zero = [&](const std::vector<Expr>& exprs) {
    ZeroTest acc;
    for (const auto& e : exprs) {
      if (!e.is_zero()) absorb(acc, zero_test(e, samples));
    }
    r.max_residual = std::max(r.max_residual, acc.max_residual);
    return acc.zero();
  };
  r.annihilates = all_zero(annihilation);
  r.isotropic = all_zero(isotropy);

  SampleConfig cfg = config;
  cfg.n_points = n_points;
  SampleSet rank_points(domain_for(s.chart(), all), cfg);
  r.full_rank = r.expected_rank >= 0;
  r.involutive = true;
  r.min_rank = static_cast<int>(v.size());
  for (const auto& p : rank_points.points()) {
    Eigen::MatrixXd span = field_matrix(v, p);
    const int rank = v.empty() ? 0 : numeric_rank(span, cfg.rank_threshold);
    r.min_rank = std::min(r.min_rank, rank);
    if (rank != r.expected_rank) r.full_rank = false;
    if (!brackets.empty()) {
      Eigen::MatrixXd aug(span.rows(), span.cols() + static_cast<Eigen::Index>(brackets.size()));
      aug << span, field_matrix(brackets, p);
      if (numeric_rank(aug, cfg.rank_threshold) != rank) r.involutive = false;
    }
  }
  return r;
}

}  // namespace kontact
