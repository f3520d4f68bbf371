#include "univdyn/universal_operator.hpp"

#include <algorithm>
#include <set>

#include "univdyn/error.hpp"
#include "univdyn/pairing.hpp"

namespace univdyn::linear {

using univdyn::to_string;

SparseL1Vector SparseL1Vector::basis(Index i, const Rational& c) {
  SparseL1Vector v;
  v.add(i, c);
  return v;
}

void SparseL1Vector::add(Index i, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = coeffs_.emplace(i, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) coeffs_.erase(it);
  }
}

Rational SparseL1Vector::coefficient(Index i) const {
  auto it = coeffs_.find(i);
  return it == coeffs_.end() ? Rational(0) : it->second;
}

Rational SparseL1Vector::norm() const {
  Rational n = 0;
  for (const auto& [i, c] : coeffs_) n += abs(c);
  return n;
}

SparseL1Vector SparseL1Vector::scaled(const Rational& c) const {
  SparseL1Vector out;
  if (c == 0) return out;
  for (const auto& [i, v] : coeffs_) out.coeffs_.emplace(i, v * c);
  return out;
}

std::string SparseL1Vector::to_string() const {
  if (coeffs_.empty()) return "0";
  std::string out;
  for (const auto& [i, c] : coeffs_) {
    if (!out.empty()) out += " + ";
    out += univdyn::to_string(c) + "*e" + std::to_string(i);
  }
  return out;
}

SparseL1Vector apply_universal(const SparseL1Vector& x) {
  SparseL1Vector out;
  for (const auto& [i, c] : x.support()) out.add(injection::mu_successor(i), c);
  return out;
}

NormKind parse_norm_kind(const std::string& name) {
  if (name == "l1" || name == "L1") return NormKind::L1;
  if (name == "linf" || name == "Linf") return NormKind::Linf;
  if (name == "l2" || name == "L2") return NormKind::L2Squared;
  throw Error(ErrorCode::ParseError, "unknown norm '" + name + "'");
}

std::string to_string(NormKind kind) {
  switch (kind) {
    case NormKind::L1: return "l1";
    case NormKind::Linf: return "linf";
    case NormKind::L2Squared: return "l2";
  }
  return "?";
}

Rational BanachModel::norm_value(const RationalVector& x) const {
  Rational n = 0;
  for (const auto& c : x) {
    switch (norm) {
      case NormKind::L1: n += abs(c); break;
      case NormKind::Linf: n = std::max(n, abs(c)); break;
      case NormKind::L2Squared: n += c * c; break;
    }
  }
  return n;
}

bool BanachModel::in_unit_ball(const RationalVector& x) const { return norm_value(x) <= 1; }

std::optional<Rational> BanachModel::operator_norm(const Matrix& t) const {
  if (norm == NormKind::L2Squared) return std::nullopt;
  Rational best = 0;
  for (std::size_t a = 0; a < t.size(); ++a) {
    Rational s = 0;
    for (std::size_t b = 0; b < t.size(); ++b) s += norm == NormKind::L1 ? abs(t[b][a]) : abs(t[a][b]);
    best = std::max(best, s);
  }
  return best;
}

RationalVector apply(const Matrix& t, const RationalVector& x) {
  RationalVector y(t.size(), Rational(0));
  for (std::size_t r = 0; r < t.size(); ++r) {
    for (std::size_t c = 0; c < x.size(); ++c) y[r] += t[r][c] * x[c];
  }
  return y;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  std::size_t d = a.size();
  Matrix m(d, RationalVector(d, Rational(0)));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < d; ++j) m[i][j] += a[i][k] * b[k][j];
    }
  }
  return m;
}

Matrix identity_matrix(std::size_t d) {
  Matrix m(d, RationalVector(d, Rational(0)));
  for (std::size_t i = 0; i < d; ++i) m[i][i] = 1;
  return m;
}

RationalVector zero_vector(std::size_t d) { return RationalVector(d, Rational(0)); }

namespace {

// 0, 1, -1, 2, -2, ...
long numerator_rank(long p) { return p == 0 ? 0 : (p > 0 ? 2 * p - 1 : -2 * p); }

struct VectorLess {
  bool operator()(const RationalVector& a, const RationalVector& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [](const Rational& x, const Rational& y) { return cmp(x, y) < 0; });
  }
};

}  // namespace

std::vector<RationalVector> dense_ball_points(const BanachModel& model, std::size_t count) {
  std::vector<RationalVector> out;
  std::set<RationalVector, VectorLess> seen;
  std::size_t d = model.dimension;
  for (long q = 1; out.size() < count; ++q) {
    std::vector<std::vector<long>> grid;
    std::vector<long> p(d, -q);
    for (;;) {
      grid.push_back(p);
      std::size_t k = 0;
      while (k < d && p[k] == q) p[k++] = -q;
      if (k == d) break;
      ++p[k];
    }
    std::sort(grid.begin(), grid.end(), [](const std::vector<long>& a, const std::vector<long>& b) {
      long wa = 0, wb = 0;
      for (long v : a) wa += v < 0 ? -v : v;
      for (long v : b) wb += v < 0 ? -v : v;
      if (wa != wb) return wa < wb;
      return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                          [](long x, long y) { return numerator_rank(x) < numerator_rank(y); });
    });
    for (const auto& g : grid) {
      RationalVector x(d);
      for (std::size_t i = 0; i < d; ++i) {
        x[i] = Rational(g[i], q);
        x[i].canonicalize();
      }
      if (!model.in_unit_ball(x) || !seen.insert(x).second) continue;
      out.push_back(std::move(x));
      if (out.size() == count) break;
    }
  }
  return out;
}

const RationalVector& DynamicDenseEnumeration::z(Index i) const {
  auto e = cantor_unpair(i).first;
  if (e >= points.size()) {
    throw Error(ErrorCode::OutOfCoverage, "enumeration index " + std::to_string(i) + " refers to D[" +
                                              std::to_string(e) + "] but |D| = " + std::to_string(points.size()));
  }
  return points[e];
}

DynamicDenseEnumeration build_dynamic_dense_enumeration(const Matrix& t, const BanachModel& model,
                                                        const Rational& rho, std::vector<RationalVector> base,
                                                        std::size_t orbit_depth, Index index_budget) {
  if (t.size() != model.dimension) throw Error(ErrorCode::SpaceMismatch, "matrix size differs from model dimension");
  if (rho <= 0) throw Error(ErrorCode::NormBoundViolated, "rho must be positive");
  if (auto norm = model.operator_norm(t); norm && rho < *norm) {
    throw Error(ErrorCode::NormBoundViolated, "rho = " + to_string(rho) + " < ||T|| = " + to_string(*norm));
  }
  DynamicDenseEnumeration out;
  out.model = model;
  out.t = t;
  out.rho = rho;
  out.base_count = base.size();
  out.orbit_depth = orbit_depth;

  std::map<RationalVector, std::size_t, VectorLess> where;
  auto intern = [&](RationalVector x) -> std::pair<std::size_t, bool> {
    auto [it, inserted] = where.emplace(x, out.points.size());
    if (inserted) out.points.push_back(std::move(x));
    return {it->second, inserted};
  };
  for (auto& b : base) {
    if (b.size() != model.dimension) throw Error(ErrorCode::SpaceMismatch, "base point of wrong dimension");
    if (!model.in_unit_ball(b)) throw Error(ErrorCode::SpaceMismatch, "base point outside the unit ball");
    intern(std::move(b));
  }
  Rational inv = 1 / rho;
  auto image_of = [&](const RationalVector& x) {
    RationalVector y = apply(t, x);
    for (auto& c : y) c *= inv;
    if (!model.in_unit_ball(y)) {
      throw Error(ErrorCode::NormBoundViolated, "T(x)/rho leaves the unit ball at x = " + to_string(x));
    }
    return y;
  };
  // forward orbit closure to the requested depth
  std::size_t layer_begin = 0;
  for (std::size_t level = 0; level < orbit_depth; ++level) {
    std::size_t layer_end = out.points.size();
    for (std::size_t e = layer_begin; e < layer_end; ++e) intern(image_of(out.points[e]));
    layer_begin = layer_end;
  }
  out.successor.resize(out.points.size());
  for (std::size_t e = 0; e < out.points.size(); ++e) {
    RationalVector y = image_of(out.points[e]);
    auto it = where.find(y);
    if (it != where.end()) out.successor[e] = it->second;
  }

  // every D point must be reachable as z_{pair(e,0)} inside the budget
  Index needed = cantor_pair(out.points.size() - 1, 0) + 1;
  out.index_budget = std::max(index_budget, needed);

  std::map<Index, Index> entries;
  std::set<Index> nodes;
  std::vector<Index> next_repetition(out.points.size(), 1);
  for (Index i = 0; i < out.index_budget; ++i) {
    auto [e, r] = cantor_unpair(i);
    if (e >= out.points.size()) continue;
    nodes.insert(i);
    if (!out.successor[e]) {
      out.frontier_indices.push_back(i);
      continue;
    }
    std::size_t target = *out.successor[e];
    entries.emplace(i, cantor_pair(target, next_repetition[target]++));
  }
  // Repetition 0 of every point is never a target, so without a frontier each
  // pair(e,0) roots a forward ray of the infinite sigma.
  std::map<Index, injection::OracleEntry> oracle;
  if (out.frontier_indices.empty()) {
    for (std::size_t e = 0; e < out.points.size(); ++e) {
      Index root = cantor_pair(e, 0);
      oracle.emplace(root, injection::OracleEntry{root, injection::ComponentType::ray(), 0});
    }
  }
  out.sigma = injection::PartialInjection(std::move(entries), std::move(oracle), std::move(nodes));
  return out;
}

DynamicDenseEnumeration build_dynamic_dense_enumeration(const Matrix& t, const BanachModel& model,
                                                        const Rational& rho, std::size_t base_count,
                                                        std::size_t orbit_depth, Index index_budget) {
  return build_dynamic_dense_enumeration(t, model, rho, dense_ball_points(model, base_count), orbit_depth,
                                         index_budget);
}

FactorMap::FactorMap(std::shared_ptr<const DynamicDenseEnumeration> source, injection::EmbeddingCertificate embedding)
    : source_(std::move(source)), embedding_(std::move(embedding)) {}

RationalVector FactorMap::basis_image(Index i) const {
  if (!embedding_.in_claimed(i)) return zero_vector(source_->model.dimension);
  auto k = embedding_.preimage(i);
  if (!k) {
    throw Error(ErrorCode::OutOfCoverage,
                "e_" + std::to_string(i) + " lies on a claimed component beyond the constructed range");
  }
  return source_->z(*k);
}

RationalVector FactorMap::apply(const SparseL1Vector& x) const {
  RationalVector y = zero_vector(source_->model.dimension);
  for (const auto& [i, c] : x.support()) {
    RationalVector b = basis_image(i);
    for (std::size_t r = 0; r < y.size(); ++r) y[r] += c * b[r];
  }
  return y;
}

CheckReport FactorMap::check_commutation() const {
  CheckReport report;
  const auto& sigma = source_->sigma;
  for (const auto& [k, a] : embedding_.pi_a()) {
    if (!sigma.apply(k)) continue;  // successor outside the construction
    RationalVector lhs = linear::apply(source_->t, source_->z(k));
    SparseL1Vector rho_u = apply_universal(SparseL1Vector::basis(a)).scaled(source_->rho);
    RationalVector rhs = apply(rho_u);
    ++report.checked;
    if (lhs != rhs) {
      report.fail("i = " + std::to_string(a) + ": T(pi(e_i)) = " + to_string(lhs) + " but pi(rho U e_i) = " +
                  to_string(rhs));
    }
  }
  return report;
}

CheckReport FactorMap::check_outside_a(std::size_t count) const {
  CheckReport report;
  RationalVector zero = zero_vector(source_->model.dimension);
  for (Index i = 0; report.checked < count; ++i) {
    if (!injection::is_valid_index(i) || embedding_.in_claimed(i)) continue;
    ++report.checked;
    RationalVector lhs = linear::apply(source_->t, basis_image(i));
    RationalVector rhs = apply(apply_universal(SparseL1Vector::basis(i)).scaled(source_->rho));
    if (lhs != zero || rhs != zero) report.fail("i = " + std::to_string(i) + " off A does not vanish");
  }
  return report;
}

CheckReport FactorMap::check_d_surjectivity() const {
  CheckReport report;
  for (std::size_t e = 0; e < source_->points.size(); ++e) {
    ++report.checked;
    auto a = embedding_.image(cantor_pair(e, 0));
    if (!a) {
      report.fail("D[" + std::to_string(e) + "] has no basis vector");
      continue;
    }
    if (basis_image(*a) != source_->points[e]) report.fail("pi(e_" + std::to_string(*a) + ") != D[" + std::to_string(e) + "]");
  }
  return report;
}

CheckReport FactorMap::check_norm_bound(const std::vector<SparseL1Vector>& xs) const {
  CheckReport report;
  for (const auto& x : xs) {
    ++report.checked;
    Rational bound = x.norm();
    if (source_->model.norm == NormKind::L2Squared) bound *= bound;
    if (source_->model.norm_value(apply(x)) > bound) report.fail("||pi(x)|| > ||x||_1 at x = " + x.to_string());
  }
  return report;
}

FactorMap synthesize_factor_map(std::shared_ptr<const DynamicDenseEnumeration> source, std::size_t depth) {
  auto embedding = injection::embed_injection(source->sigma, depth);
  return FactorMap(std::move(source), std::move(embedding));
}

std::vector<SparseL1Vector> frechet_universal_apply(const std::vector<SparseL1Vector>& xs) {
  std::vector<SparseL1Vector> out;
  out.reserve(xs.size());
  for (std::size_t n = 0; n < xs.size(); ++n) out.push_back(apply_universal(xs[n]).scaled(Rational(n + 1)));
  return out;
}

RationalVector FrechetFactor::apply(const std::vector<SparseL1Vector>& xs) const {
  if (component == 0 || component > xs.size()) return zero_vector(map.source().model.dimension);
  return map.apply(xs[component - 1]);
}

FrechetFactor build_frechet_factor(const Matrix& t, const BanachModel& model, std::size_t component,
                                   std::size_t base_count, std::size_t orbit_depth, Index index_budget) {
  if (component == 0) throw Error(ErrorCode::InvalidIndex, "Frechet components are 1-based");
  auto source = std::make_shared<const DynamicDenseEnumeration>(build_dynamic_dense_enumeration(
      t, model, Rational(component), base_count, orbit_depth, index_budget));
  return FrechetFactor{component, synthesize_factor_map(source, 0)};
}

NormGrowthReport norm_growth_certificate(const Matrix& t, const BanachModel& model,
                                         const std::function<Rational(std::size_t)>& u_power_norm,
                                         std::size_t n_max) {
  if (model.norm == NormKind::L2Squared) {
    throw Error(ErrorCode::SpaceMismatch, "power norms are exact only for l1 and linf");
  }
  NormGrowthReport report;
  Matrix power = identity_matrix(t.size());
  bool all_finite = true;
  Rational sup = 0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    power = multiply(power, t);
    Rational tn = *model.operator_norm(power);
    Rational un = u_power_norm(n);
    report.t_power_norms.push_back(tn);
    if (un == 0) {
      if (tn == 0) {
        report.ratios.emplace_back(Rational(0));
      } else {
        report.ratios.emplace_back(std::nullopt);
        all_finite = false;
      }
    } else {
      Rational r = tn / un;
      sup = std::max(sup, r);
      report.ratios.emplace_back(r);
    }
  }
  if (all_finite) report.min_constant = sup;
  bool increasing = n_max >= 2;
  for (std::size_t n = 1; n < report.ratios.size() && increasing; ++n) {
    const auto& prev = report.ratios[n - 1];
    const auto& cur = report.ratios[n];
    if (!prev) {
      increasing = false;
    } else if (cur && *cur <= *prev) {
      increasing = false;
    }
  }
  report.unbounded_evidence = increasing;
  return report;
}

}  // namespace univdyn::linear
