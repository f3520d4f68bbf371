#pragma once

// The universal operator U on l1, U(e_n) = e_{mu(n)}, and exact synthesis of
// the linear factor map pi with T pi = pi (rho U) for a rational matrix T on
// a finite-dimensional rational Banach model.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "univdyn/check.hpp"
#include "univdyn/injection_graph.hpp"
#include "univdyn/rational.hpp"

namespace univdyn::linear {

using injection::Index;

// Finitely supported l1 vector; zero coefficients are never stored.
class SparseL1Vector {
 public:
  SparseL1Vector() = default;
  static SparseL1Vector basis(Index i, const Rational& c = 1);

  void add(Index i, const Rational& c);
  Rational coefficient(Index i) const;
  const std::map<Index, Rational>& support() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  Rational norm() const;
  SparseL1Vector scaled(const Rational& c) const;
  std::string to_string() const;

  friend bool operator==(const SparseL1Vector&, const SparseL1Vector&) = default;

 private:
  std::map<Index, Rational> coeffs_;
};

SparseL1Vector apply_universal(const SparseL1Vector& x);

enum class NormKind { L1, Linf, L2Squared };

NormKind parse_norm_kind(const std::string& name);
std::string to_string(NormKind kind);

struct BanachModel {
  std::size_t dimension = 1;
  NormKind norm = NormKind::L1;

  // For L2Squared this is the squared euclidean norm.
  Rational norm_value(const RationalVector& x) const;
  bool in_unit_ball(const RationalVector& x) const;
  // Exact operator norm for L1 (max column sum) and Linf (max row sum);
  // nullopt for L2, where the caller certifies the bound.
  std::optional<Rational> operator_norm(const Matrix& t) const;
};

RationalVector apply(const Matrix& t, const RationalVector& x);
Matrix multiply(const Matrix& a, const Matrix& b);
Matrix identity_matrix(std::size_t d);
RationalVector zero_vector(std::size_t d);

// First `count` points of the fixed rational enumeration of the unit ball:
// denominators 1, 2, 3, ..., within a denominator by numerator weight, points
// already seen at a smaller denominator skipped.
std::vector<RationalVector> dense_ball_points(const BanachModel& model, std::size_t count);

struct DynamicDenseEnumeration {
  BanachModel model;
  Matrix t;
  Rational rho;
  std::size_t base_count = 0;
  std::size_t orbit_depth = 0;
  std::vector<RationalVector> points;                   // D
  std::vector<std::optional<std::size_t>> successor;    // D index of T(D[e])/rho
  Index index_budget = 0;                               // covered indices are [0, budget)
  std::vector<Index> frontier_indices;                  // covered, image outside D
  injection::PartialInjection sigma;

  // z_i = D[e] for i = pair(e, r); throws OutOfCoverage when e >= |D|.
  const RationalVector& z(Index i) const;
};

// Throws NormBoundViolated when rho < ||T|| is refuted exactly.
DynamicDenseEnumeration build_dynamic_dense_enumeration(const Matrix& t, const BanachModel& model,
                                                        const Rational& rho, std::vector<RationalVector> base,
                                                        std::size_t orbit_depth, Index index_budget);
DynamicDenseEnumeration build_dynamic_dense_enumeration(const Matrix& t, const BanachModel& model,
                                                        const Rational& rho, std::size_t base_count,
                                                        std::size_t orbit_depth, Index index_budget);

using univdyn::CheckReport;

class FactorMap {
 public:
  FactorMap(std::shared_ptr<const DynamicDenseEnumeration> source, injection::EmbeddingCertificate embedding);

  const DynamicDenseEnumeration& source() const { return *source_; }
  const injection::EmbeddingCertificate& embedding() const { return embedding_; }

  // pi(e_i): z_{pi_A^{-1}(i)} on the covered part of A, 0 off A. Throws
  // OutOfCoverage for indices on a claimed component beyond the construction.
  RationalVector basis_image(Index i) const;
  RationalVector apply(const SparseL1Vector& x) const;

  // T pi(e_i) = pi(rho U e_i) on every i in A whose successor is covered.
  CheckReport check_commutation() const;
  // Both sides vanish for the first `count` valid indices off A.
  CheckReport check_outside_a(std::size_t count) const;
  // D[e] = pi(e_{pi_A(pair(e,0))}) for every e.
  CheckReport check_d_surjectivity() const;
  // ||pi(x)|| <= ||x||_1 on the given vectors.
  CheckReport check_norm_bound(const std::vector<SparseL1Vector>& xs) const;

 private:
  std::shared_ptr<const DynamicDenseEnumeration> source_;
  injection::EmbeddingCertificate embedding_;
};

FactorMap synthesize_factor_map(std::shared_ptr<const DynamicDenseEnumeration> source, std::size_t depth);

// Component n (1-based) goes to n U(x_n).
std::vector<SparseL1Vector> frechet_universal_apply(const std::vector<SparseL1Vector>& xs);

// Factor of the Frechet universal map for an operator with ||T|| <= n:
// project component n, then apply the synthesis built with rho = n.
struct FrechetFactor {
  std::size_t component = 1;
  FactorMap map;

  RationalVector apply(const std::vector<SparseL1Vector>& xs) const;
};

FrechetFactor build_frechet_factor(const Matrix& t, const BanachModel& model, std::size_t component,
                                   std::size_t base_count, std::size_t orbit_depth, Index index_budget);

struct NormGrowthReport {
  std::vector<Rational> t_power_norms;                 // ||T^n||, n = 1..N
  std::vector<std::optional<Rational>> ratios;         // nullopt: ||U^n|| = 0 < ||T^n||
  std::optional<Rational> min_constant;                // sup of ratios when finite
  bool unbounded_evidence = false;                     // ratios strictly increase on 1..N
};

NormGrowthReport norm_growth_certificate(const Matrix& t, const BanachModel& model,
                                         const std::function<Rational(std::size_t)>& u_power_norm,
                                         std::size_t n_max);

}  // namespace univdyn::linear
