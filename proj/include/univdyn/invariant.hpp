#pragma once

// Finite-depth tower of disjoint open cells around a finite invariant point
// set Z of an interval map: level j cells have diameter < 2^{-j}, cover Z, and
// (away from the frontier) map into a single level j-1 cell.

#include <cstddef>
#include <string>
#include <vector>

#include "univdyn/check.hpp"
#include "univdyn/lift.hpp"
#include "univdyn/rational.hpp"

namespace univdyn::invariant {

// Open interval (lo, hi) of the line, read relative to the domain.
struct OpenCell {
  Rational lo, hi;
  friend bool operator==(const OpenCell&, const OpenCell&) = default;
};

struct TowerLevel {
  std::size_t level = 0;
  std::vector<OpenCell> cells;  // sorted, one per point of Z
  // index of the level j-1 cell holding T of cell n; npos at frontier points
  std::vector<std::size_t> image_cell;
};

struct InvariantTower {
  std::string map_name;
  Rational domain_lo, domain_hi;
  std::vector<Rational> z;         // sorted
  std::vector<Rational> frontier;  // sorted subset of z
  // levels[0] is the whole domain
  std::vector<TowerLevel> levels;

  std::size_t depth() const { return levels.size() - 1; }
  // Some level-j cell contains x, for every j <= J.
  bool in_partial_intersection(const Rational& x, std::size_t j) const;
};

std::string to_string(const InvariantTower& t);
// Indented per-level listing for terminals.
std::string render_tree(const InvariantTower& t);

// Throws NotInvariant with the first non-frontier z whose image leaves Z,
// ModulusTooCoarse when no radius down to 2^{-400} passes, SpaceMismatch for
// maps not on an interval.
InvariantTower invariant_refinement_tower(const lift::PointMap& t, std::vector<Rational> z,
                                          std::vector<Rational> frontier, std::size_t depth);

struct TowerCertificate {
  CheckReport disjoint, diameter, covering, containment, nesting;
  bool ok() const { return disjoint.ok && diameter.ok && covering.ok && containment.ok && nesting.ok; }
};

// Recomputes every property from the cells and the map's interval images.
TowerCertificate certify_tower(const lift::PointMap& t, const InvariantTower& tower);

}  // namespace univdyn::invariant
