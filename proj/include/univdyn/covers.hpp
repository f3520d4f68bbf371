#pragma once

// Cover presentations {J_i}, {V_s}, {W_s} of concrete compact metric spaces
// with exact rational geometry: the symbol-to-point projection, Lebesgue
// numbers, verification of the cover conditions and ball location.
//
// Regions are lists of pieces, one per factor of the space. Cells V_s and W_s
// are open sets; enclosures (closures, images, balls) are closed sets.

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "univdyn/check.hpp"
#include "univdyn/rational.hpp"
#include "univdyn/symbolic.hpp"

namespace univdyn::covers {

using symbolic::Word;

// As an open cell: (lo, hi) read inside [0,1], so lo < 0 keeps 0 in the
// cell. As an enclosure: the closed interval [lo, hi] within [0,1].
struct Interval {
  Rational lo, hi;
  friend bool operator==(const Interval&, const Interval&) = default;
};
// Arc from `start` in [0,1) of the given length; length >= 1 is the circle.
struct Arc {
  Rational start, length;
  friend bool operator==(const Arc&, const Arc&) = default;
};
struct Cylinder {
  Word prefix;
  friend bool operator==(const Cylinder&, const Cylinder&) = default;
};
// Sorted point indices of a finite metric space.
struct PointSet {
  std::vector<std::size_t> points;
  friend bool operator==(const PointSet&, const PointSet&) = default;
};

using Piece = std::variant<Interval, Arc, Cylinder, PointSet>;
using Region = std::vector<Piece>;

std::string to_string(const Piece& p);
std::string to_string(const Region& r);

Region interval_region(const Rational& lo, const Rational& hi);
Region point_region(const Rational& x);
Region arc_region(const Rational& start, const Rational& length);
Region cylinder_region(Word prefix);
Region point_set_region(std::vector<std::size_t> points);

class CoverSystem {
 public:
  virtual ~CoverSystem() = default;

  virtual std::string name() const = 0;
  virtual std::size_t piece_count() const { return 1; }
  // |J_level| for level >= 1
  virtual std::size_t arity(std::size_t level) const = 0;
  // prod J_i as a symbolic space (position i holds a symbol of J_{i+1})
  symbolic::SymbolicSpace symbol_space() const;
  // Throws InvalidBranch for symbols outside J.
  void check_word(const Word& s) const;

  virtual Region whole() const = 0;
  virtual Region cell(const Word& s) const = 0;    // V_s
  virtual Region w_cell(const Word& s) const = 0;  // W_s, |s| >= 1

  virtual Region closure(const Region& open) const = 0;
  // nullopt when the intersection is empty or not a single piece
  virtual std::optional<Region> intersect(const Region& a, const Region& b) const = 0;
  virtual bool same_set(const Region& a, const Region& b) const = 0;
  // closed `inner` inside open `outer`
  virtual bool contains(const Region& outer, const Region& inner) const = 0;
  // closed superset of the open r-neighbourhood
  virtual Region inflate(const Region& closed, const Rational& r) const = 0;
  // centers whose open eps-ball lies in `open` (a subset of them); nullopt if empty
  virtual std::optional<Region> shrink(const Region& open, const Rational& eps) const = 0;
  virtual Rational diameter(const Region& r) const = 0;
  // union of open cells contains the closed target
  virtual CheckReport covers(const std::vector<Region>& open_cells, const Region& target) const = 0;

  virtual Rational lebesgue(const Word& s) const = 0;
  // lower bound of lebesgue(s) over |s| = k
  virtual Rational epsilon_level(std::size_t k) const = 0;
  // upper bound of diam V_s over |s| = k
  virtual Rational max_diameter(std::size_t k) const = 0;
};

using CoverSystemPtr = std::shared_ptr<const CoverSystem>;

// Relative subdivision of [0,1]: the closure [a,b] of V_s is split with
// h = (b-a)/5 into W_{sn} = (a+(n-1)h, a+(n+1)h), n = 0..5.
CoverSystemPtr interval_system();
// Level 1: arcs ((n-1)/6, (n+1)/6), n = 0..5; deeper levels as the interval.
CoverSystemPtr circle_system();
// Cylinders of 2^N with d(a,b) = 2^{-(n+1)}, n the first difference.
CoverSystemPtr cantor_system();
// Singletons at level 1, then two identical children per cell.
CoverSystemPtr finite_metric_system(Matrix distances);
// Max metric; the symbol of a pair is j1 * |J^Y| + j2.
CoverSystemPtr product_system(CoverSystemPtr x, CoverSystemPtr y);

// Parses "interval", "circle", "cantor", "finite:<matrix>" and "a*b".
CoverSystemPtr make_cover_system(const std::string& desc);

// Splits a product symbol word into its factor words.
std::pair<Word, Word> split_product_word(const CoverSystem& x, const CoverSystem& y, const Word& s);
Word join_product_words(const CoverSystem& y, const Word& sx, const Word& sy);

struct CoverLevelSummary {
  std::size_t level = 0;
  std::size_t cells = 0;
  Rational max_diameter;
  Rational epsilon;
};

struct CoverCertificate {
  bool ok = true;
  std::string failed_condition;
  std::string witness;
  std::vector<CoverLevelSummary> levels;
};

// Diameters, children covering closures, V_{sn} = V_s n W_{sn}, closed
// nesting, nonempty cells, level covers and Lebesgue numbers up to `depth`.
CoverCertificate verify_cover_system(const CoverSystem& cs, std::size_t depth);

// Closed cell of alpha|k. Throws InvalidBranch.
Region project_symbol_to_point(const CoverSystem& cs, const Word& alpha, std::size_t k);

// Lex-least t of length k extending `constraint` with B(center, radius) in
// V_t. Throws NoCell.
Word locate_ball(const CoverSystem& cs, const Region& center, const Rational& radius, std::size_t k,
                 const Word& constraint = {});

// Largest j with 2^{-j} >= r, i.e. an open r-ball in 2^N fixes j symbols.
std::size_t cantor_fixed_symbols(const Rational& r);

}  // namespace univdyn::covers
