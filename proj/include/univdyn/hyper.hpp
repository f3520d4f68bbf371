#pragma once

// Hyperspace elements at finite resolution, induced maps, compact relations
// A in N x Lambda with the step U_N(A)_S = S(A_S), and generalized factors
// (set-valued factor maps) with their composition.

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "univdyn/check.hpp"
#include "univdyn/common.hpp"
#include "univdyn/covers.hpp"
#include "univdyn/lift.hpp"
#include "univdyn/symbolic.hpp"

namespace univdyn::hyper {

using covers::CoverSystemPtr;
using covers::Region;
using symbolic::PrefixTransducer;
using symbolic::Word;

// Nonempty set of level-k cells of a cover system.
struct CompactSetApprox {
  std::size_t level = 0;
  std::set<Word> cells;

  // Throws InvalidRelation when empty or mixed-level.
  void validate() const;
  friend bool operator==(const CompactSetApprox&, const CompactSetApprox&) = default;
};

std::string to_string(const CompactSetApprox& m);

// Level-k cells meeting the region, lex order.
CompactSetApprox cells_meeting(const covers::CoverSystem& cs, const Region& r, std::size_t k);

// Cells at level k covering T(M). Throws InsufficientResolution unless the
// image of a level-|M| cell is narrower than 2^{-k}.
CompactSetApprox induced_hyper_map(const covers::CoverSystem& cs, const lift::PointMap& t, const CompactSetApprox& m,
                                   std::size_t k);

// Finite set of (member index, cylinder) with every member present.
class CompactRelation {
 public:
  // Throws InvalidRelation for a member without pairs or out of range.
  CompactRelation(std::size_t members, std::set<std::pair<std::size_t, Word>> pairs);
  // N x {x}
  static CompactRelation constant(std::size_t members, const Word& x);

  std::size_t members() const { return members_; }
  const std::set<std::pair<std::size_t, Word>>& pairs() const { return pairs_; }
  // Throws UnknownMember.
  std::set<Word> cross_section(std::size_t s) const;

  friend bool operator==(const CompactRelation&, const CompactRelation&) = default;

 private:
  std::size_t members_;
  std::set<std::pair<std::size_t, Word>> pairs_;
};

std::string to_string(const CompactRelation& a);

// Level-k cylinders meeting S([c]): S(w)|k over all w extending c to the
// modulus. Throws InsufficientResolution past 4096 extensions.
std::set<Word> image_cylinders(const PrefixTransducer& s, const Word& c, std::size_t k);

// U_N(A) at output resolution k.
CompactRelation hyper_universal_step(const std::vector<PrefixTransducer>& n, const CompactRelation& a, std::size_t k);

// z -> subset of the next space, as index sets.
using GeneralizedTable = std::vector<std::set<std::size_t>>;

// gamma(z) = union of pi(y) over y in pi_prime(z). Throws ResolutionMismatch
// when pi_prime points outside pi's domain.
GeneralizedTable compose_generalized(const GeneralizedTable& pi, const GeneralizedTable& pi_prime);

// pi(S(u)) = T(pi(u)) for all u and every x attained as some pi(u) = {x}.
CheckReport check_generalized_factor(const std::vector<std::size_t>& s, const std::vector<std::size_t>& t,
                                     const GeneralizedTable& pi);

// Per piece: members lifted to the cover's symbol space; U acts on one
// relation per piece.
struct GeneralizedPiece {
  common::MapFamily family;
  common::FamilyLift lift;
  std::vector<PrefixTransducer> members;
};

struct GeneralizedExtension {
  std::vector<GeneralizedPiece> pieces;
  std::size_t level = 0;

  std::vector<CompactRelation> step(const std::vector<CompactRelation>& a) const;
  // pi(A_S) for member j of piece i.
  CompactSetApprox factor(const std::vector<CompactRelation>& a, std::size_t piece, std::size_t member) const;
};

GeneralizedExtension common_generalized_extension(const std::vector<common::MapFamily>& pieces, std::size_t k,
                                                  std::size_t samples, std::uint64_t seed);

struct GeneralizedDiagram {
  std::size_t piece = 0;
  std::size_t member = 0;
  std::string name;
  bool ok = true;
  std::size_t checked = 0;
  std::string witness;
};

struct GeneralizedCertificate {
  bool ok = true;
  std::vector<GeneralizedDiagram> diagrams;
  // upper semicontinuity is only sampled, never decided
  std::string note;
};

// Random relations: cross sections are exact images and every output cell
// holds T of its source cell; constant relations N x {x} give singleton
// sections.
GeneralizedCertificate certify_generalized_extension(const GeneralizedExtension& ge, std::size_t samples,
                                                     std::uint64_t seed);

}  // namespace univdyn::hyper
