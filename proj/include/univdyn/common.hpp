#pragma once

// Common extensions of families of maps: lifting a family through the
// cover projection, the universal map U_N(z)(S) = S(z(S)) on tuples, the
// assembled pipeline on N^N, and the contraction constructions (fixed
// points, controlled powers, the compact model E).

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "univdyn/check.hpp"
#include "univdyn/covers.hpp"
#include "univdyn/lift.hpp"
#include "univdyn/symbolic.hpp"

namespace univdyn::common {

using covers::CoverSystemPtr;
using covers::Region;
using lift::PointMap;
using symbolic::PrefixTransducer;
using symbolic::Word;

// Finite list of self-maps, or G(p) for sampled parameters p.
struct MapFamily {
  std::string name;
  CoverSystemPtr space;
  std::vector<PointMap> members;
  std::optional<lift::ParameterizedFamily> parameterized;
  std::vector<Word> parameters;

  static MapFamily finite(std::string name, std::vector<PointMap> members);
  static MapFamily sampled(lift::ParameterizedFamily family, std::vector<Word> parameters);
  std::size_t size() const;
  std::string member_name(std::size_t j) const;
};

struct LiftedMember {
  std::string name;
  std::shared_ptr<const lift::StrongExtension> extension;
  Word parameter;  // empty for a single map
  PrefixTransducer transducer;
  lift::LiftCertificate certificate;
};

struct FamilyLift {
  CoverSystemPtr space;
  std::vector<LiftedMember> members;
};

// Each member lifted up to `max_level`; certificates at levels <= cert_level.
FamilyLift family_lift(const MapFamily& fam, std::size_t max_level, std::size_t cert_level, std::size_t samples,
                       std::uint64_t seed);

// The same transducer read on another space (symbols are checked against
// the original domain on evaluation).
PrefixTransducer rebase(const PrefixTransducer& f, const symbolic::SymbolicSpace& space);

struct UniversalOnFunctions {
  symbolic::SymbolicSpace space;
  std::vector<PrefixTransducer> family;
  PrefixTransducer u;
  std::vector<PrefixTransducer> projections;  // pi_S, one per member
};

// Throws EmptyFamily.
UniversalOnFunctions universal_on_functions(const symbolic::SymbolicSpace& space, std::vector<PrefixTransducer> family);
// pi_S U = S pi_S on the samples at resolution k, and pi_S onto at resolution k.
CheckReport check_universal_diagrams(const UniversalOnFunctions& un, const std::vector<Word>& samples, std::size_t k);

struct PieceStage {
  MapFamily family;
  FamilyLift lift;
  std::optional<UniversalOnFunctions> universal;
};

struct CommonExtension {
  std::vector<PieceStage> pieces;
  PrefixTransducer u;  // on N^N
  std::size_t diagram_level = 0;
};

// Outer output length that exposes k symbols of every member stream.
std::size_t pipeline_output_length(const std::vector<std::size_t>& piece_sizes, std::size_t k);

CommonExtension common_extension_baire(const std::vector<MapFamily>& pieces, std::size_t k, std::size_t samples,
                                       std::uint64_t seed);

// Member j of piece i read off a point of N^N: stream j of stream i.
Word member_stream(const Word& z, std::size_t piece, std::size_t member);

struct MemberDiagram {
  std::size_t piece = 0;
  std::size_t member = 0;
  std::string name;
  bool ok = true;
  std::size_t checked = 0;
  std::string witness;
};

struct PipelineCertificate {
  bool ok = true;
  std::size_t level = 0;
  std::vector<MemberDiagram> diagrams;
};

// For sampled z: the pipeline output restricted to member (i, j) equals the
// member lift on its stream (factors of factors), and T(pi(stream)) lies in
// V_t at every level <= k.
PipelineCertificate certify_common_extension(const CommonExtension& ce, std::size_t samples, std::uint64_t seed);

// ---------------------------------------------------------------- contractions

// Distance of two points (degenerate intervals, arcs or singletons).
Rational point_distance(const covers::CoverSystem& cs, const Region& a, const Region& b);
// Grid points of [0,1] or the circle, or all points of a finite space.
std::vector<Region> sample_points(const covers::CoverSystem& cs, std::size_t grid);
// The image of a point as a point. Throws SpaceMismatch if not degenerate.
Region apply_point(const PointMap& s, const Region& x);

// Throws LipschitzRefuted with the offending pair.
void check_lipschitz(const PointMap& s, const Rational& c, const std::vector<Region>& samples);

struct FixedPoint {
  Region value;
  Rational error_bound;
  std::size_t iterations = 0;
};

// S^i(a) with i minimal such that c^i diam(X) / (1 - c) <= tol.
FixedPoint contraction_fixed_point(const PointMap& s, const Rational& c, const Region& a, const Rational& tol);

struct PowersFalsification {
  std::string s, s_prime;
  std::size_t i = 0;
  Region x;
  Rational map_distance;    // sup over samples of d(S x, S' x)
  Rational power_distance;  // d(S^i x, S'^i x)
};

struct PowersCertificate {
  enum class Status { Certified, Falsified, Inconclusive };
  Status status = Status::Inconclusive;
  std::vector<Rational> schedule;  // eps_0..eps_I
  std::optional<PowersFalsification> witness;
  std::string note;
};

std::string to_string(PowersCertificate::Status s);

// With a contraction constant c < 1 the schedule c^i diam(X) is issued and
// checked against the tabulated orbits; otherwise pairs are searched for
// powers that drift apart.
PowersCertificate controlled_powers_check(const std::vector<PointMap>& fam, std::optional<Rational> c,
                                          std::size_t grid, std::size_t depth);

// A map N -> X, one value per member.
using Tabulated = std::vector<Region>;

struct ContractiveModel {
  CoverSystemPtr space;
  std::vector<PointMap> family;
  Rational c;
  std::size_t depth = 0;
  std::vector<Region> net;
  Rational net_eps;
  // orbit[i][a] = e_{i,a}
  std::vector<std::vector<Tabulated>> orbit;
  Tabulated alpha;
  Rational fixed_point_tol;
  Rational defect;        // max d(U(e_{I,a}), alpha)
  Rational defect_bound;  // c^I diam(X)
  CheckReport diagrams;   // pi_S U = S pi_S on E minus the frontier
  CheckReport surjectivity;

  std::vector<Tabulated> elements() const;
  Tabulated apply_u(const Tabulated& e) const;
};

// Throws LipschitzRefuted, NetTooCoarse.
ContractiveModel contractive_common_extension(CoverSystemPtr cs, std::vector<PointMap> fam, const Rational& c,
                                              std::size_t depth, std::vector<Region> net, const Rational& net_eps);

// U_N(E) within tol of E (pointwise max over members) and every evaluation
// {e(S)} an eps-net of X.
CheckReport invariant_witness_check(const covers::CoverSystem& cs, const std::vector<PointMap>& fam,
                                    const std::vector<Tabulated>& e, const Rational& tol, const Rational& eps);

// Net of [0,1] or the circle with the given step, or all points of a finite space.
std::vector<Region> uniform_net(const covers::CoverSystem& cs, const Rational& step);

}  // namespace univdyn::common
