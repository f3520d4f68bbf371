#pragma once

// Lifting continuous maps through the cover projection pi: Lambda -> X.
// A self-map T of X becomes a transducer S with pi S = T pi; a family
// Phi(p) = pi F(p) parameterized over 2^N becomes a bi-transducer F; maps
// from N^N into a Polish presentation lift through the antichain scheme.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "univdyn/check.hpp"
#include "univdyn/covers.hpp"
#include "univdyn/rational.hpp"
#include "univdyn/symbolic.hpp"

namespace univdyn::lift {

using covers::CoverSystemPtr;
using covers::Region;
using symbolic::PrefixTransducer;
using symbolic::Symbol;
using symbolic::Word;

// Self-map of X through closed enclosures: image(E) contains T(E) and has
// diameter at most modulus(diam E).
struct PointMap {
  std::string name;
  CoverSystemPtr space;
  std::function<Region(const Region&)> image;
  std::function<Rational(const Rational&)> modulus;
  std::optional<Rational> lipschitz;

  Region operator()(const Region& e) const { return image(e); }
};

PointMap identity_map(CoverSystemPtr space);
PointMap constant_map(CoverSystemPtr space, Region point);
// On [0,1].
PointMap square_map();
PointMap tent_map();
// x -> a x + b; SpaceMismatch unless [0,1] maps into itself.
PointMap affine_map(const Rational& a, const Rational& b);
// On the circle.
PointMap rotation_map(const Rational& theta);
// A self-map of 2^N acting on the Cantor cover system.
PointMap transducer_map(PrefixTransducer f);
// x -> table[x] on a finite metric space; the modulus is its Lipschitz constant.
PointMap finite_map(CoverSystemPtr space, std::vector<std::size_t> table);

// p -> Phi(p) for p in 2^N. region(q, E) encloses the union of Phi(p)(E)
// over all p extending q, with diameter at most
// input_modulus(diam E) + param_modulus(|q|).
struct ParameterizedFamily {
  std::string name;
  CoverSystemPtr space;
  std::function<Region(const Word& q, const Region& e)> region;
  std::function<Rational(const Rational&)> input_modulus;
  std::function<Rational(std::size_t)> param_modulus;
};

// Phi(p) = T for every p.
ParameterizedFamily constant_family(const PointMap& t);
// Rotation of the circle by theta(p) = sum p_i 2^{-i-2}.
ParameterizedFamily rotation_family();
Rational rotation_angle(const Word& p);

struct LevelResult {
  std::size_t level = 0;
  std::size_t checked = 0;
  bool ok = true;
};

struct LiftCertificate {
  bool ok = true;
  std::size_t samples = 0;
  std::vector<LevelResult> levels;
  std::string witness;
};

class StrongExtension {
 public:
  // Moduli l_k, m_k for k <= max_level from the cover's level epsilons.
  StrongExtension(CoverSystemPtr cs, ParameterizedFamily phi, std::size_t max_level);
  // Caller-chosen moduli; entry k-1 serves level k.
  StrongExtension(CoverSystemPtr cs, ParameterizedFamily phi, std::vector<std::size_t> param_moduli,
                  std::vector<std::size_t> input_moduli);

  const covers::CoverSystem& cover() const { return *cs_; }
  CoverSystemPtr cover_ptr() const { return cs_; }
  const ParameterizedFamily& family() const { return phi_; }
  std::size_t max_level() const { return m_.size(); }
  std::size_t param_modulus(std::size_t k) const;
  std::size_t input_modulus(std::size_t k) const;

  // t_1, ..., t_k with t_j = F(q)(s)|j. Throws InsufficientInput, NoCell,
  // InsufficientResolution (k above max_level).
  std::vector<Word> chain(const Word& q, const Word& s, std::size_t k) const;
  Word evaluate(const Word& q, const Word& s, std::size_t k) const;

  // F(p) as a transducer on the cover's symbol space; p must cover l_max.
  PrefixTransducer transducer_for(const Word& p) const;

  // Sampled (p, alpha): prefix coherence, and the deep enclosure
  // Phi-region(p, closure V_alpha) inside V_t for each level.
  LiftCertificate certify(std::size_t k_max, std::size_t samples, std::uint64_t seed) const;
  LiftCertificate certify_pairs(std::size_t k_max, const std::vector<std::pair<Word, Word>>& pairs) const;

  // Random words long enough for level k_max (plus `extra` symbols).
  Word sample_parameter(std::size_t k_max, std::uint64_t seed, std::size_t extra = 8) const;
  Word sample_input(std::size_t k_max, std::uint64_t seed, std::size_t extra = 8) const;

 private:
  CoverSystemPtr cs_;
  ParameterizedFamily phi_;
  std::vector<std::size_t> l_;
  std::vector<std::size_t> m_;
};

struct SelfLift {
  PointMap map;
  StrongExtension extension;
  PrefixTransducer transducer;
};

// S with pi S = T pi up to max_level.
SelfLift lift_self_map(CoverSystemPtr cs, const PointMap& t, std::size_t max_level);
LiftCertificate certify_self_lift(const SelfLift& lift, std::size_t k_max, std::size_t samples, std::uint64_t seed);

// ---------------------------------------------------------------- Baire

// Open sets V_t over finite sequences of N, with geometry from a cover system.
struct PolishPresentation {
  std::string name;
  CoverSystemPtr geometry;
  std::function<Region(const Word&)> cell;
  // children of a node are searched below this index
  std::size_t child_bound = 64;
  // finitely many children whose union is checked against closure samples
  std::function<std::vector<Region>(const Word&)> sample_points;
};

// N^N with cylinders.
PolishPresentation baire_cylinder_presentation();
// [0,1]: five overlapping core children of length L/4 and two sequences of
// side children accumulating at open ends; a closed end gets one cell.
PolishPresentation interval_polish_presentation();

// Diameters, closure(V_ti) inside V_t for i < sample_children, and that the
// children cover the sample points of each V_t, up to `depth`.
CheckReport verify_polish_presentation(const PolishPresentation& ps, std::size_t depth,
                                       std::size_t sample_children = 3);

// phi: N^N -> X through enclosures of phi([s]).
struct BaireMap {
  std::string name;
  std::function<Region(const Word&)> enclosure;
};

BaireMap baire_identity();
// alpha -> sum (alpha_i mod 2) 2^{-(i+1)} in [0,1]
BaireMap parity_binary_map();
BaireMap baire_constant(Region point);

class BaireExtension {
 public:
  BaireExtension(PolishPresentation ps, BaireMap phi, std::size_t max_prefix = 96);

  // (s_j, t_j) for j = 1..k, s_j the shortest prefix of alpha (extending
  // s_{j-1}) whose enclosure lies in a child of t_{j-1}. Throws
  // InsufficientInput or NoCell.
  std::vector<std::pair<Word, Word>> chain(const Word& alpha, std::size_t k) const;
  Word evaluate(const Word& alpha, std::size_t k) const;
  // S_k restricted to words over symbols < symbol_bound.
  std::vector<Word> antichain(std::size_t k, std::size_t symbol_bound, std::size_t max_length) const;

  const PolishPresentation& presentation() const { return ps_; }
  const BaireMap& map() const { return phi_; }

 private:
  std::optional<std::vector<std::pair<Word, Word>>> chain_within(const Word& s, std::size_t k) const;

  PolishPresentation ps_;
  BaireMap phi_;
  std::size_t max_prefix_;
};

// Throws NotAntichain when one word strictly extends another.
void check_antichain(const std::vector<Word>& family);

// Coherence of the chains and phi([s_k]) inside V_{S(alpha)|k} on the given inputs.
LiftCertificate certify_baire_extension(const BaireExtension& ext, std::size_t k_max,
                                        const std::vector<Word>& inputs);

}  // namespace univdyn::lift
