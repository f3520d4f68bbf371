#pragma once

// Symbolic spaces 2^N, N^N and products of finite alphabets, continuous maps
// as prefix transducers with explicit moduli, Cantor-pairing interleaving and
// the countable product lift.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "univdyn/check.hpp"

namespace univdyn::symbolic {

using Symbol = std::uint64_t;
using Word = std::vector<Symbol>;

std::string to_string(const Word& w);
// "0110" for single-digit alphabets, "3.0.12" otherwise
Word parse_word(const std::string& text);

class SymbolicSpace {
 public:
  static SymbolicSpace cantor();
  static SymbolicSpace baire();
  // prod J_i with |J_i| = sizes[i], then `tail` for every later level
  static SymbolicSpace product(std::vector<std::uint64_t> sizes, std::uint64_t tail);

  // 0 means unbounded (symbols code N)
  std::uint64_t alphabet_at(std::size_t i) const;
  const std::string& name() const { return name_; }
  bool accepts(const Word& w) const;

  friend bool operator==(const SymbolicSpace& a, const SymbolicSpace& b) { return a.name_ == b.name_; }

 private:
  SymbolicSpace(std::string name, std::vector<std::uint64_t> sizes, std::uint64_t tail);
  std::string name_;
  std::vector<std::uint64_t> sizes_;
  std::uint64_t tail_ = 0;
};

class PrefixTransducer {
 public:
  // step(w, k) is the first k output symbols; callers guarantee |w| >= modulus(k).
  using Step = std::function<Word(const Word&, std::size_t)>;
  using Modulus = std::function<std::size_t(std::size_t)>;

  PrefixTransducer(std::string name, SymbolicSpace domain, SymbolicSpace codomain, Step step, Modulus modulus);

  const std::string& name() const { return name_; }
  const SymbolicSpace& domain() const { return domain_; }
  const SymbolicSpace& codomain() const { return codomain_; }
  std::size_t modulus(std::size_t k) const { return modulus_(k); }

  // Throws InsufficientInput when |w| < modulus(k).
  Word evaluate(const Word& w, std::size_t k) const;
  // Longest output determined by w, capped at `cap` symbols.
  Word evaluate_determined(const Word& w, std::size_t cap) const;
  std::size_t determined_length(std::size_t input_length, std::size_t cap) const;

 private:
  std::string name_;
  SymbolicSpace domain_;
  SymbolicSpace codomain_;
  Step step_;
  Modulus modulus_;
};

PrefixTransducer identity_transducer(const SymbolicSpace& space);
PrefixTransducer shift_transducer(const SymbolicSpace& space);
PrefixTransducer constant_transducer(const SymbolicSpace& space, Word period);
// binary odometer: add 1 at the first position with carry to the right
PrefixTransducer odometer_transducer();
// letter-to-letter substitution; symbols outside the table are fixed
PrefixTransducer substitution_transducer(const SymbolicSpace& space, std::map<Symbol, Symbol> table);
// out[i] = table[w[i .. i+window-1]]; throws InvalidBranch on missing blocks
PrefixTransducer sliding_block_transducer(const SymbolicSpace& space, std::size_t window,
                                          std::map<Word, Symbol> table);

// f after g. Throws SpaceMismatch unless g's codomain is f's domain.
PrefixTransducer compose(const PrefixTransducer& f, const PrefixTransducer& g);

// Interleaving by Cantor pairing: packed position pair(n, i) is symbol i of
// stream n. The packed word stops before the first position of a listed
// stream that is undefined; unlisted streams read `fill`.
Word interleave_pack(const std::vector<Word>& streams, Symbol fill);
// Exactly `length` packed symbols, `fill` wherever a stream is too short.
Word interleave_pack_to_length(const std::vector<Word>& streams, Symbol fill, std::size_t length);
std::vector<Word> interleave_unpack(const Word& packed, std::size_t stream_count);
Word stream_of(const Word& packed, std::size_t n);

using TailRule = std::function<PrefixTransducer(std::size_t)>;

// Coordinate n evolves by maps[n], by tail(n) past the list (identity when
// no rule is given). The space must be 2^N or N^N and every map a self-map
// of it.
PrefixTransducer product_lift(const SymbolicSpace& space, const std::vector<PrefixTransducer>& maps,
                              std::optional<TailRule> tail = std::nullopt);
// pi_n: packed word -> stream n
PrefixTransducer projection_transducer(const SymbolicSpace& space, std::size_t n);

// pi_n(lift(w)) = U_n(pi_n(w)) at resolution k, for each given packed word.
CheckReport check_lift_commutes(const PrefixTransducer& lift, const PrefixTransducer& u_n, std::size_t n,
                                const std::vector<Word>& samples, std::size_t k);
// Every codomain word of length k (symbols < bound for N^N) has a preimage
// prefix under pi_n.
CheckReport check_projection_surjective(const SymbolicSpace& space, std::size_t n, std::size_t k,
                                        Symbol unbounded_bound = 3);

}  // namespace univdyn::symbolic
