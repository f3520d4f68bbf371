#include "univdyn/symbolic.hpp"

#include <algorithm>
#include <memory>

#include "univdyn/error.hpp"
#include "univdyn/pairing.hpp"

namespace univdyn::symbolic {

std::string to_string(const Word& w) {
  bool digits = std::all_of(w.begin(), w.end(), [](Symbol s) { return s < 10; });
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!digits && i > 0) out += '.';
    out += std::to_string(w[i]);
  }
  return out;
}

Word parse_word(const std::string& text) {
  Word w;
  if (text.empty()) return w;
  auto digit = [&](char c) -> Symbol {
    if (c < '0' || c > '9') throw Error(ErrorCode::ParseError, "bad symbol in word '" + text + "'");
    return static_cast<Symbol>(c - '0');
  };
  if (text.find('.') == std::string::npos) {
    for (char c : text) w.push_back(digit(c));
    return w;
  }
  Symbol cur = 0;
  bool have = false;
  for (char c : text) {
    if (c == '.') {
      if (!have) throw Error(ErrorCode::ParseError, "empty symbol in word '" + text + "'");
      w.push_back(cur);
      cur = 0;
      have = false;
    } else {
      cur = cur * 10 + digit(c);
      have = true;
    }
  }
  if (!have) throw Error(ErrorCode::ParseError, "empty symbol in word '" + text + "'");
  w.push_back(cur);
  return w;
}

SymbolicSpace::SymbolicSpace(std::string name, std::vector<std::uint64_t> sizes, std::uint64_t tail)
    : name_(std::move(name)), sizes_(std::move(sizes)), tail_(tail) {}

SymbolicSpace SymbolicSpace::cantor() { return SymbolicSpace("2^N", {}, 2); }
SymbolicSpace SymbolicSpace::baire() { return SymbolicSpace("N^N", {}, 0); }

SymbolicSpace SymbolicSpace::product(std::vector<std::uint64_t> sizes, std::uint64_t tail) {
  std::string name = "prod(";
  for (auto s : sizes) {
    if (s < 2) throw Error(ErrorCode::SpaceMismatch, "finite alphabets need at least 2 symbols");
    name += std::to_string(s) + ",";
  }
  if (tail < 2) throw Error(ErrorCode::SpaceMismatch, "finite alphabets need at least 2 symbols");
  name += std::to_string(tail) + "...)";
  return SymbolicSpace(std::move(name), std::move(sizes), tail);
}

std::uint64_t SymbolicSpace::alphabet_at(std::size_t i) const { return i < sizes_.size() ? sizes_[i] : tail_; }

bool SymbolicSpace::accepts(const Word& w) const {
  for (std::size_t i = 0; i < w.size(); ++i) {
    auto a = alphabet_at(i);
    if (a != 0 && w[i] >= a) return false;
  }
  return true;
}

PrefixTransducer::PrefixTransducer(std::string name, SymbolicSpace domain, SymbolicSpace codomain, Step step,
                                   Modulus modulus)
    : name_(std::move(name)),
      domain_(std::move(domain)),
      codomain_(std::move(codomain)),
      step_(std::move(step)),
      modulus_(std::move(modulus)) {}

Word PrefixTransducer::evaluate(const Word& w, std::size_t k) const {
  std::size_t need = modulus_(k);
  if (w.size() < need) {
    throw Error(ErrorCode::InsufficientInput, name_ + " needs " + std::to_string(need) + " input symbols for " +
                                                  std::to_string(k) + " outputs, got " + std::to_string(w.size()));
  }
  Word out = step_(w, k);
  if (out.size() != k) throw Error(ErrorCode::InsufficientInput, name_ + " produced a short output");
  return out;
}

std::size_t PrefixTransducer::determined_length(std::size_t input_length, std::size_t cap) const {
  // moduli are nondecreasing
  std::size_t lo = 0, hi = cap;
  if (modulus_(0) > input_length) return 0;
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo + 1) / 2;
    if (modulus_(mid) <= input_length) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

Word PrefixTransducer::evaluate_determined(const Word& w, std::size_t cap) const {
  std::size_t k = determined_length(w.size(), cap);
  return k == 0 ? Word{} : evaluate(w, k);
}

PrefixTransducer identity_transducer(const SymbolicSpace& space) {
  return PrefixTransducer(
      "id", space, space, [](const Word& w, std::size_t k) { return Word(w.begin(), w.begin() + k); },
      [](std::size_t k) { return k; });
}

PrefixTransducer shift_transducer(const SymbolicSpace& space) {
  return PrefixTransducer(
      "shift", space, space, [](const Word& w, std::size_t k) { return Word(w.begin() + 1, w.begin() + 1 + k); },
      [](std::size_t k) { return k == 0 ? 0 : k + 1; });
}

PrefixTransducer constant_transducer(const SymbolicSpace& space, Word period) {
  if (period.empty()) throw Error(ErrorCode::SpaceMismatch, "constant map needs a nonempty period");
  std::string name = "const(" + to_string(period) + ")";
  return PrefixTransducer(
      name, space, space,
      [period](const Word&, std::size_t k) {
        Word out(k);
        for (std::size_t i = 0; i < k; ++i) out[i] = period[i % period.size()];
        return out;
      },
      [](std::size_t) { return std::size_t{0}; });
}

PrefixTransducer odometer_transducer() {
  auto space = SymbolicSpace::cantor();
  return PrefixTransducer(
      "odometer", space, space,
      [](const Word& w, std::size_t k) {
        Word out(k);
        bool carry = true;
        for (std::size_t i = 0; i < k; ++i) {
          out[i] = carry ? 1 - w[i] : w[i];
          carry = carry && w[i] == 1;
        }
        return out;
      },
      [](std::size_t k) { return k; });
}

PrefixTransducer substitution_transducer(const SymbolicSpace& space, std::map<Symbol, Symbol> table) {
  return PrefixTransducer(
      "subst", space, space,
      [table = std::move(table)](const Word& w, std::size_t k) {
        Word out(k);
        for (std::size_t i = 0; i < k; ++i) {
          auto it = table.find(w[i]);
          out[i] = it == table.end() ? w[i] : it->second;
        }
        return out;
      },
      [](std::size_t k) { return k; });
}

PrefixTransducer sliding_block_transducer(const SymbolicSpace& space, std::size_t window,
                                          std::map<Word, Symbol> table) {
  if (window == 0) throw Error(ErrorCode::SpaceMismatch, "sliding block window must be positive");
  return PrefixTransducer(
      "block" + std::to_string(window), space, space,
      [window, table = std::move(table)](const Word& w, std::size_t k) {
        Word out(k);
        for (std::size_t i = 0; i < k; ++i) {
          Word block(w.begin() + i, w.begin() + i + window);
          auto it = table.find(block);
          if (it == table.end()) throw Error(ErrorCode::InvalidBranch, "no table entry for block " + to_string(block));
          out[i] = it->second;
        }
        return out;
      },
      [window](std::size_t k) { return k == 0 ? 0 : k + window - 1; });
}

PrefixTransducer compose(const PrefixTransducer& f, const PrefixTransducer& g) {
  if (!(g.codomain() == f.domain())) {
    throw Error(ErrorCode::SpaceMismatch,
                "cannot compose " + f.name() + " on " + f.domain().name() + " after map into " + g.codomain().name());
  }
  return PrefixTransducer(
      f.name() + "o" + g.name(), g.domain(), f.codomain(),
      [f, g](const Word& w, std::size_t k) { return f.evaluate(g.evaluate(w, f.modulus(k)), k); },
      [f, g](std::size_t k) { return g.modulus(f.modulus(k)); });
}

Word stream_of(const Word& packed, std::size_t n) {
  Word out;
  for (std::uint64_t i = 0;; ++i) {
    auto p = cantor_pair(n, i);
    if (p >= packed.size()) break;
    out.push_back(packed[p]);
  }
  return out;
}

Word interleave_pack_to_length(const std::vector<Word>& streams, Symbol fill, std::size_t length) {
  Word out(length, fill);
  for (std::size_t p = 0; p < length; ++p) {
    auto [n, i] = cantor_unpair(p);
    if (n < streams.size() && i < streams[n].size()) out[p] = streams[n][i];
  }
  return out;
}

Word interleave_pack(const std::vector<Word>& streams, Symbol fill) {
  std::size_t length = SIZE_MAX;
  for (std::size_t n = 0; n < streams.size(); ++n) {
    length = std::min<std::size_t>(length, cantor_pair(n, streams[n].size()));
  }
  if (streams.empty()) length = 0;
  return interleave_pack_to_length(streams, fill, length);
}

std::vector<Word> interleave_unpack(const Word& packed, std::size_t stream_count) {
  std::vector<Word> out;
  for (std::size_t n = 0; n < stream_count; ++n) out.push_back(stream_of(packed, n));
  return out;
}

namespace {

void require_homogeneous(const SymbolicSpace& space) {
  if (!(space == SymbolicSpace::cantor()) && !(space == SymbolicSpace::baire())) {
    throw Error(ErrorCode::SpaceMismatch, "interleaving needs 2^N or N^N, got " + space.name());
  }
}

// stream index -> number of its symbols needed for k packed outputs
std::map<std::size_t, std::size_t> stream_demand(std::size_t k) {
  std::map<std::size_t, std::size_t> need;
  for (std::size_t p = 0; p < k; ++p) {
    auto [n, i] = cantor_unpair(p);
    auto& slot = need[n];
    slot = std::max<std::size_t>(slot, i + 1);
  }
  return need;
}

}  // namespace

PrefixTransducer product_lift(const SymbolicSpace& space, const std::vector<PrefixTransducer>& maps,
                              std::optional<TailRule> tail) {
  require_homogeneous(space);
  for (const auto& m : maps) {
    if (!(m.domain() == space) || !(m.codomain() == space)) {
      throw Error(ErrorCode::SpaceMismatch, m.name() + " is not a self-map of " + space.name());
    }
  }
  TailRule rule = tail ? *tail : TailRule([space](std::size_t) { return identity_transducer(space); });
  auto coordinate = std::make_shared<const std::function<PrefixTransducer(std::size_t)>>(
      [maps, rule](std::size_t n) { return n < maps.size() ? maps[n] : rule(n); });
  std::string name = "lift(";
  for (const auto& m : maps) name += m.name() + ",";
  name += tail ? "tail)" : "id...)";
  return PrefixTransducer(
      name, space, space,
      [coordinate](const Word& w, std::size_t k) {
        Word out(k);
        for (const auto& [n, count] : stream_demand(k)) {
          Word image = (*coordinate)(n).evaluate(stream_of(w, n), count);
          for (std::size_t i = 0; i < count; ++i) {
            auto p = cantor_pair(n, i);
            if (p < k) out[p] = image[i];
          }
        }
        return out;
      },
      [coordinate](std::size_t k) {
        std::size_t need = 0;
        for (const auto& [n, count] : stream_demand(k)) {
          std::size_t m = (*coordinate)(n).modulus(count);
          if (m > 0) need = std::max<std::size_t>(need, cantor_pair(n, m - 1) + 1);
        }
        return need;
      });
}

PrefixTransducer projection_transducer(const SymbolicSpace& space, std::size_t n) {
  require_homogeneous(space);
  return PrefixTransducer(
      "pi" + std::to_string(n), space, space,
      [n](const Word& w, std::size_t k) {
        Word s = stream_of(w, n);
        s.resize(k);
        return s;
      },
      [n](std::size_t k) { return k == 0 ? 0 : cantor_pair(n, k - 1) + 1; });
}

CheckReport check_lift_commutes(const PrefixTransducer& lift, const PrefixTransducer& u_n, std::size_t n,
                                const std::vector<Word>& samples, std::size_t k) {
  CheckReport report;
  auto pi = projection_transducer(lift.domain(), n);
  std::size_t need = std::max(lift.modulus(pi.modulus(k)), pi.modulus(u_n.modulus(k)));
  for (const auto& w : samples) {
    if (w.size() < need) {
      throw Error(ErrorCode::InsufficientInput, "sample of length " + std::to_string(w.size()) + " below " +
                                                    std::to_string(need) + " for resolution " + std::to_string(k));
    }
    ++report.checked;
    Word lhs = pi.evaluate(lift.evaluate(w, pi.modulus(k)), k);
    Word rhs = u_n.evaluate(pi.evaluate(w, u_n.modulus(k)), k);
    if (lhs != rhs) {
      report.fail("n=" + std::to_string(n) + " w=" + to_string(w) + ": pi(lift) = " + to_string(lhs) +
                  ", U_n(pi) = " + to_string(rhs));
    }
  }
  return report;
}

CheckReport check_projection_surjective(const SymbolicSpace& space, std::size_t n, std::size_t k,
                                        Symbol unbounded_bound) {
  CheckReport report;
  auto pi = projection_transducer(space, n);
  Symbol a = space.alphabet_at(0) == 0 ? unbounded_bound : space.alphabet_at(0);
  Word u(k, 0);
  for (;;) {
    ++report.checked;
    std::vector<Word> streams(n + 1);
    streams[n] = u;
    Word pre = interleave_pack_to_length(streams, 0, pi.modulus(k));
    if (pi.evaluate(pre, k) != u) report.fail("no preimage for " + to_string(u));
    std::size_t pos = 0;
    while (pos < k && u[pos] + 1 == a) u[pos++] = 0;
    if (pos == k) break;
    ++u[pos];
  }
  return report;
}

}  // namespace univdyn::symbolic
