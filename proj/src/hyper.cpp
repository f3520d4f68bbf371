#include "univdyn/hyper.hpp"

#include <algorithm>
#include <functional>
#include <random>

#include "univdyn/error.hpp"

namespace univdyn::hyper {

using univdyn::to_string;

namespace {

constexpr std::size_t kMaxExtensions = 4096;

Word prefix(const Word& w, std::size_t n) { return Word(w.begin(), w.begin() + std::min(n, w.size())); }

// Over-approximates: a false positive only adds a cell.
bool meets(const covers::CoverSystem& cs, const Region& open, const Region& closed) {
  if (open.size() == 1 && closed.size() == 1) {
    const auto* a = std::get_if<covers::Arc>(&open[0]);
    const auto* b = std::get_if<covers::Arc>(&closed[0]);
    if (a && b) {
      if (a->length >= 1 || b->length >= 1) return true;
      return frac(b->start - a->start) < a->length || frac(a->start - b->start) <= b->length;
    }
  }
  return cs.intersect(open, closed).has_value();
}

// All words extending c to length n, over the domain alphabet of s.
std::vector<Word> extensions(const PrefixTransducer& s, const Word& c, std::size_t n) {
  std::size_t count = 1;
  for (std::size_t i = c.size(); i < n; ++i) {
    auto a = s.domain().alphabet_at(i);
    if (a == 0 || count * a > kMaxExtensions) {
      throw Error(ErrorCode::InsufficientResolution, "cylinder [" + symbolic::to_string(c) + "] is too short for " +
                                                         s.name() + " (needs " + std::to_string(n) + " symbols)");
    }
    count *= a;
  }
  std::vector<Word> out{c};
  for (std::size_t i = c.size(); i < n; ++i) {
    std::vector<Word> next;
    for (const auto& w : out) {
      for (symbolic::Symbol x = 0; x < s.domain().alphabet_at(i); ++x) {
        next.push_back(w);
        next.back().push_back(x);
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

void CompactSetApprox::validate() const {
  if (cells.empty()) throw Error(ErrorCode::InvalidRelation, "empty compact set");
  for (const auto& c : cells) {
    if (c.size() != level) {
      throw Error(ErrorCode::InvalidRelation, "cell [" + symbolic::to_string(c) + "] is not at level " + std::to_string(level));
    }
  }
}

std::string to_string(const CompactSetApprox& m) {
  std::string out = "{";
  bool first = true;
  for (const auto& c : m.cells) {
    out += (first ? "" : ",") + std::string("[") + symbolic::to_string(c) + "]";
    first = false;
  }
  return out + "}@" + std::to_string(m.level);
}

CompactSetApprox cells_meeting(const covers::CoverSystem& cs, const Region& r, std::size_t k) {
  CompactSetApprox out{k, {}};
  Word t;
  std::function<void()> walk = [&]() {
    if (!t.empty() && !meets(cs, cs.cell(t), r)) return;
    if (t.size() == k) {
      out.cells.insert(t);
      return;
    }
    for (std::size_t n = 0; n < cs.arity(t.size() + 1); ++n) {
      t.push_back(n);
      walk();
      t.pop_back();
    }
  };
  walk();
  return out;
}

CompactSetApprox induced_hyper_map(const covers::CoverSystem& cs, const lift::PointMap& t, const CompactSetApprox& m,
                                   std::size_t k) {
  m.validate();
  Rational spread = t.modulus(cs.max_diameter(m.level));
  if (spread >= pow2_neg(k)) {
    throw Error(ErrorCode::InsufficientResolution, t.name + " spreads level-" + std::to_string(m.level) +
                                                       " cells over " + to_string(spread) + ", too wide for level " +
                                                       std::to_string(k));
  }
  CompactSetApprox out{k, {}};
  for (const auto& w : m.cells) {
    auto part = cells_meeting(cs, t.image(cs.closure(cs.cell(w))), k);
    out.cells.insert(part.cells.begin(), part.cells.end());
  }
  return out;
}

// ---------------------------------------------------------------- relations

CompactRelation::CompactRelation(std::size_t members, std::set<std::pair<std::size_t, Word>> pairs)
    : members_(members), pairs_(std::move(pairs)) {
  std::vector<bool> seen(members, false);
  for (const auto& [s, c] : pairs_) {
    if (s >= members) throw Error(ErrorCode::InvalidRelation, "member " + std::to_string(s) + " out of range");
    seen[s] = true;
  }
  for (std::size_t s = 0; s < members; ++s) {
    if (!seen[s]) throw Error(ErrorCode::InvalidRelation, "member " + std::to_string(s) + " has no pair");
  }
}

CompactRelation CompactRelation::constant(std::size_t members, const Word& x) {
  std::set<std::pair<std::size_t, Word>> pairs;
  for (std::size_t s = 0; s < members; ++s) pairs.emplace(s, x);
  return CompactRelation(members, std::move(pairs));
}

std::set<Word> CompactRelation::cross_section(std::size_t s) const {
  if (s >= members_) throw Error(ErrorCode::UnknownMember, "member " + std::to_string(s) + " not in the family");
  std::set<Word> out;
  for (auto it = pairs_.lower_bound({s, Word{}}); it != pairs_.end() && it->first == s; ++it) out.insert(it->second);
  return out;
}

std::string to_string(const CompactRelation& a) {
  std::string out = "{";
  bool first = true;
  for (const auto& [s, c] : a.pairs()) {
    out += (first ? "" : ",") + std::string("(") + std::to_string(s) + "," + symbolic::to_string(c) + ")";
    first = false;
  }
  return out + "}";
}

std::set<Word> image_cylinders(const PrefixTransducer& s, const Word& c, std::size_t k) {
  std::size_t m = s.modulus(k);
  std::set<Word> out;
  for (const auto& w : extensions(s, c, std::max(m, c.size()))) out.insert(s.evaluate(w, k));
  return out;
}

CompactRelation hyper_universal_step(const std::vector<PrefixTransducer>& n, const CompactRelation& a, std::size_t k) {
  if (a.members() != n.size()) {
    throw Error(ErrorCode::InvalidRelation, "relation over " + std::to_string(a.members()) + " members, family has " +
                                                std::to_string(n.size()));
  }
  std::set<std::pair<std::size_t, Word>> pairs;
  for (const auto& [s, c] : a.pairs()) {
    for (auto& w : image_cylinders(n[s], c, k)) pairs.emplace(s, w);
  }
  return CompactRelation(a.members(), std::move(pairs));
}

// ---------------------------------------------------------------- generalized factors

GeneralizedTable compose_generalized(const GeneralizedTable& pi, const GeneralizedTable& pi_prime) {
  GeneralizedTable out;
  for (std::size_t z = 0; z < pi_prime.size(); ++z) {
    if (pi_prime[z].empty()) throw Error(ErrorCode::InvalidRelation, "empty image at " + std::to_string(z));
    std::set<std::size_t> u;
    for (auto y : pi_prime[z]) {
      if (y >= pi.size()) {
        throw Error(ErrorCode::ResolutionMismatch, "point " + std::to_string(y) + " outside a domain of size " +
                                                       std::to_string(pi.size()));
      }
      u.insert(pi[y].begin(), pi[y].end());
    }
    out.push_back(std::move(u));
  }
  return out;
}

CheckReport check_generalized_factor(const std::vector<std::size_t>& s, const std::vector<std::size_t>& t,
                                     const GeneralizedTable& pi) {
  CheckReport report;
  if (s.size() != pi.size()) {
    report.fail("S and pi have different domains");
    return report;
  }
  for (std::size_t u = 0; u < s.size(); ++u) {
    ++report.checked;
    std::set<std::size_t> image;
    for (auto x : pi[u]) image.insert(t.at(x));
    if (pi[s[u]] != image) {
      report.fail("pi(S(" + std::to_string(u) + ")) differs from T(pi(" + std::to_string(u) + "))");
      return report;
    }
  }
  for (std::size_t x = 0; x < t.size(); ++x) {
    bool attained = std::any_of(pi.begin(), pi.end(), [&](const auto& m) { return m == std::set<std::size_t>{x}; });
    if (!attained) {
      report.fail("no u with pi(u) = {" + std::to_string(x) + "}");
      return report;
    }
  }
  return report;
}

// ---------------------------------------------------------------- pipeline

std::vector<CompactRelation> GeneralizedExtension::step(const std::vector<CompactRelation>& a) const {
  if (a.size() != pieces.size()) throw Error(ErrorCode::InvalidRelation, "one relation per piece expected");
  std::vector<CompactRelation> out;
  for (std::size_t i = 0; i < pieces.size(); ++i) out.push_back(hyper_universal_step(pieces[i].members, a[i], level));
  return out;
}

CompactSetApprox GeneralizedExtension::factor(const std::vector<CompactRelation>& a, std::size_t piece,
                                              std::size_t member) const {
  auto section = a.at(piece).cross_section(member);
  std::size_t lvl = section.begin()->size();
  for (const auto& c : section) lvl = std::min(lvl, c.size());
  CompactSetApprox out{lvl, {}};
  for (const auto& c : section) out.cells.insert(prefix(c, lvl));
  return out;
}

GeneralizedExtension common_generalized_extension(const std::vector<common::MapFamily>& pieces, std::size_t k,
                                                  std::size_t samples, std::uint64_t seed) {
  GeneralizedExtension ge{{}, k};
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    GeneralizedPiece piece{pieces[i], common::family_lift(pieces[i], k, k, samples, seed + 1000 * i), {}};
    for (const auto& m : piece.lift.members) piece.members.push_back(m.transducer);
    ge.pieces.push_back(std::move(piece));
  }
  return ge;
}

GeneralizedCertificate certify_generalized_extension(const GeneralizedExtension& ge, std::size_t samples,
                                                     std::uint64_t seed) {
  GeneralizedCertificate cert;
  cert.note = "upper semicontinuity sampled at level " + std::to_string(ge.level) + " only";
  std::size_t k = ge.level;
  for (std::size_t i = 0; i < ge.pieces.size(); ++i) {
    for (std::size_t j = 0; j < ge.pieces[i].members.size(); ++j) {
      cert.diagrams.push_back(GeneralizedDiagram{i, j, ge.pieces[i].lift.members[j].name, true, 0, ""});
    }
  }
  std::mt19937_64 rng(seed);
  for (std::size_t n = 0; n < samples; ++n) {
    std::vector<CompactRelation> a;
    std::vector<CompactRelation> singles;
    for (const auto& piece : ge.pieces) {
      const auto& cs = *piece.lift.space;
      std::set<std::pair<std::size_t, Word>> pairs;
      std::size_t deepest = 0;
      for (std::size_t j = 0; j < piece.members.size(); ++j) {
        std::size_t m = piece.members[j].modulus(k);
        deepest = std::max(deepest, m);
        std::size_t count = 1 + rng() % 3;
        for (std::size_t c = 0; c < count; ++c) {
          std::size_t len = m == 0 ? 0 : m - 1 + rng() % 3;
          Word w(len);
          for (std::size_t p = 0; p < len; ++p) w[p] = rng() % cs.arity(p + 1);
          pairs.emplace(j, w);
        }
      }
      a.emplace_back(piece.members.size(), pairs);
      Word x(deepest);
      for (std::size_t p = 0; p < deepest; ++p) x[p] = rng() % cs.arity(p + 1);
      singles.push_back(CompactRelation::constant(piece.members.size(), x));
    }
    auto ua = ge.step(a);
    auto us = ge.step(singles);
    for (auto& d : cert.diagrams) {
      const auto& piece = ge.pieces[d.piece];
      const auto& member = piece.lift.members[d.member];
      const auto& s = piece.members[d.member];
      const auto& cs = *piece.lift.space;
      ++d.checked;
      auto fail = [&](const std::string& why) {
        if (d.ok) d.witness = why;
        d.ok = false;
        cert.ok = false;
      };
      auto section = ua[d.piece].cross_section(d.member);
      std::set<Word> attained;
      for (const auto& c : a[d.piece].cross_section(d.member)) {
        for (const auto& w : extensions(s, c, std::max(s.modulus(k), c.size()))) {
          Word t = s.evaluate(w, k);
          attained.insert(t);
          Region image = member.extension->family().region(member.parameter, cs.closure(cs.cell(w)));
          if (!cs.contains(cs.cell(t), image)) fail("T(V[" + symbolic::to_string(w) + "]) leaves V[" + symbolic::to_string(t) + "]");
        }
      }
      if (attained != section) fail("cross section differs from the image of " + to_string(a[d.piece]));
      auto single = us[d.piece].cross_section(d.member);
      if (single.size() != 1) fail("constant relation " + to_string(singles[d.piece]) + " has a non-singleton image");
    }
  }
  return cert;
}

}  // namespace univdyn::hyper
