#include "univdyn/lift.hpp"

#include <algorithm>
#include <functional>
#include <random>

#include "univdyn/error.hpp"

namespace univdyn::lift {

using covers::Arc;
using covers::Cylinder;
using covers::Interval;
using univdyn::to_string;

namespace {

constexpr std::size_t kModulusSearchLimit = 400;
constexpr std::size_t kCantorCap = 64;

const Interval& as_interval(const Region& r, const std::string& who) {
  if (r.size() != 1 || !std::holds_alternative<Interval>(r[0])) {
    throw Error(ErrorCode::SpaceMismatch, who + " expects an interval enclosure, got " + covers::to_string(r));
  }
  return std::get<Interval>(r[0]);
}

const Arc& as_arc(const Region& r, const std::string& who) {
  if (r.size() != 1 || !std::holds_alternative<Arc>(r[0])) {
    throw Error(ErrorCode::SpaceMismatch, who + " expects an arc, got " + covers::to_string(r));
  }
  return std::get<Arc>(r[0]);
}

Interval clamp_unit(const Interval& i) { return Interval{rmax(Rational(0), i.lo), rmin(Rational(1), i.hi)}; }

Word prefix(const Word& w, std::size_t n) { return Word(w.begin(), w.begin() + std::min(n, w.size())); }

bool is_prefix(const Word& a, const Word& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

}  // namespace

// ---------------------------------------------------------------- point maps

PointMap identity_map(CoverSystemPtr space) {
  return PointMap{"id", std::move(space), [](const Region& e) { return e; },
                  [](const Rational& d) { return d; }, Rational(1)};
}

PointMap constant_map(CoverSystemPtr space, Region point) {
  std::string name = "const" + covers::to_string(point);
  return PointMap{name, std::move(space), [point](const Region&) { return point; },
                  [](const Rational&) { return Rational(0); }, Rational(0)};
}

PointMap square_map() {
  return PointMap{"square", covers::interval_system(),
                  [](const Region& e) {
                    Interval i = clamp_unit(as_interval(e, "square"));
                    return covers::interval_region(i.lo * i.lo, i.hi * i.hi);
                  },
                  [](const Rational& d) { return Rational(2 * d); }, Rational(2)};
}

PointMap tent_map() {
  return PointMap{"tent", covers::interval_system(),
                  [](const Region& e) {
                    Interval i = clamp_unit(as_interval(e, "tent"));
                    Rational half(1, 2);
                    if (i.hi <= half) return covers::interval_region(2 * i.lo, 2 * i.hi);
                    if (i.lo >= half) return covers::interval_region(2 - 2 * i.hi, 2 - 2 * i.lo);
                    return covers::interval_region(rmin(Rational(2 * i.lo), Rational(2 - 2 * i.hi)), 1);
                  },
                  [](const Rational& d) { return Rational(2 * d); }, Rational(2)};
}

PointMap affine_map(const Rational& a, const Rational& b) {
  Rational y0 = b, y1 = a + b;
  if (y0 < 0 || y0 > 1 || y1 < 0 || y1 > 1) {
    throw Error(ErrorCode::SpaceMismatch, "x -> " + to_string(a) + "x + " + to_string(b) + " leaves [0,1]");
  }
  Rational slope = abs(a);
  return PointMap{"affine(" + to_string(a) + "," + to_string(b) + ")", covers::interval_system(),
                  [a, b](const Region& e) {
                    Interval i = clamp_unit(as_interval(e, "affine"));
                    Rational u = a * i.lo + b, v = a * i.hi + b;
                    return covers::interval_region(rmin(u, v), rmax(u, v));
                  },
                  [slope](const Rational& d) { return Rational(slope * d); }, slope};
}

PointMap rotation_map(const Rational& theta) {
  Rational t = frac(theta);
  return PointMap{"rot(" + to_string(t) + ")", covers::circle_system(),
                  [t](const Region& e) {
                    const Arc& a = as_arc(e, "rotation");
                    if (a.length >= 1) return e;
                    return covers::arc_region(a.start + t, a.length);
                  },
                  [](const Rational& d) { return d; }, Rational(1)};
}

PointMap transducer_map(PrefixTransducer f) {
  if (!(f.domain() == symbolic::SymbolicSpace::cantor()) || !(f.codomain() == symbolic::SymbolicSpace::cantor())) {
    throw Error(ErrorCode::SpaceMismatch, f.name() + " is not a self-map of 2^N");
  }
  std::string name = f.name();
  auto image = [f](const Region& e) {
    if (e.size() != 1 || !std::holds_alternative<Cylinder>(e[0])) {
      throw Error(ErrorCode::SpaceMismatch, f.name() + " expects a cylinder");
    }
    return covers::cylinder_region(f.evaluate_determined(std::get<Cylinder>(e[0]).prefix, kCantorCap));
  };
  auto modulus = [f](const Rational& d) {
    // a set of diameter <= 2^{-(n+1)} sits in one cylinder of length n
    std::size_t n = 0;
    if (d == 0) {
      n = kCantorCap;
    } else {
      while (n < kCantorCap && pow2_neg(n + 2) >= d) ++n;
    }
    if (d > Rational(1, 2)) n = 0;
    return pow2_neg(f.determined_length(n, kCantorCap) + 1);
  };
  return PointMap{name, covers::cantor_system(), image, modulus, std::nullopt};
}

PointMap finite_map(CoverSystemPtr space, std::vector<std::size_t> table) {
  auto all = std::get<covers::PointSet>(space->whole()[0]).points;
  if (table.size() != all.size()) throw Error(ErrorCode::SpaceMismatch, "table size differs from the space");
  Rational lip = 0;
  std::string name = "map(";
  for (std::size_t x = 0; x < table.size(); ++x) {
    if (table[x] >= all.size()) throw Error(ErrorCode::SpaceMismatch, "table leaves the space");
    name += (x ? "," : "") + std::to_string(table[x]);
    for (std::size_t y = 0; y < x; ++y) {
      Rational dxy = space->diameter(covers::point_set_region({y, x}));
      Rational fxy = space->diameter(covers::point_set_region({std::min(table[x], table[y]), std::max(table[x], table[y])}));
      lip = rmax(lip, Rational(fxy / dxy));
    }
  }
  name += ")";
  return PointMap{name, space,
                  [table](const Region& e) {
                    if (e.size() != 1 || !std::holds_alternative<covers::PointSet>(e[0])) {
                      throw Error(ErrorCode::SpaceMismatch, "finite map expects a point set");
                    }
                    std::vector<std::size_t> out;
                    for (auto x : std::get<covers::PointSet>(e[0]).points) out.push_back(table.at(x));
                    std::sort(out.begin(), out.end());
                    out.erase(std::unique(out.begin(), out.end()), out.end());
                    return covers::point_set_region(out);
                  },
                  [lip](const Rational& d) { return Rational(lip * d); }, lip};
}

// ---------------------------------------------------------------- families

ParameterizedFamily constant_family(const PointMap& t) {
  return ParameterizedFamily{t.name, t.space, [t](const Word&, const Region& e) { return t.image(e); }, t.modulus,
                             [](std::size_t) { return Rational(0); }};
}

Rational rotation_angle(const Word& p) {
  Rational theta;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 1) throw Error(ErrorCode::InvalidBranch, "rotation parameter is not binary: " + symbolic::to_string(p));
    if (p[i]) theta += pow2_neg(i + 2);
  }
  return theta;
}

ParameterizedFamily rotation_family() {
  return ParameterizedFamily{"rotation", covers::circle_system(),
                             [](const Word& q, const Region& e) {
                               const Arc& a = as_arc(e, "rotation family");
                               if (a.length >= 1) return e;
                               // theta(p) for p extending q ranges over [theta(q), theta(q) + 2^{-|q|-1}]
                               return covers::arc_region(a.start + rotation_angle(q), a.length + pow2_neg(q.size() + 1));
                             },
                             [](const Rational& d) { return d; },
                             [](std::size_t l) { return pow2_neg(l + 1); }};
}

// ---------------------------------------------------------------- strong extension

StrongExtension::StrongExtension(CoverSystemPtr cs, ParameterizedFamily phi, std::size_t max_level)
    : cs_(std::move(cs)), phi_(std::move(phi)) {
  bool uses_parameter = phi_.param_modulus(0) != 0;
  std::size_t l = 0, m = 0;
  for (std::size_t k = 1; k <= max_level; ++k) {
    Rational eps = cs_->epsilon_level(k - 1) / 4;
    Rational input_share = uses_parameter ? Rational(eps / 2) : eps;
    while (phi_.input_modulus(cs_->max_diameter(m)) >= input_share) {
      if (++m > kModulusSearchLimit) {
        throw Error(ErrorCode::ModulusTooCoarse,
                    phi_.name + ": no input modulus for level " + std::to_string(k) + " on " + cs_->name());
      }
    }
    while (uses_parameter && phi_.param_modulus(l) >= eps / 2) {
      if (++l > kModulusSearchLimit) {
        throw Error(ErrorCode::ModulusTooCoarse, phi_.name + ": no parameter modulus for level " + std::to_string(k));
      }
    }
    l_.push_back(l);
    m_.push_back(m);
  }
}

StrongExtension::StrongExtension(CoverSystemPtr cs, ParameterizedFamily phi, std::vector<std::size_t> param_moduli,
                                 std::vector<std::size_t> input_moduli)
    : cs_(std::move(cs)), phi_(std::move(phi)), l_(std::move(param_moduli)), m_(std::move(input_moduli)) {
  if (l_.size() != m_.size()) throw Error(ErrorCode::ResolutionMismatch, "parameter and input moduli differ in length");
}

std::size_t StrongExtension::param_modulus(std::size_t k) const {
  if (k == 0) return 0;
  if (k > l_.size()) throw Error(ErrorCode::InsufficientResolution, "level " + std::to_string(k) + " not prepared");
  return l_[k - 1];
}

std::size_t StrongExtension::input_modulus(std::size_t k) const {
  if (k == 0) return 0;
  if (k > m_.size()) throw Error(ErrorCode::InsufficientResolution, "level " + std::to_string(k) + " not prepared");
  return m_[k - 1];
}

std::vector<Word> StrongExtension::chain(const Word& q, const Word& s, std::size_t k) const {
  if (k > max_level()) {
    throw Error(ErrorCode::InsufficientResolution,
                "level " + std::to_string(k) + " above prepared " + std::to_string(max_level()));
  }
  if (k == 0) return {};
  if (q.size() < param_modulus(k) || s.size() < input_modulus(k)) {
    throw Error(ErrorCode::InsufficientInput, "level " + std::to_string(k) + " needs " +
                                                  std::to_string(param_modulus(k)) + " parameter and " +
                                                  std::to_string(input_modulus(k)) + " input symbols");
  }
  cs_->check_word(s);
  std::vector<Word> out;
  Word t;
  for (std::size_t j = 1; j <= k; ++j) {
    Word qj = prefix(q, param_modulus(j));
    Word sj = prefix(s, input_modulus(j));
    Region e = phi_.region(qj, cs_->closure(cs_->cell(sj)));
    try {
      t = covers::locate_ball(*cs_, e, 0, j, t);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::NoCell) throw;
      throw Error(ErrorCode::NoCell, phi_.name + " at q=[" + symbolic::to_string(qj) + "] s=[" +
                                         symbolic::to_string(sj) + "] k=" + std::to_string(j) + ": region " +
                                         covers::to_string(e) + " fits no child of [" + symbolic::to_string(t) + "]");
    }
    out.push_back(t);
  }
  return out;
}

Word StrongExtension::evaluate(const Word& q, const Word& s, std::size_t k) const {
  auto ts = chain(q, s, k);
  return ts.empty() ? Word{} : ts.back();
}

PrefixTransducer StrongExtension::transducer_for(const Word& p) const {
  if (p.size() < param_modulus(max_level())) {
    throw Error(ErrorCode::InsufficientInput, "parameter shorter than " + std::to_string(param_modulus(max_level())));
  }
  auto self = std::make_shared<const StrongExtension>(*this);
  auto space = cs_->symbol_space();
  return PrefixTransducer(
      "F(" + phi_.name + ")", space, space,
      [self, p](const Word& w, std::size_t k) { return self->evaluate(p, w, k); },
      [self](std::size_t k) { return self->input_modulus(k); });
}

Word StrongExtension::sample_parameter(std::size_t k_max, std::uint64_t seed, std::size_t extra) const {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> bit(0, 1);
  Word p(param_modulus(k_max) + extra);
  for (auto& x : p) x = bit(rng);
  return p;
}

Word StrongExtension::sample_input(std::size_t k_max, std::uint64_t seed, std::size_t extra) const {
  std::mt19937_64 rng(seed);
  Word s(input_modulus(k_max) + extra);
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::uniform_int_distribution<Symbol> sym(0, cs_->arity(i + 1) - 1);
    s[i] = sym(rng);
  }
  return s;
}

LiftCertificate StrongExtension::certify_pairs(std::size_t k_max,
                                               const std::vector<std::pair<Word, Word>>& pairs) const {
  LiftCertificate cert;
  cert.samples = pairs.size();
  for (std::size_t k = 1; k <= k_max; ++k) cert.levels.push_back(LevelResult{k, 0, true});
  auto fail = [&](std::size_t k, const std::string& why) {
    if (cert.ok) cert.witness = why;
    cert.ok = false;
    if (k >= 1 && k <= cert.levels.size()) cert.levels[k - 1].ok = false;
  };
  for (const auto& [p, alpha] : pairs) {
    std::vector<Word> ts;
    try {
      ts = chain(p, alpha, k_max);
    } catch (const Error& e) {
      fail(k_max, e.what());
      continue;
    }
    Region deep = phi_.region(p, cs_->closure(cs_->cell(alpha)));
    std::string at = " at p=[" + symbolic::to_string(p) + "] alpha=[" + symbolic::to_string(alpha) + "]";
    for (std::size_t k = 1; k <= k_max; ++k) {
      const Word& t = ts[k - 1];
      ++cert.levels[k - 1].checked;
      if (t.size() != k || (k > 1 && !is_prefix(ts[k - 2], t))) fail(k, "incoherent output [" + symbolic::to_string(t) + "]" + at);
      if (!cs_->contains(cs_->cell(t), deep)) {
        fail(k, "enclosure " + covers::to_string(deep) + " leaves V[" + symbolic::to_string(t) + "]" + at);
      }
      if (cs_->diameter(cs_->cell(t)) >= pow2_neg(k)) fail(k, "cell [" + symbolic::to_string(t) + "] too wide" + at);
    }
    // the output only reads the moduli prefixes
    if (k_max >= 1) {
      Word again = evaluate(prefix(p, param_modulus(k_max)), prefix(alpha, input_modulus(k_max)), k_max);
      if (again != ts.back()) fail(k_max, "output depends on symbols past the modulus" + at);
    }
  }
  return cert;
}

LiftCertificate StrongExtension::certify(std::size_t k_max, std::size_t samples, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<Word, Word>> pairs;
  for (std::size_t i = 0; i < samples; ++i) {
    std::uint64_t a = rng(), b = rng();
    pairs.emplace_back(sample_parameter(k_max, a), sample_input(k_max, b));
  }
  return certify_pairs(k_max, pairs);
}

SelfLift lift_self_map(CoverSystemPtr cs, const PointMap& t, std::size_t max_level) {
  if (cs->name() != t.space->name()) {
    throw Error(ErrorCode::SpaceMismatch, t.name + " acts on " + t.space->name() + ", not on " + cs->name());
  }
  StrongExtension ext(cs, constant_family(t), max_level);
  PrefixTransducer s = ext.transducer_for({});
  return SelfLift{t, std::move(ext), std::move(s)};
}

LiftCertificate certify_self_lift(const SelfLift& lift, std::size_t k_max, std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<Word, Word>> pairs;
  for (std::size_t i = 0; i < samples; ++i) pairs.emplace_back(Word{}, lift.extension.sample_input(k_max, rng()));
  return lift.extension.certify_pairs(k_max, pairs);
}

// ---------------------------------------------------------------- Polish presentations

PolishPresentation baire_cylinder_presentation() {
  PolishPresentation ps;
  ps.name = "baire";
  ps.geometry = covers::cantor_system();
  ps.cell = [](const Word& t) { return covers::cylinder_region(t); };
  ps.sample_points = [](const Word& t) {
    std::vector<Region> pts;
    for (Symbol i : {0, 1, 7, 63}) {
      Word u = t;
      u.push_back(i);
      pts.push_back(covers::cylinder_region(u));
    }
    return pts;
  };
  return ps;
}

namespace {

// raw (lo, hi) as an open cell of [0,1]; lo < 0 or hi > 1 marks a closed end
Interval polish_child(const Interval& raw, Symbol i) {
  Rational a = rmax(raw.lo, Rational(0)), b = rmin(raw.hi, Rational(1));
  Rational len = b - a;
  if (i < 5) {
    Rational n(static_cast<unsigned long>(i + 1));
    return Interval{a + n * len / 8, a + (n + 2) * len / 8};
  }
  std::size_t j = (i - 5) / 2;
  bool left = (i - 5) % 2 == 0;
  if (left) {
    if (raw.lo < 0) return Interval{a - 1, a + len / 4};
    return Interval{a + len * pow2_neg(j + 4), a + len * pow2_neg(j + 2)};
  }
  if (raw.hi > 1) return Interval{b - len / 4, b + 1};
  return Interval{b - len * pow2_neg(j + 2), b - len * pow2_neg(j + 4)};
}

}  // namespace

PolishPresentation interval_polish_presentation() {
  PolishPresentation ps;
  ps.name = "interval-N";
  ps.geometry = covers::interval_system();
  ps.cell = [](const Word& t) {
    Interval cur{-1, 2};
    for (auto i : t) cur = polish_child(cur, i);
    return Region{cur};
  };
  auto cell = ps.cell;
  ps.sample_points = [cell](const Word& t) {
    Interval raw = std::get<Interval>(cell(t)[0]);
    Rational a = rmax(raw.lo, Rational(0)), b = rmin(raw.hi, Rational(1));
    std::vector<Region> pts;
    if (raw.lo < 0) pts.push_back(covers::point_region(a));
    if (raw.hi > 1) pts.push_back(covers::point_region(b));
    for (const Rational& r : {Rational(1, 1000), Rational(1, 3), Rational(1, 2), Rational(5, 7), Rational(999, 1000)}) {
      pts.push_back(covers::point_region(a + r * (b - a)));
    }
    return pts;
  };
  return ps;
}

CheckReport verify_polish_presentation(const PolishPresentation& ps, std::size_t depth, std::size_t sample_children) {
  CheckReport report;
  const auto& g = *ps.geometry;
  std::function<void(Word&)> walk = [&](Word& t) {
    if (!report.ok) return;
    Region v = ps.cell(t);
    ++report.checked;
    if (!t.empty() && g.diameter(v) >= pow2_neg(t.size())) {
      report.fail("diam V[" + symbolic::to_string(t) + "] = " + to_string(g.diameter(v)));
      return;
    }
    for (const auto& x : ps.sample_points(t)) {
      bool hit = false;
      for (Symbol i = 0; i < ps.child_bound && !hit; ++i) {
        Word u = t;
        u.push_back(i);
        hit = g.contains(ps.cell(u), x);
      }
      if (!hit) {
        report.fail("children of [" + symbolic::to_string(t) + "] miss " + covers::to_string(x));
        return;
      }
    }
    if (t.size() == depth) return;
    for (Symbol i = 0; i < sample_children; ++i) {
      t.push_back(i);
      Region child = ps.cell(t);
      if (!g.contains(v, g.closure(child))) {
        report.fail("closure of V[" + symbolic::to_string(t) + "] leaves its parent");
        t.pop_back();
        return;
      }
      walk(t);
      t.pop_back();
    }
  };
  Word root;
  walk(root);
  return report;
}

// ---------------------------------------------------------------- Baire maps

BaireMap baire_identity() {
  return BaireMap{"id", [](const Word& s) { return covers::cylinder_region(s); }};
}

BaireMap parity_binary_map() {
  return BaireMap{"parity", [](const Word& s) {
                    Rational x;
                    for (std::size_t i = 0; i < s.size(); ++i) {
                      if (s[i] % 2) x += pow2_neg(i + 1);
                    }
                    return covers::interval_region(x, x + pow2_neg(s.size()));
                  }};
}

BaireMap baire_constant(Region point) {
  std::string name = "const" + covers::to_string(point);
  return BaireMap{name, [point](const Word&) { return point; }};
}

BaireExtension::BaireExtension(PolishPresentation ps, BaireMap phi, std::size_t max_prefix)
    : ps_(std::move(ps)), phi_(std::move(phi)), max_prefix_(max_prefix) {}

std::optional<std::vector<std::pair<Word, Word>>> BaireExtension::chain_within(const Word& s, std::size_t k) const {
  const auto& g = *ps_.geometry;
  std::vector<std::pair<Word, Word>> out;
  Word t;
  std::size_t len = 0;
  for (std::size_t j = 1; j <= k; ++j) {
    bool found = false;
    for (; len <= s.size() && !found; ++len) {
      Word sj = prefix(s, len);
      Region e = phi_.enclosure(sj);
      for (Symbol i = 0; i < ps_.child_bound; ++i) {
        Word u = t;
        u.push_back(i);
        if (g.contains(ps_.cell(u), e)) {
          out.emplace_back(sj, u);
          t = u;
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found) return std::nullopt;
  }
  return out;
}

std::vector<std::pair<Word, Word>> BaireExtension::chain(const Word& alpha, std::size_t k) const {
  Word s = prefix(alpha, max_prefix_);
  auto c = chain_within(s, k);
  if (c) return *c;
  if (alpha.size() < max_prefix_) {
    throw Error(ErrorCode::InsufficientInput, phi_.name + ": [" + symbolic::to_string(alpha) +
                                                  "] too short for level " + std::to_string(k));
  }
  throw Error(ErrorCode::NoCell, phi_.name + ": no cell of " + ps_.name + " at level " + std::to_string(k) +
                                     " within " + std::to_string(max_prefix_) + " input symbols");
}

Word BaireExtension::evaluate(const Word& alpha, std::size_t k) const {
  if (k == 0) return {};
  return chain(alpha, k).back().second;
}

std::vector<Word> BaireExtension::antichain(std::size_t k, std::size_t symbol_bound, std::size_t max_length) const {
  std::vector<Word> family;
  if (k == 0) return {Word{}};
  std::function<void(Word&)> walk = [&](Word& s) {
    auto c = chain_within(s, k);
    if (c) {
      // minimal: the chain closes exactly at the end of s
      family.push_back(c->back().first);
      return;
    }
    if (s.size() == max_length) {
      throw Error(ErrorCode::InsufficientInput, "level " + std::to_string(k) + " undecided below [" +
                                                    symbolic::to_string(s) + "]");
    }
    for (Symbol i = 0; i < symbol_bound; ++i) {
      s.push_back(i);
      walk(s);
      s.pop_back();
    }
  };
  Word root;
  walk(root);
  return family;
}

void check_antichain(const std::vector<Word>& family) {
  std::vector<Word> sorted = family;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  // lexicographic order puts every extension of w right after w's block
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (is_prefix(sorted[i - 1], sorted[i])) {
      throw Error(ErrorCode::NotAntichain, "[" + symbolic::to_string(sorted[i]) + "] extends [" +
                                               symbolic::to_string(sorted[i - 1]) + "]");
    }
  }
}

LiftCertificate certify_baire_extension(const BaireExtension& ext, std::size_t k_max, const std::vector<Word>& inputs) {
  LiftCertificate cert;
  cert.samples = inputs.size();
  for (std::size_t k = 1; k <= k_max; ++k) cert.levels.push_back(LevelResult{k, 0, true});
  auto fail = [&](std::size_t k, const std::string& why) {
    if (cert.ok) cert.witness = why;
    cert.ok = false;
    if (k >= 1 && k <= cert.levels.size()) cert.levels[k - 1].ok = false;
  };
  const auto& ps = ext.presentation();
  const auto& g = *ps.geometry;
  for (const auto& alpha : inputs) {
    std::vector<std::pair<Word, Word>> c;
    try {
      c = ext.chain(alpha, k_max);
    } catch (const Error& e) {
      fail(k_max, e.what());
      continue;
    }
    std::string at = " at alpha=[" + symbolic::to_string(alpha) + "]";
    for (std::size_t k = 1; k <= k_max; ++k) {
      const auto& [s, t] = c[k - 1];
      ++cert.levels[k - 1].checked;
      if (!is_prefix(s, alpha) || t.size() != k) fail(k, "malformed step" + at);
      if (k > 1 && (!is_prefix(c[k - 2].first, s) || !is_prefix(c[k - 2].second, t))) fail(k, "incoherent step" + at);
      if (!g.contains(ps.cell(t), ext.map().enclosure(s))) {
        fail(k, "phi[" + symbolic::to_string(s) + "] leaves V[" + symbolic::to_string(t) + "]" + at);
      }
      if (g.diameter(ps.cell(t)) >= pow2_neg(k)) fail(k, "cell [" + symbolic::to_string(t) + "] too wide" + at);
    }
  }
  return cert;
}

}  // namespace univdyn::lift
