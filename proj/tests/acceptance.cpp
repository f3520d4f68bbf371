// Acceptance run: one PASS/FAIL line per criterion, exit 0 iff all pass.
// Each criterion recomputes what it can by hand (closed-form cover cells,
// hand-iterated maps, brute-force set images) next to the library's own
// certificate.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

#include "univdyn/common.hpp"
#include "univdyn/covers.hpp"
#include "univdyn/error.hpp"
#include "univdyn/hyper.hpp"
#include "univdyn/injection_graph.hpp"
#include "univdyn/invariant.hpp"
#include "univdyn/lift.hpp"
#include "univdyn/symbolic.hpp"
#include "univdyn/universal_operator.hpp"

using namespace univdyn;
using symbolic::Symbol;
using symbolic::Word;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
  void require(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string str(const Rational& q) { return univdyn::to_string(q); }

// ------------------------------------------------------------ cover oracles

// Cell of the relative subdivision of [0,1]: open, except that an end at 0
// or 1 is included.
struct UnitCell {
  Rational lo = 0, hi = 1;
};

UnitCell unit_cell(const Word& s) {
  UnitCell c;
  for (Symbol n : s) {
    Rational h = (c.hi - c.lo) / 5;
    Rational lo = c.lo + Rational(static_cast<long>(n) - 1) * h;
    Rational hi = c.lo + Rational(static_cast<long>(n) + 1) * h;
    c = UnitCell{rmax(c.lo, lo), rmin(c.hi, hi)};
  }
  return c;
}

// closed [u, v] inside the cell
bool unit_contains(const UnitCell& c, const Rational& u, const Rational& v) {
  return (u > c.lo || c.lo == 0) && (v < c.hi || c.hi == 1);
}

// Open arc (start, start + length) of the circle cover.
struct ArcCell {
  Rational start, length;
};

ArcCell arc_cell(const Word& s) {
  Rational a = frac(Rational(static_cast<long>(s.at(0)) - 1) / 6), len(1, 3);
  for (std::size_t i = 1; i < s.size(); ++i) {
    Rational h = len / 5;
    long n = static_cast<long>(s[i]);
    Rational lo = rmax(Rational(0), Rational(n - 1) * h), hi = rmin(len, Rational(n + 1) * h);
    a += lo;
    len = hi - lo;
  }
  return ArcCell{frac(a), len};
}

// closed arc [x, x + width] inside the open arc
bool arc_contains(const ArcCell& c, const Rational& x, const Rational& width) {
  Rational off = frac(Rational(x - c.start));
  return off > 0 && off + width < c.length;
}

std::string word_str(const Word& w) {
  std::string s;
  for (Symbol x : w) s += std::to_string(x) + ".";
  return s;
}

// ------------------------------------------------------------ criteria

Outcome injections() {
  using namespace injection;
  Outcome out;
  double worst = 0;
  std::size_t cases = 0, edges = 0;
  auto check_case = [&](const PartialInjection& sigma) {
    auto t0 = Clock::now();
    auto cert = embed_injection(sigma, 64);
    // sigma(i) = pi_A^{-1}(mu(pi_A(i))) on every edge, recomputed here
    for (const auto& [i, j] : sigma.entries()) {
      auto a = cert.image(i);
      if (!a) continue;
      auto back = cert.preimage(mu_successor(*a));
      ++edges;
      if (!back || *back != j) {
        out.fail("edge " + std::to_string(i) + " -> " + std::to_string(j) + " is not conjugated");
        return;
      }
    }
    auto v = cert.verify(sigma);
    if (!v.ok) out.fail(v.witness);
    worst = std::max(worst, seconds_since(t0));
    ++cases;
  };

  std::vector<Index> perm(8);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::map<Index, Index> m;
    for (Index i = 0; i < 8; ++i) m[i] = perm[i];
    check_case(PartialInjection(m));
  } while (out.ok && std::next_permutation(perm.begin(), perm.end()));

  // random injections of {0..500}: cycles, rays and lines with declared types
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100 && out.ok; ++trial) {
    std::vector<Index> nodes(501);
    std::iota(nodes.begin(), nodes.end(), 0);
    std::shuffle(nodes.begin(), nodes.end(), rng);
    std::map<Index, Index> edges_map;
    std::map<Index, OracleEntry> oracle;
    std::size_t pos = 0, comp = 0;
    while (pos < nodes.size()) {
      std::size_t len = std::min<std::size_t>(1 + rng() % 12, nodes.size() - pos);
      int kind = static_cast<int>(rng() % 3);
      for (std::size_t k = 0; k + 1 < len; ++k) edges_map[nodes[pos + k]] = nodes[pos + k + 1];
      if (kind == 0) {
        edges_map[nodes[pos + len - 1]] = nodes[pos];
        oracle[nodes[pos]] = OracleEntry{comp, ComponentType::cycle(len), 0};
      } else if (kind == 1) {
        oracle[nodes[pos]] = OracleEntry{comp, ComponentType::ray(), 0};
      } else {
        oracle[nodes[pos]] = OracleEntry{comp, ComponentType::line(), static_cast<std::int64_t>(rng() % 5)};
      }
      pos += len;
      ++comp;
    }
    std::set<Index> extra(nodes.begin(), nodes.end());
    check_case(PartialInjection(edges_map, oracle, extra));
  }
  if (out.ok && worst >= 1.0) out.fail("slowest case took " + std::to_string(worst) + " s");
  if (out.ok) {
    out.detail = std::to_string(cases) + " injections, " + std::to_string(edges) + " edges, slowest " +
                 std::to_string(worst).substr(0, 5) + " s";
  }
  return out;
}

Matrix random_matrix(std::mt19937_64& rng) {
  std::size_t d = 1 + rng() % 5;
  Matrix t(d, std::vector<Rational>(d));
  bool nonzero = false;
  for (auto& row : t) {
    for (auto& x : row) {
      if (rng() % 3 == 0) continue;
      x = Rational(static_cast<long>(rng() % 9) - 4) / static_cast<long>(1 + rng() % 6);
      x.canonicalize();
      nonzero = nonzero || x != 0;
    }
  }
  if (!nonzero) t[0][0] = 1;
  return t;
}

Outcome operator_factorization() {
  using namespace linear;
  Outcome out;
  auto t0 = Clock::now();
  std::mt19937_64 rng(2);
  std::size_t least = static_cast<std::size_t>(-1), total = 0;
  for (int trial = 0; trial < 20 && out.ok; ++trial) {
    Matrix t = random_matrix(rng);
    BanachModel model{t.size(), NormKind::L1};
    // max column sum, by hand
    Rational rho = 0;
    for (std::size_t j = 0; j < t.size(); ++j) {
      Rational col = 0;
      for (std::size_t i = 0; i < t.size(); ++i) col += abs(t[i][j]);
      rho = rmax(rho, col);
    }
    auto src = std::make_shared<const DynamicDenseEnumeration>(build_dynamic_dense_enumeration(t, model, rho, 12, 3, 6000));
    auto pi = synthesize_factor_map(src, 10);
    std::size_t checked = 0;
    for (const auto& [i, a] : pi.embedding().pi_a()) {
      RationalVector lhs, rhs;
      try {
        lhs = linear::apply(t, pi.basis_image(a));
        rhs = pi.basis_image(injection::mu_successor(a));
      } catch (const Error& e) {
        if (e.code() == ErrorCode::OutOfCoverage) continue;
        throw;
      }
      for (auto& x : rhs) x *= rho;
      ++checked;
      if (lhs != rhs) {
        out.fail(to_string(t) + ": T pi(e_" + std::to_string(a) + ") = " + to_string(lhs) + " but rho pi(U e) = " +
                 to_string(rhs));
        break;
      }
    }
    auto surj = pi.check_d_surjectivity();
    out.require(surj.ok, surj.witness);
    auto comm = pi.check_commutation();
    out.require(comm.ok, comm.witness);
    least = std::min(least, checked);
    total += checked;
  }
  double secs = seconds_since(t0);
  out.require(least >= 1000, "only " + std::to_string(least) + " indices in a case");
  out.require(secs < 30, "took " + std::to_string(secs) + " s");
  if (out.ok) {
    out.detail = std::to_string(total) + " commuting indices, at least " + std::to_string(least) + " per matrix, " +
                 std::to_string(secs).substr(0, 5) + " s";
  }
  return out;
}

Outcome isometry() {
  using namespace linear;
  Outcome out;
  std::mt19937_64 rng(3);
  std::size_t tested = 0;
  while (tested < 10000 && out.ok) {
    SparseL1Vector x;
    std::map<injection::Index, Rational> by_hand;
    std::size_t terms = 1 + rng() % 6;
    for (std::size_t j = 0; j < terms; ++j) {
      injection::Index i = rng() % 100000;
      if (!injection::is_valid_index(i)) continue;
      Rational c = Rational(static_cast<long>(rng() % 41) - 20) / static_cast<long>(1 + rng() % 12);
      c.canonicalize();
      x.add(i, c);
    }
    Rational norm = 0;
    for (const auto& [i, c] : x.support()) {
      norm += abs(c);
      by_hand[injection::mu_successor(i)] += c;
    }
    auto y = apply_universal(x);
    out.require(y.support() == by_hand, "U(x) is not the relabelled vector for " + x.to_string());
    out.require(y.norm() == norm && x.norm() == norm, "norm changed for " + x.to_string());
    ++tested;
  }
  if (out.ok) out.detail = std::to_string(tested) + " sparse vectors";
  return out;
}

Outcome norm_growth() {
  using namespace linear;
  Outcome out;
  auto r = norm_growth_certificate(Matrix{{2, 0}, {0, 2}}, BanachModel{2, NormKind::L1},
                                   [](std::size_t) { return Rational(1); }, 20);
  out.require(r.ratios.size() == 20, "wrong number of ratios");
  for (std::size_t n = 0; n < r.ratios.size() && out.ok; ++n) {
    Rational expect = 1;
    for (std::size_t j = 0; j <= n; ++j) expect *= 2;
    out.require(r.ratios[n] && *r.ratios[n] == expect, "ratio at n = " + std::to_string(n + 1) + " is not 2^n");
    if (n > 0) out.require(*r.ratios[n] > *r.ratios[n - 1], "ratios not strictly increasing");
  }
  out.require(r.unbounded_evidence, "growth not flagged");
  if (out.ok) out.detail = "||(2Id)^n|| / ||U^n|| = 2^n for n <= 20";
  return out;
}

// T of a closed subinterval of [0,1], by hand
std::pair<Rational, Rational> image_by_hand(const std::string& name, const Rational& a, const Rational& b) {
  if (name == "square") return {a * a, b * b};
  auto tent = [](const Rational& x) { return x <= Rational(1, 2) ? Rational(2 * x) : Rational(2 - 2 * x); };
  if (b <= Rational(1, 2) || a >= Rational(1, 2)) {
    Rational u = tent(a), v = tent(b);
    return {rmin(u, v), rmax(u, v)};
  }
  return {rmin(tent(a), tent(b)), Rational(1)};
}

Outcome single_map_lift() {
  Outcome out;
  auto t0 = Clock::now();
  auto cs = covers::interval_system();
  std::size_t checks = 0;
  for (const auto& t : {lift::square_map(), lift::tent_map()}) {
    auto sl = lift::lift_self_map(cs, t, 10);
    auto cert = lift::certify_self_lift(sl, 10, 1000, 5);
    out.require(cert.ok && cert.samples == 1000, t.name + ": " + cert.witness);
    for (std::size_t j = 0; j < 1000 && out.ok; ++j) {
      Word alpha = sl.extension.sample_input(10, 100 + j);
      UnitCell in = unit_cell(alpha);
      auto [u, v] = image_by_hand(t.name, in.lo, in.hi);
      Word out_word = sl.transducer.evaluate(alpha, 10);
      for (std::size_t k = 1; k <= 10; ++k) {
        Word tk(out_word.begin(), out_word.begin() + k);
        ++checks;
        if (!unit_contains(unit_cell(tk), u, v)) {
          out.fail(t.name + ": T(cell of alpha) = [" + str(u) + ", " + str(v) + "] escapes V_" + word_str(tk));
          break;
        }
      }
    }
  }
  double secs = seconds_since(t0);
  out.require(secs < 60, "took " + std::to_string(secs) + " s");
  if (out.ok) out.detail = std::to_string(checks) + " cell inclusions, " + std::to_string(secs).substr(0, 5) + " s";
  return out;
}

Outcome strong_extension() {
  Outcome out;
  lift::StrongExtension ext(covers::circle_system(), lift::rotation_family(), 8);
  auto cert = ext.certify(8, 100, 6);
  out.require(cert.ok && cert.samples == 100, cert.witness);
  std::size_t checks = 0;
  for (std::size_t j = 0; j < 100 && out.ok; ++j) {
    Word p = ext.sample_parameter(8, 200 + j);
    Word alpha = ext.sample_input(8, 300 + j);
    Rational theta = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i]) theta += pow2_neg(i + 2);
    }
    ArcCell in = arc_cell(alpha);
    // every extension of p rotates by at most 2^{-|p|-1} more
    Rational width = in.length + pow2_neg(p.size() + 1);
    for (std::size_t k = 1; k <= 8; ++k) {
      Word t = ext.evaluate(p, alpha, k);
      ++checks;
      if (!arc_contains(arc_cell(t), in.start + theta, width)) {
        out.fail("Phi(p) of the cell of alpha escapes V_" + word_str(t));
        break;
      }
    }
  }
  if (out.ok) out.detail = std::to_string(checks) + " arc inclusions, 0 failures";
  return out;
}

std::vector<common::MapFamily> pipeline_pieces() {
  return {common::MapFamily::finite("pw", {lift::square_map(), lift::tent_map()}),
          common::MapFamily::sampled(lift::rotation_family(), {Word{1}, Word{0, 1, 1}, Word{1, 1, 0, 1}})};
}

Outcome pipeline() {
  Outcome out;
  auto ce = common::common_extension_baire(pipeline_pieces(), 6, 10, 7);
  for (const auto& stage : ce.pieces) {
    for (const auto& m : stage.lift.members) out.require(m.certificate.ok, m.name + ": " + m.certificate.witness);
  }
  auto cert = common::certify_common_extension(ce, 5, 8);
  out.require(cert.diagrams.size() == 5, "expected five member diagrams");
  std::size_t checked = 0;
  for (const auto& d : cert.diagrams) {
    out.require(d.ok, d.name + ": " + d.witness);
    checked += d.checked;
  }
  auto baire = symbolic::SymbolicSpace::baire();
  for (std::size_t k = 1; k <= 6; ++k) {
    for (std::size_t i = 0; i < 2; ++i) {
      auto r = symbolic::check_projection_surjective(baire, i, k);
      out.require(r.ok, "piece projection " + std::to_string(i) + " at level " + std::to_string(k) + ": " + r.witness);
    }
    for (std::size_t j = 0; j < 3; ++j) {
      auto r = symbolic::check_projection_surjective(baire, j, k);
      out.require(r.ok, "member projection " + std::to_string(j) + " at level " + std::to_string(k) + ": " + r.witness);
    }
  }
  if (out.ok) out.detail = "5 diagrams, " + std::to_string(checked) + " sampled points, projections onto at k <= 6";
  return out;
}

Outcome controlled_powers() {
  Outcome out;
  std::vector<lift::PointMap> fam{lift::affine_map(Rational(1, 2), 0), lift::affine_map(Rational(1, 2), Rational(1, 4))};
  auto cert = common::controlled_powers_check(fam, Rational(1, 2), 16, 12);
  out.require(cert.status == common::PowersCertificate::Status::Certified, "halving family not certified: " + cert.note);
  out.require(cert.schedule.size() == 13, "schedule length");
  for (std::size_t i = 0; i < cert.schedule.size() && out.ok; ++i) {
    out.require(cert.schedule[i] == pow2_neg(i), "eps_" + std::to_string(i) + " = " + str(cert.schedule[i]));
  }
  // sup over the grid of the distance of S^i x to the fixed point, iterated by hand
  for (std::size_t i = 0; i <= 12 && out.ok; ++i) {
    Rational sup = 0;
    for (long g = 0; g <= 16; ++g) {
      Rational x = Rational(g) / 16, y = x;
      for (std::size_t r = 0; r < i; ++r) {
        x = x / 2;
        y = y / 2 + Rational(1, 4);
      }
      sup = rmax(sup, rmax(abs(x), abs(Rational(y - Rational(1, 2)))));
    }
    out.require(sup <= pow2_neg(i), "defect " + str(sup) + " above eps_" + std::to_string(i));
  }
  Rational theta(1, 8), delta(1, 64);
  auto rot = common::controlled_powers_check({lift::rotation_map(theta), lift::rotation_map(theta + delta)}, std::nullopt,
                                             8, 64);
  out.require(rot.status == common::PowersCertificate::Status::Falsified && rot.witness.has_value(),
              "rotations not falsified");
  if (out.ok) {
    const auto& w = *rot.witness;
    // i delta around the circle, by hand
    Rational drift = frac(Rational(static_cast<long>(w.i)) * delta);
    drift = rmin(drift, Rational(1 - drift));
    out.require(drift == w.power_distance, "witness distance " + str(w.power_distance) + " but i delta gives " + str(drift));
    out.require(w.map_distance == delta, "map distance " + str(w.map_distance));
    out.detail = "eps_i = 2^-i to i = 12; rotations: S = " + w.s + ", S' = " + w.s_prime + ", i = " +
                 std::to_string(w.i) + ", x = " + covers::to_string(w.x);
  }
  return out;
}

Outcome contractive_model() {
  Outcome out;
  auto cs = covers::interval_system();
  std::vector<lift::PointMap> fam{lift::affine_map(Rational(1, 2), 0), lift::affine_map(Rational(1, 2), Rational(1, 4))};
  auto net = common::uniform_net(*cs, Rational(1, 16));
  auto model = common::contractive_common_extension(cs, fam, Rational(1, 2), 10, net, Rational(1, 16));
  out.require(model.defect <= pow2_neg(10), "frontier defect " + str(model.defect));
  out.require(model.surjectivity.ok, model.surjectivity.witness);
  out.require(model.diagrams.ok, model.diagrams.witness);
  // orbit values against the closed forms x / 2^i and x / 2^i + (1 - 2^-i) / 2
  for (std::size_t i = 0; i <= 10 && out.ok; ++i) {
    for (std::size_t a = 0; a < net.size(); ++a) {
      Rational x = Rational(static_cast<long>(a)) / 16;
      Rational s0 = x * pow2_neg(i), s1 = x * pow2_neg(i) + (1 - pow2_neg(i)) / 2;
      auto got0 = std::get<covers::Interval>(model.orbit[i][a][0][0]).lo;
      auto got1 = std::get<covers::Interval>(model.orbit[i][a][1][0]).lo;
      out.require(got0 == s0 && got1 == s1, "orbit entry (" + std::to_string(i) + ", " + std::to_string(a) + ")");
    }
  }
  auto e = model.elements();
  auto good = common::invariant_witness_check(*cs, fam, e, model.defect_bound, Rational(1, 16));
  out.require(good.ok, "constructed E rejected: " + good.witness);
  auto empty = common::invariant_witness_check(*cs, fam, {}, model.defect_bound, Rational(1, 16));
  out.require(!empty.ok, "empty set accepted");
  if (out.ok) {
    out.detail = "defect " + str(model.defect) + " <= 2^-10, " + std::to_string(model.diagrams.checked) +
                 " diagram entries, |E| = " + std::to_string(e.size());
  }
  return out;
}

std::set<Word> brute_image(const symbolic::PrefixTransducer& s, const Word& c, std::size_t k, std::size_t len) {
  std::set<Word> out;
  std::size_t free = len - c.size();
  for (std::uint64_t bits = 0; bits < (1ULL << free); ++bits) {
    Word w = c;
    for (std::size_t i = 0; i < free; ++i) w.push_back((bits >> i) & 1);
    out.insert(s.evaluate(w, k));
  }
  return out;
}

Outcome hyperspace() {
  using namespace hyper;
  Outcome out;
  auto cantor = symbolic::SymbolicSpace::cantor();
  std::vector<symbolic::PrefixTransducer> n{symbolic::shift_transducer(cantor), symbolic::identity_transducer(cantor),
                                            symbolic::odometer_transducer()};
  std::mt19937_64 rng(10);
  const std::size_t k = 5;
  for (int trial = 0; trial < 500 && out.ok; ++trial) {
    std::set<std::pair<std::size_t, Word>> pairs;
    for (std::size_t s = 0; s < 3; ++s) {
      std::size_t count = 1 + rng() % 3;
      for (std::size_t j = 0; j < count; ++j) {
        Word w(rng() % 9);
        for (auto& b : w) b = rng() % 2;
        pairs.emplace(s, w);
      }
    }
    CompactRelation a(3, pairs);
    auto ua = hyper_universal_step(n, a, k);
    for (std::size_t s = 0; s < 3; ++s) {
      std::set<Word> oracle;
      for (const auto& c : a.cross_section(s)) {
        auto part = brute_image(n[s], c, k, 10);
        oracle.insert(part.begin(), part.end());
      }
      out.require(ua.cross_section(s) == oracle, "cross section differs for " + to_string(a));
    }
  }
  for (int trial = 0; trial < 100 && out.ok; ++trial) {
    Word x(24);
    for (auto& b : x) b = rng() % 2;
    auto c = CompactRelation::constant(3, x);
    auto uc = hyper_universal_step(n, c, 8);
    for (std::size_t s = 0; s < 3; ++s) {
      out.require(c.cross_section(s) == std::set<Word>{x}, "constant relation is not a singleton");
      out.require(uc.cross_section(s) == std::set<Word>{n[s].evaluate(x, 8)}, "singleton not attained");
    }
  }
  // every table with at most 3 points on each side, against a bitmask union
  std::size_t tables = 0;
  for (std::size_t nz = 1; nz <= 3 && out.ok; ++nz) {
    for (std::size_t ny = 1; ny <= 3 && out.ok; ++ny) {
      for (std::size_t nx = 1; nx <= 3 && out.ok; ++nx) {
        std::size_t ys = (1u << ny) - 1, xs = (1u << nx) - 1;
        std::size_t inner_count = 1, outer_count = 1;
        for (std::size_t z = 0; z < nz; ++z) inner_count *= ys;
        for (std::size_t y = 0; y < ny; ++y) outer_count *= xs;
        for (std::size_t ic = 0; ic < inner_count && out.ok; ++ic) {
          std::vector<unsigned> pp(nz);
          GeneralizedTable ppt(nz);
          for (std::size_t z = 0, r = ic; z < nz; ++z, r /= ys) {
            pp[z] = static_cast<unsigned>(r % ys) + 1;
            for (std::size_t y = 0; y < ny; ++y) {
              if (pp[z] >> y & 1) ppt[z].insert(y);
            }
          }
          for (std::size_t oc = 0; oc < outer_count; ++oc) {
            std::vector<unsigned> p(ny);
            GeneralizedTable pt(ny);
            for (std::size_t y = 0, r = oc; y < ny; ++y, r /= xs) {
              p[y] = static_cast<unsigned>(r % xs) + 1;
              for (std::size_t x = 0; x < nx; ++x) {
                if (p[y] >> x & 1) pt[y].insert(x);
              }
            }
            auto g = compose_generalized(pt, ppt);
            for (std::size_t z = 0; z < nz; ++z) {
              unsigned mask = 0;
              for (std::size_t y = 0; y < ny; ++y) {
                if (pp[z] >> y & 1) mask |= p[y];
              }
              unsigned got = 0;
              for (auto x : g[z]) got |= 1u << x;
              if (got != mask) out.fail("composition differs from the union oracle");
            }
            ++tables;
          }
        }
      }
    }
  }
  if (out.ok) out.detail = "500 relations, 100 singletons, " + std::to_string(tables) + " table pairs";
  return out;
}

Outcome invariant_tower() {
  Outcome out;
  auto half = lift::affine_map(Rational(1, 2), 0);
  std::vector<Rational> z{0};
  for (std::size_t i = 0; i <= 8; ++i) z.push_back(pow2_neg(i));
  auto tw = invariant::invariant_refinement_tower(half, z, {pow2_neg(8)}, 6);
  auto cert = invariant::certify_tower(half, tw);
  out.require(cert.ok(), cert.disjoint.witness + cert.diameter.witness + cert.covering.witness +
                             cert.containment.witness + cert.nesting.witness);
  // by hand: sorted disjoint cells, diameters, x/2 images inside one coarser cell
  for (std::size_t j = 1; j <= 6 && out.ok; ++j) {
    const auto& cells = tw.levels[j].cells;
    const auto& prev = tw.levels[j - 1].cells;
    for (std::size_t n = 0; n < cells.size(); ++n) {
      out.require(cells[n].hi - cells[n].lo < pow2_neg(j), "diameter at level " + std::to_string(j));
      if (n + 1 < cells.size()) out.require(cells[n].hi <= cells[n + 1].lo, "overlap at level " + std::to_string(j));
      out.require(cells[n].lo < tw.z[n] && tw.z[n] < cells[n].hi, "point uncovered");
      if (tw.z[n] == pow2_neg(8)) continue;
      Rational a = rmax(Rational(0), cells[n].lo) / 2, b = rmin(Rational(1), cells[n].hi) / 2;
      bool inside = std::any_of(prev.begin(), prev.end(), [&](const auto& p) { return p.lo < a && b < p.hi; });
      out.require(inside, "image of the cell at " + str(tw.z[n]) + " escapes level " + std::to_string(j - 1));
    }
  }
  try {
    invariant::invariant_refinement_tower(lift::square_map(), {Rational(1, 3)}, {}, 6);
    out.fail("Z = {1/3} under x^2 accepted");
  } catch (const Error& e) {
    out.require(e.code() == ErrorCode::NotInvariant && std::string(e.what()).find("1/9") != std::string::npos,
                std::string("wrong rejection: ") + e.what());
  }
  if (out.ok) {
    out.detail = "depth 6, " + std::to_string(cert.containment.checked) + " containments; {1/3} rejected with 1/9";
  }
  return out;
}

Outcome cover_systems() {
  Outcome out;
  std::vector<std::pair<std::string, std::size_t>> spaces{
      {"interval", 46656}, {"circle", 46656}, {"cantor", 64}, {"finite:[[0,1,2],[1,0,1],[2,1,0]]", 3 * 32},
      {"cantor*finite:[[0,1,2],[1,0,1],[2,1,0]]", 64 * 3 * 32}};
  std::ostringstream names;
  for (const auto& [name, cells] : spaces) {
    auto t0 = Clock::now();
    auto cs = covers::make_cover_system(name);
    auto cert = covers::verify_cover_system(*cs, 6);
    out.require(cert.ok, name + ": " + cert.failed_condition + " " + cert.witness);
    out.require(!cert.levels.empty() && cert.levels.back().cells == cells,
                name + ": level 6 holds " + std::to_string(cert.levels.empty() ? 0 : cert.levels.back().cells) +
                    " cells, expected " + std::to_string(cells));
    names << cs->name().substr(0, cs->name().find(':')) << " " << std::to_string(seconds_since(t0)).substr(0, 4) << "s; ";
  }
  if (out.ok) out.detail = names.str();
  return out;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"injection embedding oracle", injections},
      {"operator factorization", operator_factorization},
      {"isometry of U", isometry},
      {"norm growth of 2 Id", norm_growth},
      {"single-map lift", single_map_lift},
      {"strong extension of rotations", strong_extension},
      {"common extension pipeline", pipeline},
      {"controlled powers", controlled_powers},
      {"contractive Cantor extension", contractive_model},
      {"hyperspace", hyperspace},
      {"invariant tower", invariant_tower},
      {"cover systems", cover_systems},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    all = all && o.ok;
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << (i + 1) << " " << criteria[i].first << " ("
              << std::to_string(seconds_since(t0)).substr(0, 5) << " s): " << o.detail << std::endl;
  }
  return all ? 0 : 1;
}
