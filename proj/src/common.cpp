#include "univdyn/common.hpp"

#include <algorithm>
#include <random>

#include "univdyn/error.hpp"
#include "univdyn/pairing.hpp"

namespace univdyn::common {

using covers::Arc;
using covers::Interval;
using covers::PointSet;
using univdyn::to_string;

namespace {

Word prefix(const Word& w, std::size_t n) { return Word(w.begin(), w.begin() + std::min(n, w.size())); }

// number of m with pair(n, m) < limit
std::size_t stream_count_below(std::size_t n, std::size_t limit) {
  std::size_t m = 0;
  while (cantor_pair(n, m) < limit) ++m;
  return m;
}

Region open_ball(const covers::CoverSystem& cs, const Region& x, const Rational& eps) {
  if (x.size() == 1) {
    if (const auto* i = std::get_if<Interval>(&x[0])) return Region{Interval{i->lo - eps, i->hi + eps}};
    if (const auto* a = std::get_if<Arc>(&x[0])) return covers::arc_region(a->start - eps, a->length + 2 * eps);
    if (std::holds_alternative<PointSet>(x[0])) return cs.inflate(x, eps);
  }
  throw Error(ErrorCode::SpaceMismatch, "no ball around " + covers::to_string(x));
}

CheckReport eps_net_check(const covers::CoverSystem& cs, const std::vector<Region>& points, const Rational& eps) {
  std::vector<Region> balls;
  for (const auto& p : points) balls.push_back(open_ball(cs, p, eps));
  return cs.covers(balls, cs.whole());
}

Rational tab_distance(const covers::CoverSystem& cs, const Tabulated& a, const Tabulated& b) {
  Rational d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = rmax(d, point_distance(cs, a[i], b[i]));
  return d;
}

std::string tab_string(const Tabulated& e) {
  std::string out = "(";
  for (std::size_t i = 0; i < e.size(); ++i) out += (i ? ", " : "") + covers::to_string(e[i]);
  return out + ")";
}

}  // namespace

// ---------------------------------------------------------------- families

MapFamily MapFamily::finite(std::string name, std::vector<PointMap> members) {
  if (members.empty()) throw Error(ErrorCode::EmptyFamily, name + " has no members");
  CoverSystemPtr space = members[0].space;
  for (const auto& m : members) {
    if (m.space->name() != space->name()) throw Error(ErrorCode::SpaceMismatch, m.name + " acts on another space");
  }
  return MapFamily{std::move(name), space, std::move(members), std::nullopt, {}};
}

MapFamily MapFamily::sampled(lift::ParameterizedFamily family, std::vector<Word> parameters) {
  if (parameters.empty()) throw Error(ErrorCode::EmptyFamily, family.name + " has no sampled parameters");
  std::string name = family.name;
  CoverSystemPtr space = family.space;
  return MapFamily{std::move(name), std::move(space), {}, std::move(family), std::move(parameters)};
}

std::size_t MapFamily::size() const { return parameterized ? parameters.size() : members.size(); }

std::string MapFamily::member_name(std::size_t j) const {
  if (parameterized) return name + "[" + symbolic::to_string(prefix(parameters.at(j), 12)) + "]";
  return members.at(j).name;
}

FamilyLift family_lift(const MapFamily& fam, std::size_t max_level, std::size_t cert_level, std::size_t samples,
                       std::uint64_t seed) {
  FamilyLift out{fam.space, {}};
  cert_level = std::min(cert_level, max_level);
  if (fam.parameterized) {
    auto ext = std::make_shared<const lift::StrongExtension>(fam.space, *fam.parameterized, max_level);
    std::mt19937_64 rng(seed);
    for (std::size_t j = 0; j < fam.parameters.size(); ++j) {
      Word p = fam.parameters[j];
      if (p.size() < ext->param_modulus(max_level)) {
        // pad a short parameter with zeros: the same point of 2^N read as a finite word
        p.resize(ext->param_modulus(max_level), 0);
      }
      std::vector<std::pair<Word, Word>> pairs;
      for (std::size_t n = 0; n < samples; ++n) pairs.emplace_back(p, ext->sample_input(cert_level, rng()));
      out.members.push_back(LiftedMember{fam.member_name(j), ext, p, ext->transducer_for(p),
                                         ext->certify_pairs(cert_level, pairs)});
    }
    return out;
  }
  for (std::size_t j = 0; j < fam.members.size(); ++j) {
    auto lifted = lift::lift_self_map(fam.space, fam.members[j], max_level);
    auto cert = lift::certify_self_lift(lifted, cert_level, samples, seed + j);
    auto ext = std::make_shared<const lift::StrongExtension>(lifted.extension);
    out.members.push_back(LiftedMember{fam.members[j].name, ext, {}, lifted.transducer, cert});
  }
  return out;
}

PrefixTransducer rebase(const PrefixTransducer& f, const symbolic::SymbolicSpace& space) {
  return PrefixTransducer(
      f.name(), space, space,
      [f](const Word& w, std::size_t k) {
        Word head = prefix(w, f.modulus(k));
        if (!f.domain().accepts(head)) {
          throw Error(ErrorCode::InvalidBranch, "[" + symbolic::to_string(head) + "] is outside " + f.domain().name());
        }
        return f.evaluate(head, k);
      },
      [f](std::size_t k) { return f.modulus(k); });
}

// ---------------------------------------------------------------- U_N

UniversalOnFunctions universal_on_functions(const symbolic::SymbolicSpace& space, std::vector<PrefixTransducer> family) {
  if (family.empty()) throw Error(ErrorCode::EmptyFamily, "U_N needs at least one map");
  PrefixTransducer u = symbolic::product_lift(space, family);
  std::vector<PrefixTransducer> projections;
  for (std::size_t n = 0; n < family.size(); ++n) projections.push_back(symbolic::projection_transducer(space, n));
  return UniversalOnFunctions{space, std::move(family), std::move(u), std::move(projections)};
}

CheckReport check_universal_diagrams(const UniversalOnFunctions& un, const std::vector<Word>& samples, std::size_t k) {
  CheckReport report;
  for (std::size_t n = 0; n < un.family.size(); ++n) {
    report.merge(symbolic::check_lift_commutes(un.u, un.family[n], n, samples, k));
    if (un.space == symbolic::SymbolicSpace::cantor() || un.space == symbolic::SymbolicSpace::baire()) {
      report.merge(symbolic::check_projection_surjective(un.space, n, k));
    }
  }
  return report;
}

// ---------------------------------------------------------------- pipeline

std::size_t pipeline_output_length(const std::vector<std::size_t>& piece_sizes, std::size_t k) {
  if (k == 0) return 0;
  std::size_t need = 0;
  for (std::size_t i = 0; i < piece_sizes.size(); ++i) {
    for (std::size_t j = 0; j < piece_sizes[i]; ++j) need = std::max<std::size_t>(need, cantor_pair(i, cantor_pair(j, k - 1)) + 1);
  }
  return need;
}

Word member_stream(const Word& z, std::size_t piece, std::size_t member) {
  return symbolic::stream_of(symbolic::stream_of(z, piece), member);
}

CommonExtension common_extension_baire(const std::vector<MapFamily>& pieces, std::size_t k, std::size_t samples,
                                       std::uint64_t seed) {
  auto baire = symbolic::SymbolicSpace::baire();
  CommonExtension ce{{}, symbolic::identity_transducer(baire), k};
  if (pieces.empty()) return ce;
  std::vector<std::size_t> sizes;
  for (const auto& p : pieces) sizes.push_back(p.size());
  std::size_t outer = pipeline_output_length(sizes, k);
  std::vector<PrefixTransducer> piece_maps;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    // the outer prefix needs `inner` symbols of stream i, which in turn
    // need up to `level` symbols of each member stream
    std::size_t inner = stream_count_below(i, outer);
    std::size_t level = k;
    for (std::size_t j = 0; j < sizes[i]; ++j) level = std::max(level, stream_count_below(j, inner));
    PieceStage stage{pieces[i], family_lift(pieces[i], level, k, samples, seed + 1000 * i), std::nullopt};
    std::vector<PrefixTransducer> members;
    for (const auto& m : stage.lift.members) members.push_back(rebase(m.transducer, baire));
    stage.universal = universal_on_functions(baire, members);
    piece_maps.push_back(stage.universal->u);
    ce.pieces.push_back(std::move(stage));
  }
  ce.u = symbolic::product_lift(baire, piece_maps);
  return ce;
}

PipelineCertificate certify_common_extension(const CommonExtension& ce, std::size_t samples, std::uint64_t seed) {
  PipelineCertificate cert;
  cert.level = ce.diagram_level;
  std::size_t k = ce.diagram_level;
  std::vector<std::size_t> sizes;
  for (std::size_t i = 0; i < ce.pieces.size(); ++i) {
    sizes.push_back(ce.pieces[i].lift.members.size());
    for (std::size_t j = 0; j < sizes.back(); ++j) {
      cert.diagrams.push_back(MemberDiagram{i, j, ce.pieces[i].lift.members[j].name, true, 0, ""});
    }
  }
  if (cert.diagrams.empty() || k == 0) return cert;
  std::size_t outer = pipeline_output_length(sizes, k);
  std::size_t input = ce.u.modulus(outer);
  std::mt19937_64 rng(seed);
  for (std::size_t n = 0; n < samples; ++n) {
    std::vector<Word> zs;
    for (const auto& stage : ce.pieces) {
      std::vector<Word> streams;
      for (const auto& m : stage.lift.members) streams.push_back(m.extension->sample_input(k, rng()));
      zs.push_back(symbolic::interleave_pack_to_length(streams, 0, input));
    }
    Word w = symbolic::interleave_pack_to_length(zs, 0, input);
    Word out = ce.u.evaluate(w, outer);
    for (auto& d : cert.diagrams) {
      const auto& member = ce.pieces[d.piece].lift.members[d.member];
      const auto& cs = member.extension->cover();
      Word alpha = member_stream(w, d.piece, d.member);
      Word t = prefix(member_stream(out, d.piece, d.member), k);
      ++d.checked;
      auto fail = [&](const std::string& why) {
        if (d.ok) d.witness = why + " at stream [" + symbolic::to_string(prefix(alpha, 24)) + "...]";
        d.ok = false;
        cert.ok = false;
      };
      if (t.size() < k) {
        fail("pipeline output too short");
        continue;
      }
      if (t != member.transducer.evaluate(alpha, k)) fail("pipeline differs from the member lift");
      Region image = member.extension->family().region(member.parameter, cs.closure(cs.cell(alpha)));
      for (std::size_t j = 1; j <= k; ++j) {
        if (!cs.contains(cs.cell(prefix(t, j)), image)) {
          fail("image " + covers::to_string(image) + " leaves V[" + symbolic::to_string(prefix(t, j)) + "]");
          break;
        }
      }
    }
  }
  return cert;
}

// ---------------------------------------------------------------- contractions

Rational point_distance(const covers::CoverSystem& cs, const Region& a, const Region& b) {
  if (a.size() == 1 && b.size() == 1) {
    const auto* ia = std::get_if<Interval>(&a[0]);
    const auto* ib = std::get_if<Interval>(&b[0]);
    if (ia && ib && ia->lo == ia->hi && ib->lo == ib->hi) return abs(ia->lo - ib->lo);
    const auto* aa = std::get_if<Arc>(&a[0]);
    const auto* ab = std::get_if<Arc>(&b[0]);
    if (aa && ab && aa->length == 0 && ab->length == 0) {
      Rational d = frac(aa->start - ab->start);
      return rmin(d, Rational(1 - d));
    }
    const auto* pa = std::get_if<PointSet>(&a[0]);
    const auto* pb = std::get_if<PointSet>(&b[0]);
    if (pa && pb && pa->points.size() == 1 && pb->points.size() == 1) {
      return cs.diameter(covers::point_set_region({pa->points[0], pb->points[0]}));
    }
  }
  throw Error(ErrorCode::SpaceMismatch,
              "distance needs two points, got " + covers::to_string(a) + " and " + covers::to_string(b));
}

std::vector<Region> sample_points(const covers::CoverSystem& cs, std::size_t grid) {
  Region whole = cs.whole();
  std::vector<Region> out;
  auto at = [grid](std::size_t j) {
    Rational x(j, grid);
    x.canonicalize();
    return x;
  };
  if (std::holds_alternative<Interval>(whole[0])) {
    for (std::size_t j = 0; j <= grid; ++j) out.push_back(covers::point_region(at(j)));
  } else if (std::holds_alternative<Arc>(whole[0])) {
    for (std::size_t j = 0; j < grid; ++j) out.push_back(covers::arc_region(at(j), 0));
  } else if (const auto* ps = std::get_if<PointSet>(&whole[0])) {
    for (auto p : ps->points) out.push_back(covers::point_set_region({p}));
  } else {
    throw Error(ErrorCode::SpaceMismatch, cs.name() + " has no point samples");
  }
  return out;
}

std::vector<Region> uniform_net(const covers::CoverSystem& cs, const Rational& step) {
  if (step <= 0) throw Error(ErrorCode::NetTooCoarse, "net step must be positive");
  Region whole = cs.whole();
  std::vector<Region> out;
  if (std::holds_alternative<Interval>(whole[0])) {
    for (Rational x = 0; x < 1; x += step) out.push_back(covers::point_region(x));
    out.push_back(covers::point_region(1));
  } else if (std::holds_alternative<Arc>(whole[0])) {
    for (Rational x = 0; x < 1; x += step) out.push_back(covers::arc_region(x, 0));
  } else {
    out = sample_points(cs, 0);
  }
  return out;
}

Region apply_point(const PointMap& s, const Region& x) {
  Region y = s.image(x);
  bool point = false;
  if (y.size() == 1) {
    if (const auto* i = std::get_if<Interval>(&y[0])) point = i->lo == i->hi;
    if (const auto* a = std::get_if<Arc>(&y[0])) point = a->length == 0;
    if (const auto* p = std::get_if<PointSet>(&y[0])) point = p->points.size() == 1;
  }
  if (!point) throw Error(ErrorCode::SpaceMismatch, s.name + " does not map " + covers::to_string(x) + " to a point");
  return y;
}

void check_lipschitz(const PointMap& s, const Rational& c, const std::vector<Region>& samples) {
  const auto& cs = *s.space;
  std::vector<Region> images;
  for (const auto& x : samples) images.push_back(apply_point(s, x));
  for (std::size_t a = 0; a < samples.size(); ++a) {
    for (std::size_t b = 0; b < a; ++b) {
      Rational dxy = point_distance(cs, samples[a], samples[b]);
      Rational dfxy = point_distance(cs, images[a], images[b]);
      if (dfxy > c * dxy) {
        throw Error(ErrorCode::LipschitzRefuted, s.name + ": d(S" + covers::to_string(samples[a]) + ", S" +
                                                     covers::to_string(samples[b]) + ") = " + to_string(dfxy) +
                                                     " > " + to_string(c) + " * " + to_string(dxy));
      }
    }
  }
}

FixedPoint contraction_fixed_point(const PointMap& s, const Rational& c, const Region& a, const Rational& tol) {
  if (c < 0 || c >= 1) throw Error(ErrorCode::LipschitzRefuted, s.name + ": constant " + to_string(c) + " is not below 1");
  if (tol <= 0) throw Error(ErrorCode::InsufficientResolution, "tolerance must be positive");
  check_lipschitz(s, c, sample_points(*s.space, 16));
  Rational diam = s.space->diameter(s.space->whole());
  Rational bound = diam / (1 - c);
  std::size_t i = 0;
  Region x = a;
  while (bound > tol) {
    x = apply_point(s, x);
    bound *= c;
    ++i;
  }
  return FixedPoint{x, bound, i};
}

std::string to_string(PowersCertificate::Status s) {
  switch (s) {
    case PowersCertificate::Status::Certified:
      return "certified";
    case PowersCertificate::Status::Falsified:
      return "falsified";
    case PowersCertificate::Status::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

PowersCertificate controlled_powers_check(const std::vector<PointMap>& fam, std::optional<Rational> c,
                                          std::size_t grid, std::size_t depth) {
  if (fam.empty()) throw Error(ErrorCode::EmptyFamily, "no maps to check");
  const auto& cs = *fam[0].space;
  Rational diam = cs.diameter(cs.whole());
  auto samples = sample_points(cs, grid);
  PowersCertificate cert;

  // orbits[m][x][i] = S_m^i(x)
  std::vector<std::vector<std::vector<Region>>> orbits(fam.size());
  for (std::size_t m = 0; m < fam.size(); ++m) {
    for (const auto& x : samples) {
      std::vector<Region> orbit{x};
      for (std::size_t i = 0; i < depth; ++i) orbit.push_back(apply_point(fam[m], orbit.back()));
      orbits[m].push_back(std::move(orbit));
    }
  }

  if (c) {
    bool lipschitz = true;
    try {
      for (const auto& s : fam) check_lipschitz(s, *c, samples);
      if (*c >= 1) lipschitz = false;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::LipschitzRefuted) throw;
      cert.note = e.what();
      lipschitz = false;
    }
    if (lipschitz) {
      for (std::size_t i = 0; i <= depth; ++i) cert.schedule.push_back(pow(*c, i) * diam);
      Rational tol = cert.schedule.back() / 16;
      if (tol == 0) tol = pow2_neg(64);
      for (std::size_t m = 0; m < fam.size(); ++m) {
        auto fp = contraction_fixed_point(fam[m], *c, samples[0], tol);
        for (std::size_t x = 0; x < samples.size(); ++x) {
          for (std::size_t i = 0; i <= depth; ++i) {
            if (point_distance(cs, orbits[m][x][i], fp.value) > cert.schedule[i] + fp.error_bound) {
              throw Error(ErrorCode::InconsistentOracle, fam[m].name + " breaks its contraction schedule at i=" +
                                                             std::to_string(i));
            }
          }
        }
      }
      cert.status = PowersCertificate::Status::Certified;
      cert.note = "contraction with constant " + to_string(*c);
      return cert;
    }
  }

  if (fam.size() == 1) {
    // one orbit per sample: eps_i = max over x and j >= i of d(S^j x, S^I x)
    cert.schedule.assign(depth + 1, Rational(0));
    for (const auto& orbit : orbits[0]) {
      Rational run = 0;
      for (std::size_t i = depth + 1; i-- > 0;) {
        run = rmax(run, point_distance(cs, orbit[i], orbit[depth]));
        cert.schedule[i] = rmax(cert.schedule[i], run);
      }
    }
    cert.status = PowersCertificate::Status::Certified;
    cert.note = "single map";
    return cert;
  }

  for (std::size_t a = 0; a < fam.size(); ++a) {
    for (std::size_t b = a + 1; b < fam.size(); ++b) {
      Rational close = 0;
      for (std::size_t x = 0; x < samples.size(); ++x) close = rmax(close, point_distance(cs, orbits[a][x][1], orbits[b][x][1]));
      std::optional<PowersFalsification> best;
      for (std::size_t x = 0; x < samples.size(); ++x) {
        for (std::size_t i = 1; i <= depth; ++i) {
          Rational d = point_distance(cs, orbits[a][x][i], orbits[b][x][i]);
          if (!best || d > best->power_distance) best = PowersFalsification{fam[a].name, fam[b].name, i, samples[x], close, d};
        }
      }
      if (best && best->power_distance >= diam / 2 && best->power_distance >= 4 * close) {
        cert.status = PowersCertificate::Status::Falsified;
        cert.witness = best;
        cert.note = "powers drift apart";
        return cert;
      }
    }
  }
  cert.status = PowersCertificate::Status::Inconclusive;
  if (cert.note.empty()) cert.note = "no drifting pair within depth " + std::to_string(depth);
  return cert;
}

// ---------------------------------------------------------------- compact model E

std::vector<Tabulated> ContractiveModel::elements() const {
  std::vector<Tabulated> out;
  for (const auto& layer : orbit) out.insert(out.end(), layer.begin(), layer.end());
  out.push_back(alpha);
  return out;
}

Tabulated ContractiveModel::apply_u(const Tabulated& e) const {
  Tabulated out;
  for (std::size_t s = 0; s < family.size(); ++s) out.push_back(apply_point(family[s], e.at(s)));
  return out;
}

ContractiveModel contractive_common_extension(CoverSystemPtr cs, std::vector<PointMap> fam, const Rational& c,
                                              std::size_t depth, std::vector<Region> net, const Rational& net_eps) {
  if (fam.empty()) throw Error(ErrorCode::EmptyFamily, "no maps");
  if (c < 0 || c >= 1) throw Error(ErrorCode::LipschitzRefuted, "constant " + to_string(c) + " is not below 1");
  auto samples = sample_points(*cs, 16);
  samples.insert(samples.end(), net.begin(), net.end());
  for (const auto& s : fam) check_lipschitz(s, c, samples);
  auto cover = eps_net_check(*cs, net, net_eps);
  if (net.empty() || !cover.ok) {
    throw Error(ErrorCode::NetTooCoarse, "net does not cover " + cs->name() + " at scale " + to_string(net_eps) +
                                             (cover.witness.empty() ? "" : ": " + cover.witness));
  }

  ContractiveModel model;
  model.space = cs;
  model.family = fam;
  model.c = c;
  model.depth = depth;
  model.net = net;
  model.net_eps = net_eps;
  Rational diam = cs->diameter(cs->whole());
  model.defect_bound = pow(c, depth) * diam;

  std::vector<Tabulated> layer;
  for (const auto& a : net) layer.push_back(Tabulated(fam.size(), a));
  model.orbit.push_back(layer);
  for (std::size_t i = 0; i < depth; ++i) {
    std::vector<Tabulated> next;
    for (const auto& e : model.orbit.back()) next.push_back(model.apply_u(e));
    model.orbit.push_back(std::move(next));
  }

  // alpha within c^I diam (1-c) / 2, so the frontier defect stays under c^I diam
  model.fixed_point_tol = model.defect_bound * (1 - c) / 2;
  if (model.fixed_point_tol == 0) model.fixed_point_tol = pow2_neg(64);
  for (const auto& s : fam) model.alpha.push_back(contraction_fixed_point(s, c, net[0], model.fixed_point_tol).value);

  model.defect = 0;
  for (const auto& e : model.orbit.back()) model.defect = rmax(model.defect, tab_distance(*cs, model.apply_u(e), model.alpha));

  for (std::size_t i = 0; i < depth; ++i) {
    for (std::size_t a = 0; a < net.size(); ++a) {
      for (std::size_t s = 0; s < fam.size(); ++s) {
        ++model.diagrams.checked;
        Region lhs = model.orbit[i + 1][a][s];
        Region rhs = apply_point(fam[s], model.orbit[i][a][s]);
        if (!cs->same_set(lhs, rhs)) {
          model.diagrams.fail("pi_" + fam[s].name + " U(e_" + std::to_string(i) + "," + std::to_string(a) + ") = " +
                              covers::to_string(lhs) + " but S pi = " + covers::to_string(rhs));
        }
      }
    }
  }
  for (std::size_t s = 0; s < fam.size(); ++s) {
    std::vector<Region> values;
    for (const auto& e : model.orbit[0]) values.push_back(e[s]);
    auto r = eps_net_check(*cs, values, net_eps);
    if (!r.ok) r.witness = fam[s].name + ": " + r.witness;
    model.surjectivity.merge(r);
  }
  return model;
}

CheckReport invariant_witness_check(const covers::CoverSystem& cs, const std::vector<PointMap>& fam,
                                    const std::vector<Tabulated>& e, const Rational& tol, const Rational& eps) {
  CheckReport report;
  if (e.empty()) {
    report.fail("E is empty, so no evaluation map is onto");
    return report;
  }
  for (const auto& z : e) {
    ++report.checked;
    Tabulated uz;
    for (std::size_t s = 0; s < fam.size(); ++s) uz.push_back(apply_point(fam[s], z.at(s)));
    bool near = false;
    for (const auto& w : e) {
      if (tab_distance(cs, uz, w) <= tol) {
        near = true;
        break;
      }
    }
    if (!near) {
      report.fail("U" + tab_string(z) + " = " + tab_string(uz) + " is farther than " + to_string(tol) + " from E");
      return report;
    }
  }
  for (std::size_t s = 0; s < fam.size(); ++s) {
    std::vector<Region> values;
    for (const auto& z : e) values.push_back(z.at(s));
    auto r = eps_net_check(cs, values, eps);
    if (!r.ok) {
      report.fail("evaluation at " + fam[s].name + " is not an eps-net: " + r.witness);
      return report;
    }
  }
  return report;
}

}  // namespace univdyn::common
