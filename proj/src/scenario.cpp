#include "univdyn/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "univdyn/covers.hpp"
#include "univdyn/error.hpp"
#include "univdyn/hyper.hpp"
#include "univdyn/injection_graph.hpp"
#include "univdyn/invariant.hpp"
#include "univdyn/universal_operator.hpp"

namespace univdyn::scenario {

using symbolic::Word;

namespace {

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"embed-injection", {"edges", "declare", "depth"}},
      {"factor-operator", {"matrix", "rho", "norm", "base", "orbit", "depth", "samples"}},
      {"lift-map", {"map", "depth", "samples"}},
      {"common-extension", {"piece", "depth", "samples"}},
      {"contractive-extension", {"map", "c", "depth", "net", "eps", "grid"}},
      {"generalized-extension", {"piece", "depth", "samples"}},
      {"invariant-tower", {"map", "z", "frontier", "depth"}},
      {"verify-covers", {"space", "depth"}},
  };
  return keys;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

std::uint64_t parse_u64(const std::string& text, const std::string& key) {
  if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    parse_error(key + ": not a non-negative integer: '" + text + "'");
  }
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    parse_error(key + ": out of range: '" + text + "'");
  }
}

// split on `sep` outside brackets
std::vector<std::string> split_top(std::string_view text, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : text) {
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::size_t size_value(const Section& s, const std::string& key, std::size_t fallback,
                       const std::optional<std::size_t>& override) {
  if (override) return *override;
  auto v = s.get(key);
  return v ? static_cast<std::size_t>(parse_u64(*v, key)) : fallback;
}

Rational rational_value(const Section& s, const std::string& key) {
  auto v = s.get(key);
  if (!v) parse_error("[" + s.construction + "] needs '" + key + "'");
  return parse_rational(*v);
}

std::string required(const Section& s, const std::string& key) {
  auto v = s.get(key);
  if (!v) parse_error("[" + s.construction + "] needs '" + key + "'");
  return *v;
}

std::string pass_fail(bool ok) { return ok ? "PASS" : "FAIL"; }

// Lines of a section certificate plus the first failure.
struct Report {
  std::ostringstream body;
  bool ok = true;
  std::string witness;

  void info(const std::string& line) { body << line << "\n"; }
  void check(const std::string& name, bool passed, std::size_t checked, const std::string& w) {
    body << "check " << name << ": " << pass_fail(passed) << " (" << checked << " checked)\n";
    if (!passed) {
      body << "  witness: " << w << "\n";
      if (ok) witness = name + ": " + w;
      ok = false;
    }
  }
  void check(const std::string& name, const CheckReport& r) { check(name, r.ok, r.checked, r.witness); }
};

struct Context {
  const Overrides& ov;
  std::uint64_t seed;
  Format format;
};

void run_embed(const Section& s, const Context& cx, Report& rep) {
  std::string text;
  for (const auto& e : s.all("edges")) {
    for (auto part : split_top(e, ';')) {
      if (!part.empty()) text += part + "\n";
    }
  }
  for (const auto& d : s.all("declare")) text += "# component " + d + "\n";
  auto sigma = injection::parse_injection_text(text);
  std::size_t depth = size_value(s, "depth", 64, cx.ov.depth);
  auto cert = injection::embed_injection(sigma, depth);
  auto v = cert.verify(sigma);
  rep.info("edges: " + std::to_string(sigma.size()));
  rep.info("components: " + std::to_string(cert.components().size()));
  std::size_t resolved = 0;
  for (const auto& c : cert.components()) resolved += c.resolved;
  rep.info("resolved: " + std::to_string(resolved));
  if (cx.format == Format::Tree) {
    for (const auto& [i, a] : cert.pi_a()) rep.info("  " + std::to_string(i) + " -> " + std::to_string(a));
  }
  rep.check("conjugacy", v.ok, v.edges_checked, v.witness);
}

void run_factor(const Section& s, const Context& cx, Report& rep) {
  Matrix t = parse_matrix(required(s, "matrix"));
  linear::BanachModel model{t.size(), linear::parse_norm_kind(s.get("norm").value_or("l1"))};
  Rational rho;
  if (s.get("rho")) {
    rho = rational_value(s, "rho");
  } else {
    auto n = model.operator_norm(t);
    if (!n) parse_error("[factor-operator] needs 'rho' for this norm");
    rho = *n;
  }
  std::size_t base = size_value(s, "base", 20, std::nullopt);
  std::size_t orbit = size_value(s, "orbit", 4, std::nullopt);
  std::size_t budget = size_value(s, "depth", 10000, cx.ov.depth);
  std::size_t samples = size_value(s, "samples", 100, cx.ov.samples);
  auto src = std::make_shared<const linear::DynamicDenseEnumeration>(
      linear::build_dynamic_dense_enumeration(t, model, rho, base, orbit, budget));
  auto pi = linear::synthesize_factor_map(src, 10);
  rep.info("rho: " + to_string(rho));
  rep.info("D points: " + std::to_string(src->points.size()));
  rep.info("index budget: " + std::to_string(src->index_budget));
  rep.info("frontier indices: " + std::to_string(src->frontier_indices.size()));
  rep.check("commutation", pi.check_commutation());
  rep.check("D attained", pi.check_d_surjectivity());
  rep.check("zero off A", pi.check_outside_a(100));
  // supports drawn from the covered part of A
  std::vector<injection::Index> covered;
  for (const auto& [i, a] : pi.embedding().pi_a()) covered.push_back(a);
  std::mt19937_64 rng(cx.seed);
  std::vector<linear::SparseL1Vector> xs;
  for (std::size_t n = 0; n < samples && !covered.empty(); ++n) {
    linear::SparseL1Vector x;
    std::size_t terms = 1 + rng() % 4;
    for (std::size_t j = 0; j < terms; ++j) {
      long p = static_cast<long>(rng() % 17) - 8;
      long q = 1 + static_cast<long>(rng() % 8);
      x.add(covered[rng() % covered.size()], Rational(p) / q);
    }
    xs.push_back(x);
  }
  rep.check("norm bound", pi.check_norm_bound(xs));
}

void run_lift(const Section& s, const Context& cx, Report& rep) {
  auto t = parse_point_map(required(s, "map"));
  std::size_t depth = size_value(s, "depth", 8, cx.ov.depth);
  std::size_t samples = size_value(s, "samples", 100, cx.ov.samples);
  auto lift = lift::lift_self_map(t.space, t, depth);
  auto cert = lift::certify_self_lift(lift, depth, samples, cx.seed);
  rep.info("map: " + t.name + " on " + t.space->name());
  for (const auto& lv : cert.levels) {
    rep.check("level " + std::to_string(lv.level), lv.ok, lv.checked, cert.witness);
  }
  if (!cert.ok && rep.ok) rep.check("lift", false, cert.samples, cert.witness);
}

std::vector<common::MapFamily> pieces_of(const Section& s) {
  std::vector<common::MapFamily> out;
  for (const auto& p : s.all("piece")) out.push_back(parse_family(p));
  return out;
}

void run_common(const Section& s, const Context& cx, Report& rep) {
  auto pieces = pieces_of(s);
  std::size_t depth = size_value(s, "depth", 5, cx.ov.depth);
  std::size_t samples = size_value(s, "samples", 5, cx.ov.samples);
  auto ce = common::common_extension_baire(pieces, depth, samples, cx.seed);
  for (std::size_t i = 0; i < ce.pieces.size(); ++i) {
    for (const auto& m : ce.pieces[i].lift.members) {
      rep.check("lift " + m.name, m.certificate.ok, m.certificate.samples, m.certificate.witness);
    }
  }
  auto cert = common::certify_common_extension(ce, samples, cx.seed + 1);
  for (const auto& d : cert.diagrams) rep.check("diagram " + d.name, d.ok, d.checked, d.witness);
  auto baire = symbolic::SymbolicSpace::baire();
  for (std::size_t k = 1; k <= depth; ++k) {
    CheckReport onto;
    for (std::size_t i = 0; i < ce.pieces.size(); ++i) {
      onto.merge(symbolic::check_projection_surjective(baire, i, k));
      for (std::size_t j = 0; j < ce.pieces[i].family.size(); ++j) {
        onto.merge(symbolic::check_projection_surjective(baire, j, k));
      }
    }
    rep.check("projections onto at level " + std::to_string(k), onto);
  }
}

void run_contractive(const Section& s, const Context& cx, Report& rep) {
  std::vector<lift::PointMap> fam;
  for (const auto& m : s.all("map")) fam.push_back(parse_point_map(m));
  if (fam.empty()) parse_error("[contractive-extension] needs at least one 'map'");
  std::size_t depth = size_value(s, "depth", 10, cx.ov.depth);
  std::size_t grid = size_value(s, "grid", 16, std::nullopt);
  std::optional<Rational> c;
  if (s.get("c")) c = rational_value(s, "c");
  auto powers = common::controlled_powers_check(fam, c, grid, depth);
  rep.info("controlled powers: " + common::to_string(powers.status));
  if (!powers.note.empty()) rep.info("note: " + powers.note);
  for (std::size_t i = 0; i < powers.schedule.size(); ++i) {
    rep.info("  eps_" + std::to_string(i) + " = " + to_string(powers.schedule[i]));
  }
  std::string pw;
  if (powers.witness) {
    const auto& w = *powers.witness;
    pw = "S = " + w.s + ", S' = " + w.s_prime + ", i = " + std::to_string(w.i) + ", x = " + covers::to_string(w.x) +
         ", d(S, S') = " + to_string(w.map_distance) + ", d(S^i x, S'^i x) = " + to_string(w.power_distance);
  }
  rep.check("controlled powers", powers.status == common::PowersCertificate::Status::Certified, powers.schedule.size(),
            pw.empty() ? powers.note : pw);
  if (!c) return;
  Rational step = s.get("net") ? rational_value(s, "net") : Rational(1, 16);
  Rational eps = s.get("eps") ? rational_value(s, "eps") : step;
  auto cs = fam[0].space;
  auto model = common::contractive_common_extension(cs, fam, *c, depth, common::uniform_net(*cs, step), eps);
  rep.info("defect: " + to_string(model.defect) + " (bound " + to_string(model.defect_bound) + ")");
  rep.check("frontier defect", model.defect <= model.defect_bound, 1,
            to_string(model.defect) + " > " + to_string(model.defect_bound));
  rep.check("evaluation onto", model.surjectivity);
  rep.check("diagrams on E", model.diagrams);
  rep.check("E invariant", common::invariant_witness_check(*cs, fam, model.elements(), model.defect_bound, eps));
  auto empty = common::invariant_witness_check(*cs, fam, {}, model.defect_bound, eps);
  rep.check("empty set rejected", !empty.ok, 1, "the empty set passed");
}

void run_generalized(const Section& s, const Context& cx, Report& rep) {
  auto pieces = pieces_of(s);
  if (pieces.empty()) parse_error("[generalized-extension] needs at least one 'piece'");
  std::size_t depth = size_value(s, "depth", 5, cx.ov.depth);
  std::size_t samples = size_value(s, "samples", 20, cx.ov.samples);
  auto ge = hyper::common_generalized_extension(pieces, depth, samples, cx.seed);
  auto cert = hyper::certify_generalized_extension(ge, samples, cx.seed + 1);
  for (const auto& d : cert.diagrams) rep.check("diagram " + d.name, d.ok, d.checked, d.witness);
  rep.info("note: " + cert.note);
}

void run_tower(const Section& s, const Context& cx, Report& rep) {
  auto t = parse_point_map(required(s, "map"));
  auto z = parse_rational_list(required(s, "z"));
  auto frontier = parse_rational_list(s.get("frontier").value_or(""));
  std::size_t depth = size_value(s, "depth", 6, cx.ov.depth);
  auto tw = invariant::invariant_refinement_tower(t, z, frontier, depth);
  auto cert = invariant::certify_tower(t, tw);
  rep.check("disjoint", cert.disjoint);
  rep.check("diameter", cert.diameter);
  rep.check("covering", cert.covering);
  rep.check("image containment", cert.containment);
  rep.check("nesting", cert.nesting);
  rep.info(cx.format == Format::Tree ? invariant::render_tree(tw) : invariant::to_string(tw));
}

void run_covers(const Section& s, const Context& cx, Report& rep) {
  auto spaces = s.all("space");
  if (spaces.empty()) parse_error("[verify-covers] needs 'space'");
  std::size_t depth = size_value(s, "depth", 6, cx.ov.depth);
  for (const auto& name : spaces) {
    auto cs = covers::make_cover_system(name);
    auto cert = covers::verify_cover_system(*cs, depth);
    std::size_t cells = 0;
    for (const auto& lv : cert.levels) {
      cells += lv.cells;
      rep.info(cs->name() + " level " + std::to_string(lv.level) + ": " + std::to_string(lv.cells) +
               " cells, max diameter " + to_string(lv.max_diameter) + ", epsilon " + to_string(lv.epsilon));
    }
    rep.check(cs->name(), cert.ok, cells, cert.failed_condition + ": " + cert.witness);
  }
}

}  // namespace

std::optional<std::string> Section::get(const std::string& key) const {
  for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
    if (it->first == key) return it->second;
  }
  return std::nullopt;
}

std::vector<std::string> Section::all(const std::string& key) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries) {
    if (k == key) out.push_back(v);
  }
  return out;
}

std::vector<std::string> constructions() {
  std::vector<std::string> out;
  for (const auto& [name, keys] : allowed_keys()) out.push_back(name);
  return out;
}

Scenario parse_scenario(std::string_view text, std::string name) {
  Scenario sc;
  sc.name = std::move(name);
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string at = "line " + std::to_string(lineno) + ": ";
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') parse_error(at + "unterminated section header");
      std::string c = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!allowed_keys().count(c)) parse_error(at + "unknown construction '" + c + "'");
      sc.sections.push_back(Section{c, lineno, {}});
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) parse_error(at + "expected 'key = value'");
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) parse_error(at + "empty key");
    if (sc.sections.empty()) {
      if (key != "seed") parse_error(at + "'" + key + "' outside a section");
      sc.seed = parse_u64(value, key);
      continue;
    }
    auto& sec = sc.sections.back();
    if (!allowed_keys().at(sec.construction).count(key)) {
      parse_error(at + "unknown key '" + key + "' for [" + sec.construction + "]");
    }
    sec.entries.emplace_back(key, value);
  }
  if (sc.sections.empty()) parse_error("no construction in scenario '" + sc.name + "'");
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string name = path.substr(path.find_last_of('/') == std::string::npos ? 0 : path.find_last_of('/') + 1);
  name = name.substr(0, name.rfind('.'));
  return parse_scenario(buf.str(), name);
}

lift::PointMap parse_point_map(std::string_view text) {
  std::string t = trim(text);
  auto colon = t.find(':');
  std::string kind = t.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : t.substr(colon + 1);
  if (kind == "square") return lift::square_map();
  if (kind == "tent") return lift::tent_map();
  if (kind == "identity") return lift::identity_map(covers::make_cover_system(rest.empty() ? "interval" : rest));
  if (kind == "rotation") return lift::rotation_map(parse_rational(rest));
  if (kind == "constant") return lift::constant_map(covers::interval_system(), covers::point_region(parse_rational(rest)));
  if (kind == "affine") {
    auto parts = split_top(rest, ':');
    if (parts.size() != 2) parse_error("affine needs 'affine:a:b'");
    return lift::affine_map(parse_rational(parts[0]), parse_rational(parts[1]));
  }
  if (kind == "finite") {
    auto cut = rest.rfind(':');
    if (cut == std::string::npos) parse_error("finite map needs 'finite:<matrix>:<table>'");
    auto space = covers::make_cover_system("finite:" + rest.substr(0, cut));
    std::vector<std::size_t> table;
    for (const auto& x : parse_rational_list(rest.substr(cut + 1))) {
      if (x < 0 || x.get_den() != 1) parse_error("finite map table needs point indices");
      table.push_back(x.get_num().get_ui());
    }
    return lift::finite_map(space, table);
  }
  parse_error("unknown map '" + t + "'");
}

common::MapFamily parse_family(std::string_view text) {
  std::string t = trim(text);
  const std::string rf = "rotation-family:";
  if (t.rfind(rf, 0) == 0) {
    std::vector<Word> params;
    std::istringstream in(t.substr(rf.size()));
    std::string w;
    while (in >> w) {
      Word p;
      for (char c : w) {
        if (c != '0' && c != '1') parse_error("parameter '" + w + "' is not a binary word");
        p.push_back(static_cast<symbolic::Symbol>(c - '0'));
      }
      params.push_back(p);
    }
    if (params.empty()) parse_error("rotation-family needs parameters");
    return common::MapFamily::sampled(lift::rotation_family(), params);
  }
  std::vector<lift::PointMap> members;
  for (const auto& m : split_top(t, ',')) members.push_back(parse_point_map(m));
  return common::MapFamily::finite(t, members);
}

std::vector<Rational> parse_rational_list(std::string_view text) {
  std::string t(text);
  for (char& c : t) {
    if (c == ',' || c == '[' || c == ']') c = ' ';
  }
  std::istringstream in(t);
  std::vector<Rational> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_rational(tok));
  return out;
}

RunResult run_scenario(const Scenario& sc, const Overrides& ov, Format format) {
  RunResult res;
  res.seed = ov.seed ? *ov.seed : sc.seed.value_or(1);
  std::ostringstream cert;
  cert << "univdyn certificate\n";
  cert << "scenario: " << sc.name << "\n";
  cert << "seed: " << res.seed << "\n";
  if (ov.depth) cert << "depth override: " << *ov.depth << "\n";
  if (ov.samples) cert << "samples override: " << *ov.samples << "\n";
  for (std::size_t i = 0; i < sc.sections.size(); ++i) {
    const auto& s = sc.sections[i];
    Context cx{ov, res.seed + i, format};
    Report rep;
    try {
      if (s.construction == "embed-injection") run_embed(s, cx, rep);
      else if (s.construction == "factor-operator") run_factor(s, cx, rep);
      else if (s.construction == "lift-map") run_lift(s, cx, rep);
      else if (s.construction == "common-extension") run_common(s, cx, rep);
      else if (s.construction == "contractive-extension") run_contractive(s, cx, rep);
      else if (s.construction == "generalized-extension") run_generalized(s, cx, rep);
      else if (s.construction == "invariant-tower") run_tower(s, cx, rep);
      else run_covers(s, cx, rep);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ParseError) {
        throw Error(ErrorCode::ParseError, "[" + s.construction + "] at line " + std::to_string(s.line) + ": " + e.what());
      }
      rep.check("construction", false, 0, e.what());
    }
    SectionResult sr{s.construction, rep.ok, rep.witness, rep.body.str()};
    cert << "\n[" << s.construction << "]\n" << sr.body << "status: " << pass_fail(sr.ok) << "\n";
    res.ok = res.ok && sr.ok;
    res.sections.push_back(std::move(sr));
  }
  std::ostringstream sum;
  sum << sc.name << ": " << pass_fail(res.ok) << " (seed " << res.seed << ")\n";
  for (const auto& sr : res.sections) {
    sum << "  " << sr.construction << ": " << pass_fail(sr.ok);
    if (!sr.ok) sum << "  " << sr.witness;
    sum << "\n";
  }
  cert << "\nresult: " << pass_fail(res.ok) << "\n";
  res.certificate = cert.str();
  res.summary = sum.str();
  return res;
}

}  // namespace univdyn::scenario
