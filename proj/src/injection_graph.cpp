#include "univdyn/injection_graph.hpp"

#include <algorithm>
#include <sstream>

#include "univdyn/error.hpp"
#include "univdyn/pairing.hpp"

namespace univdyn::injection {

ComponentType ComponentType::cycle(Index length) {
  if (length == 0) throw Error(ErrorCode::InvalidIndex, "cycle length must be >= 1");
  return ComponentType(Kind::Cycle, length);
}

ComponentType ComponentType::from_code(Index tau) {
  if (tau == 0) return line();
  if (tau == 1) return ray();
  return cycle(tau - 1);
}

Index ComponentType::code() const {
  switch (kind_) {
    case Kind::BiInfiniteLine: return 0;
    case Kind::ForwardRay: return 1;
    case Kind::Cycle: return length_ + 1;
  }
  return 0;
}

std::string ComponentType::describe() const {
  switch (kind_) {
    case Kind::BiInfiniteLine: return "line";
    case Kind::ForwardRay: return "ray";
    case Kind::Cycle: return "cycle " + std::to_string(length_);
  }
  return "?";
}

LayoutAddress decode(Index index) {
  auto [component, q] = cantor_unpair(index);
  auto [tau, j] = cantor_unpair(component);
  return {tau, j, q};
}

Index encode(const LayoutAddress& a) { return cantor_pair(cantor_pair(a.tau, a.copy), a.position_code); }

bool is_valid_index(Index index) {
  LayoutAddress a = decode(index);
  return a.tau < 2 || a.position_code < a.tau - 1;
}

Index index_at(const ComponentType& type, Index copy, std::int64_t position) {
  LayoutAddress a{type.code(), copy, 0};
  switch (type.kind()) {
    case ComponentType::Kind::BiInfiniteLine:
      a.position_code = zigzag(position);
      break;
    case ComponentType::Kind::ForwardRay:
      if (position < 0) throw Error(ErrorCode::InvalidIndex, "negative ray position");
      a.position_code = static_cast<Index>(position);
      break;
    case ComponentType::Kind::Cycle: {
      auto n = static_cast<std::int64_t>(type.cycle_length());
      a.position_code = static_cast<Index>(((position % n) + n) % n);
      break;
    }
  }
  return encode(a);
}

Index mu_successor(Index index) {
  LayoutAddress a = decode(index);
  if (a.tau == 0) {
    a.position_code = zigzag(unzigzag(a.position_code) + 1);
  } else if (a.tau == 1) {
    a.position_code += 1;
  } else {
    Index length = a.tau - 1;
    if (a.position_code >= length) {
      throw Error(ErrorCode::InvalidIndex, "index " + std::to_string(index) + " has cycle position " +
                                               std::to_string(a.position_code) + " >= length " +
                                               std::to_string(length));
    }
    a.position_code = (a.position_code + 1) % length;
  }
  return encode(a);
}

namespace {

struct Walk {
  std::vector<Index> path;  // in edge order; for cycles starts at an arbitrary member
  bool closed = false;
};

std::vector<Walk> walk_components(const std::map<Index, Index>& entries, const std::map<Index, Index>& inverse,
                                  const std::set<Index>& nodes) {
  std::vector<Walk> walks;
  std::set<Index> seen;
  for (Index start : nodes) {
    if (seen.count(start)) continue;
    // walk back to a head, or detect a cycle
    Index head = start;
    bool closed = false;
    for (;;) {
      auto it = inverse.find(head);
      if (it == inverse.end()) break;
      head = it->second;
      if (head == start) {
        closed = true;
        break;
      }
    }
    Walk w;
    w.closed = closed;
    Index cur = head;
    for (;;) {
      w.path.push_back(cur);
      seen.insert(cur);
      auto it = entries.find(cur);
      if (it == entries.end() || it->second == head) break;
      cur = it->second;
    }
    walks.push_back(std::move(w));
  }
  std::sort(walks.begin(), walks.end(), [](const Walk& a, const Walk& b) {
    return *std::min_element(a.path.begin(), a.path.end()) < *std::min_element(b.path.begin(), b.path.end());
  });
  return walks;
}

// Checks all declarations on one component against its edges; returns the
// index in walk.path of the first declared member, if any.
std::optional<std::size_t> check_oracle(const Walk& w, const std::map<Index, OracleEntry>& oracle,
                                        const std::map<Index, Index>& inverse) {
  std::optional<std::size_t> anchor;
  for (std::size_t p = 0; p < w.path.size(); ++p) {
    auto it = oracle.find(w.path[p]);
    if (it == oracle.end()) continue;
    const OracleEntry& e = it->second;
    if (!anchor) {
      anchor = p;
      continue;
    }
    const OracleEntry& a = oracle.at(w.path[*anchor]);
    if (!(a.type == e.type) || a.component != e.component) {
      throw Error(ErrorCode::InconsistentOracle,
                  "members " + std::to_string(w.path[*anchor]) + " and " + std::to_string(w.path[p]) +
                      " are declared in different components");
    }
    std::int64_t expected = a.offset + static_cast<std::int64_t>(p - *anchor);
    std::int64_t got = e.offset;
    if (e.type.kind() == ComponentType::Kind::Cycle) {
      auto n = static_cast<std::int64_t>(e.type.cycle_length());
      expected = ((expected % n) + n) % n;
      got = ((got % n) + n) % n;
    }
    if (expected != got) {
      throw Error(ErrorCode::InconsistentOracle, "offset of " + std::to_string(w.path[p]) + " disagrees with edges");
    }
  }
  if (!anchor) return anchor;
  const OracleEntry& a = oracle.at(w.path[*anchor]);
  switch (a.type.kind()) {
    case ComponentType::Kind::Cycle:
      if (w.path.size() > a.type.cycle_length() || (w.closed && w.path.size() != a.type.cycle_length())) {
        throw Error(ErrorCode::InconsistentOracle, "component of " + std::to_string(w.path[*anchor]) +
                                                       " does not fit a " + a.type.describe());
      }
      break;
    case ComponentType::Kind::ForwardRay: {
      if (w.closed) throw Error(ErrorCode::InconsistentOracle, "ray declared on a cycle");
      std::int64_t head_offset = a.offset - static_cast<std::int64_t>(*anchor);
      if (head_offset < 0) throw Error(ErrorCode::InconsistentOracle, "ray offsets below the root");
      if (head_offset == 0 && inverse.count(w.path.front())) {
        throw Error(ErrorCode::InconsistentOracle, "ray root has a preimage");
      }
      break;
    }
    case ComponentType::Kind::BiInfiniteLine:
      if (w.closed) throw Error(ErrorCode::InconsistentOracle, "line declared on a cycle");
      break;
  }
  return anchor;
}

}  // namespace

PartialInjection::PartialInjection(std::map<Index, Index> entries, std::map<Index, OracleEntry> oracle,
                                   std::set<Index> extra_nodes)
    : entries_(std::move(entries)), oracle_(std::move(oracle)), extra_nodes_(std::move(extra_nodes)) {
  for (const auto& [i, j] : entries_) {
    auto [it, inserted] = inverse_.emplace(j, i);
    if (!inserted) {
      throw Error(ErrorCode::NotInjective, std::to_string(it->second) + " and " + std::to_string(i) +
                                               " both map to " + std::to_string(j));
    }
  }
  if (!oracle_.empty()) {
    for (const Walk& w : walk_components(entries_, inverse_, nodes())) check_oracle(w, oracle_, inverse_);
  }
}

std::optional<Index> PartialInjection::apply(Index i) const {
  auto it = entries_.find(i);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::optional<Index> PartialInjection::preimage(Index i) const {
  auto it = inverse_.find(i);
  if (it == inverse_.end()) return std::nullopt;
  return it->second;
}

std::set<Index> PartialInjection::nodes() const {
  std::set<Index> n = extra_nodes_;
  for (const auto& [i, j] : entries_) {
    n.insert(i);
    n.insert(j);
  }
  for (const auto& [i, e] : oracle_) n.insert(i);
  return n;
}

PartialInjection parse_injection_text(std::string_view text) {
  std::map<Index, Index> entries;
  std::map<Index, OracleEntry> oracle;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    std::string body = line.substr(first);
    if (body[0] == '#') {
      std::istringstream ds(body.substr(1));
      std::string word;
      if (!(ds >> word) || word != "component") continue;
      std::string idx;
      if (!(ds >> idx) || idx.back() != ':') fail("expected '# component <i>: <type>'");
      idx.pop_back();
      Index i = 0;
      try {
        i = std::stoull(idx);
      } catch (...) {
        fail("bad index '" + idx + "'");
      }
      std::string kind;
      ds >> kind;
      OracleEntry e{i, ComponentType::line(), 0};
      if (kind == "ray") {
        e.type = ComponentType::ray();
      } else if (kind == "line") {
        e.type = ComponentType::line();
      } else if (kind == "cycle") {
        Index n = 0;
        if (!(ds >> n) || n == 0) fail("cycle needs a positive length");
        e.type = ComponentType::cycle(n);
      } else {
        fail("unknown component type '" + kind + "'");
      }
      oracle[i] = e;
      continue;
    }
    auto arrow = body.find("->");
    if (arrow == std::string::npos) fail("expected 'i -> j'");
    try {
      Index i = std::stoull(body.substr(0, arrow));
      Index j = std::stoull(body.substr(arrow + 2));
      if (!entries.emplace(i, j).second) fail("duplicate source " + std::to_string(i));
    } catch (const Error&) {
      throw;
    } catch (...) {
      fail("bad edge '" + body + "'");
    }
  }
  return PartialInjection(std::move(entries), std::move(oracle));
}

std::string to_text(const PartialInjection& sigma) {
  std::ostringstream out;
  for (const auto& [i, e] : sigma.oracle()) {
    if (e.offset == 0 && e.component == i) out << "# component " << i << ": " << e.type.describe() << "\n";
  }
  for (const auto& [i, j] : sigma.entries()) out << i << " -> " << j << "\n";
  return out.str();
}

std::vector<ComponentReport> classify_components(const PartialInjection& sigma, std::size_t depth) {
  std::map<Index, Index> inverse;
  for (const auto& [i, j] : sigma.entries()) inverse.emplace(j, i);
  std::vector<ComponentReport> reports;
  for (const Walk& w : walk_components(sigma.entries(), inverse, sigma.nodes())) {
    ComponentReport r;
    r.members = w.path;
    std::sort(r.members.begin(), r.members.end());
    r.closed_cycle = w.closed;
    auto anchor = check_oracle(w, sigma.oracle(), inverse);
    if (anchor) {
      const OracleEntry& a = sigma.oracle().at(w.path[*anchor]);
      r.type = a.type;
      for (std::size_t p = 0; p < w.path.size(); ++p) {
        std::int64_t pos = a.offset + static_cast<std::int64_t>(p) - static_cast<std::int64_t>(*anchor);
        if (a.type.kind() == ComponentType::Kind::Cycle) {
          auto n = static_cast<std::int64_t>(a.type.cycle_length());
          pos = ((pos % n) + n) % n;
        }
        r.positions[w.path[p]] = pos;
      }
    } else {
      std::size_t smallest = static_cast<std::size_t>(
          std::min_element(w.path.begin(), w.path.end()) - w.path.begin());
      auto n = static_cast<std::int64_t>(w.path.size());
      bool cycle = w.closed && w.path.size() <= depth;
      if (cycle) r.type = ComponentType::cycle(w.path.size());
      for (std::size_t p = 0; p < w.path.size(); ++p) {
        std::int64_t pos = static_cast<std::int64_t>(p) - static_cast<std::int64_t>(smallest);
        if (cycle) pos = ((pos % n) + n) % n;
        r.positions[w.path[p]] = pos;
      }
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

EmbeddingCertificate::EmbeddingCertificate(std::map<Index, Index> pi_a, std::vector<EmbeddedComponent> components)
    : pi_a_(std::move(pi_a)), components_(std::move(components)) {
  for (const auto& [i, a] : pi_a_) inverse_.emplace(a, i);
  for (const auto& c : components_) claimed_.insert(c.claim);
}

std::optional<Index> EmbeddingCertificate::image(Index i) const {
  auto it = pi_a_.find(i);
  if (it == pi_a_.end()) return std::nullopt;
  return it->second;
}

std::optional<Index> EmbeddingCertificate::preimage(Index a) const {
  auto it = inverse_.find(a);
  if (it == inverse_.end()) return std::nullopt;
  return it->second;
}

bool EmbeddingCertificate::in_claimed(Index a) const {
  if (!is_valid_index(a)) return false;
  LayoutAddress addr = decode(a);
  return claimed_.count(ClaimedComponent{addr.tau, addr.copy}) > 0;
}

Verification EmbeddingCertificate::verify(const PartialInjection& sigma) const {
  Verification v;
  auto fail = [&v](std::string w) {
    if (v.ok) v.witness = std::move(w);
    v.ok = false;
  };
  if (inverse_.size() != pi_a_.size()) fail("pi_A is not injective");
  if (claimed_.size() != components_.size()) fail("a mu-component is claimed twice");
  for (const auto& [i, a] : pi_a_) {
    if (!in_claimed(a)) fail("pi_A(" + std::to_string(i) + ") = " + std::to_string(a) + " outside claimed components");
  }
  for (const auto& [i, j] : sigma.entries()) {
    auto ai = image(i);
    auto aj = image(j);
    if (!ai || !aj) continue;
    ++v.edges_checked;
    Index next = mu_successor(*ai);
    auto back = preimage(next);
    if (!back || *back != j) {
      fail("edge " + std::to_string(i) + " -> " + std::to_string(j) + ": mu(" + std::to_string(*ai) +
           ") = " + std::to_string(next) + " does not pull back to " + std::to_string(j));
    }
  }
  for (const auto& c : components_) {
    if (c.resolved && (!c.sigma_type || c.sigma_type->code() != c.claim.tau)) {
      fail("resolved component at " + std::to_string(c.members.front()) + " claims a different shape");
    }
  }
  return v;
}

EmbeddingCertificate embed_injection(const PartialInjection& sigma, std::size_t depth) {
  // A cycle that is fully present in the data never fits on a line, so the
  // cycle-closing depth is raised to cover every explored member.
  std::size_t effective_depth = std::max(depth, sigma.nodes().size());
  std::map<Index, Index> next_copy;
  std::map<Index, Index> pi_a;
  std::vector<EmbeddedComponent> embedded;
  for (const ComponentReport& r : classify_components(sigma, effective_depth)) {
    ComponentType shape = r.type.value_or(ComponentType::line());
    Index copy = next_copy[shape.code()]++;
    for (const auto& [i, pos] : r.positions) pi_a[i] = index_at(shape, copy, pos);
    embedded.push_back(EmbeddedComponent{r.members, r.type, ClaimedComponent{shape.code(), copy}, r.type.has_value()});
  }
  return EmbeddingCertificate(std::move(pi_a), std::move(embedded));
}

}  // namespace univdyn::injection
