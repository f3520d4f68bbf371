#pragma once

// The universal injection mu on N and the embedding of arbitrary injections
// into it: sigma = pi_A^{-1} mu pi_A on every covered edge.
//
// Layout: index = pair(pair(tau, j), q) with
//   tau = 0      bi-infinite line, q = zigzag(position)
//   tau = 1      forward ray, q = position
//   tau >= 2     cycle of length tau - 1, q in [0, tau - 1)
// j numbers the copies of each component shape.

#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace univdyn::injection {

using Index = std::uint64_t;

inline constexpr std::string_view kLayoutVersion = "cantor-pairing-v1";

class ComponentType {
 public:
  enum class Kind { Cycle, ForwardRay, BiInfiniteLine };

  static ComponentType cycle(Index length);
  static ComponentType ray() { return ComponentType(Kind::ForwardRay, 0); }
  static ComponentType line() { return ComponentType(Kind::BiInfiniteLine, 0); }
  static ComponentType from_code(Index tau);

  Kind kind() const { return kind_; }
  Index cycle_length() const { return length_; }
  Index code() const;
  std::string describe() const;

  friend bool operator==(const ComponentType&, const ComponentType&) = default;

 private:
  ComponentType(Kind kind, Index length) : kind_(kind), length_(length) {}
  Kind kind_;
  Index length_;
};

struct LayoutAddress {
  Index tau = 0;
  Index copy = 0;
  Index position_code = 0;
  friend bool operator==(const LayoutAddress&, const LayoutAddress&) = default;
};

// Pure decode; does not check the cycle position range.
LayoutAddress decode(Index index);
Index encode(const LayoutAddress& address);
bool is_valid_index(Index index);

// Index of the element at signed position `position` on copy `copy` of a
// component of the given type (cycles wrap, rays need position >= 0).
Index index_at(const ComponentType& type, Index copy, std::int64_t position);

// mu itself. Throws Error(InvalidIndex) for cycle positions out of range.
Index mu_successor(Index index);

struct OracleEntry {
  Index component = 0;
  ComponentType type = ComponentType::line();
  std::int64_t offset = 0;
};

// Finite injective map i -> sigma(i) with optional component declarations.
class PartialInjection {
 public:
  PartialInjection() = default;

  // Throws NotInjective, or InconsistentOracle when declared offsets
  // disagree with the edges.
  PartialInjection(std::map<Index, Index> entries, std::map<Index, OracleEntry> oracle = {},
                   std::set<Index> extra_nodes = {});
  PartialInjection(std::initializer_list<std::pair<const Index, Index>> edges)
      : PartialInjection(std::map<Index, Index>(edges)) {}

  const std::map<Index, Index>& entries() const { return entries_; }
  const std::map<Index, OracleEntry>& oracle() const { return oracle_; }
  const std::set<Index>& extra_nodes() const { return extra_nodes_; }

  std::optional<Index> apply(Index i) const;
  std::optional<Index> preimage(Index i) const;
  // domain, range and isolated extra nodes
  std::set<Index> nodes() const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<Index, Index> entries_;
  std::map<Index, Index> inverse_;
  std::map<Index, OracleEntry> oracle_;
  std::set<Index> extra_nodes_;
};

// Line format: "i -> j" per edge, "# component i: cycle n|ray|line" declares
// that i sits at offset 0 of a component of that type, other '#' lines and
// blank lines are ignored.
PartialInjection parse_injection_text(std::string_view text);
std::string to_text(const PartialInjection& sigma);

struct ComponentReport {
  std::vector<Index> members;                // sorted
  std::optional<ComponentType> type;         // nullopt = Unresolved
  std::map<Index, std::int64_t> positions;   // position inside the typed shape
  bool closed_cycle = false;                 // the data itself closes a cycle
};

// Weakly connected components of the functional digraph, ordered by their
// smallest member.
std::vector<ComponentReport> classify_components(const PartialInjection& sigma, std::size_t depth);

struct ClaimedComponent {
  Index tau = 0;
  Index copy = 0;
  friend auto operator<=>(const ClaimedComponent&, const ClaimedComponent&) = default;
};

struct EmbeddedComponent {
  std::vector<Index> members;
  std::optional<ComponentType> sigma_type;
  ClaimedComponent claim;
  bool resolved = false;
};

struct Verification {
  bool ok = true;
  std::size_t edges_checked = 0;
  std::string witness;
};

class EmbeddingCertificate {
 public:
  EmbeddingCertificate() = default;
  EmbeddingCertificate(std::map<Index, Index> pi_a, std::vector<EmbeddedComponent> components);

  const std::map<Index, Index>& pi_a() const { return pi_a_; }
  const std::vector<EmbeddedComponent>& components() const { return components_; }
  std::string_view layout_version() const { return kLayoutVersion; }

  std::optional<Index> image(Index i) const;
  std::optional<Index> preimage(Index a) const;
  // a lies on one of the fully claimed mu-components
  bool in_claimed(Index a) const;

  // Injectivity, range inside the claimed components, exact conjugacy on
  // every edge with both ends covered, and type agreement for resolved
  // components.
  Verification verify(const PartialInjection& sigma) const;

 private:
  std::map<Index, Index> pi_a_;
  std::map<Index, Index> inverse_;
  std::vector<EmbeddedComponent> components_;
  std::set<ClaimedComponent> claimed_;
};

EmbeddingCertificate embed_injection(const PartialInjection& sigma, std::size_t depth);

}  // namespace univdyn::injection
