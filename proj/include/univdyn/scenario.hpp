#pragma once

// Declarative scenarios for the command-line front end. A scenario is a list
// of `[construction]` sections holding `key = value` lines; keys before the
// first section are global (only `seed`).

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "univdyn/common.hpp"
#include "univdyn/lift.hpp"

namespace univdyn::scenario {

struct Section {
  std::string construction;
  std::size_t line = 0;
  std::vector<std::pair<std::string, std::string>> entries;

  // last value of the key
  std::optional<std::string> get(const std::string& key) const;
  std::vector<std::string> all(const std::string& key) const;
};

struct Scenario {
  std::string name;
  std::optional<std::uint64_t> seed;
  std::vector<Section> sections;
};

// Throws ParseError with the line number.
Scenario parse_scenario(std::string_view text, std::string name);
// Throws ParseError when the file cannot be read.
Scenario load_scenario(const std::string& path);

std::vector<std::string> constructions();

// square | tent | identity[:space] | affine:a:b | rotation:theta |
// constant:x | finite:<matrix>:<table>. Throws ParseError.
lift::PointMap parse_point_map(std::string_view text);
// "m1, m2, ..." or "rotation-family: w1 w2 ..." with binary words.
common::MapFamily parse_family(std::string_view text);
// Whitespace- or comma-separated rationals.
std::vector<Rational> parse_rational_list(std::string_view text);

struct Overrides {
  std::optional<std::size_t> depth;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
};

enum class Format { Text, Tree };

struct SectionResult {
  std::string construction;
  bool ok = true;
  std::string witness;  // first failure
  std::string body;     // certificate lines
};

struct RunResult {
  bool ok = true;
  std::uint64_t seed = 0;
  std::vector<SectionResult> sections;
  std::string certificate;  // deterministic for a fixed scenario and seed
  std::string summary;
};

// Library errors inside a construction are FAILs with the error as witness;
// malformed values rethrow ParseError.
RunResult run_scenario(const Scenario& sc, const Overrides& ov, Format format = Format::Text);

}  // namespace univdyn::scenario
