#pragma once

#include <cstddef>
#include <string>

namespace univdyn {

// Outcome of an exhaustive or sampled check; keeps the first failure.
struct CheckReport {
  bool ok = true;
  std::size_t checked = 0;
  std::string witness;

  void fail(std::string w) {
    if (ok) witness = std::move(w);
    ok = false;
  }
  void merge(const CheckReport& other) {
    checked += other.checked;
    if (!other.ok) fail(other.witness);
  }
};

}  // namespace univdyn
