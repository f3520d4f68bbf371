#include "univdyn/pairing.hpp"

#include <cmath>
#include <limits>

#include "univdyn/error.hpp"

namespace univdyn {

std::uint64_t cantor_pair(std::uint64_t a, std::uint64_t b) {
  using u128 = unsigned __int128;
  u128 s = static_cast<u128>(a) + b;
  u128 v = s * (s + 1) / 2 + b;
  if (v > std::numeric_limits<std::uint64_t>::max()) {
    throw Error(ErrorCode::InvalidIndex, "pairing overflow");
  }
  return static_cast<std::uint64_t>(v);
}

std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t n) {
  // largest w with w(w+1)/2 <= n
  auto w = static_cast<std::uint64_t>((std::sqrt(8.0L * n + 1.0L) - 1.0L) / 2.0L);
  auto tri = [](std::uint64_t x) { return static_cast<unsigned __int128>(x) * (x + 1) / 2; };
  while (tri(w) > n) --w;
  while (tri(w + 1) <= n) ++w;
  std::uint64_t b = n - static_cast<std::uint64_t>(tri(w));
  return {w - b, b};
}

std::uint64_t zigzag(std::int64_t p) {
  return p >= 0 ? 2 * static_cast<std::uint64_t>(p) : 2 * static_cast<std::uint64_t>(-(p + 1)) + 1;
}

std::int64_t unzigzag(std::uint64_t code) {
  return code % 2 == 0 ? static_cast<std::int64_t>(code / 2) : -static_cast<std::int64_t>(code / 2) - 1;
}

}  // namespace univdyn
