#include "univdyn/invariant.hpp"

#include <algorithm>
#include <sstream>

#include "univdyn/error.hpp"

namespace univdyn::invariant {

using covers::Interval;

namespace {

constexpr std::size_t kMaxHalvings = 400;
constexpr std::size_t npos = static_cast<std::size_t>(-1);

Interval interval_of(const covers::Region& r, const std::string& who) {
  if (r.size() != 1 || !std::holds_alternative<Interval>(r[0])) {
    throw Error(ErrorCode::SpaceMismatch, who + " is not an interval map");
  }
  return std::get<Interval>(r[0]);
}

bool inside(const OpenCell& c, const Rational& x) { return c.lo < x && x < c.hi; }

std::size_t cell_holding(const std::vector<OpenCell>& cells, const Rational& x) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (inside(cells[i], x)) return i;
  }
  return npos;
}

void sort_unique(std::vector<Rational>& v) {
  for (auto& x : v) x.canonicalize();
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// T of the cell's closure within the domain
Interval cell_image(const lift::PointMap& t, const InvariantTower& tw, const OpenCell& c) {
  Rational lo = rmax(tw.domain_lo, c.lo), hi = rmin(tw.domain_hi, c.hi);
  return interval_of(t.image(covers::interval_region(lo, hi)), t.name);
}

}  // namespace

bool InvariantTower::in_partial_intersection(const Rational& x, std::size_t j) const {
  if (x < domain_lo || x > domain_hi) return false;
  for (std::size_t i = 0; i <= j && i < levels.size(); ++i) {
    if (cell_holding(levels[i].cells, x) == npos) return false;
  }
  return true;
}

InvariantTower invariant_refinement_tower(const lift::PointMap& t, std::vector<Rational> z,
                                          std::vector<Rational> frontier, std::size_t depth) {
  InvariantTower tw;
  tw.map_name = t.name;
  Interval dom = interval_of(t.space->closure(t.space->whole()), t.name);
  tw.domain_lo = dom.lo;
  tw.domain_hi = dom.hi;
  if (z.empty()) throw Error(ErrorCode::NotInvariant, "empty point set");
  sort_unique(frontier);
  z.insert(z.end(), frontier.begin(), frontier.end());
  sort_unique(z);
  tw.z = z;
  tw.frontier = frontier;

  std::vector<Rational> image(z.size());
  std::vector<bool> is_frontier(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i] < dom.lo || z[i] > dom.hi) {
      throw Error(ErrorCode::NotInvariant, univdyn::to_string(z[i]) + " lies outside the domain");
    }
    is_frontier[i] = std::binary_search(frontier.begin(), frontier.end(), z[i]);
    Interval y = interval_of(t.image(covers::point_region(z[i])), t.name);
    if (y.lo != y.hi) throw Error(ErrorCode::InconsistentOracle, t.name + " does not map a point to a point");
    image[i] = y.lo;
    if (!is_frontier[i] && !std::binary_search(z.begin(), z.end(), image[i])) {
      throw Error(ErrorCode::NotInvariant,
                  "T(" + univdyn::to_string(z[i]) + ") = " + univdyn::to_string(image[i]) + " is not in Z");
    }
  }

  // distance to the nearest other point; the whole domain width for a singleton
  std::vector<Rational> gap(z.size(), dom.hi - dom.lo + 1);
  for (std::size_t i = 0; i + 1 < z.size(); ++i) {
    Rational g = z[i + 1] - z[i];
    gap[i] = rmin(gap[i], g);
    gap[i + 1] = rmin(gap[i + 1], g);
  }

  tw.levels.push_back(TowerLevel{0, {OpenCell{dom.lo - 1, dom.hi + 1}}, {}});
  tw.levels[0].image_cell.assign(1, npos);
  for (std::size_t j = 1; j <= depth; ++j) {
    const auto& prev = tw.levels[j - 1].cells;
    TowerLevel lv;
    lv.level = j;
    for (std::size_t i = 0; i < z.size(); ++i) {
      const OpenCell& parent = prev[cell_holding(prev, z[i])];
      Rational r = rmin(pow2_neg(j + 2), gap[i] / 3);
      r = rmin(r, rmin(Rational(z[i] - parent.lo), Rational(parent.hi - z[i])));
      std::size_t target = npos;
      if (!is_frontier[i]) {
        target = cell_holding(prev, image[i]);
        const OpenCell& c = prev[target];
        Rational room = rmin(Rational(image[i] - c.lo), Rational(c.hi - image[i]));
        std::size_t halvings = 0;
        auto fits = [&] {
          if (!(t.modulus(r) < room)) return false;
          Interval img = cell_image(t, tw, OpenCell{z[i] - r, z[i] + r});
          return c.lo < img.lo && img.hi < c.hi;
        };
        while (!fits()) {
          if (++halvings > kMaxHalvings) {
            throw Error(ErrorCode::ModulusTooCoarse, "modulus of " + t.name + " cannot place the image of a cell around " +
                                                         univdyn::to_string(z[i]) + " at level " + std::to_string(j));
          }
          r /= 2;
        }
      }
      lv.cells.push_back(OpenCell{z[i] - r, z[i] + r});
      lv.image_cell.push_back(target);
    }
    tw.levels.push_back(std::move(lv));
  }
  return tw;
}

TowerCertificate certify_tower(const lift::PointMap& t, const InvariantTower& tw) {
  TowerCertificate cert;
  for (std::size_t j = 1; j < tw.levels.size(); ++j) {
    const auto& cells = tw.levels[j].cells;
    const auto& prev = tw.levels[j - 1].cells;
    std::string at = " at level " + std::to_string(j);
    for (std::size_t a = 0; a < cells.size(); ++a) {
      for (std::size_t b = a + 1; b < cells.size(); ++b) {
        ++cert.disjoint.checked;
        if (rmax(cells[a].lo, cells[b].lo) < rmin(cells[a].hi, cells[b].hi)) {
          cert.disjoint.fail("cells " + std::to_string(a) + " and " + std::to_string(b) + " overlap" + at);
        }
      }
      ++cert.diameter.checked;
      if (!(cells[a].hi - cells[a].lo < pow2_neg(j))) {
        cert.diameter.fail("cell " + std::to_string(a) + at + " has diameter " + univdyn::to_string(cells[a].hi - cells[a].lo));
      }
      ++cert.nesting.checked;
      bool nested = std::any_of(prev.begin(), prev.end(),
                                [&](const OpenCell& p) { return p.lo <= cells[a].lo && cells[a].hi <= p.hi; });
      if (!nested) cert.nesting.fail("cell " + std::to_string(a) + at + " leaves the previous level");
    }
    for (std::size_t i = 0; i < tw.z.size(); ++i) {
      ++cert.covering.checked;
      std::size_t n = cell_holding(cells, tw.z[i]);
      if (n == npos) {
        cert.covering.fail(univdyn::to_string(tw.z[i]) + " is uncovered" + at);
        continue;
      }
      if (std::binary_search(tw.frontier.begin(), tw.frontier.end(), tw.z[i])) continue;
      ++cert.containment.checked;
      Interval img = cell_image(t, tw, cells[n]);
      bool ok = std::any_of(prev.begin(), prev.end(),
                            [&](const OpenCell& p) { return p.lo < img.lo && img.hi < p.hi; });
      if (!ok) {
        cert.containment.fail("T of the cell around " + univdyn::to_string(tw.z[i]) + at + " is [" + univdyn::to_string(img.lo) + ", " +
                              univdyn::to_string(img.hi) + "]");
      }
    }
  }
  return cert;
}

std::string to_string(const InvariantTower& t) {
  std::ostringstream out;
  out << "tower " << t.map_name << " depth " << t.depth() << "\n";
  out << "domain [" << univdyn::to_string(t.domain_lo) << ", " << univdyn::to_string(t.domain_hi) << "]\n";
  out << "Z";
  for (const auto& x : t.z) out << " " << univdyn::to_string(x);
  out << "\nfrontier";
  for (const auto& x : t.frontier) out << " " << univdyn::to_string(x);
  out << "\n";
  for (std::size_t j = 1; j < t.levels.size(); ++j) {
    out << "level " << j;
    for (const auto& c : t.levels[j].cells) out << " (" << univdyn::to_string(c.lo) << ", " << univdyn::to_string(c.hi) << ")";
    out << "\n";
  }
  return out.str();
}

std::string render_tree(const InvariantTower& t) {
  std::ostringstream out;
  out << t.map_name << " on [" << univdyn::to_string(t.domain_lo) << ", " << univdyn::to_string(t.domain_hi) << "]\n";
  for (std::size_t j = 1; j < t.levels.size(); ++j) {
    const auto& lv = t.levels[j];
    for (std::size_t n = 0; n < lv.cells.size(); ++n) {
      out << std::string(2 * j, ' ') << "U" << j << "_" << n << " (" << univdyn::to_string(lv.cells[n].lo) << ", "
          << univdyn::to_string(lv.cells[n].hi) << ")";
      if (lv.image_cell[n] != npos) out << " -> U" << (j - 1) << "_" << lv.image_cell[n];
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace univdyn::invariant
