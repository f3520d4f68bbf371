#include "univdyn/covers.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "univdyn/error.hpp"

namespace univdyn::covers {

using univdyn::to_string;

namespace {

template <class T>
const T& piece_as(const Region& r, std::size_t i, const char* space) {
  if (i >= r.size()) throw Error(ErrorCode::SpaceMismatch, std::string("region too short for ") + space);
  const T* p = std::get_if<T>(&r[i]);
  if (!p) throw Error(ErrorCode::SpaceMismatch, std::string("region piece is not a ") + space + " piece: " + to_string(r));
  return *p;
}

// Greedy sweep: do the open intervals (lo, hi) cover the closed [c, d]?
CheckReport sweep_cover(std::vector<std::pair<Rational, Rational>> cells, const Rational& c, const Rational& d) {
  CheckReport report;
  report.checked = cells.size();
  std::sort(cells.begin(), cells.end());
  Rational x = c;
  for (;;) {
    bool found = false;
    Rational reach;
    for (const auto& [lo, hi] : cells) {
      if (lo >= x) break;
      if (hi > x && (!found || hi > reach)) {
        reach = hi;
        found = true;
      }
    }
    if (!found) {
      report.fail("point " + to_string(x) + " is not covered");
      return report;
    }
    if (reach > d) return report;
    x = reach;
  }
}

Rational len_of(const Interval& i) { return std::min(i.hi, Rational(1)) - std::max(i.lo, Rational(0)); }

bool open_nonempty(const Rational& lo, const Rational& hi) { return lo < hi && hi > 0 && lo < 1; }

// ---------------------------------------------------------------- interval

class IntervalSystem : public CoverSystem {
 public:
  std::string name() const override { return "interval"; }
  std::size_t arity(std::size_t) const override { return 6; }
  Region whole() const override { return interval_region(0, 1); }

  Region cell(const Word& s) const override {
    Interval cur{-1, 2};
    for (auto n : s) {
      Interval w = child_w(cur, n);
      cur = Interval{std::max(cur.lo, w.lo), std::min(cur.hi, w.hi)};
    }
    return {cur};
  }

  Region w_cell(const Word& s) const override {
    Word parent(s.begin(), s.end() - 1);
    return {child_w(std::get<Interval>(cell(parent)[0]), s.back())};
  }

  Region closure(const Region& r) const override {
    const auto& i = piece_as<Interval>(r, 0, "interval");
    return interval_region(std::max(i.lo, Rational(0)), std::min(i.hi, Rational(1)));
  }

  std::optional<Region> intersect(const Region& a, const Region& b) const override {
    const auto& x = piece_as<Interval>(a, 0, "interval");
    const auto& y = piece_as<Interval>(b, 0, "interval");
    Interval z{std::max(x.lo, y.lo), std::min(x.hi, y.hi)};
    if (!open_nonempty(z.lo, z.hi) && !(z.lo == z.hi && z.lo >= 0 && z.lo <= 1)) return std::nullopt;
    return Region{z};
  }

  bool same_set(const Region& a, const Region& b) const override {
    auto norm = [](Interval i) {
      if (i.lo < 0) i.lo = -1;
      if (i.hi > 1) i.hi = 2;
      return i;
    };
    return norm(piece_as<Interval>(a, 0, "interval")) == norm(piece_as<Interval>(b, 0, "interval"));
  }

  bool contains(const Region& outer, const Region& inner) const override {
    const auto& o = piece_as<Interval>(outer, 0, "interval");
    const auto& i = piece_as<Interval>(inner, 0, "interval");
    return o.lo < i.lo && i.hi < o.hi;
  }

  Region inflate(const Region& r, const Rational& rad) const override {
    const auto& i = piece_as<Interval>(r, 0, "interval");
    return interval_region(rmax(Rational(0), i.lo - rad), rmin(Rational(1), i.hi + rad));
  }

  std::optional<Region> shrink(const Region& r, const Rational& eps) const override {
    const auto& i = piece_as<Interval>(r, 0, "interval");
    Interval z{i.lo < 0 ? i.lo : i.lo + eps, i.hi > 1 ? i.hi : i.hi - eps};
    if (!open_nonempty(z.lo, z.hi)) return std::nullopt;
    return Region{z};
  }

  Rational diameter(const Region& r) const override {
    return std::max(Rational(0), len_of(piece_as<Interval>(r, 0, "interval")));
  }

  CheckReport covers(const std::vector<Region>& cells, const Region& target) const override {
    std::vector<std::pair<Rational, Rational>> raw;
    for (const auto& c : cells) {
      const auto& i = piece_as<Interval>(c, 0, "interval");
      raw.emplace_back(i.lo, i.hi);
    }
    const auto& t = piece_as<Interval>(target, 0, "interval");
    return sweep_cover(std::move(raw), t.lo, t.hi);
  }

  Rational lebesgue(const Word& s) const override { return len_of(std::get<Interval>(cell(s)[0])) / 20; }
  Rational epsilon_level(std::size_t k) const override { return pow(Rational(1, 5), k + 1) / 4; }
  Rational max_diameter(std::size_t k) const override { return pow(Rational(2, 5), k); }

 private:
  static Interval child_w(const Interval& parent, Word::value_type n) {
    Rational a = std::max(parent.lo, Rational(0));
    Rational b = std::min(parent.hi, Rational(1));
    Rational h = (b - a) / 5;
    Rational m(static_cast<unsigned long>(n));
    return Interval{a + (m - 1) * h, a + (m + 1) * h};
  }
};

// ---------------------------------------------------------------- circle

bool full(const Arc& a) { return a.length >= 1; }

class CircleSystem : public CoverSystem {
 public:
  std::string name() const override { return "circle"; }
  std::size_t arity(std::size_t) const override { return 6; }
  Region whole() const override { return arc_region(0, 1); }

  Region cell(const Word& s) const override {
    if (s.empty()) return whole();
    Arc cur = level_one(s[0]);
    for (std::size_t i = 1; i < s.size(); ++i) {
      Rational h = cur.length / 5;
      Rational m(static_cast<unsigned long>(s[i]));
      Rational lo = rmax(Rational(0), (m - 1) * h);
      Rational hi = rmin(cur.length, (m + 1) * h);
      cur = Arc{frac(cur.start + lo), hi - lo};
    }
    return {cur};
  }

  Region w_cell(const Word& s) const override {
    if (s.size() == 1) return {level_one(s[0])};
    Word parent(s.begin(), s.end() - 1);
    Arc p = std::get<Arc>(cell(parent)[0]);
    Rational h = p.length / 5;
    Rational m(static_cast<unsigned long>(s.back()));
    return arc_region(p.start + (m - 1) * h, 2 * h);
  }

  Region closure(const Region& r) const override { return {piece_as<Arc>(r, 0, "circle")}; }

  std::optional<Region> intersect(const Region& ra, const Region& rb) const override {
    const auto& a = piece_as<Arc>(ra, 0, "circle");
    const auto& b = piece_as<Arc>(rb, 0, "circle");
    if (full(a)) return Region{b};
    if (full(b)) return Region{a};
    Rational d = frac(b.start - a.start);
    std::vector<Arc> parts;
    for (const Rational& off : {d, Rational(d - 1)}) {
      Rational lo = std::max(Rational(0), off);
      Rational hi = rmin(a.length, off + b.length);
      if (lo < hi) parts.push_back(Arc{frac(a.start + lo), hi - lo});
    }
    if (parts.size() != 1) return std::nullopt;
    return Region{parts[0]};
  }

  bool same_set(const Region& ra, const Region& rb) const override {
    const auto& a = piece_as<Arc>(ra, 0, "circle");
    const auto& b = piece_as<Arc>(rb, 0, "circle");
    if (full(a) || full(b)) return full(a) && full(b);
    return a == b;
  }

  bool contains(const Region& outer, const Region& inner) const override {
    const auto& o = piece_as<Arc>(outer, 0, "circle");
    const auto& i = piece_as<Arc>(inner, 0, "circle");
    if (full(o)) return true;
    if (full(i)) return false;
    Rational off = frac(i.start - o.start);
    return off > 0 && off + i.length < o.length;
  }

  Region inflate(const Region& r, const Rational& rad) const override {
    const auto& a = piece_as<Arc>(r, 0, "circle");
    if (full(a) || a.length + 2 * rad >= 1) return whole();
    return arc_region(a.start - rad, a.length + 2 * rad);
  }

  std::optional<Region> shrink(const Region& r, const Rational& eps) const override {
    const auto& a = piece_as<Arc>(r, 0, "circle");
    if (full(a)) return Region{a};
    if (a.length <= 2 * eps) return std::nullopt;
    return arc_region(a.start + eps, a.length - 2 * eps);
  }

  Rational diameter(const Region& r) const override {
    const auto& a = piece_as<Arc>(r, 0, "circle");
    return std::min(a.length, Rational(1, 2));
  }

  CheckReport covers(const std::vector<Region>& cells, const Region& target) const override {
    const auto& t = piece_as<Arc>(target, 0, "circle");
    Rational base = full(t) ? Rational(0) : t.start;
    Rational span = full(t) ? Rational(1) : t.length;
    std::vector<std::pair<Rational, Rational>> raw;
    for (const auto& c : cells) {
      const auto& a = piece_as<Arc>(c, 0, "circle");
      if (full(a)) {
        raw.emplace_back(-1, 3);
        continue;
      }
      Rational d = frac(a.start - base);
      raw.emplace_back(d, d + a.length);
      raw.emplace_back(d - 1, d - 1 + a.length);
    }
    auto report = sweep_cover(std::move(raw), 0, span);
    report.checked = cells.size();
    return report;
  }

  Rational lebesgue(const Word& s) const override {
    if (s.empty()) return Rational(1, 24);
    return std::get<Arc>(cell(s)[0]).length / 20;
  }
  Rational epsilon_level(std::size_t k) const override {
    return k == 0 ? Rational(1, 24) : pow(Rational(1, 5), k) / 12;
  }
  Rational max_diameter(std::size_t k) const override {
    return k == 0 ? Rational(1, 2) : pow(Rational(2, 5), k - 1) / 3;
  }

 private:
  static Arc level_one(Word::value_type n) {
    Rational m(static_cast<unsigned long>(n));
    return Arc{frac((m - 1) / 6), Rational(1, 3)};
  }
};

// ---------------------------------------------------------------- cantor

bool is_prefix(const Word& a, const Word& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

class CantorSystem : public CoverSystem {
 public:
  std::string name() const override { return "cantor"; }
  std::size_t arity(std::size_t) const override { return 2; }
  Region whole() const override { return cylinder_region({}); }
  Region cell(const Word& s) const override { return cylinder_region(s); }
  Region w_cell(const Word& s) const override { return cylinder_region(s); }
  Region closure(const Region& r) const override { return {piece_as<Cylinder>(r, 0, "cantor")}; }

  std::optional<Region> intersect(const Region& ra, const Region& rb) const override {
    const auto& a = piece_as<Cylinder>(ra, 0, "cantor").prefix;
    const auto& b = piece_as<Cylinder>(rb, 0, "cantor").prefix;
    if (is_prefix(a, b)) return cylinder_region(b);
    if (is_prefix(b, a)) return cylinder_region(a);
    return std::nullopt;
  }

  bool same_set(const Region& a, const Region& b) const override {
    return piece_as<Cylinder>(a, 0, "cantor") == piece_as<Cylinder>(b, 0, "cantor");
  }

  bool contains(const Region& outer, const Region& inner) const override {
    return is_prefix(piece_as<Cylinder>(outer, 0, "cantor").prefix, piece_as<Cylinder>(inner, 0, "cantor").prefix);
  }

  Region inflate(const Region& r, const Rational& rad) const override {
    const auto& u = piece_as<Cylinder>(r, 0, "cantor").prefix;
    std::size_t keep = std::min(u.size(), cantor_fixed_symbols(rad));
    return cylinder_region(Word(u.begin(), u.begin() + keep));
  }

  std::optional<Region> shrink(const Region& r, const Rational& eps) const override {
    const auto& w = piece_as<Cylinder>(r, 0, "cantor").prefix;
    if (cantor_fixed_symbols(eps) < w.size()) return std::nullopt;
    return cylinder_region(w);
  }

  Rational diameter(const Region& r) const override {
    return pow2_neg(piece_as<Cylinder>(r, 0, "cantor").prefix.size() + 1);
  }

  CheckReport covers(const std::vector<Region>& cells, const Region& target) const override {
    CheckReport report;
    report.checked = cells.size();
    std::vector<Word> prefixes;
    std::size_t deepest = 0;
    for (const auto& c : cells) {
      prefixes.push_back(piece_as<Cylinder>(c, 0, "cantor").prefix);
      deepest = std::max(deepest, prefixes.back().size());
    }
    std::function<bool(Word&)> covered = [&](Word& u) {
      for (const auto& p : prefixes) {
        if (is_prefix(p, u)) return true;
      }
      if (u.size() >= deepest) {
        report.fail("cylinder [" + symbolic::to_string(u) + "] is not covered");
        return false;
      }
      for (Word::value_type b = 0; b < 2; ++b) {
        u.push_back(b);
        bool ok = covered(u);
        u.pop_back();
        if (!ok) return false;
      }
      return true;
    };
    Word u = piece_as<Cylinder>(target, 0, "cantor").prefix;
    covered(u);
    return report;
  }

  Rational lebesgue(const Word& s) const override { return pow2_neg(s.size() + 2); }
  Rational epsilon_level(std::size_t k) const override { return pow2_neg(k + 2); }
  Rational max_diameter(std::size_t k) const override { return pow2_neg(k + 1); }
};

// ---------------------------------------------------------------- finite metric

class FiniteMetricSystem : public CoverSystem {
 public:
  explicit FiniteMetricSystem(Matrix d) : d_(std::move(d)) {
    std::size_t n = d_.size();
    if (n < 2) throw Error(ErrorCode::SpaceMismatch, "a finite metric space needs at least 2 points");
    for (std::size_t i = 0; i < n; ++i) {
      if (d_[i].size() != n) throw Error(ErrorCode::SpaceMismatch, "distance matrix is not square");
      for (std::size_t j = 0; j < n; ++j) {
        if (d_[i][j] != d_[j][i]) throw Error(ErrorCode::SpaceMismatch, "distance matrix is not symmetric");
        if ((i == j) != (d_[i][j] == 0) || d_[i][j] < 0) {
          throw Error(ErrorCode::SpaceMismatch, "distances must vanish exactly on the diagonal");
        }
        for (std::size_t k = 0; k < n; ++k) {
          if (d_[i][k] > d_[i][j] + d_[j][k]) throw Error(ErrorCode::SpaceMismatch, "triangle inequality fails");
        }
        if (i != j && (dmin_ == 0 || d_[i][j] < dmin_)) dmin_ = d_[i][j];
      }
    }
  }

  std::string name() const override { return "finite:" + univdyn::to_string(d_); }
  std::size_t arity(std::size_t level) const override { return level <= 1 ? d_.size() : 2; }

  Region whole() const override {
    std::vector<std::size_t> all(d_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return point_set_region(all);
  }
  Region cell(const Word& s) const override { return s.empty() ? whole() : point_set_region({s[0]}); }
  Region w_cell(const Word& s) const override { return point_set_region({s[0]}); }
  Region closure(const Region& r) const override { return {piece_as<PointSet>(r, 0, "finite")}; }

  std::optional<Region> intersect(const Region& a, const Region& b) const override {
    const auto& x = piece_as<PointSet>(a, 0, "finite").points;
    const auto& y = piece_as<PointSet>(b, 0, "finite").points;
    std::vector<std::size_t> z;
    std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(z));
    if (z.empty()) return std::nullopt;
    return point_set_region(z);
  }

  bool same_set(const Region& a, const Region& b) const override {
    return piece_as<PointSet>(a, 0, "finite") == piece_as<PointSet>(b, 0, "finite");
  }

  bool contains(const Region& outer, const Region& inner) const override {
    const auto& o = piece_as<PointSet>(outer, 0, "finite").points;
    const auto& i = piece_as<PointSet>(inner, 0, "finite").points;
    return std::includes(o.begin(), o.end(), i.begin(), i.end());
  }

  Region inflate(const Region& r, const Rational& rad) const override {
    const auto& e = piece_as<PointSet>(r, 0, "finite").points;
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < d_.size(); ++x) {
      for (auto p : e) {
        if (d_[x][p] < rad || x == p) {
          out.push_back(x);
          break;
        }
      }
    }
    return point_set_region(out);
  }

  std::optional<Region> shrink(const Region& r, const Rational& eps) const override {
    const auto& s = piece_as<PointSet>(r, 0, "finite").points;
    std::vector<std::size_t> out;
    for (auto c : s) {
      bool inside = true;
      for (std::size_t x = 0; x < d_.size() && inside; ++x) {
        if (d_[c][x] < eps && !std::binary_search(s.begin(), s.end(), x)) inside = false;
      }
      if (inside) out.push_back(c);
    }
    if (out.empty()) return std::nullopt;
    return point_set_region(out);
  }

  Rational diameter(const Region& r) const override {
    const auto& s = piece_as<PointSet>(r, 0, "finite").points;
    Rational best = 0;
    for (auto a : s) {
      for (auto b : s) best = std::max(best, d_[a][b]);
    }
    return best;
  }

  CheckReport covers(const std::vector<Region>& cells, const Region& target) const override {
    CheckReport report;
    report.checked = cells.size();
    std::set<std::size_t> hit;
    for (const auto& c : cells) {
      for (auto p : piece_as<PointSet>(c, 0, "finite").points) hit.insert(p);
    }
    for (auto p : piece_as<PointSet>(target, 0, "finite").points) {
      if (!hit.count(p)) {
        report.fail("point " + std::to_string(p) + " is not covered");
        break;
      }
    }
    return report;
  }

  Rational lebesgue(const Word& s) const override { return epsilon_level(s.size()); }
  Rational epsilon_level(std::size_t k) const override { return rmin(dmin_ / 4, pow2_neg(k + 2)); }
  Rational max_diameter(std::size_t k) const override { return k == 0 ? diameter(whole()) : Rational(0); }

 private:
  Matrix d_;
  Rational dmin_ = 0;
};

// ---------------------------------------------------------------- product

class ProductSystem : public CoverSystem {
 public:
  ProductSystem(CoverSystemPtr x, CoverSystemPtr y) : x_(std::move(x)), y_(std::move(y)) {}

  std::string name() const override { return x_->name() + "*" + y_->name(); }
  std::size_t piece_count() const override { return x_->piece_count() + y_->piece_count(); }
  std::size_t arity(std::size_t level) const override { return x_->arity(level) * y_->arity(level); }

  Region whole() const override { return join(x_->whole(), y_->whole()); }

  Region cell(const Word& s) const override {
    auto [sx, sy] = split_product_word(*x_, *y_, s);
    return join(x_->cell(sx), y_->cell(sy));
  }
  Region w_cell(const Word& s) const override {
    auto [sx, sy] = split_product_word(*x_, *y_, s);
    return join(x_->w_cell(sx), y_->w_cell(sy));
  }

  Region closure(const Region& r) const override {
    auto [a, b] = split(r);
    return join(x_->closure(a), y_->closure(b));
  }

  std::optional<Region> intersect(const Region& ra, const Region& rb) const override {
    auto [ax, ay] = split(ra);
    auto [bx, by] = split(rb);
    auto ix = x_->intersect(ax, bx);
    auto iy = y_->intersect(ay, by);
    if (!ix || !iy) return std::nullopt;
    return join(*ix, *iy);
  }

  bool same_set(const Region& ra, const Region& rb) const override {
    auto [ax, ay] = split(ra);
    auto [bx, by] = split(rb);
    return x_->same_set(ax, bx) && y_->same_set(ay, by);
  }

  bool contains(const Region& outer, const Region& inner) const override {
    auto [ox, oy] = split(outer);
    auto [ix, iy] = split(inner);
    return x_->contains(ox, ix) && y_->contains(oy, iy);
  }

  Region inflate(const Region& r, const Rational& rad) const override {
    auto [a, b] = split(r);
    return join(x_->inflate(a, rad), y_->inflate(b, rad));
  }

  std::optional<Region> shrink(const Region& r, const Rational& eps) const override {
    auto [a, b] = split(r);
    auto sx = x_->shrink(a, eps);
    auto sy = y_->shrink(b, eps);
    if (!sx || !sy) return std::nullopt;
    return join(*sx, *sy);
  }

  Rational diameter(const Region& r) const override {
    auto [a, b] = split(r);
    return std::max(x_->diameter(a), y_->diameter(b));
  }

  // Only grids (every pair of factor cells present) are decided.
  CheckReport covers(const std::vector<Region>& cells, const Region& target) const override {
    std::map<std::string, Region> xs, ys;
    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& c : cells) {
      auto [a, b] = split(c);
      auto ka = to_string(a), kb = to_string(b);
      xs.emplace(ka, a);
      ys.emplace(kb, b);
      pairs.emplace(ka, kb);
    }
    CheckReport report;
    if (pairs.size() != xs.size() * ys.size()) {
      report.checked = cells.size();
      report.fail("product cells do not form a grid");
      return report;
    }
    auto [tx, ty] = split(target);
    std::vector<Region> vx, vy;
    for (auto& [k, v] : xs) vx.push_back(v);
    for (auto& [k, v] : ys) vy.push_back(v);
    report.merge(x_->covers(vx, tx));
    report.merge(y_->covers(vy, ty));
    return report;
  }

  Rational lebesgue(const Word& s) const override {
    auto [sx, sy] = split_product_word(*x_, *y_, s);
    return std::min(x_->lebesgue(sx), y_->lebesgue(sy));
  }
  Rational epsilon_level(std::size_t k) const override {
    return std::min(x_->epsilon_level(k), y_->epsilon_level(k));
  }
  Rational max_diameter(std::size_t k) const override {
    return std::max(x_->max_diameter(k), y_->max_diameter(k));
  }

 private:
  std::pair<Region, Region> split(const Region& r) const {
    std::size_t nx = x_->piece_count();
    if (r.size() != piece_count()) throw Error(ErrorCode::SpaceMismatch, "region does not match " + name());
    return {Region(r.begin(), r.begin() + nx), Region(r.begin() + nx, r.end())};
  }
  static Region join(Region a, const Region& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }

  CoverSystemPtr x_, y_;
};

}  // namespace

std::string to_string(const Piece& p) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Interval>) {
          return "[" + univdyn::to_string(v.lo) + ", " + univdyn::to_string(v.hi) + "]";
        } else if constexpr (std::is_same_v<T, Arc>) {
          if (v.length >= 1) return "circle";
          return "arc(" + univdyn::to_string(v.start) + " +" + univdyn::to_string(v.length) + ")";
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          return "[" + symbolic::to_string(v.prefix) + "*]";
        } else {
          std::string out = "{";
          for (std::size_t i = 0; i < v.points.size(); ++i) out += (i ? "," : "") + std::to_string(v.points[i]);
          return out + "}";
        }
      },
      p);
}

std::string to_string(const Region& r) {
  std::string out;
  for (std::size_t i = 0; i < r.size(); ++i) out += (i ? " x " : "") + to_string(r[i]);
  return out;
}

Region interval_region(const Rational& lo, const Rational& hi) { return {Interval{lo, hi}}; }
Region point_region(const Rational& x) { return {Interval{x, x}}; }
Region arc_region(const Rational& start, const Rational& length) {
  if (length >= 1) return {Arc{0, 1}};
  return {Arc{frac(start), length}};
}
Region cylinder_region(Word prefix) { return {Cylinder{std::move(prefix)}}; }
Region point_set_region(std::vector<std::size_t> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return {PointSet{std::move(points)}};
}

symbolic::SymbolicSpace CoverSystem::symbol_space() const { return symbolic::SymbolicSpace::product({arity(1)}, arity(2)); }

void CoverSystem::check_word(const Word& s) const {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] >= arity(i + 1)) {
      throw Error(ErrorCode::InvalidBranch, "symbol " + std::to_string(s[i]) + " at position " + std::to_string(i) +
                                                " is outside J_" + std::to_string(i + 1) + " of " + name());
    }
  }
}

CoverSystemPtr interval_system() { return std::make_shared<IntervalSystem>(); }
CoverSystemPtr circle_system() { return std::make_shared<CircleSystem>(); }
CoverSystemPtr cantor_system() { return std::make_shared<CantorSystem>(); }
CoverSystemPtr finite_metric_system(Matrix distances) {
  return std::make_shared<FiniteMetricSystem>(std::move(distances));
}
CoverSystemPtr product_system(CoverSystemPtr x, CoverSystemPtr y) {
  return std::make_shared<ProductSystem>(std::move(x), std::move(y));
}

CoverSystemPtr make_cover_system(const std::string& desc) {
  auto star = desc.find('*');
  if (star != std::string::npos) {
    return product_system(make_cover_system(desc.substr(0, star)), make_cover_system(desc.substr(star + 1)));
  }
  if (desc == "interval") return interval_system();
  if (desc == "circle") return circle_system();
  if (desc == "cantor") return cantor_system();
  if (desc.rfind("finite:", 0) == 0) return finite_metric_system(parse_matrix(desc.substr(7)));
  throw Error(ErrorCode::ParseError, "unknown space '" + desc + "'");
}

std::pair<Word, Word> split_product_word(const CoverSystem& x, const CoverSystem& y, const Word& s) {
  Word sx, sy;
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto ay = y.arity(i + 1);
    if (s[i] >= x.arity(i + 1) * ay) {
      throw Error(ErrorCode::InvalidBranch, "product symbol " + std::to_string(s[i]) + " out of range");
    }
    sx.push_back(s[i] / ay);
    sy.push_back(s[i] % ay);
  }
  return {sx, sy};
}

Word join_product_words(const CoverSystem& y, const Word& sx, const Word& sy) {
  if (sx.size() != sy.size()) throw Error(ErrorCode::SpaceMismatch, "factor words differ in length");
  Word s;
  for (std::size_t i = 0; i < sx.size(); ++i) s.push_back(sx[i] * y.arity(i + 1) + sy[i]);
  return s;
}

std::size_t cantor_fixed_symbols(const Rational& r) {
  if (r <= 0) throw Error(ErrorCode::NoCell, "radius must be positive");
  std::size_t j = 0;
  while (pow2_neg(j + 1) >= r) ++j;
  return j;
}

CoverCertificate verify_cover_system(const CoverSystem& cs, std::size_t depth) {
  CoverCertificate cert;
  std::vector<std::vector<Region>> level_cells(depth + 1);
  level_cells[0].push_back(cs.whole());
  for (std::size_t k = 0; k <= depth; ++k) {
    cert.levels.push_back({k, k == 0 ? 1u : 0u, k == 0 ? cs.diameter(cs.whole()) : Rational(0), cs.epsilon_level(k)});
  }
  auto fail = [&](const std::string& condition, const std::string& witness) {
    if (cert.ok) {
      cert.failed_condition = condition;
      cert.witness = witness;
    }
    cert.ok = false;
  };
  auto label = [](const Word& s) { return s.empty() ? std::string("root") : "s=" + symbolic::to_string(s); };

  Word s;
  std::function<void()> visit = [&]() {
    if (!cert.ok || s.size() >= depth) return;
    std::size_t k = s.size() + 1;
    Region vs = cs.cell(s);
    Region vs_closed = s.empty() ? cs.whole() : cs.closure(vs);
    Rational bound = pow2_neg(k);
    std::vector<Region> ws, shrunk;
    Rational eps = cs.lebesgue(s);
    if (!(eps > 0 && eps < pow2_neg(s.size()) && eps >= cs.epsilon_level(s.size()))) {
      fail("Lebesgue number range", label(s) + " eps=" + to_string(eps));
      return;
    }
    for (std::size_t n = 0; n < cs.arity(k); ++n) {
      s.push_back(n);
      Region w = cs.w_cell(s);
      Region v = cs.cell(s);
      ws.push_back(w);
      if (auto sh = cs.shrink(w, eps)) shrunk.push_back(*sh);
      Rational dv = cs.diameter(v), dw = cs.diameter(w);
      if (!(dv < bound) || !(dw < bound) || dv > cs.max_diameter(k)) {
        fail("diameter", label(s) + " diam V=" + to_string(dv) + " diam W=" + to_string(dw));
      }
      auto meet = cs.intersect(vs, w);
      if (!meet) {
        fail("nonempty cell", label(s) + " V_s n W_sn is empty");
      } else if (!cs.same_set(*meet, v)) {
        fail("V_sn = V_s n W_sn", label(s) + " V=" + to_string(v) + " but V_s n W=" + to_string(*meet));
      }
      Region vc = cs.closure(v);
      auto nested = cs.intersect(vc, vs_closed);
      if (!nested || !cs.same_set(*nested, vc)) fail("closed nesting", label(s) + " closure leaves the parent");
      auto& lv = cert.levels[k];
      ++lv.cells;
      lv.max_diameter = std::max(lv.max_diameter, dv);
      level_cells[k].push_back(v);
      visit();
      s.pop_back();
      if (!cert.ok) return;
    }
    auto cover = cs.covers(ws, vs_closed);
    if (!cover.ok) fail("children cover closure", label(s) + ": " + cover.witness);
    auto leb = cs.covers(shrunk, vs_closed);
    if (!leb.ok) fail("Lebesgue number", label(s) + " eps=" + to_string(eps) + ": " + leb.witness);
  };
  visit();
  for (std::size_t k = 1; k <= depth && cert.ok; ++k) {
    auto cover = cs.covers(level_cells[k], cs.whole());
    if (!cover.ok) fail("level covers X", "level " + std::to_string(k) + ": " + cover.witness);
  }
  return cert;
}

Region project_symbol_to_point(const CoverSystem& cs, const Word& alpha, std::size_t k) {
  if (alpha.size() < k) {
    throw Error(ErrorCode::InvalidBranch, "prefix of length " + std::to_string(alpha.size()) + " cannot fix level " +
                                              std::to_string(k));
  }
  Word s(alpha.begin(), alpha.begin() + k);
  cs.check_word(s);
  return k == 0 ? cs.whole() : cs.closure(cs.cell(s));
}

Word locate_ball(const CoverSystem& cs, const Region& center, const Rational& radius, std::size_t k,
                 const Word& constraint) {
  cs.check_word(constraint);
  if (constraint.size() > k) throw Error(ErrorCode::InvalidBranch, "constraint longer than the target level");
  Region ball = radius == 0 ? center : cs.inflate(center, radius);
  Word t = constraint;
  std::function<bool()> search = [&]() {
    if (!t.empty() && !cs.contains(cs.cell(t), ball)) return false;
    if (t.size() == k) return true;
    for (std::size_t n = 0; n < cs.arity(t.size() + 1); ++n) {
      t.push_back(n);
      if (search()) return true;
      t.pop_back();
    }
    return false;
  };
  if (!search()) {
    throw Error(ErrorCode::NoCell, "no level-" + std::to_string(k) + " cell of " + cs.name() + " extending [" +
                                       symbolic::to_string(constraint) + "] contains the ball of radius " +
                                       to_string(radius) + " around " + to_string(center));
  }
  return t;
}

}  // namespace univdyn::covers
