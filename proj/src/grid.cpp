#include "nodalcert/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "nodalcert/errors.hpp"
#include "parallel.hpp"

namespace nodalcert {

Interval dyadic_interval(int i, int e) {
  return Interval(std::ldexp(static_cast<double>(i), -e), std::ldexp(static_cast<double>(i) + 1, -e));
}

int grid_nx(int m) { return 1 << ((m + 1) / 2); }
int grid_ny(int m) { return 1 << (m / 2); }

namespace {

int exp_x(int level) { return (level + 1) / 2; }
int exp_y(int level) { return level / 2; }

struct AxisData {
  AxisEnclosure enc;
  ColumnContraction col;  // filled for x axes
  RowContraction row;     // filled for y axes
};

// Unique sorted values of one coordinate and a lookup from value to slot.
std::vector<int> unique_coords(const std::vector<CellIndex>& cells, bool x) {
  std::vector<int> v;
  v.reserve(cells.size());
  for (const auto& c : cells) v.push_back(x ? c.ix : c.iy);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

int slot(const std::vector<int>& sorted, int value) {
  return static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), value) - sorted.begin());
}

}  // namespace

std::vector<Interval> LegendreRangeModel::cell_ranges(int ex, int ey,
                                                      const std::vector<CellIndex>& cells,
                                                      int threads) const {
  const auto xs = unique_coords(cells, true);
  const auto ys = unique_coords(cells, false);
  std::vector<AxisData> xd(xs.size()), yd(ys.size());
  const int mu = field_.mu();
  detail::parallel_for(xs.size() + ys.size(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      if (k < xs.size()) {
        xd[k].enc = axis_enclosure(mu, dyadic_interval(xs[k], ex));
        xd[k].col = contract_columns(field_, xd[k].enc);
      } else {
        const std::size_t j = k - xs.size();
        yd[j].enc = axis_enclosure(mu, dyadic_interval(ys[j], ey));
        yd[j].row = contract_rows(field_, yd[j].enc);
      }
    }
  });
  std::vector<Interval> out(cells.size());
  detail::parallel_for(cells.size(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      const auto& a = xd[slot(xs, cells[k].ix)];
      const auto& c = yd[slot(ys, cells[k].iy)];
      out[k] = cell_range(a.enc, a.col, c.enc, c.row);
    }
  });
  return out;
}

Rectangle CellClassification::cell_rect(int idx) const {
  const int ix = idx % nx, iy = idx / nx;
  const double lx = domain.bx - domain.ax, ly = domain.by - domain.ay;
  auto xat = [&](int i) { return i == nx ? domain.bx : domain.ax + lx * i / nx; };
  auto yat = [&](int i) { return i == ny ? domain.by : domain.ay + ly * i / ny; };
  return {xat(ix), xat(ix + 1), yat(iy), yat(iy + 1)};
}

double CellClassification::cell_area_upper() const {
  return (domain.area() * Interval(std::ldexp(1.0, -m))).hi();
}

int CellClassification::count(Label l) const {
  return static_cast<int>(std::count(labels.begin(), labels.end(), l));
}

CellClassification make_classification(int m, Rectangle domain, double sigma) {
  if (m < 0 || m > 26) throw DomainError("subdivision exponent m must be in [0, 26]");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be finite and >= 0");
  Rectangle::make(domain.ax, domain.bx, domain.ay, domain.by);
  CellClassification c;
  c.m = m;
  c.nx = grid_nx(m);
  c.ny = grid_ny(m);
  c.sigma = sigma;
  c.domain = domain;
  c.labels.assign(static_cast<std::size_t>(c.nx) * c.ny, Label::Undetermined);
  c.ranges.assign(c.labels.size(), Interval::entire());
  return c;
}

namespace {

Label decide(const Interval& r, double sigma) {
  if (rounding::sub_down(r.lo(), sigma) > 0.0) return Label::Plus;
  if (rounding::add_up(r.hi(), sigma) < 0.0) return Label::Minus;
  return Label::Undetermined;
}

struct Leaf {
  bool plus = false, minus = false, undetermined = false;
  std::optional<Interval> hull;
};

}  // namespace

CellClassification classify(const RangeModel& model, const Rectangle& domain, double sigma, int m,
                            ClassifyOptions opts) {
  if (opts.refine < 0 || opts.refine > 8) throw DomainError("refine must be in [0, 8]");
  CellClassification cls = make_classification(m, domain, sigma);
  const int threads = detail::resolve_threads(opts.threads);
  const int exm = exp_x(m), eym = exp_y(m);
  const int last = m + 2 * opts.refine;

  // Cells still undetermined at level m, with what their descendants found.
  std::unordered_map<int, Leaf> leaves;

  std::vector<CellIndex> active{{0, 0}};
  for (int k = 0; k <= last && !active.empty(); ++k) {
    const int ex = exp_x(k), ey = exp_y(k);
    const auto ranges = model.cell_ranges(ex, ey, active, threads);
    cls.evaluations += active.size();
    std::vector<CellIndex> next;
    const bool split_x = k % 2 == 0;
    for (std::size_t n = 0; n < active.size(); ++n) {
      const CellIndex c = active[n];
      const Interval r = ranges[n];
      const Label lab = decide(r, sigma);
      auto push_children = [&] {
        if (split_x) {
          next.push_back({2 * c.ix, c.iy});
          next.push_back({2 * c.ix + 1, c.iy});
        } else {
          next.push_back({c.ix, 2 * c.iy});
          next.push_back({c.ix, 2 * c.iy + 1});
        }
      };
      if (k < m) {
        if (lab == Label::Undetermined) {
          push_children();
          continue;
        }
        // Certified ancestor: label every level-m descendant.
        const int dx = exm - ex, dy = eym - ey;
        for (int iy = c.iy << dy; iy < (c.iy + 1) << dy; ++iy) {
          for (int ix = c.ix << dx; ix < (c.ix + 1) << dx; ++ix) {
            cls.labels[cls.index(ix, iy)] = lab;
            cls.ranges[cls.index(ix, iy)] = r;
          }
        }
        continue;
      }
      const int ax = c.ix >> (ex - exm), ay = c.iy >> (ey - eym);
      const int idx = cls.index(ax, ay);
      if (k == m) {
        cls.ranges[idx] = r;
        if (lab != Label::Undetermined) {
          cls.labels[idx] = lab;
          continue;
        }
        leaves[idx];
      }
      Leaf& leaf = leaves[idx];
      if (lab == Label::Undetermined && k < last) {
        push_children();
        continue;
      }
      leaf.hull = leaf.hull ? hull(*leaf.hull, r) : r;
      if (lab == Label::Plus) leaf.plus = true;
      if (lab == Label::Minus) leaf.minus = true;
      if (lab == Label::Undetermined) leaf.undetermined = true;
    }
    active = std::move(next);
  }

  for (const auto& [idx, leaf] : leaves) {
    if (leaf.hull) {
      if (auto t = intersect(*leaf.hull, cls.ranges[idx])) cls.ranges[idx] = *t;
    }
    if (leaf.undetermined || (leaf.plus && leaf.minus)) {
      cls.labels[idx] = Label::Undetermined;
    } else {
      cls.labels[idx] = leaf.plus ? Label::Plus : Label::Minus;
    }
  }
  return cls;
}

CellClassification classify(const CoefficientField& field, double sigma, int m,
                            ClassifyOptions opts) {
  return classify(LegendreRangeModel(field), field.domain(), sigma, m, opts);
}

// ---------------------------------------------------------------------------
// Components

const char* to_string(Region r) {
  switch (r) {
    case Region::PlusRegion: return "PlusRegion";
    case Region::MinusRegion: return "MinusRegion";
    case Region::ZeroRegion: return "ZeroRegion";
    case Region::PlusUnionZero: return "PlusUnionZero";
    case Region::MinusUnionZero: return "MinusUnionZero";
  }
  return "?";
}

const char* to_string(Adjacency a) {
  return a == Adjacency::EdgeOnly ? "EdgeOnly" : "EdgeAndCorner";
}

Adjacency natural_adjacency(Region r) {
  return r == Region::PlusRegion || r == Region::MinusRegion ? Adjacency::EdgeOnly
                                                             : Adjacency::EdgeAndCorner;
}

namespace {

bool in_region(Label l, Region r) {
  switch (r) {
    case Region::PlusRegion: return l == Label::Plus;
    case Region::MinusRegion: return l == Label::Minus;
    case Region::ZeroRegion: return l == Label::Undetermined;
    case Region::PlusUnionZero: return l != Label::Minus;
    case Region::MinusUnionZero: return l != Label::Plus;
  }
  return false;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<int> parent_;
  std::vector<std::uint8_t> rank_;
};

}  // namespace

ComponentSet components(const CellClassification& cls, Region region, Adjacency adjacency) {
  if (adjacency != natural_adjacency(region)) {
    throw AdjacencyMismatch(std::string("region ") + to_string(region) + " requires " +
                            to_string(natural_adjacency(region)) + " adjacency");
  }
  const int nx = cls.nx, ny = cls.ny;
  UnionFind uf(cls.labels.size());
  auto member = [&](int ix, int iy) {
    return ix >= 0 && ix < nx && iy >= 0 && iy < ny && in_region(cls.at(ix, iy), region);
  };
  const bool corners = adjacency == Adjacency::EdgeAndCorner;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      if (!member(ix, iy)) continue;
      const int me = cls.index(ix, iy);
      if (member(ix - 1, iy)) uf.unite(me, cls.index(ix - 1, iy));
      if (member(ix, iy - 1)) uf.unite(me, cls.index(ix, iy - 1));
      if (corners) {
        if (member(ix - 1, iy - 1)) uf.unite(me, cls.index(ix - 1, iy - 1));
        if (member(ix + 1, iy - 1)) uf.unite(me, cls.index(ix + 1, iy - 1));
      }
    }
  }
  ComponentSet out{region, adjacency, {}};
  std::unordered_map<int, int> id;
  for (int k = 0; k < cls.size(); ++k) {
    if (!in_region(cls.labels[k], region)) continue;
    const int root = uf.find(k);
    auto [it, inserted] = id.emplace(root, static_cast<int>(out.components.size()));
    if (inserted) out.components.emplace_back();
    out.components[it->second].push_back(k);
  }
  return out;
}

ComponentSet components(const CellClassification& cls, Region region) {
  return components(cls, region, natural_adjacency(region));
}

bool has_sign_conflict(const CellClassification& cls) {
  for (int iy = 0; iy < cls.ny; ++iy) {
    for (int ix = 0; ix < cls.nx; ++ix) {
      if (cls.at(ix, iy) != Label::Plus) continue;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int jx = ix + dx, jy = iy + dy;
          if (jx < 0 || jy < 0 || jx >= cls.nx || jy >= cls.ny) continue;
          if (cls.at(jx, jy) == Label::Minus) return true;
        }
      }
    }
  }
  return false;
}

double region_volume_upper(const CellClassification& cls, const std::vector<int>& cells) {
  if (cells.empty()) return 0.0;
  return (Interval(static_cast<double>(cells.size())) * Interval(cls.cell_area_upper())).hi();
}

// ---------------------------------------------------------------------------
// Boundary description

namespace {

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  a = a < 0 ? -a : a;
  while (b != 0) {
    const std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a == 0 ? 1 : a;
}

std::int64_t parse_i64(std::string_view s) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw ConfigError("invalid number '" + std::string(s) + "'");
  }
  return v;
}

std::string upper(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return s;
}

}  // namespace

Fraction Fraction::parse(const std::string& s) {
  Fraction f;
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    f.num = parse_i64(std::string_view(s).substr(0, slash));
    f.den = parse_i64(std::string_view(s).substr(slash + 1));
  } else {
    const auto dot = s.find('.');
    if (dot == std::string::npos) {
      f.num = parse_i64(s);
    } else {
      const std::string frac = s.substr(dot + 1);
      if (frac.size() > 15) throw ConfigError("too many decimals in '" + s + "'");
      const std::string digits = s.substr(0, dot) + frac;
      f.num = parse_i64(digits);
      f.den = 1;
      for (std::size_t k = 0; k < frac.size(); ++k) f.den *= 10;
    }
  }
  if (f.den <= 0) throw ConfigError("fraction needs a positive denominator: '" + s + "'");
  const std::int64_t g = gcd64(f.num, f.den);
  f.num /= g;
  f.den /= g;
  return f;
}

int compare(const Fraction& a, const Fraction& b) {
  const __int128 l = static_cast<__int128>(a.num) * b.den;
  const __int128 r = static_cast<__int128>(b.num) * a.den;
  return l < r ? -1 : (l > r ? 1 : 0);
}

BoundarySpec BoundarySpec::all_dirichlet() {
  BoundarySpec b;
  for (auto& s : b.sides) s = {{{0, 1}, {1, 1}, BoundaryKind::Dirichlet}};
  return b;
}

std::vector<BoundarySegment> BoundarySpec::parse_side(const std::string& text) {
  std::istringstream ss(text);
  std::vector<std::string> toks;
  for (std::string t; ss >> t;) toks.push_back(t);
  if (toks.empty() || toks.size() % 2 == 0) {
    throw ConfigError("boundary side must alternate kinds and breakpoints: '" + text + "'");
  }
  auto kind = [&](const std::string& t) {
    const std::string u = upper(t);
    if (u == "D" || u == "DIRICHLET") return BoundaryKind::Dirichlet;
    if (u == "N" || u == "NEUMANN") return BoundaryKind::Neumann;
    throw ConfigError("unknown boundary kind '" + t + "'");
  };
  std::vector<BoundarySegment> segs;
  Fraction from{0, 1};
  for (std::size_t k = 0; k < toks.size(); k += 2) {
    const Fraction to = k + 1 < toks.size() ? Fraction::parse(toks[k + 1]) : Fraction{1, 1};
    segs.push_back({from, to, kind(toks[k])});
    from = to;
  }
  return segs;
}

void BoundarySpec::validate() const {
  for (const auto& segs : sides) {
    if (segs.empty()) throw ConfigError("boundary side without segments");
    if (compare(segs.front().from, {0, 1}) != 0 || compare(segs.back().to, {1, 1}) != 0) {
      throw ConfigError("boundary segments must cover [0, 1]");
    }
    for (std::size_t k = 0; k < segs.size(); ++k) {
      if (compare(segs[k].from, segs[k].to) >= 0) {
        throw ConfigError("boundary breakpoints must be strictly increasing");
      }
      if (k > 0 && compare(segs[k - 1].to, segs[k].from) != 0) {
        throw ConfigError("boundary segments must be contiguous");
      }
    }
  }
}

bool BoundarySpec::is_all_dirichlet() const {
  for (const auto& segs : sides) {
    for (const auto& s : segs) {
      if (s.kind != BoundaryKind::Dirichlet) return false;
    }
  }
  return true;
}

bool BoundarySpec::is_all_neumann() const {
  for (const auto& segs : sides) {
    for (const auto& s : segs) {
      if (s.kind != BoundaryKind::Neumann) return false;
    }
  }
  return true;
}

BoundaryContact boundary_contact(const CellClassification& cls, const std::vector<int>& component,
                                 const BoundarySpec& bc) {
  BoundaryContact out;
  auto check = [&](Side side, int i, int n) {
    const Fraction a{i, n}, b{i + 1, n};
    for (const auto& s : bc.sides[static_cast<int>(side)]) {
      if (s.kind != BoundaryKind::Neumann) continue;
      if (compare(a, s.to) <= 0 && compare(s.from, b) <= 0) out.touches_neumann = true;
      const Fraction lo = compare(a, s.from) >= 0 ? a : s.from;
      const Fraction hi = compare(b, s.to) <= 0 ? b : s.to;
      if (compare(lo, hi) < 0) out.neumann_measure_positive = true;
    }
  };
  for (int idx : component) {
    const int ix = idx % cls.nx, iy = idx / cls.nx;
    if (iy == 0) check(Side::Bottom, ix, cls.nx);
    if (iy == cls.ny - 1) check(Side::Top, ix, cls.nx);
    if (ix == 0) check(Side::Left, iy, cls.ny);
    if (ix == cls.nx - 1) check(Side::Right, iy, cls.ny);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rendering

std::string render_pgm(const CellClassification& cls, int scale) {
  if (scale < 1) throw DomainError("PGM scale must be >= 1");
  const int w = cls.nx * scale, h = cls.ny * scale;
  std::string out = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  out.reserve(out.size() + static_cast<std::size_t>(w) * h);
  for (int row = 0; row < h; ++row) {
    const int iy = cls.ny - 1 - row / scale;
    for (int col = 0; col < w; ++col) {
      switch (cls.at(col / scale, iy)) {
        case Label::Plus: out.push_back(static_cast<char>(255)); break;
        case Label::Minus: out.push_back(static_cast<char>(0)); break;
        case Label::Undetermined: out.push_back(static_cast<char>(128)); break;
      }
    }
  }
  return out;
}

std::string render_svg(const CellClassification& cls, int pixels, bool shade) {
  const double lx = cls.domain.bx - cls.domain.ax, ly = cls.domain.by - cls.domain.ay;
  const double w = pixels, h = pixels * ly / lx;
  const double cw = w / cls.nx, ch = h / cls.ny;
  std::ostringstream s;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.6g\" height=\"%.6g\" "
                "viewBox=\"0 0 %.6g %.6g\">\n",
                w, h, w, h);
  s << buf;
  std::snprintf(buf, sizeof buf,
                "<rect x=\"0\" y=\"0\" width=\"%.6g\" height=\"%.6g\" fill=\"white\" "
                "stroke=\"black\"/>\n",
                w, h);
  s << buf;
  for (int iy = 0; iy < cls.ny; ++iy) {
    for (int ix = 0; ix < cls.nx; ++ix) {
      const Label l = cls.at(ix, iy);
      if (l != Label::Undetermined && !shade) continue;
      const char* fill = l == Label::Undetermined ? "red" : l == Label::Plus ? "#dddddd" : "#888888";
      std::snprintf(buf, sizeof buf,
                    "<rect x=\"%.6g\" y=\"%.6g\" width=\"%.6g\" height=\"%.6g\" fill=\"%s\"/>\n",
                    ix * cw, (cls.ny - 1 - iy) * ch, cw, ch, fill);
      s << buf;
    }
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace nodalcert
