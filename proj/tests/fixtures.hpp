#pragma once

// Test fixtures built independently of the solver module.

#include <cmath>
#include <functional>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "nodalcert/basis.hpp"
#include "nodalcert/grid.hpp"

namespace fixtures {

// H^1_0 projection onto phi_1..phi_mu of a function on [0, 1] vanishing at
// both ends, given its derivative. The basis derivatives -P_n(2x - 1) are
// orthogonal with norm^2 1/(2n+1), so c_n = (2n+1) * int f' phi_n'.
// Composite Simpson with many nodes is plenty for smooth f'.
inline std::vector<double> project_1d(const std::function<double(double)>& dfdx, int mu,
                                      int nodes = 20000) {
  std::vector<double> c(mu, 0.0);
  const double h = 1.0 / nodes;
  for (int k = 0; k <= nodes; ++k) {
    const double x = k * h;
    const double w = (k == 0 || k == nodes) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    const auto b = nodalcert::basis_values(mu, x);
    const double d = dfdx(x);
    for (int n = 0; n < mu; ++n) c[n] += w * d * b.dphi[n];
  }
  for (int n = 0; n < mu; ++n) c[n] *= (2.0 * (n + 1) + 1) * h / 3.0;
  return c;
}

inline nodalcert::CoefficientField tensor_field(const std::vector<double>& a,
                                                const std::vector<double>& b,
                                                nodalcert::Rectangle d = nodalcert::Rectangle::unit()) {
  const int mu = static_cast<int>(a.size());
  std::vector<double> c(static_cast<std::size_t>(mu) * mu);
  for (int i = 0; i < mu; ++i) {
    for (int j = 0; j < mu; ++j) c[i * mu + j] = a[i] * b[j];
  }
  return nodalcert::CoefficientField(mu, c, d);
}

// Approximation of sin(kx pi x) sin(ky pi y) on the unit square.
inline nodalcert::CoefficientField sine_field(int kx, int ky, int mu) {
  const double pi = 3.14159265358979323846;
  auto dx = [&](double x) { return kx * pi * std::cos(kx * pi * x); };
  auto dy = [&](double y) { return ky * pi * std::cos(ky * pi * y); };
  return tensor_field(project_1d(dx, mu), project_1d(dy, mu));
}

// Random field with coefficients decaying like 1/(ij).
inline nodalcert::CoefficientField random_field(std::mt19937_64& rng, int mu,
                                                nodalcert::Rectangle d = nodalcert::Rectangle::unit()) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> c(static_cast<std::size_t>(mu) * mu);
  for (int i = 1; i <= mu; ++i) {
    for (int j = 1; j <= mu; ++j) c[(i - 1) * mu + (j - 1)] = n(rng) / (i * j);
  }
  return nodalcert::CoefficientField(mu, c, d);
}

// Field that is the same constant on every cell. Nonzero constants are not
// representable in the zero-trace basis, so classification tests use this.
class ConstantModel final : public nodalcert::RangeModel {
 public:
  explicit ConstantModel(double c) : c_(c) {}
  std::vector<nodalcert::Interval> cell_ranges(int, int, const std::vector<nodalcert::CellIndex>& cells,
                                               int) const override {
    return std::vector<nodalcert::Interval>(cells.size(), nodalcert::Interval(c_));
  }

 private:
  double c_;
};

// Classification from a picture: rows top first, '+' Plus, '-' Minus,
// '0' Undetermined. Ranges are [0.5, 1], [-1, -0.5] and [-0.1, 0.1].
inline nodalcert::CellClassification picture(const std::vector<std::string>& rows, int m,
                                             nodalcert::Rectangle domain = nodalcert::Rectangle::unit(),
                                             double sigma = 0.0) {
  using nodalcert::Interval;
  using nodalcert::Label;
  auto cls = nodalcert::make_classification(m, domain, sigma);
  if (static_cast<int>(rows.size()) != cls.ny) throw std::invalid_argument("row count");
  for (int r = 0; r < cls.ny; ++r) {
    if (static_cast<int>(rows[r].size()) != cls.nx) throw std::invalid_argument("row width");
    const int iy = cls.ny - 1 - r;
    for (int ix = 0; ix < cls.nx; ++ix) {
      const int idx = cls.index(ix, iy);
      switch (rows[r][ix]) {
        case '+': cls.labels[idx] = Label::Plus; cls.ranges[idx] = Interval(0.5, 1.0); break;
        case '-': cls.labels[idx] = Label::Minus; cls.ranges[idx] = Interval(-1.0, -0.5); break;
        case '0': cls.labels[idx] = Label::Undetermined; cls.ranges[idx] = Interval(-0.1, 0.1); break;
        default: throw std::invalid_argument("bad picture character");
      }
    }
  }
  return cls;
}

// Breadth-first flood fill, written independently of the union-find.
inline int flood_fill_count(const std::vector<nodalcert::Label>& labels, int nx, int ny,
                     const std::function<bool(nodalcert::Label)>& member, bool corners) {
  std::vector<char> seen(labels.size(), 0);
  int count = 0;
  for (int start = 0; start < nx * ny; ++start) {
    if (seen[start] || !member(labels[start])) continue;
    ++count;
    std::queue<int> q;
    q.push(start);
    seen[start] = 1;
    while (!q.empty()) {
      const int c = q.front();
      q.pop();
      const int cx = c % nx, cy = c / nx;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          if (!corners && dx != 0 && dy != 0) continue;
          const int x = cx + dx, y = cy + dy;
          if (x < 0 || y < 0 || x >= nx || y >= ny) continue;
          const int k = y * nx + x;
          if (!seen[k] && member(labels[k])) {
            seen[k] = 1;
            q.push(k);
          }
        }
      }
    }
  }
  return count;
}

// 16 x 16 sign pictures (top row first) with the topologies of the three
// Allen-Cahn solution types: split, quadrant pattern, bump in a ring.
inline const std::vector<std::string> kTypeA = {
    "-----0++++0-----", "-----0++++0-----", "-----0++++0-----", "-----0++++0-----",
    "-----0++++0-----", "-----0++++0-----", "-----0++++0-----", "-----0++++0-----",
    "-----0++++0-----", "-----0++++0-----", "-----0++++0-----", "-----0++++0-----",
    "-----000000-----", "-------00-------", "-------00-------", "-------00-------",
};
inline const std::vector<std::string> kTypeB = {
    "+++++++00-------", "+++++++00-------", "+++++++00-------", "+++++++00-------",
    "+++++++00-------", "+++++++00-------", "+++++++00-------", "0000000000000000",
    "0000000000000000", "-------00+++++++", "-------00+++++++", "-------00+++++++",
    "-------00+++++++", "-------00+++++++", "-------00+++++++", "-------00+++++++",
};
inline const std::vector<std::string> kTypeC = {
    "----------------", "----------------", "----------------", "-----000000-----",
    "----00++++00----", "----0++++++0----", "----0++++++0----", "----0++++++0----",
    "----0++++++0----", "----0++++++0----", "----00++++00----", "-----000000-----",
    "----------------", "----------------", "----------------", "----------------",
};
// Three Omega_0 components; the middle one reaches the top edge.
inline const std::vector<std::string> kMixed = {
    "++++++++00++++++", "++++++++00++++++", "++++++++00++++++", "++++++++00++++++",
    "++++++++00++++++", "++++++++00++++++", "++++++++++++++++", "++++++++++++++++",
    "++++++++++++++++", "+0000+++++++000+", "+0--0+++++++000+", "+0--0+++++++000+",
    "+0000+++++++++++", "++++++++++++++++", "++++++++++++++++", "++++++++++++++++",
};

}  // namespace fixtures
