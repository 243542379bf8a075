#pragma once

// Dyadic cell classification, connected components, volumes and boundary
// contact.
//
// Level k of the dyadic hierarchy is a 2^ceil(k/2) x 2^floor(k/2) grid of
// congruent cells in reference coordinates; going from an even level to the
// next splits x, from an odd level splits y. Cells are indexed iy * nx + ix
// with iy = 0 the bottom row.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nodalcert/basis.hpp"
#include "nodalcert/interval.hpp"

namespace nodalcert {

enum class Label : std::uint8_t { Minus = 0, Undetermined = 1, Plus = 2 };

struct CellIndex {
  int ix = 0, iy = 0;
  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

// Range enclosures of a field over dyadic reference cells.
class RangeModel {
 public:
  virtual ~RangeModel() = default;
  // Enclosure of the field on each listed cell of the 2^ex x 2^ey reference
  // grid, in the same order.
  [[nodiscard]] virtual std::vector<Interval> cell_ranges(int ex, int ey,
                                                          const std::vector<CellIndex>& cells,
                                                          int threads) const = 0;
};

class LegendreRangeModel final : public RangeModel {
 public:
  explicit LegendreRangeModel(const CoefficientField& field) : field_(field) {}
  [[nodiscard]] std::vector<Interval> cell_ranges(int ex, int ey,
                                                  const std::vector<CellIndex>& cells,
                                                  int threads) const override;

 private:
  const CoefficientField& field_;
};

// Exact dyadic reference interval [i 2^-e, (i + 1) 2^-e].
Interval dyadic_interval(int i, int e);

struct ClassifyOptions {
  // Extra quad bisections tried below level m for cells that stay
  // undetermined there.
  int refine = 1;
  // 0 = use NODALCERT_THREADS or the hardware concurrency.
  int threads = 0;
};

struct CellClassification {
  int m = 0;
  int nx = 1, ny = 1;
  double sigma = 0.0;
  Rectangle domain;
  std::vector<Label> labels;
  // Enclosure of the field on each cell (from the level that decided it).
  std::vector<Interval> ranges;
  std::uint64_t evaluations = 0;

  [[nodiscard]] int size() const { return nx * ny; }
  [[nodiscard]] int index(int ix, int iy) const { return iy * nx + ix; }
  [[nodiscard]] Label at(int ix, int iy) const { return labels[index(ix, iy)]; }
  // Physical rectangle of a cell (nearest-rounded corners).
  [[nodiscard]] Rectangle cell_rect(int idx) const;
  // Upper bound on the area of one cell.
  [[nodiscard]] double cell_area_upper() const;
  [[nodiscard]] int count(Label l) const;
};

// Allocates an nx x ny classification (m is log2 of the cell count) with all
// cells Undetermined and unbounded ranges; used to build fixtures.
CellClassification make_classification(int m, Rectangle domain, double sigma);

int grid_nx(int m);
int grid_ny(int m);

// Throws DomainError for sigma < 0 or non-finite, m outside [0, 26].
CellClassification classify(const CoefficientField& field, double sigma, int m,
                            ClassifyOptions opts = {});
CellClassification classify(const RangeModel& model, const Rectangle& domain, double sigma, int m,
                            ClassifyOptions opts = {});

enum class Region { PlusRegion, MinusRegion, ZeroRegion, PlusUnionZero, MinusUnionZero };
enum class Adjacency { EdgeOnly, EdgeAndCorner };

const char* to_string(Region r);
const char* to_string(Adjacency a);

// Adjacency that matches the topology of the region: open regions use
// edges, closed ones edges and corners.
Adjacency natural_adjacency(Region r);

struct ComponentSet {
  Region region;
  Adjacency adjacency;
  // Each component lists sorted cell indices; components are ordered by
  // their smallest cell index.
  std::vector<std::vector<int>> components;
  [[nodiscard]] int count() const { return static_cast<int>(components.size()); }
};

// Throws AdjacencyMismatch when the adjacency does not match the region.
ComponentSet components(const CellClassification& cls, Region region, Adjacency adjacency);
ComponentSet components(const CellClassification& cls, Region region);

// True when a Plus cell touches a Minus cell (edge or corner). Sound
// enclosures of a continuous field never produce this.
bool has_sign_conflict(const CellClassification& cls);

// Upper bound on the measure of the union of the given cells.
double region_volume_upper(const CellClassification& cls, const std::vector<int>& cells);

// Exact rational number num/den, den > 0.
struct Fraction {
  std::int64_t num = 0, den = 1;
  static Fraction parse(const std::string& s);  // "3/8", "0.375", "1"
  [[nodiscard]] double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};
int compare(const Fraction& a, const Fraction& b);

enum class BoundaryKind { Dirichlet, Neumann };
enum class Side { Bottom = 0, Right = 1, Top = 2, Left = 3 };

struct BoundarySegment {
  Fraction from, to;  // parameter along the side in [0, 1]
  BoundaryKind kind;
};

// Parameter along Bottom and Top is the reference x coordinate; along Left
// and Right the reference y coordinate.
struct BoundarySpec {
  std::array<std::vector<BoundarySegment>, 4> sides;

  static BoundarySpec all_dirichlet();
  // "D", "N", or alternating kinds and breakpoints such as "D 1/2 N".
  // Throws ConfigError.
  static std::vector<BoundarySegment> parse_side(const std::string& text);
  // Throws ConfigError unless every side is covered exactly once.
  void validate() const;
  [[nodiscard]] bool is_all_dirichlet() const;
  [[nodiscard]] bool is_all_neumann() const;
};

struct BoundaryContact {
  bool touches_neumann = false;
  bool neumann_measure_positive = false;
};

BoundaryContact boundary_contact(const CellClassification& cls, const std::vector<int>& component,
                                 const BoundarySpec& bc);

// Rendering: PGM (P5) with Plus = 255, Minus = 0, Undetermined = 128, top
// row first, scale x scale pixels per cell; SVG with a red square per
// Undetermined cell and, with shade, light/dark gray Plus/Minus squares.
std::string render_pgm(const CellClassification& cls, int scale = 1);
std::string render_svg(const CellClassification& cls, int pixels = 512, bool shade = false);

}  // namespace nodalcert
