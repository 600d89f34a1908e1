#pragma once

// Finite approximations of X(B, D) = { sum_{j>=1} B^{-j} d_j }, rasters,
// measure estimates, lattice tiling checks and exact membership.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "matradix/exact_linalg.hpp"
#include "matradix/radix_system.hpp"

namespace matradix {

inline constexpr std::uint64_t kDefaultSeed = 20090101;
inline constexpr std::size_t kDefaultCloudCap = std::size_t{1} << 24;

/// Points sum_{j=1..depth} B^{-j} d_j, stored flat (dim doubles per point).
/// Exhaustive enumeration visits words in lexicographic order of digit
/// indices with d_1 most significant.
struct PointCloud {
  std::size_t dim = 0;
  unsigned depth = 0;
  bool sampled = false;
  std::uint64_t seed = kDefaultSeed;
  std::vector<double> coords;
  std::vector<double> lo;
  std::vector<double> hi;

  std::size_t size() const { return dim ? coords.size() / dim : 0; }
  const double* point(std::size_t i) const { return coords.data() + i * dim; }
};

/// Streams the depth-n points without storing them. Returns true when the
/// enumeration was exhaustive, false when |D|^n exceeded `cap` and `cap`
/// uniformly random words were drawn instead.
bool for_each_cloud_point(const RadixSystem& s, unsigned depth, std::size_t cap, std::uint64_t seed,
                          const std::function<void(const double*)>& visit);

PointCloud build_cloud(const RadixSystem& s, unsigned depth, std::size_t cap = kDefaultCloudCap,
                       std::uint64_t seed = kDefaultSeed);

/// Axis-aligned box containing X(B, D), from the support function of the
/// digit set.
void attractor_bounds(const RadixSystem& s, std::vector<double>& lo, std::vector<double>& hi);

/// Smallest depth n with rho(B^{-1})^n R < h / 2.
unsigned default_depth(const RadixSystem& s, double h);

/// Point-count grid with cell i covering origin + h [i, i+1); a cell is
/// occupied when it holds at least one point.
class Raster {
 public:
  Raster() = default;
  Raster(std::vector<double> origin, double h, std::vector<std::size_t> dims);

  std::size_t dim() const { return dims_.size(); }
  const std::vector<double>& origin() const { return origin_; }
  double cell_size() const { return h_; }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t cell_count() const { return counts_.size(); }

  /// Flat index of the cell containing x, or -1 when outside the grid.
  long long cell_of(const double* x) const;
  void mark(const double* x);
  void mark_cell(std::size_t flat) { ++counts_[flat]; }
  bool occupied(std::size_t flat) const { return counts_[flat] != 0; }
  bool occupied_at(const double* x) const;
  std::uint32_t count(std::size_t flat) const { return counts_[flat]; }
  /// Points in the cell containing x, 0 outside the grid.
  std::uint32_t count_at(const double* x) const;
  std::size_t occupied_count() const;
  std::uint64_t point_count() const;
  /// Adds the other raster's counts cell by cell.
  void merge(const Raster& other);

  // Metadata recorded alongside images.
  unsigned depth = 0;
  std::uint64_t seed = kDefaultSeed;
  bool sampled = false;

 private:
  std::vector<double> origin_;
  double h_ = 0;
  std::vector<std::size_t> dims_;
  std::vector<std::uint32_t> counts_;
};

/// Raster of the depth-n cloud over the attractor bounds (one cell margin).
/// depth == 0 selects default_depth.
Raster rasterize(const RadixSystem& s, double h, unsigned depth = 0, std::size_t cap = kDefaultCloudCap,
                 std::uint64_t seed = kDefaultSeed);

double measure_estimate(const Raster& r);

struct TilingReport {
  std::size_t cells = 0;
  std::size_t min_multiplicity = 0;
  std::size_t max_multiplicity = 0;
  double mean_multiplicity = 0;
  // histogram[m] = number of window cells covered exactly m times
  std::vector<std::size_t> histogram;
  // Fraction of window cells whose point count summed over the translates
  // lies within kTilingMassBand of the window average. Close to 1 when the
  // translates cover evenly, whatever the cell fattening at the boundary.
  double mass_uniformity = 0;

  double fraction(std::size_t multiplicity) const;
};

/// Multiplicity of the translates X + gamma, gamma in L, over the window
/// cells. An empty window selects the lattice's HNF fundamental box.
TilingReport tiling_check(const Raster& r, const Lattice& lattice, const std::vector<double>& window_lo = {},
                          const std::vector<double>& window_hi = {});

inline constexpr double kTilingMeanTolerance = 0.05;
inline constexpr double kTilingSingleCoverMin = 0.95;
inline constexpr double kTilingMassBand = 0.25;

/// Mean multiplicity within 1 +- kTilingMeanTolerance and at least
/// kTilingSingleCoverMin of the window covered exactly once.
bool certifies_tiling(const TilingReport& report);

enum class Membership { Inside, Outside, Undecided };

const char* to_string(Membership m);

/// Decides x in X(B, D) for rational x by searching the expansion graph
/// y -> B y - d with ball pruning. Undecided once `node_budget` states have
/// been expanded.
Membership membership(const RadixSystem& s, const RatVector& x, std::size_t node_budget = 1u << 20);

void write_pgm(const Raster& r, const std::string& path);

/// JSON sidecar with origin, h, dims, depth and seed.
std::string raster_metadata_json(const Raster& r);

/// Fraction of occupied cells claimed by two or more branches tau_d(X).
double branch_overlap_fraction(const RadixSystem& s, double h, unsigned depth = 0);

}  // namespace matradix
