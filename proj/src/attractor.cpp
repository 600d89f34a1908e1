#include "matradix/attractor.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <unordered_map>

#include "matradix/errors.hpp"

namespace matradix {

namespace {

// B^{-j} d as doubles for j = 1..depth, indexed [j-1][digit].
std::vector<std::vector<std::vector<double>>> scaled_digits(const RadixSystem& s, unsigned depth) {
  std::vector<std::vector<std::vector<double>>> out(depth);
  std::vector<RatVector> current;
  for (const auto& dg : s.digits()) current.push_back(to_rational(dg));
  for (unsigned j = 0; j < depth; ++j) {
    for (auto& v : current) v = s.inverse().apply(v);
    for (const auto& v : current) out[j].push_back(to_double(v));
  }
  return out;
}

struct RatVectorHash {
  std::size_t operator()(const RatVector& v) const noexcept {
    std::size_t h = 0x84222325cbf29ce4ull;
    for (const auto& x : v) {
      const auto a = static_cast<std::size_t>(mpz_get_si(x.get_num_mpz_t()));
      const auto b = static_cast<std::size_t>(mpz_get_si(x.get_den_mpz_t()));
      h ^= a + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h ^= b + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

}  // namespace

bool for_each_cloud_point(const RadixSystem& s, unsigned depth, std::size_t cap, std::uint64_t seed,
                          const std::function<void(const double*)>& visit) {
  if (depth == 0) throw Error(ErrorKind::InvalidConfig, "cloud depth must be at least 1");
  const std::size_t d = s.dim();
  const std::size_t n = s.digit_count();
  const auto table = scaled_digits(s, depth);
  const long double total = std::pow(static_cast<long double>(n), static_cast<long double>(depth));

  if (total <= static_cast<long double>(cap)) {
    // partial[j] holds sum_{i<=j} B^{-i} d_i along the current word.
    std::vector<std::vector<double>> partial(depth + 1, std::vector<double>(d, 0.0));
    std::vector<std::size_t> digit(depth, 0);
    unsigned level = 0;
    while (true) {
      if (level == depth) {
        visit(partial[depth].data());
        // advance to the next word
        while (level > 0 && digit[level - 1] + 1 == n) {
          digit[level - 1] = 0;
          --level;
        }
        if (level == 0) break;
        ++digit[level - 1];
        --level;
      }
      const auto& v = table[level][digit[level]];
      for (std::size_t k = 0; k < d; ++k) partial[level + 1][k] = partial[level][k] + v[k];
      ++level;
    }
    return true;
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<double> x(d);
  for (std::size_t i = 0; i < cap; ++i) {
    std::fill(x.begin(), x.end(), 0.0);
    for (unsigned j = 0; j < depth; ++j) {
      const auto& v = table[j][pick(rng)];
      for (std::size_t k = 0; k < d; ++k) x[k] += v[k];
    }
    visit(x.data());
  }
  return false;
}

PointCloud build_cloud(const RadixSystem& s, unsigned depth, std::size_t cap, std::uint64_t seed) {
  PointCloud cloud;
  cloud.dim = s.dim();
  cloud.depth = depth;
  cloud.seed = seed;
  cloud.lo.assign(cloud.dim, std::numeric_limits<double>::infinity());
  cloud.hi.assign(cloud.dim, -std::numeric_limits<double>::infinity());
  cloud.sampled = !for_each_cloud_point(s, depth, cap, seed, [&](const double* x) {
    for (std::size_t k = 0; k < cloud.dim; ++k) {
      cloud.coords.push_back(x[k]);
      cloud.lo[k] = std::min(cloud.lo[k], x[k]);
      cloud.hi[k] = std::max(cloud.hi[k], x[k]);
    }
  });
  return cloud;
}

void attractor_bounds(const RadixSystem& s, std::vector<double>& lo, std::vector<double>& hi) {
  const std::size_t d = s.dim();
  lo.assign(d, 0.0);
  hi.assign(d, 0.0);
  const EscapeBound& b = s.bound();
  std::vector<RatVector> current;
  for (const auto& dg : s.digits()) current.push_back(to_rational(dg));
  // Exact B^{-j} d for the first terms, then a geometric tail bound.
  constexpr unsigned kExactTerms = 24;
  for (unsigned j = 1; j <= kExactTerms; ++j) {
    for (auto& c : current) c = s.inverse().apply(c);
    for (std::size_t k = 0; k < d; ++k) {
      double mn = std::numeric_limits<double>::infinity();
      double mx = -mn;
      for (const auto& c : current) {
        const double val = c[k].get_d();
        mn = std::min(mn, val);
        mx = std::max(mx, val);
      }
      lo[k] += mn;
      hi[k] += mx;
    }
  }
  // ||sum_{j>J} B^{-j} d_j|| <= R c^J.
  const double tail = b.radius * std::pow(b.contraction, kExactTerms);
  for (std::size_t k = 0; k < d; ++k) {
    lo[k] -= tail;
    hi[k] += tail;
  }
}

unsigned default_depth(const RadixSystem& s, double h) {
  double min_modulus = std::numeric_limits<double>::infinity();
  for (const auto& l : eigenvalues(s.base())) min_modulus = std::min(min_modulus, std::abs(l));
  const double rho = 1.0 / min_modulus;
  const double r = s.escape_radius();
  unsigned n = 1;
  while (std::pow(rho, n) * r >= h / 2) ++n;
  return n;
}

// ---------------------------------------------------------------- raster

Raster::Raster(std::vector<double> origin, double h, std::vector<std::size_t> dims)
    : origin_(std::move(origin)), h_(h), dims_(std::move(dims)) {
  if (h_ <= 0) throw Error(ErrorKind::InvalidConfig, "cell size must be positive");
  std::size_t total = 1;
  for (auto n : dims_) total *= n;
  counts_.assign(total, 0);
}

long long Raster::cell_of(const double* x) const {
  long long flat = 0;
  for (std::size_t k = dims_.size(); k-- > 0;) {
    const double t = std::floor((x[k] - origin_[k]) / h_);
    if (t < 0 || t >= static_cast<double>(dims_[k])) return -1;
    flat = flat * static_cast<long long>(dims_[k]) + static_cast<long long>(t);
  }
  return flat;
}

void Raster::mark(const double* x) {
  const long long c = cell_of(x);
  if (c >= 0) ++counts_[static_cast<std::size_t>(c)];
}

bool Raster::occupied_at(const double* x) const {
  const long long c = cell_of(x);
  return c >= 0 && counts_[static_cast<std::size_t>(c)] != 0;
}

std::uint32_t Raster::count_at(const double* x) const {
  const long long c = cell_of(x);
  return c >= 0 ? counts_[static_cast<std::size_t>(c)] : 0;
}

std::size_t Raster::occupied_count() const {
  return static_cast<std::size_t>(counts_.size() - std::count(counts_.begin(), counts_.end(), 0u));
}

std::uint64_t Raster::point_count() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

void Raster::merge(const Raster& other) {
  if (other.dims_ != dims_) throw Error(ErrorKind::DimensionMismatch, "raster shapes differ");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

namespace {

// Grid aligned to multiples of h, one spare cell on each side.
Raster empty_raster_for(const RadixSystem& s, double h) {
  std::vector<double> lo;
  std::vector<double> hi;
  attractor_bounds(s, lo, hi);
  std::vector<double> origin(s.dim());
  std::vector<std::size_t> dims(s.dim());
  for (std::size_t k = 0; k < s.dim(); ++k) {
    origin[k] = (std::floor(lo[k] / h) - 1) * h;
    dims[k] = static_cast<std::size_t>(std::ceil((hi[k] - origin[k]) / h)) + 1;
  }
  return Raster(origin, h, dims);
}

}  // namespace

Raster rasterize(const RadixSystem& s, double h, unsigned depth, std::size_t cap, std::uint64_t seed) {
  if (depth == 0) depth = default_depth(s, h);
  Raster r = empty_raster_for(s, h);
  r.depth = depth;
  r.seed = seed;
  r.sampled = !for_each_cloud_point(s, depth, cap, seed, [&](const double* x) { r.mark(x); });
  return r;
}

double measure_estimate(const Raster& r) {
  return static_cast<double>(r.occupied_count()) * std::pow(r.cell_size(), static_cast<double>(r.dim()));
}

double TilingReport::fraction(std::size_t multiplicity) const {
  if (cells == 0 || multiplicity >= histogram.size()) return 0.0;
  return static_cast<double>(histogram[multiplicity]) / static_cast<double>(cells);
}

TilingReport tiling_check(const Raster& r, const Lattice& lattice, const std::vector<double>& window_lo,
                          const std::vector<double>& window_hi) {
  const std::size_t d = r.dim();
  if (lattice.dim() != d) throw Error(ErrorKind::DimensionMismatch, "lattice and raster dimensions differ");
  const double h = r.cell_size();
  std::vector<double> wlo = window_lo;
  std::vector<double> whi = window_hi;
  if (wlo.empty()) {
    wlo.assign(d, 0.0);
    whi.assign(d, 0.0);
    for (std::size_t k = 0; k < d; ++k) whi[k] = lattice.basis()(k, k).get_d() / lattice.denom().get_d();
  }
  std::vector<double> rlo(d);
  std::vector<double> rhi(d);
  for (std::size_t k = 0; k < d; ++k) {
    rlo[k] = r.origin()[k];
    rhi[k] = r.origin()[k] + h * static_cast<double>(r.dims()[k]);
  }
  // Every translate that can reach the window.
  std::vector<double> glo(d);
  std::vector<double> ghi(d);
  for (std::size_t k = 0; k < d; ++k) {
    glo[k] = wlo[k] - rhi[k];
    ghi[k] = whi[k] - rlo[k];
  }
  std::vector<std::vector<double>> gammas;
  lattice.for_each_point_in_box(glo, ghi, [&](const RatVector& g) { gammas.push_back(to_double(g)); });

  // Window cells are cells of the global h grid whose centres lie in the window.
  std::vector<long long> first(d);
  std::vector<long long> count(d);
  for (std::size_t k = 0; k < d; ++k) {
    first[k] = static_cast<long long>(std::ceil(wlo[k] / h - 0.5));
    const long long last = static_cast<long long>(std::ceil(whi[k] / h - 0.5)) - 1;
    count[k] = std::max(0LL, last - first[k] + 1);
  }
  TilingReport report;
  report.min_multiplicity = std::numeric_limits<std::size_t>::max();
  std::vector<long long> idx(d, 0);
  std::vector<double> p(d);
  std::vector<double> q(d);
  double total = 0;
  std::vector<double> mass;
  bool done = std::any_of(count.begin(), count.end(), [](long long c) { return c == 0; });
  while (!done) {
    for (std::size_t k = 0; k < d; ++k) p[k] = (static_cast<double>(first[k] + idx[k]) + 0.5) * h;
    std::size_t m = 0;
    double cell_mass = 0;
    for (const auto& g : gammas) {
      for (std::size_t k = 0; k < d; ++k) q[k] = p[k] - g[k];
      const std::uint32_t c = r.count_at(q.data());
      if (c) ++m;
      cell_mass += c;
    }
    mass.push_back(cell_mass);
    if (report.histogram.size() <= m) report.histogram.resize(m + 1, 0);
    ++report.histogram[m];
    report.min_multiplicity = std::min(report.min_multiplicity, m);
    report.max_multiplicity = std::max(report.max_multiplicity, m);
    total += static_cast<double>(m);
    ++report.cells;
    std::size_t k = 0;
    while (k < d && ++idx[k] == count[k]) idx[k++] = 0;
    done = k == d;
  }
  if (report.cells == 0) report.min_multiplicity = 0;
  report.mean_multiplicity = report.cells ? total / static_cast<double>(report.cells) : 0.0;
  if (!mass.empty()) {
    const double avg = std::accumulate(mass.begin(), mass.end(), 0.0) / static_cast<double>(mass.size());
    const auto even = std::count_if(mass.begin(), mass.end(),
                                    [&](double m) { return std::abs(m - avg) <= kTilingMassBand * avg; });
    report.mass_uniformity = static_cast<double>(even) / static_cast<double>(mass.size());
  }
  return report;
}

bool certifies_tiling(const TilingReport& report) {
  return std::abs(report.mean_multiplicity - 1.0) <= kTilingMeanTolerance &&
         report.fraction(1) >= kTilingSingleCoverMin;
}

// ---------------------------------------------------------------- membership

const char* to_string(Membership m) {
  switch (m) {
    case Membership::Inside: return "inside";
    case Membership::Outside: return "outside";
    case Membership::Undecided: return "undecided";
  }
  return "undecided";
}

Membership membership(const RadixSystem& s, const RatVector& x, std::size_t node_budget) {
  if (x.size() != s.dim()) throw Error(ErrorKind::DimensionMismatch, "point dimension");
  const double r2 = s.escape_radius() * s.escape_radius() * (1 + 1e-9);
  auto inside_ball = [&](const RatVector& y) {
    const double n = norm2(y);
    return n * n <= r2;
  };
  if (!inside_ball(x)) return Membership::Outside;

  enum Color : std::uint8_t { Gray = 1, Alive = 2, Dead = 3 };
  std::unordered_map<RatVector, Color, RatVectorHash> color;
  struct Frame {
    RatVector node;
    std::vector<RatVector> children;
    std::size_t next = 0;
    bool alive = false;
  };
  auto expand = [&](const RatVector& y) {
    std::vector<RatVector> kids;
    const RatVector by = s.base() * y;
    for (const auto& dg : s.digits()) {
      RatVector c = by - to_rational(dg);
      if (inside_ball(c)) kids.push_back(std::move(c));
    }
    std::sort(kids.begin(), kids.end(), [](const RatVector& a, const RatVector& b) { return norm2(a) < norm2(b); });
    return kids;
  };

  std::size_t expanded = 0;
  std::vector<Frame> stack;
  stack.push_back(Frame{x, expand(x)});
  color[x] = Gray;
  ++expanded;
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.alive || top.next == top.children.size()) {
      const bool alive = top.alive;
      color[top.node] = alive ? Alive : Dead;
      stack.pop_back();
      if (stack.empty()) return alive ? Membership::Inside : Membership::Outside;
      if (alive) stack.back().alive = true;
      continue;
    }
    RatVector child = top.children[top.next++];
    auto it = color.find(child);
    if (it != color.end()) {
      // A grey child closes a cycle through the current path.
      if (it->second == Gray || it->second == Alive) top.alive = true;
      continue;
    }
    if (++expanded > node_budget) return Membership::Undecided;
    color[child] = Gray;
    auto kids = expand(child);
    stack.push_back(Frame{std::move(child), std::move(kids)});
  }
  return Membership::Undecided;
}

// ---------------------------------------------------------------- output

void write_pgm(const Raster& r, const std::string& path) {
  if (r.dim() < 1 || r.dim() > 2) throw Error(ErrorKind::DimensionMismatch, "PGM output needs a 1- or 2-dimensional raster");
  const std::size_t width = r.dims()[0];
  const std::size_t height = r.dim() == 2 ? r.dims()[1] : 1;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "P5\n" << width << ' ' << height << "\n255\n";
  std::vector<char> row(width);
  for (std::size_t rr = 0; rr < height; ++rr) {
    const std::size_t y = height - 1 - rr;
    for (std::size_t x = 0; x < width; ++x) row[x] = r.occupied(y * width + x) ? char(0) : char(255);
    out.write(row.data(), static_cast<std::streamsize>(width));
  }
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

std::string raster_metadata_json(const Raster& r) {
  nlohmann::json j;
  j["origin"] = r.origin();
  j["h"] = r.cell_size();
  j["dims"] = r.dims();
  j["depth"] = r.depth;
  j["seed"] = r.seed;
  j["sampled"] = r.sampled;
  j["occupied"] = r.occupied_count();
  j["measure"] = measure_estimate(r);
  return j.dump(2);
}

double branch_overlap_fraction(const RadixSystem& s, double h, unsigned depth) {
  if (depth == 0) depth = default_depth(s, h);
  const Raster shape = empty_raster_for(s, h);
  std::vector<std::uint8_t> claims(shape.cell_count(), 0);
  const std::size_t d = s.dim();
  const std::size_t n = s.digit_count();
  std::vector<std::vector<double>> binv(d, std::vector<double>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) binv[i][j] = s.inverse().adjugate()(i, j).get_d() / s.inverse().determinant().get_d();
  // Branch t marks tau_t applied to the depth n-1 cloud; a cell counts once per branch.
  for (std::size_t t = 0; t < n; ++t) {
    Raster branch = shape;
    const auto dg = to_double(s.digit(t));
    std::vector<double> y(d);
    std::vector<double> z(d);
    for_each_cloud_point(s, depth > 1 ? depth - 1 : 1, kDefaultCloudCap, kDefaultSeed, [&](const double* x) {
      for (std::size_t k = 0; k < d; ++k) y[k] = x[k] + dg[k];
      for (std::size_t i = 0; i < d; ++i) {
        z[i] = 0;
        for (std::size_t k = 0; k < d; ++k) z[i] += binv[i][k] * y[k];
      }
      branch.mark(z.data());
    });
    for (std::size_t c = 0; c < claims.size(); ++c)
      if (branch.occupied(c) && claims[c] < 255) ++claims[c];
  }
  std::size_t occupied = 0;
  std::size_t shared = 0;
  for (auto c : claims) {
    if (c) ++occupied;
    if (c > 1) ++shared;
  }
  return occupied ? static_cast<double>(shared) / static_cast<double>(occupied) : 0.0;
}

}  // namespace matradix
