#ifndef SRBLAB_COMMON_HPP
#define SRBLAB_COMMON_HPP

#include <Eigen/Core>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace srblab {

// Points and Jacobians are stored with fixed capacity 3; only the leading
// d entries/rows/cols of a d-dimensional model are meaningful, the rest
// stay at 0 (identity for Jacobians).
using Point = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline Point make_point(double x, double y = 0.0, double z = 0.0) {
  return Point(x, y, z);
}

/// Counter-based deterministic RNG (splitmix64). Identical streams on every
/// platform, which is what makes experiment outputs byte-reproducible.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
};

/// Derive an independent stream from (seed, index) pairs, used to make
/// per-cell / per-orbit work order-independent.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 g(seed ^ (0x632be59bd9b4e019ULL * (index + 1)));
  return g.next();
}

/// R2 low-discrepancy sequence (generalized golden ratio) in up to 3
/// dimensions; used for stratified in-cell sampling.
struct R2Sequence {
  std::array<double, 3> alpha{};
  std::array<double, 3> offset{};
  int dim;

  R2Sequence(int d, std::uint64_t seed) : dim(d) {
    // g solves g^(d+1) = g + 1.
    double g = 1.0;
    for (int it = 0; it < 64; ++it) g = std::pow(1.0 + g, 1.0 / (d + 1));
    double a = 1.0;
    SplitMix64 rng(seed);
    for (int i = 0; i < d; ++i) {
      a /= g;
      alpha[i] = a;
      offset[i] = rng.uniform01();
    }
  }

  std::array<double, 3> point(std::int64_t n) const {
    std::array<double, 3> u{};
    for (int i = 0; i < dim; ++i) {
      double v = offset[i] + alpha[i] * static_cast<double>(n + 1);
      u[i] = v - std::floor(v);
    }
    return u;
  }
};

inline int thread_count() {
  if (const char* env = std::getenv("SRBLAB_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Deterministic parallel loop: the body writes results into per-index
/// slots, so the schedule never changes the output.
inline void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body) {
  int nt = thread_count();
  if (nt <= 1 || n < 2) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> workers;
  std::atomic<std::int64_t> counter{0};
  const std::int64_t chunk = std::max<std::int64_t>(1, n / (8 * nt));
  auto work = [&]() {
    for (;;) {
      std::int64_t begin = counter.fetch_add(chunk);
      if (begin >= n) return;
      std::int64_t end = std::min(n, begin + chunk);
      for (std::int64_t i = begin; i < end; ++i) body(i);
    }
  };
  workers.reserve(nt);
  for (int t = 0; t < nt; ++t) workers.emplace_back(work);
  for (auto& w : workers) w.join();
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int n = 0;
};

/// Ordinary least squares y = slope*x + intercept.
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need at least two points");
  LineFit f;
  f.n = static_cast<int>(x.size());
  double mx = 0, my = 0;
  for (int i = 0; i < f.n; ++i) { mx += x[i]; my += y[i]; }
  mx /= f.n; my /= f.n;
  double sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < f.n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0;
  for (int i = 0; i < f.n; ++i) {
    double r = y[i] - (f.slope * x[i] + f.intercept);
    ss_res += r * r;
  }
  f.r_squared = (syy > 0.0) ? 1.0 - ss_res / syy : 1.0;
  return f;
}

/// Shortest round-trip decimal form, locale independent ('.' separator).
inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

/// Non-fatal diagnostics some operations attach to their results.
struct Warnings {
  std::vector<std::string> messages;
  void add(std::string m) { messages.push_back(std::move(m)); }
  bool empty() const { return messages.empty(); }
};

}  // namespace srblab

#endif
