#pragma once

#include <charconv>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pricegame {

using Vec = std::vector<double>;

/// Malformed input document or expression source.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Structurally valid input that violates a documented precondition.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A point lies outside the domain an operation is defined on.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An instance with no feasible point where one is required (e.g. empty M(x)).
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Expression evaluation produced a non-finite value.
struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An enumeration would exceed the configured cell budget.
struct BudgetError : std::runtime_error {
  std::size_t required;
  std::size_t budget;
  BudgetError(std::string msg, std::size_t required_, std::size_t budget_)
      : std::runtime_error(std::move(msg)), required(required_), budget(budget_) {}
};

/// Deterministic RNG: splitmix64 stream with bias-free bounded draws.
/// Sequence is pinned by this implementation, not by the standard library,
/// so identical seeds reproduce identical draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, n). n must be positive.
  std::size_t bounded(std::size_t n) {
    // rejection sampling on the top bits; bias-free
    const std::uint64_t bound = n;
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return static_cast<std::size_t>(r % bound);
    }
  }

  /// Uniform in [0, 1).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi].
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

 private:
  std::uint64_t state_;
};

/// Shortest round-trip decimal form, locale independent.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

/// "(a, b, c)" with shortest round-trip coordinates.
inline std::string format_vec(std::span<const double> v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_double(v[i]);
  }
  s += ")";
  return s;
}

inline double sup_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double x = a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
    if (x > d) d = x;
  }
  return d;
}

}  // namespace pricegame
