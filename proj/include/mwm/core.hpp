#pragma once

#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace mwm {

using VertexId = int;
using EdgeId = int;
using BlossomId = int;
using Weight = std::int64_t;  // exact quantities, in quantum units where dual-related

constexpr VertexId kNoVertex = -1;
constexpr EdgeId kNoEdge = -1;
constexpr BlossomId kNoBlossom = -1;

// A structural invariant of the algorithm state does not hold.
struct StructuralError : std::runtime_error {
  explicit StructuralError(const std::string& msg) : std::runtime_error(msg) {}
};

// An operation was called outside its contract.
struct PreconditionError : std::runtime_error {
  explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

// The instance is outside what this implementation can handle (e.g. oracle size cap).
struct CapabilityError : std::runtime_error {
  explicit CapabilityError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

namespace detail {
inline void check_fail(const char* kind, const char* expr, const char* file, int line,
                       const std::string& msg) {
  std::ostringstream os;
  os << kind << " failed: " << expr << " at " << file << ":" << line;
  if (!msg.empty()) os << " (" << msg << ")";
  throw StructuralError(os.str());
}
}  // namespace detail

#define MWM_CHECK(cond, msg)                                                      \
  do {                                                                            \
    if (!(cond)) ::mwm::detail::check_fail("invariant", #cond, __FILE__, __LINE__, (msg)); \
  } while (0)

#define MWM_REQUIRE(cond, msg)                                    \
  do {                                                            \
    if (!(cond)) throw ::mwm::PreconditionError((msg));           \
  } while (0)

// Saturating multiply for derived DFS parameters that blow up at small lambda.
inline std::int64_t sat_mul(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  __int128 p = static_cast<__int128>(a) * b;
  if (p > std::numeric_limits<std::int64_t>::max()) return std::numeric_limits<std::int64_t>::max();
  if (p < std::numeric_limits<std::int64_t>::min()) return std::numeric_limits<std::int64_t>::min();
  return static_cast<std::int64_t>(p);
}

// Exact non-negative rational with 128-bit terms, for bound checks only.
struct Frac {
  __int128 num = 0;
  __int128 den = 1;

  Frac() = default;
  Frac(std::int64_t n, std::int64_t d = 1) : num(n), den(d) {}
  static Frac of(__int128 n, __int128 d) {
    Frac f;
    f.num = n;
    f.den = d;
    return f;
  }
  Frac operator+(const Frac& o) const { return of(num * o.den + o.num * den, den * o.den); }
  Frac operator*(const Frac& o) const { return of(num * o.num, den * o.den); }
  bool operator<=(const Frac& o) const { return num * o.den <= o.num * den; }
  bool operator<(const Frac& o) const { return num * o.den < o.num * den; }
};

// Deterministic xorshift-based generator; identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    std::uint64_t threshold = (~bound + 1) % bound;  // 2^64 mod bound
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform in [lo, hi] inclusive.
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

 private:
  std::uint64_t state_;
};

}  // namespace mwm
