#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ma {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline int sgn(const Rat& x) { return x == 0 ? 0 : (x > 0 ? 1 : -1); }
inline int sgn(const Int& x) { return x == 0 ? 0 : (x > 0 ? 1 : -1); }

// ---------------------------------------------------------------------------
// Errors. One exception type, one code per spec-named error condition.

enum class Err {
  InvalidArity,
  NotInteriorEdge,
  NotCodimOne,
  IndexOutOfRange,
  MissingOperation,
  NotAComplex,
  PreconditionFailed,
  GradingViolation,
  Mismatch,
  DegenerateConfiguration,
  PerturbationFailed,
  DimensionMismatch,
  ParseError,
  Internal,
};

const char* err_name(Err e);

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& what)
      : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) { throw Error(code, what); }

// ---------------------------------------------------------------------------
// Exact planar vectors/points.

struct Vec2 {
  Rat x, y;
  Vec2() : x(0), y(0) {}
  Vec2(Rat xx, Rat yy) : x(std::move(xx)), y(std::move(yy)) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2 operator*(const Rat& s) const { return {x * s, y * s}; }
  bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
  bool operator!=(const Vec2& o) const { return !(*this == o); }
  bool is_zero() const { return x == 0 && y == 0; }
};

inline Rat dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline Rat cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
// 90-degree counterclockwise rotation.
inline Vec2 rot90(const Vec2& a) { return {-a.y, a.x}; }

// ---------------------------------------------------------------------------
// Rational parsing/printing: canonical form "p/q" (or "p" when q = 1).

std::string rat_str(const Rat& r);
Rat rat_parse(const std::string& s);

// ---------------------------------------------------------------------------
// Deterministic seeding (splitmix64). All pseudo-randomness in the library
// flows through this; identical seeds give identical runs on any platform.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ (0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2)));
}

// Deterministic rational in (-1, 1) with denominator `den`, derived from keys.
inline Rat seeded_unit(std::uint64_t seed, std::uint64_t k1, std::uint64_t k2, long den = 4096) {
  std::uint64_t h = mix(mix(seed, k1), k2);
  long v = static_cast<long>(h % static_cast<std::uint64_t>(2 * den - 1)) - (den - 1);
  return Rat(v, den);
}

int env_thread_cap();  // MORSE_AINFTY_THREADS, default 1

}  // namespace ma
