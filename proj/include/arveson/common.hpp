#ifndef ARVESON_COMMON_HPP
#define ARVESON_COMMON_HPP

#include <complex>
#include <cstdint>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace arveson {

using cd = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// ---------------------------------------------------------------------------
// Error types. One exception class per contract violation named in the
// operation signatures, all rooted at Error so callers can catch broadly.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ModelMismatch : Error { using Error::Error; };
struct EvaluationOverflow : Error { using Error::Error; };
struct GridTooCoarse : Error { using Error::Error; };
struct NoAdjoint : Error { using Error::Error; };
struct NoSuchStructure : Error { using Error::Error; };
struct SignatureMismatch : Error { using Error::Error; };
struct RankDeficientFamily : Error { using Error::Error; };
struct OverlapError : Error { using Error::Error; };
struct HypothesisFailed : Error { using Error::Error; };
struct NotAState : Error { using Error::Error; };
struct NotInvariant : Error { using Error::Error; };
struct NotContinuous : Error { using Error::Error; };
struct InvalidConfig : Error { using Error::Error; };
struct TailNotSummable : Error { using Error::Error; };
struct BadSmearing : Error { using Error::Error; };
struct BadPartition : Error { using Error::Error; };
struct EpsilonTooLarge : Error { using Error::Error; };
struct MissingCurve : Error { using Error::Error; };
struct ConfigError : Error {
  std::string pointer;  // JSON pointer to the offending field
  ConfigError(const std::string& ptr, const std::string& msg)
      : Error(msg + " (at " + ptr + ")"), pointer(ptr) {}
};

// ---------------------------------------------------------------------------
// Small numeric helpers
// ---------------------------------------------------------------------------

inline bool is_finite(cd z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Least-squares slope of log|y| against log(x); used for decay-exponent fits.
// Returns the fitted exponent gamma in |y| ~ x^{-gamma}.
inline double fit_decay_exponent(const std::vector<double>& x,
                                 const std::vector<double>& y,
                                 double floor_value = 1e-300) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw Error("fit_decay_exponent: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(std::max(std::abs(y[i]), floor_value));
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0) throw Error("fit_decay_exponent: degenerate abscissae");
  return -(n * sxy - sx * sy) / denom;
}

// FNV-1a over bytes; used for manifest hashes in reports.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string fnv1a_hex(const std::string& s) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a(s);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

// Shortest round-trip decimal for doubles (CSV/JSON emission).
std::string format_double(double v);

}  // namespace arveson

#include <cstdio>

namespace arveson {

inline std::string format_double(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    double back = 0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) break;
  }
  return buf;
}

}  // namespace arveson

#endif  // ARVESON_COMMON_HPP
