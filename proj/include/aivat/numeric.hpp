#ifndef AIVAT_NUMERIC_HPP
#define AIVAT_NUMERIC_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace aivat {

// Pairwise (cascade) summation. Deterministic for a fixed input order and
// numerically stabler than a left fold.
double pairwise_sum(std::span<const double> values);

// Mean via pairwise summation. Empty input returns 0.
double pairwise_mean(std::span<const double> values);

// FNV-1a 64-bit hash, used for heuristic/corpus commitments.
std::uint64_t fnv1a64(std::span<const unsigned char> bytes);
std::uint64_t fnv1a64(const std::string& text);
std::string hash_hex(std::uint64_t h);

// Deterministic xoshiro-free uniform double in [0,1) from a raw 64-bit draw.
inline double uniform01(std::uint64_t raw) {
  return static_cast<double>(raw >> 11) * 0x1.0p-53;
}

// Shortest round-trip decimal rendering of a double (locale-independent).
std::string format_double(double x);

// "a,b,c" rendering used for CSV rows.
std::string join_csv(const std::vector<std::string>& fields);

}  // namespace aivat

#endif  // AIVAT_NUMERIC_HPP
