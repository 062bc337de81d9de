#ifndef SWARMPATROL_UTIL_HPP_
#define SWARMPATROL_UTIL_HPP_

#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <string_view>

namespace swarmpatrol {

/// Fixed-format float, locale independent. Used for every CSV cell so that
/// identical runs produce byte-identical files.
inline std::string fmt_fixed(double v, int decimals = 3) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return std::string(buf);
}

inline std::string fmt_int(long long v) { return std::to_string(v); }

/// FNV-1a 64-bit over a byte string; stable across runs and platforms,
/// unlike std::hash. Used for the config hash in the run manifest.
inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string to_hex(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf);
}

/// Uniform double in [0, 1) from the top 53 bits of the engine output.
/// Avoids std::uniform_real_distribution, whose output is not pinned by the
/// standard; the engine itself is, so results are reproducible everywhere.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// Either -1 or +1, one engine draw.
inline int uniform_sign(std::mt19937_64& rng) {
  return (rng() >> 32) & 1 ? 1 : -1;
}

/// Per-agent engine derived from the run seed; independent of processing order.
inline std::mt19937_64 agent_rng(std::uint64_t run_seed, int agent_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(run_seed),
                    static_cast<std::uint32_t>(run_seed >> 32),
                    static_cast<std::uint32_t>(agent_id), 0x5e71u};
  return std::mt19937_64(seq);
}

}  // namespace swarmpatrol

#endif  // SWARMPATROL_UTIL_HPP_
