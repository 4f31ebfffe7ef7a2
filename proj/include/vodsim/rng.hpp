#pragma once

#include <cstdint>
#include <random>

namespace vodsim::rng {

// Purpose tags keep the per-video substreams independent: resampling
// views must not disturb the structural draws and vice versa.
enum class StreamTag : std::uint64_t {
  kGopStructure = 1,
  kViews = 2,
  kClustering = 3,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Deterministic substream seed from (master seed, purpose, entity id).
// Videos draw from their own streams, so synthesis is reproducible
// under any parallel schedule.
inline std::uint64_t derive_seed(std::uint64_t master, StreamTag tag,
                                 std::uint64_t id) {
  std::uint64_t h = splitmix64(master ^ splitmix64(static_cast<std::uint64_t>(tag)));
  return splitmix64(h ^ splitmix64(id));
}

inline std::mt19937_64 make_stream(std::uint64_t master, StreamTag tag,
                                   std::uint64_t id) {
  return std::mt19937_64(derive_seed(master, tag, id));
}

}  // namespace vodsim::rng
