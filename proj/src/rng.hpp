#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace rist {

// Philox4x32-10 counter-based generator (Salmon et al., "Parallel random
// numbers: as easy as 1, 2, 3", SC'11). Every draw is a pure function of
// (key, stream, counter), so trials keyed by (master seed, trial index) are
// independent and reproducible regardless of execution order or worker count.
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t key, std::uint64_t stream);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  // Uniform integer in [0, bound) for power-of-two bound (exact, no bias).
  std::uint32_t next_pow2(std::uint32_t bound);

  double uniform();      // [0, 1)
  double uniform_pos();  // (0, 1]

  double gaussian();                  // N(0, 1), Box-Muller
  std::complex<double> cgaussian();   // CN(0, 1): E|w|^2 = 1

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 2> stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int block_pos_ = 4;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Sub-stream roles used by the simulator. Streams are derived from
// (master seed, role, trial index) so that channels, symbols, waveforms and
// noise are drawn from disjoint streams and remain paired across schemes and
// sweep points (common random numbers).
enum class StreamRole : std::uint64_t {
  scene_channels = 1,
  user_positions = 2,
  symbols = 3,
  waveform = 4,
  noise = 5,
  generic = 6,
};

// index < 2^40, sub < 2^16.
inline std::uint64_t stream_id(StreamRole role, std::uint64_t index,
                               std::uint64_t sub = 0) {
  return (static_cast<std::uint64_t>(role) << 56) | ((sub & 0xffff) << 40) |
         (index & 0xffffffffffull);
}

inline PhiloxStream make_stream(std::uint64_t seed, StreamRole role,
                                std::uint64_t index, std::uint64_t sub = 0) {
  return PhiloxStream(seed, stream_id(role, index, sub));
}

}  // namespace rist
