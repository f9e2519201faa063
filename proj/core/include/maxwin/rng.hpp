#pragma once

#include <array>
#include <cstdint>

namespace maxwin {

/// Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Block generate(Block counter, Key key) noexcept;
};

/// (seed, stream_id) names an independent random sequence.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  RngStream with_stream(std::uint64_t id) const noexcept { return {seed, id}; }
};

/// Counter-based generator for one substream (e.g. one Monte Carlo trial) of
/// an RngStream. The n-th draw is a pure function of (seed, stream_id,
/// substream, n), so trials can be evaluated in any order or on any thread.
class SubstreamRng {
 public:
  SubstreamRng(const RngStream& stream, std::uint64_t substream) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() noexcept;
  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept;

 private:
  Philox4x32::Key key_;
  std::uint64_t substream_;
  std::uint64_t block_ = 0;
  Philox4x32::Block buffer_{};
  int used_ = 4;
};

}  // namespace maxwin
