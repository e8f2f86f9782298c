// Copyright 2026 The vriwae Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VRIWAE_RNG_HPP
#define VRIWAE_RNG_HPP

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

/**
 * \file
 * \brief Counter-based random streams (Philox4x32-10).
 *
 * A stream is addressed by (seed, stream_id, substream). Any address can be
 * constructed directly, without advancing another stream, so replicate `r` of
 * an experiment cell always sees the same draws whatever the thread count.
 *
 * Counter layout: the 64-bit seed is the Philox key; the 128-bit counter is
 * [block, substream, stream_id low, stream_id high]. Each substream therefore
 * holds 2^32 blocks of four 32-bit words.
 *
 * Normal variates use the Box-Muller transform on two 53-bit uniforms; the
 * second variate of each pair is cached.
 */

namespace vriwae {

/// One Philox4x32-10 block: encrypts `counter` under `key`.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

class RngStream {
 public:
  using result_type = std::uint32_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id, std::uint32_t substream = 0);

  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] std::uint64_t stream_id() const { return stream_id_; }
  [[nodiscard]] std::uint32_t substream_index() const { return substream_; }

  /// A fresh stream at the same (seed, stream_id) with the given substream.
  [[nodiscard]] RngStream substream(std::uint32_t index) const {
    return RngStream{seed_, stream_id_, index};
  }

  /// UniformRandomBitGenerator interface, so library distributions accept it.
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u32(); }

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1) with 53 bits of resolution.
  double uniform();

  double normal();
  void fill_normal(std::span<double> out);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint32_t substream_;
  std::uint32_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

inline RngStream make_stream(std::uint64_t seed, std::uint64_t stream_id) {
  return RngStream{seed, stream_id};
}

/// `n` i.i.d. standard normal draws; advances the stream.
std::vector<double> standard_normal(RngStream& stream, std::size_t n);

/// Stream-id namespaces so that different experiment stages never share draws.
enum class StreamPurpose : std::uint8_t {
  kDataset = 1,
  kPerturb = 2,
  kDatapoint = 3,
  kGap = 4,
  kGradient = 5,
  kSnr = 6,
  kWeights = 7,
  kCollapse = 8,
  kTrain = 9,
  kCoordinates = 10,
  kFiniteDifference = 11,
  kSelftest = 12,
  kEvaluation = 13,
};

/// Injective in (purpose, cell) for cell < 2^56.
constexpr std::uint64_t derive_stream_id(StreamPurpose purpose, std::uint64_t cell) {
  return (static_cast<std::uint64_t>(purpose) << 56) | (cell & ((std::uint64_t{1} << 56) - 1));
}

}  // namespace vriwae

#endif  // VRIWAE_RNG_HPP
