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

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <set>
#include <vector>

#include "vriwae/numeric.hpp"
#include "vriwae/parallel.hpp"
#include "vriwae/rng.hpp"

namespace vriwae {
namespace {

using Block = std::array<std::uint32_t, 4>;

// Known-answer vectors of the Random123 reference implementation.
TEST(Philox, KnownAnswerZero) {
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}),
            (Block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
}

TEST(Philox, KnownAnswerOnes) {
  EXPECT_EQ(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                          {0xffffffffu, 0xffffffffu}),
            (Block{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(Philox, KnownAnswerPi) {
  EXPECT_EQ(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                          {0xa4093822u, 0x299f31d0u}),
            (Block{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(RngStream, SameAddressSameDraws) {
  RngStream a{42, 7, 3};
  RngStream b{42, 7, 3};
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u32(), b.next_u32());
}

TEST(RngStream, SubstreamIsIndependentOfParentPosition) {
  RngStream parent{1, 2};
  const RngStream fresh = parent.substream(5);
  for (int i = 0; i < 17; ++i) parent.normal();
  RngStream after = parent.substream(5);
  RngStream before = fresh;
  for (int i = 0; i < 100; ++i) ASSERT_EQ(after.normal(), before.normal());
}

TEST(RngStream, DistinctAddressesDiffer) {
  std::set<std::uint32_t> firsts;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    for (std::uint64_t id = 0; id < 4; ++id) {
      for (std::uint32_t sub = 0; sub < 4; ++sub) {
        RngStream s{seed, id, sub};
        firsts.insert(s.next_u32());
      }
    }
  }
  EXPECT_EQ(firsts.size(), 64u);
}

TEST(RngStream, UniformInOpenInterval) {
  RngStream s{0, 0};
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(RngStream, NormalMoments) {
  RngStream s{3, 9};
  const auto x = standard_normal(s, 200000);
  const auto ms = mean_std(x);
  EXPECT_NEAR(ms.mean, 0.0, 5.0 / std::sqrt(200000.0));
  EXPECT_NEAR(ms.std, 1.0, 0.01);
  double kurt = 0.0;
  for (double v : x) kurt += v * v * v * v;
  EXPECT_NEAR(kurt / 200000.0, 3.0, 0.1);
}

TEST(RngStream, WorksAsUniformRandomBitGenerator) {
  RngStream s{0, 1};
  std::uniform_int_distribution<int> die{1, 6};
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 60000; ++i) ++counts[die(s)];
  for (int face = 1; face <= 6; ++face) EXPECT_NEAR(counts[face], 10000, 500);
}

TEST(DeriveStreamId, SeparatesPurposes) {
  EXPECT_NE(derive_stream_id(StreamPurpose::kGap, 5), derive_stream_id(StreamPurpose::kSnr, 5));
  EXPECT_NE(derive_stream_id(StreamPurpose::kGap, 5), derive_stream_id(StreamPurpose::kGap, 6));
  static_assert(derive_stream_id(StreamPurpose::kDataset, 0) == (std::uint64_t{1} << 56));
}

TEST(MapReplicates, ParallelMatchesSerialInOrder) {
  const RngStream base{11, 12};
  const auto fn = [&](std::size_t r) {
    RngStream local = base.substream(static_cast<std::uint32_t>(r));
    return local.normal() + static_cast<double>(r);
  };
  const auto serial = map_replicates(500, Execution::kSerial, fn);
  const auto parallel = map_replicates(500, Execution::kParallel, fn);
  EXPECT_EQ(serial, parallel);
}

TEST(MapReplicates, PropagatesExceptions) {
  const auto fn = [](std::size_t r) -> int {
    if (r == 37) throw std::runtime_error("boom");
    return 0;
  };
  EXPECT_THROW(map_replicates(100, Execution::kParallel, fn), std::runtime_error);
  EXPECT_THROW(map_replicates(100, Execution::kSerial, fn), std::runtime_error);
}

}  // namespace
}  // namespace vriwae
