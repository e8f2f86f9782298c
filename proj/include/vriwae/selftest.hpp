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

#ifndef VRIWAE_SELFTEST_HPP
#define VRIWAE_SELFTEST_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vriwae/gradients.hpp"

namespace vriwae {

struct SelftestOptions {
  std::uint64_t seed = 0;
  /// Multiplies every replicate count; 1.0 is the reduced default.
  double scale = 1.0;
  /// Coefficient rule used by the drep estimator in the unbiasedness check.
  HCoefficientFn h_rule = {};
};

struct SelftestCheck {
  std::string module;
  std::string op;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestReport {
  std::vector<SelftestCheck> checks;

  [[nodiscard]] bool passed() const;
  void print(std::ostream& out) const;
};

/// Invariant and oracle checks at reduced replicate counts. The invariants
/// hold for every seed.
SelftestReport run_selftest(const SelftestOptions& options = {});

}  // namespace vriwae

#endif  // VRIWAE_SELFTEST_HPP
