// Copyright 2026 The skewcoal Authors.
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

#include "skewcoal/lattice.hpp"

#include <cmath>
#include <string>

namespace skewcoal {

LatticeConfig::LatticeConfig(double space_step, std::int64_t max_steps)
    : h_(space_step), dt_(space_step * space_step), max_steps_(max_steps) {
    if (!(space_step > 0.0) || !std::isfinite(space_step)) {
        throw std::invalid_argument("LatticeConfig: space step must be positive and finite, got " +
                                    std::to_string(space_step));
    }
    if (max_steps < 1) {
        throw std::invalid_argument("LatticeConfig: max_steps must be >= 1");
    }
}

UniformStream::UniformStream(std::uint64_t master_seed, std::uint64_t replicate_index, std::uint64_t lane,
                             std::uint64_t position) noexcept
    : master_seed_(master_seed), replicate_index_(replicate_index), lane_(lane), position_(position),
      key_(mix64(mix64(master_seed) ^
                 mix64(replicate_index * 0xd1b54a32d192ed03ULL + lane * 0xaef17502108ef2d9ULL + 1))) {}

} // namespace skewcoal
