/*
   Copyright 2026 The Liouville Lab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

// Counter-based random numbers (Philox4x32-10, Salmon et al., SC'11).
//
// Every variate is a pure function of (seed, stream, index), so ensembles are
// reproducible bit-for-bit regardless of how work is split across threads.

#include <array>
#include <cstdint>

#include "liouville/normal.hpp"

namespace liouville {

class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter generate(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
};

/// Maps 64 random bits to a double in the open interval (0, 1).
constexpr double to_open_unit(std::uint64_t bits) {
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// A stream of uniform / standard-normal variates addressed by index.
/// Each Philox block yields two doubles, so index k and k^1 share a block.
class CounterStream {
public:
    constexpr CounterStream(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream) {}

    constexpr std::array<double, 2> uniform_pair(std::uint64_t block) const {
        const auto out = Philox4x32::generate(
            {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
             static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
            key_);
        return {to_open_unit((std::uint64_t{out[0]} << 32) | out[1]),
                to_open_unit((std::uint64_t{out[2]} << 32) | out[3])};
    }

    constexpr double uniform(std::uint64_t index) const {
        return uniform_pair(index >> 1)[index & 1];
    }

    double normal(std::uint64_t index) const { return normal_quantile(uniform(index)); }

    std::array<double, 2> normal_pair(std::uint64_t block) const {
        const auto u = uniform_pair(block);
        return {normal_quantile(u[0]), normal_quantile(u[1])};
    }

private:
    Philox4x32::Key key_;
    std::uint64_t stream_;
};

}  // namespace liouville
