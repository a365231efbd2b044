#pragma once

#include <cstdint>
#include <vector>

#include "randpart/rng.hpp"
#include "randpart/set_partition.hpp"

namespace randpart {

struct MapSample {
  std::uint32_t n = 0;
  std::vector<std::uint32_t> values;  // values[i] = image of i, in [0, n)
};

MapSample sample_uniform_map(std::uint32_t n, Xoshiro256StarStar& rng);

// Meet of the partitions-by-preimage of t freshly sampled maps.
SetPartition inf_of_random_maps(std::uint32_t n, std::uint32_t t, Xoshiro256StarStar& rng);

// Join of the same; streaming, never materializes the factor partitions.
SetPartition sup_of_random_maps(std::uint32_t n, std::uint32_t t, Xoshiro256StarStar& rng);

}  // namespace randpart
