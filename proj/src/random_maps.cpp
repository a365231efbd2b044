#include "randpart/random_maps.hpp"

#include <stdexcept>

namespace randpart {

MapSample sample_uniform_map(std::uint32_t n, Xoshiro256StarStar& rng) {
  if (n == 0) throw std::invalid_argument("sample_uniform_map: n must be >= 1");
  MapSample sample;
  sample.n = n;
  sample.values.resize(n);
  for (std::uint32_t i = 0; i < n; ++i)
    sample.values[i] = static_cast<std::uint32_t>(rng.below(n));
  return sample;
}

SetPartition inf_of_random_maps(std::uint32_t n, std::uint32_t t, Xoshiro256StarStar& rng) {
  if (t == 0) throw std::invalid_argument("inf_of_random_maps: t must be >= 1");
  SetPartition result = partition_from_map(sample_uniform_map(n, rng).values);
  for (std::uint32_t i = 1; i < t; ++i)
    result = meet(result, partition_from_map(sample_uniform_map(n, rng).values));
  return result;
}

SetPartition sup_of_random_maps(std::uint32_t n, std::uint32_t t, Xoshiro256StarStar& rng) {
  if (t == 0) throw std::invalid_argument("sup_of_random_maps: t must be >= 1");
  std::vector<std::vector<std::uint32_t>> maps;
  maps.reserve(t);
  for (std::uint32_t i = 0; i < t; ++i) maps.push_back(std::move(sample_uniform_map(n, rng).values));
  return join_streaming(n, maps);
}

}  // namespace randpart
