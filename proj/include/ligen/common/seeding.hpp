#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ligen {

using Rng = std::mt19937_64;

// Derives an independent stream seed from a parent seed, a stage label and
// an index. Streams for distinct (label, index) pairs never share state, so
// adding a new stage does not perturb existing ones.
std::uint64_t derive_seed(std::uint64_t parent, std::string_view label,
                          std::uint64_t index = 0);

inline Rng make_rng(std::uint64_t parent, std::string_view label,
                    std::uint64_t index = 0) {
  return Rng(derive_seed(parent, label, index));
}

}  // namespace ligen
