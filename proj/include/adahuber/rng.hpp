#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace adahuber {

using Engine = std::mt19937_64;

/// Recorded in run metadata; only determinism on a given toolchain is promised.
inline constexpr std::string_view kGeneratorId = "mt19937_64+splitmix64-split+libstdc++-distributions";

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Stateless stream split: a seed for (master, a, b) that does not depend on
/// any other stream or on execution order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) noexcept;

}  // namespace adahuber
