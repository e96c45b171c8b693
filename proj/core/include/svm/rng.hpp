#pragma once

#include <cstdint>
#include <random>

namespace svm {

using Engine = std::mt19937_64;

/// Named substreams of a path: increments and initial conditions draw independently.
enum class Stream : std::uint64_t { increments = 0, initial = 1, auxiliary = 2 };

/// Independent engine keyed by (seed, path, stream). Pure function of its arguments,
/// so paths can be generated in any order or on any worker.
[[nodiscard]] Engine path_engine(std::uint64_t seed, std::uint64_t path, Stream stream = Stream::increments);

[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace svm
