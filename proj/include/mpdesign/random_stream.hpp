#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace mpdesign {

// A reproducible pseudo-random substream keyed by a seed and a label path.
//
// The engine (std::mt19937_64) and its seeding (std::seed_seq) are specified
// bit-exactly by the standard, so equal keys give equal sequences on every
// conforming toolchain. Distinct label paths give statistically independent
// streams, which lets callers evaluate design points in any order or
// concurrently without changing results.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed, std::initializer_list<std::uint64_t> labels = {});
    RandomStream(std::uint64_t seed, std::span<const std::uint64_t> labels);

    std::uint64_t seed() const noexcept { return seed_; }
    const std::vector<std::uint64_t>& labels() const noexcept { return labels_; }

    // Fresh stream keyed by this stream's path with `label` appended.
    RandomStream substream(std::uint64_t label) const;

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on the open interval (0, 1), 53 bits of resolution.
    double uniform();

    double standard_normal();

private:
    std::uint64_t seed_;
    std::vector<std::uint64_t> labels_;
    std::mt19937_64 engine_;
};

}  // namespace mpdesign
