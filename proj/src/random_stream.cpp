#include "mpdesign/random_stream.hpp"

#include <cmath>

namespace mpdesign {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::span<const std::uint64_t> labels) {
    std::vector<std::uint32_t> words;
    words.reserve(2 * (labels.size() + 1));
    auto push = [&words](std::uint64_t v) {
        words.push_back(static_cast<std::uint32_t>(v & 0xffffffffULL));
        words.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push(seed);
    for (auto label : labels) push(label);
    std::seed_seq seq(words.begin(), words.end());
    return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::initializer_list<std::uint64_t> labels)
    : RandomStream(seed, std::span<const std::uint64_t>(labels.begin(), labels.size())) {}

RandomStream::RandomStream(std::uint64_t seed, std::span<const std::uint64_t> labels)
    : seed_(seed), labels_(labels.begin(), labels.end()), engine_(seeded_engine(seed, labels)) {}

RandomStream RandomStream::substream(std::uint64_t label) const {
    std::vector<std::uint64_t> path = labels_;
    path.push_back(label);
    return RandomStream(seed_, path);
}

double RandomStream::uniform() {
    // (k + 0.5) / 2^53 for k in [0, 2^53) never hits 0 or 1.
    const auto k = engine_() >> 11;
    return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double RandomStream::standard_normal() {
    // Marsaglia polar method; the second variate is discarded so the stream
    // carries no hidden cache.
    for (;;) {
        const double u = 2.0 * uniform() - 1.0;
        const double v = 2.0 * uniform() - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) {
            return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }
}

}  // namespace mpdesign
