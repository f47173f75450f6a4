#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace fluidruin {

/// splitmix64: add the golden-ratio increment, then the standard finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed of sample `index` under root seed `root`: mix64(root ^ index).
std::uint64_t sample_seed(std::uint64_t root, std::uint64_t index);

/// Independent sub-stream of a sample seed, e.g. one per coordinate and use.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t tag);

/// Random source with platform-independent conversions (the standard
/// distributions are implementation-defined, so they are not used).
class Stream {
public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Exp(rate); +inf when rate <= 0.
    double exponential(double rate);

    /// Index drawn with probability weights[i] / sum(weights), skipping
    /// `exclude` (pass n to exclude nothing).
    std::size_t categorical(const double* weights, std::size_t n, std::size_t exclude);

private:
    std::mt19937_64 engine_;
};

/// Runs fn(i) for i in [0, count) over at most `threads` workers. Indices are
/// handed out in fixed strides, so any per-index output is independent of the
/// worker count. The first exception thrown is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace fluidruin
