#include "fluidruin/rng.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>
#include <vector>

namespace fluidruin {

std::uint64_t mix64(std::uint64_t x) {
    std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t sample_seed(std::uint64_t root, std::uint64_t index) { return mix64(root ^ index); }

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t tag) {
    return mix64(seed ^ mix64(0xD1B54A32D192ED03ULL * (tag + 1)));
}

double Stream::exponential(double rate) {
    if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
    return -std::log1p(-uniform()) / rate;
}

std::size_t Stream::categorical(const double* weights, std::size_t n, std::size_t exclude) {
    double total = 0.0;
    std::size_t last = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == exclude || !(weights[i] > 0.0)) continue;
        total += weights[i];
        last = i;
    }
    const double u = uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == exclude || !(weights[i] > 0.0)) continue;
        acc += weights[i];
        if (u < acc) return i;
    }
    return last;  // rounding at the top end
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
    const auto workers = static_cast<std::size_t>(
        std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1)));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace fluidruin
