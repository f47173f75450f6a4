#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fluidruin/model.hpp"

namespace testsupport {

inline const char* kToyDocument = R"({
  "coord1": {
    "pre_states": ["e+", "e-"], "post_states": ["s+", "s-"],
    "pre_generator": [[-1, 1], [1, -1]], "post_generator": [[-2, 2], [2, -2]],
    "pre_rewards": [1, -1], "post_rewards": [1, -2],
    "switch_matrix": [[0.5, 0.5], [0.5, 0.5]], "initial_state": "e+"
  },
  "coord2": {
    "pre_states": ["e+", "e-"], "post_states": ["s+", "s-"],
    "pre_generator": [[-1, 1], [1, -1]], "post_generator": [[-2, 2], [2, -2]],
    "pre_rewards": [1, -1], "post_rewards": [1, -2],
    "switch_matrix": [[0.5, 0.5], [0.5, 0.5]], "initial_state": "e+"
  }
})";

// Three pre-ruin states, asymmetric coordinates.
inline fluidruin::ModelSpec skewed_model() {
    fluidruin::ModelSpec spec = fluidruin::toy_model();
    auto& c = spec.coord[1];
    c.pre_states = {"a", "b", "c"};
    c.pre_generator.resize(3, 3);
    c.pre_generator << -1.5, 1.0, 0.5, 0.3, -0.8, 0.5, 1.0, 1.0, -2.0;
    c.pre_rewards.resize(3);
    c.pre_rewards << 2.0, -0.5, -1.5;
    c.switch_matrix.resize(3, 2);
    c.switch_matrix << 0.9, 0.1, 0.2, 0.8, 0.0, 1.0;
    c.initial_state = "a";
    c.post_generator << -1.0, 1.0, 3.0, -3.0;
    c.post_rewards << 0.5, -1.0;
    return spec;
}

// Kolmogorov-Smirnov distance of a sample against Exp(rate).
inline double ks_exponential(std::vector<double> x, double rate) {
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = 1.0 - std::exp(-rate * x[i]);
        d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    return d;
}

// Asymptotic 1% critical value of the KS distance.
inline double ks_critical_1pct(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

}  // namespace testsupport
