#include "chanlearn/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chanlearn {

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index) {
    const std::uint64_t a = mix64(master ^ mix64(static_cast<std::uint64_t>(stream)));
    return mix64(a ^ (index * 0xD1B54A32D192ED03ull));
}

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = uniform01_open();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

std::uint64_t Rng::uniform_int(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_int: bound must be positive");
    const std::uint64_t threshold = (-bound) % bound;
    for (;;) {
        const std::uint64_t x = next_u64();
        if (x >= threshold) return x % bound;
    }
}

int draw_categorical(const std::vector<double>& probs, Rng& rng) {
    if (probs.empty()) throw std::invalid_argument("draw_categorical: empty distribution");
    const double u = rng.uniform01();
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) return static_cast<int>(i);
    }
    // Rounding can leave acc a hair under 1; fall back to the last index.
    return static_cast<int>(probs.size()) - 1;
}

}  // namespace chanlearn
