#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace chanlearn {

/// Named sub-streams derived from one master seed so each ingredient of an
/// experiment (channel draw, codebook draw, batches, algorithmic randomness)
/// is independently reproducible.
enum class Stream : std::uint64_t {
    kDistribution = 1,
    kCodebook = 2,
    kTrain = 3,
    kValidation = 4,
    kAlgorithm = 5,
};

/// SplitMix64 finalizer; the building block for seed derivation.
std::uint64_t mix64(std::uint64_t z);

/// Deterministic sub-stream seed from (master, stream, index).
std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index = 0);

/// mt19937_64 wrapped with explicit output transforms (uniform doubles via the
/// top 53 bits, normals via Box-Muller) so draws do not depend on the standard
/// library's unspecified distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in (0, 1]; safe as a log argument.
    double uniform01_open() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard normal draw (Box-Muller, second value cached).
    double normal();

    /// Unbiased uniform integer in [0, bound).
    std::uint64_t uniform_int(std::uint64_t bound);

    /// Rademacher draw, +1 or -1.
    int sign() { return (next_u64() >> 63) ? 1 : -1; }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Index draw from an explicit probability vector (assumed to sum to ~1).
int draw_categorical(const std::vector<double>& probs, Rng& rng);

}  // namespace chanlearn
