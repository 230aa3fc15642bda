#pragma once

#include <cstdint>
#include <vector>

#include "chanlearn/geometry.hpp"
#include "chanlearn/noise.hpp"

namespace chanlearn {

/// Marker for a transmit index whose hinge term is clipped to zero (no
/// competitor enters the surrogate).
inline constexpr std::int32_t kNoCompetitor = -1;

/// The decision statistic throughout is the pairwise margin
///   margin(j, j', z) = ||x_j - x_j'||_S^2 + 2 (x_j - x_j')^T S z,
/// the amount by which the decoder prefers the sent codeword j over the
/// competitor j' when receiving x_j + z. A negative margin is a decoding
/// error; a margin below 1 contributes to the hinge surrogate.

/// Minimum-distance decode of y: argmin_j ||x_j - y||_S^2, ties to the lowest
/// index.
int decode(const Codebook& C, const DecoderMatrix& S, const Vec& y);

/// 0-1 loss per transmit index for a single noise draw (strict inequality:
/// an exact distance tie is not an error).
std::vector<double> loss01_per_codeword(const Codebook& C, const DecoderMatrix& S, const Vec& z);

/// Clipped hinge surrogate per transmit index: max(0, 1 - min margin).
std::vector<double> hinge_per_codeword(const Codebook& C, const DecoderMatrix& S, const Vec& z);

/// Batch error probability, averaged over samples and transmit indices.
/// Invariant under positive rescaling of S.
double empirical_pe(const Codebook& C, const DecoderMatrix& S, const NoiseBatch& Z);

struct PeBreakdown {
    double average = 0.0;
    std::vector<double> per_codeword;  // conditional error rate given each transmit index
};
PeBreakdown empirical_pe_breakdown(const Codebook& C, const DecoderMatrix& S, const NoiseBatch& Z);

/// Batch hinge surrogate average. Not scale invariant in S.
double empirical_hinge(const Codebook& C, const DecoderMatrix& S, const NoiseBatch& Z);

/// Active set for a batch: competitor choice (or kNoCompetitor) per sample
/// and transmit index.
struct ActiveSet {
    int m = 0;
    int n = 0;
    std::vector<std::int32_t> comp;  // n rows of m entries, row-major

    std::int32_t at(int i, int j) const {
        return comp[static_cast<std::size_t>(i) * m + j];
    }
};

/// Active-set row for one sample: for each transmit j, the margin-minimizing
/// competitor, or kNoCompetitor when the hinge at that competitor is already
/// clipped (1 - margin < 0). Competitor ties resolve to the lowest index.
std::vector<std::int32_t> select_active_row(const Codebook& C, const DecoderMatrix& S, const Vec& z);

ActiveSet select_active_set(const Codebook& C, const DecoderMatrix& S, const NoiseBatch& Z);

}  // namespace chanlearn
