#pragma once

#include <cstdint>
#include <vector>

#include "chanlearn/geometry.hpp"
#include "chanlearn/loss.hpp"
#include "chanlearn/noise.hpp"
#include "chanlearn/rng.hpp"

namespace chanlearn {

/// Precomputed pairwise error sets over a fixed batch: at(j1, j2) lists the
/// sample indices on which margin(j1, j2) is negative. Every subset error
/// probability over the batch is then a union-size computation, so candidate
/// scoring never touches the samples again.
struct PairwiseErrorArray {
    int m0 = 0;
    int n = 0;
    std::vector<std::vector<std::int32_t>> sets;  // row-major m0 x m0, diagonals empty

    const std::vector<std::int32_t>& at(int j1, int j2) const {
        return sets[static_cast<std::size_t>(j1) * m0 + j2];
    }
};

PairwiseErrorArray build_pairwise_error_array(const Codebook& C, const DecoderMatrix& S,
                                              const NoiseBatch& Z);

/// Scratch for union counting: a stamp per sample index, bumped per query,
/// so repeated pe evaluations need no clearing.
class PeWorkspace {
public:
    explicit PeWorkspace(int n) : stamp_(static_cast<std::size_t>(n), 0) {}

    friend double pe_from_array(const PairwiseErrorArray& arr,
                                const std::vector<std::int32_t>& surviving, PeWorkspace& ws);

private:
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 0;
};

/// Error probability of the subcodebook indexed by surviving:
///   (1 / (n |surv|)) * sum_{j1 in surv} | union_{j2 in surv, j2 != j1} at(j1, j2) |.
double pe_from_array(const PairwiseErrorArray& arr, const std::vector<std::int32_t>& surviving,
                     PeWorkspace& ws);
double pe_from_array(const PairwiseErrorArray& arr, const std::vector<std::int32_t>& surviving);

/// Candidate distribution over scored subsets: P(c) proportional to
/// exp(-beta * (pe_c - min pe)). beta = 0 is uniform; beta = infinity is
/// greedy on the first argmin.
std::vector<double> candidate_probabilities(const std::vector<double>& pes, double beta);

struct GibbsStepResult {
    std::vector<std::int32_t> surviving;  // after removal, ascending
    std::vector<double> probabilities;    // over candidates, enumeration order
    int chosen = 0;                       // sampled candidate index
};

/// One expurgation step: enumerate all k-subsets of surviving (lexicographic
/// by removed indices), score each remainder via pe_from_array, draw from
/// candidate_probabilities.
GibbsStepResult gibbs_step(const PairwiseErrorArray& arr, const std::vector<std::int32_t>& surviving,
                           int k, double beta, Rng& rng, PeWorkspace& ws);

struct GibbsConfig {
    int m_target = 2;
    int k = 1;
    double beta = 1000.0;
    enum class ValEval { kNone, kFinalOnly, kEveryStep };
    ValEval val_eval = ValEval::kFinalOnly;
};

struct ExpurgationPoint {
    int step = 0;
    std::vector<std::int32_t> surviving;
    double train_pe = 0.0;
    double val_pe = 0.0;  // NaN unless evaluated
};

struct ExpurgationTrace {
    std::vector<ExpurgationPoint> points;
};

struct GibbsResult {
    std::vector<std::int32_t> surviving;
    Codebook codebook;  // surviving columns of the input, in index order
    ExpurgationTrace trace;
};

/// Run (m0 - m_target) / k expurgation steps from the full codebook. The
/// step count must divide evenly or this throws.
GibbsResult gibbs_run(const Codebook& C0, const DecoderMatrix& S, const NoiseBatch& train,
                      const NoiseBatch* validation, const GibbsConfig& cfg, Rng& rng);

}  // namespace chanlearn
