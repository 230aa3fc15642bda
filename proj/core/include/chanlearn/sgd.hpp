#pragma once

#include <cstdint>
#include <vector>

#include "chanlearn/geometry.hpp"
#include "chanlearn/loss.hpp"
#include "chanlearn/noise.hpp"

namespace chanlearn {

struct SgdConfig {
    double lambda = 0.1;    // codeword step size
    double eta = 0.1;       // decoder step size
    double r_x = 1.0;       // codeword power radius
    double r_s = 10.0;      // decoder spectral radius
    int n_iters = 0;        // iterations to run; 0 records initial metrics only
    int record_every = 50;  // trace granularity in iterations
};

struct TracePoint {
    int iter = 0;
    double train_hinge = 0.0;
    double train_pe = 0.0;
    double val_hinge = 0.0;  // NaN when no validation batch is supplied
    double val_pe = 0.0;
};

struct TrainTrace {
    std::vector<TracePoint> points;
};

struct SgdResult {
    Codebook codebook;
    DecoderMatrix decoder;
    TrainTrace trace;
};

/// Surrogate loss of one sample with a frozen competitor row: sum over j of
/// 1 - margin(j, row[j], z), skipping kNoCompetitor entries, divided by m.
/// This is the function the gradients below differentiate.
double relaxed_loss(const Codebook& C, const DecoderMatrix& S,
                    const std::vector<std::int32_t>& row, const Vec& z);

/// Gradient of relaxed_loss in the codewords, one column per codeword:
///   d/dx_p = -(2/m) sum_j [ (a_pj + a_jp) S (x_p - x_j) + (a_pj - a_jp) S z ]
/// where a_jl is 1 when row[j] == l.
Mat grad_codewords(const Codebook& C, const DecoderMatrix& S,
                   const std::vector<std::int32_t>& row, const Vec& z);

/// Gradient of relaxed_loss in S, evaluated per sample:
///   -(1/m) sum_j [ (x_j - x_row[j])(x_j - x_row[j])^T + 2 (x_j - x_row[j]) z^T ].
/// Returned as produced (not symmetric); callers symmetrize before stepping.
Mat grad_S(const Codebook& C, const std::vector<std::int32_t>& row, const Vec& z);

/// Inverse sample covariance of the first dim() noise draws, spectrally
/// clipped to r_s. A small ridge keeps the inversion defined when the draws
/// are degenerate; ridge_used reports whether it mattered.
DecoderMatrix init_decoder_from_samples(const NoiseBatch& Z, int d, double r_s,
                                        bool* ridge_used = nullptr);

/// Alternating projected SGD over codebook and decoder: one sample per
/// iteration in batch order, both gradients evaluated at the current pair
/// before either update. Throws if n_iters exceeds the batch size (single
/// pass only).
SgdResult sgd_run(Codebook C0, DecoderMatrix S0, const NoiseBatch& train,
                  const NoiseBatch* validation, const SgdConfig& cfg);

/// Full-batch variant of sgd_run: the active set is recomputed and gradients
/// averaged over the whole batch each iteration. n_iters is unrestricted.
SgdResult gradient_descent_run(Codebook C0, DecoderMatrix S0, const NoiseBatch& train,
                               const NoiseBatch* validation, const SgdConfig& cfg);

}  // namespace chanlearn
