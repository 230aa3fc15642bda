#include "chanlearn/gibbs.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace chanlearn {

PairwiseErrorArray build_pairwise_error_array(const Codebook& C, const DecoderMatrix& S,
                                              const NoiseBatch& Z) {
    if (C.dim() != S.dim() || C.dim() != Z.dim()) {
        throw std::invalid_argument("build_pairwise_error_array: dimension mismatch");
    }
    const int m0 = C.size();
    const int n = Z.size();
    if (m0 < 2 || n == 0) {
        throw std::invalid_argument("build_pairwise_error_array: degenerate inputs");
    }
    const Mat G = C.X.transpose() * (S.mat() * C.X);
    const Mat T = C.X.transpose() * (S.mat() * Z.samples);
    PairwiseErrorArray arr;
    arr.m0 = m0;
    arr.n = n;
    arr.sets.resize(static_cast<std::size_t>(m0) * m0);
    for (int j1 = 0; j1 < m0; ++j1) {
        for (int j2 = 0; j2 < m0; ++j2) {
            if (j2 == j1) continue;
            auto& set = arr.sets[static_cast<std::size_t>(j1) * m0 + j2];
            const double quad = G(j1, j1) - 2.0 * G(j1, j2) + G(j2, j2);
            for (int i = 0; i < n; ++i) {
                if (quad + 2.0 * (T(j1, i) - T(j2, i)) < 0.0) {
                    set.push_back(i);
                }
            }
        }
    }
    return arr;
}

double pe_from_array(const PairwiseErrorArray& arr, const std::vector<std::int32_t>& surviving,
                     PeWorkspace& ws) {
    const int msub = static_cast<int>(surviving.size());
    if (msub < 2) {
        throw std::invalid_argument("pe_from_array: need at least two surviving codewords");
    }
    long total = 0;
    for (const std::int32_t j1 : surviving) {
        if (ws.epoch_ == std::numeric_limits<std::uint32_t>::max()) {
            std::fill(ws.stamp_.begin(), ws.stamp_.end(), 0u);
            ws.epoch_ = 0;
        }
        ++ws.epoch_;
        long count = 0;
        for (const std::int32_t j2 : surviving) {
            if (j2 == j1) continue;
            for (const std::int32_t i : arr.at(j1, j2)) {
                if (ws.stamp_[i] != ws.epoch_) {
                    ws.stamp_[i] = ws.epoch_;
                    ++count;
                }
            }
        }
        total += count;
    }
    return static_cast<double>(total) / (static_cast<double>(arr.n) * msub);
}

double pe_from_array(const PairwiseErrorArray& arr, const std::vector<std::int32_t>& surviving) {
    PeWorkspace ws(arr.n);
    return pe_from_array(arr, surviving, ws);
}

std::vector<double> candidate_probabilities(const std::vector<double>& pes, double beta) {
    if (pes.empty()) {
        throw std::invalid_argument("candidate_probabilities: no candidates");
    }
    if (beta < 0.0 || std::isnan(beta)) {
        throw std::invalid_argument("candidate_probabilities: beta must be nonnegative");
    }
    const std::size_t nc = pes.size();
    std::vector<double> probs(nc, 0.0);
    std::size_t argmin = 0;
    for (std::size_t c = 1; c < nc; ++c) {
        if (pes[c] < pes[argmin]) argmin = c;
    }
    if (std::isinf(beta)) {
        probs[argmin] = 1.0;
        return probs;
    }
    // Subtracting the minimum keeps every exponent in [-beta * range, 0], so
    // large beta saturates toward greedy instead of underflowing to 0/0.
    double sum = 0.0;
    for (std::size_t c = 0; c < nc; ++c) {
        probs[c] = std::exp(-beta * (pes[c] - pes[argmin]));
        sum += probs[c];
    }
    for (double& p : probs) p /= sum;
    return probs;
}

GibbsStepResult gibbs_step(const PairwiseErrorArray& arr, const std::vector<std::int32_t>& surviving,
                           int k, double beta, Rng& rng, PeWorkspace& ws) {
    const int msub = static_cast<int>(surviving.size());
    if (k < 1 || k > msub - 1) {
        throw std::invalid_argument("gibbs_step: removal size out of range");
    }

    // Enumerate the k-subsets of positions to remove, lexicographically.
    std::vector<int> pos(k);
    for (int i = 0; i < k; ++i) pos[i] = i;
    std::vector<std::vector<int>> removals;
    std::vector<double> pes;
    std::vector<std::int32_t> remainder;
    remainder.reserve(msub - k);
    while (true) {
        remainder.clear();
        int next_removed = 0;
        for (int i = 0; i < msub; ++i) {
            if (next_removed < k && pos[next_removed] == i) {
                ++next_removed;
            } else {
                remainder.push_back(surviving[i]);
            }
        }
        pes.push_back(pe_from_array(arr, remainder, ws));
        removals.push_back(pos);

        int j = k - 1;
        while (j >= 0 && pos[j] == msub - k + j) --j;
        if (j < 0) break;
        ++pos[j];
        for (int i = j + 1; i < k; ++i) pos[i] = pos[i - 1] + 1;
    }

    GibbsStepResult out;
    out.probabilities = candidate_probabilities(pes, beta);
    out.chosen = draw_categorical(out.probabilities, rng);
    const std::vector<int>& rem = removals[out.chosen];
    out.surviving.reserve(msub - k);
    int next_removed = 0;
    for (int i = 0; i < msub; ++i) {
        if (next_removed < k && rem[next_removed] == i) {
            ++next_removed;
        } else {
            out.surviving.push_back(surviving[i]);
        }
    }
    return out;
}

GibbsResult gibbs_run(const Codebook& C0, const DecoderMatrix& S, const NoiseBatch& train,
                      const NoiseBatch* validation, const GibbsConfig& cfg, Rng& rng) {
    const int m0 = C0.size();
    // m_target == m0 is allowed: the run performs zero removal steps and the
    // trace holds only the initial point.
    if (cfg.m_target < 2 || cfg.m_target > m0) {
        throw std::invalid_argument("gibbs_run: target size out of range");
    }
    if (cfg.k < 1 || (m0 - cfg.m_target) % cfg.k != 0) {
        throw std::invalid_argument("gibbs_run: removal size must divide the codewords dropped");
    }
    const int steps = (m0 - cfg.m_target) / cfg.k;

    const PairwiseErrorArray train_arr = build_pairwise_error_array(C0, S, train);
    PeWorkspace train_ws(train.size());

    const bool per_step_val = cfg.val_eval == GibbsConfig::ValEval::kEveryStep &&
                              validation != nullptr && validation->size() > 0;
    PairwiseErrorArray val_arr;
    PeWorkspace val_ws(per_step_val ? validation->size() : 1);
    if (per_step_val) {
        val_arr = build_pairwise_error_array(C0, S, *validation);
    }

    GibbsResult out;
    out.surviving.resize(m0);
    for (int j = 0; j < m0; ++j) out.surviving[j] = j;

    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto record = [&](int step) {
        ExpurgationPoint p;
        p.step = step;
        p.surviving = out.surviving;
        p.train_pe = pe_from_array(train_arr, out.surviving, train_ws);
        p.val_pe = per_step_val ? pe_from_array(val_arr, out.surviving, val_ws) : nan;
        out.trace.points.push_back(std::move(p));
    };

    record(0);
    for (int t = 1; t <= steps; ++t) {
        GibbsStepResult step = gibbs_step(train_arr, out.surviving, cfg.k, cfg.beta, rng, train_ws);
        out.surviving = std::move(step.surviving);
        record(t);
    }

    out.codebook.X.resize(C0.dim(), cfg.m_target);
    for (int j = 0; j < cfg.m_target; ++j) {
        out.codebook.X.col(j) = C0.X.col(out.surviving[j]);
    }

    if (cfg.val_eval == GibbsConfig::ValEval::kFinalOnly && validation != nullptr &&
        validation->size() > 0 && !out.trace.points.empty()) {
        out.trace.points.back().val_pe = empirical_pe(out.codebook, S, *validation);
    }
    return out;
}

}  // namespace chanlearn
