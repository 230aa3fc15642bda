#pragma once

#include <functional>
#include <vector>

#include "chanlearn/geometry.hpp"
#include "chanlearn/rng.hpp"

namespace chanlearn {

enum class Kernel { kGaussian, kEpanechnikov };

/// Kernel density estimate of the noise distribution: equal-weight kernels of
/// bandwidth theta, one per center (centers stored column-wise).
struct KdeModel {
    Mat centers;
    double theta = 0.0;
    Kernel kernel = Kernel::kGaussian;

    int dim() const { return static_cast<int>(centers.rows()); }
    int count() const { return static_cast<int>(centers.cols()); }
};

/// Log density of the estimate at y. The Gaussian kernel is strictly
/// positive; the Epanechnikov kernel has bounded support and can return
/// -infinity outside every kernel's ball.
double kde_log_density(const KdeModel& model, const Vec& y);
double kde_density(const KdeModel& model, const Vec& y);

/// Draw from the estimate: pick a center uniformly, then perturb by the
/// kernel at bandwidth theta.
Vec kde_sample(const KdeModel& model, Rng& rng);

/// A mixture component as a pair of callables, so estimators work the same
/// for kernel models, analytic densities, and shifted copies.
struct MixtureComponent {
    std::function<double(const Vec&)> log_density;
    std::function<Vec(Rng&)> sample;
};

MixtureComponent gaussian_component(const Vec& mean, const Mat& cov);

/// Components y = x_j + noise for every codeword, sharing one kernel model.
std::vector<MixtureComponent> shifted_components(const Codebook& C, const KdeModel& model);

struct EntropyEstimate {
    double value = 0.0;
    double se = 0.0;
    long floored = 0;  // draws whose mixture log density was clamped at the floor
};

/// Monte Carlo differential entropy of the mixture sum_j weights[j] comp_j:
/// draw from the mixture, average -log mixture density.
EntropyEstimate mixture_entropy_mc(const std::vector<MixtureComponent>& comps,
                                   const std::vector<double>& weights, int n_mc, Rng& rng);

struct BaConfig {
    int n_mc = 10000;
    int max_iters = 100;
    double tol = 1e-4;  // max absolute weight change to declare convergence
};

struct BaIterate {
    int iter = 0;
    double mi_estimate = 0.0;  // nats
    double se = 0.0;
};

struct BaResult {
    std::vector<double> weights;
    std::vector<BaIterate> trace;
    bool converged = false;
};

/// Input-weight optimization of the kernel-model channel by fixed-point
/// iteration on the weights. All divergence estimates reuse one set of noise
/// draws across codewords and iterations, so successive mutual information
/// estimates differ by weight movement only, not by fresh sampling noise.
/// On non-convergence the returned weights are the best recorded iterate.
BaResult blahut_arimoto(const Codebook& C, const KdeModel& model, const BaConfig& cfg, Rng& rng);

/// Mean squared codeword norm under the given weights, for post-hoc power
/// feasibility checks against a budget.
double weighted_power(const Codebook& C, const std::vector<double>& weights);

struct EntropyDifference {
    double difference = 0.0;  // model-mixture entropy minus reference-mixture entropy
    double se = 0.0;
    long floored = 0;
};

/// Output-entropy gap between the kernel model and a fine-bandwidth Gaussian
/// reference built from fresh draws of the exact channel, both mixed over the
/// same codebook and weights.
EntropyDifference entropy_difference_estimate(const Codebook& C, const std::vector<double>& weights,
                                              const std::function<Vec(Rng&)>& exact_noise_sampler,
                                              const KdeModel& model, int n_mc, Rng& rng);

}  // namespace chanlearn
