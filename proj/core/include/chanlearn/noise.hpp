#pragma once

#include <optional>

#include "chanlearn/geometry.hpp"
#include "chanlearn/rng.hpp"

namespace chanlearn {

enum class BatchOrigin { kTrain, kValidation };

/// Batch of noise samples, one per column. The origin tag records what the
/// batch is for; estimators ignore it.
struct NoiseBatch {
    Mat samples;
    BatchOrigin origin = BatchOrigin::kTrain;

    NoiseBatch() = default;
    explicit NoiseBatch(Mat s) : samples(std::move(s)) {}

    int dim() const { return static_cast<int>(samples.rows()); }
    int size() const { return static_cast<int>(samples.cols()); }
};

/// n draws from N(0, K), optionally radially projected onto a ball.
/// K must be PSD; the symmetric square root is used, so K = 0 yields zeros.
NoiseBatch sample_gaussian(const Mat& K, int n, Rng& rng,
                           std::optional<double> project_radius = std::nullopt);

/// Q Q^T where the d^2 entries of Q are i.i.d. standard normal.
Mat sample_wishart(int d, Rng& rng);

/// Additive interference channel: s binary interferers with signature columns
/// v_l plus Gaussian noise with covariance K_W, scaled by sqrt(alpha) and
/// optionally projected onto the unit ball.
struct GaussianMixtureChannel {
    Mat interference;   // d x s, column l is v_l
    Mat gaussian_cov;   // K_W
    double alpha = 1.0; // 1 when not projecting
    bool project = false;
    double chi_z = 0.0; // top-eigenvalue margin used to pick alpha when projecting

    int dim() const { return static_cast<int>(interference.rows()); }
    int paths() const { return static_cast<int>(interference.cols()); }

    /// Covariance before projection: alpha * (sum_l v_l v_l^T + K_W).
    Mat pre_projection_cov() const;

    NoiseBatch sample(int n, Rng& rng) const;
};

/// Draws v_l ~ N(0, I_d) and a Wishart K_W. When projecting, alpha is set so
/// the pre-projection covariance has top eigenvalue exactly 1/chi_z (keeping
/// the unit-ball projection a rare event); otherwise alpha = 1.
GaussianMixtureChannel draw_gm_channel(int d, int s, Rng& rng,
                                       bool project, double chi_z = 0.0);

/// 1/2 log det((r^2/(phi_x d)) I + K) - 1/2 log det(K), natural log: the
/// Gaussian-input mutual information proxy used to calibrate transmit power.
double input_mutual_information(const Mat& K, double phi_x, double r);

struct PowerCalibration {
    double r_min;  // smallest radius whose mutual information exceeds log m
    double r_x;    // sqrt(Gamma) * r_min
};

/// Bisection for r_min (bracket grown by doubling, relative tolerance 1e-6),
/// then r_x = sqrt(Gamma) * r_min. K must be positive definite, m >= 2.
PowerCalibration calibrate_power(const Mat& K, double phi_x, double Gamma, int m);

/// m codewords drawn i.i.d. from N(0, (r_x^2/(phi_x d)) I), each column then
/// projected onto the r_x ball unless project is false.
Codebook random_codebook(int m, int d, double r_x, double phi_x, Rng& rng,
                         bool project = true);

}  // namespace chanlearn
