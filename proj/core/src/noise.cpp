#include "chanlearn/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace chanlearn {

namespace {

// Symmetric square root of a PSD matrix; tolerates eigenvalues down to
// -1e-10 * scale (clamped to zero), rejects anything more negative.
Mat psd_sqrt(const Mat& K) {
    Eigen::SelfAdjointEigenSolver<Mat> solver(0.5 * (K + K.transpose()));
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("psd_sqrt: eigendecomposition failed");
    }
    Vec vals = solver.eigenvalues();
    const double scale = std::max(1.0, std::abs(vals(vals.size() - 1)));
    for (int q = 0; q < vals.size(); ++q) {
        if (vals(q) < -1e-10 * scale) {
            throw std::invalid_argument("psd_sqrt: covariance is not positive semidefinite");
        }
        vals(q) = std::sqrt(std::max(vals(q), 0.0));
    }
    return solver.eigenvectors() * vals.asDiagonal() * solver.eigenvectors().transpose();
}

}  // namespace

NoiseBatch sample_gaussian(const Mat& K, int n, Rng& rng,
                           std::optional<double> project_radius) {
    if (K.rows() != K.cols() || K.rows() < 1) {
        throw std::invalid_argument("sample_gaussian: covariance must be square");
    }
    if (n < 0) throw std::invalid_argument("sample_gaussian: n must be >= 0");
    const int d = static_cast<int>(K.rows());
    const Mat B = psd_sqrt(K);
    Mat out(d, n);
    Vec g(d);
    for (int i = 0; i < n; ++i) {
        for (int q = 0; q < d; ++q) g(q) = rng.normal();
        Vec z = B * g;
        if (project_radius) z = project_ball(z, *project_radius);
        out.col(i) = z;
    }
    return NoiseBatch(std::move(out));
}

Mat sample_wishart(int d, Rng& rng) {
    if (d < 1) throw std::invalid_argument("sample_wishart: d must be >= 1");
    Mat Q(d, d);
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) Q(r, c) = rng.normal();
    }
    return Q * Q.transpose();
}

Mat GaussianMixtureChannel::pre_projection_cov() const {
    return alpha * (interference * interference.transpose() + gaussian_cov);
}

NoiseBatch GaussianMixtureChannel::sample(int n, Rng& rng) const {
    if (n < 0) throw std::invalid_argument("GaussianMixtureChannel::sample: n must be >= 0");
    const int d = dim();
    const int s = paths();
    const Mat B = psd_sqrt(gaussian_cov);
    const double root_alpha = std::sqrt(alpha);
    Mat out(d, n);
    Vec g(d);
    for (int i = 0; i < n; ++i) {
        Vec z = Vec::Zero(d);
        for (int l = 0; l < s; ++l) {
            z += static_cast<double>(rng.sign()) * interference.col(l);
        }
        for (int q = 0; q < d; ++q) g(q) = rng.normal();
        z += B * g;
        z *= root_alpha;
        if (project) z = project_ball(z, 1.0);
        out.col(i) = z;
    }
    return NoiseBatch(std::move(out));
}

GaussianMixtureChannel draw_gm_channel(int d, int s, Rng& rng,
                                       bool project, double chi_z) {
    if (d < 1) throw std::invalid_argument("draw_gm_channel: d must be >= 1");
    if (s < 0) throw std::invalid_argument("draw_gm_channel: s must be >= 0");
    if (project && !(chi_z > 0.0)) {
        throw std::invalid_argument("draw_gm_channel: chi_z must be positive when projecting");
    }
    GaussianMixtureChannel ch;
    ch.interference.resize(d, s);
    for (int l = 0; l < s; ++l) {
        for (int q = 0; q < d; ++q) ch.interference(q, l) = rng.normal();
    }
    ch.gaussian_cov = sample_wishart(d, rng);
    ch.project = project;
    ch.chi_z = project ? chi_z : 0.0;
    ch.alpha = 1.0;
    if (project) {
        const Mat raw = ch.interference * ch.interference.transpose() + ch.gaussian_cov;
        Eigen::SelfAdjointEigenSolver<Mat> solver(raw);
        const double top = solver.eigenvalues()(d - 1);
        if (!(top > 0.0)) {
            throw std::runtime_error("draw_gm_channel: degenerate channel covariance");
        }
        ch.alpha = 1.0 / (chi_z * top);
    }
    return ch;
}

double input_mutual_information(const Mat& K, double phi_x, double r) {
    if (K.rows() != K.cols() || K.rows() < 1) {
        throw std::invalid_argument("input_mutual_information: K must be square");
    }
    if (!(phi_x > 0.0)) {
        throw std::invalid_argument("input_mutual_information: phi_x must be positive");
    }
    if (r < 0.0) throw std::invalid_argument("input_mutual_information: r must be >= 0");
    const int d = static_cast<int>(K.rows());
    Eigen::SelfAdjointEigenSolver<Mat> solver(0.5 * (K + K.transpose()));
    const Vec& vals = solver.eigenvalues();
    if (!(vals(0) > 0.0)) {
        throw std::invalid_argument("input_mutual_information: K must be positive definite");
    }
    const double per_dim = r * r / (phi_x * static_cast<double>(d));
    double sum = 0.0;
    for (int q = 0; q < d; ++q) sum += std::log1p(per_dim / vals(q));
    return 0.5 * sum;
}

PowerCalibration calibrate_power(const Mat& K, double phi_x, double Gamma, int m) {
    if (m < 2) throw std::invalid_argument("calibrate_power: m must be >= 2");
    if (!(Gamma > 0.0)) throw std::invalid_argument("calibrate_power: Gamma must be positive");
    const double target = std::log(static_cast<double>(m));

    double lo = 1e-6;
    double hi = 1.0;
    while (input_mutual_information(K, phi_x, hi) <= target) {
        hi *= 2.0;
        if (hi > 1e12) throw std::runtime_error("calibrate_power: bracket growth failed");
    }
    if (input_mutual_information(K, phi_x, lo) > target) {
        throw std::runtime_error("calibrate_power: lower bracket already exceeds the target");
    }
    while ((hi - lo) / hi > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        if (input_mutual_information(K, phi_x, mid) > target) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    PowerCalibration out;
    out.r_min = 0.5 * (lo + hi);
    out.r_x = std::sqrt(Gamma) * out.r_min;
    return out;
}

Codebook random_codebook(int m, int d, double r_x, double phi_x, Rng& rng, bool project) {
    if (m < 1) throw std::invalid_argument("random_codebook: m must be >= 1");
    if (d < 1) throw std::invalid_argument("random_codebook: d must be >= 1");
    if (!(r_x > 0.0) || !(phi_x > 0.0)) {
        throw std::invalid_argument("random_codebook: r_x and phi_x must be positive");
    }
    const double sigma = r_x / std::sqrt(phi_x * static_cast<double>(d));
    Mat X(d, m);
    for (int j = 0; j < m; ++j) {
        Vec x(d);
        for (int q = 0; q < d; ++q) x(q) = sigma * rng.normal();
        X.col(j) = project ? project_ball(x, r_x) : x;
    }
    return Codebook(std::move(X));
}

}  // namespace chanlearn
