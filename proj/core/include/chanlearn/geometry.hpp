#pragma once

#include <Eigen/Dense>

namespace chanlearn {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Ordered set of codewords, one per column of X (d rows, m columns).
struct Codebook {
    Mat X;

    Codebook() = default;
    explicit Codebook(Mat points) : X(std::move(points)) {}

    int dim() const { return static_cast<int>(X.rows()); }
    int size() const { return static_cast<int>(X.cols()); }
};

/// Squared Mahalanobis distance (x - y)^T S (x - y).
double mahalanobis_dist2(const Vec& x, const Vec& y, const Mat& S);

/// Radial projection onto the closed Euclidean ball of the given radius.
/// Points inside (and the origin) are left untouched.
Vec project_ball(const Vec& x, double radius);

struct BallConstraint {
    double radius;
    Vec operator()(const Vec& x) const { return project_ball(x, radius); }
};

/// PSD decoder metric with its eigendecomposition kept alongside.
///
/// The constructor symmetrizes its input (updates routinely produce small
/// asymmetries) and rejects matrices with a meaningfully negative spectrum.
/// Eigenvalues are stored in descending order; each eigenvector is sign-fixed
/// so its first component of non-negligible magnitude is positive.
class DecoderMatrix {
public:
    explicit DecoderMatrix(const Mat& S);

    static DecoderMatrix identity(int d);

    int dim() const { return static_cast<int>(S_.rows()); }
    const Mat& mat() const { return S_; }
    const Vec& eigenvalues() const { return vals_; }
    const Mat& eigenvectors() const { return vecs_; }
    double max_eigenvalue() const { return vals_.size() > 0 ? vals_(0) : 0.0; }

private:
    DecoderMatrix() = default;

    Mat S_;
    Mat vecs_;  // columns, matching vals_
    Vec vals_;  // descending, all >= 0

    friend DecoderMatrix project_psd(const Mat& S, double r_s);
};

/// Projection onto the PSD matrices with spectrum capped at r_s: symmetrize,
/// clamp negative eigenvalues to zero, then rescale the whole spectrum by
/// min(r_s / max eigenvalue, 1) so all eigenvalues land in [0, r_s].
DecoderMatrix project_psd(const Mat& S, double r_s);

}  // namespace chanlearn
