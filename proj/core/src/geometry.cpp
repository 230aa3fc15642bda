#include "chanlearn/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace chanlearn {

namespace {

// Reverse SelfAdjointEigenSolver's ascending order and fix eigenvector signs
// (first component with magnitude above 1e-12 made positive) so repeated
// decompositions of equal inputs agree bit for bit.
void eigs_descending(const Mat& sym, Mat& vecs, Vec& vals) {
    Eigen::SelfAdjointEigenSolver<Mat> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigendecomposition failed");
    }
    const int d = static_cast<int>(sym.rows());
    vecs.resize(d, d);
    vals.resize(d);
    for (int q = 0; q < d; ++q) {
        vals(q) = solver.eigenvalues()(d - 1 - q);
        Vec v = solver.eigenvectors().col(d - 1 - q);
        for (int i = 0; i < d; ++i) {
            if (std::abs(v(i)) > 1e-12) {
                if (v(i) < 0.0) v = -v;
                break;
            }
        }
        vecs.col(q) = v;
    }
}

}  // namespace

double mahalanobis_dist2(const Vec& x, const Vec& y, const Mat& S) {
    if (x.size() != y.size() || S.rows() != x.size() || S.cols() != x.size()) {
        throw std::invalid_argument("mahalanobis_dist2: dimension mismatch");
    }
    const Vec w = x - y;
    return w.dot(S * w);
}

Vec project_ball(const Vec& x, double radius) {
    if (!(radius > 0.0)) {
        throw std::invalid_argument("project_ball: radius must be positive");
    }
    const double norm = x.norm();
    if (norm <= radius) return x;
    return x * (radius / norm);
}

DecoderMatrix::DecoderMatrix(const Mat& S) {
    if (S.rows() != S.cols() || S.rows() < 1) {
        throw std::invalid_argument("DecoderMatrix: matrix must be square");
    }
    S_ = 0.5 * (S + S.transpose());
    eigs_descending(S_, vecs_, vals_);
    const double scale = std::max(1.0, std::abs(vals_(0)));
    for (int q = 0; q < vals_.size(); ++q) {
        if (vals_(q) < -1e-10 * scale) {
            throw std::invalid_argument("DecoderMatrix: matrix is not positive semidefinite");
        }
        if (vals_(q) < 0.0) vals_(q) = 0.0;
    }
    // Rebuild from the clamped spectrum so mat() agrees with the eigensystem.
    S_ = vecs_ * vals_.asDiagonal() * vecs_.transpose();
    S_ = 0.5 * (S_ + S_.transpose());
}

DecoderMatrix DecoderMatrix::identity(int d) {
    if (d < 1) throw std::invalid_argument("DecoderMatrix::identity: d must be >= 1");
    DecoderMatrix out;
    out.S_ = Mat::Identity(d, d);
    out.vecs_ = Mat::Identity(d, d);
    out.vals_ = Vec::Ones(d);
    return out;
}

DecoderMatrix project_psd(const Mat& S, double r_s) {
    if (S.rows() != S.cols() || S.rows() < 1) {
        throw std::invalid_argument("project_psd: matrix must be square");
    }
    if (!(r_s > 0.0)) {
        throw std::invalid_argument("project_psd: r_s must be positive");
    }
    const Mat sym = 0.5 * (S + S.transpose());
    DecoderMatrix out;
    eigs_descending(sym, out.vecs_, out.vals_);
    for (int q = 0; q < out.vals_.size(); ++q) {
        if (out.vals_(q) < 0.0) out.vals_(q) = 0.0;
    }
    const double top = out.vals_(0);
    if (top > r_s) {
        out.vals_ *= r_s / top;
    }
    out.S_ = out.vecs_ * out.vals_.asDiagonal() * out.vecs_.transpose();
    out.S_ = 0.5 * (out.S_ + out.S_.transpose());
    return out;
}

}  // namespace chanlearn
