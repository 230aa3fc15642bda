#include "chanlearn/sgd.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace chanlearn {

namespace {

void check_cfg(const SgdConfig& cfg) {
    // Zero steps are legal: the run degenerates to a fixed point and the
    // trace stays flat, which is useful as a sanity baseline.
    if (cfg.lambda < 0.0 || cfg.eta < 0.0) {
        throw std::invalid_argument("step sizes must not be negative");
    }
    if (cfg.r_x <= 0.0 || cfg.r_s <= 0.0) {
        throw std::invalid_argument("constraint radii must be positive");
    }
    if (cfg.record_every < 1) {
        throw std::invalid_argument("record_every must be at least 1");
    }
}

TracePoint eval_point(int iter, const Codebook& C, const DecoderMatrix& S,
                      const NoiseBatch& train, const NoiseBatch* validation) {
    TracePoint p;
    p.iter = iter;
    p.train_hinge = empirical_hinge(C, S, train);
    p.train_pe = empirical_pe(C, S, train);
    if (validation != nullptr && validation->size() > 0) {
        p.val_hinge = empirical_hinge(C, S, *validation);
        p.val_pe = empirical_pe(C, S, *validation);
    } else {
        p.val_hinge = std::numeric_limits<double>::quiet_NaN();
        p.val_pe = std::numeric_limits<double>::quiet_NaN();
    }
    return p;
}

void apply_updates(Codebook& C, DecoderMatrix& S, const Mat& gx, const Mat& gs,
                   const SgdConfig& cfg) {
    const int m = C.size();
    for (int p = 0; p < m; ++p) {
        C.X.col(p) = project_ball(C.X.col(p) - cfg.lambda * gx.col(p), cfg.r_x);
    }
    const Mat sym = 0.5 * (gs + gs.transpose());
    S = project_psd(S.mat() - cfg.eta * sym, cfg.r_s);
}

}  // namespace

double relaxed_loss(const Codebook& C, const DecoderMatrix& S,
                    const std::vector<std::int32_t>& row, const Vec& z) {
    const int m = C.size();
    if (static_cast<int>(row.size()) != m) {
        throw std::invalid_argument("relaxed_loss: row size mismatch");
    }
    double acc = 0.0;
    for (int j = 0; j < m; ++j) {
        const std::int32_t l = row[j];
        if (l == kNoCompetitor) continue;
        const Vec u = C.X.col(j) - C.X.col(l);
        const double margin = u.dot(S.mat() * u) + 2.0 * u.dot(S.mat() * z);
        acc += 1.0 - margin;
    }
    return acc / m;
}

Mat grad_codewords(const Codebook& C, const DecoderMatrix& S,
                   const std::vector<std::int32_t>& row, const Vec& z) {
    const int m = C.size();
    const int d = C.dim();
    if (static_cast<int>(row.size()) != m) {
        throw std::invalid_argument("grad_codewords: row size mismatch");
    }
    Mat g = Mat::Zero(d, m);
    const Vec Sz = S.mat() * z;
    const double scale = 2.0 / m;
    // Each active pair (j, l = row[j]) feeds both endpoints. Summed over
    // pairs this reproduces d relaxed_loss / d x_p for every p.
    for (int j = 0; j < m; ++j) {
        const std::int32_t l = row[j];
        if (l == kNoCompetitor) continue;
        const Vec Su = S.mat() * (C.X.col(j) - C.X.col(l));
        g.col(j) -= scale * (Su + Sz);
        g.col(l) -= scale * (-Su - Sz);
    }
    return g;
}

Mat grad_S(const Codebook& C, const std::vector<std::int32_t>& row, const Vec& z) {
    const int m = C.size();
    const int d = C.dim();
    if (static_cast<int>(row.size()) != m) {
        throw std::invalid_argument("grad_S: row size mismatch");
    }
    Mat g = Mat::Zero(d, d);
    for (int j = 0; j < m; ++j) {
        const std::int32_t l = row[j];
        if (l == kNoCompetitor) continue;
        const Vec u = C.X.col(j) - C.X.col(l);
        g -= u * u.transpose() + 2.0 * u * z.transpose();
    }
    return g / m;
}

DecoderMatrix init_decoder_from_samples(const NoiseBatch& Z, int d, double r_s,
                                        bool* ridge_used) {
    if (Z.dim() != d) {
        throw std::invalid_argument("init_decoder_from_samples: dimension mismatch");
    }
    if (Z.size() < d) {
        throw std::invalid_argument("init_decoder_from_samples: need at least d samples");
    }
    Mat acc = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        acc += Z.samples.col(i) * Z.samples.col(i).transpose();
    }
    const double tr = acc.trace();
    const double ridge = tr > 0.0 ? 1e-8 * tr / d : 1e-8;
    const Mat reg = acc + ridge * Mat::Identity(d, d);
    // d outer products are generically full rank, so the ridge only matters
    // for degenerate draws; report it so callers can notice.
    if (ridge_used != nullptr) {
        Eigen::SelfAdjointEigenSolver<Mat> solver(acc);
        *ridge_used = solver.eigenvalues()(0) <= ridge;
    }
    const Mat inv = reg.llt().solve(Mat::Identity(d, d));
    return project_psd(inv, r_s);
}

SgdResult sgd_run(Codebook C0, DecoderMatrix S0, const NoiseBatch& train,
                  const NoiseBatch* validation, const SgdConfig& cfg) {
    check_cfg(cfg);
    const int n = train.size();
    if (n == 0) throw std::invalid_argument("sgd_run: empty training batch");
    const int iters = cfg.n_iters;
    if (iters < 0) throw std::invalid_argument("sgd_run: n_iters must be nonnegative");
    if (iters > n) {
        throw std::invalid_argument("sgd_run: n_iters exceeds the batch (single pass only)");
    }

    SgdResult out{std::move(C0), std::move(S0), {}};
    out.trace.points.push_back(eval_point(0, out.codebook, out.decoder, train, validation));
    for (int t = 0; t < iters; ++t) {
        const Vec z = train.samples.col(t);
        const std::vector<std::int32_t> row = select_active_row(out.codebook, out.decoder, z);
        const Mat gx = grad_codewords(out.codebook, out.decoder, row, z);
        const Mat gs = grad_S(out.codebook, row, z);
        apply_updates(out.codebook, out.decoder, gx, gs, cfg);
        const int done = t + 1;
        if (done % cfg.record_every == 0 || done == iters) {
            out.trace.points.push_back(eval_point(done, out.codebook, out.decoder, train, validation));
        }
    }
    return out;
}

SgdResult gradient_descent_run(Codebook C0, DecoderMatrix S0, const NoiseBatch& train,
                               const NoiseBatch* validation, const SgdConfig& cfg) {
    check_cfg(cfg);
    const int n = train.size();
    if (n == 0) throw std::invalid_argument("gradient_descent_run: empty training batch");
    if (cfg.n_iters < 1) {
        throw std::invalid_argument("gradient_descent_run: n_iters must be at least 1");
    }

    SgdResult out{std::move(C0), std::move(S0), {}};
    out.trace.points.push_back(eval_point(0, out.codebook, out.decoder, train, validation));
    const int d = out.codebook.dim();
    const int m = out.codebook.size();
    for (int t = 0; t < cfg.n_iters; ++t) {
        Mat gx = Mat::Zero(d, m);
        Mat gs = Mat::Zero(d, d);
        for (int i = 0; i < n; ++i) {
            const Vec z = train.samples.col(i);
            const std::vector<std::int32_t> row = select_active_row(out.codebook, out.decoder, z);
            gx += grad_codewords(out.codebook, out.decoder, row, z);
            gs += grad_S(out.codebook, row, z);
        }
        gx /= n;
        gs /= n;
        apply_updates(out.codebook, out.decoder, gx, gs, cfg);
        const int done = t + 1;
        if (done % cfg.record_every == 0 || done == cfg.n_iters) {
            out.trace.points.push_back(eval_point(done, out.codebook, out.decoder, train, validation));
        }
    }
    return out;
}

}  // namespace chanlearn
