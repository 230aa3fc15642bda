#include "chanlearn/loss.hpp"

#include <limits>
#include <stdexcept>

#include "chanlearn/stats.hpp"

namespace chanlearn {

namespace {

void check_dims(const Codebook& C, const DecoderMatrix& S, int zdim) {
    if (C.dim() != S.dim() || C.dim() != zdim) {
        throw std::invalid_argument("codebook, decoder, and noise dimensions disagree");
    }
    if (C.size() < 2) {
        throw std::invalid_argument("need at least two codewords");
    }
}

// Gram matrix of the codebook under S: G(j,l) = x_j^T S x_l. Margins reduce
// to G and the projections T = X^T S Z, so batch evaluation is two GEMMs.
Mat gram(const Codebook& C, const DecoderMatrix& S) {
    return C.X.transpose() * (S.mat() * C.X);
}

inline double margin_from_gram(const Mat& G, const Mat& T, int j, int jp, int i) {
    return G(j, j) - 2.0 * G(j, jp) + G(jp, jp) + 2.0 * (T(j, i) - T(jp, i));
}

}  // namespace

int decode(const Codebook& C, const DecoderMatrix& S, const Vec& y) {
    if (C.dim() != S.dim() || C.dim() != y.size()) {
        throw std::invalid_argument("decode: dimension mismatch");
    }
    const int m = C.size();
    int best = 0;
    double best_d = mahalanobis_dist2(C.X.col(0), y, S.mat());
    for (int j = 1; j < m; ++j) {
        const double dj = mahalanobis_dist2(C.X.col(j), y, S.mat());
        if (dj < best_d) {
            best_d = dj;
            best = j;
        }
    }
    return best;
}

std::vector<double> loss01_per_codeword(const Codebook& C, const DecoderMatrix& S, const Vec& z) {
    check_dims(C, S, static_cast<int>(z.size()));
    const int m = C.size();
    const Mat G = gram(C, S);
    const Vec t = C.X.transpose() * (S.mat() * z);
    std::vector<double> out(m, 0.0);
    for (int j = 0; j < m; ++j) {
        for (int jp = 0; jp < m; ++jp) {
            if (jp == j) continue;
            const double mg = G(j, j) - 2.0 * G(j, jp) + G(jp, jp) + 2.0 * (t(j) - t(jp));
            if (mg < 0.0) {
                out[j] = 1.0;
                break;
            }
        }
    }
    return out;
}

std::vector<double> hinge_per_codeword(const Codebook& C, const DecoderMatrix& S, const Vec& z) {
    check_dims(C, S, static_cast<int>(z.size()));
    const int m = C.size();
    const Mat G = gram(C, S);
    const Vec t = C.X.transpose() * (S.mat() * z);
    std::vector<double> out(m, 0.0);
    for (int j = 0; j < m; ++j) {
        double min_margin = std::numeric_limits<double>::infinity();
        for (int jp = 0; jp < m; ++jp) {
            if (jp == j) continue;
            const double mg = G(j, j) - 2.0 * G(j, jp) + G(jp, jp) + 2.0 * (t(j) - t(jp));
            if (mg < min_margin) min_margin = mg;
        }
        const double h = 1.0 - min_margin;
        out[j] = h > 0.0 ? h : 0.0;
    }
    return out;
}

double empirical_pe(const Codebook& C, const DecoderMatrix& S, const NoiseBatch& Z) {
    check_dims(C, S, Z.dim());
    const int m = C.size();
    const int n = Z.size();
    if (n == 0) throw std::invalid_argument("empirical_pe: empty batch");
    const Mat G = gram(C, S);
    const Mat T = C.X.transpose() * (S.mat() * Z.samples);
    long errors = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int jp = 0; jp < m; ++jp) {
                if (jp == j) continue;
                if (margin_from_gram(G, T, j, jp, i) < 0.0) {
                    ++errors;
                    break;
                }
            }
        }
    }
    return static_cast<double>(errors) / (static_cast<double>(n) * m);
}

PeBreakdown empirical_pe_breakdown(const Codebook& C, const DecoderMatrix& S, const NoiseBatch& Z) {
    check_dims(C, S, Z.dim());
    const int m = C.size();
    const int n = Z.size();
    if (n == 0) throw std::invalid_argument("empirical_pe_breakdown: empty batch");
    const Mat G = gram(C, S);
    const Mat T = C.X.transpose() * (S.mat() * Z.samples);
    std::vector<long> errors(m, 0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int jp = 0; jp < m; ++jp) {
                if (jp == j) continue;
                if (margin_from_gram(G, T, j, jp, i) < 0.0) {
                    ++errors[j];
                    break;
                }
            }
        }
    }
    PeBreakdown out;
    out.per_codeword.resize(m);
    long total = 0;
    for (int j = 0; j < m; ++j) {
        out.per_codeword[j] = static_cast<double>(errors[j]) / n;
        total += errors[j];
    }
    out.average = static_cast<double>(total) / (static_cast<double>(n) * m);
    return out;
}

double empirical_hinge(const Codebook& C, const DecoderMatrix& S, const NoiseBatch& Z) {
    check_dims(C, S, Z.dim());
    const int m = C.size();
    const int n = Z.size();
    if (n == 0) throw std::invalid_argument("empirical_hinge: empty batch");
    const Mat G = gram(C, S);
    const Mat T = C.X.transpose() * (S.mat() * Z.samples);
    std::vector<double> per_sample(n);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < m; ++j) {
            double min_margin = std::numeric_limits<double>::infinity();
            for (int jp = 0; jp < m; ++jp) {
                if (jp == j) continue;
                const double mg = margin_from_gram(G, T, j, jp, i);
                if (mg < min_margin) min_margin = mg;
            }
            const double h = 1.0 - min_margin;
            if (h > 0.0) acc += h;
        }
        per_sample[i] = acc / m;
    }
    return pairwise_mean(per_sample);
}

std::vector<std::int32_t> select_active_row(const Codebook& C, const DecoderMatrix& S, const Vec& z) {
    check_dims(C, S, static_cast<int>(z.size()));
    const int m = C.size();
    const Mat G = gram(C, S);
    const Vec t = C.X.transpose() * (S.mat() * z);
    std::vector<std::int32_t> row(m, kNoCompetitor);
    for (int j = 0; j < m; ++j) {
        double min_margin = std::numeric_limits<double>::infinity();
        int arg = kNoCompetitor;
        for (int jp = 0; jp < m; ++jp) {
            if (jp == j) continue;
            const double mg = G(j, j) - 2.0 * G(j, jp) + G(jp, jp) + 2.0 * (t(j) - t(jp));
            if (mg < min_margin) {
                min_margin = mg;
                arg = jp;
            }
        }
        // The hinge is active only while 1 - margin >= 0; otherwise the row
        // contributes nothing to the gradient.
        row[j] = (1.0 - min_margin < 0.0) ? kNoCompetitor : arg;
    }
    return row;
}

ActiveSet select_active_set(const Codebook& C, const DecoderMatrix& S, const NoiseBatch& Z) {
    check_dims(C, S, Z.dim());
    const int m = C.size();
    const int n = Z.size();
    ActiveSet as;
    as.m = m;
    as.n = n;
    as.comp.resize(static_cast<std::size_t>(n) * m);
    for (int i = 0; i < n; ++i) {
        const std::vector<std::int32_t> row = select_active_row(C, S, Z.samples.col(i));
        for (int j = 0; j < m; ++j) {
            as.comp[static_cast<std::size_t>(i) * m + j] = row[j];
        }
    }
    return as;
}

}  // namespace chanlearn
