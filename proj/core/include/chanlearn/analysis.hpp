#pragma once

namespace chanlearn {

/// Gaussian tail probability P(N(0,1) > t).
double q_function(double t);

/// Exact error probability of the two-codeword constellation +-x under a
/// quadratic-form decoder, in axis-aligned Gaussian noise with standard
/// deviations sigma1, sigma2. The codeword direction is at angle alpha from
/// the first axis; the decoder has eigenvalues s1, s2 with eigenbasis rotated
/// a further beta. Angles in radians. Homogeneous of degree zero in (s1, s2).
double antipodal_pe_exact(double sigma1, double sigma2, double s1, double s2, double alpha,
                          double beta);

struct BoundInputs {
    int n = 0;           // sample count
    int d = 0;           // dimension
    int m = 0;           // codebook size (after expurgation, where relevant)
    double delta = 0.05; // confidence level
    double r_x = 1.0;    // codeword power radius
    double r_s = 1.0;    // decoder spectral radius
    int m0 = 0;          // initial codebook size before expurgation
    int k = 1;           // codewords removed per step
    double beta = 0.0;   // inverse temperature
    double c_abs = 1.0;  // absolute constant of the high-probability bound
};

/// Uniform deviation bound on the 0-1 batch error over all codebook/decoder
/// pairs, holding with probability 1 - delta. Natural logs. Requires
/// n >= d + 1.
double zero_one_generalization_bound(const BoundInputs& b);

/// Uniform deviation bound on the clipped hinge surrogate over the
/// constrained class. Requires r_x >= 1 and r_s >= 1.
double hinge_generalization_bound(const BoundInputs& b);

struct ExpurgationBounds {
    double empirical_excess = 0.0;  // batch error gap to the best subcodebook
    double generalization = 0.0;    // population gap added by the selection
    bool premise_ok = false;        // whether the stated premise holds at these inputs
    int steps = 0;
};

/// In-expectation guarantees for temperature-beta expurgation from m0 down
/// to m codewords, k per step.
ExpurgationBounds expurgation_bounds(const BoundInputs& b);

/// High-probability counterpart, c_abs times the rate term. Requires
/// beta * sqrt(steps) < n.
double expurgation_high_prob_bound(const BoundInputs& b);

}  // namespace chanlearn
