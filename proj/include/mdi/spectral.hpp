#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "mdi/grid.hpp"
#include "mdi/lsq.hpp"

namespace mdi {

// Parameters of the prescribed-decay model: smoothness order M, the
// truncation threshold for the 0/1 corner mask, and the bound assumed on the
// order-(M,...,M) mixed derivative (a pure rescaling, default 1).
struct DecayParams {
    int smoothness_order = 8;
    double truncation_bound = 1e-3;
    double derivative_bound = 1.0;
};

enum class WeightScheme { prescribed_decay, hyperbolic_corner };

struct SpectralWeights {
    WeightScheme scheme = WeightScheme::hyperbolic_corner;
    std::vector<double> values; // per frequency, flattened like grid points

    std::size_t positive_count() const;
};

// Per-frequency coefficient bound: N^d (2pi/N)^{Md} * derivative_bound *
// prod_j |e^{-2pi i k_j / N} - 1|^{-M}. Undefined when any k_j = 0.
double decay_bound(std::span<const int> freq, const UniformGrid& grid, const DecayParams& params);

SpectralWeights build_weights(const UniformGrid& grid, const DecayParams& params,
                              WeightScheme scheme);

// Real-split weighted DFT residual system: one (re, im) row pair per
// penalized frequency, one column per unknown grid point. Minimizing
// ||A v - b||_2^2 over v equals minimizing the weighted coefficient cost.
struct SpectralSystem {
    Eigen::MatrixXd matrix;
    Eigen::VectorXd rhs;
    std::vector<std::size_t> unknown_index;   // flat grid index per column
    std::vector<std::size_t> known_index;
    std::vector<std::size_t> penalized_freq;  // flat frequency index per row pair
    std::vector<double> sqrt_weight;          // per row pair
    SpectralWeights weights;                  // full weight array (diagnostics)
    GridFunction input;
    double rank_tolerance = 1e-12;  // rank/cond detection
    double solve_truncation = 0.0;  // TSVD regularization; 0 = rank_tolerance
};

SpectralSystem assemble_spectral(const GridFunction& gf, const SpectralWeights& weights);

// Rebuild only the right-hand side for new known values on the same mask.
Eigen::VectorXd spectral_rhs(const SpectralSystem& sys, const GridFunction& values);

struct SpectralDiagnostics {
    double cond = 0.0;
    double cost = 0.0; // weighted coefficient cost at the solution
    bool rank_deficient = false;
    double max_unpenalized_coeff = 0.0;
    double max_penalized_coeff = 0.0;
    Eigen::Index rank = 0;
    double residual_norm = 0.0;
};

struct SpectralResult {
    GridFunction completed;
    SpectralDiagnostics diag;
};

SpectralResult solve_spectral(const SpectralSystem& sys);

// One factorization of the design matrix, reused across right-hand sides
// (the matrix depends on mask and weights only, not on the data values).
class SpectralSolver {
public:
    explicit SpectralSolver(const SpectralSystem& sys);

    SpectralResult solve(const SpectralSystem& sys) const;
    SpectralResult solve_with_values(const SpectralSystem& sys, const GridFunction& values) const;
    double cond() const { return factorization_.cond(); }

private:
    DenseLsqFactorization factorization_;
};

// Non-normalized forward transform, N^{-d}-normalized inverse.
std::vector<std::complex<double>> dft_forward(const UniformGrid& grid,
                                              std::span<const double> values);
std::vector<std::complex<double>> dft_inverse(const UniformGrid& grid,
                                              std::span<const std::complex<double>> coeffs);

// True iff every coefficient of the completed grid with all k_j != 0
// satisfies |c_k| <= N^{d/2} * coeff_bounds[k].
bool verify_optimality_bound(const GridFunction& completed, std::span<const double> coeff_bounds);

struct InverseEstimateReport {
    double bound = 0.0;
    double measured = 0.0;
    bool pass = false;
};

// Synthesizes the grid function from coefficients inside the decay envelope
// and measures the max modulus of the order-(M-2) mixed divided difference.
InverseEstimateReport inverse_estimate_check(std::span<const std::complex<double>> coeffs,
                                             const UniformGrid& grid, int smoothness_order,
                                             double coeff_constant);

// sum_{k=1}^{N-1} |e^{2 pi i k / N} - 1|^{-2}, evaluated numerically; the
// closed form (N^2 - 1)/12 is asserted by the verification suite.
double frequency_gap_inverse_square_sum(int points_per_axis);

} // namespace mdi
