#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <memory>
#include <variant>

#include "mdi/error.hpp"

namespace mdi {

struct LsqDiagnostics {
    Eigen::Index rank = 0;
    double cond = 0.0;          // sigma_max / sigma_rank
    double residual_norm = 0.0; // ||A x - b||_2
    double sigma_max = 0.0;
    double sigma_rank = 0.0;    // smallest singular value counted into the rank
    bool rank_deficient = false;
};

struct LsqSolution {
    Eigen::VectorXd x; // minimum-norm least-squares solution
    LsqDiagnostics diag;
};

// Dense or sparse m x n least-squares problem. Rank is counted over singular
// values exceeding rank_tolerance * sigma_max.
class LeastSquaresProblem {
public:
    static LeastSquaresProblem dense(Eigen::MatrixXd matrix, Eigen::VectorXd rhs,
                                     double rank_tolerance = 1e-12);
    static LeastSquaresProblem sparse(Eigen::SparseMatrix<double> matrix, Eigen::VectorXd rhs,
                                      double rank_tolerance = 1e-12);

    Eigen::Index rows() const;
    Eigen::Index cols() const;
    bool is_sparse() const { return std::holds_alternative<Eigen::SparseMatrix<double>>(matrix_); }
    const Eigen::MatrixXd& dense_matrix() const;
    const Eigen::SparseMatrix<double>& sparse_matrix() const;
    const Eigen::VectorXd& rhs() const { return rhs_; }
    double rank_tolerance() const { return rank_tolerance_; }

private:
    LeastSquaresProblem() = default;
    std::variant<Eigen::MatrixXd, Eigen::SparseMatrix<double>> matrix_;
    Eigen::VectorXd rhs_;
    double rank_tolerance_ = 1e-12;
};

LsqSolution lsq_solve(const LeastSquaresProblem& problem);

// One orthogonal factorization, many right-hand sides. Used where the matrix
// stays fixed while data (hence rhs) changes, e.g. across noise seeds.
// Rank and cond are counted at rank_tolerance; the solve truncates singular
// values below solve_truncation * sigma_max (defaults to rank_tolerance), so
// noisy systems can be regularized harder than the rank test.
class DenseLsqFactorization {
public:
    DenseLsqFactorization(const Eigen::MatrixXd& matrix, double rank_tolerance = 1e-12,
                          double solve_truncation = 0.0);

    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const; // minimum-norm
    Eigen::Index rank() const { return rank_; }
    double cond() const { return cond_; }
    double sigma_max() const { return sigma_max_; }
    bool rank_deficient() const { return rank_ < cols_; }

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    Eigen::Index rank_ = 0;
    Eigen::Index cols_ = 0;
    double cond_ = 0.0;
    double sigma_max_ = 0.0;
};

// Max absolute row sum of the explicit inverse; throws singular_matrix when
// the matrix is not invertible at tolerance.
double infinity_norm_inverse(const Eigen::MatrixXd& matrix, double tolerance = 1e-12);

} // namespace mdi
