#include "mdi/lsq.hpp"

#include <Eigen/SparseQR>

#include <cmath>
#include <limits>

namespace mdi {

namespace {

void check_finite(const Eigen::VectorXd& v) {
    if (!v.allFinite()) fail(errc::invalid_argument, "least-squares input is not finite");
}

struct SvdSummary {
    Eigen::Index rank = 0;
    double sigma_max = 0.0;
    double sigma_rank = 0.0;
};

SvdSummary summarize(const Eigen::VectorXd& sigma, double tol) {
    SvdSummary out;
    out.sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
    const double cutoff = tol * out.sigma_max;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        if (sigma(i) > cutoff && sigma(i) > 0.0) {
            out.rank = i + 1;
            out.sigma_rank = sigma(i);
        }
    }
    return out;
}

} // namespace

LeastSquaresProblem LeastSquaresProblem::dense(Eigen::MatrixXd matrix, Eigen::VectorXd rhs,
                                               double rank_tolerance) {
    if (matrix.rows() < 1 || matrix.cols() < 1)
        fail(errc::invalid_argument, "least-squares matrix must be at least 1 x 1");
    if (rhs.size() != matrix.rows())
        fail(errc::invalid_argument, "rhs length does not match matrix rows");
    if (!matrix.allFinite()) fail(errc::invalid_argument, "least-squares matrix is not finite");
    check_finite(rhs);
    LeastSquaresProblem p;
    p.matrix_ = std::move(matrix);
    p.rhs_ = std::move(rhs);
    p.rank_tolerance_ = rank_tolerance;
    return p;
}

LeastSquaresProblem LeastSquaresProblem::sparse(Eigen::SparseMatrix<double> matrix,
                                                Eigen::VectorXd rhs, double rank_tolerance) {
    if (matrix.rows() < 1 || matrix.cols() < 1)
        fail(errc::invalid_argument, "least-squares matrix must be at least 1 x 1");
    if (rhs.size() != matrix.rows())
        fail(errc::invalid_argument, "rhs length does not match matrix rows");
    check_finite(rhs);
    matrix.makeCompressed();
    LeastSquaresProblem p;
    p.matrix_ = std::move(matrix);
    p.rhs_ = std::move(rhs);
    p.rank_tolerance_ = rank_tolerance;
    return p;
}

Eigen::Index LeastSquaresProblem::rows() const {
    return is_sparse() ? sparse_matrix().rows() : dense_matrix().rows();
}

Eigen::Index LeastSquaresProblem::cols() const {
    return is_sparse() ? sparse_matrix().cols() : dense_matrix().cols();
}

const Eigen::MatrixXd& LeastSquaresProblem::dense_matrix() const {
    return std::get<Eigen::MatrixXd>(matrix_);
}

const Eigen::SparseMatrix<double>& LeastSquaresProblem::sparse_matrix() const {
    return std::get<Eigen::SparseMatrix<double>>(matrix_);
}

struct DenseLsqFactorization::Impl {
    // Tall matrices go through QR first so the SVD only sees the n x n
    // triangular factor; wide matrices are decomposed directly.
    bool use_qr = false;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr;
    Eigen::BDCSVD<Eigen::MatrixXd> svd;
    Eigen::VectorXd inv_sigma; // zero past the numerical rank
    Eigen::Index cols = 0;
};

DenseLsqFactorization::DenseLsqFactorization(const Eigen::MatrixXd& matrix,
                                             double rank_tolerance, double solve_truncation) {
    auto impl = std::make_shared<Impl>();
    impl->cols = matrix.cols();
    cols_ = matrix.cols();
    if (matrix.rows() >= matrix.cols()) {
        impl->use_qr = true;
        impl->qr.compute(matrix);
        Eigen::MatrixXd r = impl->qr.matrixQR()
                                .topRows(matrix.cols())
                                .triangularView<Eigen::Upper>();
        impl->svd.compute(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
    } else {
        impl->svd.compute(matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
    }
    const Eigen::VectorXd& sigma = impl->svd.singularValues();
    const SvdSummary s = summarize(sigma, rank_tolerance);
    rank_ = s.rank;
    sigma_max_ = s.sigma_max;
    cond_ = (s.rank > 0) ? s.sigma_max / s.sigma_rank
                         : std::numeric_limits<double>::infinity();
    const double truncation = (solve_truncation > 0.0) ? solve_truncation : rank_tolerance;
    impl->inv_sigma = Eigen::VectorXd::Zero(sigma.size());
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        if (sigma(i) > truncation * s.sigma_max && sigma(i) > 0.0)
            impl->inv_sigma(i) = 1.0 / sigma(i);
    impl_ = std::move(impl);
}

Eigen::VectorXd DenseLsqFactorization::solve(const Eigen::VectorXd& rhs) const {
    const Impl& im = *impl_;
    Eigen::VectorXd reduced;
    if (im.use_qr) {
        Eigen::VectorXd qtb = im.qr.householderQ().adjoint() * rhs;
        reduced = qtb.head(im.cols);
    } else {
        reduced = rhs;
    }
    const Eigen::VectorXd y = im.inv_sigma.asDiagonal() * (im.svd.matrixU().adjoint() * reduced);
    return im.svd.matrixV() * y;
}

namespace {

LsqSolution solve_dense(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double tol) {
    DenseLsqFactorization fact(a, tol);
    LsqSolution out;
    out.x = fact.solve(b);
    out.diag.rank = fact.rank();
    out.diag.cond = fact.cond();
    out.diag.sigma_max = fact.sigma_max();
    out.diag.sigma_rank = (fact.rank() > 0) ? fact.sigma_max() / fact.cond() : 0.0;
    out.diag.rank_deficient = fact.rank_deficient();
    out.diag.residual_norm = (a * out.x - b).norm();
    return out;
}

} // namespace

LsqSolution lsq_solve(const LeastSquaresProblem& problem) {
    if (!problem.is_sparse())
        return solve_dense(problem.dense_matrix(), problem.rhs(), problem.rank_tolerance());

    const Eigen::SparseMatrix<double>& a = problem.sparse_matrix();

    // Sparse path: QR for the solve, singular values of the (small, dense)
    // triangular factor for rank and conditioning. Rank-deficient systems
    // fall back to the dense SVD so the minimum-norm contract still holds.
    Eigen::SparseQR<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> qr;
    qr.compute(a);
    if (qr.info() != Eigen::Success)
        fail(errc::degenerate_system, "sparse QR factorization failed");

    Eigen::MatrixXd r_dense = Eigen::MatrixXd(qr.matrixR()).topRows(a.cols());
    Eigen::BDCSVD<Eigen::MatrixXd> svd(r_dense);
    const SvdSummary s = summarize(svd.singularValues(), problem.rank_tolerance());

    if (s.rank < a.cols())
        return solve_dense(Eigen::MatrixXd(a), problem.rhs(), problem.rank_tolerance());

    LsqSolution out;
    out.x = qr.solve(problem.rhs());
    out.diag.rank = s.rank;
    out.diag.sigma_max = s.sigma_max;
    out.diag.sigma_rank = s.sigma_rank;
    out.diag.cond = s.sigma_max / s.sigma_rank;
    out.diag.rank_deficient = false;
    out.diag.residual_norm = (a * out.x - problem.rhs()).norm();
    return out;
}

double infinity_norm_inverse(const Eigen::MatrixXd& matrix, double tolerance) {
    if (matrix.rows() != matrix.cols())
        fail(errc::invalid_argument, "infinity-norm inverse needs a square matrix");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(matrix);
    lu.setThreshold(tolerance);
    if (!lu.isInvertible())
        fail(errc::singular_matrix, "matrix is singular at the requested tolerance");
    const Eigen::MatrixXd inv = lu.inverse();
    return inv.cwiseAbs().rowwise().sum().maxCoeff();
}

} // namespace mdi
