#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace wgb {

/// Cholesky solver for small SPD systems with two iterative-refinement sweeps
/// whose residuals are accumulated in extended precision.  Scaled-monomial
/// Gram matrices are notoriously ill conditioned as the degree grows (about
/// 1e8 at degree 4 on triangles, 1e12 by degree 6); a plain factorization then
/// loses cond * eps of forward accuracy, which is visible in coefficient-space
/// identities.  Extended-precision refinement restores near-machine accuracy
/// whenever cond * eps < 1, i.e. for every polynomial degree this library
/// actually employs.
class RefinedSpdSolver {
  public:
    explicit RefinedSpdSolver(Eigen::MatrixXd M, std::string context = "RefinedSpdSolver")
        : M_(std::move(M)), llt_(M_) {
        if (llt_.info() != Eigen::Success)
            throw std::runtime_error(context + ": matrix is not symmetric positive definite");
    }

    const Eigen::MatrixXd& matrix() const { return M_; }

    Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
        Eigen::VectorXd x = llt_.solve(b);
        for (int sweep = 0; sweep < 2; ++sweep) x += llt_.solve(residual(b, x));
        return x;
    }

    Eigen::MatrixXd solve(const Eigen::MatrixXd& B) const {
        Eigen::MatrixXd X(B.rows(), B.cols());
        for (Eigen::Index j = 0; j < B.cols(); ++j) X.col(j) = solve(Eigen::VectorXd(B.col(j)));
        return X;
    }

  private:
    Eigen::VectorXd residual(const Eigen::VectorXd& b, const Eigen::VectorXd& x) const {
        const Eigen::Index n = M_.rows();
        Eigen::VectorXd r(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            long double acc = static_cast<long double>(b[i]);
            for (Eigen::Index j = 0; j < n; ++j)
                acc -= static_cast<long double>(M_(i, j)) * static_cast<long double>(x[j]);
            r[i] = static_cast<double>(acc);
        }
        return r;
    }

    Eigen::MatrixXd M_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
};

}  // namespace wgb
