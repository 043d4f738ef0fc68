/**
 * @file sparse_solver.hpp
 * @brief Sparse LU solve with residual-driven iterative refinement.
 */
#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <stdexcept>
#include <string>
#include <vector>

namespace cflow {

class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Direct solver that reuses the symbolic analysis while the sparsity
/// pattern is unchanged between calls.
class SparseDirectSolver {
public:
    Eigen::VectorXd solve(const Eigen::SparseMatrix<double>& m, const Eigen::VectorXd& r) {
        if (m.rows() != m.cols() || m.rows() != r.size()) {
            throw std::invalid_argument("solve_sparse: dimension mismatch");
        }
        if (!same_pattern(m)) {
            lu_.analyzePattern(m);
            remember_pattern(m);
        }
        lu_.factorize(m);
        if (lu_.info() != Eigen::Success) {
            throw SingularMatrixError("solve_sparse: factorization failed (" + lu_.lastErrorMessage() + ")");
        }
        Eigen::VectorXd x = lu_.solve(r);
        const double rnorm = r.norm();
        if (rnorm == 0.0) return Eigen::VectorXd::Zero(r.size());
        for (int pass = 0; pass < 2; ++pass) {
            const Eigen::VectorXd res = r - m * x;
            if (!res.allFinite()) throw SingularMatrixError("solve_sparse: non-finite solution");
            if (res.norm() <= 1e-13 * rnorm) break;
            x += lu_.solve(res);
        }
        if (!x.allFinite()) throw SingularMatrixError("solve_sparse: non-finite solution");
        last_backward_error_ = (r - m * x).norm() / rnorm;
        return x;
    }

    double last_backward_error() const { return last_backward_error_; }

private:
    bool same_pattern(const Eigen::SparseMatrix<double>& m) const {
        if (!analysed_ || m.rows() != rows_ || m.nonZeros() != nnz_) return false;
        const auto* outer = m.outerIndexPtr();
        const auto* inner = m.innerIndexPtr();
        for (Eigen::Index i = 0; i <= m.outerSize(); ++i) {
            if (outer[i] != outer_[static_cast<std::size_t>(i)]) return false;
        }
        for (Eigen::Index i = 0; i < m.nonZeros(); ++i) {
            if (inner[i] != inner_[static_cast<std::size_t>(i)]) return false;
        }
        return true;
    }

    void remember_pattern(const Eigen::SparseMatrix<double>& m) {
        analysed_ = true;
        rows_ = m.rows();
        nnz_ = m.nonZeros();
        outer_.assign(m.outerIndexPtr(), m.outerIndexPtr() + m.outerSize() + 1);
        inner_.assign(m.innerIndexPtr(), m.innerIndexPtr() + m.nonZeros());
    }

    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
    bool analysed_ = false;
    Eigen::Index rows_ = 0;
    Eigen::Index nnz_ = 0;
    std::vector<int> outer_;
    std::vector<int> inner_;
    double last_backward_error_ = 0.0;
};

/// One-shot solve of M x = r.
inline Eigen::VectorXd solve_sparse(const Eigen::SparseMatrix<double>& m, const Eigen::VectorXd& r) {
    SparseDirectSolver solver;
    return solver.solve(m, r);
}

}  // namespace cflow
