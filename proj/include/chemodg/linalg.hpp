#ifndef CHEMODG_LINALG_HPP
#define CHEMODG_LINALG_HPP

#include <optional>
#include <vector>

#include "chemodg/mesh.hpp"

namespace chemodg {

struct Triplet {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

// Compressed sparse row matrix with sorted, unique column indices per row.
class SparseMatrix {
  public:
    SparseMatrix() = default;
    static SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets);
    static SparseMatrix identity(int n);
    static SparseMatrix diagonal_matrix(const std::vector<double>& d);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int nnz() const { return static_cast<int>(values_.size()); }

    void multiply(const std::vector<double>& x, std::vector<double>* y) const;
    std::vector<double> multiply(const std::vector<double>& x) const;

    double coeff(int i, int j) const;  // 0 when the entry is not stored
    std::vector<double> diagonal() const;

    SparseMatrix plus(const SparseMatrix& other) const;
    void add_to_diagonal(const std::vector<double>& d);

    bool is_symmetric(double rtol) const;

    const std::vector<int>& row_offsets() const { return row_offsets_; }
    const std::vector<int>& col_indices() const { return col_indices_; }
    const std::vector<double>& values() const { return values_; }

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<int> row_offsets_{0};
    std::vector<int> col_indices_;
    std::vector<double> values_;
};

struct SolveReport {
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

struct SolveResult {
    std::vector<double> x;
    SolveReport report;
};

// Conjugate gradients with Jacobi preconditioning. Throws Error when A is
// not symmetric within 1e-12 relative.
SolveResult solve_spd(const SparseMatrix& A, const std::vector<double>& b,
                      double tol, int max_iter);

// BiCGStab with Jacobi preconditioning for nonsymmetric systems.
// Deterministic; breakdown is reported as non-convergence.
SolveResult solve_general(const SparseMatrix& A, const std::vector<double>& b,
                          double tol, int max_iter);

// Solves K x = b for a stiffness matrix whose kernel is the constants.
// b must have (numerically) zero sum; the result is shifted so that the
// lumped-mass weighted mean sum_i D_ii x_i vanishes. The kernel component
// is projected out of the iterates each step, so any constant added to the
// initial guess leaves the output unchanged.
SolveResult solve_mean_zero_poisson(const SparseMatrix& K, const std::vector<double>& b,
                                    const std::vector<double>& lumped_mass,
                                    double tol, int max_iter,
                                    const std::optional<std::vector<double>>& initial_guess = std::nullopt);

}  // namespace chemodg

#endif
