#include "chemodg/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace chemodg {

namespace {

double dot_vec(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot_vec(a, a)); }

void remove_mean(std::vector<double>* v) {
    double m = 0.0;
    for (double x : *v) m += x;
    m /= static_cast<double>(v->size());
    for (double& x : *v) x -= m;
}

}  // namespace

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, std::vector<Triplet> triplets) {
    SparseMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    m.row_offsets_.assign(rows + 1, 0);
    for (size_t i = 0; i < triplets.size();) {
        size_t j = i;
        double sum = 0.0;
        while (j < triplets.size() && triplets[j].row == triplets[i].row &&
               triplets[j].col == triplets[i].col) {
            sum += triplets[j].value;
            ++j;
        }
        if (triplets[i].row < 0 || triplets[i].row >= rows || triplets[i].col < 0 ||
            triplets[i].col >= cols)
            throw Error("SparseMatrix::from_triplets: index out of range");
        m.col_indices_.push_back(triplets[i].col);
        m.values_.push_back(sum);
        ++m.row_offsets_[triplets[i].row + 1];
        i = j;
    }
    for (int r = 0; r < rows; ++r) m.row_offsets_[r + 1] += m.row_offsets_[r];
    return m;
}

SparseMatrix SparseMatrix::identity(int n) {
    std::vector<Triplet> t(n);
    for (int i = 0; i < n; ++i) t[i] = {i, i, 1.0};
    return from_triplets(n, n, std::move(t));
}

SparseMatrix SparseMatrix::diagonal_matrix(const std::vector<double>& d) {
    const int n = static_cast<int>(d.size());
    std::vector<Triplet> t(n);
    for (int i = 0; i < n; ++i) t[i] = {i, i, d[i]};
    return from_triplets(n, n, std::move(t));
}

void SparseMatrix::multiply(const std::vector<double>& x, std::vector<double>* y) const {
    y->assign(rows_, 0.0);
    for (int r = 0; r < rows_; ++r) {
        double s = 0.0;
        for (int k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k)
            s += values_[k] * x[col_indices_[k]];
        (*y)[r] = s;
    }
}

std::vector<double> SparseMatrix::multiply(const std::vector<double>& x) const {
    std::vector<double> y;
    multiply(x, &y);
    return y;
}

double SparseMatrix::coeff(int i, int j) const {
    auto first = col_indices_.begin() + row_offsets_[i];
    auto last = col_indices_.begin() + row_offsets_[i + 1];
    auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return 0.0;
    return values_[it - col_indices_.begin()];
}

std::vector<double> SparseMatrix::diagonal() const {
    std::vector<double> d(rows_, 0.0);
    for (int i = 0; i < std::min(rows_, cols_); ++i) d[i] = coeff(i, i);
    return d;
}

SparseMatrix SparseMatrix::plus(const SparseMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw Error("SparseMatrix::plus: dimension mismatch");
    std::vector<Triplet> t;
    t.reserve(values_.size() + other.values_.size());
    for (int r = 0; r < rows_; ++r) {
        for (int k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k)
            t.push_back({r, col_indices_[k], values_[k]});
        for (int k = other.row_offsets_[r]; k < other.row_offsets_[r + 1]; ++k)
            t.push_back({r, other.col_indices_[k], other.values_[k]});
    }
    return from_triplets(rows_, cols_, std::move(t));
}

void SparseMatrix::add_to_diagonal(const std::vector<double>& d) {
    if (static_cast<int>(d.size()) != rows_ || rows_ != cols_)
        throw Error("add_to_diagonal: dimension mismatch");
    for (int i = 0; i < rows_; ++i) {
        auto first = col_indices_.begin() + row_offsets_[i];
        auto last = col_indices_.begin() + row_offsets_[i + 1];
        auto it = std::lower_bound(first, last, i);
        if (it == last || *it != i) throw Error("add_to_diagonal: missing diagonal entry");
        values_[it - col_indices_.begin()] += d[i];
    }
}

bool SparseMatrix::is_symmetric(double rtol) const {
    if (rows_ != cols_) return false;
    double scale = 0.0;
    for (double v : values_) scale = std::max(scale, std::abs(v));
    for (int r = 0; r < rows_; ++r)
        for (int k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
            double diff = std::abs(values_[k] - coeff(col_indices_[k], r));
            if (diff > rtol * std::max(1.0, scale)) return false;
        }
    return true;
}

SolveResult solve_spd(const SparseMatrix& A, const std::vector<double>& b,
                      double tol, int max_iter) {
    if (A.rows() != A.cols() || A.rows() != static_cast<int>(b.size()))
        throw Error("solve_spd: dimension mismatch");
    if (!A.is_symmetric(1e-12)) throw Error("solve_spd: matrix is not symmetric");
    const int n = A.rows();
    SolveResult out;
    out.x.assign(n, 0.0);
    double bnorm = norm2(b);
    if (bnorm == 0.0) {
        out.report.converged = true;
        return out;
    }
    std::vector<double> diag = A.diagonal();
    std::vector<double> inv_diag(n);
    for (int i = 0; i < n; ++i) inv_diag[i] = diag[i] != 0.0 ? 1.0 / diag[i] : 1.0;

    std::vector<double> r = b;
    std::vector<double> z(n), p(n), Ap(n);
    for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    p = z;
    double rz = dot_vec(r, z);
    for (int k = 1; k <= max_iter; ++k) {
        A.multiply(p, &Ap);
        double pAp = dot_vec(p, Ap);
        if (pAp <= 0.0) break;  // loss of positive definiteness
        double alpha = rz / pAp;
        for (int i = 0; i < n; ++i) {
            out.x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        double rnorm = norm2(r);
        out.report.iterations = k;
        out.report.relative_residual = rnorm / bnorm;
        if (rnorm <= tol * bnorm) {
            out.report.converged = true;
            return out;
        }
        for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
        double rz_new = dot_vec(r, z);
        double beta = rz_new / rz;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        rz = rz_new;
    }
    out.report.converged = false;
    return out;
}

SolveResult solve_general(const SparseMatrix& A, const std::vector<double>& b,
                          double tol, int max_iter) {
    if (A.rows() != A.cols() || A.rows() != static_cast<int>(b.size()))
        throw Error("solve_general: dimension mismatch");
    const int n = A.rows();
    SolveResult out;
    out.x.assign(n, 0.0);
    double bnorm = norm2(b);
    if (bnorm == 0.0) {
        out.report.converged = true;
        return out;
    }
    std::vector<double> diag = A.diagonal();
    std::vector<double> inv_diag(n);
    for (int i = 0; i < n; ++i) inv_diag[i] = diag[i] != 0.0 ? 1.0 / diag[i] : 1.0;

    std::vector<double> r = b;
    std::vector<double> r0 = r;
    std::vector<double> p(n, 0.0), v(n, 0.0), s(n), t(n), phat(n), shat(n);
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    for (int k = 1; k <= max_iter; ++k) {
        double rho_new = dot_vec(r0, r);
        if (std::abs(rho_new) < 1e-300) break;  // breakdown
        if (k == 1) {
            p = r;
        } else {
            double beta = (rho_new / rho) * (alpha / omega);
            for (int i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        rho = rho_new;
        for (int i = 0; i < n; ++i) phat[i] = inv_diag[i] * p[i];
        A.multiply(phat, &v);
        double r0v = dot_vec(r0, v);
        if (std::abs(r0v) < 1e-300) break;
        alpha = rho / r0v;
        for (int i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
        double snorm = norm2(s);
        if (snorm <= tol * bnorm) {
            for (int i = 0; i < n; ++i) out.x[i] += alpha * phat[i];
            out.report.iterations = k;
            out.report.relative_residual = snorm / bnorm;
            out.report.converged = true;
            return out;
        }
        for (int i = 0; i < n; ++i) shat[i] = inv_diag[i] * s[i];
        A.multiply(shat, &t);
        double tt = dot_vec(t, t);
        if (tt < 1e-300) break;
        omega = dot_vec(t, s) / tt;
        if (omega == 0.0) break;
        for (int i = 0; i < n; ++i) {
            out.x[i] += alpha * phat[i] + omega * shat[i];
            r[i] = s[i] - omega * t[i];
        }
        double rnorm = norm2(r);
        out.report.iterations = k;
        out.report.relative_residual = rnorm / bnorm;
        if (rnorm <= tol * bnorm) {
            out.report.converged = true;
            return out;
        }
    }
    // Recompute the true residual for the report.
    std::vector<double> Ax = A.multiply(out.x);
    for (int i = 0; i < n; ++i) Ax[i] = b[i] - Ax[i];
    out.report.relative_residual = norm2(Ax) / bnorm;
    out.report.converged = out.report.relative_residual <= tol;
    return out;
}

SolveResult solve_mean_zero_poisson(const SparseMatrix& K, const std::vector<double>& b,
                                    const std::vector<double>& lumped_mass,
                                    double tol, int max_iter,
                                    const std::optional<std::vector<double>>& initial_guess) {
    const int n = K.rows();
    if (K.cols() != n || static_cast<int>(b.size()) != n ||
        static_cast<int>(lumped_mass.size()) != n)
        throw Error("solve_mean_zero_poisson: dimension mismatch");

    long double sum_b = 0.0L, abs_b = 0.0L;
    for (double v : b) {
        sum_b += v;
        abs_b += std::abs(v);
    }
    if (std::abs(static_cast<double>(sum_b)) >
        1e-10 * std::max(1.0, static_cast<double>(abs_b)))
        throw Error("solve_mean_zero_poisson: right-hand side is not compatible (nonzero sum)");

    std::vector<double> rhs = b;
    remove_mean(&rhs);

    SolveResult out;
    if (initial_guess) {
        if (static_cast<int>(initial_guess->size()) != n)
            throw Error("solve_mean_zero_poisson: bad initial guess size");
        out.x = *initial_guess;
    } else {
        out.x.assign(n, 0.0);
    }
    remove_mean(&out.x);

    double bnorm = norm2(rhs);
    auto finish = [&]() {
        // Shift to zero lumped-mass mean.
        long double num = 0.0L, den = 0.0L;
        for (int i = 0; i < n; ++i) {
            num += static_cast<long double>(lumped_mass[i]) * out.x[i];
            den += lumped_mass[i];
        }
        double shift = static_cast<double>(num / den);
        for (double& v : out.x) v -= shift;
    };
    if (bnorm == 0.0 && !initial_guess) {
        out.report.converged = true;
        finish();
        return out;
    }

    // CG on the constants-orthogonal complement; the mean of the residual
    // and iterate is projected out every step to stop kernel drift.
    std::vector<double> r = K.multiply(out.x);
    for (int i = 0; i < n; ++i) r[i] = rhs[i] - r[i];
    remove_mean(&r);
    if (bnorm == 0.0) bnorm = 1.0;

    std::vector<double> diag = K.diagonal();
    std::vector<double> inv_diag(n);
    for (int i = 0; i < n; ++i) inv_diag[i] = diag[i] > 0.0 ? 1.0 / diag[i] : 1.0;
    std::vector<double> z(n), p(n), Ap(n);
    for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    remove_mean(&z);
    p = z;
    double rz = dot_vec(r, z);
    double rnorm = norm2(r);
    if (rnorm <= tol * bnorm) {
        out.report.converged = true;
        finish();
        return out;
    }
    for (int k = 1; k <= max_iter; ++k) {
        K.multiply(p, &Ap);
        remove_mean(&Ap);
        double pAp = dot_vec(p, Ap);
        if (pAp <= 0.0) break;
        double alpha = rz / pAp;
        for (int i = 0; i < n; ++i) {
            out.x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        remove_mean(&r);
        rnorm = norm2(r);
        out.report.iterations = k;
        out.report.relative_residual = rnorm / bnorm;
        if (rnorm <= tol * bnorm) {
            out.report.converged = true;
            finish();
            return out;
        }
        for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
        remove_mean(&z);
        double rz_new = dot_vec(r, z);
        double beta = rz_new / rz;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        rz = rz_new;
    }
    out.report.converged = false;
    finish();
    return out;
}

}  // namespace chemodg
