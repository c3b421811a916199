#pragma once

#include "ainfty/graded.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace ainfty {

/// Reduced row echelon form with leftmost-pivot selection, computed once and
/// reused for rank/nullspace/preimage queries.  Exact over any field scalar;
/// deterministic for a given matrix.
template <class K>
class RowReduced {
public:
    explicit RowReduced(Mat<K> a) : orig_cols_(a.cols()), r_(std::move(a))
    {
        Eigen::Index rows = r_.rows(), cols = r_.cols();
        Eigen::Index row = 0;
        for (Eigen::Index col = 0; col < cols && row < rows; ++col) {
            Eigen::Index piv = -1;
            for (Eigen::Index i = row; i < rows; ++i)
                if (!(r_(i, col) == K(0))) {
                    piv = i;
                    break;
                }
            if (piv < 0)
                continue;
            if (piv != row)
                r_.row(piv).swap(r_.row(row));
            K inv = K(1) / r_(row, col);
            for (Eigen::Index j = col; j < cols; ++j)
                r_(row, j) = r_(row, j) * inv;
            for (Eigen::Index i = 0; i < rows; ++i) {
                if (i == row)
                    continue;
                K f = r_(i, col);
                if (f == K(0))
                    continue;
                for (Eigen::Index j = col; j < cols; ++j)
                    r_(i, j) = r_(i, j) - f * r_(row, j);
            }
            pivots_.push_back(col);
            ++row;
        }
    }

    int rank() const { return static_cast<int>(pivots_.size()); }
    const std::vector<Eigen::Index>& pivot_columns() const { return pivots_; }
    const Mat<K>& rref() const { return r_; }

    /// Columns spanning the kernel (rank-nullity many, echelon-normalized).
    Mat<K> nullspace() const
    {
        Eigen::Index cols = orig_cols_;
        std::vector<Eigen::Index> free_cols;
        {
            size_t p = 0;
            for (Eigen::Index c = 0; c < cols; ++c) {
                if (p < pivots_.size() && pivots_[p] == c)
                    ++p;
                else
                    free_cols.push_back(c);
            }
        }
        Mat<K> n = Mat<K>::Constant(cols, static_cast<Eigen::Index>(free_cols.size()), K(0));
        for (size_t f = 0; f < free_cols.size(); ++f) {
            n(free_cols[f], static_cast<Eigen::Index>(f)) = K(1);
            for (size_t p = 0; p < pivots_.size(); ++p)
                n(pivots_[p], static_cast<Eigen::Index>(f)) = -r_(static_cast<Eigen::Index>(p), free_cols[f]);
        }
        return n;
    }

private:
    Eigen::Index orig_cols_;
    Mat<K> r_;
    std::vector<Eigen::Index> pivots_;
};

template <class K>
int rank_of(const Mat<K>& a)
{
    return RowReduced<K>(a).rank();
}

/// Exact solver for a x = b over a fixed matrix; caches the elimination of
/// [a | I] so repeated right-hand sides are cheap.
template <class K>
class PreimageSolver {
public:
    explicit PreimageSolver(Mat<K> a) : a_(std::move(a))
    {
        Eigen::Index rows = a_.rows(), cols = a_.cols();
        Mat<K> aug(rows, cols + rows);
        aug.leftCols(cols) = a_;
        aug.rightCols(rows) = Mat<K>::Identity(rows, rows);
        red_ = std::make_unique<RowReduced<K>>(std::move(aug));
        rank_ = 0;
        for (Eigen::Index p : red_->pivot_columns())
            if (p < cols)
                ++rank_;
    }

    int rank() const { return rank_; }

    /// One exact solution of a x = b, or nullopt when b is outside the
    /// column space.
    std::optional<Vec<K>> solve(const Vec<K>& b) const
    {
        Eigen::Index rows = a_.rows(), cols = a_.cols();
        if (b.size() != rows)
            throw std::invalid_argument("PreimageSolver: right-hand side has wrong dimension");
        // rref([a|I]) row i applied to b gives the reduced system's rhs.
        const Mat<K>& r = red_->rref();
        Vec<K> rb = r.rightCols(rows) * b;
        Vec<K> x = Vec<K>::Constant(cols, K(0));
        // [a|I] has full row rank, so every row is a pivot row; a pivot in
        // the identity part is a pure consistency constraint.
        const auto& piv = red_->pivot_columns();
        for (size_t p = 0; p < piv.size(); ++p) {
            if (piv[p] < cols)
                x[piv[p]] = rb[static_cast<Eigen::Index>(p)];
            else if (!(rb[static_cast<Eigen::Index>(p)] == K(0)))
                return std::nullopt;
        }
        return x;
    }

private:
    Mat<K> a_;
    std::unique_ptr<RowReduced<K>> red_;
    int rank_;
};

/// Indices of columns of `candidates` that extend the column space of
/// `base` to its span; greedy leftmost choice, so deterministic.
template <class K>
std::vector<Eigen::Index> extending_columns(const Mat<K>& base, const Mat<K>& candidates)
{
    std::vector<Eigen::Index> chosen;
    Mat<K> cur = base;
    int r = rank_of(cur);
    for (Eigen::Index c = 0; c < candidates.cols(); ++c) {
        Mat<K> trial(candidates.rows(), cur.cols() + 1);
        trial.leftCols(cur.cols()) = cur;
        trial.col(cur.cols()) = candidates.col(c);
        int tr = rank_of(trial);
        if (tr > r) {
            chosen.push_back(c);
            cur = std::move(trial);
            r = tr;
        }
    }
    return chosen;
}

/// Standard basis vectors completing the column space of `a`; this is the
/// column-space complement used by the Hodge construction.
template <class K>
Mat<K> column_space_complement(const Mat<K>& a)
{
    Mat<K> id = Mat<K>::Identity(a.rows(), a.rows());
    auto cols = extending_columns(a, id);
    Mat<K> c(a.rows(), static_cast<Eigen::Index>(cols.size()));
    for (size_t i = 0; i < cols.size(); ++i)
        c.col(static_cast<Eigen::Index>(i)) = id.col(cols[i]);
    return c;
}

}  // namespace ainfty
