#pragma once

#include "ainfty/rational.hpp"
#include "ainfty/signs.hpp"

#include <Eigen/Dense>

#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ainfty {

template <class K>
using Mat = Eigen::Matrix<K, Eigen::Dynamic, Eigen::Dynamic>;
template <class K>
using Vec = Eigen::Matrix<K, Eigen::Dynamic, 1>;

template <class K>
bool is_zero(const Mat<K>& m)
{
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!(m(i, j) == K(0)))
                return false;
    return true;
}

/// Finite-dimensional Z-graded vector space: labelled bases on a degree
/// window, zero outside it.
class GradedSpace {
public:
    GradedSpace() : lo_(0) {}

    /// Labels per degree starting at `lo`; empty degree lists are allowed.
    GradedSpace(Degree lo, std::vector<std::vector<std::string>> labels)
        : lo_(lo), labels_(std::move(labels))
    {
        trim();
    }

    static GradedSpace zero() { return GradedSpace(); }

    Degree lo() const { return lo_; }
    Degree hi() const { return lo_ + static_cast<Degree>(labels_.size()) - 1; }
    bool in_window(Degree d) const { return d >= lo_ && d <= hi(); }

    int dim(Degree d) const
    {
        if (!in_window(d))
            return 0;
        return static_cast<int>(labels_[static_cast<size_t>(d - lo_)].size());
    }
    int total_dim() const
    {
        int t = 0;
        for (const auto& l : labels_)
            t += static_cast<int>(l.size());
        return t;
    }

    const std::string& label(Degree d, int i) const
    {
        return labels_[static_cast<size_t>(d - lo_)][static_cast<size_t>(i)];
    }
    const std::vector<std::string>& labels_at(Degree d) const
    {
        static const std::vector<std::string> none;
        return in_window(d) ? labels_[static_cast<size_t>(d - lo_)] : none;
    }

    /// Same space with every degree shifted by `s` (label-preserving).
    GradedSpace shifted(Degree s) const { return GradedSpace(lo_ + s, labels_); }

    friend bool operator==(const GradedSpace& a, const GradedSpace& b)
    {
        return a.lo_ == b.lo_ && a.labels_ == b.labels_;
    }

private:
    void trim()
    {
        while (!labels_.empty() && labels_.back().empty())
            labels_.pop_back();
        while (!labels_.empty() && labels_.front().empty()) {
            labels_.erase(labels_.begin());
            ++lo_;
        }
        if (labels_.empty())
            lo_ = 0;  // all empty spaces are the same space
    }

    Degree lo_;
    std::vector<std::vector<std::string>> labels_;
};

/// Reference to one homogeneous basis element: degree plus index within it.
struct BasisRef {
    Degree deg;
    int idx;
    auto operator<=>(const BasisRef&) const = default;
};

/// Homogeneous element of a graded space: a degree and a coefficient vector
/// on that degree's basis.
template <class K>
struct HomElem {
    Degree deg = 0;
    Vec<K> coeffs;

    bool is_zero() const
    {
        for (Eigen::Index i = 0; i < coeffs.size(); ++i)
            if (!(coeffs[i] == K(0)))
                return false;
        return true;
    }

    static HomElem zero(const GradedSpace& space, Degree d)
    {
        HomElem e;
        e.deg = d;
        e.coeffs = Vec<K>::Constant(space.dim(d), K(0));
        return e;
    }
    static HomElem unit(const GradedSpace& space, BasisRef r)
    {
        HomElem e = zero(space, r.deg);
        e.coeffs[r.idx] = K(1);
        return e;
    }

    friend bool operator==(const HomElem& a, const HomElem& b)
    {
        if (a.deg != b.deg || a.coeffs.size() != b.coeffs.size())
            return false;
        for (Eigen::Index i = 0; i < a.coeffs.size(); ++i)
            if (!(a.coeffs[i] == b.coeffs[i]))
                return false;
        return true;
    }
};

/// Degree-homogeneous linear map between graded spaces, stored as one exact
/// block per populated source degree.
template <class K>
class GradedMap {
public:
    GradedMap() : deg_(0) {}
    GradedMap(GradedSpace source, GradedSpace target, Degree deg)
        : source_(std::move(source)), target_(std::move(target)), deg_(deg)
    {
    }

    static GradedMap identity(const GradedSpace& space)
    {
        GradedMap m(space, space, 0);
        for (Degree d = space.lo(); d <= space.hi(); ++d)
            if (space.dim(d) > 0)
                m.set_block(d, Mat<K>::Identity(space.dim(d), space.dim(d)));
        return m;
    }

    const GradedSpace& source() const { return source_; }
    const GradedSpace& target() const { return target_; }
    Degree degree() const { return deg_; }

    void set_block(Degree source_deg, Mat<K> block)
    {
        if (block.rows() != target_.dim(source_deg + deg_) || block.cols() != source_.dim(source_deg))
            throw std::invalid_argument("GradedMap: block shape does not match the graded dimensions");
        if (is_zero(block)) {
            blocks_.erase(source_deg);
            return;
        }
        blocks_[source_deg] = std::move(block);
    }

    /// Block on source degree d as a dense matrix (zero-filled when absent).
    Mat<K> block(Degree d) const
    {
        auto it = blocks_.find(d);
        if (it != blocks_.end())
            return it->second;
        return Mat<K>::Constant(target_.dim(d + deg_), source_.dim(d), K(0));
    }
    const std::map<Degree, Mat<K>>& blocks() const { return blocks_; }

    bool is_zero_map() const { return blocks_.empty(); }

    HomElem<K> apply(const HomElem<K>& x) const
    {
        HomElem<K> y;
        y.deg = x.deg + deg_;
        y.coeffs = block(x.deg) * x.coeffs;
        return y;
    }

    GradedMap operator*(const K& c) const
    {
        GradedMap r(source_, target_, deg_);
        for (const auto& [d, b] : blocks_)
            r.set_block(d, Mat<K>(b * c));
        return r;
    }
    GradedMap operator+(const GradedMap& o) const
    {
        if (deg_ != o.deg_)
            throw std::invalid_argument("GradedMap: degree mismatch in +");
        GradedMap r(source_, target_, deg_);
        for (Degree d = source_.lo(); d <= source_.hi(); ++d)
            if (source_.dim(d) > 0 && target_.dim(d + deg_) > 0)
                r.set_block(d, Mat<K>(block(d) + o.block(d)));
        return r;
    }
    GradedMap operator-(const GradedMap& o) const { return *this + o * K(-1); }

    /// Reindex both source and target degrees by -1 (the suspension view of
    /// the same underlying map; no signs).
    GradedMap suspended() const
    {
        GradedMap r(source_.shifted(-1), target_.shifted(-1), deg_);
        for (const auto& [d, b] : blocks_)
            r.set_block(d - 1, b);
        return r;
    }

    friend bool operator==(const GradedMap& a, const GradedMap& b)
    {
        if (a.deg_ != b.deg_)
            return false;
        Degree lo = std::min(a.source_.lo(), b.source_.lo());
        Degree hi = std::max(a.source_.hi(), b.source_.hi());
        for (Degree d = lo; d <= hi; ++d) {
            Mat<K> x = a.block(d), y = b.block(d);
            if (x.rows() != y.rows() || x.cols() != y.cols())
                return is_zero(x) && is_zero(y);
            if (!is_zero(Mat<K>(x - y)))
                return false;
        }
        return true;
    }

private:
    GradedSpace source_, target_;
    Degree deg_;
    std::map<Degree, Mat<K>> blocks_;
};

/// compose(g, f) = "f then g"; degrees add.
template <class K>
GradedMap<K> compose(const GradedMap<K>& after, const GradedMap<K>& before)
{
    GradedMap<K> r(before.source(), after.target(), before.degree() + after.degree());
    for (const auto& [d, b] : before.blocks()) {
        Mat<K> prod = after.block(d + before.degree()) * b;
        if (!is_zero(prod))
            r.set_block(d, Mat<K>(r.block(d) + prod));
    }
    return r;
}

}  // namespace ainfty
