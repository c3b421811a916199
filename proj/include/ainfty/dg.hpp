#pragma once

#include "ainfty/shifts.hpp"

#include <string>
#include <vector>

namespace ainfty {

/// Bounded complex of finite-dimensional vector spaces: dimensions on a
/// degree window and one exact differential matrix per degree, composing to
/// zero.
template <class K>
class ChainComplex {
public:
    ChainComplex() : lo_(0) {}
    ChainComplex(std::string name, Degree lo, std::vector<int> dims)
        : name_(std::move(name)), lo_(lo), dims_(std::move(dims))
    {
        trim();
    }

    const std::string& name() const { return name_; }
    Degree lo() const { return lo_; }
    Degree hi() const { return lo_ + static_cast<Degree>(dims_.size()) - 1; }
    int dim(Degree i) const
    {
        if (i < lo_ || i > hi())
            return 0;
        return dims_[static_cast<size_t>(i - lo_)];
    }
    int total_dim() const
    {
        int t = 0;
        for (int d : dims_)
            t += d;
        return t;
    }

    void set_differential(Degree i, Mat<K> m)
    {
        if (m.rows() != dim(i + 1) || m.cols() != dim(i))
            throw std::invalid_argument("ChainComplex: differential block has wrong shape");
        if (is_zero(m))
            d_.erase(i);
        else
            d_[i] = std::move(m);
    }
    Mat<K> differential(Degree i) const
    {
        auto it = d_.find(i);
        if (it != d_.end())
            return it->second;
        return Mat<K>::Constant(dim(i + 1), dim(i), K(0));
    }

    /// d(i+1) after d(i) must vanish for every degree.
    void validate() const
    {
        for (Degree i = lo(); i <= hi(); ++i)
            if (!is_zero(Mat<K>(differential(i + 1) * differential(i))))
                throw std::invalid_argument("ChainComplex: differential does not square to zero in \"" +
                                            name_ + "\"");
    }

    /// X[k]: terms X[k]^i = X^{i+k}, differential (-1)^k d^{i+k}.
    ChainComplex shifted(int k, const std::string& new_name) const
    {
        ChainComplex r(new_name, lo_ - k, dims_);
        int sgn = parity_sign(k);
        for (const auto& [i, m] : d_)
            r.set_differential(i - k, Mat<K>(m * K(sgn)));
        return r;
    }

    friend bool operator==(const ChainComplex& a, const ChainComplex& b)
    {
        return a.lo_ == b.lo_ && a.dims_ == b.dims_ && a.d_ == b.d_;
    }

private:
    void trim()
    {
        while (!dims_.empty() && dims_.back() == 0)
            dims_.pop_back();
        while (!dims_.empty() && dims_.front() == 0) {
            dims_.erase(dims_.begin());
            ++lo_;
        }
    }

    std::string name_;
    Degree lo_;
    std::vector<int> dims_;
    std::map<Degree, Mat<K>> d_;
};

/// Degree-r morphism of complexes: one component X^i -> Y^{i+r} per degree.
template <class K>
struct DGHom {
    const ChainComplex<K>* source = nullptr;
    const ChainComplex<K>* target = nullptr;
    Degree deg = 0;
    std::map<Degree, Mat<K>> comp;  // keyed by source degree i

    Mat<K> component(Degree i) const
    {
        auto it = comp.find(i);
        if (it != comp.end())
            return it->second;
        return Mat<K>::Constant(target->dim(i + deg), source->dim(i), K(0));
    }
    void set_component(Degree i, Mat<K> m)
    {
        if (m.rows() != target->dim(i + deg) || m.cols() != source->dim(i))
            throw std::invalid_argument("DGHom: component shape mismatch");
        if (is_zero(m))
            comp.erase(i);
        else
            comp[i] = std::move(m);
    }
    bool is_zero_hom() const { return comp.empty(); }

    static DGHom identity(const ChainComplex<K>& x)
    {
        DGHom r{&x, &x, 0, {}};
        for (Degree i = x.lo(); i <= x.hi(); ++i)
            if (x.dim(i) > 0)
                r.set_component(i, Mat<K>::Identity(x.dim(i), x.dim(i)));
        return r;
    }
};

/// Diagrammatic composition: phi: X -> Y then psi: Y -> Z.
template <class K>
DGHom<K> compose_dg(const DGHom<K>& phi, const DGHom<K>& psi)
{
    if (phi.target != psi.source && !(*phi.target == *psi.source))
        throw std::invalid_argument("compose_dg: morphisms do not chain");
    DGHom<K> r{phi.source, psi.target, phi.deg + psi.deg, {}};
    for (const auto& [i, m] : phi.comp) {
        Mat<K> prod = psi.component(i + phi.deg) * m;
        if (!is_zero(prod))
            r.set_component(i, Mat<K>(r.component(i) + prod));
    }
    return r;
}

/// d(phi)^i = d_X^i then phi^{i+1}, minus (-1)^r phi^i then d_Y^{i+r}.
template <class K>
DGHom<K> dg_differential(const DGHom<K>& phi)
{
    DGHom<K> r{phi.source, phi.target, phi.deg + 1, {}};
    int sgn = parity_sign(phi.deg);
    for (Degree i = phi.source->lo() - 1; i <= phi.source->hi(); ++i) {
        if (phi.source->dim(i) == 0 || phi.target->dim(i + phi.deg + 1) == 0)
            continue;
        Mat<K> first = phi.component(i + 1) * phi.source->differential(i);
        Mat<K> second = phi.target->differential(i + phi.deg) * phi.component(i);
        Mat<K> block = first - second * K(sgn);
        if (!is_zero(block))
            r.set_component(i, std::move(block));
    }
    return r;
}

template <class K>
bool dg_equal(const DGHom<K>& a, const DGHom<K>& b)
{
    if (a.deg != b.deg)
        return false;
    Degree lo = std::min(a.source->lo(), b.source->lo());
    Degree hi = std::max(a.source->hi(), b.source->hi());
    for (Degree i = lo; i <= hi; ++i)
        if (!is_zero(Mat<K>(a.component(i) - b.component(i))))
            return false;
    return true;
}

namespace detail {

/// Basis order of hom(X,Y) in each degree r: matrix units (i, a, b) sorted
/// by component i, then target row a, then source column b.
template <class K>
GradedSpace dg_hom_space(const ChainComplex<K>& x, const ChainComplex<K>& y)
{
    Degree lo = y.lo() - x.hi();
    Degree hi = y.hi() - x.lo();
    if (hi < lo)
        return GradedSpace();
    std::vector<std::vector<std::string>> labels(static_cast<size_t>(hi - lo + 1));
    for (Degree r = lo; r <= hi; ++r)
        for (Degree i = x.lo(); i <= x.hi(); ++i)
            for (int a = 0; a < y.dim(i + r); ++a)
                for (int b = 0; b < x.dim(i); ++b)
                    labels[static_cast<size_t>(r - lo)].push_back(
                        "m" + std::to_string(i) + "[" + std::to_string(a) + "," + std::to_string(b) + "]");
    return GradedSpace(lo, std::move(labels));
}

template <class K>
HomElem<K> dg_to_coords(const GradedSpace& space, const DGHom<K>& phi)
{
    HomElem<K> e = HomElem<K>::zero(space, phi.deg);
    int pos = 0;
    const ChainComplex<K>& x = *phi.source;
    const ChainComplex<K>& y = *phi.target;
    for (Degree i = x.lo(); i <= x.hi(); ++i) {
        Mat<K> m = phi.component(i);
        for (int a = 0; a < y.dim(i + phi.deg); ++a)
            for (int b = 0; b < x.dim(i); ++b)
                e.coeffs[pos++] = m(a, b);
    }
    return e;
}

template <class K>
DGHom<K> dg_from_coords(const ChainComplex<K>& x, const ChainComplex<K>& y, const HomElem<K>& e)
{
    DGHom<K> phi{&x, &y, e.deg, {}};
    int pos = 0;
    for (Degree i = x.lo(); i <= x.hi(); ++i) {
        if (x.dim(i) == 0 || y.dim(i + e.deg) == 0)
            continue;
        Mat<K> m(y.dim(i + e.deg), x.dim(i));
        for (int a = 0; a < y.dim(i + e.deg); ++a)
            for (int b = 0; b < x.dim(i); ++b)
                m(a, b) = e.coeffs[pos++];
        phi.set_component(i, std::move(m));
    }
    return phi;
}

}  // namespace detail

/// DG(A) on the given complexes: m_1 is the hom differential, m_2 the
/// diagrammatic composition, all higher products zero.  Strict units (the
/// identity chain maps) are flagged unless with_units is false.  The arity
/// bound is declared by the caller; any value is honest here since every
/// higher product genuinely vanishes.
template <class K>
AInftyCategory<K> build_dg_category(const std::vector<ChainComplex<K>>& complexes, int arity_bound = 5,
                                    bool with_units = true)
{
    std::vector<std::string> names;
    for (const auto& c : complexes) {
        c.validate();
        names.push_back(c.name());
    }
    AInftyCategory<K> C(names, Presentation::unsuspended, arity_bound);
    int n = static_cast<int>(complexes.size());
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            C.set_hom(x, y, detail::dg_hom_space(complexes[static_cast<size_t>(x)],
                                                 complexes[static_cast<size_t>(y)]));

    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            const ChainComplex<K>& X = complexes[static_cast<size_t>(x)];
            const ChainComplex<K>& Y = complexes[static_cast<size_t>(y)];
            const GradedSpace& hom = C.hom(x, y);
            if (hom.total_dim() == 0)
                continue;
            MultiMap<K> m1 = C.zero_product({x, y});
            for (Degree r = hom.lo(); r <= hom.hi(); ++r)
                for (int i = 0; i < hom.dim(r); ++i) {
                    DGHom<K> unit = detail::dg_from_coords(X, Y, HomElem<K>::unit(hom, {r, i}));
                    DGHom<K> du = dg_differential(unit);
                    m1.add_entry({{r, i}}, detail::dg_to_coords<K>(hom, du));
                }
            C.set_product({x, y}, std::move(m1));
        }

    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                const GradedSpace& hxy = C.hom(x, y);
                const GradedSpace& hyz = C.hom(y, z);
                if (hxy.total_dim() == 0 || hyz.total_dim() == 0 || C.hom(x, z).total_dim() == 0)
                    continue;
                const ChainComplex<K>& X = complexes[static_cast<size_t>(x)];
                const ChainComplex<K>& Y = complexes[static_cast<size_t>(y)];
                const ChainComplex<K>& Z = complexes[static_cast<size_t>(z)];
                MultiMap<K> m2 = C.zero_product({x, y, z});
                for (Degree r = hxy.lo(); r <= hxy.hi(); ++r)
                    for (int i = 0; i < hxy.dim(r); ++i) {
                        DGHom<K> phi = detail::dg_from_coords(X, Y, HomElem<K>::unit(hxy, {r, i}));
                        for (Degree s = hyz.lo(); s <= hyz.hi(); ++s)
                            for (int j = 0; j < hyz.dim(s); ++j) {
                                DGHom<K> psi = detail::dg_from_coords(Y, Z, HomElem<K>::unit(hyz, {s, j}));
                                DGHom<K> comp = compose_dg(phi, psi);
                                if (comp.is_zero_hom())
                                    continue;
                                m2.add_entry({{r, i}, {s, j}},
                                             detail::dg_to_coords<K>(C.hom(x, z), comp));
                            }
                    }
                C.set_product({x, y, z}, std::move(m2));
            }

    if (with_units)
        for (int x = 0; x < n; ++x) {
            const ChainComplex<K>& X = complexes[static_cast<size_t>(x)];
            if (X.total_dim() == 0)
                continue;
            C.set_unit(x, detail::dg_to_coords<K>(C.hom(x, x), DGHom<K>::identity(X)));
        }
    return C;
}

/// The two shift identifications of a degree-r morphism phi: X -> Y:
///   mu  in DG^{r-1}(X, Y[1]) with mu^i = phi^i,
///   nu  in DG^{r+1}(X[1], Y) with nu^{i-1} = phi^i,
/// together with the exact verdicts d(mu) = +d(phi) and d(nu) = -d(phi)
/// under the same identifications.
template <class K>
struct ShiftIdentification {
    std::shared_ptr<ChainComplex<K>> target_shifted;  // Y[1]
    std::shared_ptr<ChainComplex<K>> source_shifted;  // X[1]
    DGHom<K> mu;
    DGHom<K> nu;
    bool dmu_matches_plus = false;
    bool dnu_matches_minus = false;
};

/// Comparison of the enlargement of a DG category of complexes against the
/// DG category built directly on the shifted complexes, through the
/// componentwise identification phi~^i = phi^{i+r}.
///
/// For convention 2 the two structures agree coefficient-exactly (this is
/// the identity DG(A) = C~(2)); convention 1 produces a sign mismatch at
/// arity 2 whenever the middle shift is odd.
struct DgMismatch {
    int arity = 0;
    std::vector<int> shifts;
    std::vector<std::string> objects;
};

struct DgComparison {
    bool equal = true;
    bool higher_products_vanish = true;
    std::vector<DgMismatch> mismatches;
};

template <class K>
DgComparison compare_dg_with_enlargement(const std::vector<ChainComplex<K>>& complexes,
                                         ShiftConvention a, int window, int arity_bound = 5,
                                         size_t max_mismatches = 32)
{
    AInftyCategory<K> C = build_dg_category(complexes, arity_bound);

    std::vector<SumObject> objects;
    std::vector<ChainComplex<K>> shifted;
    for (int c = 0; c < static_cast<int>(complexes.size()); ++c)
        for (int r = -window; r <= window; ++r) {
            objects.push_back(SumObject::single(c, r));
            shifted.push_back(complexes[static_cast<size_t>(c)].shifted(
                r, objects.back().label(C)));
        }
    AInftyCategory<K> E = enlarge(C, a, objects);
    AInftyCategory<K> D = build_dg_category(shifted, arity_bound, false);

    DgComparison out;
    out.higher_products_vanish = is_dg(E) && is_dg(D);

    auto shift_of = [&](int o) { return objects[static_cast<size_t>(o)].shift_of(0); };
    auto record = [&](const ObjectChain& chain, int arity) {
        if (out.mismatches.size() >= max_mismatches)
            return;
        DgMismatch m;
        m.arity = arity;
        for (int o : chain) {
            m.shifts.push_back(shift_of(o));
            m.objects.push_back(E.object_label(o));
        }
        out.mismatches.push_back(std::move(m));
    };

    auto keys = E.products();
    for (const auto& [chain, table] : D.products())
        if (!keys.count(chain))
            keys.emplace(chain, table);
    for (const auto& [chain, ignored] : keys) {
        const MultiMap<K>* te = E.product(chain);
        const MultiMap<K>* td = D.product(chain);
        bool same = (te == nullptr && td == nullptr) || (te && td && *te == *td) ||
                    (te && !td && te->is_zero_map()) || (td && !te && td->is_zero_map());
        if (!same) {
            out.equal = false;
            record(chain, static_cast<int>(chain.size()) - 1);
        }
    }
    return out;
}

template <class K>
ShiftIdentification<K> shift_identifications(const DGHom<K>& phi)
{
    ShiftIdentification<K> out;
    out.target_shifted =
        std::make_shared<ChainComplex<K>>(phi.target->shifted(1, phi.target->name() + "[1]"));
    out.source_shifted =
        std::make_shared<ChainComplex<K>>(phi.source->shifted(1, phi.source->name() + "[1]"));

    out.mu = DGHom<K>{phi.source, out.target_shifted.get(), phi.deg - 1, {}};
    for (const auto& [i, m] : phi.comp)
        out.mu.set_component(i, m);

    out.nu = DGHom<K>{out.source_shifted.get(), phi.target, phi.deg + 1, {}};
    for (const auto& [i, m] : phi.comp)
        out.nu.set_component(i - 1, m);

    DGHom<K> dphi = dg_differential(phi);

    DGHom<K> dmu = dg_differential(out.mu);
    DGHom<K> dphi_as_mu{phi.source, out.target_shifted.get(), phi.deg, {}};
    for (const auto& [i, m] : dphi.comp)
        dphi_as_mu.set_component(i, m);
    out.dmu_matches_plus = dg_equal(dmu, dphi_as_mu);

    DGHom<K> dnu = dg_differential(out.nu);
    DGHom<K> neg_dphi_as_nu{out.source_shifted.get(), phi.target, phi.deg + 2, {}};
    for (const auto& [i, m] : dphi.comp)
        neg_dphi_as_nu.set_component(i - 1, Mat<K>(m * K(-1)));
    out.dnu_matches_minus = dg_equal(dnu, neg_dphi_as_nu);

    return out;
}

}  // namespace ainfty
