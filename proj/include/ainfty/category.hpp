#pragma once

#include "ainfty/linalg.hpp"
#include "ainfty/multilinear.hpp"

#include <memory>
#include <sstream>
#include <string>

namespace ainfty {

enum class Presentation { unsuspended, suspended };

struct RelationViolation {
    int n = 0;  // relation level; 0 marks a unit-law failure
    std::vector<std::string> object_chain;
    std::vector<std::string> basis_chain;
    std::string context;
    Degree residual_degree = 0;
    std::vector<std::string> residual;
};

struct RelationReport {
    int checked_arity = 0;
    std::vector<RelationViolation> violations;
    bool ok() const { return violations.empty(); }

    std::string summary() const
    {
        if (ok())
            return "ok (checked to arity " + std::to_string(checked_arity) + ")";
        std::ostringstream os;
        os << violations.size() << " violation(s); first: n=" << violations.front().n;
        if (!violations.front().context.empty())
            os << " [" << violations.front().context << "]";
        os << " at (";
        for (size_t i = 0; i < violations.front().object_chain.size(); ++i)
            os << (i ? "," : "") << violations.front().object_chain[i];
        os << ")";
        return os.str();
    }
};

using ObjectChain = std::vector<int>;

/// Finite A-infinity category with explicit bases: labelled objects, graded
/// hom spaces for every ordered pair, and arity-truncated products stored as
/// sparse tables per composable object chain.
///
/// The arity bound K is a data contract: all products of arity above K are
/// asserted to vanish.  Products have degree 2-k (unsuspended) or 1
/// (suspended); the presentation tag says which convention the stored
/// coefficients use.
template <class K>
class AInftyCategory {
public:
    AInftyCategory() : pres_(Presentation::unsuspended), arity_bound_(1) {}
    AInftyCategory(std::vector<std::string> objects, Presentation pres, int arity_bound)
        : objects_(std::move(objects)), pres_(pres), arity_bound_(arity_bound)
    {
        if (arity_bound_ < 1)
            throw std::invalid_argument("AInftyCategory: arity bound must be positive");
    }

    int num_objects() const { return static_cast<int>(objects_.size()); }
    const std::vector<std::string>& objects() const { return objects_; }
    const std::string& object_label(int i) const { return objects_[static_cast<size_t>(i)]; }
    int object_index(const std::string& label) const
    {
        for (int i = 0; i < num_objects(); ++i)
            if (objects_[static_cast<size_t>(i)] == label)
                return i;
        throw std::invalid_argument("AInftyCategory: unknown object \"" + label + "\"");
    }

    Presentation presentation() const { return pres_; }
    int arity_bound() const { return arity_bound_; }

    void set_hom(int from, int to, GradedSpace space) { homs_[{from, to}] = std::move(space); }
    const GradedSpace& hom(int from, int to) const
    {
        static const GradedSpace empty;
        auto it = homs_.find({from, to});
        return it == homs_.end() ? empty : it->second;
    }

    Degree product_degree(int arity) const
    {
        return pres_ == Presentation::suspended ? 1 : 2 - arity;
    }

    /// Zero table with the correct signature for a composable object chain.
    MultiMap<K> zero_product(const ObjectChain& chain) const
    {
        if (chain.size() < 2)
            throw std::invalid_argument("AInftyCategory: product chain needs at least two objects");
        std::vector<GradedSpace> sources;
        for (size_t i = 0; i + 1 < chain.size(); ++i)
            sources.push_back(hom(chain[i], chain[i + 1]));
        int arity = static_cast<int>(chain.size()) - 1;
        return MultiMap<K>(std::move(sources), hom(chain.front(), chain.back()), product_degree(arity));
    }

    void set_product(const ObjectChain& chain, MultiMap<K> table)
    {
        int arity = static_cast<int>(chain.size()) - 1;
        if (arity > arity_bound_)
            throw std::invalid_argument("AInftyCategory: product arity exceeds the declared bound");
        MultiMap<K> expected = zero_product(chain);
        if (table.degree() != expected.degree() || table.sources() != expected.sources() ||
            !(table.target() == expected.target()))
            throw std::invalid_argument("AInftyCategory: product table is not composable along the chain");
        if (table.is_zero_map())
            products_.erase(chain);
        else
            products_[chain] = std::move(table);
    }

    const std::map<ObjectChain, MultiMap<K>>& products() const { return products_; }
    const MultiMap<K>* product(const ObjectChain& chain) const
    {
        auto it = products_.find(chain);
        return it == products_.end() ? nullptr : &it->second;
    }

    void set_unit(int object, HomElem<K> unit) { units_[object] = std::move(unit); }
    const std::map<int, HomElem<K>>& units() const { return units_; }
    bool has_units() const { return !units_.empty(); }

    friend bool operator==(const AInftyCategory& a, const AInftyCategory& b)
    {
        return a.objects_ == b.objects_ && a.pres_ == b.pres_ && a.arity_bound_ == b.arity_bound_ &&
               a.homs_ == b.homs_ && a.products_ == b.products_ && a.units_ == b.units_;
    }

    const std::map<std::pair<int, int>, GradedSpace>& homs() const { return homs_; }

private:
    std::vector<std::string> objects_;
    std::map<std::pair<int, int>, GradedSpace> homs_;
    Presentation pres_;
    int arity_bound_;
    std::map<ObjectChain, MultiMap<K>> products_;
    std::map<int, HomElem<K>> units_;
};

namespace detail {

template <class K>
void record_nonzero(const AInftyCategory<K>& C, const ObjectChain& chain, const MultiMap<K>& residual,
                    int n, const std::string& context, std::vector<RelationViolation>& out)
{
    for (const auto& [bchain, value] : residual.entries()) {
        RelationViolation v;
        v.n = n;
        v.context = context;
        for (int o : chain)
            v.object_chain.push_back(C.object_label(o));
        for (size_t i = 0; i < bchain.size(); ++i)
            v.basis_chain.push_back(C.hom(chain[i], chain[i + 1]).label(bchain[i].deg, bchain[i].idx));
        v.residual_degree = value.deg;
        for (Eigen::Index i = 0; i < value.coeffs.size(); ++i)
            v.residual.push_back(field_traits<K>::str(value.coeffs[i]));
        out.push_back(std::move(v));
    }
}

}  // namespace detail

/// Checks the A-infinity relations of every arity n <= n_max, exactly.
///
/// Works in the category's own presentation: the term signs are
/// (-1)^((j+1)(l+1)+l(|a_1|+..+|a_j|)) unsuspended and
/// (-1)^(|a_1|+..+|a_j|) suspended.  The scan is data driven: it combines
/// every stored pair of product tables, so its cost tracks the structure's
/// sparsity rather than the number of object chains.  When strict units are
/// flagged, the unit laws are verified as well (reported with n = 0).
template <class K>
RelationReport check_relations(const AInftyCategory<K>& C, int n_max, bool include_units = true)
{
    if (n_max < 1)
        throw std::invalid_argument("check_relations: n_max must be positive");
    if (n_max > 2 * C.arity_bound() - 1)
        throw std::invalid_argument("check_relations: n_max exceeds the sound range 2K-1 for K=" +
                                    std::to_string(C.arity_bound()));

    RelationReport report;
    report.checked_arity = n_max;

    const bool susp = C.presentation() == Presentation::suspended;

    // inner tables indexed by their outer endpoints
    std::map<std::pair<int, int>, std::vector<const std::pair<const ObjectChain, MultiMap<K>>*>> by_ends;
    for (const auto& kv : C.products())
        by_ends[{kv.first.front(), kv.first.back()}].push_back(&kv);

    std::map<ObjectChain, MultiMap<K>> accum;
    for (const auto& [ochain, outer] : C.products()) {
        int k = outer.arity();
        for (int j = 0; j < k; ++j) {
            auto it = by_ends.find({ochain[static_cast<size_t>(j)], ochain[static_cast<size_t>(j) + 1]});
            if (it == by_ends.end())
                continue;
            for (const auto* inner_kv : it->second) {
                const ObjectChain& ichain = inner_kv->first;
                const MultiMap<K>& inner = inner_kv->second;
                int l = inner.arity();
                int n = k + l - 1;
                if (n > n_max)
                    continue;
                ObjectChain combined;
                combined.insert(combined.end(), ochain.begin(), ochain.begin() + j);
                combined.insert(combined.end(), ichain.begin(), ichain.end());
                combined.insert(combined.end(), ochain.begin() + j + 2, ochain.end());
                auto acc = accum.find(combined);
                if (acc == accum.end()) {
                    MultiMap<K> shape = C.zero_product(combined);
                    acc = accum.emplace(combined, MultiMap<K>(shape.sources(), shape.target(),
                                                              outer.degree() + inner.degree()))
                              .first;
                }
                if (susp)
                    accumulate_plugged(acc->second, outer, j, inner,
                                       [](const std::vector<Degree>& p) { return sign_suspended(p); });
                else
                    accumulate_plugged(acc->second, outer, j, inner, [j, l](const std::vector<Degree>& p) {
                        return sign_unsuspended(j, l, p);
                    });
            }
        }
    }
    for (const auto& [chain, residual] : accum)
        if (!residual.is_zero_map())
            detail::record_nonzero(C, chain, residual, static_cast<int>(chain.size()) - 1, "relation",
                                   report.violations);

    if (include_units && C.has_units())
        check_units(C, report);

    return report;
}

/// Strict-unit laws: each flagged unit is closed and acts as a two-sided
/// identity for the arity-2 product.  Evaluated on the unsuspended view.
template <class K>
void check_units(const AInftyCategory<K>& C, RelationReport& report);

/// Toggles suspended/unsuspended: hom degrees shift by one and every arity-k
/// coefficient is rescaled by the suspension sign of its input chain.
/// Involutive, coefficient-exact.
template <class K>
AInftyCategory<K> convert_presentation(const AInftyCategory<K>& C)
{
    bool to_susp = C.presentation() == Presentation::unsuspended;
    Degree shift = to_susp ? -1 : +1;
    AInftyCategory<K> R(C.objects(),
                        to_susp ? Presentation::suspended : Presentation::unsuspended,
                        C.arity_bound());
    for (const auto& [pair, space] : C.homs())
        R.set_hom(pair.first, pair.second, space.shifted(shift));
    for (const auto& [chain, table] : C.products()) {
        int k = table.arity();
        MultiMap<K> out = R.zero_product(chain);
        for (const auto& [bchain, value] : table.entries()) {
            typename MultiMap<K>::Chain rechain;
            std::vector<Degree> susp_degs;
            for (const BasisRef& r : bchain) {
                rechain.push_back({r.deg + shift, r.idx});
                // the sign always takes the suspended-side degrees
                susp_degs.push_back(to_susp ? r.deg - 1 : r.deg);
            }
            int sgn = suspension_sign(k, susp_degs);
            HomElem<K> revalue;
            revalue.deg = value.deg + shift;
            revalue.coeffs = value.coeffs;
            out.add_entry(rechain, revalue, K(sgn));
        }
        R.set_product(chain, std::move(out));
    }
    for (const auto& [obj, unit] : C.units()) {
        HomElem<K> u;
        u.deg = unit.deg + shift;
        u.coeffs = unit.coeffs;
        R.set_unit(obj, std::move(u));
    }
    return R;
}

template <class K>
void check_units(const AInftyCategory<K>& C, RelationReport& report)
{
    if (C.presentation() == Presentation::suspended) {
        AInftyCategory<K> U = convert_presentation(C);
        RelationReport sub;
        check_units(U, sub);
        for (auto& v : sub.violations)
            report.violations.push_back(std::move(v));
        return;
    }
    for (const auto& [x, unit] : C.units()) {
        if (unit.deg != 0) {
            RelationViolation v;
            v.context = "unit degree";
            v.object_chain = {C.object_label(x)};
            report.violations.push_back(std::move(v));
            continue;
        }
        // closedness
        if (const MultiMap<K>* d = C.product({x, x})) {
            HomElem<K> dx = d->eval({unit});
            if (!dx.is_zero()) {
                RelationViolation v;
                v.context = "unit not closed";
                v.object_chain = {C.object_label(x)};
                v.residual_degree = dx.deg;
                for (Eigen::Index i = 0; i < dx.coeffs.size(); ++i)
                    v.residual.push_back(field_traits<K>::str(dx.coeffs[i]));
                report.violations.push_back(std::move(v));
            }
        }
        // identity on both sides, basis element by basis element
        for (int y = 0; y < C.num_objects(); ++y) {
            const GradedSpace& out = C.hom(x, y);
            const MultiMap<K>* left = C.product({x, x, y});
            for (Degree d = out.lo(); d <= out.hi(); ++d)
                for (int i = 0; i < out.dim(d); ++i) {
                    HomElem<K> a = HomElem<K>::unit(out, {d, i});
                    HomElem<K> got = left ? left->eval({unit, a}) : HomElem<K>::zero(out, d);
                    if (!(got == a)) {
                        RelationViolation v;
                        v.context = "left unit law";
                        v.object_chain = {C.object_label(x), C.object_label(y)};
                        v.basis_chain = {out.label(d, i)};
                        report.violations.push_back(std::move(v));
                    }
                }
            const GradedSpace& in = C.hom(y, x);
            const MultiMap<K>* right = C.product({y, x, x});
            for (Degree d = in.lo(); d <= in.hi(); ++d)
                for (int i = 0; i < in.dim(d); ++i) {
                    HomElem<K> a = HomElem<K>::unit(in, {d, i});
                    HomElem<K> got = right ? right->eval({a, unit}) : HomElem<K>::zero(in, d);
                    if (!(got == a)) {
                        RelationViolation v;
                        v.context = "right unit law";
                        v.object_chain = {C.object_label(y), C.object_label(x)};
                        v.basis_chain = {in.label(d, i)};
                        report.violations.push_back(std::move(v));
                    }
                }
        }
    }
}

/// True iff all stored products of arity >= 3 are zero tables.
template <class K>
bool is_dg(const AInftyCategory<K>& C)
{
    for (const auto& [chain, table] : C.products())
        if (table.arity() >= 3 && !table.is_zero_map())
            return false;
    return true;
}

/// Cohomology of one hom pair: chosen cocycle representatives per degree and
/// the solver that rewrites any cocycle as (classes, coboundary).
template <class K>
struct PairCohomology {
    GradedSpace classes;
    std::map<Degree, Mat<K>> reps;  // hom-coordinates of the representatives

    std::map<Degree, std::shared_ptr<PreimageSolver<K>>> reducer;
    std::map<Degree, int> class_count;

    /// Class coordinates of a cocycle (throws if the element is no cocycle).
    Vec<K> express(const HomElem<K>& cocycle) const
    {
        auto it = reducer.find(cocycle.deg);
        if (it == reducer.end()) {
            if (!cocycle.is_zero())
                throw std::invalid_argument("PairCohomology: cocycle outside the computed window");
            return Vec<K>();
        }
        auto sol = it->second->solve(cocycle.coeffs);
        if (!sol)
            throw std::invalid_argument("PairCohomology: element is not a cocycle");
        return sol->head(class_count.at(cocycle.deg));
    }
};

template <class K>
struct CohomologyData {
    std::vector<std::string> objects;
    std::map<std::pair<int, int>, PairCohomology<K>> pairs;
    // arity-2 composition tables on the class spaces, degree 0
    std::map<ObjectChain, MultiMap<K>> composition;
};

/// H(C): per-pair cohomology of (hom, m_1) with explicit representatives and
/// the composition induced by m_2.  Computed on the unsuspended view; when
/// degree0_only is set, only the degree-0 classes are kept (the zero-th
/// cohomology category).
template <class K>
CohomologyData<K> cohomology(const AInftyCategory<K>& C, bool degree0_only = false)
{
    if (C.presentation() == Presentation::suspended)
        return cohomology(convert_presentation(C), degree0_only);

    CohomologyData<K> H;
    H.objects = C.objects();
    for (int x = 0; x < C.num_objects(); ++x)
        for (int y = 0; y < C.num_objects(); ++y) {
            const GradedSpace& hom = C.hom(x, y);
            if (hom.total_dim() == 0)
                continue;
            const MultiMap<K>* m1 = C.product({x, y});
            GradedMap<K> d(hom, hom, 1);
            if (m1)
                for (Degree deg = hom.lo(); deg <= hom.hi(); ++deg) {
                    if (hom.dim(deg) == 0 || hom.dim(deg + 1) == 0)
                        continue;
                    Mat<K> block(hom.dim(deg + 1), hom.dim(deg));
                    for (int i = 0; i < hom.dim(deg); ++i)
                        block.col(i) = m1->entry({{deg, i}}).coeffs;
                    d.set_block(deg, std::move(block));
                }
            // m_1^2 = 0 is a precondition
            GradedMap<K> dd = compose(d, d);
            if (!dd.is_zero_map())
                throw std::invalid_argument("cohomology: differential does not square to zero on (" +
                                            C.object_label(x) + "," + C.object_label(y) + ")");

            PairCohomology<K> pc;
            std::vector<std::vector<std::string>> labels;
            Degree lo = degree0_only ? 0 : hom.lo();
            Degree hi = degree0_only ? 0 : hom.hi();
            labels.resize(static_cast<size_t>(hi - lo + 1));
            for (Degree deg = lo; deg <= hi; ++deg) {
                int n = hom.dim(deg);
                if (n == 0)
                    continue;
                RowReduced<K> ker(d.block(deg));
                Mat<K> z = ker.nullspace();
                Mat<K> b = d.block(deg - 1);
                auto chosen = extending_columns(b, z);
                Mat<K> reps(n, static_cast<Eigen::Index>(chosen.size()));
                for (size_t c = 0; c < chosen.size(); ++c)
                    reps.col(static_cast<Eigen::Index>(c)) = z.col(chosen[c]);
                for (Eigen::Index c = 0; c < reps.cols(); ++c)
                    labels[static_cast<size_t>(deg - lo)].push_back(
                        "h" + std::to_string(deg) + "_" + std::to_string(c));
                if (reps.cols() > 0 || b.cols() > 0) {
                    Mat<K> full(n, reps.cols() + b.cols());
                    full.leftCols(reps.cols()) = reps;
                    full.rightCols(b.cols()) = b;
                    pc.reducer[deg] = std::make_shared<PreimageSolver<K>>(std::move(full));
                    pc.class_count[deg] = static_cast<int>(reps.cols());
                }
                if (reps.cols() > 0)
                    pc.reps[deg] = std::move(reps);
            }
            pc.classes = GradedSpace(lo, std::move(labels));
            if (pc.classes.total_dim() > 0)
                H.pairs[{x, y}] = std::move(pc);
        }

    // composition induced by m_2 on chosen representatives
    for (int x = 0; x < C.num_objects(); ++x)
        for (int y = 0; y < C.num_objects(); ++y)
            for (int z = 0; z < C.num_objects(); ++z) {
                auto pxy = H.pairs.find({x, y});
                auto pyz = H.pairs.find({y, z});
                auto pxz = H.pairs.find({x, z});
                if (pxy == H.pairs.end() || pyz == H.pairs.end() || pxz == H.pairs.end())
                    continue;
                const MultiMap<K>* m2 = C.product({x, y, z});
                if (!m2)
                    continue;
                MultiMap<K> comp({pxy->second.classes, pyz->second.classes}, pxz->second.classes, 0);
                for (auto& [dp, repsP] : pxy->second.reps)
                    for (auto& [dq, repsQ] : pyz->second.reps)
                        for (Eigen::Index i = 0; i < repsP.cols(); ++i)
                            for (Eigen::Index j = 0; j < repsQ.cols(); ++j) {
                                HomElem<K> a{dp, repsP.col(i)};
                                HomElem<K> b{dq, repsQ.col(j)};
                                HomElem<K> v = m2->eval({a, b});
                                if (!pxz->second.classes.in_window(v.deg) &&
                                    !v.is_zero())
                                    throw std::invalid_argument("cohomology: composition escapes window");
                                if (v.is_zero() || pxz->second.classes.dim(v.deg) == 0)
                                    continue;
                                HomElem<K> cls{v.deg, pxz->second.express(v)};
                                comp.add_entry({{dp, static_cast<int>(i)}, {dq, static_cast<int>(j)}}, cls);
                            }
                if (!comp.is_zero_map())
                    H.composition[{x, y, z}] = std::move(comp);
            }
    return H;
}

}  // namespace ainfty
