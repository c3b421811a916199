#pragma once

#include "ainfty/category.hpp"

namespace ainfty {

/// The category converted to suspended presentation (a copy when already
/// suspended).
template <class K>
AInftyCategory<K> suspended_view(const AInftyCategory<K>& C)
{
    return C.presentation() == Presentation::suspended ? C : convert_presentation(C);
}

template <class K>
GradedMap<K> graded_map_of(const MultiMap<K>& arity1)
{
    if (arity1.arity() != 1)
        throw std::invalid_argument("graded_map_of: table is not arity 1");
    GradedMap<K> m(arity1.sources()[0], arity1.target(), arity1.degree());
    const GradedSpace& src = arity1.sources()[0];
    for (Degree d = src.lo(); d <= src.hi(); ++d) {
        if (src.dim(d) == 0 || arity1.target().dim(d + arity1.degree()) == 0)
            continue;
        Mat<K> block(arity1.target().dim(d + arity1.degree()), src.dim(d));
        for (int i = 0; i < src.dim(d); ++i)
            block.col(i) = arity1.entry({{d, i}}).coeffs;
        m.set_block(d, std::move(block));
    }
    return m;
}

/// A-infinity functor: an object map plus degree-zero component tables f_k
/// in the suspended presentation (where the defining relation carries no
/// suspension bookkeeping).  Source and target are stored suspended.
template <class K>
class AInftyFunctor {
public:
    AInftyFunctor() = default;
    AInftyFunctor(const AInftyCategory<K>& source, const AInftyCategory<K>& target,
                  std::vector<int> object_map)
        : source_(suspended_view(source)),
          target_(suspended_view(target)),
          object_map_(std::move(object_map)),
          arity_bound_(std::min(source.arity_bound(), target.arity_bound()))
    {
        if (static_cast<int>(object_map_.size()) != source_.num_objects())
            throw std::invalid_argument("AInftyFunctor: object map has wrong size");
        for (int t : object_map_)
            if (t < 0 || t >= target_.num_objects())
                throw std::invalid_argument("AInftyFunctor: object map hits a non-object");
    }

    const AInftyCategory<K>& source() const { return source_; }
    const AInftyCategory<K>& target() const { return target_; }
    const std::vector<int>& object_map() const { return object_map_; }
    int map_object(int i) const { return object_map_[static_cast<size_t>(i)]; }
    int arity_bound() const { return arity_bound_; }
    void set_arity_bound(int k) { arity_bound_ = k; }

    ObjectChain image_chain(const ObjectChain& chain) const
    {
        ObjectChain w;
        w.reserve(chain.size());
        for (int o : chain)
            w.push_back(map_object(o));
        return w;
    }

    /// Zero component with the correct suspended signature for a chain.
    MultiMap<K> zero_component(const ObjectChain& chain) const
    {
        std::vector<GradedSpace> sources;
        for (size_t i = 0; i + 1 < chain.size(); ++i)
            sources.push_back(source_.hom(chain[i], chain[i + 1]));
        return MultiMap<K>(std::move(sources),
                           target_.hom(map_object(chain.front()), map_object(chain.back())), 0);
    }

    void set_component(const ObjectChain& chain, MultiMap<K> table)
    {
        int arity = static_cast<int>(chain.size()) - 1;
        if (arity > arity_bound_)
            throw std::invalid_argument("AInftyFunctor: component arity exceeds the bound");
        MultiMap<K> expected = zero_component(chain);
        if (table.degree() != 0 || table.sources() != expected.sources() ||
            !(table.target() == expected.target()))
            throw std::invalid_argument("AInftyFunctor: component signature mismatch");
        if (table.is_zero_map())
            components_.erase(chain);
        else
            components_[chain] = std::move(table);
    }

    const std::map<ObjectChain, MultiMap<K>>& components() const { return components_; }
    const MultiMap<K>* component(const ObjectChain& chain) const
    {
        auto it = components_.find(chain);
        return it == components_.end() ? nullptr : &it->second;
    }

    bool is_linear() const
    {
        for (const auto& [chain, table] : components_)
            if (table.arity() >= 2 && !table.is_zero_map())
                return false;
        return true;
    }

    static AInftyFunctor identity(const AInftyCategory<K>& C)
    {
        AInftyFunctor F(C, C, [&] {
            std::vector<int> ids(static_cast<size_t>(C.num_objects()));
            for (int i = 0; i < C.num_objects(); ++i)
                ids[static_cast<size_t>(i)] = i;
            return ids;
        }());
        for (int x = 0; x < F.source_.num_objects(); ++x)
            for (int y = 0; y < F.source_.num_objects(); ++y) {
                const GradedSpace& hom = F.source_.hom(x, y);
                if (hom.total_dim() == 0)
                    continue;
                MultiMap<K> f1 = F.zero_component({x, y});
                for (Degree d = hom.lo(); d <= hom.hi(); ++d)
                    for (int i = 0; i < hom.dim(d); ++i)
                        f1.add_entry({{d, i}}, HomElem<K>::unit(hom, {d, i}));
                F.set_component({x, y}, std::move(f1));
            }
        return F;
    }

    friend bool operator==(const AInftyFunctor& a, const AInftyFunctor& b)
    {
        return a.object_map_ == b.object_map_ && a.components_ == b.components_ &&
               a.source_ == b.source_ && a.target_ == b.target_;
    }

private:
    AInftyCategory<K> source_, target_;
    std::vector<int> object_map_;
    std::map<ObjectChain, MultiMap<K>> components_;
    int arity_bound_ = 1;
};

namespace detail {

/// Runs fn on every sequence of stored component chains that concatenate
/// (last object = next first object) with total arity <= cap.
template <class K, class Fn>
void for_each_component_sequence(const std::map<ObjectChain, MultiMap<K>>& comps, int cap, Fn&& fn)
{
    std::map<int, std::vector<const std::pair<const ObjectChain, MultiMap<K>>*>> by_first;
    for (const auto& kv : comps)
        by_first[kv.first.front()].push_back(&kv);

    std::vector<const std::pair<const ObjectChain, MultiMap<K>>*> seq;
    std::function<void(int, int)> extend = [&](int last, int arity) {
        if (!seq.empty())
            fn(seq, arity);
        auto it = by_first.find(last);
        if (it == by_first.end())
            return;
        for (const auto* kv : it->second) {
            int a = static_cast<int>(kv->first.size()) - 1;
            if (arity + a > cap)
                continue;
            seq.push_back(kv);
            extend(kv->first.back(), arity + a);
            seq.pop_back();
        }
    };
    for (const auto& [first, list] : by_first) {
        (void)list;
        extend(first, 0);
    }
    // sequences starting at every object are covered since extend() begins
    // with an empty sequence for each distinct first object
}

}  // namespace detail

/// Checks the defining functor relation at every arity n <= n_max: the sum
/// of b^target over all partitions of the inputs through components equals
/// the signed sum of components absorbing one source product.
template <class K>
RelationReport check_functor(const AInftyFunctor<K>& F, int n_max)
{
    if (n_max < 1)
        throw std::invalid_argument("check_functor: n_max must be positive");
    const AInftyCategory<K>& A = F.source();
    const AInftyCategory<K>& B = F.target();
    if (n_max > 2 * std::min(A.arity_bound(), B.arity_bound()) - 1)
        throw std::invalid_argument("check_functor: n_max exceeds the sound range");

    RelationReport report;
    report.checked_arity = n_max;

    std::map<ObjectChain, MultiMap<K>> accum;
    auto accum_for = [&](const ObjectChain& chain) -> MultiMap<K>& {
        auto it = accum.find(chain);
        if (it == accum.end()) {
            std::vector<GradedSpace> sources;
            for (size_t i = 0; i + 1 < chain.size(); ++i)
                sources.push_back(A.hom(chain[i], chain[i + 1]));
            it = accum
                     .emplace(chain, MultiMap<K>(std::move(sources),
                                                 B.hom(F.map_object(chain.front()),
                                                       F.map_object(chain.back())),
                                                 1))
                     .first;
        }
        return it->second;
    };

    // left side: b^B_i(f_{j_1} x .. x f_{j_i})
    detail::for_each_component_sequence(
        F.components(), n_max,
        [&](const std::vector<const std::pair<const ObjectChain, MultiMap<K>>*>& seq, int arity) {
            ObjectChain w;
            w.push_back(F.map_object(seq.front()->first.front()));
            ObjectChain full;
            full.push_back(seq.front()->first.front());
            for (const auto* part : seq) {
                w.push_back(F.map_object(part->first.back()));
                full.insert(full.end(), part->first.begin() + 1, part->first.end());
            }
            const MultiMap<K>* b = B.product(w);
            if (!b)
                return;
            std::vector<const MultiMap<K>*> slots;
            for (const auto* part : seq)
                slots.push_back(&part->second);
            accumulate_substituted(accum_for(full), *b, slots);
            (void)arity;
        });

    // right side, subtracted: (-1)^(|a_1|+..+|a_j|) f_k(.., b^A_l(..), ..)
    for (const auto& [fchain, f] : F.components()) {
        int k = f.arity();
        for (int j = 0; j < k; ++j)
            for (const auto& [bchain, b] : A.products()) {
                if (bchain.front() != fchain[static_cast<size_t>(j)] ||
                    bchain.back() != fchain[static_cast<size_t>(j) + 1])
                    continue;
                int l = static_cast<int>(bchain.size()) - 1;
                int n = k + l - 1;
                if (n > n_max)
                    continue;
                ObjectChain combined;
                combined.insert(combined.end(), fchain.begin(), fchain.begin() + j);
                combined.insert(combined.end(), bchain.begin(), bchain.end());
                combined.insert(combined.end(), fchain.begin() + j + 2, fchain.end());
                MultiMap<K> term(accum_for(combined).sources(), accum_for(combined).target(), 1);
                accumulate_plugged(term, f, j, b,
                                   [](const std::vector<Degree>& p) { return sign_suspended(p); });
                accum_for(combined).add_in_place(term, K(-1));
            }
    }

    for (const auto& [chain, residual] : accum)
        if (!residual.is_zero_map())
            detail::record_nonzero(A, chain, residual, static_cast<int>(chain.size()) - 1,
                                   "functor relation", report.violations);
    return report;
}

/// Composition of functors: (G after F)_n sums g_i over all partitions of
/// the inputs into F-components, with no signs.
template <class K>
AInftyFunctor<K> compose(const AInftyFunctor<K>& F, const AInftyFunctor<K>& G)
{
    if (!(F.target() == G.source()))
        throw std::invalid_argument("compose: functor targets do not match");
    std::vector<int> omap;
    for (int i = 0; i < F.source().num_objects(); ++i)
        omap.push_back(G.map_object(F.map_object(i)));
    AInftyFunctor<K> H(F.source(), G.target(), std::move(omap));
    int cap = std::min(F.arity_bound(), G.arity_bound());
    H.set_arity_bound(cap);

    std::map<ObjectChain, MultiMap<K>> comps;
    detail::for_each_component_sequence(
        F.components(), cap,
        [&](const std::vector<const std::pair<const ObjectChain, MultiMap<K>>*>& seq, int arity) {
            ObjectChain w;
            w.push_back(F.map_object(seq.front()->first.front()));
            ObjectChain full;
            full.push_back(seq.front()->first.front());
            for (const auto* part : seq) {
                w.push_back(F.map_object(part->first.back()));
                full.insert(full.end(), part->first.begin() + 1, part->first.end());
            }
            const MultiMap<K>* g = G.component(w);
            if (!g)
                return;
            std::vector<const MultiMap<K>*> slots;
            for (const auto* part : seq)
                slots.push_back(&part->second);
            auto it = comps.find(full);
            if (it == comps.end())
                it = comps.emplace(full, H.zero_component(full)).first;
            accumulate_substituted(it->second, *g, slots);
            (void)arity;
        });
    for (auto& [chain, table] : comps)
        H.set_component(chain, std::move(table));
    return H;
}

enum class FunctorClass { general, quasi_isomorphism, isomorphism };

inline const char* to_string(FunctorClass c)
{
    switch (c) {
        case FunctorClass::general: return "general";
        case FunctorClass::quasi_isomorphism: return "quasi-isomorphism";
        case FunctorClass::isomorphism: return "isomorphism";
    }
    return "?";
}

/// Isomorphism: bijective on objects with invertible linear part.
/// Quasi-isomorphism: bijective on objects with invertible induced map on
/// cohomology.  Anything else is general.
template <class K>
FunctorClass classify(const AInftyFunctor<K>& F)
{
    const AInftyCategory<K>& A = F.source();
    const AInftyCategory<K>& B = F.target();

    std::vector<int> hit(static_cast<size_t>(B.num_objects()), 0);
    for (int i = 0; i < A.num_objects(); ++i)
        ++hit[static_cast<size_t>(F.map_object(i))];
    bool bijective = B.num_objects() == A.num_objects();
    for (int h : hit)
        bijective = bijective && h == 1;
    if (!bijective)
        return FunctorClass::general;

    bool iso = true;
    for (int x = 0; x < A.num_objects() && iso; ++x)
        for (int y = 0; y < A.num_objects() && iso; ++y) {
            const GradedSpace& src = A.hom(x, y);
            const GradedSpace& dst = B.hom(F.map_object(x), F.map_object(y));
            const MultiMap<K>* f1 = F.component({x, y});
            for (Degree d = std::min(src.lo(), dst.lo()); d <= std::max(src.hi(), dst.hi()); ++d) {
                if (src.dim(d) != dst.dim(d)) {
                    iso = false;
                    break;
                }
                if (src.dim(d) == 0)
                    continue;
                if (!f1) {
                    iso = false;
                    break;
                }
                Mat<K> block(dst.dim(d), src.dim(d));
                for (int i = 0; i < src.dim(d); ++i)
                    block.col(i) = f1->entry({{d, i}}).coeffs;
                if (rank_of(block) != src.dim(d)) {
                    iso = false;
                    break;
                }
            }
        }
    if (iso)
        return FunctorClass::isomorphism;

    // induced map on cohomology, computed on the suspended complexes
    CohomologyData<K> HA = cohomology(A);
    CohomologyData<K> HB = cohomology(B);
    for (int x = 0; x < A.num_objects(); ++x)
        for (int y = 0; y < A.num_objects(); ++y) {
            auto ha = HA.pairs.find({x, y});
            auto hb = HB.pairs.find({F.map_object(x), F.map_object(y)});
            int da = ha == HA.pairs.end() ? 0 : ha->second.classes.total_dim();
            int db = hb == HB.pairs.end() ? 0 : hb->second.classes.total_dim();
            if (da != db)
                return FunctorClass::general;
            if (da == 0)
                continue;
            const MultiMap<K>* f1 = F.component({x, y});
            if (!f1)
                return FunctorClass::general;
            for (Degree d = ha->second.classes.lo(); d <= ha->second.classes.hi(); ++d) {
                int n = ha->second.classes.dim(d);
                if (hb->second.classes.dim(d) != n)
                    return FunctorClass::general;
                if (n == 0)
                    continue;
                Mat<K> induced(n, n);
                const Mat<K>& reps = ha->second.reps.at(d);
                for (int i = 0; i < n; ++i) {
                    // cohomology is indexed unsuspended; the component tables
                    // are suspended, so evaluate one degree down and lift back
                    HomElem<K> rep{d - 1, reps.col(i)};
                    HomElem<K> img = f1->eval({rep});
                    HomElem<K> lifted{img.deg + 1, img.coeffs};
                    induced.col(i) = hb->second.express(lifted);
                }
                if (rank_of(induced) != n)
                    return FunctorClass::general;
            }
        }
    return FunctorClass::quasi_isomorphism;
}

}  // namespace ainfty
