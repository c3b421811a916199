#pragma once

#include "ainfty/graded.hpp"

#include <functional>
#include <map>
#include <vector>

namespace ainfty {

/// Sparse multilinear map between graded spaces: a table keyed by chains of
/// homogeneous basis elements, each holding the exact output vector in the
/// forced output degree (sum of input degrees plus the map degree).
///
/// A nonzero output whose forced degree escapes the target window is a
/// construction-time error, never a silent truncation.
template <class K>
class MultiMap {
public:
    using Chain = std::vector<BasisRef>;

    MultiMap() : deg_(0) {}
    MultiMap(std::vector<GradedSpace> sources, GradedSpace target, Degree deg)
        : sources_(std::move(sources)), target_(std::move(target)), deg_(deg)
    {
        if (sources_.empty())
            throw std::invalid_argument("MultiMap: arity must be at least 1");
    }

    int arity() const { return static_cast<int>(sources_.size()); }
    Degree degree() const { return deg_; }
    const std::vector<GradedSpace>& sources() const { return sources_; }
    const GradedSpace& target() const { return target_; }
    const std::map<Chain, HomElem<K>>& entries() const { return table_; }
    bool is_zero_map() const { return table_.empty(); }

    Degree output_degree(const Chain& chain) const
    {
        Degree d = deg_;
        for (const BasisRef& r : chain)
            d += r.deg;
        return d;
    }

    void add_entry(const Chain& chain, const HomElem<K>& value, const K& scale = K(1))
    {
        check_chain(chain);
        Degree out = output_degree(chain);
        if (value.deg != out)
            throw std::invalid_argument("MultiMap: output degree violates homogeneity");
        if (!target_.in_window(out) || target_.dim(out) == 0) {
            if (value.is_zero())
                return;
            throw std::invalid_argument("MultiMap: nonzero output outside the target degree window");
        }
        if (value.coeffs.size() != target_.dim(out))
            throw std::invalid_argument("MultiMap: output vector has wrong dimension");
        auto it = table_.find(chain);
        if (it == table_.end()) {
            if (value.is_zero())
                return;
            HomElem<K> v = value;
            v.coeffs = Vec<K>(value.coeffs * scale);
            if (!v.is_zero())
                table_.emplace(chain, std::move(v));
            return;
        }
        it->second.coeffs += value.coeffs * scale;
        if (it->second.is_zero())
            table_.erase(it);
    }

    /// Output on a basis chain (zero element of the forced degree if absent).
    HomElem<K> entry(const Chain& chain) const
    {
        auto it = table_.find(chain);
        if (it != table_.end())
            return it->second;
        return HomElem<K>::zero(target_, output_degree(chain));
    }

    /// Multilinear extension to arbitrary homogeneous arguments.
    HomElem<K> eval(const std::vector<HomElem<K>>& args) const
    {
        if (static_cast<int>(args.size()) != arity())
            throw std::invalid_argument("MultiMap: argument count does not match arity");
        Degree out = deg_;
        for (size_t i = 0; i < args.size(); ++i) {
            if (args[i].coeffs.size() != sources_[i].dim(args[i].deg))
                throw std::invalid_argument("MultiMap: argument does not live in the source space");
            out += args[i].deg;
        }
        HomElem<K> acc;
        acc.deg = out;
        acc.coeffs = Vec<K>::Constant(target_.dim(out), K(0));
        for (const auto& [chain, value] : table_) {
            K factor(1);
            bool live = true;
            for (size_t i = 0; i < chain.size(); ++i) {
                if (args[i].deg != chain[i].deg) {
                    live = false;
                    break;
                }
                factor *= args[i].coeffs[chain[i].idx];
                if (factor == K(0)) {
                    live = false;
                    break;
                }
            }
            if (live)
                acc.coeffs += value.coeffs * factor;
        }
        return acc;
    }

    MultiMap scaled(const K& c) const
    {
        MultiMap r(sources_, target_, deg_);
        if (!(c == K(0)))
            for (const auto& [chain, value] : table_)
                r.add_entry(chain, value, c);
        return r;
    }

    void add_in_place(const MultiMap& o, const K& scale = K(1))
    {
        if (o.deg_ != deg_ || o.arity() != arity())
            throw std::invalid_argument("MultiMap: incompatible shapes in +");
        for (const auto& [chain, value] : o.table_)
            add_entry(chain, value, scale);
    }

    /// The same table with every output pushed through a graded map.
    MultiMap postcomposed(const GradedMap<K>& m) const
    {
        MultiMap r(sources_, m.target(), deg_ + m.degree());
        for (const auto& [chain, value] : table_)
            r.add_entry(chain, m.apply(value));
        return r;
    }

    friend bool operator==(const MultiMap& a, const MultiMap& b)
    {
        if (a.deg_ != b.deg_ || a.arity() != b.arity())
            return false;
        return a.table_ == b.table_;
    }

private:
    void check_chain(const Chain& chain) const
    {
        if (static_cast<int>(chain.size()) != arity())
            throw std::invalid_argument("MultiMap: chain length does not match arity");
        for (size_t i = 0; i < chain.size(); ++i) {
            if (chain[i].idx < 0 || chain[i].idx >= sources_[i].dim(chain[i].deg))
                throw std::invalid_argument("MultiMap: basis reference outside the source space");
        }
    }

    std::vector<GradedSpace> sources_;
    GradedSpace target_;
    Degree deg_;
    std::map<Chain, HomElem<K>> table_;
};

/// accum += outer with `inner` plugged into input slot `slot`, each term
/// weighted by sign(prefix degrees of outer's first `slot` inputs).  This is
/// the shared kernel of the relation and functor checkers.
template <class K, class SignFn>
void accumulate_plugged(MultiMap<K>& accum, const MultiMap<K>& outer, int slot,
                        const MultiMap<K>& inner, SignFn sign_of_prefix)
{
    for (const auto& [ochain, oval] : outer.entries()) {
        const BasisRef& at = ochain[static_cast<size_t>(slot)];
        std::vector<Degree> prefix;
        prefix.reserve(static_cast<size_t>(slot));
        for (int i = 0; i < slot; ++i)
            prefix.push_back(ochain[static_cast<size_t>(i)].deg);
        int sgn = sign_of_prefix(prefix);
        for (const auto& [ichain, ival] : inner.entries()) {
            if (ival.deg != at.deg)
                continue;
            K c = ival.coeffs[at.idx];
            if (c == K(0))
                continue;
            typename MultiMap<K>::Chain combined;
            combined.reserve(ochain.size() + ichain.size() - 1);
            combined.insert(combined.end(), ochain.begin(), ochain.begin() + slot);
            combined.insert(combined.end(), ichain.begin(), ichain.end());
            combined.insert(combined.end(), ochain.begin() + slot + 1, ochain.end());
            accum.add_entry(combined, oval, c * K(sgn));
        }
    }
}

/// accum += outer(g_1 x ... x g_i) with a map substituted into every slot
/// and no signs (all substituted maps are degree zero in practice).
template <class K>
void accumulate_substituted(MultiMap<K>& accum, const MultiMap<K>& outer,
                            const std::vector<const MultiMap<K>*>& slots, const K& scale = K(1))
{
    if (static_cast<int>(slots.size()) != outer.arity())
        throw std::invalid_argument("accumulate_substituted: slot count mismatch");
    for (const auto& [ochain, oval] : outer.entries()) {
        typename MultiMap<K>::Chain combined;
        std::function<void(size_t, const K&)> walk = [&](size_t t, const K& factor) {
            if (t == ochain.size()) {
                accum.add_entry(combined, oval, factor * scale);
                return;
            }
            const BasisRef& at = ochain[t];
            for (const auto& [ichain, ival] : slots[t]->entries()) {
                if (ival.deg != at.deg)
                    continue;
                K c = ival.coeffs[at.idx];
                if (c == K(0))
                    continue;
                size_t before = combined.size();
                combined.insert(combined.end(), ichain.begin(), ichain.end());
                walk(t + 1, factor * c);
                combined.resize(before);
            }
        };
        walk(0, K(1));
    }
}

}  // namespace ainfty
