#pragma once

#include "ainfty/hpt.hpp"

#include <optional>
#include <tuple>

namespace ainfty {

/// The two sign conventions for shifted objects.  Convention 1 twists the
/// suspended products by (-1)^(r_1), convention 2 by (-1)^(r_1+..+r_k).
enum class ShiftConvention { c1 = 1, c2 = 2 };

inline int convention_number(ShiftConvention a) { return a == ShiftConvention::c1 ? 1 : 2; }

/// Formal shifted direct sum X_1[r_1] + .. + X_l[r_l]; order is significant
/// (it fixes the block structure) and no normalization is performed.
struct SumObject {
    struct Summand {
        int object;
        int shift;
        auto operator<=>(const Summand&) const = default;
    };
    std::vector<Summand> summands;

    SumObject() = default;
    SumObject(std::vector<Summand> s) : summands(std::move(s)) {}
    static SumObject single(int object, int shift) { return SumObject({{object, shift}}); }

    size_t size() const { return summands.size(); }
    int shift_of(size_t i) const { return summands[i].shift; }
    int object_of(size_t i) const { return summands[i].object; }

    SumObject shifted(int by) const
    {
        SumObject r = *this;
        for (auto& s : r.summands)
            s.shift += by;
        return r;
    }

    template <class K>
    std::string label(const AInftyCategory<K>& base) const
    {
        std::string out;
        for (size_t i = 0; i < summands.size(); ++i) {
            if (i)
                out += "+";
            out += base.object_label(summands[i].object);
            if (summands[i].shift != 0)
                out += "[" + std::to_string(summands[i].shift) + "]";
        }
        return out;
    }

    auto operator<=>(const SumObject&) const = default;
};

/// Sign twisting an arity-k product along a block chain with summand shifts
/// (r_1,..,r_{k+1}); the last shift never enters.
///   suspended:    a=1: (-1)^(r_1)              a=2: (-1)^(r_1+..+r_k)
///   unsuspended:  a=1: (-1)^(r_1 k + r_2+..+r_k)   a=2: (-1)^(r_1 k)
inline int enlargement_sign(ShiftConvention a, Presentation pres, const std::vector<int>& shifts)
{
    int k = static_cast<int>(shifts.size()) - 1;
    long long e = 0;
    if (pres == Presentation::suspended) {
        if (a == ShiftConvention::c1)
            e = shifts[0];
        else
            for (int t = 0; t < k; ++t)
                e += shifts[static_cast<size_t>(t)];
    }
    else {
        e = static_cast<long long>(shifts[0]) * k;
        if (a == ShiftConvention::c1)
            for (int t = 1; t < k; ++t)
                e += shifts[static_cast<size_t>(t)];
    }
    return parity_sign(e);
}

/// Block layout of an enlarged hom space: for each degree the list of
/// (summand i of the source, summand j of the target) blocks, each a copy of
/// the base hom in its shifted degree.  Basis labels carry the block tag.
struct BlockSlice {
    int i, j;
    Degree base_deg;
    int offset, len;
};

template <class K>
struct EnlargedLayout {
    GradedSpace space;
    std::map<Degree, std::vector<BlockSlice>> slices;

    const BlockSlice* find(Degree d, int i, int j) const
    {
        auto it = slices.find(d);
        if (it == slices.end())
            return nullptr;
        for (const BlockSlice& s : it->second)
            if (s.i == i && s.j == j)
                return &s;
        return nullptr;
    }
};

namespace detail {

template <class K, class HomFn>
EnlargedLayout<K> enlarged_layout(HomFn&& hom_of, const SumObject& X, const SumObject& Y)
{
    EnlargedLayout<K> out;
    Degree lo = 0, hi = -1;
    bool any = false;
    for (size_t i = 0; i < X.size(); ++i)
        for (size_t j = 0; j < Y.size(); ++j) {
            const GradedSpace& base = hom_of(X.object_of(i), Y.object_of(j));
            if (base.total_dim() == 0)
                continue;
            Degree shift = Y.shift_of(j) - X.shift_of(i);  // base_deg = d + shift
            Degree blo = base.lo() - shift, bhi = base.hi() - shift;
            if (!any) {
                lo = blo;
                hi = bhi;
                any = true;
            }
            else {
                lo = std::min(lo, blo);
                hi = std::max(hi, bhi);
            }
        }
    if (!any)
        return out;
    std::vector<std::vector<std::string>> labels(static_cast<size_t>(hi - lo + 1));
    for (Degree d = lo; d <= hi; ++d) {
        int offset = 0;
        for (size_t i = 0; i < X.size(); ++i)
            for (size_t j = 0; j < Y.size(); ++j) {
                const GradedSpace& base = hom_of(X.object_of(i), Y.object_of(j));
                Degree bd = d + Y.shift_of(j) - X.shift_of(i);
                int len = base.dim(bd);
                if (len == 0)
                    continue;
                for (int t = 0; t < len; ++t)
                    labels[static_cast<size_t>(d - lo)].push_back(
                        base.label(bd, t) + "@" + std::to_string(i) + "." + std::to_string(j));
                out.slices[d].push_back({static_cast<int>(i), static_cast<int>(j), bd, offset, len});
                offset += len;
            }
    }
    out.space = GradedSpace(lo, std::move(labels));
    return out;
}

}  // namespace detail

/// View of the additive enlargement of a base category under one sign
/// convention: computes blocked hom spaces between arbitrary sum objects and
/// evaluates the twisted products on concrete elements.  Nothing is
/// enumerated globally; layouts are cached per requested pair.
template <class K>
class Enlargement {
public:
    Enlargement(AInftyCategory<K> base, ShiftConvention a) : base_(std::move(base)), a_(a) {}

    const AInftyCategory<K>& base() const { return base_; }
    ShiftConvention convention() const { return a_; }

    const EnlargedLayout<K>& layout(const SumObject& X, const SumObject& Y) const
    {
        auto key = std::make_pair(X, Y);
        auto it = layouts_.find(key);
        if (it == layouts_.end()) {
            it = layouts_
                     .emplace(key, detail::enlarged_layout<K>(
                                       [this](int x, int y) -> const GradedSpace& {
                                           return base_.hom(x, y);
                                       },
                                       X, Y))
                     .first;
        }
        return it->second;
    }

    const GradedSpace& hom(const SumObject& X, const SumObject& Y) const
    {
        return layout(X, Y).space;
    }

    /// Arity-k product of the enlargement evaluated on homogeneous elements
    /// along a chain of sum objects.
    HomElem<K> eval(const std::vector<SumObject>& chain, const std::vector<HomElem<K>>& args) const
    {
        size_t k = args.size();
        if (chain.size() != k + 1)
            throw std::invalid_argument("Enlargement::eval: chain does not match arity");
        Degree out_deg = base_.product_degree(static_cast<int>(k));
        for (const auto& a : args)
            out_deg += a.deg;
        const EnlargedLayout<K>& out_layout = layout(chain.front(), chain.back());
        HomElem<K> acc = HomElem<K>::zero(out_layout.space, out_deg);

        // decompose each argument into base block elements
        std::vector<std::vector<std::tuple<int, int, HomElem<K>>>> parts(k);
        for (size_t t = 0; t < k; ++t) {
            const EnlargedLayout<K>& lay = layout(chain[t], chain[t + 1]);
            if (args[t].coeffs.size() != lay.space.dim(args[t].deg))
                throw std::invalid_argument("Enlargement::eval: argument has wrong dimension");
            auto it = lay.slices.find(args[t].deg);
            if (it == lay.slices.end())
                continue;
            for (const BlockSlice& s : it->second) {
                HomElem<K> piece{s.base_deg, args[t].coeffs.segment(s.offset, s.len)};
                if (!piece.is_zero())
                    parts[t].push_back({s.i, s.j, std::move(piece)});
            }
        }

        std::vector<const std::tuple<int, int, HomElem<K>>*> path(k);
        std::function<void(size_t)> walk = [&](size_t t) {
            if (t == k) {
                ObjectChain base_chain;
                std::vector<int> shifts;
                base_chain.push_back(chain[0].object_of(
                    static_cast<size_t>(std::get<0>(*path[0]))));
                shifts.push_back(chain[0].shift_of(static_cast<size_t>(std::get<0>(*path[0]))));
                for (size_t u = 0; u < k; ++u) {
                    int j = std::get<1>(*path[u]);
                    base_chain.push_back(chain[u + 1].object_of(static_cast<size_t>(j)));
                    shifts.push_back(chain[u + 1].shift_of(static_cast<size_t>(j)));
                }
                const MultiMap<K>* b = base_.product(base_chain);
                if (!b)
                    return;
                std::vector<HomElem<K>> base_args;
                base_args.reserve(k);
                for (size_t u = 0; u < k; ++u)
                    base_args.push_back(std::get<2>(*path[u]));
                HomElem<K> v = b->eval(base_args);
                if (v.is_zero())
                    return;
                int sgn = enlargement_sign(a_, base_.presentation(), shifts);
                const BlockSlice* slice =
                    out_layout.find(acc.deg, std::get<0>(*path[0]), std::get<1>(*path[k - 1]));
                if (!slice)
                    throw std::logic_error("Enlargement::eval: output block escapes the layout");
                acc.coeffs.segment(slice->offset, slice->len) += v.coeffs * K(sgn);
                return;
            }
            for (const auto& piece : parts[t]) {
                if (t > 0 && std::get<0>(piece) != std::get<1>(*path[t - 1]))
                    continue;
                path[t] = &piece;
                walk(t + 1);
            }
        };
        if (k > 0)
            walk(0);
        return acc;
    }

private:
    AInftyCategory<K> base_;
    ShiftConvention a_;
    mutable std::map<std::pair<SumObject, SumObject>, EnlargedLayout<K>> layouts_;
};

/// Materializes the enlargement on a finite list of sum objects as an
/// ordinary category: blocked homs, products twisted per block chain, and
/// (when the base is strictly unital) the blockwise units, which in
/// convention 1 carry the sign (-1)^(r_i) per summand.
template <class K>
AInftyCategory<K> enlarge(const AInftyCategory<K>& C, ShiftConvention a,
                          const std::vector<SumObject>& objects)
{
    std::vector<std::string> labels;
    for (const SumObject& o : objects)
        labels.push_back(o.label(C));
    AInftyCategory<K> R(labels, C.presentation(), C.arity_bound());

    auto hom_of = [&C](int x, int y) -> const GradedSpace& { return C.hom(x, y); };
    std::map<std::pair<int, int>, EnlargedLayout<K>> layout;
    int n = static_cast<int>(objects.size());
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            layout[{x, y}] = detail::enlarged_layout<K>(hom_of, objects[static_cast<size_t>(x)],
                                                        objects[static_cast<size_t>(y)]);
            R.set_hom(x, y, layout[{x, y}].space);
        }

    // candidates per base object: (enlarged object index, summand index)
    std::map<int, std::vector<std::pair<int, int>>> candidates;
    for (int o = 0; o < n; ++o)
        for (size_t i = 0; i < objects[static_cast<size_t>(o)].size(); ++i)
            candidates[objects[static_cast<size_t>(o)].object_of(i)].push_back(
                {o, static_cast<int>(i)});

    std::map<ObjectChain, MultiMap<K>> tables;
    for (const auto& [bchain, table] : C.products()) {
        size_t len = bchain.size();
        std::vector<std::pair<int, int>> pick(len);
        std::function<void(size_t)> place = [&](size_t t) {
            if (t == len) {
                ObjectChain echain;
                std::vector<int> shifts;
                for (size_t u = 0; u < len; ++u) {
                    echain.push_back(pick[u].first);
                    shifts.push_back(objects[static_cast<size_t>(pick[u].first)].shift_of(
                        static_cast<size_t>(pick[u].second)));
                }
                int sgn = enlargement_sign(a, C.presentation(), shifts);
                auto it = tables.find(echain);
                if (it == tables.end())
                    it = tables.emplace(echain, R.zero_product(echain)).first;
                for (const auto& [refs, value] : table.entries()) {
                    typename MultiMap<K>::Chain erefs(len - 1);
                    bool alive = true;
                    for (size_t u = 0; u + 1 < len && alive; ++u) {
                        const BlockSlice* s = layout[{pick[u].first, pick[u + 1].first}].find(
                            refs[u].deg - shifts[u + 1] + shifts[u], pick[u].second,
                            pick[u + 1].second);
                        if (!s)
                            alive = false;
                        else
                            erefs[u] = {refs[u].deg - shifts[u + 1] + shifts[u],
                                        s->offset + refs[u].idx};
                    }
                    if (!alive)
                        continue;
                    const BlockSlice* so = layout[{pick[0].first, pick[len - 1].first}].find(
                        value.deg - shifts[len - 1] + shifts[0], pick[0].second,
                        pick[len - 1].second);
                    if (!so)
                        throw std::logic_error("enlarge: output block escapes the layout");
                    HomElem<K> out = HomElem<K>::zero(
                        layout[{pick[0].first, pick[len - 1].first}].space,
                        value.deg - shifts[len - 1] + shifts[0]);
                    out.coeffs.segment(so->offset, so->len) = value.coeffs;
                    it->second.add_entry(erefs, out, K(sgn));
                }
                return;
            }
            auto itc = candidates.find(bchain[t]);
            if (itc == candidates.end())
                return;
            for (const auto& c : itc->second) {
                pick[t] = c;
                place(t + 1);
            }
        };
        place(0);
    }
    for (auto& [chain, table] : tables)
        R.set_product(chain, std::move(table));

    if (C.has_units()) {
        Degree udeg = C.presentation() == Presentation::suspended ? -1 : 0;
        for (int o = 0; o < n; ++o) {
            const SumObject& X = objects[static_cast<size_t>(o)];
            const EnlargedLayout<K>& lay = layout[{o, o}];
            bool have_all = true;
            for (size_t i = 0; i < X.size(); ++i)
                have_all = have_all && C.units().count(X.object_of(i)) > 0;
            if (!have_all || lay.space.dim(udeg) == 0)
                continue;
            HomElem<K> u = HomElem<K>::zero(lay.space, udeg);
            for (size_t i = 0; i < X.size(); ++i) {
                const HomElem<K>& base_u = C.units().at(X.object_of(i));
                const BlockSlice* s = lay.find(udeg, static_cast<int>(i), static_cast<int>(i));
                if (!s)
                    continue;
                int lambda = a == ShiftConvention::c1 ? parity_sign(X.shift_of(i)) : 1;
                u.coeffs.segment(s->offset, s->len) = base_u.coeffs * K(lambda);
            }
            R.set_unit(o, std::move(u));
        }
    }
    return R;
}

/// C with one object X replaced by X[1] (the single-shift construction);
/// the other objects keep shift zero.
template <class K>
AInftyCategory<K> shift_single(const AInftyCategory<K>& C, int object, ShiftConvention a)
{
    if (object < 0 || object >= C.num_objects())
        throw std::invalid_argument("shift_single: unknown object");
    std::vector<SumObject> objects;
    for (int i = 0; i < C.num_objects(); ++i)
        objects.push_back(SumObject::single(i, i == object ? 1 : 0));
    return enlarge(C, a, objects);
}

/// The induced functor between enlargements: identical components under the
/// block identification, no sign (for both conventions).
template <class K>
AInftyFunctor<K> induce_functor(const AInftyFunctor<K>& F, ShiftConvention a,
                                const std::vector<SumObject>& source_objects)
{
    const AInftyCategory<K>& A = F.source();
    const AInftyCategory<K>& B = F.target();

    std::vector<SumObject> mapped;
    for (const SumObject& o : source_objects) {
        SumObject m = o;
        for (auto& s : m.summands)
            s.object = F.map_object(s.object);
        mapped.push_back(std::move(m));
    }
    // dedupe the target list, remembering where each source object lands
    std::vector<SumObject> target_objects;
    std::vector<int> omap;
    for (const SumObject& m : mapped) {
        int at = -1;
        for (size_t i = 0; i < target_objects.size(); ++i)
            if (target_objects[i] == m)
                at = static_cast<int>(i);
        if (at < 0) {
            at = static_cast<int>(target_objects.size());
            target_objects.push_back(m);
        }
        omap.push_back(at);
    }

    AInftyCategory<K> EA = enlarge(A, a, source_objects);
    AInftyCategory<K> EB = enlarge(B, a, target_objects);
    AInftyFunctor<K> G(EA, EB, omap);
    G.set_arity_bound(F.arity_bound());

    auto hom_of_A = [&A](int x, int y) -> const GradedSpace& { return A.hom(x, y); };
    auto hom_of_B = [&B](int x, int y) -> const GradedSpace& { return B.hom(x, y); };
    std::map<std::pair<int, int>, EnlargedLayout<K>> lay_src, lay_tgt;
    int n = static_cast<int>(source_objects.size());
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            lay_src[{x, y}] = detail::enlarged_layout<K>(hom_of_A, source_objects[static_cast<size_t>(x)],
                                                         source_objects[static_cast<size_t>(y)]);
            lay_tgt[{x, y}] = detail::enlarged_layout<K>(
                hom_of_B, mapped[static_cast<size_t>(x)], mapped[static_cast<size_t>(y)]);
        }

    std::map<int, std::vector<std::pair<int, int>>> candidates;
    for (int o = 0; o < n; ++o)
        for (size_t i = 0; i < source_objects[static_cast<size_t>(o)].size(); ++i)
            candidates[source_objects[static_cast<size_t>(o)].object_of(i)].push_back(
                {o, static_cast<int>(i)});

    std::map<ObjectChain, MultiMap<K>> comps;
    for (const auto& [bchain, table] : F.components()) {
        size_t len = bchain.size();
        std::vector<std::pair<int, int>> pick(len);
        std::function<void(size_t)> place = [&](size_t t) {
            if (t == len) {
                ObjectChain echain;
                std::vector<int> shifts;
                for (size_t u = 0; u < len; ++u) {
                    echain.push_back(pick[u].first);
                    shifts.push_back(source_objects[static_cast<size_t>(pick[u].first)].shift_of(
                        static_cast<size_t>(pick[u].second)));
                }
                auto it = comps.find(echain);
                if (it == comps.end())
                    it = comps.emplace(echain, G.zero_component(echain)).first;
                for (const auto& [refs, value] : table.entries()) {
                    typename MultiMap<K>::Chain erefs(len - 1);
                    bool alive = true;
                    for (size_t u = 0; u + 1 < len && alive; ++u) {
                        const BlockSlice* s = lay_src[{pick[u].first, pick[u + 1].first}].find(
                            refs[u].deg - shifts[u + 1] + shifts[u], pick[u].second,
                            pick[u + 1].second);
                        if (!s)
                            alive = false;
                        else
                            erefs[u] = {refs[u].deg - shifts[u + 1] + shifts[u],
                                        s->offset + refs[u].idx};
                    }
                    if (!alive)
                        continue;
                    const BlockSlice* so = lay_tgt[{pick[0].first, pick[len - 1].first}].find(
                        value.deg - shifts[len - 1] + shifts[0], pick[0].second,
                        pick[len - 1].second);
                    if (!so)
                        throw std::logic_error("induce_functor: output block escapes the layout");
                    HomElem<K> out = HomElem<K>::zero(
                        lay_tgt[{pick[0].first, pick[len - 1].first}].space,
                        value.deg - shifts[len - 1] + shifts[0]);
                    out.coeffs.segment(so->offset, so->len) = value.coeffs;
                    it->second.add_entry(erefs, out);
                }
                return;
            }
            auto itc = candidates.find(bchain[t]);
            if (itc == candidates.end())
                return;
            for (const auto& c : itc->second) {
                pick[t] = c;
                place(t + 1);
            }
        };
        place(0);
    }
    for (auto& [chain, table] : comps)
        if (!table.is_zero_map())
            G.set_component(chain, std::move(table));
    return G;
}

/// The induced SDR on the enlargement: iota and pi act blockwise unchanged,
/// h acquires (-1)^(r_i) on blocks whose source summand carries shift r_i
/// (and so does the differential, through the enlarged products).
template <class K>
SDRData<K> induce_sdr(const SDRData<K>& s, ShiftConvention a, const std::vector<SumObject>& objects)
{
    SDRData<K> out = SDRData<K>::make(enlarge(s.big, a, objects));

    auto hom_small = [&s](int x, int y) -> const GradedSpace& {
        static const GradedSpace none;
        auto it = s.small_homs.find({x, y});
        return it == s.small_homs.end() ? none : it->second;
    };
    auto hom_big = [&s](int x, int y) -> const GradedSpace& { return s.big.hom(x, y); };

    int n = static_cast<int>(objects.size());
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            const SumObject& X = objects[static_cast<size_t>(x)];
            const SumObject& Y = objects[static_cast<size_t>(y)];
            EnlargedLayout<K> lsmall = detail::enlarged_layout<K>(hom_small, X, Y);
            EnlargedLayout<K> lbig = detail::enlarged_layout<K>(hom_big, X, Y);
            auto key = std::make_pair(x, y);
            GradedMap<K> io(lsmall.space, lbig.space, 0), pr(lbig.space, lsmall.space, 0),
                ho(lbig.space, lbig.space, -1);
            Degree lo = std::min(lsmall.space.lo(), lbig.space.lo());
            Degree hi = std::max(lsmall.space.hi(), lbig.space.hi());
            for (Degree d = lo; d <= hi; ++d) {
                if (lbig.space.dim(d) > 0 && lsmall.space.dim(d) > 0) {
                    Mat<K> iod = Mat<K>::Constant(lbig.space.dim(d), lsmall.space.dim(d), K(0));
                    Mat<K> prd = Mat<K>::Constant(lsmall.space.dim(d), lbig.space.dim(d), K(0));
                    for (const BlockSlice& bs : lsmall.slices[d]) {
                        const BlockSlice* bb = lbig.find(d, bs.i, bs.j);
                        if (!bb)
                            continue;
                        auto pk = std::make_pair(X.object_of(static_cast<size_t>(bs.i)),
                                                 Y.object_of(static_cast<size_t>(bs.j)));
                        iod.block(bb->offset, bs.offset, bb->len, bs.len) =
                            s.iota.at(pk).block(bs.base_deg);
                        prd.block(bs.offset, bb->offset, bs.len, bb->len) =
                            s.pi.at(pk).block(bs.base_deg);
                    }
                    io.set_block(d, std::move(iod));
                    pr.set_block(d, std::move(prd));
                }
                if (lbig.space.dim(d) > 0 && lbig.space.dim(d - 1) > 0) {
                    Mat<K> hd = Mat<K>::Constant(lbig.space.dim(d - 1), lbig.space.dim(d), K(0));
                    for (const BlockSlice& bs : lbig.slices[d]) {
                        const BlockSlice* bt = lbig.find(d - 1, bs.i, bs.j);
                        if (!bt)
                            continue;
                        auto pk = std::make_pair(X.object_of(static_cast<size_t>(bs.i)),
                                                 Y.object_of(static_cast<size_t>(bs.j)));
                        int sgn = parity_sign(X.shift_of(static_cast<size_t>(bs.i)));
                        hd.block(bt->offset, bs.offset, bt->len, bs.len) =
                            s.h.at(pk).block(bs.base_deg) * K(sgn);
                    }
                    ho.set_block(d, std::move(hd));
                }
            }
            out.small_homs[key] = lsmall.space;
            out.iota[key] = std::move(io);
            out.pi[key] = std::move(pr);
            out.h[key] = std::move(ho);
        }
    return out;
}

struct SquareCheckResult {
    bool equal = false;
    std::string diff;  // empty when equal
};

namespace detail {

template <class K>
bool compare_products(const AInftyCategory<K>& A, const AInftyCategory<K>& B, std::string& diff)
{
    auto keys = A.products();
    for (const auto& [chain, table] : B.products())
        if (!keys.count(chain))
            keys.emplace(chain, table);
    for (const auto& [chain, ignored] : keys) {
        const MultiMap<K>* ta = A.product(chain);
        const MultiMap<K>* tb = B.product(chain);
        bool ok = (ta == nullptr && tb == nullptr) || (ta && tb && *ta == *tb) ||
                  (ta && !tb && ta->is_zero_map()) || (tb && !ta && tb->is_zero_map());
        if (!ok) {
            diff = "product tables differ at arity " + std::to_string(chain.size() - 1) + " on (";
            for (size_t i = 0; i < chain.size(); ++i)
                diff += (i ? "," : "") + A.object_label(chain[i]);
            diff += ")";
            return false;
        }
    }
    return true;
}

}  // namespace detail

/// The HPT-compatibility square: transferring and then enlarging must agree
/// with enlarging and then transferring over the induced SDR, on the nose,
/// for the structures and for the functors.  `other` lets the caller pair
/// different conventions on the two paths (a deliberate mismatch probe).
template <class K>
SquareCheckResult hpt_square_check(const SDRData<K>& s, ShiftConvention a, int arity_out,
                                   const std::vector<SumObject>& objects,
                                   std::optional<ShiftConvention> other = std::nullopt)
{
    ShiftConvention a2 = other.value_or(a);
    SquareCheckResult r;

    TransferResult<K> base = transfer(s, arity_out, false);
    AInftyCategory<K> path1 = enlarge(base.small, a, objects);
    AInftyFunctor<K> f1 = induce_functor(base.functor, a, objects);

    SDRData<K> induced = induce_sdr(s, a2, objects);
    TransferResult<K> path2 = transfer(induced, arity_out, false);

    if (!(path1.homs() == path2.small.homs())) {
        r.diff = "enlarged hom spaces differ";
        return r;
    }
    if (!detail::compare_products(path1, path2.small, r.diff))
        return r;
    if (!(f1.object_map() == path2.functor.object_map())) {
        r.diff = "induced functor object maps differ";
        return r;
    }
    {
        auto keys = f1.components();
        for (const auto& [chain, table] : path2.functor.components())
            if (!keys.count(chain))
                keys.emplace(chain, table);
        for (const auto& [chain, ignored] : keys) {
            const MultiMap<K>* ta = f1.component(chain);
            const MultiMap<K>* tb = path2.functor.component(chain);
            bool ok = (ta == nullptr && tb == nullptr) || (ta && tb && *ta == *tb) ||
                      (ta && !tb && ta->is_zero_map()) || (tb && !ta && tb->is_zero_map());
            if (!ok) {
                r.diff = "functor components differ at arity " + std::to_string(chain.size() - 1);
                return r;
            }
        }
    }
    r.equal = true;
    return r;
}

}  // namespace ainfty
