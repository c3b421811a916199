#pragma once

#include "ainfty/shifts.hpp"

namespace ainfty {

/// One-sided twisted complex over an enlargement: a sum object together
/// with a strictly upper-triangular degree-zero (suspended) endomorphism
/// solving the Maurer-Cartan equation.  The triangularity bound makes every
/// product sum finite.
template <class K>
struct TwistedComplex {
    SumObject base;
    HomElem<K> phi;  // suspended degree 0 in hom(base, base)

    template <class C>
    std::string label(const C& cat) const
    {
        return base.label(cat);
    }
};

template <class K>
struct TwMorphism {
    TwistedComplex<K> source, target;
    HomElem<K> value;  // element of the enlarged hom(source.base, target.base)
};

namespace detail {

template <class K>
void require_suspended(const Enlargement<K>& enl)
{
    if (enl.base().presentation() != Presentation::suspended)
        throw std::invalid_argument("twisted complexes need a suspended base enlargement");
}

}  // namespace detail

/// Throws unless phi is degree 0 and strictly upper triangular by block.
template <class K>
void check_one_sided(const Enlargement<K>& enl, const SumObject& base, const HomElem<K>& phi)
{
    detail::require_suspended(enl);
    const EnlargedLayout<K>& lay = enl.layout(base, base);
    if (phi.deg != 0 || phi.coeffs.size() != lay.space.dim(0))
        throw std::invalid_argument("twisted complex: phi must be a degree-0 suspended element");
    auto it = lay.slices.find(0);
    if (it == lay.slices.end())
        return;
    for (const BlockSlice& s : it->second) {
        if (s.i < s.j)
            continue;
        for (int t = 0; t < s.len; ++t)
            if (!(phi.coeffs[s.offset + t] == K(0)))
                throw std::invalid_argument("twisted complex: phi is not strictly upper triangular");
    }
}

/// The finite Maurer-Cartan sum b_1(phi) + b_2(phi,phi) + ...; each phi
/// insertion strictly raises the block index, so at most l-1 terms survive.
template <class K>
HomElem<K> mc_residual(const Enlargement<K>& enl, const TwistedComplex<K>& t)
{
    const EnlargedLayout<K>& lay = enl.layout(t.base, t.base);
    HomElem<K> acc = HomElem<K>::zero(lay.space, 1);
    int bound = std::min(enl.base().arity_bound(), static_cast<int>(t.base.size()) - 1);
    for (int k = 1; k <= std::max(bound, 1); ++k) {
        std::vector<SumObject> chain(static_cast<size_t>(k) + 1, t.base);
        std::vector<HomElem<K>> args(static_cast<size_t>(k), t.phi);
        HomElem<K> term = enl.eval(chain, args);
        if (!term.is_zero())
            acc.coeffs += term.coeffs;
    }
    return acc;
}

template <class K>
RelationReport check_mc(const Enlargement<K>& enl, const TwistedComplex<K>& t)
{
    check_one_sided(enl, t.base, t.phi);
    RelationReport report;
    report.checked_arity = std::min(enl.base().arity_bound(),
                                    static_cast<int>(t.base.size()) - 1);
    HomElem<K> r = mc_residual(enl, t);
    if (!r.is_zero()) {
        RelationViolation v;
        v.context = "Maurer-Cartan";
        v.object_chain = {t.base.label(enl.base())};
        v.residual_degree = r.deg;
        for (Eigen::Index i = 0; i < r.coeffs.size(); ++i)
            v.residual.push_back(field_traits<K>::str(r.coeffs[i]));
        report.violations.push_back(std::move(v));
    }
    return report;
}

/// Validating constructor: one-sidedness and the Maurer-Cartan equation are
/// both checked exactly.
template <class K>
TwistedComplex<K> make_twisted(const Enlargement<K>& enl, SumObject base, HomElem<K> phi)
{
    TwistedComplex<K> t{std::move(base), std::move(phi)};
    auto report = check_mc(enl, t);
    if (!report.ok())
        throw std::invalid_argument("twisted complex: phi does not solve the Maurer-Cartan equation");
    return t;
}

template <class K>
TwistedComplex<K> zero_twisted(const Enlargement<K>& enl, SumObject base)
{
    const EnlargedLayout<K>& lay = enl.layout(base, base);
    return TwistedComplex<K>{base, HomElem<K>::zero(lay.space, 0)};
}

/// b^Tw_n: the enlarged products with all possible blocks of twist
/// insertions around the arguments.
template <class K>
HomElem<K> tw_eval(const Enlargement<K>& enl, const std::vector<TwistedComplex<K>>& chain,
                   const std::vector<HomElem<K>>& args)
{
    detail::require_suspended(enl);
    size_t n = args.size();
    if (chain.size() != n + 1)
        throw std::invalid_argument("tw_eval: chain does not match arity");
    Degree out_deg = 1;
    for (const auto& a : args)
        out_deg += a.deg;
    const EnlargedLayout<K>& out_lay = enl.layout(chain.front().base, chain.back().base);
    HomElem<K> acc = HomElem<K>::zero(out_lay.space, out_deg);

    int K_bound = enl.base().arity_bound();
    std::vector<int> caps(n + 1);
    for (size_t t = 0; t <= n; ++t)
        caps[t] = static_cast<int>(chain[t].base.size()) - 1;

    std::vector<int> ins(n + 1, 0);
    std::function<void(size_t, int)> walk = [&](size_t t, int total) {
        if (t == n + 1) {
            int arity = static_cast<int>(n) + total;
            if (arity < 1 || arity > K_bound)
                return;
            std::vector<HomElem<K>> xs;
            std::vector<SumObject> oc;
            for (size_t u = 0; u <= n; ++u) {
                for (int c = 0; c < ins[u]; ++c) {
                    oc.push_back(chain[u].base);
                    xs.push_back(chain[u].phi);
                }
                oc.push_back(chain[u].base);
                if (u < n)
                    xs.push_back(args[u]);
            }
            HomElem<K> term = enl.eval(oc, xs);
            if (!term.is_zero())
                acc.coeffs += term.coeffs;
            return;
        }
        for (int c = 0; c <= caps[t] && static_cast<int>(n) + total + c <= K_bound; ++c) {
            ins[t] = c;
            walk(t + 1, total + c);
        }
        ins[t] = 0;
    };
    walk(0, 0);
    return acc;
}

template <class K>
HomElem<K> b1_tw(const Enlargement<K>& enl, const TwMorphism<K>& m)
{
    return tw_eval(enl, {m.source, m.target}, {m.value});
}

/// The shift functor T on enlarged morphisms: identical coefficients for
/// convention 2, negated for convention 1 (the block layout of the shifted
/// hom is literally the same).
template <class K>
HomElem<K> shift_T_value(const Enlargement<K>& enl, const HomElem<K>& value)
{
    HomElem<K> out = value;
    if (enl.convention() == ShiftConvention::c1)
        out.coeffs = -out.coeffs;
    return out;
}

/// T(X, Phi) = (T X, -T(Phi)).
template <class K>
TwistedComplex<K> shift_T(const Enlargement<K>& enl, const TwistedComplex<K>& t)
{
    TwistedComplex<K> out;
    out.base = t.base.shifted(1);
    HomElem<K> tphi = shift_T_value(enl, t.phi);
    out.phi = tphi;
    out.phi.coeffs = -out.phi.coeffs;
    return out;
}

template <class K>
TwMorphism<K> shift_T(const Enlargement<K>& enl, const TwMorphism<K>& m)
{
    return {shift_T(enl, m.source), shift_T(enl, m.target), shift_T_value(enl, m.value)};
}

/// C(phi) = ( T(X) + Y, [[-T(Phi_X), phi'], [0, Phi_Y]] ) for a closed
/// degree-zero phi.  phi' is the same coefficient table on the shifted
/// source blocks with the convention sign of T applied once.
template <class K>
TwistedComplex<K> mapping_cone(const Enlargement<K>& enl, const TwMorphism<K>& phi)
{
    detail::require_suspended(enl);
    if (phi.value.deg != -1)
        throw std::invalid_argument("mapping_cone: phi must have unsuspended degree 0");
    if (!b1_tw(enl, phi).is_zero())
        throw std::invalid_argument("mapping_cone: phi is not closed");

    const SumObject& X = phi.source.base;
    const SumObject& Y = phi.target.base;
    size_t lx = X.size();

    SumObject cone_base = X.shifted(1);
    cone_base.summands.insert(cone_base.summands.end(), Y.summands.begin(), Y.summands.end());

    const EnlargedLayout<K>& lay = enl.layout(cone_base, cone_base);
    HomElem<K> psi = HomElem<K>::zero(lay.space, 0);
    int tsign = enl.convention() == ShiftConvention::c1 ? -1 : 1;

    // T(X)-diagonal: -T(Phi_X); block base degrees are unchanged under T
    {
        const EnlargedLayout<K>& lx_lay = enl.layout(X, X);
        auto it = lx_lay.slices.find(0);
        if (it != lx_lay.slices.end())
            for (const BlockSlice& s : it->second) {
                const BlockSlice* d = lay.find(0, s.i, s.j);
                if (!d)
                    throw std::logic_error("mapping_cone: missing shifted block");
                psi.coeffs.segment(d->offset, d->len) =
                    phi.source.phi.coeffs.segment(s.offset, s.len) * K(-tsign);
            }
    }
    // off-diagonal: phi' with the convention sign applied once
    {
        const EnlargedLayout<K>& xy = enl.layout(X, Y);
        auto it = xy.slices.find(-1);
        if (it != xy.slices.end())
            for (const BlockSlice& s : it->second) {
                const BlockSlice* d = lay.find(0, s.i, static_cast<int>(lx) + s.j);
                if (!d)
                    throw std::logic_error("mapping_cone: missing off-diagonal block");
                psi.coeffs.segment(d->offset, d->len) =
                    phi.value.coeffs.segment(s.offset, s.len) * K(tsign);
            }
    }
    // Y-diagonal: Phi_Y unchanged
    {
        const EnlargedLayout<K>& ly = enl.layout(Y, Y);
        auto it = ly.slices.find(0);
        if (it != ly.slices.end())
            for (const BlockSlice& s : it->second) {
                const BlockSlice* d = lay.find(0, static_cast<int>(lx) + s.i,
                                               static_cast<int>(lx) + s.j);
                if (!d)
                    throw std::logic_error("mapping_cone: missing target block");
                psi.coeffs.segment(d->offset, d->len) =
                    phi.target.phi.coeffs.segment(s.offset, s.len);
            }
    }
    return make_twisted(enl, std::move(cone_base), std::move(psi));
}

namespace detail {

/// Blockwise identity-bearing morphism (suspended degree -1) between sum
/// objects, mapping summand `from` of the source onto summand `to` of the
/// target; convention 2 needs the per-summand sign (-1)^shift to be closed.
template <class K>
HomElem<K> block_identity(const Enlargement<K>& enl, const SumObject& from, const SumObject& to,
                          const std::vector<std::pair<int, int>>& pairs)
{
    const AInftyCategory<K>& base = enl.base();
    if (!base.has_units())
        throw std::invalid_argument("block identities need a strictly unital base category");
    const EnlargedLayout<K>& lay = enl.layout(from, to);
    HomElem<K> out = HomElem<K>::zero(lay.space, -1);
    for (auto [i, j] : pairs) {
        if (from.object_of(static_cast<size_t>(i)) != to.object_of(static_cast<size_t>(j)) ||
            from.shift_of(static_cast<size_t>(i)) != to.shift_of(static_cast<size_t>(j)))
            throw std::invalid_argument("block_identity: summands do not match");
        const BlockSlice* s = lay.find(-1, i, j);
        if (!s)
            throw std::logic_error("block_identity: unit block missing from the layout");
        const HomElem<K>& u = base.units().at(from.object_of(static_cast<size_t>(i)));
        int lambda = enl.convention() == ShiftConvention::c2
                         ? parity_sign(from.shift_of(static_cast<size_t>(i)))
                         : 1;
        out.coeffs.segment(s->offset, s->len) = u.coeffs * K(lambda);
    }
    return out;
}

}  // namespace detail

/// Canonical inclusion Y -> C(phi); closed of unsuspended degree 0.
template <class K>
TwMorphism<K> cone_inclusion(const Enlargement<K>& enl, const TwMorphism<K>& phi,
                             const TwistedComplex<K>& cone)
{
    size_t lx = phi.source.base.size();
    std::vector<std::pair<int, int>> pairs;
    for (size_t j = 0; j < phi.target.base.size(); ++j)
        pairs.push_back({static_cast<int>(j), static_cast<int>(lx + j)});
    TwMorphism<K> inc{phi.target, cone,
                      detail::block_identity(enl, phi.target.base, cone.base, pairs)};
    if (!b1_tw(enl, inc).is_zero())
        throw std::logic_error("cone_inclusion: the canonical inclusion is not closed");
    return inc;
}

/// Canonical projection C(phi) -> T(X, Phi_X); closed of unsuspended
/// degree 0.
template <class K>
TwMorphism<K> cone_projection(const Enlargement<K>& enl, const TwMorphism<K>& phi,
                              const TwistedComplex<K>& cone)
{
    TwistedComplex<K> tx = shift_T(enl, phi.source);
    std::vector<std::pair<int, int>> pairs;
    for (size_t i = 0; i < phi.source.base.size(); ++i)
        pairs.push_back({static_cast<int>(i), static_cast<int>(i)});
    TwMorphism<K> proj{cone, tx, detail::block_identity(enl, cone.base, tx.base, pairs)};
    if (!b1_tw(enl, proj).is_zero())
        throw std::logic_error("cone_projection: the canonical projection is not closed");
    return proj;
}

/// Materializes the Tw structure on chosen twisted complexes as an ordinary
/// suspended category (products up to max_arity), ready for the relation
/// checker and cohomology.
template <class K>
AInftyCategory<K> materialize_tw(const Enlargement<K>& enl,
                                 const std::vector<TwistedComplex<K>>& objects, int max_arity)
{
    detail::require_suspended(enl);
    std::vector<std::string> labels;
    for (size_t i = 0; i < objects.size(); ++i)
        labels.push_back("tw" + std::to_string(i) + ":" + objects[i].base.label(enl.base()));
    // over a DG base every product of arity >= 3 vanishes genuinely, so the
    // base bound stays honest; otherwise only the materialized arities are
    // certified
    int bound = is_dg(enl.base()) ? enl.base().arity_bound() : max_arity;
    AInftyCategory<K> R(labels, Presentation::suspended, bound);
    int n = static_cast<int>(objects.size());
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            R.set_hom(x, y, enl.hom(objects[static_cast<size_t>(x)].base,
                                    objects[static_cast<size_t>(y)].base));

    std::vector<ObjectChain> chains;
    for (int x = 0; x < n; ++x)
        chains.push_back({x});
    for (int arity = 1; arity <= max_arity; ++arity) {
        std::vector<ObjectChain> longer;
        for (const auto& c : chains)
            for (int z = 0; z < n; ++z) {
                ObjectChain cc = c;
                cc.push_back(z);
                longer.push_back(cc);
                MultiMap<K> table = R.zero_product(cc);
                std::vector<TwistedComplex<K>> tchain;
                for (int o : cc)
                    tchain.push_back(objects[static_cast<size_t>(o)]);
                // evaluate b^Tw on every basis chain
                std::vector<const GradedSpace*> spaces;
                for (size_t i = 0; i + 1 < cc.size(); ++i)
                    spaces.push_back(&R.hom(cc[i], cc[i + 1]));
                std::vector<BasisRef> refs(spaces.size());
                std::function<void(size_t)> scan = [&](size_t t) {
                    if (t == spaces.size()) {
                        std::vector<HomElem<K>> args;
                        for (size_t u = 0; u < refs.size(); ++u)
                            args.push_back(HomElem<K>::unit(*spaces[u], refs[u]));
                        HomElem<K> v = tw_eval(enl, tchain, args);
                        if (!v.is_zero())
                            table.add_entry(refs, v);
                        return;
                    }
                    const GradedSpace& sp = *spaces[t];
                    for (Degree d = sp.lo(); d <= sp.hi(); ++d)
                        for (int i = 0; i < sp.dim(d); ++i) {
                            refs[t] = {d, i};
                            scan(t + 1);
                        }
                };
                scan(0);
                if (!table.is_zero_map())
                    R.set_product(cc, std::move(table));
            }
        chains = std::move(longer);
    }

    // Tw inherits strict units from a strictly unital DG base
    if (enl.base().has_units() && is_dg(enl.base()))
        for (int x = 0; x < n; ++x) {
            const SumObject& X = objects[static_cast<size_t>(x)].base;
            bool have_all = true;
            for (size_t i = 0; i < X.size(); ++i)
                have_all = have_all && enl.base().units().count(X.object_of(i)) > 0;
            if (!have_all)
                continue;
            const EnlargedLayout<K>& lay = enl.layout(X, X);
            if (lay.space.dim(-1) == 0)
                continue;
            HomElem<K> u = HomElem<K>::zero(lay.space, -1);
            for (size_t i = 0; i < X.size(); ++i) {
                const BlockSlice* s = lay.find(-1, static_cast<int>(i), static_cast<int>(i));
                if (!s)
                    continue;
                int lambda = enl.convention() == ShiftConvention::c1
                                 ? parity_sign(X.shift_of(i))
                                 : 1;
                u.coeffs.segment(s->offset, s->len) =
                    enl.base().units().at(X.object_of(i)).coeffs * K(lambda);
            }
            R.set_unit(x, std::move(u));
        }
    return R;
}

struct TriangleReport {
    bool cone_mc = false;
    bool comp1_literally_zero = false;
    bool comp1_zero_class = false;  // X -> Y -> C(phi)
    bool comp2_literally_zero = false;
    bool comp2_zero_class = false;  // Y -> C(phi) -> T X
    bool ok() const { return cone_mc && comp1_zero_class && comp2_zero_class; }
};

namespace detail {

/// Is a closed suspended-degree--1 element a b1^Tw-boundary?  Solved
/// exactly over a basis of the degree--2 part.
template <class K>
bool is_boundary(const Enlargement<K>& enl, const TwistedComplex<K>& from,
                 const TwistedComplex<K>& to, const HomElem<K>& value)
{
    if (value.is_zero())
        return true;
    const EnlargedLayout<K>& lay = enl.layout(from.base, to.base);
    int below = lay.space.dim(-2);
    if (below == 0)
        return false;
    Mat<K> d(lay.space.dim(-1), below);
    for (int i = 0; i < below; ++i) {
        HomElem<K> unit = HomElem<K>::unit(lay.space, {-2, i});
        HomElem<K> img = tw_eval(enl, {from, to}, {unit});
        d.col(i) = img.coeffs;
    }
    return PreimageSolver<K>(std::move(d)).solve(value.coeffs).has_value();
}

}  // namespace detail

/// m2^Tw of two unsuspended-degree-0 morphisms, as an unsuspended-degree-0
/// value (the suspended evaluation is converted back, which for this degree
/// only flips the sign).
template <class K>
TwMorphism<K> compose_tw_degree0(const Enlargement<K>& enl, const TwMorphism<K>& f,
                                 const TwMorphism<K>& g)
{
    if (f.value.deg != -1 || g.value.deg != -1)
        throw std::invalid_argument("compose_tw_degree0: values must have unsuspended degree 0");
    HomElem<K> b2 = tw_eval(enl, {f.source, f.target, g.target}, {f.value, g.value});
    // m2(x, y) = (-1)^{|s x|} s^{-1} b2(s x, s y) with |s x| = -1
    b2.coeffs = -b2.coeffs;
    return {f.source, g.target, std::move(b2)};
}

/// The two zero-composite checks of the exact triangle through the cone of
/// phi, plus the cone's Maurer-Cartan verdict.
template <class K>
TriangleReport triangle_check(const Enlargement<K>& enl, const TwMorphism<K>& phi)
{
    TriangleReport out;
    TwistedComplex<K> cone = mapping_cone(enl, phi);
    out.cone_mc = check_mc(enl, cone).ok();

    TwMorphism<K> inc = cone_inclusion(enl, phi, cone);
    TwMorphism<K> proj = cone_projection(enl, phi, cone);

    TwMorphism<K> comp1 = compose_tw_degree0(enl, phi, inc);
    out.comp1_literally_zero = comp1.value.is_zero();
    out.comp1_zero_class = detail::is_boundary(enl, comp1.source, comp1.target, comp1.value);

    TwMorphism<K> comp2 = compose_tw_degree0(enl, inc, proj);
    out.comp2_literally_zero = comp2.value.is_zero();
    out.comp2_zero_class = detail::is_boundary(enl, comp2.source, comp2.target, comp2.value);
    return out;
}

}  // namespace ainfty
