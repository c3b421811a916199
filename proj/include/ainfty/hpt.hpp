#pragma once

#include "ainfty/functor.hpp"

namespace ainfty {

/// Inverse of a square invertible matrix (throws when singular).
template <class K>
Mat<K> inverse_of(const Mat<K>& m)
{
    if (m.rows() != m.cols())
        throw std::invalid_argument("inverse_of: matrix is not square");
    Eigen::Index n = m.rows();
    Mat<K> aug(n, 2 * n);
    aug.leftCols(n) = m;
    aug.rightCols(n) = Mat<K>::Identity(n, n);
    RowReduced<K> red(std::move(aug));
    // invertible exactly when all pivots land in the left block
    const auto& piv = red.pivot_columns();
    for (Eigen::Index i = 0; i < n; ++i)
        if (static_cast<size_t>(i) >= piv.size() || piv[static_cast<size_t>(i)] != i)
            throw std::invalid_argument("inverse_of: matrix is singular");
    return red.rref().rightCols(n);
}

template <class K>
MultiMap<K> multimap_of_graded(const GradedMap<K>& m)
{
    MultiMap<K> t({m.source()}, m.target(), m.degree());
    for (const auto& [d, block] : m.blocks())
        for (Eigen::Index i = 0; i < block.cols(); ++i) {
            HomElem<K> v{d + m.degree(), block.col(i)};
            t.add_entry({{d, static_cast<int>(i)}}, v);
        }
    return t;
}

/// The arity-1 product of a pair as a graded map (zero map when absent).
template <class K>
GradedMap<K> differential_of(const AInftyCategory<K>& C, int x, int y)
{
    const GradedSpace& hom = C.hom(x, y);
    GradedMap<K> d(hom, hom, C.product_degree(1));
    if (const MultiMap<K>* m1 = C.product({x, y}))
        return graded_map_of(*m1);
    return d;
}

/// Strong deformation retract data per hom pair: inclusion iota, projection
/// pi (both degree 0) and contracting homotopy h (degree -1), all on the
/// unsuspended complexes, with d h + h d = Id - iota pi and pi iota = Id.
template <class K>
struct SDRData {
    AInftyCategory<K> big;  // kept in unsuspended presentation
    std::map<std::pair<int, int>, GradedSpace> small_homs;
    std::map<std::pair<int, int>, GradedMap<K>> iota, pi, h;

    static SDRData make(const AInftyCategory<K>& category)
    {
        SDRData s;
        s.big = category.presentation() == Presentation::unsuspended ? category
                                                                     : convert_presentation(category);
        return s;
    }

    GradedMap<K> small_differential(int x, int y) const
    {
        auto key = std::make_pair(x, y);
        GradedMap<K> d = differential_of(big, x, y);
        return compose(pi.at(key), compose(d, iota.at(key)));
    }

    /// The identity SDR: small = big, iota = pi = Id, h = 0.
    static SDRData trivial(const AInftyCategory<K>& category)
    {
        SDRData s = make(category);
        for (int x = 0; x < s.big.num_objects(); ++x)
            for (int y = 0; y < s.big.num_objects(); ++y) {
                const GradedSpace& hom = s.big.hom(x, y);
                s.small_homs[{x, y}] = hom;
                s.iota[{x, y}] = GradedMap<K>::identity(hom);
                s.pi[{x, y}] = GradedMap<K>::identity(hom);
                s.h[{x, y}] = GradedMap<K>(hom, hom, -1);
            }
        return s;
    }
};

/// Exact verification of all SDR identities, pair by pair.
template <class K>
RelationReport check_sdr(const SDRData<K>& s)
{
    RelationReport report;
    report.checked_arity = 1;
    auto fail = [&](int x, int y, const std::string& what) {
        RelationViolation v;
        v.context = what;
        v.object_chain = {s.big.object_label(x), s.big.object_label(y)};
        report.violations.push_back(std::move(v));
    };

    for (int x = 0; x < s.big.num_objects(); ++x)
        for (int y = 0; y < s.big.num_objects(); ++y) {
            auto key = std::make_pair(x, y);
            auto is_present = s.small_homs.count(key) && s.iota.count(key) && s.pi.count(key) &&
                              s.h.count(key);
            const GradedSpace& hom = s.big.hom(x, y);
            if (!is_present) {
                if (hom.total_dim() != 0)
                    fail(x, y, "missing SDR maps for a nonzero hom");
                continue;
            }
            const GradedSpace& small = s.small_homs.at(key);
            const GradedMap<K>& io = s.iota.at(key);
            const GradedMap<K>& pr = s.pi.at(key);
            const GradedMap<K>& ho = s.h.at(key);
            if (io.degree() != 0 || pr.degree() != 0 || ho.degree() != -1) {
                fail(x, y, "map degrees must be (0, 0, -1)");
                continue;
            }
            if (!(io.source() == small) || !(io.target() == hom) || !(pr.source() == hom) ||
                !(pr.target() == small) || !(ho.source() == hom) || !(ho.target() == hom)) {
                fail(x, y, "map endpoints do not match the hom spaces");
                continue;
            }
            GradedMap<K> d = differential_of(s.big, x, y);
            GradedMap<K> dB = compose(pr, compose(d, io));
            if (!(compose(pr, io) == GradedMap<K>::identity(small)))
                fail(x, y, "pi iota != Id");
            if (!(compose(d, io) == compose(io, dB)))
                fail(x, y, "iota is not a chain map");
            if (!(compose(dB, pr) == compose(pr, d)))
                fail(x, y, "pi is not a chain map");
            GradedMap<K> lhs = compose(d, ho) + compose(ho, d);
            GradedMap<K> P = compose(io, pr);
            GradedMap<K> rhs = GradedMap<K>::identity(hom) - P;
            if (!(lhs == rhs))
                fail(x, y, "d h + h d != Id - iota pi");
            if (!(compose(P, P) == P))
                fail(x, y, "iota pi is not idempotent");
            if (!(compose(P, d) == compose(d, P)))
                fail(x, y, "iota pi does not commute with d");
        }
    return report;
}

/// Reports whether the optional side conditions hold; they are not required
/// by any transfer formula here, but the Hodge construction satisfies them.
template <class K>
struct SideConditions {
    bool h_squared_zero = true;
    bool h_iota_zero = true;
    bool pi_h_zero = true;
};

template <class K>
SideConditions<K> side_conditions(const SDRData<K>& s)
{
    SideConditions<K> r;
    for (const auto& [key, ho] : s.h) {
        if (!compose(ho, ho).is_zero_map())
            r.h_squared_zero = false;
        if (!compose(ho, s.iota.at(key)).is_zero_map())
            r.h_iota_zero = false;
        if (!compose(s.pi.at(key), ho).is_zero_map())
            r.pi_h_zero = false;
    }
    return r;
}

/// Hodge decomposition SDR onto cohomology: per degree the hom splits as
/// image + harmonic + coimage, h inverts d from the image back to the chosen
/// coimage complement and vanishes elsewhere.  Deterministic for a fixed
/// basis order; the small differential is zero.
template <class K>
SDRData<K> hodge_sdr(const AInftyCategory<K>& category)
{
    SDRData<K> s = SDRData<K>::make(category);
    const AInftyCategory<K>& C = s.big;
    for (int x = 0; x < C.num_objects(); ++x)
        for (int y = 0; y < C.num_objects(); ++y) {
            const GradedSpace& hom = C.hom(x, y);
            auto key = std::make_pair(x, y);
            if (hom.total_dim() == 0) {
                s.small_homs[key] = GradedSpace();
                s.iota[key] = GradedMap<K>(GradedSpace(), hom, 0);
                s.pi[key] = GradedMap<K>(hom, GradedSpace(), 0);
                s.h[key] = GradedMap<K>(hom, hom, -1);
                continue;
            }
            GradedMap<K> d = differential_of(C, x, y);
            if (!compose(d, d).is_zero_map())
                throw std::invalid_argument("hodge_sdr: m1 does not square to zero");

            // chosen coimage complement per degree: standard basis columns
            // completing ker(d); its d-image is the canonical image basis
            std::map<Degree, Mat<K>> coim;
            for (Degree r = hom.lo(); r <= hom.hi(); ++r) {
                int n = hom.dim(r);
                if (n == 0)
                    continue;
                Mat<K> z = RowReduced<K>(d.block(r)).nullspace();
                auto cols = extending_columns(z, Mat<K>(Mat<K>::Identity(n, n)));
                Mat<K> c(n, static_cast<Eigen::Index>(cols.size()));
                for (size_t i = 0; i < cols.size(); ++i)
                    c.col(static_cast<Eigen::Index>(i)) =
                        Vec<K>(Mat<K>::Identity(n, n).col(cols[i]));
                coim[r] = std::move(c);
            }

            std::vector<std::vector<std::string>> small_labels(
                static_cast<size_t>(hom.hi() - hom.lo() + 1));
            std::map<Degree, Mat<K>> harmonics;
            std::map<Degree, Mat<K>> inv;       // [image | harmonic | coimage]^-1 per degree
            std::map<Degree, Eigen::Index> isz, bsz;
            for (Degree r = hom.lo(); r <= hom.hi(); ++r) {
                int n = hom.dim(r);
                if (n == 0)
                    continue;
                Mat<K> image(n, 0);
                if (coim.count(r - 1) && coim[r - 1].cols() > 0)
                    image = d.block(r - 1) * coim[r - 1];
                Mat<K> z = RowReduced<K>(d.block(r)).nullspace();
                auto keep = extending_columns(image, z);
                Mat<K> harm(n, static_cast<Eigen::Index>(keep.size()));
                for (size_t i = 0; i < keep.size(); ++i)
                    harm.col(static_cast<Eigen::Index>(i)) = z.col(keep[i]);
                Mat<K> co = coim.count(r) ? coim[r] : Mat<K>(n, 0);
                Mat<K> basis(n, image.cols() + harm.cols() + co.cols());
                basis.leftCols(image.cols()) = image;
                basis.middleCols(image.cols(), harm.cols()) = harm;
                basis.rightCols(co.cols()) = co;
                inv[r] = inverse_of(basis);
                isz[r] = image.cols();
                bsz[r] = harm.cols();
                harmonics[r] = std::move(harm);
                for (Eigen::Index i = 0; i < bsz[r]; ++i)
                    small_labels[static_cast<size_t>(r - hom.lo())].push_back(
                        "h" + std::to_string(r) + "_" + std::to_string(i));
            }

            GradedSpace small(hom.lo(), std::move(small_labels));
            GradedMap<K> io(small, hom, 0), pr(hom, small, 0), ho(hom, hom, -1);
            for (Degree r = hom.lo(); r <= hom.hi(); ++r) {
                if (hom.dim(r) == 0)
                    continue;
                if (small.dim(r) > 0)
                    io.set_block(r, harmonics[r]);
                if (small.dim(r) > 0)
                    pr.set_block(r, Mat<K>(inv[r].middleRows(isz[r], bsz[r])));
                if (isz[r] > 0 && hom.dim(r - 1) > 0)
                    ho.set_block(r, Mat<K>(coim[r - 1] * inv[r].topRows(isz[r])));
            }
            s.small_homs[key] = std::move(small);
            s.iota[key] = std::move(io);
            s.pi[key] = std::move(pr);
            s.h[key] = std::move(ho);
        }
    return s;
}

/// Result of the homotopy transfer: the induced structure on the small side
/// and the quasi-isomorphism functor into the big side.
template <class K>
struct TransferResult {
    AInftyCategory<K> small;   // suspended presentation
    AInftyFunctor<K> functor;  // small -> big
};

/// Homotopy transfer across an SDR, to products of arity <= arity_out:
/// f_1 = iota, and inductively
///   f_{n+1} = -h  sum_{j>=2} b_j(f_{k_1} x .. x f_{k_j}),
///   b^small_{n+1} = pi sum_{j>=2} b_j(f_{k_1} x .. x f_{k_j}),
/// all in the suspended presentation where no extra signs appear.  The
/// shared inner sums are memoized per object chain.
template <class K>
TransferResult<K> transfer(const SDRData<K>& s, int arity_out, bool verify_input = true)
{
    if (arity_out < 1)
        throw std::invalid_argument("transfer: arity_out must be positive");
    if (arity_out > 2 * s.big.arity_bound() - 1)
        throw std::invalid_argument("transfer: arity_out exceeds the sound range 2K-1 of the source");
    if (verify_input) {
        RelationReport r = check_sdr(s);
        if (!r.ok())
            throw std::invalid_argument("transfer: SDR data is invalid: " + r.summary());
    }

    AInftyCategory<K> big = suspended_view(s.big);
    int N = big.num_objects();

    std::map<std::pair<int, int>, GradedSpace> small_s;
    std::map<std::pair<int, int>, GradedMap<K>> iota_s, pi_s, h_s;
    for (const auto& [key, space] : s.small_homs) {
        small_s[key] = space.shifted(-1);
        iota_s[key] = s.iota.at(key).suspended();
        pi_s[key] = s.pi.at(key).suspended();
        h_s[key] = s.h.at(key).suspended();
    }

    AInftyCategory<K> D(big.objects(), Presentation::suspended, arity_out);
    for (const auto& [key, space] : small_s)
        D.set_hom(key.first, key.second, space);

    // arity-1 products: the suspended small differential
    for (int x = 0; x < N; ++x)
        for (int y = 0; y < N; ++y) {
            auto key = std::make_pair(x, y);
            if (!small_s.count(key) || small_s.at(key).total_dim() == 0)
                continue;
            GradedMap<K> dB = s.small_differential(x, y).suspended();
            if (dB.is_zero_map())
                continue;
            D.set_product({x, y}, multimap_of_graded(dB));
        }

    std::map<ObjectChain, MultiMap<K>> f_memo;
    std::map<ObjectChain, MultiMap<K>> pre_memo;

    auto small_chain_sources = [&](const ObjectChain& chain) {
        std::vector<GradedSpace> sources;
        for (size_t i = 0; i + 1 < chain.size(); ++i) {
            auto key = std::make_pair(chain[i], chain[i + 1]);
            sources.push_back(small_s.count(key) ? small_s.at(key) : GradedSpace());
        }
        return sources;
    };

    std::function<const MultiMap<K>&(const ObjectChain&)> f_of;
    std::function<const MultiMap<K>&(const ObjectChain&)> pre_of = [&](const ObjectChain& chain)
        -> const MultiMap<K>& {
        auto it = pre_memo.find(chain);
        if (it != pre_memo.end())
            return it->second;
        int n = static_cast<int>(chain.size()) - 1;
        MultiMap<K> acc(small_chain_sources(chain), big.hom(chain.front(), chain.back()), 1);
        // compositions of n into j >= 2 parts
        std::vector<int> cut;  // cumulative part sizes
        std::function<void(int)> walk = [&](int at) {
            if (at == n) {
                if (cut.size() < 2)
                    return;
                ObjectChain junction;
                junction.push_back(chain.front());
                int pos = 0;
                for (int c : cut) {
                    pos = c;
                    junction.push_back(chain[static_cast<size_t>(pos)]);
                }
                const MultiMap<K>* b = big.product(junction);
                if (!b)
                    return;
                std::vector<const MultiMap<K>*> slots;
                int prev = 0;
                for (int c : cut) {
                    ObjectChain part(chain.begin() + prev, chain.begin() + c + 1);
                    slots.push_back(&f_of(part));
                    prev = c;
                }
                accumulate_substituted(acc, *b, slots);
                return;
            }
            for (int next = at + 1; next <= n; ++next) {
                cut.push_back(next);
                walk(next);
                cut.pop_back();
            }
        };
        walk(0);
        return pre_memo.emplace(chain, std::move(acc)).first->second;
    };
    f_of = [&](const ObjectChain& chain) -> const MultiMap<K>& {
        auto it = f_memo.find(chain);
        if (it != f_memo.end())
            return it->second;
        if (chain.size() == 2) {
            auto key = std::make_pair(chain[0], chain[1]);
            MultiMap<K> f1 = iota_s.count(key)
                                 ? multimap_of_graded(iota_s.at(key))
                                 : MultiMap<K>({GradedSpace()}, big.hom(chain[0], chain[1]), 0);
            return f_memo.emplace(chain, std::move(f1)).first->second;
        }
        auto key = std::make_pair(chain.front(), chain.back());
        const MultiMap<K>& pre = pre_of(chain);
        if (pre.is_zero_map() || !h_s.count(key)) {
            MultiMap<K> f(pre.sources(), pre.target(), 0);
            return f_memo.emplace(chain, std::move(f)).first->second;
        }
        MultiMap<K> f = pre.postcomposed(h_s.at(key) * K(-1));
        return f_memo.emplace(chain, std::move(f)).first->second;
    };

    // enumerate chains by arity; memoization makes revisits cheap
    std::vector<ObjectChain> current;
    for (int x = 0; x < N; ++x)
        for (int y = 0; y < N; ++y)
            current.push_back({x, y});
    for (int arity = 2; arity <= arity_out; ++arity) {
        std::vector<ObjectChain> next;
        for (const auto& chain : current)
            for (int z = 0; z < N; ++z) {
                ObjectChain longer = chain;
                longer.push_back(z);
                next.push_back(longer);
                auto key = std::make_pair(longer.front(), longer.back());
                if (!pi_s.count(key))
                    continue;
                MultiMap<K> bD = pre_of(longer).postcomposed(pi_s.at(key));
                if (!bD.is_zero_map())
                    D.set_product(longer, std::move(bD));
                f_of(longer);  // fill the functor memo as well
            }
        current = std::move(next);
    }

    std::vector<int> ids(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i)
        ids[static_cast<size_t>(i)] = i;
    AInftyFunctor<K> F(D, big, ids);
    F.set_arity_bound(arity_out);
    for (const auto& [chain, table] : f_memo)
        if (!table.is_zero_map())
            F.set_component(chain, table);

    return {std::move(D), std::move(F)};
}

/// Kadeishvili minimal model: transfer over the Hodge SDR.  The result has
/// identically zero arity-1 products.
template <class K>
TransferResult<K> minimal_model(const AInftyCategory<K>& C, int arity_out)
{
    TransferResult<K> r = transfer(hodge_sdr(C), arity_out, false);
    for (const auto& [chain, table] : r.small.products())
        if (table.arity() == 1 && !table.is_zero_map())
            throw std::logic_error("minimal_model: transferred differential is nonzero");
    return r;
}

}  // namespace ainfty
