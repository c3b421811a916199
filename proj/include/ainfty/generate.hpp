#pragma once

#include "ainfty/dg.hpp"
#include "ainfty/hpt.hpp"

#include <cstdint>

namespace ainfty {

/// Deterministic 64-bit generator (splitmix64).  Self-contained so corpus
/// bytes do not depend on any standard-library distribution.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
    int range(int lo, int hi)  // inclusive
    {
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

private:
    std::uint64_t state_;
};

/// Random bounded complex with exact d^2 = 0: each differential's rows are
/// drawn from the left kernel of the previous one.
template <class K>
ChainComplex<K> random_complex(SplitMix64& rng, const std::string& name, int max_total_dim,
                               Degree dlo, Degree dhi)
{
    int span = dhi - dlo + 1;
    int length = rng.range(1, std::min(3, span));
    Degree start = dlo + rng.range(0, span - length);
    std::vector<int> dims(static_cast<size_t>(length));
    int total = 0;
    for (int i = 0; i < length; ++i) {
        int d = rng.range(1, 2);
        if (total + d > max_total_dim)
            d = max_total_dim - total;
        dims[static_cast<size_t>(i)] = std::max(d, 0);
        total += dims[static_cast<size_t>(i)];
    }
    while (!dims.empty() && dims.back() == 0)
        dims.pop_back();
    if (dims.empty())
        dims.push_back(1);
    ChainComplex<K> X(name, start, dims);

    Mat<K> prev(X.dim(X.lo()), 0);  // previous differential (into degree i)
    for (Degree i = X.lo(); i < X.hi(); ++i) {
        int rows = X.dim(i + 1), cols = X.dim(i);
        if (rows == 0 || cols == 0) {
            prev = Mat<K>(X.dim(i + 1), 0);
            continue;
        }
        // columns of N span ker(prev^T): admissible row space for d^i
        Mat<K> basis;
        if (prev.cols() == 0)
            basis = Mat<K>::Identity(cols, cols);
        else
            basis = RowReduced<K>(Mat<K>(prev.transpose())).nullspace();
        Mat<K> d = Mat<K>::Constant(rows, cols, K(0));
        if (basis.cols() > 0) {
            Mat<K> r(rows, basis.cols());
            for (Eigen::Index p = 0; p < r.rows(); ++p)
                for (Eigen::Index q = 0; q < r.cols(); ++q)
                    r(p, q) = K(rng.range(-1, 1));
            d = r * basis.transpose();
        }
        X.set_differential(i, d);
        prev = X.differential(i);
    }
    X.validate();
    return X;
}

/// Conjugates an SDR by seeded chain automorphisms g = Id + d rho + rho d,
/// one per hom pair: iota -> g iota, pi -> pi g^-1, h -> g h g^-1.  Every
/// SDR identity is preserved, but the representatives stop being adapted to
/// the matrix-unit bases, which is what makes the transferred higher
/// products nonvanishing.  Singular draws are retried, then skipped.
template <class K>
SDRData<K> gauge_sdr(const SDRData<K>& s, SplitMix64& rng)
{
    SDRData<K> out = s;
    for (int x = 0; x < s.big.num_objects(); ++x)
        for (int y = 0; y < s.big.num_objects(); ++y) {
            auto key = std::make_pair(x, y);
            const GradedSpace& hom = s.big.hom(x, y);
            if (hom.total_dim() == 0 || !s.iota.count(key))
                continue;
            GradedMap<K> d = differential_of(s.big, x, y);
            for (int attempt = 0; attempt < 4; ++attempt) {
                GradedMap<K> rho(hom, hom, -1);
                for (Degree deg = hom.lo(); deg <= hom.hi(); ++deg) {
                    if (hom.dim(deg) == 0 || hom.dim(deg - 1) == 0)
                        continue;
                    Mat<K> r(hom.dim(deg - 1), hom.dim(deg));
                    for (Eigen::Index p = 0; p < r.rows(); ++p)
                        for (Eigen::Index q = 0; q < r.cols(); ++q)
                            r(p, q) = K(rng.range(-1, 1));
                    rho.set_block(deg, std::move(r));
                }
                GradedMap<K> g =
                    GradedMap<K>::identity(hom) + compose(d, rho) + compose(rho, d);
                GradedMap<K> ginv(hom, hom, 0);
                bool ok = true;
                for (Degree deg = hom.lo(); deg <= hom.hi() && ok; ++deg) {
                    if (hom.dim(deg) == 0)
                        continue;
                    try {
                        ginv.set_block(deg, inverse_of(Mat<K>(g.block(deg))));
                    }
                    catch (const std::invalid_argument&) {
                        ok = false;
                    }
                }
                if (!ok)
                    continue;
                out.iota[key] = compose(g, s.iota.at(key));
                out.pi[key] = compose(s.pi.at(key), ginv);
                out.h[key] = compose(g, compose(s.h.at(key), ginv));
                break;
            }
        }
    return out;
}

template <class K>
struct CorpusInstance {
    std::uint64_t seed = 0;
    std::vector<ChainComplex<K>> complexes;
    AInftyCategory<K> category;  // DG, unsuspended, strictly unital
    SDRData<K> hodge;            // the canonical (adapted) Hodge SDR
    SDRData<K> sdr;              // gauged Hodge SDR: same cohomology, skew representatives
    TransferResult<K> model;     // minimal model over the gauged SDR
    bool has_nonzero_m3 = false;
};

struct CorpusParams {
    int max_complexes = 4;
    int max_total_dim = 8;
    Degree degree_lo = -2;
    Degree degree_hi = 2;
    int arity_bound = 5;
    int transfer_arity = 5;
};

/// One full pipeline run: random complexes -> DG category -> Hodge SDR ->
/// minimal model.  Every structure in the result is valid by construction;
/// the relations are certified separately by the callers that need them.
template <class K>
CorpusInstance<K> make_instance(std::uint64_t seed, const CorpusParams& params = {})
{
    SplitMix64 rng(seed);
    CorpusInstance<K> inst;
    inst.seed = seed;
    int n = rng.range(1, params.max_complexes);
    int budget = params.max_total_dim;
    for (int i = 0; i < n; ++i) {
        int cap = std::max(1, budget - (n - 1 - i));
        auto X = random_complex<K>(rng, "X" + std::to_string(i), std::min(cap, 3),
                                   params.degree_lo, params.degree_hi);
        budget -= X.total_dim();
        inst.complexes.push_back(std::move(X));
        if (budget <= 0)
            break;
    }
    inst.category = build_dg_category(inst.complexes, params.arity_bound);
    inst.hodge = hodge_sdr(inst.category);
    inst.sdr = gauge_sdr(inst.hodge, rng);
    inst.model = transfer(inst.sdr, params.transfer_arity, false);
    for (const auto& [chain, table] : inst.model.small.products())
        if (table.arity() == 3 && !table.is_zero_map())
            inst.has_nonzero_m3 = true;
    return inst;
}

/// The seeded corpus: instance i uses sub-seed splitmix(seed, i).
template <class K>
std::vector<CorpusInstance<K>> make_corpus(std::uint64_t seed, int count,
                                           const CorpusParams& params = {})
{
    SplitMix64 seeds(seed);
    std::vector<CorpusInstance<K>> out;
    for (int i = 0; i < count; ++i)
        out.push_back(make_instance<K>(seeds.next(), params));
    return out;
}

}  // namespace ainfty
