#include "ainfty/shifts.hpp"

#include "doctest.h"
#include "test_helpers.hpp"
#include "ainfty/generate.hpp"

using namespace ainfty;
using testutil::standard_family;

namespace {

std::vector<SumObject> singles(const AInftyCategory<Rational>& C, const std::vector<int>& shifts)
{
    std::vector<SumObject> out;
    for (int i = 0; i < C.num_objects(); ++i)
        for (int r : shifts)
            out.push_back(SumObject::single(i, r));
    return out;
}

}  // namespace

TEST_CASE("enlargement signs: pinned cases")
{
    // arity 1, r1 = 1: both conventions, both presentations give -1
    CHECK(enlargement_sign(ShiftConvention::c1, Presentation::suspended, {1, 0}) == -1);
    CHECK(enlargement_sign(ShiftConvention::c2, Presentation::suspended, {1, 0}) == -1);
    CHECK(enlargement_sign(ShiftConvention::c1, Presentation::unsuspended, {1, 0}) == -1);
    CHECK(enlargement_sign(ShiftConvention::c2, Presentation::unsuspended, {1, 0}) == -1);
    // unsuspended arity 2 with shifts (0,1): the conventions genuinely differ
    CHECK(enlargement_sign(ShiftConvention::c1, Presentation::unsuspended, {0, 1, 0}) == -1);
    CHECK(enlargement_sign(ShiftConvention::c2, Presentation::unsuspended, {0, 1, 0}) == 1);
    // suspended single-object-shift rules: chain (Y, X, Z) with only X shifted
    CHECK(enlargement_sign(ShiftConvention::c1, Presentation::suspended, {0, 1, 0}) == 1);
    CHECK(enlargement_sign(ShiftConvention::c2, Presentation::suspended, {0, 1, 0}) == -1);
    // no occurrence of the shifted object: +1 for both
    CHECK(enlargement_sign(ShiftConvention::c1, Presentation::suspended, {0, 0, 0}) == 1);
    CHECK(enlargement_sign(ShiftConvention::c2, Presentation::suspended, {0, 0, 0}) == 1);
}

TEST_CASE("single shift: relations hold and degrees reindex")
{
    auto C = build_dg_category<Rational>(standard_family());
    for (auto a : {ShiftConvention::c1, ShiftConvention::c2}) {
        auto S = shift_single(C, 2, a);
        CHECK(S.num_objects() == C.num_objects());
        CHECK(S.object_label(2) == C.object_label(2) + "[1]");
        CHECK(check_relations(S, 5).ok());
        // hom degree reindexing: into the shifted object lowers, out raises
        for (int y = 0; y < C.num_objects(); ++y) {
            if (y == 2)
                continue;
            const GradedSpace& in = C.hom(y, 2);
            const GradedSpace& out = C.hom(2, y);
            for (Degree d = in.lo(); d <= in.hi(); ++d)
                CHECK(S.hom(y, 2).dim(d - 1) == in.dim(d));
            for (Degree d = out.lo(); d <= out.hi(); ++d)
                CHECK(S.hom(2, y).dim(d + 1) == out.dim(d));
        }
    }
}

TEST_CASE("enlargement with all shifts zero restricts to the category itself")
{
    auto C = build_dg_category<Rational>(standard_family());
    auto E = enlarge(C, ShiftConvention::c1, singles(C, {0}));
    CHECK(E.objects() == C.objects());
    for (const auto& [chain, table] : C.products()) {
        const MultiMap<Rational>* e = E.product(chain);
        REQUIRE(e != nullptr);
        // same entries up to the relabelled basis
        CHECK(e->entries().size() == table.entries().size());
        for (const auto& [refs, value] : table.entries())
            CHECK(e->entry(refs).coeffs == value.coeffs);
    }
    CHECK(E.units().size() == C.units().size());
    for (const auto& [o, u] : C.units())
        CHECK(E.units().at(o).coeffs == u.coeffs);
}

TEST_CASE("both enlargements satisfy the relations; their signs differ somewhere")
{
    auto C = build_dg_category<Rational>(standard_family());
    auto objs = singles(C, {0, 1});
    auto E1 = enlarge(C, ShiftConvention::c1, objs);
    auto E2 = enlarge(C, ShiftConvention::c2, objs);
    CHECK(check_relations(E1, 5).ok());
    CHECK(check_relations(E2, 5).ok());

    bool differ = false;
    for (const auto& [chain, table] : E1.products()) {
        const MultiMap<Rational>* t2 = E2.product(chain);
        if (!t2) {
            differ = differ || !table.is_zero_map();
            continue;
        }
        for (const auto& [refs, value] : table.entries())
            if (!(t2->entry(refs).coeffs == value.coeffs))
                differ = true;
    }
    CHECK(differ);
}

TEST_CASE("suspension commutes with the enlargement")
{
    auto C = build_dg_category<Rational>(standard_family());
    auto objs = singles(C, {-1, 0, 2});
    for (auto a : {ShiftConvention::c1, ShiftConvention::c2}) {
        auto path_a = convert_presentation(enlarge(C, a, objs));
        auto path_b = enlarge(convert_presentation(C), a, objs);
        CHECK(path_a.homs() == path_b.homs());
        CHECK(path_a.products() == path_b.products());
        CHECK(path_a.units() == path_b.units());
    }
}

TEST_CASE("lazy evaluation agrees with the materialized tables")
{
    auto C = suspended_view(build_dg_category<Rational>(standard_family()));
    Enlargement<Rational> E(C, ShiftConvention::c1);
    SumObject X({{0, 0}, {1, 1}});
    SumObject Y = SumObject::single(3, -1);
    SumObject Z({{2, 2}, {0, 0}});
    auto M = enlarge(C, ShiftConvention::c1, {X, Y, Z});

    const GradedSpace& hxy = M.hom(0, 1);
    const GradedSpace& hyz = M.hom(1, 2);
    CHECK(hxy == E.hom(X, Y));
    CHECK(hyz == E.hom(Y, Z));
    const MultiMap<Rational>* m2 = M.product({0, 1, 2});
    for (Degree p = hxy.lo(); p <= hxy.hi(); ++p)
        for (int i = 0; i < hxy.dim(p); ++i)
            for (Degree q = hyz.lo(); q <= hyz.hi(); ++q)
                for (int j = 0; j < hyz.dim(q); ++j) {
                    HomElem<Rational> a = HomElem<Rational>::unit(hxy, {p, i});
                    HomElem<Rational> b = HomElem<Rational>::unit(hyz, {q, j});
                    HomElem<Rational> via_eval = E.eval({X, Y, Z}, {a, b});
                    HomElem<Rational> via_table =
                        m2 ? m2->eval({a, b}) : HomElem<Rational>::zero(M.hom(0, 2), p + q + 1);
                    CHECK(via_eval == via_table);
                }
}

TEST_CASE("induced functors pass the functor check in both enlargements")
{
    auto C = build_dg_category<Rational>(standard_family());
    auto model = minimal_model(C, 4);
    REQUIRE(check_functor(model.functor, 4).ok());
    auto objs = singles(model.functor.source(), {0, 1});
    for (auto a : {ShiftConvention::c1, ShiftConvention::c2}) {
        auto G = induce_functor(model.functor, a, objs);
        CHECK(check_functor(G, 4).ok());
    }

    SUBCASE("identity functor induces the identity")
    {
        auto idf = AInftyFunctor<Rational>::identity(C);
        auto G = induce_functor(idf, ShiftConvention::c2, objs);
        auto expected = AInftyFunctor<Rational>::identity(enlarge(suspended_view(C),
                                                                  ShiftConvention::c2, objs));
        CHECK(G.object_map() == expected.object_map());
        CHECK(G.components() == expected.components());
        CHECK(G.is_linear());
    }
}

TEST_CASE("induced SDR")
{
    auto C = build_dg_category<Rational>(standard_family());
    auto s = hodge_sdr(C);
    REQUIRE(check_sdr(s).ok());

    SUBCASE("zero shifts give back the same SDR blockwise")
    {
        auto objs = singles(C, {0});
        auto t = induce_sdr(s, ShiftConvention::c1, objs);
        CHECK(check_sdr(t).ok());
        for (int x = 0; x < C.num_objects(); ++x)
            for (int y = 0; y < C.num_objects(); ++y) {
                auto key = std::make_pair(x, y);
                CHECK(t.iota.at(key) == s.iota.at(key));
                CHECK(t.h.at(key) == s.h.at(key));
            }
    }

    SUBCASE("single shift flips d and h together so the homotopy identity survives")
    {
        std::vector<SumObject> objs;
        for (int i = 0; i < C.num_objects(); ++i)
            objs.push_back(SumObject::single(i, i == 1 ? 1 : 0));
        for (auto a : {ShiftConvention::c1, ShiftConvention::c2}) {
            auto t = induce_sdr(s, a, objs);
            CHECK(check_sdr(t).ok());
            // h block out of the shifted object is the negated base block;
            // a source shift r raises the enlarged degree by r
            auto key = std::make_pair(1, 0);
            GradedMap<Rational> expected = s.h.at(key) * Rational(-1);
            for (const auto& [d, block] : expected.blocks()) {
                Mat<Rational> got = t.h.at(key).block(d + 1);
                REQUIRE(got.rows() == block.rows());
                REQUIRE(got.cols() == block.cols());
                CHECK(is_zero(Mat<Rational>(got - block)));
            }
        }
    }

    SUBCASE("trivial SDR induces the trivial SDR")
    {
        auto objs = singles(C, {0, 1});
        auto t = induce_sdr(SDRData<Rational>::trivial(C), ShiftConvention::c2, objs);
        CHECK(check_sdr(t).ok());
        for (auto& [key, hmap] : t.h)
            CHECK(hmap.is_zero_map());
        for (auto& [key, io] : t.iota)
            CHECK(io == GradedMap<Rational>::identity(t.big.hom(key.first, key.second)));
    }
}

TEST_CASE("the HPT square commutes for both conventions")
{
    auto C = build_dg_category<Rational>(standard_family());
    auto s = hodge_sdr(C);
    std::vector<SumObject> objs;
    for (int i = 0; i < C.num_objects(); ++i) {
        objs.push_back(SumObject::single(i, 0));
        objs.push_back(SumObject::single(i, 1));
    }

    SUBCASE("trivial SDR: both paths are the bare enlargement")
    {
        auto t = SDRData<Rational>::trivial(C);
        for (auto a : {ShiftConvention::c1, ShiftConvention::c2})
            CHECK(hpt_square_check(t, a, 4, objs).equal);
    }

    SUBCASE("Hodge SDR, both conventions")
    {
        for (auto a : {ShiftConvention::c1, ShiftConvention::c2}) {
            auto r = hpt_square_check(s, a, 4, objs);
            INFO(r.diff);
            CHECK(r.equal);
        }
    }

    SUBCASE("mismatched conventions on the two paths must disagree")
    {
        auto r = hpt_square_check(s, ShiftConvention::c1, 4, objs, ShiftConvention::c2);
        CHECK_FALSE(r.equal);
        CHECK_FALSE(r.diff.empty());
    }
}

TEST_CASE("non-adapted SDRs: the square commutes for convention 1; convention 2 "
          "misses on the functor side")
{
    // The canonical Hodge data on these DG categories is adapted (all higher
    // transferred components vanish), which makes the convention-2 square
    // vacuously fine above arity 1.  A gauged SDR has nonzero f_2; there the
    // convention-1 square still commutes on the nose, while the sign-free
    // induced functor picks up interior-shift signs under convention 2, so
    // the functor comparison must detect a mismatch.  The structure halves
    // agree for both conventions either way.
    std::optional<CorpusInstance<Rational>> inst;
    for (std::uint64_t seed = 1; seed <= 40 && !inst; ++seed) {
        auto cand = make_instance<Rational>(seed);
        for (const auto& [chain, t] : cand.model.functor.components())
            if (t.arity() == 2 && !t.is_zero_map())
                inst = std::move(cand);
    }
    REQUIRE(inst.has_value());
    REQUIRE(check_sdr(inst->sdr).ok());
    std::vector<SumObject> objs;
    for (int i = 0; i < inst->category.num_objects(); ++i) {
        objs.push_back(SumObject::single(i, 0));
        objs.push_back(SumObject::single(i, 1));
    }
    auto r1 = hpt_square_check(inst->sdr, ShiftConvention::c1, 4, objs);
    INFO(r1.diff);
    CHECK(r1.equal);
    auto r2 = hpt_square_check(inst->sdr, ShiftConvention::c2, 4, objs);
    CHECK_FALSE(r2.equal);
    CHECK(r2.diff.find("functor") != std::string::npos);

    // the structures agree even for convention 2: only the functors differ
    auto base = transfer(inst->sdr, 4, false);
    auto path1 = enlarge(base.small, ShiftConvention::c2, objs);
    auto induced = induce_sdr(inst->sdr, ShiftConvention::c2, objs);
    auto path2 = transfer(induced, 4, false);
    std::string diff;
    CHECK(path1.homs() == path2.small.homs());
    CHECK(detail::compare_products(path1, path2.small, diff));

    // same phenomenon at the level of the induced functor relation
    auto g1 = induce_functor(base.functor, ShiftConvention::c1, objs);
    CHECK(check_functor(g1, 4).ok());
    auto g2 = induce_functor(base.functor, ShiftConvention::c2, objs);
    CHECK_FALSE(check_functor(g2, 4).ok());
}
