#include "ainfty/linalg.hpp"
#include "ainfty/multilinear.hpp"
#include "ainfty/rational.hpp"
#include "ainfty/signs.hpp"

#include "doctest.h"

#include <random>

using namespace ainfty;

/* ---- independent oracle: plain row reduction, re-implemented here ---- */

static int oracle_rank(std::vector<std::vector<Rational>> m)
{
    if (m.empty())
        return 0;
    size_t rows = m.size(), cols = m[0].size();
    int rank = 0;
    for (size_t c = 0; c < cols; ++c) {
        size_t piv = rows;
        for (size_t r = static_cast<size_t>(rank); r < rows; ++r)
            if (!m[r][c].is_zero()) {
                piv = r;
                break;
            }
        if (piv == rows)
            continue;
        std::swap(m[static_cast<size_t>(rank)], m[piv]);
        for (size_t r = 0; r < rows; ++r) {
            if (r == static_cast<size_t>(rank) || m[r][c].is_zero())
                continue;
            Rational f = m[r][c] / m[static_cast<size_t>(rank)][c];
            for (size_t cc = 0; cc < cols; ++cc)
                m[r][cc] -= f * m[static_cast<size_t>(rank)][cc];
        }
        ++rank;
    }
    return rank;
}

TEST_CASE("rational arithmetic is exact and normalized")
{
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(3, -6) == Rational(-1, 2));
    CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
    CHECK((Rational(2, 3) * Rational(3, 4)) == Rational(1, 2));
    CHECK((Rational(1, 2) / Rational(1, 4)) == Rational(2));
    CHECK(Rational(0, 17).den() == 1);
    CHECK(Rational(7).str() == "7");
    CHECK(Rational(-3, 4).str() == "-3/4");
    CHECK(Rational::parse("-3/4") == Rational(-3, 4));
    CHECK(Rational::parse("12") == Rational(12));
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
    CHECK_THROWS_AS(Rational(INT64_MAX) + Rational(INT64_MAX), std::overflow_error);
    CHECK_THROWS_AS(Rational(INT64_MAX) * Rational(3), std::overflow_error);
}

TEST_CASE("prime field scalar")
{
    Fp::set_modulus(101);
    CHECK(Fp(100) + Fp(2) == Fp(1));
    CHECK(Fp(-1) == Fp(100));
    CHECK(Fp(13) * Fp(13).inverse() == Fp(1));
    CHECK(field_traits<Fp>::from_fraction(1, 2) * Fp(2) == Fp(1));
    CHECK_THROWS_AS(Fp::set_modulus(100), std::invalid_argument);
    Fp::set_modulus(101);
}

TEST_CASE("sign formulas match the pinned values")
{
    // unsuspended star = (j+1)(l+1) + l(|a_1|+..+|a_j|)
    CHECK(sign_unsuspended(0, 1, {}) == 1);   // m1 m1 = 0 enters with plus
    CHECK(sign_unsuspended(0, 2, {}) == -1);  // star = 3
    CHECK(sign_unsuspended(1, 1, {5}) == -1); // star = 4 + 5
    // suspended star = |a_1|+..+|a_j|
    CHECK(sign_suspended({}) == 1);
    CHECK(sign_suspended({1}) == -1);
    CHECK(sign_suspended({1, 1}) == 1);
    // suspension star = (k-1)|s a_1| + .. + |s a_{k-1}|
    CHECK(suspension_sign(1, {-7}) == 1);
    CHECK(suspension_sign(1, {3}) == 1);
    CHECK(suspension_sign(2, {1, 4}) == -1);
    CHECK(suspension_sign(3, {1, 1, -2}) == -1);
}

/* The two relation sign conventions agree through the suspension dictionary:
 * for every term (k,l,j) of the arity-n relation, the product of the four
 * signs (unsuspended term sign, suspended term sign, and the two suspension
 * signs converting the nested products) depends only on n and the degrees,
 * never on (k,l,j).  Exhaustive over n <= 6, degrees in {-2,..,3}. */
TEST_CASE("sign engine coherence, exhaustive")
{
    for (int n = 1; n <= 6; ++n) {
        std::vector<Degree> degs(static_cast<size_t>(n), -2);
        while (true) {
            int reference = 0;
            bool have_ref = false;
            for (int l = 1; l <= n; ++l) {
                int k = n + 1 - l;
                for (int j = 0; j + 1 <= k; ++j) {
                    std::vector<Degree> prefix_unsusp(degs.begin(), degs.begin() + j);
                    std::vector<Degree> prefix_susp;
                    for (int i = 0; i < j; ++i)
                        prefix_susp.push_back(degs[static_cast<size_t>(i)] - 1);
                    // inner b_l inputs, suspended
                    std::vector<Degree> inner_susp;
                    Degree inner_out = 2 - l;
                    for (int t = 0; t < l; ++t) {
                        inner_susp.push_back(degs[static_cast<size_t>(j + t)] - 1);
                        inner_out += degs[static_cast<size_t>(j + t)];
                    }
                    // outer b_k inputs, suspended (slot j holds the inner output)
                    std::vector<Degree> outer_susp;
                    for (int p = 0; p < j; ++p)
                        outer_susp.push_back(degs[static_cast<size_t>(p)] - 1);
                    outer_susp.push_back(inner_out - 1);
                    for (int p = j + 1; p < k; ++p)
                        outer_susp.push_back(degs[static_cast<size_t>(p + l - 1)] - 1);

                    int total = sign_unsuspended(j, l, prefix_unsusp) * sign_suspended(prefix_susp) *
                                suspension_sign(l, inner_susp) * suspension_sign(k, outer_susp);
                    if (!have_ref) {
                        reference = total;
                        have_ref = true;
                    }
                    else {
                        REQUIRE(total == reference);
                    }
                }
            }
            // next degree tuple
            int pos = 0;
            while (pos < n && degs[static_cast<size_t>(pos)] == 3)
                degs[static_cast<size_t>(pos++)] = -2;
            if (pos == n)
                break;
            ++degs[static_cast<size_t>(pos)];
        }
    }
}

TEST_CASE("row reduction suite: pinned cases")
{
    Mat<Rational> id = Mat<Rational>::Identity(2, 2);
    RowReduced<Rational> rid(id);
    CHECK(rid.rank() == 2);
    CHECK(rid.nullspace().cols() == 0);

    Mat<Rational> ones(2, 2);
    ones << Rational(1), Rational(1), Rational(1), Rational(1);
    RowReduced<Rational> rones(ones);
    CHECK(rones.rank() == 1);
    Mat<Rational> n = rones.nullspace();
    REQUIRE(n.cols() == 1);
    CHECK(n(0, 0) == -n(1, 0));
    CHECK(is_zero(Mat<Rational>(ones * n)));
}

TEST_CASE("row reduction suite against the independent oracle")
{
    std::mt19937 rng(20240811u);
    for (int trial = 0; trial < 60; ++trial) {
        int rows = 1 + static_cast<int>(rng() % 5);
        int cols = 1 + static_cast<int>(rng() % 5);
        Mat<Rational> a(rows, cols);
        std::vector<std::vector<Rational>> raw(static_cast<size_t>(rows),
                                               std::vector<Rational>(static_cast<size_t>(cols)));
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                std::int64_t num = static_cast<std::int64_t>(rng() % 7) - 3;
                std::int64_t den = 1 + static_cast<std::int64_t>(rng() % 3);
                a(i, j) = Rational(num, den);
                raw[static_cast<size_t>(i)][static_cast<size_t>(j)] = a(i, j);
            }
        RowReduced<Rational> red(a);
        CHECK(red.rank() == oracle_rank(raw));
        // rank + nullity = columns, and the nullspace really maps to zero
        Mat<Rational> n = red.nullspace();
        CHECK(red.rank() + n.cols() == cols);
        CHECK(is_zero(Mat<Rational>(a * n)));
        // the column-space complement fills the ambient space exactly
        Mat<Rational> c = column_space_complement(a);
        Mat<Rational> joined(rows, a.cols() + c.cols());
        joined.leftCols(a.cols()) = a;
        joined.rightCols(c.cols()) = c;
        CHECK(rank_of(joined) == rows);
        CHECK(red.rank() + c.cols() == rows);

        // preimage solving: a x = a y must be solvable with residual zero
        PreimageSolver<Rational> solver(a);
        Vec<Rational> y(cols);
        for (int j = 0; j < cols; ++j)
            y[j] = Rational(static_cast<std::int64_t>(rng() % 5) - 2);
        Vec<Rational> b = a * y;
        auto x = solver.solve(b);
        REQUIRE(x.has_value());
        CHECK(is_zero(Mat<Rational>(a * *x - b)));
        // anything outside the column space must be rejected
        if (red.rank() < rows) {
            Vec<Rational> outside = column_space_complement(a).col(0);
            CHECK_FALSE(solver.solve(outside).has_value());
        }
    }
}

TEST_CASE("graded maps compose blockwise with added degrees")
{
    GradedSpace v(0, {{"a0", "a1"}, {"b0"}});
    GradedMap<Rational> d(v, v, 1);
    Mat<Rational> blk(1, 2);
    blk << Rational(1), Rational(-1);
    d.set_block(0, blk);
    GradedMap<Rational> dd = compose(d, d);
    CHECK(dd.degree() == 2);
    CHECK(dd.is_zero_map());
    HomElem<Rational> x{0, Vec<Rational>(2)};
    x.coeffs << Rational(3), Rational(1);
    HomElem<Rational> y = d.apply(x);
    CHECK(y.deg == 1);
    CHECK(y.coeffs[0] == Rational(2));
    CHECK_THROWS_AS(d.set_block(0, Mat<Rational>::Identity(2, 2)), std::invalid_argument);
}

TEST_CASE("multilinear evaluation: pinned cases")
{
    GradedSpace e(0, {{"e"}});
    GradedSpace f(0, {{"f"}});
    GradedSpace g(0, {{"g"}});

    SUBCASE("arity-1 identity table")
    {
        MultiMap<Rational> idm({e}, e, 0);
        HomElem<Rational> one = HomElem<Rational>::unit(e, {0, 0});
        idm.add_entry({{0, 0}}, one);
        CHECK(idm.eval({one}) == one);
        HomElem<Rational> zero = HomElem<Rational>::zero(e, 0);
        CHECK(idm.eval({zero}).is_zero());
    }

    SUBCASE("bilinearity: (e,f) -> 2g on (3e, 5f) gives 30g")
    {
        MultiMap<Rational> m({e, f}, g, 0);
        HomElem<Rational> twog{0, Vec<Rational>(1)};
        twog.coeffs << Rational(2);
        m.add_entry({{0, 0}, {0, 0}}, twog);
        HomElem<Rational> a{0, Vec<Rational>(1)}, b{0, Vec<Rational>(1)};
        a.coeffs << Rational(3);
        b.coeffs << Rational(5);
        HomElem<Rational> out = m.eval({a, b});
        CHECK(out.coeffs[0] == Rational(30));
        // a zero argument kills the value
        CHECK(m.eval({HomElem<Rational>::zero(e, 0), b}).is_zero());
    }

    SUBCASE("nonzero output outside the target window is a construction error")
    {
        GradedSpace tiny(0, {{"t"}});
        MultiMap<Rational> m({e, f}, tiny, 3);  // forced output degree 3, outside the window
        HomElem<Rational> bad{3, Vec<Rational>(1)};
        bad.coeffs << Rational(1);
        CHECK_THROWS_AS(m.add_entry({{0, 0}, {0, 0}}, bad), std::invalid_argument);
        HomElem<Rational> harmless{3, Vec<Rational>(0)};
        m.add_entry({{0, 0}, {0, 0}}, harmless);  // zero outside the window is fine
        CHECK(m.is_zero_map());
    }

    SUBCASE("arity mismatch is rejected")
    {
        MultiMap<Rational> m({e, f}, g, 0);
        HomElem<Rational> a = HomElem<Rational>::unit(e, {0, 0});
        CHECK_THROWS_AS(m.eval({a}), std::invalid_argument);
    }
}
