#include "caliblab/exterior.hpp"
#include "caliblab/structure.hpp"
#include "random_inputs.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

using namespace caliblab;
using namespace caliblab::testing;

namespace {

int perm_sign(const std::vector<int>& p) {
    int inv = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j) inv += p[i] > p[j];
    return (inv & 1) ? -1 : 1;
}

// Oracle: (a ^ b)(v_1..v_{p+q}) = 1/(p! q!) sum_sigma sgn(sigma) a(v_sigma..) b(v_sigma..)
double wedge_on_vectors(const KForm& a, const KForm& b, const Mat& V) {
    const int p = a.degree(), q = b.degree();
    std::vector<int> perm(p + q);
    std::iota(perm.begin(), perm.end(), 0);
    double s = 0.0;
    double fact = 1.0;
    for (int i = 2; i <= p; ++i) fact *= i;
    for (int i = 2; i <= q; ++i) fact *= i;
    do {
        Mat A(V.rows(), p), B(V.rows(), q);
        for (int i = 0; i < p; ++i) A.col(i) = V.col(perm[i]);
        for (int i = 0; i < q; ++i) B.col(i) = V.col(perm[p + i]);
        s += perm_sign(perm) * evaluate(a, A) * evaluate(b, B);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return s / fact;
}

// Oracle: <a, b>_g = sum over sorted I, J of a_I b_J det(G^{-1}[I, J]).
double inner_oracle(const KForm& a, const KForm& b, const Mat& G) {
    const Mat Gi = G.inverse();
    const int k = a.degree();
    const auto& masks = subsets(a.ambient_dim(), k);
    double s = 0.0;
    for (std::size_t r = 0; r < masks.size(); ++r)
        for (std::size_t t = 0; t < masks.size(); ++t) {
            const auto I = MultiIndex::from_mask(a.ambient_dim(), masks[r]).entries();
            const auto J = MultiIndex::from_mask(a.ambient_dim(), masks[t]).entries();
            Mat sub(k, k);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) sub(i, j) = Gi(I[i], J[j]);
            s += a.coeff(r) * b.coeff(t) * (k ? sub.determinant() : 1.0);
        }
    return s;
}

}  // namespace

TEST(MultiIndex, RejectsNonIncreasingEntries) {
    EXPECT_THROW(MultiIndex(4, {2, 1}), std::invalid_argument);
    EXPECT_THROW(MultiIndex(4, {1, 1}), std::invalid_argument);
    EXPECT_THROW(MultiIndex(3, {0, 3}), std::out_of_range);
    EXPECT_EQ(MultiIndex(5, {0, 2, 4}).degree(), 3);
}

TEST(KForm, StorageFollowsLexicographicOrder) {
    const auto& m = subsets(4, 2);
    ASSERT_EQ(m.size(), 6u);
    const std::vector<std::vector<int>> expected{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (std::size_t r = 0; r < m.size(); ++r) EXPECT_EQ(MultiIndex::from_mask(4, m[r]).entries(), expected[r]);
    EXPECT_EQ(KForm(8, 4).size(), 70u);
}

TEST(KForm, SkewExpansionReproducesStoredCoefficients) {
    std::mt19937_64 rng(1);
    const KForm f = random_form(6, 3, rng);
    for (const auto& e : expand_skew(f)) {
        std::vector<int> idx{e.idx[0], e.idx[1], e.idx[2]};
        std::vector<int> sorted = idx;
        std::sort(sorted.begin(), sorted.end());
        std::vector<int> perm(3);
        for (int i = 0; i < 3; ++i) perm[i] = static_cast<int>(std::find(sorted.begin(), sorted.end(), idx[i]) - sorted.begin());
        EXPECT_DOUBLE_EQ(e.value, perm_sign(perm) * f[MultiIndex(6, sorted)]);
    }
    EXPECT_EQ(expand_skew(f).size(), 20u * 6u);
}

TEST(Wedge, BasisCase) {
    const KForm w = wedge(KForm::basis(3, {0}), KForm::basis(3, {1}));
    EXPECT_EQ(w[MultiIndex(3, {0, 1})], 1.0);
    EXPECT_EQ(w.max_abs(), 1.0);
}

TEST(Wedge, ProductOfTwoFormsInDimensionEight) {
    const KForm a = KForm::basis(8, {0, 1}) + KForm::basis(8, {2, 3});
    const KForm b = KForm::basis(8, {4, 5}) - KForm::basis(8, {6, 7});
    const KForm expected = KForm::basis(8, {0, 1, 4, 5}) - KForm::basis(8, {0, 1, 6, 7}) +
                           KForm::basis(8, {2, 3, 4, 5}) - KForm::basis(8, {2, 3, 6, 7});
    EXPECT_EQ((wedge(a, b) - expected).max_abs(), 0.0);
    // brute-force oracle on random vectors
    std::mt19937_64 rng(2);
    const Mat V = random_mat(8, 4, rng);
    EXPECT_NEAR(evaluate(wedge(a, b), V), wedge_on_vectors(a, b, V), 1e-10);
}

TEST(Wedge, MatchesPermutationOracle) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 3 + trial % 6;
        const int p = 1 + trial % 3;
        const int q = std::min(n - p, 1 + (trial / 3) % 3);
        if (q < 1) continue;
        const KForm a = random_form(n, p, rng), b = random_form(n, q, rng);
        const Mat V = random_mat(n, p + q, rng);
        EXPECT_NEAR(evaluate(wedge(a, b), V), wedge_on_vectors(a, b, V), 1e-9);
    }
}

TEST(Wedge, AssociativeAndGradedCommutativeOnIntegers) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        const KForm a = random_integer_form(7, 1 + trial % 3, rng);
        const KForm b = random_integer_form(7, 1 + (trial / 3) % 2, rng);
        const KForm c = random_integer_form(7, 1, rng);
        if (a.degree() + b.degree() + c.degree() > 7) continue;
        EXPECT_EQ((wedge(wedge(a, b), c) - wedge(a, wedge(b, c))).max_abs(), 0.0);
        const double sign = ((a.degree() * b.degree()) % 2) ? -1.0 : 1.0;
        EXPECT_EQ((wedge(a, b) - sign * wedge(b, a)).max_abs(), 0.0);
    }
}

TEST(Wedge, RejectsMismatchedDimensions) {
    EXPECT_THROW(wedge(KForm(3, 1), KForm(4, 1)), std::invalid_argument);
    EXPECT_THROW(wedge(KForm(3, 2), KForm(3, 2)), std::invalid_argument);
}

TEST(Interior, BasisCases) {
    const KForm r = interior(Vec::Unit(2, 0), KForm::basis(2, {0, 1}));
    EXPECT_EQ(r[MultiIndex(2, {1})], 1.0);
    const auto kit = standard_kit(CalibrationCase::Associative);
    const KForm s = interior(Vec::Unit(7, 0), kit.associative_form);
    const KForm expected = KForm::basis(7, {1, 2}) + KForm::basis(7, {3, 4}) - KForm::basis(7, {5, 6});
    EXPECT_EQ((s - expected).max_abs(), 0.0);
}

TEST(Interior, MatchesEvaluationWithVectorInFirstSlot) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 4 + trial % 5;
        const int k = 1 + trial % 4;
        const KForm a = random_form(n, k, rng);
        const Vec v = random_vec(n, rng);
        const Mat W = random_mat(n, k - 1, rng);
        Mat full(n, k);
        full << v, W;
        EXPECT_NEAR(evaluate(interior(v, a), W), evaluate(a, full), 1e-10);
    }
}

TEST(Interior, IsAdjointOfWedgeWithDualCovector) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 3 + trial % 6;
        const int k = 1 + trial % std::min(n, 4);
        const KForm a = random_form(n, k, rng);
        const KForm b = random_form(n, k - 1, rng);
        const Vec v = random_vec(n, rng);
        KForm flat(n, 1);
        for (int i = 0; i < n; ++i) flat.coeff(i) = v[i];
        EXPECT_NEAR(form_inner(interior(v, a), b), form_inner(a, wedge(flat, b)), 1e-12 * (1 + a.max_abs() * b.max_abs() * 50));
    }
}

TEST(HodgeStar, ComplementaryIndexCase) {
    const KForm s = hodge_star(KForm::basis(7, {0, 1, 2}));
    EXPECT_EQ((s - KForm::basis(7, {3, 4, 5, 6})).max_abs(), 0.0);
}

TEST(HodgeStar, StandardStructureForms) {
    const auto g2 = standard_kit(CalibrationCase::Associative);
    EXPECT_EQ((hodge_star(g2.associative_form) - g2.coassociative_form).max_abs(), 0.0);
    const auto sp = standard_kit(CalibrationCase::Cayley);
    EXPECT_EQ((hodge_star(sp.cayley_form) - sp.cayley_form).max_abs(), 0.0);
}

TEST(HodgeStar, GeneralMetricSatisfiesDefiningIdentity) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + trial % 6;
        const int k = trial % (n + 1);
        const SymTensor2 G = random_spd(n, rng);
        const KForm a = random_form(n, k, rng), b = random_form(n, k, rng);
        const double inner = inner_oracle(a, b, G.matrix());
        EXPECT_NEAR(form_inner(a, b, G), inner, 1e-9 * (1 + std::abs(inner)));
        // a ^ *b = <a, b> vol_g
        const KForm top = wedge(a, hodge_star(b, G));
        EXPECT_NEAR(top.coeff(0), inner * std::sqrt(G.matrix().determinant()), 1e-8 * (1 + std::abs(inner)));
        // ** = (-1)^{k(n-k)}
        const double sign = ((k * (n - k)) % 2) ? -1.0 : 1.0;
        EXPECT_LT((hodge_star(hodge_star(a, G), G) - sign * a).max_abs(), 1e-9 * (1 + a.max_abs()));
        // opposite orientation flips the sign
        EXPECT_LT((hodge_star(a, G, -1) + hodge_star(a, G)).max_abs(), 1e-12 * (1 + a.max_abs()));
    }
}

TEST(HodgeStar, RejectsIndefiniteMetric) {
    Mat m = Mat::Identity(3, 3);
    m(2, 2) = -1.0;
    EXPECT_THROW(hodge_star(KForm::basis(3, {0}), SymTensor2(m)), std::domain_error);
}

TEST(FormInner, StructureFormNorms) {
    const auto g2 = standard_kit(CalibrationCase::Associative);
    EXPECT_EQ(form_inner(g2.associative_form, g2.associative_form), 7.0);
    EXPECT_EQ(form_inner(g2.coassociative_form, g2.coassociative_form), 7.0);
    const auto sp = standard_kit(CalibrationCase::Cayley);
    EXPECT_EQ(form_inner(sp.cayley_form, sp.cayley_form), 14.0);
}

TEST(Evaluate, ArityMismatchThrows) {
    EXPECT_THROW(evaluate(KForm(4, 2), Mat::Zero(4, 3)), std::invalid_argument);
    EXPECT_THROW(evaluate(KForm(4, 2), Mat::Zero(3, 2)), std::invalid_argument);
}

TEST(Pullback, CompositionAndDeterminant) {
    std::mt19937_64 rng(8);
    const Mat A = random_mat(5, 5, rng), B = random_mat(5, 5, rng);
    const KForm a = random_form(5, 3, rng);
    EXPECT_LT((pullback(pullback(a, A), B) - pullback(a, A * B)).max_abs(), 1e-9 * (1 + a.max_abs()) * 100);
    const KForm top = KForm::basis(5, {0, 1, 2, 3, 4});
    EXPECT_NEAR(pullback(top, A).coeff(0), A.determinant(), 1e-10 * std::abs(A.determinant()) + 1e-12);
}

TEST(GramSchmidt, TrivialSpan) {
    const auto f = gram_schmidt_adapt(Mat::Identity(4, 2), SymTensor2::identity(4));
    EXPECT_LT((f.vectors - Mat::Identity(4, 4)).norm(), 1e-15);
    EXPECT_EQ(f.orientation, 1);
}

TEST(GramSchmidt, OrthonormalPositiveAndSpanning) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 7;
        const int k = 1 + trial % n;
        const SymTensor2 G = (trial % 2) ? random_spd(n, rng) : SymTensor2::identity(n);
        const Mat B = random_mat(n, k, rng);
        const auto f = gram_schmidt_adapt(B, G);
        const Mat gram = f.vectors.transpose() * G.matrix() * f.vectors;
        EXPECT_LT((gram - Mat::Identity(n, n)).norm(), 1e-12);
        // tangent block spans the input columns
        const Mat T = f.tangent();
        const Mat proj = T * (T.transpose() * G.matrix());
        EXPECT_LT((proj * B - B).norm(), 1e-10 * B.norm());
        if (k < n) {
            EXPECT_GT(f.vectors.determinant(), 0.0);
        }
        // partial flags: span of first j frame vectors equals span of first j inputs
        for (int j = 1; j < k; ++j) {
            const Mat Tj = f.vectors.leftCols(j);
            const Mat Pj = Tj * (Tj.transpose() * G.matrix());
            EXPECT_LT((Pj * B.leftCols(j) - B.leftCols(j)).norm(), 1e-10 * B.norm());
        }
    }
}

TEST(GramSchmidt, CholeskyTangentMatchesFrame) {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 50; ++t) {
        const int n = 3 + t % 6, k = 1 + t % n;
        const Mat J = random_mat(n, k, rng);
        const SymTensor2 G = random_spd(n, rng);
        EXPECT_LT((orthonormal_tangent(J, G) - gram_schmidt_adapt(J, G).tangent()).norm(), 1e-10);
    }
    EXPECT_THROW(orthonormal_tangent(Mat::Zero(4, 2), SymTensor2::identity(4)), std::domain_error);
}

TEST(GramSchmidt, RankDeficientInputThrows) {
    Mat B(4, 2);
    B << 1, 2, 0, 0, 1, 2, 0, 0;
    EXPECT_THROW(gram_schmidt_adapt(B, SymTensor2::identity(4)), std::domain_error);
}

TEST(IntTensor, ExpansionIsSkewAndRejectsFractions) {
    const auto g2 = standard_kit(CalibrationCase::Associative);
    const IntTensor t = expand_integer(g2.associative_form);
    EXPECT_EQ(t({0, 1, 2}), 1);
    EXPECT_EQ(t({1, 0, 2}), -1);
    EXPECT_EQ(t({2, 0, 1}), 1);
    EXPECT_EQ(t({1, 6, 4}), -1);  // e275 = -e257 in 1-based labels
    EXPECT_EQ(t({0, 0, 1}), 0);
    EXPECT_THROW(expand_integer(0.5 * g2.associative_form), std::invalid_argument);
}
