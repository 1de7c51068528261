#include "caliblab/structure.hpp"
#include "random_inputs.hpp"

#include <gtest/gtest.h>

using namespace caliblab;
using namespace caliblab::testing;

namespace {

Vec e(int n, int i) { return Vec::Unit(n, i); }

double gram_det(const Mat& cols) { return (cols.transpose() * cols).determinant(); }

Mat cols(std::initializer_list<Vec> vs) {
    Mat m(vs.begin()->size(), static_cast<int>(vs.size()));
    int j = 0;
    for (const Vec& v : vs) m.col(j++) = v;
    return m;
}

// |(I - T T^T) v|^2 for orthonormal T
double perp2(const Mat& T, const Vec& v) { return (v - T * (T.transpose() * v)).squaredNorm(); }

}  // namespace

TEST(StandardKit, StructureConstants) {
    const auto g2 = standard_kit(CalibrationCase::Associative);
    EXPECT_EQ(g2.n, 7);
    EXPECT_EQ(g2.associative_form.component({0, 1, 2}), 1.0);
    EXPECT_EQ(g2.associative_form.component({0, 5, 6}), -1.0);
    const auto sp = standard_kit(CalibrationCase::Cayley);
    EXPECT_EQ(sp.n, 8);
    EXPECT_EQ(sp.cayley_form.component({0, 1, 2, 3}), 1.0);
    EXPECT_EQ(sp.cayley_form.component({4, 5, 6, 7}), 1.0);
    const auto u2 = almost_complex_kit(2, 1);
    EXPECT_EQ((u2.kahler_form - KForm::basis(4, {0, 1}) - KForm::basis(4, {2, 3})).max_abs(), 0.0);
    const auto co = standard_kit(CalibrationCase::Coassociative);
    EXPECT_EQ(co.calibrated_dim, 4);
    EXPECT_EQ((co.calibration - co.coassociative_form).max_abs(), 0.0);
}

TEST(StandardKit, Invariants) {
    for (int m = 2; m <= 4; ++m)
        for (int k = 1; k < m; ++k) {
            const auto kit = almost_complex_kit(m, k);
            const Mat& J = kit.complex_structure;
            EXPECT_LT((J * J + Mat::Identity(2 * m, 2 * m)).norm(), 1e-15);
            std::mt19937_64 rng(m * 10 + k);
            const Vec X = random_vec(2 * m, rng), Y = random_vec(2 * m, rng);
            EXPECT_NEAR(evaluate(kit.kahler_form, cols({X, Y})), (J * X).dot(Y), 1e-12);
            EXPECT_EQ(kit.calibrated_dim, 2 * k);
        }
    const auto g2 = standard_kit(CalibrationCase::Associative);
    EXPECT_EQ((hodge_star(g2.associative_form) - g2.coassociative_form).max_abs(), 0.0);
    const auto sp = standard_kit(CalibrationCase::Cayley);
    EXPECT_EQ((hodge_star(sp.cayley_form) - sp.cayley_form).max_abs(), 0.0);
}

TEST(StandardKit, InvalidDescriptorsThrow) {
    EXPECT_THROW(almost_complex_kit(2, 2), std::invalid_argument);
    EXPECT_THROW(almost_complex_kit(3, 0), std::invalid_argument);
    EXPECT_THROW(almost_complex_kit(5, 1), std::invalid_argument);
    EXPECT_THROW(parse_case("hyperkahler"), std::invalid_argument);
    EXPECT_EQ(parse_case(case_name(CalibrationCase::Cayley)), CalibrationCase::Cayley);
}

TEST(CrossProduct, StandardProducts) {
    const auto kit = standard_kit(CalibrationCase::Associative);
    EXPECT_EQ((cross_2fold(kit, e(7, 0), e(7, 1)) - e(7, 2)).norm(), 0.0);
    EXPECT_EQ((cross_2fold(kit, e(7, 1), e(7, 3)) - e(7, 5)).norm(), 0.0);
    std::mt19937_64 rng(1);
    const Vec X = random_vec(7, rng);
    EXPECT_LT(cross_2fold(kit, X, X).norm(), 1e-14);
}

TEST(CrossProduct, OrthogonalWithGramNorm) {
    const auto kit = standard_kit(CalibrationCase::Associative);
    std::mt19937_64 rng(2);
    for (int t = 0; t < 200; ++t) {
        const Vec X = random_vec(7, rng), Y = random_vec(7, rng);
        const Vec c = cross_2fold(kit, X, Y);
        EXPECT_NEAR(c.dot(X), 0.0, 1e-12);
        EXPECT_NEAR(c.dot(Y), 0.0, 1e-12);
        EXPECT_NEAR(c.squaredNorm(), gram_det(cols({X, Y})), 1e-10 * (1 + c.squaredNorm()));
        // phi(X, Y, Z) = <X x Y, Z>
        const Vec Z = random_vec(7, rng);
        EXPECT_NEAR(evaluate(kit.associative_form, cols({X, Y, Z})), c.dot(Z), 1e-11);
    }
}

TEST(Chi, StandardValues) {
    const auto kit = standard_kit(CalibrationCase::Associative);
    EXPECT_EQ(chi_3fold(kit, e(7, 0), e(7, 1), e(7, 2)).norm(), 0.0);
    EXPECT_EQ((chi_3fold(kit, e(7, 3), e(7, 4), e(7, 5)) - e(7, 6)).norm(), 0.0);
    EXPECT_EQ(evaluate(kit.associative_form, cols({e(7, 3), e(7, 4), e(7, 5)})), 0.0);
    std::mt19937_64 rng(3);
    const Vec X = random_vec(7, rng), Y = random_vec(7, rng);
    EXPECT_LT(chi_3fold(kit, X, X, Y).norm(), 1e-13);
}

TEST(Chi, AssociativeEquality) {
    const auto kit = standard_kit(CalibrationCase::Associative);
    std::mt19937_64 rng(4);
    for (int t = 0; t < 2000; ++t) {
        const Vec X = random_vec(7, rng), Y = random_vec(7, rng), Z = random_vec(7, rng);
        const Vec c = chi_3fold(kit, X, Y, Z);
        const double p = evaluate(kit.associative_form, cols({X, Y, Z}));
        const double g = gram_det(cols({X, Y, Z}));
        EXPECT_NEAR(c.squaredNorm() + p * p, g, 1e-10 * (1 + g));
        EXPECT_NEAR(c.dot(X), 0.0, 1e-11);
        EXPECT_NEAR(c.dot(Z), 0.0, 1e-11);
    }
}

TEST(Chi, CoassociativeEquality) {
    const auto kit = standard_kit(CalibrationCase::Associative);
    std::mt19937_64 rng(5);
    for (int t = 0; t < 2000; ++t) {
        const Vec X = random_vec(7, rng), Y = random_vec(7, rng), Z = random_vec(7, rng), W = random_vec(7, rng);
        const auto phi = [&](const Vec& a, const Vec& b, const Vec& c) {
            return evaluate(kit.associative_form, cols({a, b, c}));
        };
        const Vec v = phi(Y, Z, W) * X - phi(X, Z, W) * Y + phi(X, Y, W) * Z - phi(X, Y, Z) * W;
        const double s = evaluate(kit.coassociative_form, cols({X, Y, Z, W}));
        const double g = gram_det(cols({X, Y, Z, W}));
        EXPECT_NEAR(s * s + v.squaredNorm(), g, 1e-10 * (1 + g));
    }
}

TEST(CayleyCross, StandardValuesAndNorm) {
    const auto kit = standard_kit(CalibrationCase::Cayley);
    EXPECT_EQ((cayley_cross(kit, e(8, 0), e(8, 1), e(8, 2)) - e(8, 3)).norm(), 0.0);
    std::mt19937_64 rng(6);
    for (int t = 0; t < 500; ++t) {
        const Vec X = random_vec(8, rng), Y = random_vec(8, rng), Z = random_vec(8, rng);
        const Vec P = cayley_cross(kit, X, Y, Z);
        const double g = gram_det(cols({X, Y, Z}));
        EXPECT_NEAR(P.squaredNorm(), g, 1e-12 * (1 + g) * 10);
        EXPECT_NEAR(P.dot(X), 0.0, 1e-11);
        EXPECT_NEAR(P.dot(Y), 0.0, 1e-11);
        EXPECT_NEAR(P.dot(Z), 0.0, 1e-11);
    }
}

TEST(CrossProduct, WrongKitThrows) {
    const auto sp = standard_kit(CalibrationCase::Cayley);
    EXPECT_THROW(cross_2fold(sp, e(8, 0), e(8, 1)), std::invalid_argument);
    const auto g2 = standard_kit(CalibrationCase::Associative);
    EXPECT_THROW(cayley_cross(g2, e(7, 0), e(7, 1), e(7, 2)), std::invalid_argument);
}

TEST(ContractionIdentities, AllEightFamiliesExact) {
    const auto all = contraction_identity_check_all();
    ASSERT_EQ(all.size(), 8u);
    for (const auto& c : all) {
        EXPECT_EQ(c.max_violation, 0) << c.name;
        EXPECT_GT(c.entries_checked, 0) << c.name;
    }
    EXPECT_EQ(contraction_identity_check(standard_kit(CalibrationCase::Associative)).size(), 6u);
    EXPECT_EQ(contraction_identity_check(standard_kit(CalibrationCase::Cayley)).size(), 2u);
    EXPECT_THROW(contraction_identity_check(almost_complex_kit(2, 1)), std::invalid_argument);
}

TEST(ContractionIdentities, BruteForceTraces) {
    // independent double-loop oracle for the three trace identities
    const auto g2 = standard_kit(CalibrationCase::Associative);
    const auto sp = standard_kit(CalibrationCase::Cayley);
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) {
            double a = 0, b = 0;
            for (int p = 0; p < 7; ++p)
                for (int q = 0; q < 7; ++q) {
                    a += g2.associative_form.component({i, p, q}) * g2.associative_form.component({j, p, q});
                    for (int m = 0; m < 7; ++m)
                        b += g2.coassociative_form.component({i, m, p, q}) *
                             g2.coassociative_form.component({j, m, p, q});
                }
            EXPECT_EQ(a, i == j ? 6.0 : 0.0);
            EXPECT_EQ(b, i == j ? 24.0 : 0.0);
        }
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            double c = 0;
            for (int m = 0; m < 8; ++m)
                for (int p = 0; p < 8; ++p)
                    for (int q = 0; q < 8; ++q)
                        c += sp.cayley_form.component({i, m, p, q}) * sp.cayley_form.component({j, m, p, q});
            EXPECT_EQ(c, i == j ? 42.0 : 0.0);
        }
}

TEST(ContractionIdentities, CorruptedConstantIsDetected) {
    for (auto c : {CalibrationCase::Associative, CalibrationCase::Cayley}) {
        const auto bad = corrupt_structure_constant(standard_kit(c));
        long worst = 0;
        for (const auto& r : contraction_identity_check(bad)) worst = std::max<long>(worst, r.max_violation);
        EXPECT_GT(worst, 0);
    }
}

TEST(CalibrationReport, SpecExamples) {
    const auto g2 = standard_kit(CalibrationCase::Associative);
    auto r = calibration_report(g2, cols({e(7, 0), e(7, 1), e(7, 2)}));
    EXPECT_DOUBLE_EQ(r.value, 1.0);
    EXPECT_EQ(r.defect, 0.0);
    EXPECT_TRUE(r.is_calibrated);

    const auto co = standard_kit(CalibrationCase::Coassociative);
    const Mat P = cols({e(7, 3), e(7, 4), e(7, 5), e(7, 6)});
    r = calibration_report(co, P);
    EXPECT_DOUBLE_EQ(r.value, 1.0);
    EXPECT_TRUE(r.is_calibrated);
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
            for (int c = b + 1; c < 4; ++c)
                EXPECT_EQ(evaluate(co.associative_form, cols({P.col(a), P.col(b), P.col(c)})), 0.0);

    const auto sp = standard_kit(CalibrationCase::Cayley);
    r = calibration_report(sp, cols({e(8, 0), e(8, 1), e(8, 2), e(8, 4)}));
    EXPECT_LT(std::abs(r.value), 1.0);
    EXPECT_GT(r.defect, 0.0);
    EXPECT_FALSE(r.is_calibrated);
}

TEST(CalibrationReport, RankDeficientThrows) {
    const auto g2 = standard_kit(CalibrationCase::Associative);
    EXPECT_THROW(calibration_report(g2, cols({e(7, 0), e(7, 1), e(7, 0)})), std::domain_error);
    EXPECT_THROW(calibration_report(g2, cols({e(7, 0), e(7, 1)})), std::invalid_argument);
}

TEST(CalibrationReport, DefectMatchesDirectOracle) {
    std::mt19937_64 rng(7);
    for (auto c : {CalibrationCase::AlmostComplex, CalibrationCase::Associative, CalibrationCase::Coassociative,
                   CalibrationCase::Cayley}) {
        const auto kit = c == CalibrationCase::AlmostComplex ? almost_complex_kit(3, 2) : standard_kit(c);
        const int k = kit.calibrated_dim;
        for (int t = 0; t < 20; ++t) {
            const Mat T = random_orthonormal(kit.n, k, rng);
            double oracle = 0.0;
            if (c == CalibrationCase::AlmostComplex) {
                for (int a = 0; a < k; ++a) oracle += perp2(T, kit.complex_structure * T.col(a));
            } else if (c == CalibrationCase::Associative) {
                for (int a = 0; a < k; ++a)
                    for (int b = a + 1; b < k; ++b) oracle += perp2(T, cross_2fold(kit, T.col(a), T.col(b)));
            } else {
                for (int a = 0; a < k; ++a)
                    for (int b = a + 1; b < k; ++b)
                        for (int d = b + 1; d < k; ++d) {
                            const Vec v = c == CalibrationCase::Cayley ? cayley_cross(kit, T.col(a), T.col(b), T.col(d))
                                                                       : chi_3fold(kit, T.col(a), T.col(b), T.col(d));
                            oracle += perp2(T, v);
                        }
            }
            EXPECT_NEAR(invariance_defect(kit, T), oracle, 1e-12);
        }
    }
}

TEST(CalibrationReport, IndependentOfBasisAndOrientation) {
    std::mt19937_64 rng(8);
    for (auto c : {CalibrationCase::Associative, CalibrationCase::Coassociative, CalibrationCase::Cayley}) {
        const auto kit = standard_kit(c);
        for (int t = 0; t < 20; ++t) {
            const Mat B = random_mat(kit.n, kit.calibrated_dim, rng);
            const auto r0 = calibration_report(kit, B);
            const Mat B2 = B * random_mat(kit.calibrated_dim, kit.calibrated_dim, rng);
            const auto r1 = calibration_report(kit, B2);
            EXPECT_NEAR(r0.defect, r1.defect, 1e-10);
            EXPECT_NEAR(std::abs(r0.value), std::abs(r1.value), 1e-10);
            Mat B3 = B;
            B3.col(0) *= -1.0;
            const auto r2 = calibration_report(kit, B3);
            EXPECT_NEAR(r0.defect, r2.defect, 1e-10);
            EXPECT_NEAR(r0.value, -r2.value, 1e-10);
        }
    }
}

TEST(CalibrationReport, CalibratedIffDefectVanishes) {
    // is_calibrated <=> defect small <=> |value| near 1, over the catalog and random planes
    std::mt19937_64 rng(9);
    for (auto c : {CalibrationCase::AlmostComplex, CalibrationCase::Associative, CalibrationCase::Coassociative,
                   CalibrationCase::Cayley}) {
        const auto kit = c == CalibrationCase::AlmostComplex ? almost_complex_kit(3, 1) : standard_kit(c);
        for (const auto& p : plane_catalog(kit)) {
            const auto r = calibration_report(kit, p.basis);
            EXPECT_EQ(r.is_calibrated, p.calibrated_by_construction) << case_name(c) << " " << p.id;
            EXPECT_EQ(r.is_calibrated, std::abs(r.value) > 1 - kTolCalib) << p.id;
            EXPECT_EQ(r.is_calibrated, r.defect < kTolCalib) << p.id;
        }
    }
}

TEST(CalibrationReport, CoassociativeConditionBothDirections) {
    // phi|_P = 0 <=> chi of tangent triples stays tangent, and then psi = +-1
    const auto kit = standard_kit(CalibrationCase::Coassociative);
    for (const auto& p : plane_catalog(kit)) {
        const Mat T = calibration_report(kit, p.basis).frame.tangent();
        double phi_restricted = 0.0;
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b)
                for (int c = b + 1; c < 4; ++c)
                    phi_restricted = std::max(
                        phi_restricted, std::abs(evaluate(kit.associative_form, cols({T.col(a), T.col(b), T.col(c)}))));
        const double defect = invariance_defect(kit, T);
        EXPECT_EQ(phi_restricted < 1e-10, defect < 1e-10) << p.id;
        const double lambda = evaluate(kit.coassociative_form, T);
        if (defect < 1e-10) EXPECT_NEAR(std::abs(lambda), 1.0, 1e-10);
    }
}

TEST(Comass, BoundedByOneAndAttained) {
    const auto g2 = standard_kit(CalibrationCase::Associative);
    EXPECT_LE(comass_sample(g2, 10000, 1), 1.0 + 1e-10);
    EXPECT_EQ(comass_sample(g2, 10, 1, {cols({e(7, 0), e(7, 1), e(7, 2)})}), 1.0);
    const auto u = almost_complex_kit(3, 2);
    EXPECT_LE(comass_sample(u, 2000, 2), 1.0 + 1e-10);
    const auto sp = standard_kit(CalibrationCase::Cayley);
    EXPECT_LE(comass_sample(sp, 2000, 3), 1.0 + 1e-10);
    EXPECT_EQ(comass_sample(g2, 50, 5), comass_sample(g2, 50, 5));
}

TEST(PlaneCatalog, SixOfEachKind) {
    for (auto c : {CalibrationCase::Associative, CalibrationCase::Coassociative, CalibrationCase::Cayley}) {
        const auto cat = plane_catalog(standard_kit(c));
        int cal = 0, non = 0;
        for (const auto& p : cat) (p.calibrated_by_construction ? cal : non)++;
        EXPECT_GE(cal, 6);
        EXPECT_GE(non, 6);
    }
    const auto cat = plane_catalog(almost_complex_kit(3, 1));
    int cal = 0;
    for (const auto& p : cat) cal += p.calibrated_by_construction;
    EXPECT_GE(cal, 6);
    EXPECT_GE(static_cast<int>(cat.size()) - cal, 6);
}
