#include "caliblab/smith.hpp"
#include "caliblab/variation.hpp"
#include "random_inputs.hpp"

#include <gtest/gtest.h>

using namespace caliblab;
using namespace caliblab::testing;

namespace {

MapTriple linear_map(const Mat& A, const StructureKit& kit) {
    const int k = static_cast<int>(A.cols());
    return MapTriple{std::make_shared<AffinePatch>("linear", Vec::Zero(A.rows()), A, Box::cube(k, 0.0, 1.0)),
                     euclidean_domain_metric(k), kit};
}

// z -> (z, c z^2) on a small square: injective and conformal
MapTriple holomorphic_map(std::complex<double> c) {
    using C = std::complex<double>;
    std::vector<std::vector<C>> p{{C(0), C(1)}, {C(0), C(0), c}};
    Box box = Box::cube(2, 0.1, 0.9);
    return MapTriple{std::make_shared<HolomorphicCurvePatch>("holo", p, box), euclidean_domain_metric(2),
                     almost_complex_kit(2, 1)};
}

DomainMetric conformal_domain_metric(const DomainMetric& g, const TrigPolynomial& f) {
    return [g, f](const Vec& x) { return SymTensor2(std::exp(2 * f.value(x)) * g(x).matrix()); };
}

DomainMetric random_domain_metric(int k, std::mt19937_64& rng) {
    const SymTensor2 base = random_spd(k, rng);
    TrigFieldOptions opt;
    opt.amplitude = 0.3;
    const auto f = random_trig_polynomial(k, opt, rng);
    return [base, f](const Vec& x) { return SymTensor2(std::exp(f.value(x)) * base.matrix()); };
}

StructureKit kit_for_dim(int k) {
    if (k == 2) return almost_complex_kit(2, 1);
    if (k == 3) return standard_kit(CalibrationCase::Associative);
    return standard_kit(CalibrationCase::Cayley);
}

const QuadratureRule kRule = QuadratureRule::gauss_legendre(6);

}  // namespace

TEST(KEnergy, SpecExamples) {
    const auto kit = almost_complex_kit(2, 1);
    EXPECT_NEAR(k_energy(linear_map(Mat::Identity(4, 2), kit), kRule), 1.0, 1e-14);
    for (double c : {0.5, 2.0, 3.0}) EXPECT_NEAR(k_energy(linear_map(c * Mat::Identity(4, 2), kit), kRule), c * c, 1e-13);
    EXPECT_NEAR(k_volume(linear_map(Mat::Identity(4, 2), kit), kRule), 1.0, 1e-14);
    EXPECT_EQ(k_volume(linear_map(Mat::Zero(4, 2), kit), kRule), 0.0);
    EXPECT_EQ(calibration_integral(linear_map(Mat::Zero(4, 2), kit), kRule), 0.0);
}

TEST(KEnergy, ConformalInvariance) {
    std::mt19937_64 rng(1);
    for (int k = 2; k <= 4; ++k) {
        const auto kit = kit_for_dim(k);
        auto m = MapTriple{QuadraticMapPatch::random(k, kit.n, 10 + k, 0.4, Box::cube(k, 0, 1)), random_domain_metric(k, rng), kit};
        const double e0 = k_energy(m, kRule);
        for (int t = 0; t < 3; ++t) {
            auto m2 = m;
            m2.g = conformal_domain_metric(m.g, random_trig_polynomial(k, TrigFieldOptions{}, rng));
            EXPECT_NEAR(k_energy(m2, kRule), e0, 1e-10 * e0);
            std::uniform_real_distribution<double> lam(0.2, 5.0);
            const double l = lam(rng);
            m2.g = [g = m.g, l](const Vec& x) { return SymTensor2(l * l * g(x).matrix()); };
            EXPECT_NEAR(k_energy(m2, kRule), e0, 1e-10 * e0);
        }
    }
}

TEST(KVolume, MatchesPatchVolume) {
    for (int k = 2; k <= 4; ++k) {
        const auto kit = kit_for_dim(k);
        const auto p = QuadraticMapPatch::random(k, kit.n, 30 + k, 0.5, Box::cube(k, -1, 1));
        const MapTriple m{p, euclidean_domain_metric(k), kit};
        // independent oracle: sqrt of the Gram determinant of the partials
        const double oracle = integrate(kRule, p->box(), [&](const Vec& x) {
            const Mat J = p->jacobian(x);
            return std::sqrt((J.transpose() * J).determinant());
        });
        EXPECT_NEAR(k_volume(m, kRule), oracle, 1e-12 * oracle);
    }
}

TEST(CalibrationIntegral, HolomorphicAndAntiHolomorphic) {
    const auto kit = almost_complex_kit(2, 1);
    EXPECT_NEAR(calibration_integral(linear_map(Mat::Identity(4, 2), kit), kRule), 1.0, 1e-14);
    Mat anti = Mat::Identity(4, 2);
    anti(1, 1) = -1.0;
    EXPECT_NEAR(calibration_integral(linear_map(anti, kit), kRule), -1.0, 1e-14);
    EXPECT_THROW(calibration_integral(linear_map(Mat::Identity(4, 3), kit), kRule), std::invalid_argument);
}

TEST(InequalityChain, HoldsOnRandomMaps) {
    std::mt19937_64 rng(2);
    const auto rule = QuadratureRule::gauss_legendre(4);
    for (int t = 0; t < 60; ++t) {
        const int k = 2 + t % 3;
        const auto kit = kit_for_dim(k);
        const MapTriple m{QuadraticMapPatch::random(k, kit.n, 100 + t, 0.3 * (t % 4), Box::cube(k, 0, 1)),
                          t % 2 ? random_domain_metric(k, rng) : euclidean_domain_metric(k), kit};
        const double E = k_energy(m, rule), V = k_volume(m, rule), C = calibration_integral(m, rule);
        EXPECT_GE(E, V * (1 - 1e-12));
        EXPECT_GE(V, C - 1e-12 * V);
    }
}

TEST(InequalityChain, EqualityCases) {
    // holomorphic map: E = V = int u^* omega
    const auto h = holomorphic_map({0.3, 0.2});
    const auto rule = QuadratureRule::gauss_legendre(8);
    const double E = k_energy(h, rule), V = k_volume(h, rule), C = calibration_integral(h, rule);
    EXPECT_NEAR(E, V, 1e-12 * V);
    EXPECT_NEAR(V, C, 1e-12 * V);
    const auto r = smith_residual(h, rule);
    EXPECT_LT(r.conformality, 1e-12);
    EXPECT_LT(r.calibration, 1e-12);
}

TEST(Conformality, SpecExamples) {
    const auto kit = almost_complex_kit(2, 1);
    EXPECT_EQ(conformality_residual(linear_map(Mat::Identity(4, 2), kit), kRule), 0.0);
    EXPECT_LT(conformality_residual(linear_map(2.5 * Mat::Identity(4, 2), kit), kRule), 1e-14);
    Mat st = Mat::Identity(4, 2);
    st(1, 1) = 2.0;
    // u^* gbar = diag(1, 4) against 5/2 Id: Frobenius norm of diag(-3/2, 3/2)
    EXPECT_NEAR(conformality_residual(linear_map(st, kit), kRule), 1.5 * std::sqrt(2.0), 1e-14);
}

TEST(SmithResidual, SpecExamples) {
    const auto kit = almost_complex_kit(2, 1);
    auto r = smith_residual(linear_map(Mat::Identity(4, 2), kit), kRule);
    EXPECT_EQ(r.conformality, 0.0);
    EXPECT_LT(r.calibration, 1e-15);
    Mat e13 = Mat::Zero(4, 2);
    e13(0, 0) = e13(2, 1) = 1.0;
    r = smith_residual(linear_map(e13, kit), kRule);
    EXPECT_EQ(r.conformality, 0.0);
    EXPECT_NEAR(r.calibration, 1.0, 1e-15);
    Mat st = Mat::Identity(4, 2);
    st(1, 1) = 2.0;
    r = smith_residual(linear_map(st, kit), kRule);
    EXPECT_GT(r.conformality, 0.1);
    EXPECT_GT(r.calibration, 0.1);
}

TEST(SmithResidual, CalibrationConditionAloneImpliesConformality) {
    // second residual zero forces the first to vanish, over a mixed catalog
    std::mt19937_64 rng(3);
    std::vector<MapTriple> maps{holomorphic_map({0.4, -0.1}), holomorphic_map({0.0, 0.0})};
    const auto kit = almost_complex_kit(2, 1);
    for (int t = 0; t < 10; ++t) maps.push_back(linear_map(random_mat(4, 2, rng), kit));
    Mat e13 = Mat::Zero(4, 2);
    e13(0, 0) = e13(2, 1) = 1.0;
    maps.push_back(linear_map(e13, kit));
    for (const auto& m : maps) {
        const auto r = smith_residual(m, kRule);
        if (r.calibration < 1e-10) EXPECT_LT(r.conformality, 1e-6);
    }
}

TEST(ConformalMapVolume, PointwiseIdentity) {
    // vol_{u^* gbar} = |du|^k vol_g / sqrt(k^k) for weakly conformal maps
    const auto h = holomorphic_map({0.2, 0.5});
    for (const Vec& x : sample_points(h.map->box(), kRule)) {
        const Mat J = h.map->jacobian(x);
        const Mat pull = J.transpose() * J;
        const double du2 = pull.trace();
        EXPECT_NEAR(std::sqrt(pull.determinant()), du2 / 2.0, 1e-12);
    }
}

TEST(DomainVariation, VanishesOnConformalMaps) {
    std::mt19937_64 rng(4);
    const auto rule = QuadratureRule::gauss_legendre(8);
    std::vector<MapTriple> maps{holomorphic_map({0.3, 0.1})};
    const Mat R = Mat::Identity(7, 3);
    maps.push_back(MapTriple{std::make_shared<InversionPatch>("inv", Vec::Constant(3, -1.0), Vec::Zero(7), 1.0, R,
                                                              Box::cube(3, 0.0, 1.0)),
                             euclidean_domain_metric(3), kit_for_dim(3)});
    for (const auto& m : maps) {
        const int k = m.map->domain_dim();
        for (int t = 0; t < 5; ++t) {
            std::vector<TrigPolynomial> comps;
            for (int i = 0; i < k * k; ++i) comps.push_back(random_trig_polynomial(k, TrigFieldOptions{}, rng));
            const DomainMetric h = [comps, k](const Vec& x) {
                Mat a(k, k);
                for (int i = 0; i < k; ++i)
                    for (int j = 0; j < k; ++j) a(i, j) = comps[i * k + j].value(x);
                return SymTensor2(a + a.transpose());
            };
            EXPECT_LT(std::abs(energy_first_variation_domain(m, h, rule)), 1e-8);
        }
        EXPECT_LT(std::abs(energy_first_variation_domain(m, m.g, rule)), 1e-8);
    }
}

TEST(DomainVariation, MatchesDifferencesOnAnisotropicMaps) {
    std::mt19937_64 rng(5);
    for (int k = 2; k <= 4; ++k) {
        const auto kit = kit_for_dim(k);
        const MapTriple m{QuadraticMapPatch::random(k, kit.n, 50 + k, 0.5, Box::cube(k, 0, 1)), random_domain_metric(k, rng), kit};
        const SymTensor2 H(random_mat(k, k, rng));
        const DomainMetric h = [H](const Vec&) { return H; };
        const auto rule = QuadratureRule::gauss_legendre(5);
        const double a = energy_first_variation_domain(m, h, rule);
        const auto d = fd_derivative(
            [&](double t) {
                return k_energy_with(m, [&](const Vec& x) { return SymTensor2(m.g(x).matrix() + t * H.matrix()); },
                                     euclidean_metric(kit.n), rule);
            },
            0.0);
        EXPECT_NEAR(d.value, a, 1e-6 * (1 + std::abs(a)));
        EXPECT_GT(std::abs(a), 1e-4);
    }
}

TEST(TargetVariation, MatchesImageFirstVariation) {
    std::mt19937_64 rng(6);
    const auto rule = QuadratureRule::gauss_legendre(8);
    for (auto c : {std::complex<double>(0.3, 0.1), std::complex<double>(-0.2, 0.4)}) {
        const auto m = holomorphic_map(c);
        std::vector<TrigPolynomial> comps;
        TrigFieldOptions opt;
        opt.constant_term = true;
        for (int i = 0; i < 16; ++i) comps.push_back(random_trig_polynomial(4, opt, rng));
        const MetricField hbar = [comps](const Vec& y) {
            Mat a(4, 4);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) a(i, j) = comps[i * 4 + j].value(y);
            return SymTensor2(a + a.transpose());
        };
        // image-patch first variation 1/2 int Tr_{u^* gbar}(u^* hbar) vol, as in the volume lemma
        const double image = integrate(rule, m.map->box(), [&](const Vec& x) {
            return half_trace(*m.map, euclidean_metric(4), hbar(m.map->point(x)), x) *
                   std::sqrt(induced_metric(*m.map, euclidean_metric(4), x).matrix().determinant());
        });
        EXPECT_NEAR(energy_first_variation_target(m, hbar, rule), image, 1e-10 * (1 + std::abs(image)));
        const auto d = fd_derivative(
            [&](double t) {
                return k_energy_with(m, m.g, [&](const Vec& y) { return SymTensor2(Mat::Identity(4, 4) + t * hbar(y).matrix()); }, rule);
            },
            0.0);
        EXPECT_NEAR(d.value, image, 1e-6);
    }
    const auto m = holomorphic_map({0.1, 0.1});
    EXPECT_EQ(energy_first_variation_target(m, [](const Vec&) { return SymTensor2::zero(4); }, rule), 0.0);
    EXPECT_NEAR(energy_first_variation_target(m, euclidean_metric(4), rule), k_volume(m, rule), 1e-12);
}
