#include "caliblab/structure.hpp"

#include "caliblab/decomposition.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

namespace caliblab {

std::string case_name(CalibrationCase c) {
    switch (c) {
        case CalibrationCase::AlmostComplex: return "um";
        case CalibrationCase::Associative: return "associative";
        case CalibrationCase::Coassociative: return "coassociative";
        case CalibrationCase::Cayley: return "cayley";
    }
    return "unknown";
}

CalibrationCase parse_case(const std::string& name) {
    if (name == "um" || name == "almost-complex" || name == "u(m)") return CalibrationCase::AlmostComplex;
    if (name == "associative" || name == "assoc" || name == "g2") return CalibrationCase::Associative;
    if (name == "coassociative" || name == "coassoc") return CalibrationCase::Coassociative;
    if (name == "cayley" || name == "spin7") return CalibrationCase::Cayley;
    throw std::invalid_argument("unknown case '" + name + "'");
}

namespace {

// Structure constants written with the usual 1-based labels.
KForm from_terms(int n, int k, std::initializer_list<std::pair<double, std::vector<int>>> terms) {
    KForm f(n, k);
    for (const auto& [c, idx] : terms) {
        std::vector<int> zero_based(idx.begin(), idx.end());
        for (int& i : zero_based) --i;
        f.add_component(zero_based, c);
    }
    return f;
}

KForm g2_phi() {
    return from_terms(7, 3, {{1, {1, 2, 3}},
                             {1, {1, 4, 5}},
                             {-1, {1, 6, 7}},
                             {1, {2, 4, 6}},
                             {-1, {2, 7, 5}},
                             {1, {3, 4, 7}},
                             {-1, {3, 5, 6}}});
}

KForm g2_psi() {
    return from_terms(7, 4, {{1, {4, 5, 6, 7}},
                             {-1, {2, 3, 4, 5}},
                             {1, {2, 3, 6, 7}},
                             {-1, {3, 1, 4, 6}},
                             {1, {3, 1, 7, 5}},
                             {-1, {1, 2, 4, 7}},
                             {1, {1, 2, 5, 6}}});
}

KForm spin7_Phi() {
    auto two = [](int a, int b, int c, int d) {
        return KForm::basis(8, {a - 1, b - 1}) - KForm::basis(8, {c - 1, d - 1});
    };
    KForm f = KForm::basis(8, {0, 1, 2, 3}) + KForm::basis(8, {4, 5, 6, 7});
    f += wedge(two(1, 2, 3, 4), two(5, 6, 7, 8));
    f += wedge(two(1, 3, 4, 2), two(5, 7, 8, 6));
    f += wedge(two(1, 4, 2, 3), two(5, 8, 6, 7));
    return f;
}

double factorial(int k) {
    double r = 1;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
}

Vec raise(const StructureKit& kit, const KForm& one_form) {
    Vec v(kit.n);
    for (int i = 0; i < kit.n; ++i) v[i] = one_form.coeff(i);
    return kit.metric.matrix().ldlt().solve(v);
}

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

StructureKit almost_complex_kit(int m, int k) { return standard_kit(CaseDescriptor{CalibrationCase::AlmostComplex, m, k}); }

StructureKit standard_kit(const CaseDescriptor& d) {
    StructureKit kit;
    kit.descriptor = d;
    switch (d.kind) {
        case CalibrationCase::AlmostComplex: {
            if (d.m < 1 || 2 * d.m > kMaxDim) throw std::invalid_argument("U(m) kit needs 1 <= m <= 4");
            if (d.k < 1 || d.k >= d.m) throw std::invalid_argument("U(m) kit needs 1 <= k < m");
            kit.n = 2 * d.m;
            kit.calibrated_dim = 2 * d.k;
            kit.kahler_form = KForm(kit.n, 2);
            for (int a = 0; a < d.m; ++a) kit.kahler_form.add_component({2 * a, 2 * a + 1}, 1.0);
            kit.complex_structure = Mat::Zero(kit.n, kit.n);
            for (int i = 0; i < kit.n; ++i)
                for (int j = 0; j < kit.n; ++j) kit.complex_structure(i, j) = kit.kahler_form.component({j, i});
            KForm power(kit.n, 0);
            power.coeff(0) = 1.0;
            for (int i = 0; i < d.k; ++i) power = wedge(power, kit.kahler_form);
            kit.calibration = (1.0 / factorial(d.k)) * power;
            break;
        }
        case CalibrationCase::Associative:
        case CalibrationCase::Coassociative:
            kit.n = 7;
            kit.associative_form = g2_phi();
            kit.coassociative_form = g2_psi();
            kit.calibrated_dim = d.kind == CalibrationCase::Associative ? 3 : 4;
            kit.calibration = d.kind == CalibrationCase::Associative ? kit.associative_form : kit.coassociative_form;
            break;
        case CalibrationCase::Cayley:
            kit.n = 8;
            kit.cayley_form = spin7_Phi();
            kit.calibrated_dim = 4;
            kit.calibration = kit.cayley_form;
            break;
    }
    kit.metric = SymTensor2::identity(kit.n);
    refresh_caches(kit);
    return kit;
}

namespace {

SplitMaps split_maps(int n, int k, const std::vector<SkewEntry>& entries, const std::vector<KForm>& slots) {
    SplitMaps m;
    const KForm probe(n, k);
    // hat(p, q) = sum over entries (q, i..) of value * a_{p i..}
    std::vector<int> rank_of(1u << n, -1);
    for (std::size_t r = 0; r < probe.size(); ++r) rank_of[probe.mask_at(r)] = static_cast<int>(r);
    m.hat = Mat::Zero(n * n, probe.size());
    for (const SkewEntry& e : entries) {
        unsigned rest = 0;
        for (int j = 1; j < k; ++j) rest |= 1u << e.idx[j];
        if (std::popcount(rest) != k - 1) continue;
        // sign of sorting (p, i_1 < ... ) needs the order of the tail as stored
        int inv = 0;
        for (int a = 1; a < k; ++a)
            for (int b = a + 1; b < k; ++b) inv += e.idx[a] > e.idx[b];
        for (int p = 0; p < n; ++p) {
            if (rest >> p & 1u) continue;
            const int below = std::popcount(rest & ((1u << p) - 1));
            const double sign = (inv + below) % 2 ? -1.0 : 1.0;
            m.hat(p + e.idx[0] * n, rank_of[rest | 1u << p]) += sign * e.value;
        }
    }
    m.slot = Mat::Zero(probe.size(), n * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const KForm w = 0.5 * wedge(KForm::basis(n, {i}), slots[j]);
            for (std::size_t r = 0; r < w.size(); ++r) m.slot(r, i + j * n) = w.coeff(r);
        }
    return m;
}

}  // namespace

void refresh_caches(StructureKit& kit) {
    kit.associative_entries.clear();
    kit.coassociative_entries.clear();
    kit.cayley_entries.clear();
    kit.associative_slots.clear();
    kit.coassociative_slots.clear();
    kit.cayley_slots.clear();
    if (kit.associative_form.degree() == 3) {
        kit.associative_entries = expand_skew(kit.associative_form);
        kit.coassociative_entries = expand_skew(kit.coassociative_form);
        for (int i = 0; i < kit.n; ++i) {
            kit.associative_slots.push_back(interior(Vec::Unit(kit.n, i), kit.associative_form));
            kit.coassociative_slots.push_back(interior(Vec::Unit(kit.n, i), kit.coassociative_form));
        }
        kit.associative_maps = split_maps(kit.n, 3, kit.associative_entries, kit.associative_slots);
        kit.coassociative_maps = split_maps(kit.n, 4, kit.coassociative_entries, kit.coassociative_slots);
    }
    if (kit.cayley_form.degree() == 4) {
        kit.cayley_entries = expand_skew(kit.cayley_form);
        for (int i = 0; i < kit.n; ++i) kit.cayley_slots.push_back(interior(Vec::Unit(kit.n, i), kit.cayley_form));
        kit.cayley_maps = split_maps(kit.n, 4, kit.cayley_entries, kit.cayley_slots);
    }
}

StructureKit corrupt_structure_constant(const StructureKit& kit) {
    StructureKit bad = kit;
    auto flip_first = [](KForm& f) {
        for (std::size_t r = 0; r < f.size(); ++r)
            if (f.coeff(r) != 0.0) {
                f.coeff(r) = -f.coeff(r);
                return;
            }
    };
    switch (kit.kind()) {
        case CalibrationCase::AlmostComplex: flip_first(bad.kahler_form); break;
        case CalibrationCase::Associative:
        case CalibrationCase::Coassociative: flip_first(bad.associative_form); break;
        case CalibrationCase::Cayley: flip_first(bad.cayley_form); break;
    }
    refresh_caches(bad);
    return bad;
}

Vec cross_2fold(const StructureKit& kit, const Vec& x, const Vec& y) {
    require(kit.associative_form.degree() == 3, "cross_2fold needs a G2 kit");
    return raise(kit, interior(y, interior(x, kit.associative_form)));
}

namespace {

// z _| y _| x _| a for a 4-form given by its skew entries, raised with the kit metric
Vec triple_contract(const StructureKit& kit, const std::vector<SkewEntry>& entries, const Vec& x, const Vec& y,
                    const Vec& z) {
    Vec low = Vec::Zero(kit.n);
    for (const SkewEntry& e : entries) low[e.idx[3]] += e.value * x[e.idx[0]] * y[e.idx[1]] * z[e.idx[2]];
    return kit.metric.matrix().ldlt().solve(low);
}

}  // namespace

Vec chi_3fold(const StructureKit& kit, const Vec& x, const Vec& y, const Vec& z) {
    require(kit.coassociative_form.degree() == 4, "chi_3fold needs a G2 kit");
    return triple_contract(kit, kit.coassociative_entries, x, y, z);
}

Vec cayley_cross(const StructureKit& kit, const Vec& x, const Vec& y, const Vec& z) {
    require(kit.cayley_form.degree() == 4, "cayley_cross needs a Spin(7) kit");
    return triple_contract(kit, kit.cayley_entries, x, y, z);
}

// ------------------------------------------------------- exact identity suite

namespace {

using I64 = std::int64_t;

IdentityCheck run4(int n, const char* name, const std::function<I64(int, int, int, int)>& lhs,
                   const std::function<I64(int, int, int, int)>& rhs) {
    IdentityCheck c{name, 0, 0};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    I64 v = lhs(i, j, k, l) - rhs(i, j, k, l);
                    c.max_violation = std::max(c.max_violation, v < 0 ? -v : v);
                    ++c.entries_checked;
                }
    return c;
}

IdentityCheck run3(int n, const char* name, const std::function<I64(int, int, int)>& lhs,
                   const std::function<I64(int, int, int)>& rhs) {
    IdentityCheck c{name, 0, 0};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                I64 v = lhs(i, j, k) - rhs(i, j, k);
                c.max_violation = std::max(c.max_violation, v < 0 ? -v : v);
                ++c.entries_checked;
            }
    return c;
}

IdentityCheck run2(int n, const char* name, const std::function<I64(int, int)>& lhs,
                   const std::function<I64(int, int)>& rhs) {
    IdentityCheck c{name, 0, 0};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            I64 v = lhs(i, j) - rhs(i, j);
            c.max_violation = std::max(c.max_violation, v < 0 ? -v : v);
            ++c.entries_checked;
        }
    return c;
}

I64 delta(int i, int j) { return i == j ? 1 : 0; }

std::vector<IdentityCheck> g2_identities(const KForm& phi_form, const KForm& psi_form) {
    const IntTensor phi = expand_integer(phi_form);
    const IntTensor psi = expand_integer(psi_form);
    const int n = 7;
    std::vector<IdentityCheck> out;
    out.push_back(run4(
        n, "phi_ijp phi_klp = g_ik g_jl - g_il g_jk - psi_ijkl",
        [&](int i, int j, int k, int l) {
            I64 s = 0;
            for (int p = 0; p < n; ++p) s += phi({i, j, p}) * phi({k, l, p});
            return s;
        },
        [&](int i, int j, int k, int l) {
            return delta(i, k) * delta(j, l) - delta(i, l) * delta(j, k) - psi({i, j, k, l});
        }));
    out.push_back(run2(
        n, "phi_ipq phi_jpq = 6 g_ij",
        [&](int i, int j) {
            I64 s = 0;
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) s += phi({i, p, q}) * phi({j, p, q});
            return s;
        },
        [&](int i, int j) { return 6 * delta(i, j); }));
    out.push_back(run3(
        n, "phi_ipq psi_jkpq = -4 phi_ijk",
        [&](int i, int j, int k) {
            I64 s = 0;
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) s += phi({i, p, q}) * psi({j, k, p, q});
            return s;
        },
        [&](int i, int j, int k) { return -4 * phi({i, j, k}); }));
    out.push_back(run2(
        n, "phi_mpq psi_jmpq = 0",
        [&](int j, int unused) {
            if (unused != 0) return I64{0};
            I64 s = 0;
            for (int m = 0; m < n; ++m)
                for (int p = 0; p < n; ++p)
                    for (int q = 0; q < n; ++q) s += phi({m, p, q}) * psi({j, m, p, q});
            return s;
        },
        [&](int, int) { return I64{0}; }));
    out.push_back(run4(
        n, "psi_ijpq psi_klpq = 4 g_ik g_jl - 4 g_il g_jk - 2 psi_ijkl",
        [&](int i, int j, int k, int l) {
            I64 s = 0;
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) s += psi({i, j, p, q}) * psi({k, l, p, q});
            return s;
        },
        [&](int i, int j, int k, int l) {
            return 4 * delta(i, k) * delta(j, l) - 4 * delta(i, l) * delta(j, k) - 2 * psi({i, j, k, l});
        }));
    out.push_back(run2(
        n, "psi_impq psi_jmpq = 24 g_ij",
        [&](int i, int j) {
            I64 s = 0;
            for (int m = 0; m < n; ++m)
                for (int p = 0; p < n; ++p)
                    for (int q = 0; q < n; ++q) s += psi({i, m, p, q}) * psi({j, m, p, q});
            return s;
        },
        [&](int i, int j) { return 24 * delta(i, j); }));
    return out;
}

std::vector<IdentityCheck> spin7_identities(const KForm& Phi_form) {
    const IntTensor Phi = expand_integer(Phi_form);
    const int n = 8;
    std::vector<IdentityCheck> out;
    out.push_back(run4(
        n, "Phi_ijpq Phi_klpq = 6 g_ik g_jl - 6 g_il g_jk - 4 Phi_ijkl",
        [&](int i, int j, int k, int l) {
            I64 s = 0;
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) s += Phi({i, j, p, q}) * Phi({k, l, p, q});
            return s;
        },
        [&](int i, int j, int k, int l) {
            return 6 * delta(i, k) * delta(j, l) - 6 * delta(i, l) * delta(j, k) - 4 * Phi({i, j, k, l});
        }));
    out.push_back(run2(
        n, "Phi_impq Phi_jmpq = 42 g_ij",
        [&](int i, int j) {
            I64 s = 0;
            for (int m = 0; m < n; ++m)
                for (int p = 0; p < n; ++p)
                    for (int q = 0; q < n; ++q) s += Phi({i, m, p, q}) * Phi({j, m, p, q});
            return s;
        },
        [&](int i, int j) { return 42 * delta(i, j); }));
    return out;
}

}  // namespace

std::vector<IdentityCheck> contraction_identity_check(const StructureKit& kit) {
    switch (kit.kind()) {
        case CalibrationCase::Associative:
        case CalibrationCase::Coassociative:
            return g2_identities(kit.associative_form, kit.coassociative_form);
        case CalibrationCase::Cayley: return spin7_identities(kit.cayley_form);
        case CalibrationCase::AlmostComplex: break;
    }
    throw std::invalid_argument("contraction identities are defined for G2 and Spin(7) kits only");
}

std::vector<IdentityCheck> contraction_identity_check_all() {
    auto out = contraction_identity_check(standard_kit(CalibrationCase::Associative));
    auto sp = contraction_identity_check(standard_kit(CalibrationCase::Cayley));
    out.insert(out.end(), sp.begin(), sp.end());
    return out;
}

std::vector<EqualitySweep> cross_product_equalities(int samples, std::uint64_t seed) {
    const auto kit = standard_kit(CalibrationCase::Associative);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    auto rv = [&] {
        Vec v(7);
        for (int i = 0; i < 7; ++i) v[i] = nd(rng);
        return v;
    };
    auto phi = [&](const Vec& a, const Vec& b, const Vec& c) {
        Mat m(7, 3);
        m << a, b, c;
        return evaluate(kit.associative_form, m);
    };
    EqualitySweep as{"associative equality", 0.0, samples}, co{"coassociative equality", 0.0, samples};
    for (int t = 0; t < samples; ++t) {
        const Vec x = rv(), y = rv(), z = rv(), w = rv();
        Mat m3(7, 3);
        m3 << x, y, z;
        const double p = phi(x, y, z);
        const double g3 = (m3.transpose() * m3).determinant();
        const double r3 = std::abs(p * p + chi_3fold(kit, x, y, z).squaredNorm() - g3) / (1 + g3);
        as.max_relative_residual = std::max(as.max_relative_residual, r3);

        Mat m4(7, 4);
        m4 << x, y, z, w;
        const Vec v = phi(y, z, w) * x - phi(x, z, w) * y + phi(x, y, w) * z - phi(x, y, z) * w;
        const double s = evaluate(kit.coassociative_form, m4);
        const double g4 = (m4.transpose() * m4).determinant();
        co.max_relative_residual = std::max(co.max_relative_residual, std::abs(s * s + v.squaredNorm() - g4) / (1 + g4));
    }
    return {as, co};
}

// --------------------------------------------------------- calibrated planes

double invariance_defect(const StructureKit& kit, const Mat& T) {
    const int k = static_cast<int>(T.cols());
    if (T.rows() != kit.n || k != kit.calibrated_dim)
        throw std::invalid_argument("invariance_defect: plane has the wrong shape for this kit");
    const Mat N = Mat::Identity(kit.n, kit.n) - T * T.transpose() * kit.metric.matrix();
    auto perp2 = [&](const Vec& v) {
        Vec p = N * v;
        return kit.metric(p, p);
    };
    double s = 0.0;
    switch (kit.kind()) {
        case CalibrationCase::AlmostComplex:
            for (int a = 0; a < k; ++a) s += perp2(kit.complex_structure * T.col(a));
            break;
        case CalibrationCase::Associative:
            for (int a = 0; a < k; ++a)
                for (int b = a + 1; b < k; ++b) s += perp2(cross_2fold(kit, T.col(a), T.col(b)));
            break;
        case CalibrationCase::Coassociative:
            for (int a = 0; a < k; ++a)
                for (int b = a + 1; b < k; ++b)
                    for (int c = b + 1; c < k; ++c) s += perp2(chi_3fold(kit, T.col(a), T.col(b), T.col(c)));
            break;
        case CalibrationCase::Cayley:
            for (int a = 0; a < k; ++a)
                for (int b = a + 1; b < k; ++b)
                    for (int c = b + 1; c < k; ++c) s += perp2(cayley_cross(kit, T.col(a), T.col(b), T.col(c)));
            break;
    }
    return s;
}

CalibrationReport calibration_report(const StructureKit& kit, const Mat& tangent_basis, double tol_calib) {
    if (tangent_basis.rows() != kit.n || tangent_basis.cols() != kit.calibrated_dim)
        throw std::invalid_argument("calibration_report: expected " + std::to_string(kit.calibrated_dim) +
                                    " tangent vectors in R^" + std::to_string(kit.n));
    CalibrationReport r;
    // The completion flip never touches the tangent block, so the sign of
    // `value` follows the order of the given basis.
    r.frame = gram_schmidt_adapt(tangent_basis, kit.metric);
    const Mat T = r.frame.tangent();
    r.value = evaluate(kit.calibration, T);
    r.defect = invariance_defect(kit, T);
    r.is_calibrated = r.defect < tol_calib;
    return r;
}

double comass_sample(const StructureKit& kit, int trials, std::uint64_t seed, const std::vector<Mat>& extra_planes) {
    const int n = kit.n;
    const int k = kit.calibrated_dim;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    auto orthonormalize = [&](const Mat& B) -> Mat {
        Eigen::HouseholderQR<Mat> qr(B);
        return qr.householderQ() * Mat::Identity(n, k);
    };
    Mat best_plane;
    double best = -1.0;
    auto consider = [&](const Mat& T) {
        const double v = std::abs(evaluate(kit.calibration, T));
        if (v > best) {
            best = v;
            best_plane = T;
        }
    };
    for (const Mat& p : extra_planes) consider(orthonormalize(p));
    for (int t = 0; t < trials; ++t) {
        Mat B(n, k);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < k; ++j) B(i, j) = gauss(rng);
        consider(orthonormalize(B));
    }
    if (best_plane.size() == 0) return 0.0;
    // Projected gradient ascent on |mu(T)| over the Stiefel manifold.
    Mat T = best_plane;
    double step = 0.2;
    for (int it = 0; it < 20; ++it) {
        const double sign = evaluate(kit.calibration, T) >= 0 ? 1.0 : -1.0;
        Mat grad(n, k);
        for (int a = 0; a < k; ++a)
            for (int i = 0; i < n; ++i) {
                Mat Ti = T;
                Ti.col(a) = Vec::Unit(n, i);
                grad(i, a) = sign * evaluate(kit.calibration, Ti);
            }
        Mat cand = orthonormalize(T + step * (grad - T * (T.transpose() * grad)));
        const double v = std::abs(evaluate(kit.calibration, cand));
        if (v > best) {
            best = v;
            T = cand;
        } else {
            step *= 0.5;
        }
    }
    return best;
}

std::vector<CatalogPlane> plane_catalog(const StructureKit& kit, std::uint64_t seed) {
    const int n = kit.n;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    auto rnd = [&]() {
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = gauss(rng);
        return v;
    };
    auto e = [&](int i) { return Vec(Vec::Unit(n, i)); };
    auto cols = [&](std::initializer_list<Vec> vs) {
        Mat m(n, static_cast<Eigen::Index>(vs.size()));
        int c = 0;
        for (const Vec& v : vs) m.col(c++) = v;
        return m;
    };
    auto coord = [&](std::initializer_list<int> idx) {
        Mat m(n, static_cast<Eigen::Index>(idx.size()));
        int c = 0;
        for (int i : idx) m.col(c++) = e(i);
        return m;
    };
    auto random_plane = [&](int k) {
        Mat m(n, k);
        for (int j = 0; j < k; ++j) m.col(j) = rnd();
        return m;
    };
    // Tilt a calibrated plane by rotating its last vector towards a normal direction.
    auto tilt = [&](Mat m, const Vec& dir, double angle) {
        Vec last = m.col(m.cols() - 1);
        m.col(m.cols() - 1) = std::cos(angle) * last + std::sin(angle) * dir;
        return m;
    };

    std::vector<CatalogPlane> out;
    auto add = [&](std::string id, Mat b, bool cal) { out.push_back({std::move(id), std::move(b), cal}); };
    const int k = kit.calibrated_dim;

    switch (kit.kind()) {
        case CalibrationCase::AlmostComplex: {
            const Mat& J = kit.complex_structure;
            const int kc = kit.descriptor.k;
            auto complex_span = [&](const std::vector<Vec>& vs) {
                Mat m(n, 2 * static_cast<int>(vs.size()));
                for (std::size_t a = 0; a < vs.size(); ++a) {
                    m.col(2 * a) = vs[a];
                    m.col(2 * a + 1) = J * vs[a];
                }
                return m;
            };
            auto shifted = [&](int offset) {
                std::vector<Vec> vs;
                for (int a = 0; a < kc; ++a) vs.push_back(e(2 * ((a + offset) % kit.descriptor.m)));
                return vs;
            };
            add("complex-coordinate-0", complex_span(shifted(0)), true);
            add("complex-coordinate-1", complex_span(shifted(1)), true);
            {
                auto vs = shifted(0);
                vs[0] = (e(0) + e(n - 2) + e(n - 1)) / std::sqrt(3.0);
                add("complex-mixed", complex_span(vs), true);
            }
            for (int r = 0; r < 3; ++r) {
                std::vector<Vec> vs;
                for (int a = 0; a < kc; ++a) vs.push_back(rnd());
                add("complex-random-" + std::to_string(r), complex_span(vs), true);
            }
            {
                Mat lag(n, k);
                for (int a = 0; a < k; ++a) lag.col(a) = e(2 * (a % kit.descriptor.m) + (a / kit.descriptor.m));
                add("totally-real-coordinate", lag, false);
            }
            add("tilted-0.3", tilt(complex_span(shifted(0)), e(n - 1), 0.3), false);
            add("tilted-0.8", tilt(complex_span(shifted(1)), e(0) * 0.6 + e(n - 2) * 0.8, 0.8), false);
            for (int r = 0; r < 3; ++r) add("random-" + std::to_string(r), random_plane(k), false);
            break;
        }
        case CalibrationCase::Associative:
        case CalibrationCase::Coassociative: {
            auto assoc = [&](const Vec& x, const Vec& y) { return cols({x, y, cross_2fold(kit, x, y)}); };
            auto complement = [&](const Mat& m) -> Mat {
                OrientedFrame f = gram_schmidt_adapt(m, kit.metric);
                return f.normal();
            };
            std::vector<std::pair<std::string, Mat>> cal{
                {"e123", assoc(e(0), e(1))},
                {"e145", assoc(e(0), e(3))},
                {"e246", assoc(e(1), e(3))},
                {"mixed", assoc(e(0) + e(3), e(1) - e(6))},
            };
            for (int r = 0; r < 2; ++r) cal.push_back({"random-" + std::to_string(r), assoc(rnd(), rnd())});
            std::vector<std::pair<std::string, Mat>> non{
                {"e124", coord({0, 1, 3})},
                {"e146", coord({0, 3, 5})},
                {"e456", coord({3, 4, 5})},
                {"tilted-0.4", tilt(assoc(e(0), e(1)), e(3), 0.4)},
            };
            for (int r = 0; r < 2; ++r) non.push_back({"random-" + std::to_string(r), random_plane(3)});
            const bool co = kit.kind() == CalibrationCase::Coassociative;
            for (auto& [id, m] : cal) {
                if (!co) {
                    add("assoc-" + id, m, true);
                } else {
                    Mat c = complement(m);
                    // Fix orientation so that psi is +1 on the plane.
                    if (evaluate(kit.coassociative_form, gram_schmidt_adapt(c, kit.metric).tangent()) < 0)
                        c.col(0) *= -1.0;
                    add("coassoc-perp-" + id, c, true);
                }
            }
            for (auto& [id, m] : non) add((co ? "perp-" : "") + id, co ? complement(m) : m, false);
            break;
        }
        case CalibrationCase::Cayley: {
            auto cay = [&](const Vec& x, const Vec& y, const Vec& z) {
                return cols({x, y, z, cayley_cross(kit, x, y, z)});
            };
            add("cayley-e1234", cay(e(0), e(1), e(2)), true);
            add("cayley-e125", cay(e(0), e(1), e(4)), true);
            add("cayley-e567", cay(e(4), e(5), e(6)), true);
            add("cayley-mixed", cay(e(0) + e(4), e(1) - e(7), e(2) + e(5)), true);
            for (int r = 0; r < 2; ++r) add("cayley-random-" + std::to_string(r), cay(rnd(), rnd(), rnd()), true);
            add("e1235", coord({0, 1, 2, 4}), false);
            add("e1257", coord({0, 1, 4, 6}), false);
            add("e1356", coord({0, 2, 4, 5}), false);
            add("tilted-0.5", tilt(cay(e(0), e(1), e(2)), e(7), 0.5), false);
            for (int r = 0; r < 2; ++r) add("random-" + std::to_string(r), random_plane(4), false);
            break;
        }
    }
    return out;
}

}  // namespace caliblab
