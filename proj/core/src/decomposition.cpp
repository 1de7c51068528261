#include "caliblab/decomposition.hpp"

#include <cmath>
#include <stdexcept>

namespace caliblab {

namespace {

void require_g2(const StructureKit& kit) {
    if (kit.associative_form.degree() != 3) throw std::invalid_argument("G2 splitting needs a G2 kit");
}

void require_spin7(const StructureKit& kit) {
    if (kit.cayley_form.degree() != 4) throw std::invalid_argument("Spin(7) splitting needs a Spin(7) kit");
}

void require_shape(const KForm& a, int n, int k, const char* what) {
    if (a.ambient_dim() != n || a.degree() != k) throw std::invalid_argument(what);
}

Mat fast_hat(const KForm& a, const SplitMaps& m) {
    const int n = a.ambient_dim();
    const Vec v = m.hat * Eigen::Map<const Vec>(a.coeffs().data(), a.size());
    return Eigen::Map<const Mat>(v.data(), n, n);
}

KForm fast_slot(const Mat& A, const SplitMaps& m, int k) {
    const int n = static_cast<int>(A.rows());
    const Vec v = m.slot * Eigen::Map<const Vec>(A.data(), n * n);
    KForm out(n, k);
    for (std::size_t r = 0; r < out.size(); ++r) out.coeff(r) = v[r];
    return out;
}

}  // namespace

Mat hat_contraction(const KForm& a, const std::vector<SkewEntry>& entries) {
    const int n = a.ambient_dim();
    const int k = a.degree();
    Mat out = Mat::Zero(n, n);
    std::array<int, kMaxDim> idx{};
    for (const SkewEntry& e : entries) {
        const int q = e.idx[0];
        for (int j = 1; j < k; ++j) idx[j] = e.idx[j];
        for (int p = 0; p < n; ++p) {
            idx[0] = p;
            const double c = a.component(std::span<const int>(idx.data(), k));
            if (c != 0.0) out(p, q) += c * e.value;
        }
    }
    return out;
}

KForm slot_reconstruct(const Mat& A, const std::vector<KForm>& slots) {
    const int n = static_cast<int>(slots.size());
    KForm out(n, slots.front().degree() + 1);
    for (int i = 0; i < n; ++i) {
        KForm w(n, slots.front().degree());
        for (int j = 0; j < n; ++j)
            if (A(i, j) != 0.0) w += A(i, j) * slots[j];
        out += wedge(KForm::basis(n, {i}), w);
    }
    return 0.5 * out;
}

G2ThreeFormSplit g2_split_3form(const KForm& eta, const StructureKit& kit) {
    require_g2(kit);
    require_shape(eta, 7, 3, "g2_split_3form expects a 3-form on R^7");
    const Mat hat = fast_hat(eta, kit.associative_maps);
    const Mat I = Mat::Identity(7, 7);
    G2ThreeFormSplit s;
    s.h = SymTensor2(0.25 * (hat + hat.transpose()) - (hat.trace() / 18.0) * I);
    s.part_1_27 = fast_slot(s.h.matrix(), kit.associative_maps, 3);
    const KForm rest = eta - s.part_1_27;
    // rest = 1/2 X _| psi and psi_pijk psi_qijk = 24 delta_pq.
    s.X = Vec::Zero(7);
    for (const SkewEntry& e : kit.coassociative_entries)
        s.X[e.idx[0]] += e.value * rest.component({e.idx[1], e.idx[2], e.idx[3]});
    s.X /= 12.0;
    s.part_7 = 0.5 * interior(s.X, kit.coassociative_form);
    return s;
}

G2FourFormSplit g2_split_4form(const KForm& rho, const StructureKit& kit) {
    require_g2(kit);
    require_shape(rho, 7, 4, "g2_split_4form expects a 4-form on R^7");
    const Mat hat = fast_hat(rho, kit.coassociative_maps);
    const Mat I = Mat::Identity(7, 7);
    G2FourFormSplit s;
    s.h = SymTensor2((1.0 / 12.0) * (hat + hat.transpose()) - (hat.trace() / 48.0) * I);
    s.part_1_27 = fast_slot(s.h.matrix(), kit.coassociative_maps, 4);
    // Only the 7-part contributes to the skew part of hat: hat - hat^T = 12 X_p phi_p..
    s.X = Vec::Zero(7);
    for (const SkewEntry& e : kit.associative_entries) s.X[e.idx[0]] += e.value * hat(e.idx[1], e.idx[2]);
    s.X /= 36.0;
    KForm x1(7, 1);
    for (int i = 0; i < 7; ++i) x1.coeff(i) = s.X[i];
    s.part_7 = 0.5 * wedge(x1, kit.associative_form);
    return s;
}

Spin7FourFormSplit sp7_split_4form(const KForm& sigma, const StructureKit& kit) {
    require_spin7(kit);
    require_shape(sigma, 8, 4, "sp7_split_4form expects a 4-form on R^8");
    const Mat hat = fast_hat(sigma, kit.cayley_maps);
    const Mat I = Mat::Identity(8, 8);
    const Mat sym = (1.0 / 24.0) * (hat + hat.transpose());
    Spin7FourFormSplit s;
    s.h = SymTensor2(sym - (hat.trace() / 112.0) * I);
    s.h0 = SymTensor2(sym - (hat.trace() / 96.0) * I);
    // On the 7-dimensional piece beta_jp Phi_jpim = -6 beta_im, so the skew
    // part of hat is 96 beta.
    s.beta = (hat - hat.transpose()) / 96.0;
    s.part_35 = fast_slot(s.h0.matrix(), kit.cayley_maps, 4);
    s.part_1 = fast_slot(s.h.matrix() - s.h0.matrix(), kit.cayley_maps, 4);
    s.part_7 = fast_slot(s.beta, kit.cayley_maps, 4);
    s.part_27 = sigma - s.part_1 - s.part_35 - s.part_7;
    return s;
}

KForm project_35_7(const KForm& sigma, const StructureKit& kit) {
    const auto s = sp7_split_4form(sigma, kit);
    return s.part_35 + s.part_7;
}

MetricFromThreeForm metric_from_3form(const KForm& phi) {
    require_shape(phi, 7, 3, "metric_from_3form expects a 3-form on R^7");
    std::vector<KForm> slot(7), slot_phi(7);
    for (int i = 0; i < 7; ++i) {
        slot[i] = interior(Vec::Unit(7, i), phi);
        slot_phi[i] = wedge(slot[i], phi);
    }
    Mat B(7, 7);
    for (int i = 0; i < 7; ++i)
        for (int j = i; j < 7; ++j) B(i, j) = B(j, i) = -wedge(slot[i], slot_phi[j]).coeff(0) / 6.0;
    const double det = B.determinant();
    if (!(det > 0.0)) throw std::domain_error("3-form is not positive (degenerate or wrong orientation)");
    MetricFromThreeForm out;
    out.volume_scale = std::cbrt(std::cbrt(det));
    out.metric = SymTensor2(B / out.volume_scale);
    if (!out.metric.is_positive_definite()) throw std::domain_error("3-form does not define a positive definite metric");
    return out;
}

}  // namespace caliblab
