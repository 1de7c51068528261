#include "caliblab/variation.hpp"

#include <cmath>
#include <stdexcept>

namespace caliblab {

// --------------------------------------------------------------- background

double Background::scale(const Vec& y) const { return std::exp(conformal.value(y)); }

SymTensor2 Background::metric(const Vec& y) const {
    const double s = scale(y);
    return SymTensor2(s * s * Mat::Identity(kit.n, kit.n));
}

MetricField Background::metric_field() const {
    auto self = *this;
    return [self](const Vec& y) { return self.metric(y); };
}

KForm Background::kahler_form(const Vec& y) const {
    const double s = scale(y);
    return (s * s) * kit.kahler_form;
}

KForm Background::d_kahler_form(const Vec& y) const {
    const double s = scale(y);
    KForm df(kit.n, 1);
    const Vec g = conformal.gradient(y);
    for (int i = 0; i < kit.n; ++i) df.coeff(i) = g[i];
    return (2.0 * s * s) * wedge(df, kit.kahler_form);
}

KForm Background::calibration(const Vec& y) const {
    return std::pow(scale(y), kit.calibration.degree()) * kit.calibration;
}

Background flat_background(const StructureKit& kit) { return Background{kit, TrigPolynomial(kit.n)}; }

Background conformal_background(const StructureKit& kit, TrigPolynomial f) {
    if (f.dim() != kit.n) throw std::invalid_argument("conformal factor dimension mismatch");
    return Background{kit, std::move(f)};
}

// ------------------------------------------------------------ h from forms

namespace {

Mat two_form_matrix(const KForm& b) {
    const int n = b.ambient_dim();
    Mat D(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) D(i, j) = b.component({i, j});
    return D;
}

KForm matrix_two_form(const Mat& D) {
    const int n = static_cast<int>(D.rows());
    KForm b(n, 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) b.add_component({i, j}, D(i, j));
    return b;
}

}  // namespace

KForm type_11_part(const KForm& b, const Mat& J) {
    const Mat D = two_form_matrix(b);
    // b(JX, JY) = X^T J^T D J Y
    return matrix_two_form(0.5 * (D + J.transpose() * D * J));
}

SymTensor2 h_from_velocity(const Background& bg, const Vec& y, const KForm& velocity) {
    const StructureKit& kit = bg.kit;
    switch (kit.kind()) {
        case CalibrationCase::AlmostComplex: {
            // h(X, Y) = (da(X, JY) + da(Y, JX)) / 2
            const Mat DJ = two_form_matrix(velocity) * kit.complex_structure;
            return SymTensor2(0.5 * (DJ + DJ.transpose()));
        }
        case CalibrationCase::Associative: {
            // Frame components are coordinate ones over s^3; h picks up s^2.
            return SymTensor2(g2_split_3form(velocity, kit).h.matrix() / bg.scale(y));
        }
        case CalibrationCase::Coassociative: {
            const double s = bg.scale(y);
            return SymTensor2(g2_split_4form(velocity, kit).h.matrix() / (s * s));
        }
        case CalibrationCase::Cayley: {
            const double s = bg.scale(y);
            return SymTensor2(sp7_split_4form(velocity, kit).h.matrix() / (s * s));
        }
    }
    throw std::logic_error("unreachable");
}

// ----------------------------------------------------------------- families

int generator_degree(CalibrationCase c) {
    switch (c) {
        case CalibrationCase::AlmostComplex: return 1;
        case CalibrationCase::Associative: return 2;
        case CalibrationCase::Coassociative:
        case CalibrationCase::Cayley: return 3;
    }
    return 0;
}

namespace {

void check_generator(const Background& bg, const TrigFormField& g, CalibrationCase expected) {
    if (bg.kit.kind() != expected) throw std::invalid_argument("background kit does not match the family's case");
    if (g.ambient_dim() != bg.kit.n || g.degree() != generator_degree(expected))
        throw std::invalid_argument("generator has the wrong dimension or degree for " + case_name(expected));
}

VariationFamily base_family(const Background& bg, const TrigFormField& g) {
    VariationFamily f;
    f.kind = bg.kit.kind();
    f.background = std::make_shared<const Background>(bg);
    f.generator = [g](const Vec& y) { return g.value(y); };
    f.generator_d = [g](const Vec& y) { return g.exterior_derivative(y); };
    return f;
}

}  // namespace

VariationFamily um_family_from_alpha(const Background& bg, const TrigFormField& alpha_dot) {
    check_generator(bg, alpha_dot, CalibrationCase::AlmostComplex);
    VariationFamily f = base_family(bg, alpha_dot);
    auto B = f.background;
    const int k = bg.kit.descriptor.k;
    f.calibration_velocity = [B, alpha_dot, k](const Vec& y) {
        KForm out = alpha_dot.exterior_derivative(y);
        const KForm w = B->kahler_form(y);
        double fact = 1.0;
        for (int i = 1; i < k; ++i) {
            out = wedge(out, w);
            fact *= i;
        }
        return (1.0 / fact) * out;
    };
    f.h_field = [B, alpha_dot](const Vec& y) { return h_from_velocity(*B, y, alpha_dot.exterior_derivative(y)); };
    f.gbar_at = [B, alpha_dot](const Vec& y, double t) {
        const Mat& J = B->kit.complex_structure;
        const KForm wt = B->kahler_form(y) + t * type_11_part(alpha_dot.exterior_derivative(y), J);
        return SymTensor2(two_form_matrix(wt) * J);
    };
    return f;
}

VariationFamily assoc_family_from_beta(const Background& bg, const TrigFormField& beta_dot) {
    check_generator(bg, beta_dot, CalibrationCase::Associative);
    VariationFamily f = base_family(bg, beta_dot);
    auto B = f.background;
    f.calibration_velocity = [beta_dot](const Vec& y) { return beta_dot.exterior_derivative(y); };
    f.h_field = [B, beta_dot](const Vec& y) { return h_from_velocity(*B, y, beta_dot.exterior_derivative(y)); };
    f.gbar_at = [B, beta_dot](const Vec& y, double t) {
        const KForm phi = std::pow(B->scale(y), 3) * B->kit.associative_form;
        return metric_from_3form(phi + t * beta_dot.exterior_derivative(y)).metric;
    };
    return f;
}

VariationFamily coassoc_family_from_gamma(const Background& bg, const TrigFormField& gamma_dot) {
    check_generator(bg, gamma_dot, CalibrationCase::Coassociative);
    VariationFamily f = base_family(bg, gamma_dot);
    auto B = f.background;
    f.calibration_velocity = [gamma_dot](const Vec& y) { return gamma_dot.exterior_derivative(y); };
    f.h_field = [B, gamma_dot](const Vec& y) { return h_from_velocity(*B, y, gamma_dot.exterior_derivative(y)); };
    return f;
}

VariationFamily cayley_family_from_gamma(const Background& bg, const TrigFormField& gamma_dot, bool keep_scalar_part) {
    check_generator(bg, gamma_dot, CalibrationCase::Cayley);
    VariationFamily f = base_family(bg, gamma_dot);
    f.keep_scalar_part = keep_scalar_part;
    auto B = f.background;
    // pi_{35+7} commutes with the conformal rescaling on 4-forms in dimension 8,
    // so it can be applied to coordinate components directly.
    auto sigma = [B, gamma_dot, keep_scalar_part](const Vec& y) {
        const auto s = sp7_split_4form(gamma_dot.exterior_derivative(y), B->kit);
        KForm out = s.part_35 + s.part_7;
        if (keep_scalar_part) out += s.part_1;
        return out;
    };
    f.calibration_velocity = sigma;
    f.h_field = [B, sigma](const Vec& y) { return h_from_velocity(*B, y, sigma(y)); };
    return f;
}

VariationFamily family_from_generator(const Background& bg, const TrigFormField& g, bool keep_scalar_part) {
    switch (bg.kit.kind()) {
        case CalibrationCase::AlmostComplex: return um_family_from_alpha(bg, g);
        case CalibrationCase::Associative: return assoc_family_from_beta(bg, g);
        case CalibrationCase::Coassociative: return coassoc_family_from_gamma(bg, g);
        case CalibrationCase::Cayley: return cayley_family_from_gamma(bg, g, keep_scalar_part);
    }
    throw std::logic_error("unreachable");
}

// -------------------------------------------------------- first variation

double half_trace(const Patch& patch, const MetricField& gbar, const SymTensor2& h, const Vec& x) {
    const Mat J = patch.jacobian(x);
    const Mat g = J.transpose() * gbar(patch.point(x)).matrix() * J;
    const Mat uh = J.transpose() * h.matrix() * J;
    return 0.5 * g.ldlt().solve(uh).trace();
}

double half_trace_h(const Patch& patch, const VariationFamily& fam, const Vec& x) {
    return half_trace(patch, fam.background->metric_field(), fam.h_field(patch.point(x)), x);
}

double analytic_first_variation(const Patch& patch, const VariationFamily& fam, const QuadratureRule& rule) {
    if (patch.ambient_dim() != fam.background->kit.n) throw std::invalid_argument("patch and family differ in dimension");
    const MetricField gbar = fam.background->metric_field();
    return integrate(rule, patch.box(), [&](const Vec& x) {
        const Vec y = patch.point(x);
        const Mat J = patch.jacobian(x);
        const Mat g = J.transpose() * gbar(y).matrix() * J;
        const Mat uh = J.transpose() * fam.h_field(y).matrix() * J;
        return 0.5 * g.ldlt().solve(uh).trace() * std::sqrt(std::max(0.0, g.determinant()));
    });
}

// ----------------------------------------------------------- test variations

namespace {

Vec triple(const StructureKit& kit, const Vec& a, const Vec& b, const Vec& c) {
    return kit.kind() == CalibrationCase::Cayley ? cayley_cross(kit, a, b, c) : chi_3fold(kit, a, b, c);
}

KForm one_form(const Vec& v) {
    KForm f(static_cast<int>(v.size()), 1);
    for (int i = 0; i < v.size(); ++i) f.coeff(i) = v[i];
    return f;
}

}  // namespace

KForm test_generator_value(const StructureKit& kit, const Vec& V, const Vec& W, const Vec& gradF) {
    switch (kit.kind()) {
        case CalibrationCase::AlmostComplex: return one_form(kit.complex_structure.transpose() * gradF);
        case CalibrationCase::Associative: return wedge(one_form(V), one_form(cross_2fold(kit, V, gradF)));
        case CalibrationCase::Coassociative:
        case CalibrationCase::Cayley:
            return wedge(wedge(one_form(V), one_form(W)), one_form(triple(kit, V, W, gradF)));
    }
    throw std::logic_error("unreachable");
}

KForm test_generator_derivative(const StructureKit& kit, const Vec& V, const Vec& W, const Mat& N) {
    const int n = kit.n;
    switch (kit.kind()) {
        case CalibrationCase::AlmostComplex: {
            // d alpha_ij = J^p_j N_ip - J^p_i N_jp
            const Mat NJ = N * kit.complex_structure;
            return matrix_two_form(NJ - NJ.transpose());
        }
        case CalibrationCase::Associative: {
            // nabla_i beta_jk = V_k <V x e_j, N e_i> - V_j <V x e_k, N e_i>
            Mat A(n, n);
            for (int j = 0; j < n; ++j) A.col(j) = N * cross_2fold(kit, V, Vec::Unit(n, j));
            auto nb = [&](int i, int j, int k) { return V[k] * A(i, j) - V[j] * A(i, k); };
            KForm d(n, 3);
            const auto& masks = subsets(n, 3);
            for (std::size_t r = 0; r < masks.size(); ++r) {
                const auto idx = MultiIndex::from_mask(n, masks[r]).entries();
                const int i = idx[0], j = idx[1], k = idx[2];
                d.coeff(r) = nb(i, j, k) + nb(j, k, i) + nb(k, i, j);
            }
            return d;
        }
        case CalibrationCase::Coassociative:
        case CalibrationCase::Cayley: {
            // nabla_i gamma_jkl = (VW)_jk C_il + (VW)_kl C_ij + (VW)_lj C_ik,
            // C_il = <chi(V, W, N e_i), e_l>
            Mat C(n, n);
            for (int i = 0; i < n; ++i) C.row(i) = triple(kit, V, W, N.col(i)).transpose();
            const Mat VW = V * W.transpose() - W * V.transpose();
            auto ng = [&](int i, int j, int k, int l) {
                return VW(j, k) * C(i, l) + VW(k, l) * C(i, j) + VW(l, j) * C(i, k);
            };
            KForm d(n, 4);
            const auto& masks = subsets(n, 4);
            for (std::size_t r = 0; r < masks.size(); ++r) {
                const auto idx = MultiIndex::from_mask(n, masks[r]).entries();
                const int i = idx[0], j = idx[1], k = idx[2], l = idx[3];
                d.coeff(r) = ng(i, j, k, l) - ng(j, i, k, l) + ng(k, i, j, l) - ng(l, i, j, k);
            }
            return d;
        }
    }
    throw std::logic_error("unreachable");
}

KForm exterior_derivative_fd(const std::function<KForm(const Vec&)>& field, const Vec& y, double step) {
    const KForm f0 = field(y);
    const int n = f0.ambient_dim();
    std::vector<Vec> grads(f0.size(), Vec::Zero(n));
    for (int i = 0; i < n; ++i) {
        Vec yp = y, ym = y;
        yp[i] += step;
        ym[i] -= step;
        const KForm fp = field(yp), fm = field(ym);
        for (std::size_t r = 0; r < f0.size(); ++r) grads[r][i] = (fp.coeff(r) - fm.coeff(r)) / (2 * step);
    }
    return exterior_derivative_from_gradients(n, f0.degree(), grads);
}

}  // namespace caliblab
