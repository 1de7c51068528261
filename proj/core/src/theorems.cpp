#include "caliblab/theorems.hpp"

#include <cmath>
#include <stdexcept>

namespace caliblab {

namespace {

// Evaluates fn at every node into `width` slots; returns per-node rows in node order.
struct NodeTable {
    std::vector<QuadratureNode> nodes;
    std::vector<std::vector<double>> rows;

    double weighted_sum(int col) const {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += nodes[i].weight * rows[i][col];
        return s;
    }
    double max_abs(int col) const {
        double m = 0.0;
        for (const auto& r : rows) m = std::max(m, std::abs(r[col]));
        return m;
    }
};

NodeTable tabulate(const QuadratureRule& rule, const Box& box, int width,
                   const std::function<void(const Vec&, std::vector<double>&)>& fn) {
    NodeTable t;
    t.nodes = tensor_nodes(rule, box);
    t.rows.assign(t.nodes.size(), std::vector<double>(width, 0.0));
    parallel_for(t.nodes.size(), [&](std::size_t i) { fn(t.nodes[i].x, t.rows[i]); });
    return t;
}

double factorial(int k) {
    double r = 1;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
}

}  // namespace

double calibration_residual(const Patch& patch, const Background& bg, const QuadratureRule& rule) {
    const MetricField gbar = bg.metric_field();
    const auto t = tabulate(rule, patch.box(), 1, [&](const Vec& x, std::vector<double>& row) {
        const Vec y = patch.point(x);
        const Mat T = orthonormal_tangent(patch.jacobian(x), gbar(y));
        row[0] = std::abs(evaluate(bg.calibration(y), T)) - 1.0;
    });
    return t.max_abs(0);
}

TheoremVerdict theorem_A_experiment(const Patch& patch, const VariationFamily& fam, const QuadratureRule& rule,
                                    const TheoremAOptions& opt) {
    const Background& bg = *fam.background;
    const StructureKit& kit = bg.kit;
    if (patch.ambient_dim() != kit.n || patch.domain_dim() != kit.calibrated_dim)
        throw std::invalid_argument("patch " + patch.id() + " has the wrong dimensions for " + case_name(kit.kind()));
    if (calibration_residual(patch, bg, rule) > 1e-8)
        throw std::invalid_argument("patch " + patch.id() + " is not calibrated for " + case_name(kit.kind()));

    const MetricField gbar = bg.metric_field();
    const bool um = kit.kind() == CalibrationCase::AlmostComplex;
    const int kc = kit.descriptor.k;
    const bool torsion_term = um && kc >= 2;
    const bool cayley = kit.kind() == CalibrationCase::Cayley;

    // columns: integrand, stokes integrand, pointwise residual, condition integrand
    const auto t = tabulate(rule, patch.box(), 4, [&](const Vec& x, std::vector<double>& row) {
        const Vec y = patch.point(x);
        const Mat J = patch.jacobian(x);
        const Mat G = gbar(y).matrix();
        const Mat g = J.transpose() * G * J;
        const double vol = std::sqrt(std::max(0.0, g.determinant()));
        const double half_tr = 0.5 * g.ldlt().solve(J.transpose() * fam.h_field(y).matrix() * J).trace();
        const Mat T = orthonormal_tangent(J, SymTensor2(G));
        const double orient = evaluate(bg.calibration(y), T) >= 0 ? 1.0 : -1.0;
        const KForm mudot = fam.calibration_velocity(y);
        row[0] = half_tr * vol;
        row[1] = orient * evaluate(mudot, J);
        row[2] = half_tr - orient * evaluate(mudot, T);
        if (torsion_term) {
            KForm w = wedge(fam.generator(y), bg.d_kahler_form(y));
            const KForm om = bg.kahler_form(y);
            for (int i = 0; i < kc - 2; ++i) w = wedge(w, om);
            row[3] = orient * evaluate(w, J) / factorial(kc - 2);
        } else if (cayley) {
            row[3] = orient * evaluate(hodge_star(fam.generator_d(y)), J);
        }
    });

    TheoremVerdict v;
    v.kind = kit.kind();
    v.patch_id = patch.id();
    v.tol_point = opt.tol_point;
    v.tol_int = opt.tol_int;
    v.first_variation = t.weighted_sum(0);
    v.stokes_integral = t.weighted_sum(1);
    v.pointwise_residual = t.max_abs(2);
    if (torsion_term || cayley) v.condition_integral = t.weighted_sum(3);

    if (torsion_term) {
        v.claim = "first variation equals int alpha dot ^ d omega ^ omega^{k-2}/(k-2)!";
        v.predicted = *v.condition_integral;
    } else if (cayley && fam.keep_scalar_part) {
        v.claim = "pointwise identity with the scalar part of d gamma dot kept";
        v.note = "first variation not predicted when the Omega^4_1 part is kept";
    } else if (cayley) {
        v.claim = "first variation equals -1/2 int *(d gamma dot)|_M";
        v.predicted = -0.5 * *v.condition_integral;
    } else {
        v.claim = "first variation vanishes";
        v.predicted = 0.0;
    }

    if (opt.finite_difference) {
        if (!fam.gbar_at) throw std::invalid_argument("family has no nonlinear metric evaluator");
        const auto r = fd_derivative(
            [&](double s) {
                return volume(patch, [&](const Vec& y) { return fam.gbar_at(y, s); }, rule);
            },
            0.0, opt.fd_step, opt.fd_levels);
        v.fd_first_variation = r.value;
        v.fd_error_estimate = r.error_estimate;
    }

    bool ok = v.pointwise_residual <= opt.tol_point;
    ok = ok && std::abs(v.stokes_integral - v.first_variation) <= opt.tol_int;
    if (v.predicted) ok = ok && std::abs(v.first_variation - *v.predicted) <= opt.tol_int;
    if (v.fd_first_variation) ok = ok && std::abs(*v.fd_first_variation - v.first_variation) <= opt.tol_int;
    v.pass = ok;
    return v;
}

// ---------------------------------------------------------------- theorem B

double theorem_B_closed_form(const StructureKit& kit, const Mat& T, const Vec& V, const Vec& W) {
    const int n = kit.n;
    const int k = static_cast<int>(T.cols());
    const Mat N = Mat::Identity(n, n) - T * T.transpose();
    double s = 0.0;
    for (int a = 0; a < k; ++a) {
        switch (kit.kind()) {
            case CalibrationCase::AlmostComplex: s -= (N * kit.complex_structure * T.col(a)).squaredNorm(); break;
            case CalibrationCase::Associative: s -= (N * cross_2fold(kit, V, T.col(a))).squaredNorm(); break;
            case CalibrationCase::Coassociative: s += (N * chi_3fold(kit, V, W, T.col(a))).squaredNorm(); break;
            case CalibrationCase::Cayley: s += 0.5 * (N * cayley_cross(kit, V, W, T.col(a))).squaredNorm(); break;
        }
    }
    return s;
}

namespace {

// Tr_g h of the test variation at a node with orthonormal tangent frame T.
double test_trace(const Background& bg, const Vec& y, const Mat& T, const Vec& V, const Vec& W, bool keep_scalar,
                  KForm* dgen_out = nullptr) {
    const StructureKit& kit = bg.kit;
    const int n = kit.n;
    const Mat N = Mat::Identity(n, n) - T * T.transpose();
    KForm vel = test_generator_derivative(kit, V, W, N);
    if (dgen_out) *dgen_out = vel;
    if (kit.kind() == CalibrationCase::Cayley) {
        const auto s = sp7_split_4form(vel, kit);
        vel = s.part_35 + s.part_7;
        if (keep_scalar) vel += s.part_1;
    }
    const Mat h = h_from_velocity(bg, y, vel).matrix();
    return (T.transpose() * h * T).trace();
}

}  // namespace

TheoremBChain theorem_B_chain(const StructureKit& kit, const Patch& patch, const QuadratureRule& rule,
                              const TheoremBOptions& opt) {
    if (patch.ambient_dim() != kit.n || patch.domain_dim() != kit.calibrated_dim)
        throw std::invalid_argument("patch " + patch.id() + " has the wrong dimensions for " + case_name(kit.kind()));
    const int k = kit.calibrated_dim;
    Vec vc = opt.v_coeffs.size() ? opt.v_coeffs : Vec(Vec::Unit(k, 0));
    Vec wc = opt.w_coeffs.size() ? opt.w_coeffs : Vec(Vec::Unit(k, std::min(1, k - 1)));
    if (vc.size() != k || wc.size() != k) throw std::invalid_argument("tangent coefficients must have length k");
    const Background bg = flat_background(kit);
    const MetricField gbar = euclidean_metric(kit.n);
    const bool cayley = kit.kind() == CalibrationCase::Cayley;

    // columns: tr*vol, closed*vol, chain residual, star restriction, anomaly residual, anomaly*vol, vol
    const auto t = tabulate(rule, patch.box(), 7, [&](const Vec& x, std::vector<double>& row) {
        const Vec y = patch.point(x);
        const Mat J = patch.jacobian(x);
        const double vol = std::sqrt(std::max(0.0, (J.transpose() * J).determinant()));
        const Mat T = orthonormal_tangent(J, SymTensor2::identity(kit.n));
        const Vec V = T * vc, W = T * wc;
        KForm dgen;
        const double tr = test_trace(bg, y, T, V, W, false, &dgen);
        const double closed = theorem_B_closed_form(kit, T, V, W);
        row[0] = 0.5 * tr * vol;
        row[1] = 0.5 * closed * vol;
        row[2] = tr - closed;
        row[6] = vol;
        if (cayley) {
            row[3] = evaluate(hodge_star(dgen), T);
            const double tr_keep = test_trace(bg, y, T, V, W, true);
            const double vw = V.squaredNorm() * W.squaredNorm() - std::pow(V.dot(W), 2);
            row[4] = 0.5 * (tr_keep - tr) - (2.0 / 7.0) * vw;
            row[5] = 0.5 * (tr_keep - tr) * vol;
        }
    });
    TheoremBChain c;
    c.first_variation = t.weighted_sum(0);
    c.closed_form_first_variation = t.weighted_sum(1);
    c.max_chain_residual = t.max_abs(2);
    c.max_star_restriction = t.max_abs(3);
    c.max_anomaly_residual = t.max_abs(4);
    const double total_vol = t.weighted_sum(6);
    c.mean_anomaly = total_vol > 0 ? t.weighted_sum(5) / total_vol : 0.0;
    return c;
}

namespace {

// Canonical (V, W) index choices for the defect.
std::vector<std::pair<int, int>> canonical_choices(const StructureKit& kit) {
    const int k = kit.calibrated_dim;
    std::vector<std::pair<int, int>> out;
    switch (kit.kind()) {
        case CalibrationCase::AlmostComplex: out.push_back({0, 0}); break;
        case CalibrationCase::Associative:
            for (int a = 0; a < k; ++a) out.push_back({a, a});
            break;
        case CalibrationCase::Coassociative:
        case CalibrationCase::Cayley:
            for (int a = 0; a < k; ++a)
                for (int b = a + 1; b < k; ++b) out.push_back({a, b});
            break;
    }
    return out;
}

}  // namespace

double theorem_B_defect(const StructureKit& kit, const Patch& patch, const QuadratureRule& rule) {
    if (patch.ambient_dim() != kit.n || patch.domain_dim() != kit.calibrated_dim)
        throw std::invalid_argument("patch " + patch.id() + " has the wrong dimensions for " + case_name(kit.kind()));
    const auto choices = canonical_choices(kit);
    return integrate(rule, patch.box(), [&](const Vec& x) {
        const Mat J = patch.jacobian(x);
        const double vol = std::sqrt(std::max(0.0, (J.transpose() * J).determinant()));
        const Mat T = orthonormal_tangent(J, SymTensor2::identity(kit.n));
        double s = 0.0;
        for (auto [a, b] : choices) s += std::abs(theorem_B_closed_form(kit, T, T.col(a), T.col(b)));
        if (kit.kind() == CalibrationCase::Cayley) s *= 2.0;
        return s * vol;
    });
}

double theorem_B_total_first_variation(const StructureKit& kit, const Patch& patch, const QuadratureRule& rule) {
    const auto choices = canonical_choices(kit);
    const Background bg = flat_background(kit);
    return integrate(rule, patch.box(), [&](const Vec& x) {
        const Mat J = patch.jacobian(x);
        const double vol = std::sqrt(std::max(0.0, (J.transpose() * J).determinant()));
        const Mat T = orthonormal_tangent(J, SymTensor2::identity(kit.n));
        const Vec y = patch.point(x);
        double s = 0.0;
        for (auto [a, b] : choices) s += test_trace(bg, y, T, T.col(a), T.col(b), false);
        return 0.5 * s * vol;
    });
}

// ------------------------------------------------------------- minimal flow

FlowVariation minimal_flow_experiment(const Patch& patch, const VectorFieldFn& X, const JacobianFn& DX,
                                      const QuadratureRule& rule, double fd_step, int fd_levels) {
    const int n = patch.ambient_dim();
    const int k = patch.domain_dim();
    FlowVariation out;
    // gbar_t = (I + t DX)^T (I + t DX) has d/dt = L_X gbar at t = 0.
    const auto r = fd_derivative(
        [&](double t) {
            return volume(
                patch,
                [&](const Vec& y) {
                    const Mat A = Mat::Identity(n, n) + t * DX(y);
                    return SymTensor2(A.transpose() * A);
                },
                rule);
        },
        0.0, fd_step, fd_levels);
    out.fd_first_variation = r.value;
    out.fd_error_estimate = r.error_estimate;

    auto sqrt_g_xi = [&](const Vec& x) -> Vec {
        const Mat J = patch.jacobian(x);
        const Mat g = J.transpose() * J;
        return std::sqrt(g.determinant()) * g.ldlt().solve(J.transpose() * X(patch.point(x)));
    };
    const double h = 1e-5;
    const auto t = tabulate(rule, patch.box(), 3, [&](const Vec& x, std::vector<double>& row) {
        const Vec y = patch.point(x);
        const Mat J = patch.jacobian(x);
        const Mat g = J.transpose() * J;
        const double vol = std::sqrt(g.determinant());
        const Mat D = DX(y);
        const double half_tr = 0.5 * g.ldlt().solve(J.transpose() * (D + D.transpose()) * J).trace();
        double div = 0.0;
        for (int a = 0; a < k; ++a) {
            Vec xp = x, xm = x;
            xp[a] += h;
            xm[a] -= h;
            div += (sqrt_g_xi(xp)[a] - sqrt_g_xi(xm)[a]) / (2 * h);
        }
        div /= vol;
        const Vec Xv = X(y);
        const Vec Xperp = normal_projector(patch, x) * Xv;
        const double rhs = div - Xperp.dot(mean_curvature(patch, x));
        row[0] = half_tr * vol;
        row[1] = rhs * vol;
        row[2] = half_tr - rhs;
    });
    out.analytic = t.weighted_sum(0);
    out.divergence_route = t.weighted_sum(1);
    out.pointwise_residual = t.max_abs(2);
    return out;
}

}  // namespace caliblab
