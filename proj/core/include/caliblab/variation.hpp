#pragma once

#include "caliblab/decomposition.hpp"
#include "caliblab/fields.hpp"
#include "caliblab/submanifold.hpp"

#include <functional>
#include <memory>

namespace caliblab {

// Flat model kit rescaled by a conformal factor: gbar = e^{2f} delta and every
// structure p-form scaled by e^{p f}. With f = 0 this is the flat kit; with f
// nonconstant the U(m) background has d omega != 0.
struct Background {
    StructureKit kit;
    TrigPolynomial conformal;  // f on R^n

    double scale(const Vec& y) const;  // e^f
    SymTensor2 metric(const Vec& y) const;
    MetricField metric_field() const;
    KForm kahler_form(const Vec& y) const;
    KForm d_kahler_form(const Vec& y) const;
    KForm calibration(const Vec& y) const;
    bool is_flat() const { return conformal.terms().empty(); }
};

Background flat_background(const StructureKit& kit);
Background conformal_background(const StructureKit& kit, TrigPolynomial f);

// Metric variation h (ambient coordinates, at y) induced by the velocity of
// the structure form: d(alpha dot) for U(m), d(beta dot) = eta for the
// associative case, rho for the coassociative case and sigma for Cayley.
SymTensor2 h_from_velocity(const Background& bg, const Vec& y, const KForm& velocity);

// (1,1) part of a 2-form: (b(X, Y) + b(JX, JY)) / 2.
KForm type_11_part(const KForm& b, const Mat& J);

struct VariationFamily {
    CalibrationCase kind = CalibrationCase::Associative;
    std::shared_ptr<const Background> background;
    std::function<KForm(const Vec&)> generator;  // alpha dot, beta dot or gamma dot
    std::function<KForm(const Vec&)> generator_d;  // its exterior derivative
    // Velocity of the calibration form seen by the first variation identity:
    // d(alpha dot) ^ omega^{k-1}/(k-1)!, d(beta dot), d(gamma dot), sigma.
    std::function<KForm(const Vec&)> calibration_velocity;
    std::function<SymTensor2(const Vec&)> h_field;
    // Nonlinear family gbar_t, only for U(m) and the associative 3-form route.
    std::function<SymTensor2(const Vec&, double)> gbar_at;
    bool keep_scalar_part = false;
};

VariationFamily um_family_from_alpha(const Background& bg, const TrigFormField& alpha_dot);
VariationFamily assoc_family_from_beta(const Background& bg, const TrigFormField& beta_dot);
VariationFamily coassoc_family_from_gamma(const Background& bg, const TrigFormField& gamma_dot);
// sigma = pi_{35+7}(d gamma dot); with keep_scalar_part the Omega^4_1 part is kept.
VariationFamily cayley_family_from_gamma(const Background& bg, const TrigFormField& gamma_dot,
                                         bool keep_scalar_part = false);

// Generic family for the kit's case.
VariationFamily family_from_generator(const Background& bg, const TrigFormField& generator,
                                      bool keep_scalar_part = false);
int generator_degree(CalibrationCase c);

// 1/2 Tr_g(u^* h) sqrt(det g) integrated over the patch, g = u^* gbar.
double analytic_first_variation(const Patch& patch, const VariationFamily& fam, const QuadratureRule& rule);
// Pointwise integrand 1/2 Tr_g(u^* h) at parameter x.
double half_trace_h(const Patch& patch, const VariationFamily& fam, const Vec& x);
double half_trace(const Patch& patch, const MetricField& gbar, const SymTensor2& h, const Vec& x);

// Test variations built from F = dist^2/2. V, W are tangent vectors at the
// point (W is ignored for U(m) and the associative case).
//   U(m):    alpha dot_j = J^p_j dF_p
//   assoc:   beta dot  = V ^ (V x grad F)
//   coassoc: gamma dot = V ^ W ^ chi(V, W, grad F)
//   Cayley:  gamma dot = V ^ W ^ P(V, W, grad F)
KForm test_generator_value(const StructureKit& kit, const Vec& V, const Vec& W, const Vec& gradF);
// Exterior derivative of the generator at a point of the patch from the 2-jet
// of F (grad F = 0, Hess F given); terms carrying grad F drop out there.
KForm test_generator_derivative(const StructureKit& kit, const Vec& V, const Vec& W, const Mat& hessF);

// Central-difference exterior derivative of an ambient form field.
KForm exterior_derivative_fd(const std::function<KForm(const Vec&)>& field, const Vec& y, double step = 1e-5);

}  // namespace caliblab
