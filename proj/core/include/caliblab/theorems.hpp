#pragma once

#include "caliblab/variation.hpp"

#include <optional>
#include <string>

namespace caliblab {

struct TheoremVerdict {
    std::string claim;
    CalibrationCase kind = CalibrationCase::Associative;
    std::string patch_id;
    double first_variation = 0.0;  // 1/2 int Tr_g h vol_g
    std::optional<double> fd_first_variation;
    std::optional<double> fd_error_estimate;
    // int mu dot|_M, the alternate route through the calibration velocity.
    double stokes_integral = 0.0;
    // Value the theorem predicts for the first variation, if any.
    std::optional<double> predicted;
    // Cayley: int *(d gamma dot)|_M. U(m), k >= 2: int alpha dot ^ d omega ^ omega^{k-2}/(k-2)!.
    std::optional<double> condition_integral;
    double pointwise_residual = 0.0;
    double tol_point = 1e-8;
    double tol_int = 1e-6;
    bool pass = false;
    std::string note;
};

struct TheoremAOptions {
    double tol_point = 1e-8;
    double tol_int = 1e-6;
    bool finite_difference = false;  // needs gbar_at
    double fd_step = 1e-4;
    int fd_levels = 2;
};

// Theorem A: calibrated patch, family from a generator. Checks the pointwise
// identity 1/2 Tr_g h vol = mu dot|_M and that the first variation matches the
// prediction (zero, or the torsion / Cayley condition term).
TheoremVerdict theorem_A_experiment(const Patch& patch, const VariationFamily& fam, const QuadratureRule& rule,
                                    const TheoremAOptions& opt = {});

// Largest | |mu(frame)| - 1 | over the quadrature nodes for the background.
double calibration_residual(const Patch& patch, const Background& bg, const QuadratureRule& rule);

struct TheoremBOptions {
    // V = sum v_a e_a, W = sum w_a e_a in the orthonormal tangent frame.
    Vec v_coeffs;
    Vec w_coeffs;
    bool keep_scalar_part = false;
    double tol_point = 1e-8;
};

struct TheoremBChain {
    double first_variation = 0.0;  // 1/2 int Tr_g h vol_g from the jet derivative
    double closed_form_first_variation = 0.0;  // 1/2 int (closed form) vol_g
    double max_chain_residual = 0.0;  // max |Tr_g h - closed form|
    double max_star_restriction = 0.0;  // Cayley: max |*(d gamma dot)(frame)|
    // Cayley: max |1/2 (Tr h with scalar part - Tr h0) - 2/7 |V ^ W|^2|
    double max_anomaly_residual = 0.0;
    double mean_anomaly = 0.0;  // Cayley: int of the 1/2 Tr difference over the volume
};

// Pointwise closed form of Tr_g h for the test variation on the plane spanned
// by the orthonormal columns of T:
//   U(m): -sum |(J e_a)^perp|^2, assoc: -sum |(V x e_a)^perp|^2,
//   coassoc: sum |chi(V, W, e_a)^perp|^2, Cayley: 1/2 sum |P(V, W, e_a)^perp|^2.
double theorem_B_closed_form(const StructureKit& kit, const Mat& T, const Vec& V, const Vec& W);

TheoremBChain theorem_B_chain(const StructureKit& kit, const Patch& patch, const QuadratureRule& rule,
                              const TheoremBOptions& opt);

// Integral of the defect integrand summed over the canonical choices V = e_a
// (assoc) or (V, W) = (e_a, e_b), a < b (coassoc, Cayley); U(m) has no choice.
// Zero exactly when the patch is calibrated.
double theorem_B_defect(const StructureKit& kit, const Patch& patch, const QuadratureRule& rule);
// Sum of the test-variation first variations over the same canonical choices.
double theorem_B_total_first_variation(const StructureKit& kit, const Patch& patch, const QuadratureRule& rule);

struct FlowVariation {
    double fd_first_variation = 0.0;
    double fd_error_estimate = 0.0;
    double analytic = 0.0;  // 1/2 int Tr_g (L_X gbar) vol_g
    double divergence_route = 0.0;  // int (div X^T - <X^perp, H>) vol_g
    double pointwise_residual = 0.0;
};

using VectorFieldFn = std::function<Vec(const Vec&)>;
using JacobianFn = std::function<Mat(const Vec&)>;

// Variation of the Euclidean volume along the flow of X.
FlowVariation minimal_flow_experiment(const Patch& patch, const VectorFieldFn& X, const JacobianFn& DX,
                                      const QuadratureRule& rule, double fd_step = 1e-4, int fd_levels = 2);

}  // namespace caliblab
