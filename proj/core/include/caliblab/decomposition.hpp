#pragma once

#include "caliblab/structure.hpp"

namespace caliblab {

// eta = eta_{1+27} + eta_7 with eta_{1+27} = 1/2 h_ij e_i ^ (e_j _| phi) and
// eta_7 = 1/2 X _| psi.
struct G2ThreeFormSplit {
    KForm part_1_27;
    KForm part_7;
    SymTensor2 h;
    Vec X;
};

// rho = rho_{1+27} + rho_7 with rho_{1+27} = 1/2 h_ij e_i ^ (e_j _| psi) and
// rho_7 = 1/2 X ^ phi.
struct G2FourFormSplit {
    KForm part_1_27;
    KForm part_7;
    SymTensor2 h;
    Vec X;
};

// sigma = sigma_1 + sigma_35 + sigma_7 + sigma_27 on R^8. h reconstructs
// sigma_1 + sigma_35, the trace-free h0 reconstructs sigma_35 alone, and
// beta (in the 7-dimensional piece of 2-forms) reconstructs sigma_7.
struct Spin7FourFormSplit {
    KForm part_1;
    KForm part_35;
    KForm part_7;
    KForm part_27;
    SymTensor2 h;
    SymTensor2 h0;
    Mat beta;
};

G2ThreeFormSplit g2_split_3form(const KForm& eta, const StructureKit& kit);
G2FourFormSplit g2_split_4form(const KForm& rho, const StructureKit& kit);
Spin7FourFormSplit sp7_split_4form(const KForm& sigma, const StructureKit& kit);

// Projection onto the 35 + 7 part, dropping the scalar and 27 components.
KForm project_35_7(const KForm& sigma, const StructureKit& kit);

// 1/2 A_ij e_i ^ (e_j _| T) for an arbitrary n x n matrix A, with the slot
// contractions e_j _| T given.
KForm slot_reconstruct(const Mat& A, const std::vector<KForm>& slots);

// Contraction hat(a)_pq = a_{p i...} T_{q i...} against a skew tensor given by
// its nonzero entries.
Mat hat_contraction(const KForm& a, const std::vector<SkewEntry>& entries);

struct MetricFromThreeForm {
    SymTensor2 metric;
    double volume_scale = 0.0;  // sqrt(det g)
};

// Metric determined by a positive 3-form on R^7 through
// (X _| phi) ^ (Y _| phi) ^ phi = -6 g(X, Y) vol_g (the sign fits the orientation of
// the standard phi). Throws if the 3-form is not positive.
MetricFromThreeForm metric_from_3form(const KForm& phi);

}  // namespace caliblab
