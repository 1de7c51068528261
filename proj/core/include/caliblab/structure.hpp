#pragma once

#include "caliblab/exterior.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace caliblab {

enum class CalibrationCase { AlmostComplex, Associative, Coassociative, Cayley };

std::string case_name(CalibrationCase c);
CalibrationCase parse_case(const std::string& name);

// For the almost-complex case `m` is the complex dimension of the ambient space
// and `k` the complex dimension of the calibrated submanifolds (1 <= k < m).
struct CaseDescriptor {
    CalibrationCase kind = CalibrationCase::Associative;
    int m = 0;
    int k = 0;
};

// hat: coefficients of a -> column-major vec of hat_contraction(a, entries).
// slot: column-major vec of A -> coefficients of slot_reconstruct(A, slots).
struct SplitMaps {
    Mat hat;
    Mat slot;
};

// Flat model of one of the four geometries on R^n with the Euclidean metric.
// Forms that do not apply to the case stay empty (degree 0 on R^0).
struct StructureKit {
    CaseDescriptor descriptor;
    int n = 0;
    int calibrated_dim = 0;

    KForm kahler_form;  // omega, U(m)
    Mat complex_structure;  // J with J(i, j) = <J e_j, e_i>
    KForm associative_form;  // phi, G2
    KForm coassociative_form;  // psi = *phi
    KForm cayley_form;  // Phi, Spin(7)
    KForm calibration;  // omega^k/k!, phi, psi or Phi

    SymTensor2 metric;
    int orientation = 1;

    // Cached expansions used by the splitting maps: all nonzero entries of the
    // skew tensors, and the slot contractions e_i _| phi, e_i _| Phi.
    std::vector<SkewEntry> associative_entries;
    std::vector<SkewEntry> coassociative_entries;
    std::vector<SkewEntry> cayley_entries;
    std::vector<KForm> associative_slots;
    std::vector<KForm> coassociative_slots;
    std::vector<KForm> cayley_slots;

    // The same contractions as dense linear maps (see SplitMaps).
    SplitMaps associative_maps;
    SplitMaps coassociative_maps;
    SplitMaps cayley_maps;

    CalibrationCase kind() const { return descriptor.kind; }
};

// Recomputes the cached expansions after the structure forms were edited.
void refresh_caches(StructureKit& kit);

StructureKit standard_kit(const CaseDescriptor& d);
inline StructureKit standard_kit(CalibrationCase c) { return standard_kit(CaseDescriptor{c, 0, 0}); }
StructureKit almost_complex_kit(int m, int k);

// Test hook: a copy of `kit` with one structure constant sign-flipped.
StructureKit corrupt_structure_constant(const StructureKit& kit);

Vec cross_2fold(const StructureKit& kit, const Vec& x, const Vec& y);
Vec chi_3fold(const StructureKit& kit, const Vec& x, const Vec& y, const Vec& z);
Vec cayley_cross(const StructureKit& kit, const Vec& x, const Vec& y, const Vec& z);

struct IdentityCheck {
    std::string name;
    std::int64_t max_violation = 0;
    long entries_checked = 0;
};

// Exact integer check of the quadratic contraction identities: the six G2
// identities for associative/coassociative kits, the two Spin(7) ones for a
// Cayley kit. The kit's structure constants are used as given.
std::vector<IdentityCheck> contraction_identity_check(const StructureKit& kit);
// G2 followed by Spin(7): all eight families on the standard kits.
std::vector<IdentityCheck> contraction_identity_check_all();

struct EqualitySweep {
    std::string name;
    double max_relative_residual = 0.0;
    int samples = 0;
};

// Random-tuple checks on the standard G2 kit:
//   associative:   phi(x,y,z)^2 + |chi(x,y,z)|^2 = |x ^ y ^ z|^2
//   coassociative: psi(x,y,z,w)^2 + |sum of phi-contractions|^2 = |x ^ y ^ z ^ w|^2
// Residuals are relative to 1 + |...|^2.
std::vector<EqualitySweep> cross_product_equalities(int samples, std::uint64_t seed);

struct CalibrationReport {
    double value = 0.0;  // mu on the oriented orthonormal tangent frame
    double defect = 0.0;  // cross-product invariance defect
    bool is_calibrated = false;
    OrientedFrame frame;
};

inline constexpr double kTolCalib = 1e-8;

CalibrationReport calibration_report(const StructureKit& kit, const Mat& tangent_basis,
                                     double tol_calib = kTolCalib);

// Cross-product invariance defect of the plane spanned by the orthonormal
// columns of `tangent`:
//   U(m):    sum_a |(J e_a)^perp|^2
//   assoc:   sum_{a<b} |(e_a x e_b)^perp|^2
//   coassoc: sum_{a<b<c} |chi(e_a, e_b, e_c)^perp|^2
//   Cayley:  sum_{a<b<c} |P(e_a, e_b, e_c)^perp|^2
double invariance_defect(const StructureKit& kit, const Mat& tangent);

// Largest |mu| over random calibrated_dim-planes followed by a few projected
// gradient ascent steps. Deterministic in the seed; `extra_planes` are
// included in the sample set.
double comass_sample(const StructureKit& kit, int trials, std::uint64_t seed,
                     const std::vector<Mat>& extra_planes = {});

struct CatalogPlane {
    std::string id;
    Mat basis;  // n x calibrated_dim
    bool calibrated_by_construction = false;
};

// Fixed catalog: at least six calibrated planes (built by closing under the
// relevant cross product) and six non-calibrated ones per case.
std::vector<CatalogPlane> plane_catalog(const StructureKit& kit, std::uint64_t seed = 11);

}  // namespace caliblab
