#pragma once

#include "caliblab/patch.hpp"

#include <functional>

namespace caliblab {

using MetricField = std::function<SymTensor2(const Vec&)>;
MetricField euclidean_metric(int n);

// u^* gbar at parameter x (k x k).
SymTensor2 induced_metric(const Patch& patch, const MetricField& gbar, const Vec& x);

double volume(const Patch& patch, const MetricField& gbar, const QuadratureRule& rule);

// Frame adapted to the patch at x: tangent block from Gram-Schmidt on the
// partials in parameter order, orthonormal for gbar.
OrientedFrame tangent_frame(const Patch& patch, const MetricField& gbar, const Vec& x);

struct TangentNormal {
    Vec tangent;
    Vec normal;
};
TangentNormal tangent_normal_split(const Patch& patch, const MetricField& gbar, const Vec& x, const Vec& v);

// Projection onto the Euclidean normal space at x.
Mat normal_projector(const Patch& patch, const Vec& x);

// Mean curvature vector (trace of the second fundamental form) for the
// Euclidean metric; the unit sphere has |H| = 2 pointing inwards.
Vec mean_curvature(const Patch& patch, const Vec& x);

struct ClosestPoint {
    Vec x;  // parameter
    Vec point;
    int iterations = 0;
};

// Nearest point on the patch by Newton iteration on |u(x) - y|^2 /2 (Gauss-
// Newton step plus the curvature term), seeded from the nearest point of a
// coarse parameter grid or from `seed` if given.
ClosestPoint closest_point(const Patch& patch, const Vec& y, const Vec* seed = nullptr, double tol = 1e-12,
                           int max_iter = 50);

// F = dist^2 / 2 to the patch. Along the patch the 2-jet is exact: F = 0,
// grad F = 0, Hess F = normal projector.
struct DistanceJet {
    double value = 0.0;
    Vec gradient;
    Mat hessian;
};
DistanceJet jet_of_F(const Patch& patch, const Vec& x);

// Off the patch, from the closest-point map: grad F(y) = y - closest(y).
Vec distance_gradient(const Patch& patch, const Vec& y, const Vec* seed = nullptr);
// Central differences of distance_gradient.
Mat distance_hessian_numeric(const Patch& patch, const Vec& y, double step = 1e-5);

struct FdResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

// Central differences at steps h 2^j (j = 0..levels) combined by Richardson
// extrapolation. f must be defined on t0 +- step 2^levels.
FdResult fd_derivative(const std::function<double(double)>& f, double t0, double step = 1e-4, int levels = 2);

}  // namespace caliblab
