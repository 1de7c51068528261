#pragma once

#include "caliblab/submanifold.hpp"

namespace caliblab {

using DomainMetric = std::function<SymTensor2(const Vec&)>;
DomainMetric euclidean_domain_metric(int k);

// Map u from a k-dimensional domain (metric g) into the flat model space of
// `kit` (Euclidean metric gbar, calibration mu).
struct MapTriple {
    PatchPtr map;
    DomainMetric g;
    StructureKit kit;
};

double k_energy(const MapTriple& m, const QuadratureRule& rule);
double k_volume(const MapTriple& m, const QuadratureRule& rule);
double calibration_integral(const MapTriple& m, const QuadratureRule& rule);

// Points where pointwise residuals are sampled: the quadrature nodes plus a
// uniform interior grid with `grid` points per direction.
std::vector<Vec> sample_points(const Box& box, const QuadratureRule& rule, int grid = 5);

// sup over samples of |u^* gbar - (|du|^2 / k) g| (norm taken in a g-orthonormal basis).
double conformality_residual(const MapTriple& m, const QuadratureRule& rule);

struct SmithResidual {
    double conformality = 0.0;
    // sup |mu(du) - |du|^k vol_g / sqrt(k^k)| over the samples, in units of vol_g
    double calibration = 0.0;
};
SmithResidual smith_residual(const MapTriple& m, const QuadratureRule& rule);

// d/dt E(u, g + t h, gbar) at t = 0.
double energy_first_variation_domain(const MapTriple& m, const DomainMetric& h, const QuadratureRule& rule);
// d/dt E(u, g, gbar + t hbar) at t = 0.
double energy_first_variation_target(const MapTriple& m, const MetricField& hbar, const QuadratureRule& rule);
// Same energy evaluated with explicit domain/target metrics (for finite differences).
double k_energy_with(const MapTriple& m, const DomainMetric& g, const MetricField& gbar, const QuadratureRule& rule);

}  // namespace caliblab
