#pragma once

#include "caliblab/exterior.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace caliblab {

// Axis-aligned parameter box. A periodic box describes a closed torus patch:
// everything evaluated on it is assumed periodic in each parameter.
struct Box {
    Vec lo;
    Vec hi;
    bool periodic = false;

    int dim() const { return static_cast<int>(lo.size()); }
    static Box cube(int k, double lo, double hi, bool periodic = false);
};

enum class QuadratureKind { GaussLegendre, PeriodicTrapezoid };

struct QuadratureRule {
    QuadratureKind kind = QuadratureKind::GaussLegendre;
    int order = 8;  // points per subinterval (Gauss) or per period (trapezoid)
    int subintervals = 1;

    static QuadratureRule gauss_legendre(int order, int subintervals = 1);
    static QuadratureRule periodic_trapezoid(int points);
    // Trapezoid on periodic boxes, Gauss-Legendre otherwise.
    static QuadratureRule for_box(const Box& box, int order, int subintervals = 1);
};

struct QuadratureNode {
    Vec x;
    double weight = 0.0;
};

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre_1d(int order, std::vector<double>& nodes, std::vector<double>& weights);

std::vector<QuadratureNode> tensor_nodes(const QuadratureRule& rule, const Box& box);

// Worker threads for node evaluation: CALIBLAB_THREADS if set, otherwise the
// hardware concurrency.
int worker_count();

// Runs fn(i) for i in [0, count) on the worker pool. The first exception thrown
// by any worker is rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

// Sum of weight * f(x) over the tensor nodes. Node values are computed in
// parallel and summed in node order, so the result does not depend on scheduling.
double integrate(const QuadratureRule& rule, const Box& box, const std::function<double(const Vec&)>& f);

}  // namespace caliblab
