#include "caliblab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace caliblab {

Box Box::cube(int k, double lo, double hi, bool periodic) {
    return Box{Vec::Constant(k, lo), Vec::Constant(k, hi), periodic};
}

QuadratureRule QuadratureRule::gauss_legendre(int order, int subintervals) {
    if (order < 1 || subintervals < 1) throw std::invalid_argument("quadrature order and subintervals must be positive");
    return {QuadratureKind::GaussLegendre, order, subintervals};
}

QuadratureRule QuadratureRule::periodic_trapezoid(int points) {
    if (points < 1) throw std::invalid_argument("trapezoid needs at least one point");
    return {QuadratureKind::PeriodicTrapezoid, points, 1};
}

QuadratureRule QuadratureRule::for_box(const Box& box, int order, int subintervals) {
    return box.periodic ? periodic_trapezoid(order * subintervals) : gauss_legendre(order, subintervals);
}

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
    }
    return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

void gauss_legendre_1d(int order, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(order, 0.0);
    weights.assign(order, 0.0);
    for (int i = 0; i < order; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre(order, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double dp = legendre(order, x).second;
        nodes[order - 1 - i] = x;
        weights[order - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

std::vector<QuadratureNode> tensor_nodes(const QuadratureRule& rule, const Box& box) {
    const int k = box.dim();
    if (box.hi.size() != k) throw std::invalid_argument("box bounds differ in dimension");
    std::vector<std::vector<double>> pts(k), wts(k);
    std::vector<double> gx, gw;
    if (rule.kind == QuadratureKind::GaussLegendre) gauss_legendre_1d(rule.order, gx, gw);
    for (int d = 0; d < k; ++d) {
        const double a = box.lo[d], b = box.hi[d];
        if (!(b > a)) throw std::invalid_argument("empty parameter box");
        if (rule.kind == QuadratureKind::GaussLegendre) {
            const double hsub = (b - a) / rule.subintervals;
            for (int s = 0; s < rule.subintervals; ++s) {
                const double c = a + (s + 0.5) * hsub;
                for (int i = 0; i < rule.order; ++i) {
                    pts[d].push_back(c + 0.5 * hsub * gx[i]);
                    wts[d].push_back(0.5 * hsub * gw[i]);
                }
            }
        } else {
            const int m = rule.order * rule.subintervals;
            const double h = (b - a) / m;
            for (int i = 0; i < m; ++i) {
                pts[d].push_back(a + i * h);
                wts[d].push_back(h);
            }
        }
    }
    std::vector<QuadratureNode> out;
    std::size_t total = 1;
    for (int d = 0; d < k; ++d) total *= pts[d].size();
    out.reserve(total);
    std::vector<std::size_t> idx(k, 0);
    for (std::size_t t = 0; t < total; ++t) {
        QuadratureNode node{Vec(k), 1.0};
        for (int d = 0; d < k; ++d) {
            node.x[d] = pts[d][idx[d]];
            node.weight *= wts[d][idx[d]];
        }
        out.push_back(std::move(node));
        for (int d = k - 1; d >= 0; --d) {
            if (++idx[d] < pts[d].size()) break;
            idx[d] = 0;
        }
    }
    return out;
}

int worker_count() {
    if (const char* env = std::getenv("CALIBLAB_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

double integrate(const QuadratureRule& rule, const Box& box, const std::function<double(const Vec&)>& f) {
    const auto nodes = tensor_nodes(rule, box);
    std::vector<double> vals(nodes.size());
    parallel_for(nodes.size(), [&](std::size_t i) { vals[i] = nodes[i].weight * f(nodes[i].x); });
    double s = 0.0;
    for (double v : vals) s += v;
    return s;
}

}  // namespace caliblab
