#include "caliblab/submanifold.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace caliblab {

MetricField euclidean_metric(int n) {
    const SymTensor2 id = SymTensor2::identity(n);
    return [id](const Vec&) { return id; };
}

SymTensor2 induced_metric(const Patch& patch, const MetricField& gbar, const Vec& x) {
    const Mat J = patch.jacobian(x);
    return SymTensor2(J.transpose() * gbar(patch.point(x)).matrix() * J);
}

double volume(const Patch& patch, const MetricField& gbar, const QuadratureRule& rule) {
    return integrate(rule, patch.box(), [&](const Vec& x) {
        const SymTensor2 g = induced_metric(patch, gbar, x);
        if (!g.is_positive_definite()) throw std::domain_error("volume: induced metric is not positive definite");
        return std::sqrt(g.matrix().determinant());
    });
}

OrientedFrame tangent_frame(const Patch& patch, const MetricField& gbar, const Vec& x) {
    return gram_schmidt_adapt(patch.jacobian(x), gbar(patch.point(x)));
}

TangentNormal tangent_normal_split(const Patch& patch, const MetricField& gbar, const Vec& x, const Vec& v) {
    const Mat J = patch.jacobian(x);
    const Mat G = gbar(patch.point(x)).matrix();
    const Mat g = J.transpose() * G * J;
    const Vec t = J * g.ldlt().solve(J.transpose() * G * v);
    return {t, v - t};
}

Mat normal_projector(const Patch& patch, const Vec& x) {
    const Mat J = patch.jacobian(x);
    const Mat g = J.transpose() * J;
    return Mat::Identity(patch.ambient_dim(), patch.ambient_dim()) - J * g.ldlt().solve(J.transpose());
}

Vec mean_curvature(const Patch& patch, const Vec& x) {
    const Mat J = patch.jacobian(x);
    const Mat ginv = (J.transpose() * J).inverse();
    const auto second = patch.second_derivatives(x);
    const int k = patch.domain_dim();
    Vec s = Vec::Zero(patch.ambient_dim());
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) s += ginv(a, b) * second[a * k + b];
    return normal_projector(patch, x) * s;
}

ClosestPoint closest_point(const Patch& patch, const Vec& y, const Vec* seed, double tol, int max_iter) {
    const int k = patch.domain_dim();
    Vec x;
    if (seed) {
        x = *seed;
    } else {
        const int per_dim = k <= 2 ? 12 : (k == 3 ? 7 : 5);
        double best = std::numeric_limits<double>::infinity();
        std::vector<int> idx(k, 0);
        const Box& b = patch.box();
        while (true) {
            Vec cand(k);
            for (int d = 0; d < k; ++d)
                cand[d] = b.lo[d] + (idx[d] + 0.5) * (b.hi[d] - b.lo[d]) / per_dim;
            const double dist = (patch.point(cand) - y).squaredNorm();
            if (dist < best) {
                best = dist;
                x = cand;
            }
            int d = k - 1;
            while (d >= 0 && ++idx[d] == per_dim) idx[d--] = 0;
            if (d < 0) break;
        }
    }
    for (int it = 1; it <= max_iter; ++it) {
        const Vec r = y - patch.point(x);
        const Mat J = patch.jacobian(x);
        const auto second = patch.second_derivatives(x);
        Mat H = J.transpose() * J;
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) H(a, b) -= r.dot(second[a * k + b]);
        const Vec g = J.transpose() * r;
        Eigen::LLT<Mat> llt(H);
        Vec step = llt.info() == Eigen::Success ? Vec(llt.solve(g)) : Vec((J.transpose() * J).ldlt().solve(g));
        x += step;
        if (step.norm() < tol * std::max(1.0, x.norm())) return {x, patch.point(x), it};
    }
    throw std::runtime_error("closest point iteration did not converge on patch " + patch.id());
}

DistanceJet jet_of_F(const Patch& patch, const Vec& x) {
    return {0.0, Vec::Zero(patch.ambient_dim()), normal_projector(patch, x)};
}

Vec distance_gradient(const Patch& patch, const Vec& y, const Vec* seed) {
    return y - closest_point(patch, y, seed).point;
}

Mat distance_hessian_numeric(const Patch& patch, const Vec& y, double step) {
    const int n = patch.ambient_dim();
    const Vec seed = closest_point(patch, y).x;
    Mat H(n, n);
    for (int j = 0; j < n; ++j) {
        Vec yp = y, ym = y;
        yp[j] += step;
        ym[j] -= step;
        H.col(j) = (distance_gradient(patch, yp, &seed) - distance_gradient(patch, ym, &seed)) / (2 * step);
    }
    return H;
}

FdResult fd_derivative(const std::function<double(double)>& f, double t0, double step, int levels) {
    if (!(step > 0) || levels < 0) throw std::invalid_argument("fd_derivative: step must be positive");
    const int m = std::max(levels, 1);
    std::vector<std::vector<double>> T(m + 1);
    for (int j = 0; j <= m; ++j) {
        const double h = step * std::ldexp(1.0, j);
        T[j].push_back((f(t0 + h) - f(t0 - h)) / (2 * h));
    }
    for (int c = 1; c <= m; ++c) {
        const double factor = std::ldexp(1.0, 2 * c) - 1.0;
        for (int j = 0; j + c <= m; ++j) T[j].push_back(T[j][c - 1] + (T[j][c - 1] - T[j + 1][c - 1]) / factor);
    }
    FdResult r;
    r.value = T[0][levels];
    r.error_estimate = std::abs(T[0][levels] - T[0][levels > 0 ? levels - 1 : 1]);
    return r;
}

}  // namespace caliblab
