#include "caliblab/smith.hpp"

#include <cmath>
#include <stdexcept>

namespace caliblab {

DomainMetric euclidean_domain_metric(int k) {
    const SymTensor2 id = SymTensor2::identity(k);
    return [id](const Vec&) { return id; };
}

namespace {

struct PointData {
    Mat pull;  // u^* gbar
    Mat g;
    double vol_g = 0.0;
    double du2 = 0.0;  // |du|^2 = tr(g^-1 u^* gbar)
};

PointData point_data(const MapTriple& m, const DomainMetric& g, const MetricField& gbar, const Vec& x) {
    PointData d;
    const Mat J = m.map->jacobian(x);
    d.pull = J.transpose() * gbar(m.map->point(x)).matrix() * J;
    d.g = g(x).matrix();
    d.vol_g = std::sqrt(d.g.determinant());
    d.du2 = d.g.ldlt().solve(d.pull).trace();
    return d;
}

double norm_const(int k) { return std::pow(static_cast<double>(k), 0.5 * k); }

void check(const MapTriple& m) {
    if (!m.map) throw std::invalid_argument("map triple without a map");
    if (m.map->ambient_dim() != m.kit.n) throw std::invalid_argument("map target differs from kit dimension");
    if (!m.g) throw std::invalid_argument("map triple without a domain metric");
}

}  // namespace

double k_energy_with(const MapTriple& m, const DomainMetric& g, const MetricField& gbar, const QuadratureRule& rule) {
    check(m);
    const int k = m.map->domain_dim();
    return integrate(rule, m.map->box(), [&](const Vec& x) {
               const auto d = point_data(m, g, gbar, x);
               return std::pow(d.du2, 0.5 * k) * d.vol_g;
           }) /
           norm_const(k);
}

double k_energy(const MapTriple& m, const QuadratureRule& rule) {
    return k_energy_with(m, m.g, euclidean_metric(m.kit.n), rule);
}

double k_volume(const MapTriple& m, const QuadratureRule& rule) {
    check(m);
    // non-immersion points contribute zero instead of failing
    return integrate(rule, m.map->box(), [&](const Vec& x) {
        const Mat J = m.map->jacobian(x);
        return std::sqrt(std::max(0.0, (J.transpose() * J).determinant()));
    });
}

double calibration_integral(const MapTriple& m, const QuadratureRule& rule) {
    check(m);
    if (m.map->domain_dim() != m.kit.calibrated_dim) throw std::invalid_argument("map dimension differs from calibration degree");
    return integrate(rule, m.map->box(), [&](const Vec& x) { return evaluate(m.kit.calibration, m.map->jacobian(x)); });
}

std::vector<Vec> sample_points(const Box& box, const QuadratureRule& rule, int grid) {
    std::vector<Vec> out;
    for (const auto& n : tensor_nodes(rule, box)) out.push_back(n.x);
    const int k = box.dim();
    std::vector<int> idx(k, 0);
    while (true) {
        Vec x(k);
        for (int d = 0; d < k; ++d) x[d] = box.lo[d] + (idx[d] + 0.5) * (box.hi[d] - box.lo[d]) / grid;
        out.push_back(x);
        int d = k - 1;
        while (d >= 0 && ++idx[d] == grid) idx[d--] = 0;
        if (d < 0) break;
    }
    return out;
}

double conformality_residual(const MapTriple& m, const QuadratureRule& rule) {
    check(m);
    const int k = m.map->domain_dim();
    const MetricField gbar = euclidean_metric(m.kit.n);
    double worst = 0.0;
    for (const Vec& x : sample_points(m.map->box(), rule)) {
        const auto d = point_data(m, m.g, gbar, x);
        const Mat L = Eigen::LLT<Mat>(d.g).matrixL();
        const Mat Linv = L.inverse();
        const Mat A = Linv * d.pull * Linv.transpose();
        worst = std::max(worst, (A - (d.du2 / k) * Mat::Identity(k, k)).norm());
    }
    return worst;
}

SmithResidual smith_residual(const MapTriple& m, const QuadratureRule& rule) {
    check(m);
    const int k = m.map->domain_dim();
    const MetricField gbar = euclidean_metric(m.kit.n);
    SmithResidual r;
    r.conformality = conformality_residual(m, rule);
    for (const Vec& x : sample_points(m.map->box(), rule)) {
        const auto d = point_data(m, m.g, gbar, x);
        const double mu = evaluate(m.kit.calibration, m.map->jacobian(x)) / d.vol_g;
        r.calibration = std::max(r.calibration, std::abs(mu - std::pow(d.du2, 0.5 * k) / norm_const(k)));
    }
    return r;
}

double energy_first_variation_domain(const MapTriple& m, const DomainMetric& h, const QuadratureRule& rule) {
    check(m);
    const int k = m.map->domain_dim();
    const MetricField gbar = euclidean_metric(m.kit.n);
    return integrate(rule, m.map->box(), [&](const Vec& x) {
               const auto d = point_data(m, m.g, gbar, x);
               const Mat ginv = d.g.inverse();
               const Mat A = -k * std::pow(d.du2, 0.5 * (k - 2)) * d.pull + std::pow(d.du2, 0.5 * k) * d.g;
               return (ginv * h(x).matrix() * ginv * A).trace() * d.vol_g;
           }) /
           (2.0 * norm_const(k));
}

double energy_first_variation_target(const MapTriple& m, const MetricField& hbar, const QuadratureRule& rule) {
    check(m);
    const int k = m.map->domain_dim();
    const MetricField gbar = euclidean_metric(m.kit.n);
    return k *
           integrate(rule, m.map->box(),
                     [&](const Vec& x) {
                         const auto d = point_data(m, m.g, gbar, x);
                         const Mat J = m.map->jacobian(x);
                         const Mat uh = J.transpose() * hbar(m.map->point(x)).matrix() * J;
                         return std::pow(d.du2, 0.5 * (k - 2)) * d.g.ldlt().solve(uh).trace() * d.vol_g;
                     }) /
           (2.0 * norm_const(k));
}

}  // namespace caliblab
