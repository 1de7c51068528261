#include "caliblab/patch.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace caliblab {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Patch::Patch(std::string id, int k, int n, Box box) : id_(std::move(id)), k_(k), n_(n), box_(std::move(box)) {
    if (k < 1 || k > n || n > kMaxDim) throw std::invalid_argument("patch dimensions must satisfy 1 <= k <= n <= 8");
    if (box_.dim() != k) throw std::invalid_argument("patch box dimension differs from k");
}

std::vector<Vec> Patch::second_derivatives(const Vec& x) const {
    const double h = 1e-5;
    std::vector<Vec> out(static_cast<std::size_t>(k_ * k_));
    for (int b = 0; b < k_; ++b) {
        Vec xp = x, xm = x;
        xp[b] += h;
        xm[b] -= h;
        const Mat d = (jacobian(xp) - jacobian(xm)) / (2 * h);
        for (int a = 0; a < k_; ++a) out[a * k_ + b] = d.col(a);
    }
    return out;
}

// ------------------------------------------------------------------- affine

AffinePatch::AffinePatch(std::string id, Vec origin, Mat spanning, Box box)
    : Patch(std::move(id), static_cast<int>(spanning.cols()), static_cast<int>(spanning.rows()), std::move(box)),
      origin_(std::move(origin)),
      V_(std::move(spanning)) {
    if (origin_.size() != V_.rows()) throw std::invalid_argument("affine patch origin dimension mismatch");
}

Vec AffinePatch::point(const Vec& x) const { return origin_ + V_ * x; }
Mat AffinePatch::jacobian(const Vec&) const { return V_; }
std::vector<Vec> AffinePatch::second_derivatives(const Vec&) const {
    return std::vector<Vec>(static_cast<std::size_t>(domain_dim() * domain_dim()), Vec::Zero(ambient_dim()));
}

// -------------------------------------------------------------------- graph

GraphPatch::GraphPatch(std::string id, Vec origin, Mat spanning, Mat directions, std::vector<TrigPolynomial> heights,
                       double eps, Box box)
    : Patch(std::move(id), static_cast<int>(spanning.cols()), static_cast<int>(spanning.rows()), std::move(box)),
      origin_(std::move(origin)),
      V_(std::move(spanning)),
      W_(std::move(directions)),
      f_(std::move(heights)),
      eps_(eps) {
    if (W_.cols() != static_cast<Eigen::Index>(f_.size())) throw std::invalid_argument("one height per direction");
}

Vec GraphPatch::point(const Vec& x) const {
    Vec p = origin_ + V_ * x;
    for (std::size_t j = 0; j < f_.size(); ++j) p += eps_ * f_[j].value(x) * W_.col(j);
    return p;
}

Mat GraphPatch::jacobian(const Vec& x) const {
    Mat J = V_;
    for (std::size_t j = 0; j < f_.size(); ++j) J += eps_ * W_.col(j) * f_[j].gradient(x).transpose();
    return J;
}

std::vector<Vec> GraphPatch::second_derivatives(const Vec& x) const {
    const int k = domain_dim();
    std::vector<Vec> out(static_cast<std::size_t>(k * k), Vec::Zero(ambient_dim()));
    for (std::size_t j = 0; j < f_.size(); ++j) {
        const Mat H = f_[j].hessian(x);
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) out[a * k + b] += eps_ * H(a, b) * W_.col(j);
    }
    return out;
}

// ------------------------------------------------------------ round shapes

CirclePatch::CirclePatch(double r) : Patch("circle-r2", 1, 2, Box::cube(1, 0.0, kTwoPi, true)), r_(r) {}

Vec CirclePatch::point(const Vec& x) const { return Vec((Vec(2) << r_ * std::cos(x[0]), r_ * std::sin(x[0])).finished()); }
Mat CirclePatch::jacobian(const Vec& x) const {
    Mat J(2, 1);
    J << -r_ * std::sin(x[0]), r_ * std::cos(x[0]);
    return J;
}
std::vector<Vec> CirclePatch::second_derivatives(const Vec& x) const { return {-point(x)}; }

SpherePatch::SpherePatch(double r)
    : Patch("sphere-r3", 2, 3, Box{(Vec(2) << 0.0, 0.0).finished(), (Vec(2) << std::numbers::pi, kTwoPi).finished(), false}),
      r_(r) {}

Vec SpherePatch::point(const Vec& x) const {
    const double st = std::sin(x[0]), ct = std::cos(x[0]);
    return r_ * Vec((Vec(3) << st * std::cos(x[1]), st * std::sin(x[1]), ct).finished());
}

Mat SpherePatch::jacobian(const Vec& x) const {
    const double st = std::sin(x[0]), ct = std::cos(x[0]), sp = std::sin(x[1]), cp = std::cos(x[1]);
    Mat J(3, 2);
    J << ct * cp, -st * sp, ct * sp, st * cp, -st, 0.0;
    return r_ * J;
}

std::vector<Vec> SpherePatch::second_derivatives(const Vec& x) const {
    const double st = std::sin(x[0]), ct = std::cos(x[0]), sp = std::sin(x[1]), cp = std::cos(x[1]);
    Vec tt = r_ * Vec((Vec(3) << -st * cp, -st * sp, -ct).finished());
    Vec tp = r_ * Vec((Vec(3) << -ct * sp, ct * cp, 0.0).finished());
    Vec pp = r_ * Vec((Vec(3) << -st * cp, -st * sp, 0.0).finished());
    return {tt, tp, tp, pp};
}

TorusPatch::TorusPatch(double R, double r) : Patch("torus-r3", 2, 3, Box::cube(2, 0.0, kTwoPi, true)), R_(R), r_(r) {
    if (!(R > r && r > 0)) throw std::invalid_argument("torus needs R > r > 0");
}

Vec TorusPatch::point(const Vec& x) const {
    const double rho = R_ + r_ * std::cos(x[1]);
    return Vec((Vec(3) << rho * std::cos(x[0]), rho * std::sin(x[0]), r_ * std::sin(x[1])).finished());
}

Mat TorusPatch::jacobian(const Vec& x) const {
    const double rho = R_ + r_ * std::cos(x[1]);
    const double c0 = std::cos(x[0]), s0 = std::sin(x[0]), c1 = std::cos(x[1]), s1 = std::sin(x[1]);
    Mat J(3, 2);
    J << -rho * s0, -r_ * s1 * c0, rho * c0, -r_ * s1 * s0, 0.0, r_ * c1;
    return J;
}

std::vector<Vec> TorusPatch::second_derivatives(const Vec& x) const {
    const double rho = R_ + r_ * std::cos(x[1]);
    const double c0 = std::cos(x[0]), s0 = std::sin(x[0]), c1 = std::cos(x[1]), s1 = std::sin(x[1]);
    Vec aa = Vec((Vec(3) << -rho * c0, -rho * s0, 0.0).finished());
    Vec ab = Vec((Vec(3) << r_ * s1 * s0, -r_ * s1 * c0, 0.0).finished());
    Vec bb = Vec((Vec(3) << -r_ * c1 * c0, -r_ * c1 * s0, -r_ * s1).finished());
    return {aa, ab, ab, bb};
}

// ---------------------------------------------------------------- quadratic

QuadraticMapPatch::QuadraticMapPatch(std::string id, Vec c, Mat A, std::vector<Mat> Q, Box box)
    : Patch(std::move(id), static_cast<int>(A.cols()), static_cast<int>(A.rows()), std::move(box)),
      c_(std::move(c)),
      A_(std::move(A)),
      Q_(std::move(Q)) {
    if (static_cast<int>(Q_.size()) != ambient_dim()) throw std::invalid_argument("one quadratic form per component");
    for (auto& q : Q_) q = 0.5 * (q + q.transpose());
}

std::shared_ptr<QuadraticMapPatch> QuadraticMapPatch::random(int k, int n, std::uint64_t seed, double curvature, Box box) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Vec c(n);
    Mat A(n, k);
    std::vector<Mat> Q(n, Mat(k, k));
    for (int i = 0; i < n; ++i) {
        c[i] = g(rng);
        for (int a = 0; a < k; ++a) A(i, a) = g(rng);
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) Q[i](a, b) = curvature * g(rng);
    }
    return std::make_shared<QuadraticMapPatch>("quadratic-map", c, A, Q, std::move(box));
}

Vec QuadraticMapPatch::point(const Vec& x) const {
    Vec p = c_ + A_ * x;
    for (int i = 0; i < ambient_dim(); ++i) p[i] += x.dot(Q_[i] * x);
    return p;
}

Mat QuadraticMapPatch::jacobian(const Vec& x) const {
    Mat J = A_;
    for (int i = 0; i < ambient_dim(); ++i) J.row(i) += 2.0 * (Q_[i] * x).transpose();
    return J;
}

std::vector<Vec> QuadraticMapPatch::second_derivatives(const Vec&) const {
    const int k = domain_dim();
    std::vector<Vec> out(static_cast<std::size_t>(k * k), Vec(ambient_dim()));
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            for (int i = 0; i < ambient_dim(); ++i) out[a * k + b][i] = 2.0 * Q_[i](a, b);
    return out;
}

// -------------------------------------------------------------- holomorphic

HolomorphicCurvePatch::HolomorphicCurvePatch(std::string id, std::vector<std::vector<std::complex<double>>> coeffs, Box box)
    : Patch(std::move(id), 2, 2 * static_cast<int>(coeffs.size()), std::move(box)), p_(std::move(coeffs)) {}

Vec HolomorphicCurvePatch::point(const Vec& x) const {
    const std::complex<double> z(x[0], x[1]);
    Vec out(ambient_dim());
    for (std::size_t a = 0; a < p_.size(); ++a) {
        std::complex<double> v = 0, zp = 1;
        for (const auto& c : p_[a]) {
            v += c * zp;
            zp *= z;
        }
        out[2 * a] = v.real();
        out[2 * a + 1] = v.imag();
    }
    return out;
}

Mat HolomorphicCurvePatch::jacobian(const Vec& x) const {
    const std::complex<double> z(x[0], x[1]);
    Mat J(ambient_dim(), 2);
    for (std::size_t a = 0; a < p_.size(); ++a) {
        std::complex<double> d = 0, zp = 1;
        for (std::size_t j = 1; j < p_[a].size(); ++j) {
            d += static_cast<double>(j) * p_[a][j] * zp;
            zp *= z;
        }
        // du/dx = p'(z), du/dy = i p'(z)
        J(2 * a, 0) = d.real();
        J(2 * a + 1, 0) = d.imag();
        J(2 * a, 1) = -d.imag();
        J(2 * a + 1, 1) = d.real();
    }
    return J;
}

// ---------------------------------------------------------------- inversion

InversionPatch::InversionPatch(std::string id, Vec center, Vec c, double s, Mat R, Box box)
    : Patch(std::move(id), static_cast<int>(R.cols()), static_cast<int>(R.rows()), std::move(box)),
      a_(std::move(center)),
      c_(std::move(c)),
      s_(s),
      R_(std::move(R)) {}

Vec InversionPatch::point(const Vec& x) const {
    const Vec d = x - a_;
    return c_ + s_ * R_ * d / d.squaredNorm();
}

Mat InversionPatch::jacobian(const Vec& x) const {
    const Vec d = x - a_;
    const double r2 = d.squaredNorm();
    const int k = domain_dim();
    const Mat D = (Mat::Identity(k, k) * r2 - 2.0 * d * d.transpose()) / (r2 * r2);
    return s_ * R_ * D;
}

// ----------------------------------------------------------------- reversed

ReversedPatch::ReversedPatch(PatchPtr base)
    : Patch(base->id() + "-reversed", base->domain_dim(), base->ambient_dim(), base->box()), base_(std::move(base)) {}

Vec ReversedPatch::flip(const Vec& x) const {
    Vec y = x;
    y[0] = box().lo[0] + box().hi[0] - x[0];
    return y;
}

Vec ReversedPatch::point(const Vec& x) const { return base_->point(flip(x)); }

Mat ReversedPatch::jacobian(const Vec& x) const {
    Mat J = base_->jacobian(flip(x));
    J.col(0) *= -1.0;
    return J;
}

std::vector<Vec> ReversedPatch::second_derivatives(const Vec& x) const {
    auto s = base_->second_derivatives(flip(x));
    const int k = domain_dim();
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            if ((a == 0) != (b == 0)) s[a * k + b] *= -1.0;
    return s;
}

// ------------------------------------------------------------------ catalog

PatchPtr plane_patch(std::string id, const Mat& basis, const Box& box) {
    return std::make_shared<AffinePatch>(std::move(id), Vec::Zero(basis.rows()), basis, box);
}

namespace {

Vec ev(int n, std::initializer_list<double> v) {
    Vec out = Vec::Zero(n);
    int i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

Mat columns(std::initializer_list<Vec> vs) {
    Mat m(vs.begin()->size(), static_cast<Eigen::Index>(vs.size()));
    int c = 0;
    for (const Vec& v : vs) m.col(c++) = v;
    return m;
}

Mat coordinate_columns(int n, std::initializer_list<int> one_based) {
    Mat m = Mat::Zero(n, static_cast<Eigen::Index>(one_based.size()));
    int c = 0;
    for (int i : one_based) m(i - 1, c++) = 1.0;
    return m;
}

// Flips the first spanning vector if the calibration is negative on the plane.
Mat orient_for(const StructureKit& kit, Mat basis) {
    const auto f = gram_schmidt_adapt(basis, kit.metric);
    if (evaluate(kit.calibration, f.tangent()) < 0) basis.col(0) *= -1.0;
    return basis;
}

PatchPtr torus(std::string id, const Mat& basis) {
    return plane_patch(std::move(id), basis, Box::cube(static_cast<int>(basis.cols()), 0.0, kTwoPi, true));
}

std::vector<TrigPolynomial> graph_heights(int k, int count, std::uint64_t seed) {
    TrigFieldOptions opt;
    opt.modes = 2;
    opt.max_freq = 1;
    std::mt19937_64 rng(seed);
    std::vector<TrigPolynomial> out;
    for (int j = 0; j < count; ++j) out.push_back(random_trig_polynomial(k, opt, rng));
    return out;
}

PatchPtr graph_over(std::string id, const Mat& basis, const Mat& directions, double eps, std::uint64_t seed) {
    const int k = static_cast<int>(basis.cols());
    return std::make_shared<GraphPatch>(std::move(id), Vec::Zero(basis.rows()), basis, directions,
                                        graph_heights(k, static_cast<int>(directions.cols()), seed), eps,
                                        Box::cube(k, 0.0, kTwoPi, true));
}

std::vector<PatchEntry> build_catalog() {
    std::vector<PatchEntry> c;
    const CaseDescriptor u21{CalibrationCase::AlmostComplex, 2, 1};
    const CaseDescriptor u31{CalibrationCase::AlmostComplex, 3, 1};
    const CaseDescriptor u32{CalibrationCase::AlmostComplex, 3, 2};
    const CaseDescriptor g2a{CalibrationCase::Associative, 0, 0};
    const CaseDescriptor g2c{CalibrationCase::Coassociative, 0, 0};
    const CaseDescriptor sp7{CalibrationCase::Cayley, 0, 0};

    auto cal_torus = [&](std::string id, std::string desc, CaseDescriptor d, std::function<Mat()> basis) {
        c.push_back({id, std::move(desc), d, [id, d, basis] { return torus(id, orient_for(standard_kit(d), basis())); }});
    };

    cal_torus("t2-in-r4", "complex coordinate line torus in C^2", u21, [] { return coordinate_columns(4, {1, 2}); });
    cal_torus("t2-skew-in-r4", "complex line spanned by (1,0,1,0) in C^2", u21,
              [] { return columns({ev(4, {1, 0, 1, 0}), ev(4, {0, 1, 0, 1})}); });
    cal_torus("t2-in-r6", "complex coordinate line torus in C^3", u31, [] { return coordinate_columns(6, {1, 2}); });
    cal_torus("t2-skew-in-r6", "complex line spanned by (1,0,0,0,1,0) in C^3", u31,
              [] { return columns({ev(6, {1, 0, 0, 0, 1, 0}), ev(6, {0, 1, 0, 0, 0, 1})}); });
    cal_torus("t4-in-r6", "complex coordinate plane torus in C^3", u32, [] { return coordinate_columns(6, {1, 2, 3, 4}); });
    cal_torus("t4-skew-in-r6", "complex plane spanned by e1+e3, e3+e5 and their J-images", u32, [] {
        return columns({ev(6, {1, 0, 1, 0, 0, 0}), ev(6, {0, 1, 0, 1, 0, 0}), ev(6, {0, 0, 1, 0, 1, 0}),
                        ev(6, {0, 0, 0, 1, 0, 1})});
    });
    cal_torus("t3-in-r7", "associative coordinate 3-torus e123", g2a, [] { return coordinate_columns(7, {1, 2, 3}); });
    cal_torus("t3-skew-in-r7", "associative 3-torus span{e1+e4, e2-e7, e6}", g2a,
              [] { return columns({ev(7, {1, 0, 0, 1, 0, 0, 0}), ev(7, {0, 1, 0, 0, 0, 0, -1}), ev(7, {0, 0, 0, 0, 0, 1, 0})}); });
    cal_torus("t4-in-r7", "coassociative coordinate 4-torus e4567", g2c, [] { return coordinate_columns(7, {4, 5, 6, 7}); });
    cal_torus("t4-skew-in-r7", "coassociative 4-torus orthogonal to span{e1+e4, e2-e7, e6}", g2c, [] {
        return columns({ev(7, {0, 0, 1, 0, 0, 0, 0}), ev(7, {-1, 0, 0, 1, 0, 0, 0}), ev(7, {0, 0, 0, 0, 1, 0, 0}),
                        ev(7, {0, 1, 0, 0, 0, 0, 1})});
    });
    cal_torus("t4-in-r8", "Cayley coordinate 4-torus e1234", sp7, [] { return coordinate_columns(8, {1, 2, 3, 4}); });
    cal_torus("t4-skew-in-r8", "Cayley 4-torus span{e1+e5, e2-e8, e3+e6, P(...)}", sp7, [] {
        return columns({ev(8, {1, 0, 0, 0, 1, 0, 0, 0}), ev(8, {0, 1, 0, 0, 0, 0, 0, -1}), ev(8, {0, 0, 1, 0, 0, 1, 0, 0}),
                        ev(8, {1, -1, 1, 1, -1, -1, -1, -1})});
    });

    auto plain = [&](std::string id, std::string desc, std::function<PatchPtr()> make) {
        c.push_back({std::move(id), std::move(desc), std::nullopt, std::move(make)});
    };
    plain("t2-noncal-in-r4", "totally real torus span{e1, e3} in C^2", [] { return torus("t2-noncal-in-r4", coordinate_columns(4, {1, 3})); });
    plain("t3-noncal-in-r7", "non-associative 3-torus e124", [] { return torus("t3-noncal-in-r7", coordinate_columns(7, {1, 2, 4})); });
    plain("t4-noncal-in-r7", "non-coassociative 4-torus e1234", [] { return torus("t4-noncal-in-r7", coordinate_columns(7, {1, 2, 3, 4})); });
    plain("t4-noncal-in-r8", "non-Cayley 4-torus e1235", [] { return torus("t4-noncal-in-r8", coordinate_columns(8, {1, 2, 3, 5})); });
    plain("circle-r2", "unit circle in R^2", [] { return std::make_shared<CirclePatch>(1.0); });
    plain("sphere-r3", "unit 2-sphere in R^3 (polar chart)", [] { return std::make_shared<SpherePatch>(1.0); });
    plain("torus-r3", "torus of revolution R = 2, r = 0.5", [] { return std::make_shared<TorusPatch>(2.0, 0.5); });
    plain("graph-t2-in-r3", "periodic graph over the e12 torus in R^3", [] {
        return graph_over("graph-t2-in-r3", coordinate_columns(3, {1, 2}), coordinate_columns(3, {3}), 0.2, 5);
    });
    plain("graph-t2-in-r4", "periodic graph over the complex torus e12 in C^2", [] {
        return graph_over("graph-t2-in-r4", coordinate_columns(4, {1, 2}), coordinate_columns(4, {3, 4}), 0.15, 6);
    });
    plain("graph-t3-in-r7", "periodic graph over the associative torus e123", [] {
        return graph_over("graph-t3-in-r7", coordinate_columns(7, {1, 2, 3}), coordinate_columns(7, {4, 5, 6, 7}), 0.1, 7);
    });
    plain("graph-t4-in-r7", "periodic graph over the coassociative torus e4567", [] {
        return graph_over("graph-t4-in-r7", coordinate_columns(7, {4, 5, 6, 7}), coordinate_columns(7, {1, 2, 3}), 0.1, 8);
    });
    plain("graph-t4-in-r8", "periodic graph over the Cayley torus e1234", [] {
        return graph_over("graph-t4-in-r8", coordinate_columns(8, {1, 2, 3, 4}), coordinate_columns(8, {5, 6, 7, 8}), 0.1, 9);
    });
    plain("disk-graph-r3", "graph z = 0.3 x^2 - 0.2 x y + 0.1 y^2 over [-1, 1]^2", [] {
        std::vector<Mat> Q(3, Mat::Zero(2, 2));
        Q[2] << 0.3, -0.1, -0.1, 0.1;
        return std::make_shared<QuadraticMapPatch>("disk-graph-r3", Vec::Zero(3), coordinate_columns(3, {1, 2}), Q,
                                                   Box::cube(2, -1.0, 1.0));
    });
    return c;
}

}  // namespace

const std::vector<PatchEntry>& patch_catalog() {
    static const std::vector<PatchEntry> c = build_catalog();
    return c;
}

const PatchEntry& find_patch(const std::string& id) {
    for (const auto& e : patch_catalog())
        if (e.id == id) return e;
    throw std::invalid_argument("unknown patch '" + id + "'");
}

PatchPtr make_patch(const std::string& id) { return find_patch(id).make(); }

std::vector<std::string> closed_calibrated_tori(const CaseDescriptor& d) {
    std::vector<std::string> out;
    for (const auto& e : patch_catalog()) {
        if (!e.calibrated_for) continue;
        const auto& c = *e.calibrated_for;
        if (c.kind != d.kind) continue;
        if (d.kind == CalibrationCase::AlmostComplex && (c.m != d.m || c.k != d.k)) continue;
        out.push_back(e.id);
    }
    return out;
}

}  // namespace caliblab
