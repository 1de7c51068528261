#include "caliblab/fields.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace caliblab {

void TrigPolynomial::add_term(TrigTerm t) {
    if (t.wave.size() != dim_) throw std::invalid_argument("wave vector dimension mismatch");
    terms_.push_back(std::move(t));
}

double TrigPolynomial::value(const Vec& y) const {
    double s = constant_;
    for (const auto& t : terms_) {
        const double th = t.wave.cast<double>().dot(y);
        s += t.cos_coeff * std::cos(th) + t.sin_coeff * std::sin(th);
    }
    return s;
}

Vec TrigPolynomial::gradient(const Vec& y) const {
    Vec g = Vec::Zero(dim_);
    for (const auto& t : terms_) {
        const Vec w = t.wave.cast<double>();
        const double th = w.dot(y);
        g += (-t.cos_coeff * std::sin(th) + t.sin_coeff * std::cos(th)) * w;
    }
    return g;
}

Mat TrigPolynomial::hessian(const Vec& y) const {
    Mat H = Mat::Zero(dim_, dim_);
    for (const auto& t : terms_) {
        const Vec w = t.wave.cast<double>();
        const double th = w.dot(y);
        H -= (t.cos_coeff * std::cos(th) + t.sin_coeff * std::sin(th)) * (w * w.transpose());
    }
    return H;
}

TrigPolynomial random_trig_polynomial(int dim, const TrigFieldOptions& opt, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> freq(-opt.max_freq, opt.max_freq);
    std::uniform_real_distribution<double> coef(-opt.amplitude, opt.amplitude);
    TrigPolynomial p(dim, opt.constant_term ? coef(rng) : 0.0);
    for (int m = 0; m < opt.modes; ++m) {
        Eigen::VectorXi w(dim);
        for (int attempt = 0;; ++attempt) {
            for (int i = 0; i < dim; ++i) w[i] = freq(rng);
            bool ok = w.cwiseAbs().sum() > 0;
            if (ok && opt.avoid_constant_along.size() > 0)
                ok = (opt.avoid_constant_along.transpose() * w.cast<double>()).cwiseAbs().maxCoeff() > 0.5;
            if (ok) break;
            if (attempt > 1000) throw std::runtime_error("could not draw an admissible wave vector");
        }
        const double a = coef(rng);
        const double b = coef(rng);
        p.add_term({w, a, b});
    }
    return p;
}

TrigFormField::TrigFormField(int n, int k) : n_(n), k_(k), comps_(binomial(n, k), TrigPolynomial(n)) {}

TrigFormField TrigFormField::random(int n, int k, std::uint64_t seed, const TrigFieldOptions& opt) {
    TrigFormField f(n, k);
    std::mt19937_64 rng(seed);
    for (auto& c : f.comps_) c = random_trig_polynomial(n, opt, rng);
    return f;
}

KForm TrigFormField::value(const Vec& y) const {
    KForm out(n_, k_);
    for (std::size_t r = 0; r < comps_.size(); ++r) out.coeff(r) = comps_[r].value(y);
    return out;
}

KForm exterior_derivative_from_gradients(int n, int k, const std::vector<Vec>& grads) {
    KForm out(n, k + 1);
    const auto& masks = subsets(n, k);
    for (std::size_t r = 0; r < masks.size(); ++r) {
        for (int i = 0; i < n; ++i) {
            if ((masks[r] >> i) & 1u) continue;
            const double g = grads[r][i];
            if (g == 0.0) continue;
            // e_i ^ e_I: sign from moving i past the smaller entries of I.
            const int below = std::popcount(masks[r] & ((1u << i) - 1));
            out.coeff(subset_rank(n, masks[r] | (1u << i))) += ((below & 1) ? -g : g);
        }
    }
    return out;
}

KForm TrigFormField::exterior_derivative(const Vec& y) const {
    std::vector<Vec> grads;
    grads.reserve(comps_.size());
    for (const auto& c : comps_) grads.push_back(c.gradient(y));
    return exterior_derivative_from_gradients(n_, k_, grads);
}

TrigVectorField::TrigVectorField(int n) : comps_(n, TrigPolynomial(n)) {}

TrigVectorField TrigVectorField::random(int n, std::uint64_t seed, const TrigFieldOptions& opt) {
    TrigVectorField f(n);
    std::mt19937_64 rng(seed);
    for (auto& c : f.comps_) c = random_trig_polynomial(n, opt, rng);
    return f;
}

Vec TrigVectorField::value(const Vec& y) const {
    Vec v(dim());
    for (int i = 0; i < dim(); ++i) v[i] = comps_[i].value(y);
    return v;
}

Mat TrigVectorField::jacobian(const Vec& y) const {
    Mat D(dim(), dim());
    for (int i = 0; i < dim(); ++i) D.row(i) = comps_[i].gradient(y).transpose();
    return D;
}

}  // namespace caliblab
