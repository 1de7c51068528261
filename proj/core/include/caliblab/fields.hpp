#pragma once

#include "caliblab/exterior.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace caliblab {

struct TrigTerm {
    Eigen::VectorXi wave;
    double cos_coeff = 0.0;
    double sin_coeff = 0.0;
};

// c + sum a cos(w.y) + b sin(w.y) with integer wave vectors, so every field
// built from these is 2 pi periodic in each coordinate.
class TrigPolynomial {
public:
    TrigPolynomial() = default;
    explicit TrigPolynomial(int dim, double constant = 0.0) : dim_(dim), constant_(constant) {}

    int dim() const { return dim_; }
    double constant() const { return constant_; }
    const std::vector<TrigTerm>& terms() const { return terms_; }
    void add_term(TrigTerm t);

    double value(const Vec& y) const;
    Vec gradient(const Vec& y) const;
    Mat hessian(const Vec& y) const;

private:
    int dim_ = 0;
    double constant_ = 0.0;
    std::vector<TrigTerm> terms_;
};

struct TrigFieldOptions {
    int modes = 2;  // terms per component
    int max_freq = 1;  // wave entries drawn from [-max_freq, max_freq]
    double amplitude = 1.0;
    bool constant_term = false;
    // If nonempty (n x k), waves orthogonal to every column are rejected, so
    // the field has no mode that is constant along span(columns).
    Mat avoid_constant_along;
};

TrigPolynomial random_trig_polynomial(int dim, const TrigFieldOptions& opt, std::mt19937_64& rng);

// k-form field on R^n with trigonometric coefficients.
class TrigFormField {
public:
    TrigFormField() = default;
    TrigFormField(int n, int k);
    static TrigFormField random(int n, int k, std::uint64_t seed, const TrigFieldOptions& opt = {});

    int ambient_dim() const { return n_; }
    int degree() const { return k_; }
    TrigPolynomial& component(std::size_t rank) { return comps_[rank]; }
    const TrigPolynomial& component(std::size_t rank) const { return comps_[rank]; }

    KForm value(const Vec& y) const;
    KForm exterior_derivative(const Vec& y) const;

private:
    int n_ = 0;
    int k_ = 0;
    std::vector<TrigPolynomial> comps_;
};

class TrigVectorField {
public:
    TrigVectorField() = default;
    explicit TrigVectorField(int n);
    static TrigVectorField random(int n, std::uint64_t seed, const TrigFieldOptions& opt = {});

    int dim() const { return static_cast<int>(comps_.size()); }
    TrigPolynomial& component(int i) { return comps_[i]; }

    Vec value(const Vec& y) const;
    // D(i, j) = d X_i / d y_j
    Mat jacobian(const Vec& y) const;

private:
    std::vector<TrigPolynomial> comps_;
};

// Exterior derivative of a 1-jet: (d a)_{i I} from the partials da_I/dy_i,
// supplied as grads[rank] = gradient of component rank.
KForm exterior_derivative_from_gradients(int n, int k, const std::vector<Vec>& grads);

}  // namespace caliblab
