#pragma once

#include "caliblab/fields.hpp"
#include "caliblab/quadrature.hpp"
#include "caliblab/structure.hpp"

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace caliblab {

// Parametrized k-dimensional piece u: box in R^k -> R^n. Periodic boxes are
// closed tori (the parametrization is periodic there).
class Patch {
public:
    Patch(std::string id, int k, int n, Box box);
    virtual ~Patch() = default;

    const std::string& id() const { return id_; }
    int domain_dim() const { return k_; }
    int ambient_dim() const { return n_; }
    const Box& box() const { return box_; }
    bool closed() const { return box_.periodic; }

    virtual Vec point(const Vec& x) const = 0;
    // n x k matrix of partials du/dx_a.
    virtual Mat jacobian(const Vec& x) const = 0;
    // d^2 u / dx_a dx_b, returned as hess[a * k + b]. Default: central
    // differences of the jacobian.
    virtual std::vector<Vec> second_derivatives(const Vec& x) const;

private:
    std::string id_;
    int k_;
    int n_;
    Box box_;
};

using PatchPtr = std::shared_ptr<const Patch>;

// origin + V x
class AffinePatch : public Patch {
public:
    AffinePatch(std::string id, Vec origin, Mat spanning, Box box);
    Vec point(const Vec& x) const override;
    Mat jacobian(const Vec& x) const override;
    std::vector<Vec> second_derivatives(const Vec& x) const override;
    const Mat& spanning() const { return V_; }

private:
    Vec origin_;
    Mat V_;
};

// origin + V x + eps * sum_j f_j(x) W_j; a graph over the affine plane.
class GraphPatch : public Patch {
public:
    GraphPatch(std::string id, Vec origin, Mat spanning, Mat directions, std::vector<TrigPolynomial> heights,
               double eps, Box box);
    Vec point(const Vec& x) const override;
    Mat jacobian(const Vec& x) const override;
    std::vector<Vec> second_derivatives(const Vec& x) const override;

private:
    Vec origin_;
    Mat V_;
    Mat W_;
    std::vector<TrigPolynomial> f_;
    double eps_;
};

// Circle of radius r in R^2, x in [0, 2 pi).
class CirclePatch : public Patch {
public:
    explicit CirclePatch(double r);
    Vec point(const Vec& x) const override;
    Mat jacobian(const Vec& x) const override;
    std::vector<Vec> second_derivatives(const Vec& x) const override;

private:
    double r_;
};

// Round 2-sphere of radius r in R^3 in polar coordinates (theta, phi) on
// [0, pi] x [0, 2 pi]; covers the sphere up to the two poles.
class SpherePatch : public Patch {
public:
    explicit SpherePatch(double r);
    Vec point(const Vec& x) const override;
    Mat jacobian(const Vec& x) const override;
    std::vector<Vec> second_derivatives(const Vec& x) const override;

private:
    double r_;
};

// Torus of revolution in R^3 with radii R > r, periodic in both angles.
class TorusPatch : public Patch {
public:
    TorusPatch(double R, double r);
    Vec point(const Vec& x) const override;
    Mat jacobian(const Vec& x) const override;
    std::vector<Vec> second_derivatives(const Vec& x) const override;

private:
    double R_, r_;
};

// u_i(x) = c_i + A_i . x + x^T Q_i x
class QuadraticMapPatch : public Patch {
public:
    QuadraticMapPatch(std::string id, Vec c, Mat A, std::vector<Mat> Q, Box box);
    static std::shared_ptr<QuadraticMapPatch> random(int k, int n, std::uint64_t seed, double curvature, Box box);
    Vec point(const Vec& x) const override;
    Mat jacobian(const Vec& x) const override;
    std::vector<Vec> second_derivatives(const Vec& x) const override;

private:
    Vec c_;
    Mat A_;
    std::vector<Mat> Q_;
};

// z -> (p_1(z), ..., p_m(z)) in C^m = R^{2m} (pairs (Re, Im)), z = x_1 + i x_2.
class HolomorphicCurvePatch : public Patch {
public:
    // coeffs[a][j] is the z^j coefficient of p_a.
    HolomorphicCurvePatch(std::string id, std::vector<std::vector<std::complex<double>>> coeffs, Box box);
    Vec point(const Vec& x) const override;
    Mat jacobian(const Vec& x) const override;

private:
    std::vector<std::vector<std::complex<double>>> p_;
};

// Conformal map x -> c + s * R (x - a) / |x - a|^2, R an n x k isometric embedding.
class InversionPatch : public Patch {
public:
    InversionPatch(std::string id, Vec center, Vec c, double s, Mat R, Box box);
    Vec point(const Vec& x) const override;
    Mat jacobian(const Vec& x) const override;

private:
    Vec a_;
    Vec c_;
    double s_;
    Mat R_;
};

// Same image traversed with the first parameter reversed (opposite orientation).
class ReversedPatch : public Patch {
public:
    explicit ReversedPatch(PatchPtr base);
    Vec point(const Vec& x) const override;
    Mat jacobian(const Vec& x) const override;
    std::vector<Vec> second_derivatives(const Vec& x) const override;

private:
    Vec flip(const Vec& x) const;
    PatchPtr base_;
};

struct PatchEntry {
    std::string id;
    std::string description;
    // Set when the patch is calibrated for the given geometry.
    std::optional<CaseDescriptor> calibrated_for;
    std::function<PatchPtr()> make;
};

const std::vector<PatchEntry>& patch_catalog();
const PatchEntry& find_patch(const std::string& id);
PatchPtr make_patch(const std::string& id);

// Flat k-plane spanned by the columns of `basis`, over a box.
PatchPtr plane_patch(std::string id, const Mat& basis, const Box& box);
// Closed calibrated tori, spanned by integer vectors over [0, 2 pi]^k.
std::vector<std::string> closed_calibrated_tori(const CaseDescriptor& d);

}  // namespace caliblab
