#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace caliblab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Ambient dimensions handled by the lab. Index sets are stored as bitmasks,
// so this is a hard ceiling.
inline constexpr int kMaxDim = 8;

int binomial(int n, int k);

// Strictly increasing index set inside {0, ..., n-1}. Indices are 0-based
// throughout the library; e_1 in the usual notation is index 0 here.
class MultiIndex {
public:
    MultiIndex() = default;
    MultiIndex(int n, std::initializer_list<int> entries);
    MultiIndex(int n, std::span<const int> entries);
    static MultiIndex from_mask(int n, unsigned mask);

    int ambient_dim() const { return n_; }
    int degree() const;
    unsigned mask() const { return mask_; }
    std::vector<int> entries() const;

    bool operator==(const MultiIndex&) const = default;

private:
    int n_ = 0;
    unsigned mask_ = 0;
};

// Masks of all k-subsets of {0..n-1} in lexicographic order of their sorted entries.
const std::vector<unsigned>& subsets(int n, int k);
// Position of `mask` inside subsets(n, popcount(mask)).
int subset_rank(int n, unsigned mask);

// Constant-coefficient k-form on R^n, dense over lexicographically ordered index sets.
class KForm {
public:
    KForm() = default;
    KForm(int n, int k);

    // c * e_{i1} ^ ... ^ e_{ik}; indices may come in any order (sign applied),
    // repeated indices give the zero form.
    static KForm basis(int n, std::initializer_list<int> indices, double c = 1.0);

    int ambient_dim() const { return n_; }
    int degree() const { return k_; }
    std::size_t size() const { return c_.size(); }

    double coeff(std::size_t rank) const { return c_[rank]; }
    double& coeff(std::size_t rank) { return c_[rank]; }
    unsigned mask_at(std::size_t rank) const { return subsets(n_, k_)[rank]; }
    std::span<const double> coeffs() const { return c_; }
    std::span<double> coeffs() { return c_; }

    double operator[](const MultiIndex& idx) const;
    // Fully skew component a_{i1...ik} for an arbitrary index tuple.
    double component(std::span<const int> idx) const;
    double component(std::initializer_list<int> idx) const {
        return component(std::span<const int>(idx.begin(), idx.size()));
    }
    // Adds v to the antisymmetric component at `idx` (sign of the sorting permutation applied).
    void add_component(std::span<const int> idx, double v);
    void add_component(std::initializer_list<int> idx, double v) {
        add_component(std::span<const int>(idx.begin(), idx.size()), v);
    }

    double max_abs() const;

    KForm& operator+=(const KForm& o);
    KForm& operator-=(const KForm& o);
    KForm& operator*=(double s);

private:
    int n_ = 0;
    int k_ = 0;
    std::vector<double> c_;
};

KForm operator+(KForm a, const KForm& b);
KForm operator-(KForm a, const KForm& b);
KForm operator*(double s, KForm a);
KForm operator*(KForm a, double s);
KForm operator-(KForm a);

// Symmetric 2-tensor (metric or metric variation); symmetrized on construction.
class SymTensor2 {
public:
    SymTensor2() = default;
    explicit SymTensor2(const Mat& m);
    static SymTensor2 identity(int n);
    static SymTensor2 zero(int n);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Mat& matrix() const { return m_; }
    double operator()(int i, int j) const { return m_(i, j); }
    double operator()(const Vec& x, const Vec& y) const { return x.dot(m_ * y); }
    double trace() const { return m_.trace(); }
    bool is_positive_definite() const;

private:
    Mat m_;
};

// Columns 0..k-1 span the tangent space, the rest complete to an adapted basis
// of the ambient space. Orthonormal for the metric used to build it.
struct OrientedFrame {
    int n = 0;
    int k = 0;
    Mat vectors;
    int orientation = 1;

    Mat tangent() const { return vectors.leftCols(k); }
    Mat normal() const { return vectors.rightCols(n - k); }
};

KForm wedge(const KForm& a, const KForm& b);
KForm interior(const Vec& v, const KForm& a);
KForm hodge_star(const KForm& a);  // Euclidean metric, standard orientation
KForm hodge_star(const KForm& a, const SymTensor2& metric, int orientation = 1);
double form_inner(const KForm& a, const KForm& b);  // Euclidean
double form_inner(const KForm& a, const KForm& b, const SymTensor2& metric);
// a(v_1, ..., v_k) with v_j the columns of `vectors`.
double evaluate(const KForm& a, const Mat& vectors);
// T^* a for a linear map given as an n x n matrix (columns are images of e_j).
KForm pullback(const KForm& a, const Mat& T);

OrientedFrame gram_schmidt_adapt(const Mat& tangent_basis, const SymTensor2& metric,
                                 double rank_tol = 1e-10);
// Just the tangent columns of gram_schmidt_adapt: J L^{-T} with J^T G J = L L^T,
// which is what modified Gram-Schmidt on the columns in order produces.
Mat orthonormal_tangent(const Mat& tangent_basis, const SymTensor2& metric);

// Dense integer expansion of a form with integral coefficients, used by the
// exact contraction suite. Throws if some coefficient is not an integer.
struct IntTensor {
    int n = 0;
    int rank = 0;
    std::vector<std::int64_t> data;

    std::int64_t operator()(std::initializer_list<int> idx) const;
    std::size_t offset(std::span<const int> idx) const;
};
IntTensor expand_integer(const KForm& a);

// Sparse list of all nonzero entries of the fully skew expansion.
struct SkewEntry {
    std::array<std::int8_t, kMaxDim> idx{};
    double value = 0.0;
};
std::vector<SkewEntry> expand_skew(const KForm& a);

}  // namespace caliblab
