#include "caliblab/exterior.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace caliblab {

namespace {

struct SubsetTables {
    // lists[n][k] = masks in lex order; rank[n][mask] = position inside its list
    std::array<std::array<std::vector<unsigned>, kMaxDim + 1>, kMaxDim + 1> lists;
    std::array<std::array<int, 1u << kMaxDim>, kMaxDim + 1> rank{};

    SubsetTables() {
        for (int n = 0; n <= kMaxDim; ++n) {
            for (int k = 0; k <= n; ++k) {
                std::vector<int> idx(k);
                for (int i = 0; i < k; ++i) idx[i] = i;
                auto& out = lists[n][k];
                while (true) {
                    unsigned m = 0;
                    for (int i : idx) m |= 1u << i;
                    rank[n][m] = static_cast<int>(out.size());
                    out.push_back(m);
                    int p = k - 1;
                    while (p >= 0 && idx[p] == n - k + p) --p;
                    if (p < 0) break;
                    ++idx[p];
                    for (int q = p + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
                }
            }
        }
    }
};

const SubsetTables& tables() {
    static const SubsetTables t;
    return t;
}

void check_dim(int n) {
    if (n < 0 || n > kMaxDim)
        throw std::invalid_argument("ambient dimension " + std::to_string(n) + " outside [0, 8]");
}

// Sign of moving the bits of `b` past those of `a` when concatenating a then b
// into sorted order: (-1)^{#(i in a, j in b, i > j)}.
int merge_sign(unsigned a, unsigned b) {
    int inv = 0;
    while (b) {
        int j = std::countr_zero(b);
        b &= b - 1;
        inv += std::popcount(a >> (j + 1));
    }
    return (inv & 1) ? -1 : 1;
}

// Sorts a tuple; returns its mask and the permutation sign, or mask 0 / sign 0 on repeats.
std::pair<unsigned, int> sort_tuple(std::span<const int> idx, int n) {
    unsigned mask = 0;
    int inv = 0;
    for (std::size_t p = 0; p < idx.size(); ++p) {
        int i = idx[p];
        if (i < 0 || i >= n) throw std::out_of_range("form index out of range");
        unsigned bit = 1u << i;
        if (mask & bit) return {0u, 0};
        inv += std::popcount(mask >> (i + 1));
        mask |= bit;
    }
    return {mask, (inv & 1) ? -1 : 1};
}

void check_same_shape(const KForm& a, const KForm& b) {
    if (a.ambient_dim() != b.ambient_dim() || a.degree() != b.degree())
        throw std::invalid_argument("forms differ in dimension or degree");
}

}  // namespace

int binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return static_cast<int>(r);
}

const std::vector<unsigned>& subsets(int n, int k) {
    check_dim(n);
    if (k < 0 || k > n) throw std::invalid_argument("degree outside [0, n]");
    return tables().lists[n][k];
}

int subset_rank(int n, unsigned mask) {
    check_dim(n);
    return tables().rank[n][mask];
}

// ---------------------------------------------------------------- MultiIndex

MultiIndex::MultiIndex(int n, std::initializer_list<int> entries)
    : MultiIndex(n, std::span<const int>(entries.begin(), entries.size())) {}

MultiIndex::MultiIndex(int n, std::span<const int> entries) : n_(n) {
    check_dim(n);
    int prev = -1;
    for (int e : entries) {
        if (e <= prev) throw std::invalid_argument("multi-index entries must be strictly increasing");
        if (e >= n) throw std::out_of_range("multi-index entry outside ambient dimension");
        mask_ |= 1u << e;
        prev = e;
    }
}

MultiIndex MultiIndex::from_mask(int n, unsigned mask) {
    check_dim(n);
    if (mask >> n) throw std::out_of_range("mask has bits beyond ambient dimension");
    MultiIndex m;
    m.n_ = n;
    m.mask_ = mask;
    return m;
}

int MultiIndex::degree() const { return std::popcount(mask_); }

std::vector<int> MultiIndex::entries() const {
    std::vector<int> out;
    for (unsigned m = mask_; m; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
}

// --------------------------------------------------------------------- KForm

KForm::KForm(int n, int k) : n_(n), k_(k) {
    check_dim(n);
    if (k < 0 || k > n) throw std::invalid_argument("degree outside [0, n]");
    c_.assign(static_cast<std::size_t>(binomial(n, k)), 0.0);
}

KForm KForm::basis(int n, std::initializer_list<int> indices, double c) {
    KForm f(n, static_cast<int>(indices.size()));
    f.add_component(indices, c);
    return f;
}

double KForm::operator[](const MultiIndex& idx) const {
    if (idx.ambient_dim() != n_ || idx.degree() != k_)
        throw std::invalid_argument("multi-index does not match form shape");
    return c_[subset_rank(n_, idx.mask())];
}

double KForm::component(std::span<const int> idx) const {
    if (static_cast<int>(idx.size()) != k_) throw std::invalid_argument("component arity mismatch");
    auto [mask, sign] = sort_tuple(idx, n_);
    if (sign == 0) return 0.0;
    return sign * c_[subset_rank(n_, mask)];
}

void KForm::add_component(std::span<const int> idx, double v) {
    if (static_cast<int>(idx.size()) != k_) throw std::invalid_argument("component arity mismatch");
    auto [mask, sign] = sort_tuple(idx, n_);
    if (sign == 0) return;
    c_[subset_rank(n_, mask)] += sign * v;
}

double KForm::max_abs() const {
    double m = 0.0;
    for (double x : c_) m = std::max(m, std::abs(x));
    return m;
}

KForm& KForm::operator+=(const KForm& o) {
    check_same_shape(*this, o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

KForm& KForm::operator-=(const KForm& o) {
    check_same_shape(*this, o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

KForm& KForm::operator*=(double s) {
    for (double& x : c_) x *= s;
    return *this;
}

KForm operator+(KForm a, const KForm& b) { return a += b; }
KForm operator-(KForm a, const KForm& b) { return a -= b; }
KForm operator*(double s, KForm a) { return a *= s; }
KForm operator*(KForm a, double s) { return a *= s; }
KForm operator-(KForm a) { return a *= -1.0; }

// ---------------------------------------------------------------- SymTensor2

SymTensor2::SymTensor2(const Mat& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("symmetric tensor needs a square matrix");
    m_ = 0.5 * (m + m.transpose());
}

SymTensor2 SymTensor2::identity(int n) { return SymTensor2(Mat::Identity(n, n)); }
SymTensor2 SymTensor2::zero(int n) { return SymTensor2(Mat::Zero(n, n)); }

bool SymTensor2::is_positive_definite() const {
    Eigen::LLT<Mat> llt(m_);
    return llt.info() == Eigen::Success;
}

// ---------------------------------------------------------------- operations

KForm wedge(const KForm& a, const KForm& b) {
    if (a.ambient_dim() != b.ambient_dim()) throw std::invalid_argument("wedge: dimension mismatch");
    const int n = a.ambient_dim();
    if (a.degree() + b.degree() > n) throw std::invalid_argument("wedge: total degree exceeds dimension");
    KForm out(n, a.degree() + b.degree());
    const auto& ma = subsets(n, a.degree());
    const auto& mb = subsets(n, b.degree());
    for (std::size_t i = 0; i < ma.size(); ++i) {
        const double ca = a.coeff(i);
        if (ca == 0.0) continue;
        for (std::size_t j = 0; j < mb.size(); ++j) {
            const double cb = b.coeff(j);
            if (cb == 0.0 || (ma[i] & mb[j])) continue;
            out.coeff(subset_rank(n, ma[i] | mb[j])) += merge_sign(ma[i], mb[j]) * ca * cb;
        }
    }
    return out;
}

KForm interior(const Vec& v, const KForm& a) {
    const int n = a.ambient_dim();
    if (v.size() != n) throw std::invalid_argument("interior: vector length mismatch");
    if (a.degree() == 0) throw std::invalid_argument("interior product of a 0-form");
    KForm out(n, a.degree() - 1);
    const auto& masks = subsets(n, a.degree());
    for (std::size_t r = 0; r < masks.size(); ++r) {
        const double c = a.coeff(r);
        if (c == 0.0) continue;
        int pos = 0;
        for (unsigned m = masks[r]; m; m &= m - 1, ++pos) {
            int i = std::countr_zero(m);
            if (v[i] == 0.0) continue;
            out.coeff(subset_rank(n, masks[r] & ~(1u << i))) += ((pos & 1) ? -1.0 : 1.0) * v[i] * c;
        }
    }
    return out;
}

KForm hodge_star(const KForm& a) {
    const int n = a.ambient_dim();
    const unsigned full = (1u << n) - 1;
    KForm out(n, n - a.degree());
    const auto& masks = subsets(n, a.degree());
    for (std::size_t r = 0; r < masks.size(); ++r) {
        const unsigned comp = full & ~masks[r];
        out.coeff(subset_rank(n, comp)) += merge_sign(masks[r], comp) * a.coeff(r);
    }
    return out;
}

namespace {

// Orthonormal frame F (columns) and coframe matrix L^T for a metric G = L L^T.
struct MetricFrame {
    Mat frame;
    Mat coframe;
};

MetricFrame metric_frame(const SymTensor2& metric) {
    Eigen::LLT<Mat> llt(metric.matrix());
    if (llt.info() != Eigen::Success) throw std::domain_error("metric is not positive definite");
    Mat L = llt.matrixL();
    Mat Lt = L.transpose();
    Mat F = Lt.inverse();
    return {F, Lt};
}

}  // namespace

KForm hodge_star(const KForm& a, const SymTensor2& metric, int orientation) {
    if (metric.dim() != a.ambient_dim()) throw std::invalid_argument("hodge_star: metric dimension mismatch");
    if (orientation != 1 && orientation != -1) throw std::invalid_argument("orientation must be +1 or -1");
    const auto mf = metric_frame(metric);
    KForm in_frame = pullback(a, mf.frame);
    KForm starred = hodge_star(in_frame);
    return static_cast<double>(orientation) * pullback(starred, mf.coframe);
}

double form_inner(const KForm& a, const KForm& b) {
    check_same_shape(a, b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.coeff(i) * b.coeff(i);
    return s;
}

double form_inner(const KForm& a, const KForm& b, const SymTensor2& metric) {
    check_same_shape(a, b);
    if (metric.dim() != a.ambient_dim()) throw std::invalid_argument("form_inner: metric dimension mismatch");
    const auto mf = metric_frame(metric);
    return form_inner(pullback(a, mf.frame), pullback(b, mf.frame));
}

template <int K>
double evaluate_sized(const KForm& a, const Mat& vectors) {
    const int k = a.degree();
    const auto& masks = subsets(a.ambient_dim(), k);
    Eigen::Matrix<double, K, K> sub(k, k);
    double s = 0.0;
    for (std::size_t r = 0; r < masks.size(); ++r) {
        const double c = a.coeff(r);
        if (c == 0.0) continue;
        int row = 0;
        for (unsigned m = masks[r]; m; m &= m - 1) sub.row(row++) = vectors.row(std::countr_zero(m));
        s += c * sub.determinant();
    }
    return s;
}

double evaluate(const KForm& a, const Mat& vectors) {
    const int n = a.ambient_dim();
    const int k = a.degree();
    if (vectors.rows() != n || vectors.cols() != k)
        throw std::invalid_argument("evaluate: expected " + std::to_string(k) + " vectors of length " +
                                    std::to_string(n));
    switch (k) {
        case 0: return a.coeff(0);
        // closed-form determinants for the small sizes that dominate the quadrature loops
        case 1: return evaluate_sized<1>(a, vectors);
        case 2: return evaluate_sized<2>(a, vectors);
        case 3: return evaluate_sized<3>(a, vectors);
        case 4: return evaluate_sized<4>(a, vectors);
        default: return evaluate_sized<Eigen::Dynamic>(a, vectors);
    }
}

KForm pullback(const KForm& a, const Mat& T) {
    const int n = a.ambient_dim();
    const int k = a.degree();
    if (T.rows() != n || T.cols() != n) throw std::invalid_argument("pullback: map must be n x n");
    KForm out(n, k);
    const auto& masks = subsets(n, k);
    Mat cols(n, k);
    for (std::size_t r = 0; r < masks.size(); ++r) {
        int c = 0;
        for (unsigned m = masks[r]; m; m &= m - 1) cols.col(c++) = T.col(std::countr_zero(m));
        out.coeff(r) = evaluate(a, cols);
    }
    return out;
}

OrientedFrame gram_schmidt_adapt(const Mat& tangent_basis, const SymTensor2& metric, double rank_tol) {
    const int n = static_cast<int>(tangent_basis.rows());
    const int k = static_cast<int>(tangent_basis.cols());
    if (metric.dim() != n) throw std::invalid_argument("gram_schmidt_adapt: metric dimension mismatch");
    if (k > n) throw std::invalid_argument("gram_schmidt_adapt: more tangent vectors than dimension");
    if (!metric.is_positive_definite()) throw std::domain_error("metric is not positive definite");
    const Mat& G = metric.matrix();

    Mat out(n, n);
    Mat Gout(n, n);  // G * out.col(j)
    int filled = 0;
    // Two passes of modified Gram-Schmidt keep the frame orthonormal to ~1e-15.
    auto residual = [&](Vec v) {
        for (int pass = 0; pass < 2; ++pass)
            for (int j = 0; j < filled; ++j) v -= Gout.col(j).dot(v) * out.col(j);
        return v;
    };
    auto push = [&](const Vec& q) {
        out.col(filled) = q;
        Gout.col(filled++) = G * q;
    };

    for (int j = 0; j < k; ++j) {
        Vec v = tangent_basis.col(j);
        const double scale = std::max(1.0, std::sqrt(std::max(0.0, v.dot(G * v))));
        Vec r = residual(v);
        const double nr = std::sqrt(std::max(0.0, r.dot(G * r)));
        if (nr < rank_tol * scale) throw std::domain_error("tangent basis is rank deficient");
        push(r / nr);
    }
    // Complete with the coordinate vector whose residual is largest.
    while (filled < n) {
        double best_norm = -1.0;
        Vec best_r;
        for (int i = 0; i < n; ++i) {
            Vec r = residual(Vec::Unit(n, i));
            const double nr = std::sqrt(std::max(0.0, r.dot(G * r)));
            if (nr > best_norm) {
                best_norm = nr;
                best_r = r;
            }
        }
        push(best_r / best_norm);
    }

    OrientedFrame f;
    f.n = n;
    f.k = k;
    f.vectors = out;
    const double det = out.determinant();
    if (k < n && det < 0) f.vectors.col(n - 1) *= -1.0;
    f.orientation = (f.vectors.determinant() > 0) ? 1 : -1;
    return f;
}

Mat orthonormal_tangent(const Mat& J, const SymTensor2& metric) {
    if (metric.dim() != J.rows()) throw std::invalid_argument("orthonormal_tangent: metric dimension mismatch");
    const Eigen::LLT<Mat> llt(J.transpose() * metric.matrix() * J);
    if (llt.info() != Eigen::Success) throw std::domain_error("tangent basis is rank deficient");
    return llt.matrixU().solve<Eigen::OnTheRight>(J);
}

// ------------------------------------------------------------ dense expansions

std::size_t IntTensor::offset(std::span<const int> idx) const {
    std::size_t off = 0;
    for (int i : idx) off = off * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
    return off;
}

std::int64_t IntTensor::operator()(std::initializer_list<int> idx) const {
    return data[offset(std::span<const int>(idx.begin(), idx.size()))];
}

namespace {

template <class Visit>
void for_each_permutation_entry(const KForm& a, Visit&& visit) {
    const int n = a.ambient_dim();
    const int k = a.degree();
    const auto& masks = subsets(n, k);
    std::vector<int> sorted(k), perm(k);
    for (std::size_t r = 0; r < masks.size(); ++r) {
        const double c = a.coeff(r);
        if (c == 0.0) continue;
        int p = 0;
        for (unsigned m = masks[r]; m; m &= m - 1) sorted[p++] = std::countr_zero(m);
        for (int i = 0; i < k; ++i) perm[i] = i;
        do {
            int inv = 0;
            for (int i = 0; i < k; ++i)
                for (int j = i + 1; j < k; ++j) inv += perm[i] > perm[j];
            std::vector<int> tuple(k);
            for (int i = 0; i < k; ++i) tuple[i] = sorted[perm[i]];
            visit(tuple, (inv & 1) ? -c : c);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
}

}  // namespace

IntTensor expand_integer(const KForm& a) {
    IntTensor t;
    t.n = a.ambient_dim();
    t.rank = a.degree();
    std::size_t total = 1;
    for (int i = 0; i < t.rank; ++i) total *= static_cast<std::size_t>(t.n);
    t.data.assign(total, 0);
    for (double c : a.coeffs())
        if (c != std::round(c)) throw std::invalid_argument("expand_integer: non-integral coefficient");
    for_each_permutation_entry(a, [&](const std::vector<int>& tuple, double v) {
        t.data[t.offset(tuple)] = static_cast<std::int64_t>(std::llround(v));
    });
    return t;
}

std::vector<SkewEntry> expand_skew(const KForm& a) {
    std::vector<SkewEntry> out;
    for_each_permutation_entry(a, [&](const std::vector<int>& tuple, double v) {
        SkewEntry e;
        for (std::size_t i = 0; i < tuple.size(); ++i) e.idx[i] = static_cast<std::int8_t>(tuple[i]);
        e.value = v;
        out.push_back(e);
    });
    return out;
}

}  // namespace caliblab
