#include "gne/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gne {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxSweeps = 100;

void require(bool ok, const char* what) {
    if (!ok) throw DimensionError(what);
}

}  // namespace

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
    Matrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return {};
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        require(rows[r].size() == m.cols(), "Matrix::from_rows: ragged rows");
        std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
    }
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

double Matrix::max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

bool Matrix::all_finite() const noexcept { return gne::all_finite(data_); }

// ---------------------------------------------------------------- vector kernels

double dot(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size(), "dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double squared_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

double norm(std::span<const double> v) { return std::sqrt(squared_norm(v)); }

bool all_finite(std::span<const double> v) noexcept {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

Vector matvec(const Matrix& m, std::span<const double> v) {
    require(m.cols() == v.size(), "matvec: M.cols != v.len");
    Vector out(m.rows(), 0.0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        double s = 0.0;
        for (std::size_t c = 0; c < row.size(); ++c) s += row[c] * v[c];
        out[r] = s;
    }
    return out;
}

Vector matvec_transposed(const Matrix& m, std::span<const double> v) {
    require(m.rows() == v.size(), "matvec_transposed: M.rows != v.len");
    Vector out(m.cols(), 0.0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) out[c] += row[c] * v[r];
    }
    return out;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.rows(), "matmul: inner dimensions differ");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

Matrix symmetric_part(const Matrix& m) {
    require(m.rows() == m.cols(), "symmetric_part: matrix not square");
    Matrix s(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) s(i, j) = 0.5 * (m(i, j) + m(j, i));
    return s;
}

// ---------------------------------------------------------------- spectral

SingularValueDecomposition jacobi_svd(const Matrix& m) {
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    Matrix u = m;
    Matrix v = Matrix::identity(cols);

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < cols; ++p) {
            for (std::size_t q = p + 1; q < cols; ++q) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t i = 0; i < rows; ++i) {
                    alpha += u(i, p) * u(i, p);
                    beta += u(i, q) * u(i, q);
                    gamma += u(i, p) * u(i, q);
                }
                if (gamma == 0.0 || std::abs(gamma) <= kEps * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
                const double c = 1.0 / std::hypot(1.0, t);
                const double s = c * t;
                for (std::size_t i = 0; i < rows; ++i) {
                    const double up = u(i, p), uq = u(i, q);
                    u(i, p) = c * up - s * uq;
                    u(i, q) = s * up + c * uq;
                }
                for (std::size_t i = 0; i < cols; ++i) {
                    const double vp = v(i, p), vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }

    Vector sigma(cols);
    for (std::size_t k = 0; k < cols; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < rows; ++i) s += u(i, k) * u(i, k);
        sigma[k] = std::sqrt(s);
    }

    std::vector<std::size_t> order(cols);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

    SingularValueDecomposition out{Matrix(rows, cols), Vector(cols), Matrix(cols, cols)};
    for (std::size_t k = 0; k < cols; ++k) {
        const std::size_t src = order[k];
        out.sigma[k] = sigma[src];
        for (std::size_t i = 0; i < cols; ++i) out.v(i, k) = v(i, src);
        if (sigma[src] > 0.0)
            for (std::size_t i = 0; i < rows; ++i) out.u(i, k) = u(i, src) / sigma[src];
    }
    return out;
}

double rank_tolerance(std::size_t rows, std::size_t cols, double sigma_max) noexcept {
    return kEps * static_cast<double>(std::max(rows, cols)) * sigma_max;
}

ExtremeSingularValues singular_values_extreme(const Matrix& m) {
    if (m.empty()) throw NumericsError("singular_values_extreme: zero matrix");
    const auto svd = jacobi_svd(m);
    const double smax = svd.sigma.front();
    const double tau = rank_tolerance(m.rows(), m.cols(), smax);
    if (!(smax > 0.0)) throw NumericsError("singular_values_extreme: zero matrix");

    ExtremeSingularValues out;
    out.sigma_max = smax;
    for (double s : svd.sigma) {
        if (s > tau) {
            out.sigma_min_positive = s;
            ++out.rank;
        }
    }
    out.kernel_dim = m.cols() - out.rank;
    return out;
}

Vector min_norm_least_squares(const Matrix& m, std::span<const double> rhs) {
    require(m.rows() == rhs.size(), "min_norm_least_squares: M.rows != rhs.len");
    Vector out(m.cols(), 0.0);
    if (m.empty()) return out;
    const auto svd = jacobi_svd(m);
    const double tau = rank_tolerance(m.rows(), m.cols(), svd.sigma.front());
    for (std::size_t k = 0; k < m.cols(); ++k) {
        const double s = svd.sigma[k];
        if (!(s > tau)) break;
        double coef = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) coef += svd.u(i, k) * rhs[i];
        coef /= s;
        for (std::size_t i = 0; i < m.cols(); ++i) out[i] += coef * svd.v(i, k);
    }
    return out;
}

SymmetricEigen symmetric_eigen(const Matrix& m) {
    require(m.rows() == m.cols(), "symmetric_eigen: matrix not square");
    const std::size_t n = m.rows();
    Matrix a = symmetric_part(m);
    Matrix v = Matrix::identity(n);

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0, diag = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            diag += a(i, i) * a(i, i);
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        }
        if (off <= kEps * kEps * diag || off == 0.0) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(1.0, theta));
                const double c = 1.0 / std::hypot(1.0, t);
                const double s = c * t;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
    SymmetricEigen out{Vector(n), Matrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

// ---------------------------------------------------------------- random streams

std::uint64_t mix64(std::uint64_t x) noexcept {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ULL);
    for (std::uint64_t p : path) h = mix64(h + 0x9e3779b97f4a7c15ULL + mix64(p + 0x3c6ef372fe94f82bULL));
    return h;
}

std::uint64_t RngStream::next_u64() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
}

double RngStream::uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::standard_normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double x, y, s;
    do {
        x = 2.0 * uniform() - 1.0;
        y = 2.0 * uniform() - 1.0;
        s = x * x + y * y;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = y * f;
    has_spare_ = true;
    return x * f;
}

Vector sample_std_normal(RngStream& rng, std::size_t len) {
    if (len == 0) throw std::invalid_argument("sample_std_normal: len must be >= 1");
    Vector out(len);
    for (double& v : out) v = rng.standard_normal();
    return out;
}

// ---------------------------------------------------------------- Gaussian identities

bool IdentityEstimate::within(double k) const noexcept {
    for (std::size_t i = 0; i < estimate.size(); ++i)
        if (!(std::abs(estimate[i] - closed_form[i]) <= k * std_error[i])) return false;
    return true;
}

namespace {

// Welford accumulator over vector-valued samples.
struct RunningMoments {
    explicit RunningMoments(std::size_t dim) : mean(dim, 0.0), m2(dim, 0.0) {}
    void add(std::span<const double> x) {
        ++count;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double delta = x[i] - mean[i];
            mean[i] += delta / static_cast<double>(count);
            m2[i] += delta * (x[i] - mean[i]);
        }
    }
    Vector std_error() const {
        Vector out(mean.size(), 0.0);
        if (count < 2) return out;
        const double nn = static_cast<double>(count);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::sqrt(m2[i] / (nn - 1.0) / nn);
        return out;
    }
    std::size_t count = 0;
    Vector mean;
    Vector m2;
};

}  // namespace

GaussianIdentityReport gaussian_identity_check(std::span<const double> a, std::span<const double> b,
                                               std::size_t block_j, std::size_t d, std::size_t n,
                                               std::size_t samples, RngStream& rng) {
    const std::size_t dim = n * d;
    require(a.size() == dim && b.size() == dim, "gaussian_identity_check: a, b must have length n*d");
    require(block_j < n, "gaussian_identity_check: block index out of range");
    const std::size_t lo = block_j * d;
    const double dd = static_cast<double>(d);

    RunningMoments k1(1), k2(1), k3(1), k4(d);
    Vector buf(d);
    for (std::size_t s = 0; s < samples; ++s) {
        const Vector u = sample_std_normal(rng, dim);
        const double au = dot(a, u);
        const double bu = dot(b, u);
        double uj2 = 0.0;
        for (std::size_t k = 0; k < d; ++k) uj2 += u[lo + k] * u[lo + k];
        const double v1 = au * bu * uj2;
        const double v2 = au * bu * (uj2 - dd);
        const double v3 = bu * bu * (uj2 - dd);
        k1.add(std::span<const double>(&v1, 1));
        k2.add(std::span<const double>(&v2, 1));
        k3.add(std::span<const double>(&v3, 1));
        for (std::size_t k = 0; k < d; ++k) buf[k] = au * u[lo + k];
        k4.add(buf);
    }

    double ab = dot(a, b);
    double apb = 0.0, pb2 = 0.0;
    Vector pa(d);
    for (std::size_t k = 0; k < d; ++k) {
        apb += a[lo + k] * b[lo + k];
        pb2 += b[lo + k] * b[lo + k];
        pa[k] = a[lo + k];
    }

    GaussianIdentityReport rep;
    rep.identities[0] = {"key1", k1.mean, {dd * ab + 2.0 * apb}, k1.std_error()};
    rep.identities[1] = {"key2", k2.mean, {2.0 * apb}, k2.std_error()};
    rep.identities[2] = {"key3", k3.mean, {2.0 * pb2}, k3.std_error()};
    rep.identities[3] = {"key4", k4.mean, pa, k4.std_error()};
    return rep;
}

}  // namespace gne
