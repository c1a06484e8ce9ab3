#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gne {

using Vector = std::vector<double>;

/// Thrown when operand shapes do not agree.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown by spectral routines on degenerate input (e.g. a numerically zero matrix).
class NumericsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> diag);
    /// Throws DimensionError on ragged rows.
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    std::span<const double> data() const noexcept { return data_; }

    Matrix transposed() const;
    /// Largest absolute entry, 0 for an empty matrix.
    double max_abs() const noexcept;
    bool all_finite() const noexcept;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> v);
double norm(std::span<const double> v);
bool all_finite(std::span<const double> v) noexcept;

Vector matvec(const Matrix& m, std::span<const double> v);
/// mᵀ·v without forming the transpose.
Vector matvec_transposed(const Matrix& m, std::span<const double> v);
Matrix matmul(const Matrix& a, const Matrix& b);

/// Thin SVD M = U·diag(sigma)·Vᵀ. sigma has cols(M) entries sorted descending;
/// columns of U belonging to zero singular values are zero.
struct SingularValueDecomposition {
    Matrix u;
    Vector sigma;
    Matrix v;
};

/// One-sided (Hestenes) cyclic Jacobi. Each sweep applies the rotations that
/// diagonalize MᵀM implicitly, so small singular values keep full relative accuracy.
SingularValueDecomposition jacobi_svd(const Matrix& m);

/// τ = ε_machine · max(rows, cols) · σ_max.
double rank_tolerance(std::size_t rows, std::size_t cols, double sigma_max) noexcept;

struct ExtremeSingularValues {
    double sigma_max = 0.0;
    double sigma_min_positive = 0.0;
    std::size_t rank = 0;
    std::size_t kernel_dim = 0;  ///< cols - rank
};

/// Throws NumericsError("zero matrix") when every singular value is below τ.
ExtremeSingularValues singular_values_extreme(const Matrix& m);

/// Minimum-norm minimizer of ‖M·v − rhs‖ through the pseudoinverse with rank tolerance τ.
Vector min_norm_least_squares(const Matrix& m, std::span<const double> rhs);

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi; values ascending,
/// eigenvectors in the matching columns of `vectors`.
struct SymmetricEigen {
    Vector values;
    Matrix vectors;
};
SymmetricEigen symmetric_eigen(const Matrix& m);

/// ½(M + Mᵀ).
Matrix symmetric_part(const Matrix& m);

/// SplitMix64 finalizer; the mixing step behind RngStream and seed derivation.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Child seed for a named sub-stream, e.g. derive_seed(seed, {t, player, role}).
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept;

/// Counter-based 64-bit generator: draw k is mix64(key + (k+1)·φ).
/// Same seed and same call sequence give the same outputs. Single owner.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) noexcept : seed_(seed), key_(mix64(seed)) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t next_u64() noexcept;
    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform() noexcept;
    /// Standard normal via the Marsaglia polar transform.
    double standard_normal() noexcept;

    /// Independent stream for (this seed, path).
    RngStream child(std::initializer_list<std::uint64_t> path) const noexcept {
        return RngStream(derive_seed(seed_, path));
    }

private:
    std::uint64_t seed_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// len i.i.d. N(0,1) draws. Throws std::invalid_argument when len == 0.
Vector sample_std_normal(RngStream& rng, std::size_t len);

/// Monte-Carlo estimate of one Gaussian moment identity next to its closed form.
struct IdentityEstimate {
    std::string name;
    Vector estimate;
    Vector closed_form;
    Vector std_error;

    /// |estimate − closed_form| ≤ k·std_error in every component.
    bool within(double k) const noexcept;
};

/// Moment identities for u ~ N(0, I_{nd}) and the block projector P_j:
///   key1  E[⟨a,u⟩⟨b,u⟩‖u^j‖²]       = aᵀ(dI + 2P_j)b
///   key2  E[⟨a,u⟩⟨b,u⟩(‖u^j‖² − d)] = 2aᵀP_j b
///   key3  E[⟨b,u⟩²(‖u^j‖² − d)]     = 2‖P_j b‖²
///   key4  E[⟨q,u⟩u^j]              = P_j q      (q = a, reported as the d-block)
struct GaussianIdentityReport {
    std::array<IdentityEstimate, 4> identities;
};

/// Blocks are contiguous, block_j is 0-based. Requires a.size() == b.size() == n·d.
GaussianIdentityReport gaussian_identity_check(std::span<const double> a, std::span<const double> b,
                                               std::size_t block_j, std::size_t d, std::size_t n,
                                               std::size_t samples, RngStream& rng);

}  // namespace gne
