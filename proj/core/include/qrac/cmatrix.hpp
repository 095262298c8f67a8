#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qrac {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

inline constexpr double kNormalizedTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kHermitianTol = 1e-12;

/// Dense square complex matrix, column-major. Column j is the j-th basis state.
class CMatrix {
public:
    CMatrix() = default;
    explicit CMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

    static CMatrix identity(std::size_t dim);

    std::size_t dim() const noexcept { return dim_; }

    cplx& operator()(std::size_t row, std::size_t col) { return data_[col * dim_ + row]; }
    const cplx& operator()(std::size_t row, std::size_t col) const { return data_[col * dim_ + row]; }

    std::span<cplx> col(std::size_t j) { return {data_.data() + j * dim_, dim_}; }
    std::span<const cplx> col(std::size_t j) const { return {data_.data() + j * dim_, dim_}; }

    std::span<const cplx> data() const noexcept { return data_; }
    std::span<cplx> data() noexcept { return data_; }

    CMatrix adjoint() const;
    double frobenius_norm() const;

    bool operator==(const CMatrix&) const = default;

private:
    std::size_t dim_ = 0;
    std::vector<cplx> data_;
};

CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator+(const CMatrix& a, const CMatrix& b);

/// Conjugate-linear in the first argument. Throws DimensionMismatch.
cplx inner(std::span<const cplx> u, std::span<const cplx> v);
double norm(std::span<const cplx> v);
bool is_normalized(std::span<const cplx> v);

/// max_ij |(M^dagger M - I)_ij|
double unitarity_deviation(const CMatrix& m);
/// max_ij |(M - M^dagger)_ij|
double hermiticity_deviation(const CMatrix& m);
bool is_unitary(const CMatrix& m);
bool is_hermitian(const CMatrix& m);

/// Rotates v by a global phase so its first significant component is real-positive.
void fix_global_phase(std::span<cplx> v);

struct Eigensystem {
    std::vector<double> values;    // descending
    std::vector<CVector> vectors;  // orthonormal, aligned with values
};

/// Full spectral decomposition of a Hermitian matrix (cyclic complex Jacobi).
///
/// Eigenvalues are sorted descending; numerically tied eigenvalues are
/// ordered by the lexicographic order of their phase-fixed eigenvectors.
/// Throws NotHermitian, NoConvergence.
Eigensystem eigh(const CMatrix& h);

/// Largest eigenvalue of the n x n Hermitian matrix stored column-major in
/// `a`. The buffer is overwritten. No hermiticity check; intended for hot loops.
double max_eigenvalue_inplace(std::span<cplx> a, std::size_t n);

/// Classical Gram-Schmidt with one re-orthogonalization pass, processing
/// columns in order; each output column is phase-fixed. Throws RankDeficient.
CMatrix gram_schmidt(const CMatrix& m);

}  // namespace qrac
