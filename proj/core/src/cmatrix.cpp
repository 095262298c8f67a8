#include "qrac/cmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qrac/error.hpp"

namespace qrac {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kJacobiRelTol = 1e-15;
constexpr double kTieTol = 1e-12;

// One complex Jacobi rotation zeroing a(p,q); a is n x n column-major.
// V = diag(1, e^{-i alpha}) * [[c, s], [-s, c]] restricted to (p, q).
inline void rotate(cplx* a, std::size_t n, std::size_t p, std::size_t q, cplx* w) {
    const cplx apq = a[q * n + p];
    const double mag = std::abs(apq);
    const double app = a[p * n + p].real();
    const double aqq = a[q * n + q].real();
    const double tau = (aqq - app) / (2.0 * mag);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    const cplx phase = std::conj(apq) / mag;  // e^{-i alpha}

    const cplx vpp = c;
    const cplx vpq = s;
    const cplx vqp = -s * phase;
    const cplx vqq = c * phase;

    // A <- A V (columns p, q)
    cplx* cp = a + p * n;
    cplx* cq = a + q * n;
    for (std::size_t k = 0; k < n; ++k) {
        const cplx xp = cp[k];
        const cplx xq = cq[k];
        cp[k] = xp * vpp + xq * vqp;
        cq[k] = xp * vpq + xq * vqq;
    }
    // A <- V^dagger A (rows p, q)
    for (std::size_t k = 0; k < n; ++k) {
        cplx& yp = a[k * n + p];
        cplx& yq = a[k * n + q];
        const cplx xp = yp;
        const cplx xq = yq;
        yp = std::conj(vpp) * xp + std::conj(vqp) * xq;
        yq = std::conj(vpq) * xp + std::conj(vqq) * xq;
    }
    a[p * n + p] = app - t * mag;
    a[q * n + q] = aqq + t * mag;
    a[q * n + p] = 0.0;
    a[p * n + q] = 0.0;

    if (w != nullptr) {
        cplx* wp = w + p * n;
        cplx* wq = w + q * n;
        for (std::size_t k = 0; k < n; ++k) {
            const cplx xp = wp[k];
            const cplx xq = wq[k];
            wp[k] = xp * vpp + xq * vqp;
            wq[k] = xp * vpq + xq * vqq;
        }
    }
}

// Cyclic Jacobi; diagonal of a holds the eigenvalues on return.
void jacobi(cplx* a, std::size_t n, cplx* w) {
    double fro2 = 0.0;
    for (std::size_t i = 0; i < n * n; ++i) fro2 += std::norm(a[i]);
    const double threshold = kJacobiRelTol * std::sqrt(fro2);
    for (std::size_t i = 0; i < n; ++i) a[i * n + i] = a[i * n + i].real();

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[q * n + p]) > threshold) {
                    rotate(a, n, p, q, w);
                    rotated = true;
                }
            }
        }
        if (!rotated) return;
    }
    throw Error(ErrorKind::NoConvergence,
                "Jacobi iteration exceeded " + std::to_string(kMaxSweeps) + " sweeps");
}

bool lex_less(const CVector& a, const CVector& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
        if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
    }
    return false;
}

}  // namespace

CMatrix CMatrix::identity(std::size_t dim) {
    CMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix out(dim_);
    for (std::size_t c = 0; c < dim_; ++c) {
        for (std::size_t r = 0; r < dim_; ++r) out(c, r) = std::conj((*this)(r, c));
    }
    return out;
}

double CMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "matrix product");
    const std::size_t n = a.dim();
    CMatrix out(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            const cplx bkj = b(k, j);
            if (bkj == cplx{}) continue;
            for (std::size_t i = 0; i < n; ++i) out(i, j) += a(i, k) * bkj;
        }
    }
    return out;
}

CMatrix operator+(const CMatrix& a, const CMatrix& b) {
    if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "matrix sum");
    CMatrix out = a;
    for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] += b.data()[i];
    return out;
}

cplx inner(std::span<const cplx> u, std::span<const cplx> v) {
    if (u.size() != v.size()) {
        throw Error(ErrorKind::DimensionMismatch,
                    std::to_string(u.size()) + " vs " + std::to_string(v.size()));
    }
    cplx s{};
    for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
    return s;
}

double norm(std::span<const cplx> v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

bool is_normalized(std::span<const cplx> v) { return std::abs(norm(v) - 1.0) <= kNormalizedTol; }

double unitarity_deviation(const CMatrix& m) {
    const std::size_t n = m.dim();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const cplx g = inner(m.col(i), m.col(j)) - (i == j ? 1.0 : 0.0);
            worst = std::max(worst, std::abs(g));
        }
    }
    return worst;
}

double hermiticity_deviation(const CMatrix& m) {
    const std::size_t n = m.dim();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
        }
    }
    return worst;
}

bool is_unitary(const CMatrix& m) { return unitarity_deviation(m) <= kUnitaryTol; }
bool is_hermitian(const CMatrix& m) { return hermiticity_deviation(m) <= kHermitianTol; }

void fix_global_phase(std::span<cplx> v) {
    double peak = 0.0;
    for (const auto& z : v) peak = std::max(peak, std::abs(z));
    if (peak == 0.0) return;
    for (const auto& z : v) {
        const double mag = std::abs(z);
        if (mag > 1e-8 * peak) {
            const cplx rot = std::conj(z) / mag;
            for (auto& x : v) x *= rot;
            return;
        }
    }
}

Eigensystem eigh(const CMatrix& h) {
    if (!is_hermitian(h)) {
        throw Error(ErrorKind::NotHermitian,
                    "max |H - H^dagger| = " + std::to_string(hermiticity_deviation(h)));
    }
    const std::size_t n = h.dim();
    std::vector<cplx> a(h.data().begin(), h.data().end());
    // Symmetrize exactly so the rotations see a Hermitian matrix.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx avg = 0.5 * (a[j * n + i] + std::conj(a[i * n + j]));
            a[j * n + i] = avg;
            a[i * n + j] = std::conj(avg);
        }
    }
    CMatrix w = CMatrix::identity(n);
    jacobi(a.data(), n, w.data().data());

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a[x * n + x].real() > a[y * n + y].real();
    });

    Eigensystem es;
    es.values.reserve(n);
    es.vectors.reserve(n);
    for (std::size_t idx : order) {
        es.values.push_back(a[idx * n + idx].real());
        CVector v(w.col(idx).begin(), w.col(idx).end());
        fix_global_phase(v);
        es.vectors.push_back(std::move(v));
    }

    // Within runs of numerically equal eigenvalues, order vectors lexicographically.
    const double scale = std::max(1.0, h.frobenius_norm());
    std::size_t start = 0;
    while (start < n) {
        std::size_t end = start + 1;
        while (end < n && es.values[end - 1] - es.values[end] <= kTieTol * scale) ++end;
        if (end - start > 1) {
            std::vector<std::size_t> run(end - start);
            std::iota(run.begin(), run.end(), start);
            std::sort(run.begin(), run.end(), [&](std::size_t x, std::size_t y) {
                return lex_less(es.vectors[x], es.vectors[y]);
            });
            std::vector<CVector> vecs;
            std::vector<double> vals;
            for (std::size_t r : run) {
                vecs.push_back(es.vectors[r]);
                vals.push_back(es.values[r]);
            }
            std::sort(vals.begin(), vals.end(), std::greater<>());
            for (std::size_t i = 0; i < run.size(); ++i) {
                es.vectors[start + i] = std::move(vecs[i]);
                es.values[start + i] = vals[i];
            }
        }
        start = end;
    }
    return es;
}

double max_eigenvalue_inplace(std::span<cplx> a, std::size_t n) {
    jacobi(a.data(), n, nullptr);
    double best = a[0].real();
    for (std::size_t i = 1; i < n; ++i) best = std::max(best, a[i * n + i].real());
    return best;
}

CMatrix gram_schmidt(const CMatrix& m) {
    const std::size_t n = m.dim();
    CMatrix q(n);
    std::vector<cplx> coeff(n);
    for (std::size_t j = 0; j < n; ++j) {
        auto v = q.col(j);
        std::copy(m.col(j).begin(), m.col(j).end(), v.begin());
        const double input_norm = norm(v);
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t i = 0; i < j; ++i) coeff[i] = inner(q.col(i), v);
            for (std::size_t i = 0; i < j; ++i) {
                const auto qi = q.col(i);
                for (std::size_t r = 0; r < n; ++r) v[r] -= coeff[i] * qi[r];
            }
        }
        const double nrm = norm(v);
        if (input_norm == 0.0 || nrm < 1e-12 * input_norm) {
            throw Error(ErrorKind::RankDeficient, "column " + std::to_string(j) +
                                                      " is linearly dependent on earlier columns");
        }
        for (auto& x : v) x /= nrm;
        fix_global_phase(v);
    }
    return q;
}

}  // namespace qrac
