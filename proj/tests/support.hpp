#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "qrac/cmatrix.hpp"
#include "qrac/mub.hpp"

namespace qrac::testing {

inline CMatrix random_matrix(std::size_t d, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    CMatrix m(d);
    for (auto& z : m.data()) z = cplx(g(rng), g(rng));
    return m;
}

inline Basis random_basis(std::size_t d, std::mt19937_64& rng, std::size_t index = 0) {
    return Basis{gram_schmidt(random_matrix(d, rng)), index, "random"};
}

// Column i has amplitudes exp(2 pi i (i j + s j^2) / d) / sqrt(d).
inline Basis chirp_basis(std::size_t d, std::size_t s, std::size_t index) {
    CMatrix m(d);
    const double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const auto e = (i * j + s * j * j) % d;
            m(j, i) = std::polar(amp, 2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(d));
        }
    }
    return Basis{std::move(m), index, "chirp"};
}

// Multiplies every column by an independent random phase.
inline Basis rephase_columns(const Basis& b, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
    Basis out = b;
    for (std::size_t c = 0; c < b.dim(); ++c) {
        const cplx ph = std::polar(1.0, u(rng));
        for (auto& z : out.matrix.col(c)) z *= ph;
    }
    return out;
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

inline const std::vector<std::size_t>& small_prime_powers() {
    static const std::vector<std::size_t> v{2, 3, 4, 5, 7, 8, 9};
    return v;
}

}  // namespace qrac::testing
