#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qrac/cmatrix.hpp"
#include "qrac/mub.hpp"

namespace qrac {

/// Alice's n-dit string x in Z_d^n.
class InputWord {
public:
    /// Throws DimensionMismatch when a digit is outside [0, d).
    InputWord(std::size_t d, std::vector<std::uint32_t> digits);

    std::size_t d() const noexcept { return d_; }
    std::size_t n() const noexcept { return digits_.size(); }
    std::uint32_t operator[](std::size_t i) const { return digits_[i]; }
    const std::vector<std::uint32_t>& digits() const noexcept { return digits_; }

private:
    std::size_t d_;
    std::vector<std::uint32_t> digits_;
};

/// Bob's question distribution p_i.
class RequestWeights {
public:
    /// Throws WeightError unless p_i >= 0 and sum p_i = 1 within 1e-12.
    explicit RequestWeights(std::vector<double> p);
    static RequestWeights uniform(std::size_t n);

    std::size_t n() const noexcept { return p_.size(); }
    double operator[](std::size_t i) const { return p_[i]; }
    const std::vector<double>& values() const noexcept { return p_; }

private:
    std::vector<double> p_;
};

/// Hermitian score operator sum_i p_i |xi_{x_i}^(i)><xi_{x_i}^(i)| and its spectrum.
struct PhatOperator {
    CMatrix matrix;
    InputWord word;
    RequestWeights weights;
    Eigensystem spectrum;
};

struct PhiRecord {
    double phi01 = 0.0;
    double phi02 = 0.0;
    double phi12 = 0.0;
    double varphi = 0.0;  // phi01 - phi02 + phi12
    double Phi = 0.0;     // varphi wrapped into [-pi, pi)
};

enum class Method { Analytic, Eigensolver };

struct QracValue {
    double value = 0.0;
    Method method = Method::Eigensolver;
    std::vector<double> per_word;  // lambda_m per word in odometer order, when requested
};

struct WordOptimum {
    double lambda = 0.0;
    CVector state;
};

inline constexpr double kPhaseUnbiasedTol = 1e-8;
inline constexpr std::uint64_t kWordBudget = 100'000'000;

/// Builds and certifies the score operator. Throws DimensionMismatch, WeightError.
PhatOperator phat(std::span<const Basis* const> bases, const InputWord& word,
                  const RequestWeights& weights);

/// Largest eigenvalue and matching eigenvector (Alice's optimal pure encoding).
WordOptimum word_optimum(const PhatOperator& op);

struct GeneralOptions {
    bool keep_per_word = false;
    unsigned threads = 0;  // 0: hardware concurrency
};

/// Average of lambda_m over all d^n words (uniform). Each lambda_m is the top
/// eigenvalue of the n x n weighted Gram matrix sqrt(p_k p_l) <xi_k|xi_l>,
/// whose nonzero spectrum equals that of the d x d score operator.
/// Throws BudgetExceeded when d^n > 10^8.
QracValue p_general(std::span<const Basis* const> bases, const RequestWeights& weights,
                    const GeneralOptions& options = {});
QracValue p_general(std::span<const Basis> bases, const RequestWeights& weights,
                    const GeneralOptions& options = {});

/// Wraps an angle into [-pi, pi) by subtracting 2k*pi.
double wrap_phase(double phi) noexcept;

/// Throws NotUnbiased when any of the three overlaps is not 1/sqrt(d) within 1e-8.
PhiRecord phi_of(const Basis& c, const Basis& e, const Basis& f, const InputWord& word);

/// (1/3)(1 + (2/sqrt d) cos(Phi/3)) and the matching normalized eigenstate.
WordOptimum p_bar_analytic(const Basis& c, const Basis& e, const Basis& f, const InputWord& word);

/// The three nonzero eigenvalues lambda_0 >= lambda_1, lambda_2 of the n = 3
/// MUB score operator as functions of Phi.
std::array<double, 3> triplet_eigenvalues(double Phi, std::size_t d) noexcept;

/// Closed-form average over all d^3 words. Throws NotUnbiased.
QracValue p3_analytic(const Basis& c, const Basis& e, const Basis& f);

enum class ClassicalMode { Identity, Brute };

/// Classical RAC success probability. Identity: send x_0 verbatim. Brute:
/// exhaustive maximum over deterministic encodings Z_d^n -> Z_d and per-question
/// decodings, for (n, d) in {(2,2), (2,3), (3,2)} only (else BudgetExceeded).
double classical_baseline(std::size_t n, std::size_t d, ClassicalMode mode);

}  // namespace qrac
