#include "qrac/qrac.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "qrac/error.hpp"
#include "qrac/parallel.hpp"

namespace qrac {

namespace {

constexpr double kWeightTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kPsdTol = 1e-10;
constexpr std::size_t kWordsPerChunk = 4096;

void require_same_dim(std::span<const Basis* const> bases) {
    if (bases.empty()) throw Error(ErrorKind::DimensionMismatch, "no bases given");
    for (const Basis* b : bases) {
        if (b->dim() != bases.front()->dim()) throw Error(ErrorKind::DimensionMismatch, "bases differ in dimension");
    }
}

// <a_i | b_j> for all i, j, row-major in i.
std::vector<cplx> overlap_table(const Basis& a, const Basis& b) {
    const std::size_t d = a.dim();
    std::vector<cplx> t(d * d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) t[i * d + j] = inner(a.state(i), b.state(j));
    }
    return t;
}

// arg of every overlap, after checking |overlap| = 1/sqrt(d).
std::vector<double> phase_table(const Basis& a, const Basis& b) {
    const std::size_t d = a.dim();
    const double target = 1.0 / std::sqrt(static_cast<double>(d));
    const auto t = overlap_table(a, b);
    std::vector<double> out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double mag = std::abs(t[i]);
        if (std::abs(mag - target) > kPhaseUnbiasedTol) {
            throw Error(ErrorKind::NotUnbiased, "overlap magnitude " + std::to_string(mag) +
                                                    " differs from 1/sqrt(d) = " + std::to_string(target));
        }
        out[i] = std::arg(t[i]);
    }
    return out;
}

void require_triplet(const Basis& c, const Basis& e, const Basis& f) {
    if (c.dim() != e.dim() || c.dim() != f.dim()) throw Error(ErrorKind::DimensionMismatch, "triplet dims");
}

}  // namespace

InputWord::InputWord(std::size_t d, std::vector<std::uint32_t> digits) : d_(d), digits_(std::move(digits)) {
    for (auto x : digits_) {
        if (x >= d_) throw Error(ErrorKind::DimensionMismatch, "digit " + std::to_string(x) + " outside Z_" + std::to_string(d_));
    }
}

RequestWeights::RequestWeights(std::vector<double> p) : p_(std::move(p)) {
    if (p_.empty()) throw Error(ErrorKind::WeightError, "empty weight vector");
    double sum = 0.0;
    for (double w : p_) {
        if (!(w >= 0.0)) throw Error(ErrorKind::WeightError, "negative weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > kWeightTol) throw Error(ErrorKind::WeightError, "weights sum to " + std::to_string(sum));
}

RequestWeights RequestWeights::uniform(std::size_t n) {
    return RequestWeights(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

PhatOperator phat(std::span<const Basis* const> bases, const InputWord& word, const RequestWeights& weights) {
    require_same_dim(bases);
    const std::size_t n = bases.size();
    const std::size_t d = bases.front()->dim();
    if (word.n() != n || word.d() != d) throw Error(ErrorKind::DimensionMismatch, "word does not match bases");
    if (weights.n() != n) throw Error(ErrorKind::WeightError, "need one weight per basis");

    CMatrix m(d);
    for (std::size_t i = 0; i < n; ++i) {
        const auto v = bases[i]->state(word[i]);
        const double w = weights[i];
        for (std::size_t c = 0; c < d; ++c) {
            const cplx vc = std::conj(v[c]) * w;
            for (std::size_t r = 0; r < d; ++r) m(r, c) += v[r] * vc;
        }
    }
    for (std::size_t r = 0; r < d; ++r) {
        m(r, r) = m(r, r).real();
        for (std::size_t c = r + 1; c < d; ++c) m(c, r) = std::conj(m(r, c));
    }

    cplx trace{};
    for (std::size_t r = 0; r < d; ++r) trace += m(r, r);
    const double wsum = std::accumulate(weights.values().begin(), weights.values().end(), 0.0);
    if (std::abs(trace.real() - wsum) > kTraceTol) {
        throw Error(ErrorKind::WeightError, "trace " + std::to_string(trace.real()) + " != sum of weights");
    }
    Eigensystem es = eigh(m);
    if (es.values.back() < -kPsdTol) throw Error(ErrorKind::NotHermitian, "score operator is not positive semidefinite");
    const auto nonzero = std::count_if(es.values.begin(), es.values.end(), [](double l) { return std::abs(l) > kPsdTol; });
    if (static_cast<std::size_t>(nonzero) > n) throw Error(ErrorKind::DimensionMismatch, "score operator rank exceeds n");
    return PhatOperator{std::move(m), word, weights, std::move(es)};
}

WordOptimum word_optimum(const PhatOperator& op) {
    return WordOptimum{op.spectrum.values.front(), op.spectrum.vectors.front()};
}

QracValue p_general(std::span<const Basis* const> bases, const RequestWeights& weights, const GeneralOptions& options) {
    require_same_dim(bases);
    const std::size_t n = bases.size();
    const std::size_t d = bases.front()->dim();
    if (weights.n() != n) throw Error(ErrorKind::WeightError, "need one weight per basis");

    std::uint64_t words = 1;
    for (std::size_t i = 0; i < n; ++i) {
        words *= d;
        if (words > kWordBudget) {
            throw Error(ErrorKind::BudgetExceeded, "d^n = " + std::to_string(d) + "^" + std::to_string(n) + " exceeds 10^8 words");
        }
    }

    // tables[k * n + l] = sqrt(p_k p_l) <xi^(k)_i | xi^(l)_j>, k < l
    std::vector<std::vector<cplx>> tables(n * n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = k + 1; l < n; ++l) {
            auto t = overlap_table(*bases[k], *bases[l]);
            const double s = std::sqrt(weights[k] * weights[l]);
            for (auto& z : t) z *= s;
            tables[k * n + l] = std::move(t);
        }
    }

    const std::size_t chunks = static_cast<std::size_t>((words + kWordsPerChunk - 1) / kWordsPerChunk);
    std::vector<double> chunk_sums(chunks, 0.0);
    QracValue result;
    result.method = Method::Eigensolver;
    if (options.keep_per_word) result.per_word.assign(words, 0.0);

    parallel_jobs(chunks, options.threads, [&](std::size_t chunk) {
        const std::uint64_t begin = std::uint64_t{chunk} * kWordsPerChunk;
        const std::uint64_t end = std::min<std::uint64_t>(words, begin + kWordsPerChunk);
        std::vector<std::uint32_t> x(n);
        std::uint64_t rest = begin;
        for (std::size_t i = n; i-- > 0;) {
            x[i] = static_cast<std::uint32_t>(rest % d);
            rest /= d;
        }
        std::vector<cplx> gram(n * n);
        double sum = 0.0;
        for (std::uint64_t w = begin; w < end; ++w) {
            for (std::size_t k = 0; k < n; ++k) {
                gram[k * n + k] = weights[k];
                for (std::size_t l = k + 1; l < n; ++l) {
                    const cplx g = tables[k * n + l][x[k] * d + x[l]];
                    gram[l * n + k] = g;  // (row k, col l)
                    gram[k * n + l] = std::conj(g);
                }
            }
            const double lambda = max_eigenvalue_inplace(gram, n);
            sum += lambda;
            if (options.keep_per_word) result.per_word[w] = lambda;
            for (std::size_t i = n; i-- > 0;) {
                if (++x[i] < d) break;
                x[i] = 0;
            }
        }
        chunk_sums[chunk] = sum;
    });

    result.value = tree_sum(std::move(chunk_sums)) / static_cast<double>(words);
    return result;
}

QracValue p_general(std::span<const Basis> bases, const RequestWeights& weights, const GeneralOptions& options) {
    std::vector<const Basis*> ptrs;
    ptrs.reserve(bases.size());
    for (const auto& b : bases) ptrs.push_back(&b);
    return p_general(std::span<const Basis* const>(ptrs), weights, options);
}

double wrap_phase(double phi) noexcept {
    constexpr double pi = std::numbers::pi;
    double out = phi - 2.0 * pi * std::floor((phi + pi) / (2.0 * pi));
    if (out >= pi) out -= 2.0 * pi;
    if (out < -pi) out += 2.0 * pi;
    return out;
}

PhiRecord phi_of(const Basis& c, const Basis& e, const Basis& f, const InputWord& word) {
    require_triplet(c, e, f);
    if (word.n() != 3 || word.d() != c.dim()) throw Error(ErrorKind::DimensionMismatch, "need a 3-dit word over Z_d");
    const double target = 1.0 / std::sqrt(static_cast<double>(c.dim()));
    auto checked_arg = [&](cplx z) {
        if (std::abs(std::abs(z) - target) > kPhaseUnbiasedTol) {
            throw Error(ErrorKind::NotUnbiased, "overlap magnitude " + std::to_string(std::abs(z)));
        }
        return std::arg(z);
    };
    PhiRecord r;
    r.phi01 = checked_arg(inner(c.state(word[0]), e.state(word[1])));
    r.phi02 = checked_arg(inner(c.state(word[0]), f.state(word[2])));
    r.phi12 = checked_arg(inner(e.state(word[1]), f.state(word[2])));
    r.varphi = r.phi01 - r.phi02 + r.phi12;
    r.Phi = wrap_phase(r.varphi);
    return r;
}

std::array<double, 3> triplet_eigenvalues(double Phi, std::size_t d) noexcept {
    const double a = 2.0 / std::sqrt(static_cast<double>(d));
    const double third = 2.0 * std::numbers::pi / 3.0;
    return {(1.0 + a * std::cos(Phi / 3.0)) / 3.0,
            (1.0 + a * std::cos(Phi / 3.0 + third)) / 3.0,
            (1.0 + a * std::cos(Phi / 3.0 - third)) / 3.0};
}

WordOptimum p_bar_analytic(const Basis& c, const Basis& e, const Basis& f, const InputWord& word) {
    const PhiRecord r = phi_of(c, e, f, word);
    const std::size_t d = c.dim();
    const double cos3 = std::cos(r.Phi / 3.0);
    const double sqd = std::sqrt(static_cast<double>(d));
    const double norm = std::sqrt(3.0 + 6.0 / sqd * cos3);
    const cplx pe = std::polar(1.0, r.Phi / 3.0 - r.phi01);
    const cplx pf = std::polar(1.0, -r.Phi / 3.0 - r.phi02);
    const auto vc = c.state(word[0]);
    const auto ve = e.state(word[1]);
    const auto vf = f.state(word[2]);
    CVector psi(d);
    for (std::size_t i = 0; i < d; ++i) psi[i] = (vc[i] + pe * ve[i] + pf * vf[i]) / norm;
    return WordOptimum{(1.0 + 2.0 / sqd * cos3) / 3.0, std::move(psi)};
}

QracValue p3_analytic(const Basis& c, const Basis& e, const Basis& f) {
    require_triplet(c, e, f);
    const std::size_t d = c.dim();
    const auto a01 = phase_table(c, e);
    const auto a02 = phase_table(c, f);
    const auto a12 = phase_table(e, f);
    const double amp = 2.0 / std::sqrt(static_cast<double>(d));
    std::vector<double> row_sums;
    row_sums.reserve(d * d);
    for (std::size_t x0 = 0; x0 < d; ++x0) {
        for (std::size_t x1 = 0; x1 < d; ++x1) {
            const double base = a01[x0 * d + x1];
            double s = 0.0;
            for (std::size_t x2 = 0; x2 < d; ++x2) {
                const double Phi = wrap_phase(base - a02[x0 * d + x2] + a12[x1 * d + x2]);
                s += 1.0 + amp * std::cos(Phi / 3.0);
            }
            row_sums.push_back(s);
        }
    }
    const double total = tree_sum(std::move(row_sums));
    return QracValue{total / (3.0 * static_cast<double>(d * d * d)), Method::Analytic, {}};
}

double classical_baseline(std::size_t n, std::size_t d, ClassicalMode mode) {
    if (n == 0 || d < 2) throw Error(ErrorKind::DimensionMismatch, "need n >= 1 and d >= 2");
    if (mode == ClassicalMode::Identity) {
        return (1.0 + static_cast<double>(n - 1) / static_cast<double>(d)) / static_cast<double>(n);
    }
    const bool allowed = (n == 2 && d == 2) || (n == 2 && d == 3) || (n == 3 && d == 2);
    if (!allowed) throw Error(ErrorKind::BudgetExceeded, "brute-force classical baseline limited to (2,2), (2,3), (3,2)");

    std::size_t words = 1;
    for (std::size_t i = 0; i < n; ++i) words *= d;
    std::vector<std::vector<std::size_t>> digit(words, std::vector<std::size_t>(n));
    for (std::size_t w = 0; w < words; ++w) {
        std::size_t rest = w;
        for (std::size_t i = n; i-- > 0;) {
            digit[w][i] = rest % d;
            rest /= d;
        }
    }

    std::vector<std::size_t> encoding(words, 0);
    std::size_t best = 0;
    std::vector<std::size_t> counts(d * n * d);
    for (;;) {
        // counts[(message * n + question) * d + value]
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t w = 0; w < words; ++w) {
            for (std::size_t y = 0; y < n; ++y) ++counts[(encoding[w] * n + y) * d + digit[w][y]];
        }
        // The objective is separable, so the best decoding picks the modal value per (message, question).
        std::size_t correct = 0;
        for (std::size_t m = 0; m < d; ++m) {
            for (std::size_t y = 0; y < n; ++y) {
                const auto first = counts.begin() + static_cast<std::ptrdiff_t>((m * n + y) * d);
                correct += *std::max_element(first, first + static_cast<std::ptrdiff_t>(d));
            }
        }
        best = std::max(best, correct);
        std::size_t pos = 0;
        while (pos < words && ++encoding[pos] == d) encoding[pos++] = 0;
        if (pos == words) break;
    }
    return static_cast<double>(best) / static_cast<double>(n * words);
}

}  // namespace qrac
