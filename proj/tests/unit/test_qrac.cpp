#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "qrac/error.hpp"
#include "qrac/oiscan.hpp"
#include "qrac/qrac.hpp"
#include "support.hpp"

using namespace qrac;
using namespace qrac::testing;

namespace {

constexpr double kPi = std::numbers::pi;

template <typename Fn>
ErrorKind kind_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::Usage;
}

double top_eigenvalue(std::span<const Basis* const> bases, const InputWord& w, const RequestWeights& p) {
    return word_optimum(phat(bases, w, p)).lambda;
}

// Average of the d x d top eigenvalue over all words, digits in odometer order.
double slow_average(std::span<const Basis* const> bases, const RequestWeights& p) {
    const std::size_t d = bases.front()->dim();
    const std::size_t n = bases.size();
    std::vector<std::uint32_t> digits(n, 0);
    double total = 0.0;
    std::size_t count = 0;
    for (;;) {
        total += top_eigenvalue(bases, InputWord(d, digits), p);
        ++count;
        std::size_t i = n;
        while (i > 0) {
            --i;
            if (++digits[i] < d) break;
            digits[i] = 0;
            if (i == 0) return total / static_cast<double>(count);
        }
    }
}

// Independent classical oracle: every encoding paired with every decoding
// table, success averaged over words and questions.
double classical_oracle(std::size_t n, std::size_t d) {
    std::size_t words = 1;
    for (std::size_t i = 0; i < n; ++i) words *= d;
    std::size_t enc_count = 1;
    for (std::size_t i = 0; i < words; ++i) enc_count *= d;
    std::size_t dec_per_q = 1;
    for (std::size_t i = 0; i < d; ++i) dec_per_q *= d;
    std::size_t dec_count = 1;
    for (std::size_t i = 0; i < n; ++i) dec_count *= dec_per_q;

    auto digit = [&](std::size_t w, std::size_t i) {
        for (std::size_t k = n - 1; k > i; --k) w /= d;
        return w % d;
    };
    double best = 0.0;
    for (std::size_t e = 0; e < enc_count; ++e) {
        std::vector<std::size_t> enc(words);
        std::size_t rest = e;
        for (auto& m : enc) {
            m = rest % d;
            rest /= d;
        }
        for (std::size_t t = 0; t < dec_count; ++t) {
            std::size_t hits = 0;
            for (std::size_t w = 0; w < words; ++w) {
                std::size_t table = t;
                for (std::size_t y = 0; y < n; ++y) {
                    std::size_t dec = table % dec_per_q;
                    table /= dec_per_q;
                    for (std::size_t k = 0; k < enc[w]; ++k) dec /= d;
                    if (dec % d == digit(w, y)) ++hits;
                }
            }
            best = std::max(best, static_cast<double>(hits) / static_cast<double>(words * n));
        }
    }
    return best;
}

}  // namespace

TEST(InputWord, ValidatesDigits) {
    EXPECT_NO_THROW(InputWord(3, {0, 1, 2}));
    EXPECT_EQ(kind_of([] { InputWord(3, {0, 3}); }), ErrorKind::DimensionMismatch);
}

TEST(RequestWeights, ValidatesDistribution) {
    EXPECT_NO_THROW(RequestWeights({0.25, 0.75}));
    EXPECT_EQ(kind_of([] { RequestWeights({0.5, 0.6}); }), ErrorKind::WeightError);
    EXPECT_EQ(kind_of([] { RequestWeights({1.5, -0.5}); }), ErrorKind::WeightError);
    EXPECT_NEAR(RequestWeights::uniform(3)[2], 1.0 / 3.0, 1e-16);
}

TEST(Phat, SingleBasisIsRankOneProjector) {
    const auto set = galois_mubs(3);
    const Basis* one[1] = {&set[1]};
    const auto op = phat(one, InputWord(3, {2}), RequestWeights::uniform(1));
    EXPECT_NEAR(op.spectrum.values[0], 1.0, 1e-14);
    EXPECT_NEAR(op.spectrum.values[1], 0.0, 1e-14);
    const auto opt = word_optimum(op);
    EXPECT_NEAR(std::abs(inner(opt.state, set[1].state(2))), 1.0, 1e-14);
}

TEST(Phat, QubitPairClosedForm) {
    const auto set = galois_mubs(2);
    const Basis* pair[2] = {&set[0], &set[1]};
    const auto op = phat(pair, InputWord(2, {0, 0}), RequestWeights::uniform(2));
    EXPECT_NEAR(op.spectrum.values[0], 0.5 * (1.0 + 1.0 / std::sqrt(2.0)), 1e-14);
    double trace = 0.0;
    for (std::size_t i = 0; i < 2; ++i) trace += op.matrix(i, i).real();
    EXPECT_NEAR(trace, 1.0, 1e-14);
}

TEST(PGeneral, SingleBasisIsPerfect) {
    const auto set = galois_mubs(4);
    const Basis* one[1] = {&set[2]};
    EXPECT_NEAR(p_general(one, RequestWeights::uniform(1)).value, 1.0, 1e-14);
}

TEST(PGeneral, MubPairClosedForm) {
    for (std::size_t d : {2U, 5U, 11U}) {
        const auto set = galois_mubs(d);
        const Basis* pair[2] = {&set[1], &set[d]};
        EXPECT_NEAR(p_general(pair, RequestWeights::uniform(2)).value, 0.5 * (1.0 + 1.0 / std::sqrt(double(d))),
                    1e-12);
    }
}

TEST(PGeneral, QubitTripletValue) {
    const auto set = galois_mubs(2);
    const double expected = (1.0 + std::sqrt(2.0) * std::cos(kPi / 12.0)) / 3.0;
    EXPECT_NEAR(p_general(set.bases(), RequestWeights::uniform(3)).value, expected, 1e-12);
    EXPECT_NEAR(expected, 0.788675, 1e-6);
}

TEST(PGeneral, GramReductionMatchesFullOperator) {
    std::mt19937_64 rng(4);
    for (std::size_t d : {2U, 3U, 4U}) {
        for (std::size_t n : {2U, 3U, 4U}) {
            std::vector<Basis> bases;
            for (std::size_t i = 0; i < n; ++i) bases.push_back(random_basis(d, rng, i));
            std::vector<const Basis*> ptr;
            for (const auto& b : bases) ptr.push_back(&b);
            std::vector<double> w(n);
            double s = 0.0;
            for (auto& x : w) s += (x = std::uniform_real_distribution<double>(0.1, 1.0)(rng));
            for (auto& x : w) x /= s;
            const RequestWeights p(w);
            EXPECT_NEAR(p_general(ptr, p).value, slow_average(ptr, p), 1e-12) << d << " " << n;
        }
    }
}

TEST(PGeneral, PerWordValuesInOdometerOrder) {
    const auto set = galois_mubs(3);
    const Basis* trio[3] = {&set[0], &set[2], &set[3]};
    GeneralOptions opt;
    opt.keep_per_word = true;
    const auto r = p_general(trio, RequestWeights::uniform(3), opt);
    ASSERT_EQ(r.per_word.size(), 27U);
    EXPECT_NEAR(r.per_word[5], top_eigenvalue(trio, InputWord(3, {0, 1, 2}), RequestWeights::uniform(3)), 1e-13);
}

TEST(PGeneral, ThreadCountDoesNotChangeResult) {
    const auto set = galois_mubs(7);
    const Basis* trio[3] = {&set[1], &set[4], &set[6]};
    GeneralOptions one, four;
    one.threads = 1;
    four.threads = 4;
    EXPECT_EQ(p_general(trio, RequestWeights::uniform(3), one).value,
              p_general(trio, RequestWeights::uniform(3), four).value);
}

TEST(PGeneral, BudgetExceeded) {
    const auto set = galois_mubs(16);
    std::vector<const Basis*> seven;
    for (std::size_t i = 0; i < 7; ++i) seven.push_back(&set[i]);
    EXPECT_EQ(kind_of([&] { p_general(seven, RequestWeights::uniform(7)); }), ErrorKind::BudgetExceeded);
}

TEST(Phase, WrapIntoHalfOpenInterval) {
    EXPECT_NEAR(wrap_phase(3.0 * kPi / 2.0), -kPi / 2.0, 1e-15);
    EXPECT_DOUBLE_EQ(wrap_phase(kPi), -kPi);
    EXPECT_DOUBLE_EQ(wrap_phase(-kPi), -kPi);
    EXPECT_NEAR(wrap_phase(7.0 * kPi + 0.25), -kPi + 0.25, 1e-13);
}

TEST(Phase, QubitWordPhase) {
    // Overlaps: <0|+> = 1/sqrt2, <0|+i> = 1/sqrt2, <+|+i> = (1+i)/2.
    const auto set = galois_mubs(2);
    const auto r = phi_of(set[0], set[1], set[2], InputWord(2, {0, 0, 0}));
    EXPECT_NEAR(std::abs(r.Phi), kPi / 4.0, 1e-14);
}

TEST(Phase, BiasedTripletIsRejected) {
    std::mt19937_64 rng(5);
    const auto a = random_basis(3, rng), b = random_basis(3, rng), c = random_basis(3, rng);
    EXPECT_EQ(kind_of([&] { phi_of(a, b, c, InputWord(3, {0, 0, 0})); }), ErrorKind::NotUnbiased);
    EXPECT_EQ(kind_of([&] { p3_analytic(a, b, c); }), ErrorKind::NotUnbiased);
}

TEST(Analytic, EigenvalueFormulaMatchesEigensolver) {
    for (std::size_t d : small_prime_powers()) {
        const auto set = galois_mubs(d);
        for (const auto& t : all_triplets(set.size())) {
            const Basis* trio[3] = {&set[t.idx[0]], &set[t.idx[1]], &set[t.idx[2]]};
            for (std::uint32_t x2 = 0; x2 < d; ++x2) {
                const InputWord w(d, {0, static_cast<std::uint32_t>(d - 1), x2});
                const auto an = p_bar_analytic(*trio[0], *trio[1], *trio[2], w);
                EXPECT_NEAR(an.lambda, top_eigenvalue(trio, w, RequestWeights::uniform(3)), 1e-10);
                EXPECT_NEAR(norm(an.state), 1.0, 1e-12);
            }
        }
    }
}

TEST(Analytic, StateIsTopEigenvector) {
    const auto set = galois_mubs(5);
    const Basis* trio[3] = {&set[0], &set[1], &set[2]};
    const InputWord w(5, {0, 0, 1});
    const auto an = p_bar_analytic(set[0], set[1], set[2], w);
    const auto op = phat(trio, w, RequestWeights::uniform(3));
    EXPECT_NEAR(std::abs(inner(an.state, op.spectrum.vectors[0])), 1.0, 1e-10);
}

TEST(Analytic, TripletAverages) {
    const auto q = galois_mubs(2);
    EXPECT_NEAR(p3_analytic(q[0], q[1], q[2]).value, 0.788675, 1e-6);
    const auto set = galois_mubs(5);
    std::vector<double> values;
    for (const auto& t : all_triplets(set.size())) {
        values.push_back(p3_analytic(set[t.idx[0]], set[t.idx[1]], set[t.idx[2]]).value);
    }
    EXPECT_NEAR(*std::max_element(values.begin(), values.end()), 0.6109, 5e-5);
    EXPECT_NEAR(*std::min_element(values.begin(), values.end()), 0.5964, 5e-5);
}

TEST(Analytic, SpectrumOfTripletOperator) {
    for (std::size_t d : {3U, 5U, 8U}) {
        const auto set = galois_mubs(d);
        const Basis* trio[3] = {&set[1], &set[2], &set[d]};
        const InputWord w(d, {1, 0, 2});
        const auto op = phat(trio, w, RequestWeights::uniform(3));
        auto expected = triplet_eigenvalues(phi_of(*trio[0], *trio[1], *trio[2], w).Phi, d);
        std::sort(expected.rbegin(), expected.rend());
        for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(op.spectrum.values[k], expected[k], 1e-10);
        for (std::size_t k = 3; k < d; ++k) EXPECT_NEAR(op.spectrum.values[k], 0.0, 1e-10);
    }
}

TEST(Invariance, ColumnPhasesDoNotMatter) {
    std::mt19937_64 rng(8);
    const auto set = galois_mubs(7);
    for (int t = 0; t < 200; ++t) {
        std::uniform_int_distribution<std::uint32_t> digit(0, 6);
        const InputWord w(7, {digit(rng), digit(rng), digit(rng)});
        const auto a = rephase_columns(set[2], rng), b = rephase_columns(set[5], rng), c = rephase_columns(set[6], rng);
        const double ref = p_bar_analytic(set[2], set[5], set[6], w).lambda;
        EXPECT_NEAR(p_bar_analytic(a, b, c, w).lambda, ref, 1e-12);
        const Basis* trio[3] = {&a, &b, &c};
        EXPECT_NEAR(top_eigenvalue(trio, w, RequestWeights::uniform(3)), ref, 1e-12);
    }
}

TEST(Invariance, RelabelingBasesPermutesDigits) {
    std::mt19937_64 rng(9);
    const auto set = galois_mubs(5);
    const std::array<std::size_t, 3> ids{0, 2, 4};
    for (int t = 0; t < 200; ++t) {
        std::uniform_int_distribution<std::uint32_t> digit(0, 4);
        const std::array<std::uint32_t, 3> x{digit(rng), digit(rng), digit(rng)};
        std::array<std::size_t, 3> perm{0, 1, 2};
        std::shuffle(perm.begin(), perm.end(), rng);
        const double ref = p_bar_analytic(set[ids[0]], set[ids[1]], set[ids[2]], InputWord(5, {x[0], x[1], x[2]})).lambda;
        const double got = p_bar_analytic(set[ids[perm[0]]], set[ids[perm[1]]], set[ids[perm[2]]],
                                          InputWord(5, {x[perm[0]], x[perm[1]], x[perm[2]]}))
                               .lambda;
        EXPECT_NEAR(got, ref, 1e-12);
    }
}

TEST(Invariance, ValueBounds) {
    std::mt19937_64 rng(10);
    for (std::size_t d : {2U, 3U, 6U}) {
        for (std::size_t n : {1U, 2U, 3U}) {
            std::vector<Basis> bases;
            for (std::size_t i = 0; i < n; ++i) bases.push_back(random_basis(d, rng, i));
            const double v = p_general(bases, RequestWeights::uniform(n)).value;
            EXPECT_GE(v, 1.0 / static_cast<double>(d) - 1e-12);
            EXPECT_LE(v, 1.0 + 1e-12);
        }
    }
}

TEST(Classical, IdentityBaseline) {
    EXPECT_NEAR(classical_baseline(3, 5, ClassicalMode::Identity), 7.0 / 15.0, 1e-15);
    EXPECT_NEAR(classical_baseline(1, 4, ClassicalMode::Identity), 1.0, 1e-15);
}

TEST(Classical, BruteForceMatchesOracle) {
    EXPECT_NEAR(classical_baseline(2, 2, ClassicalMode::Brute), 0.75, 1e-15);
    for (auto [n, d] : {std::pair<std::size_t, std::size_t>{2, 2}, {3, 2}, {2, 3}}) {
        EXPECT_NEAR(classical_baseline(n, d, ClassicalMode::Brute), classical_oracle(n, d), 1e-15) << n << "," << d;
    }
}

TEST(Classical, BruteForceBudget) {
    EXPECT_EQ(kind_of([] { classical_baseline(3, 3, ClassicalMode::Brute); }), ErrorKind::BudgetExceeded);
}

TEST(Classical, QuantumBeatsClassical) {
    const auto q = galois_mubs(2);
    EXPECT_GT(p_general(q.bases(), RequestWeights::uniform(3)).value, classical_baseline(3, 2, ClassicalMode::Brute));
}
