#include "qrac/shots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <nlohmann/json.hpp>

#include "qrac/error.hpp"
#include "qrac/parallel.hpp"
#include "qrac/qrac.hpp"

namespace qrac {

namespace {

// Born-rule outcome distribution for one (word, question) pair.
struct PairDistribution {
    std::vector<double> cdf;
    std::uint32_t target = 0;
    double success = 0.0;
};

std::vector<PairDistribution> pair_distributions(const Basis& c, const Basis& e, const Basis& f) {
    const std::size_t d = c.dim();
    const Basis* trio[3] = {&c, &e, &f};
    std::vector<PairDistribution> out;
    out.reserve(d * d * d * 3);
    for (std::uint32_t x0 = 0; x0 < d; ++x0) {
        for (std::uint32_t x1 = 0; x1 < d; ++x1) {
            for (std::uint32_t x2 = 0; x2 < d; ++x2) {
                const InputWord word(d, {x0, x1, x2});
                const auto psi = p_bar_analytic(c, e, f, word).state;
                for (std::size_t y = 0; y < 3; ++y) {
                    PairDistribution pd;
                    pd.target = word[y];
                    pd.cdf.resize(d);
                    double acc = 0.0;
                    for (std::size_t i = 0; i < d; ++i) {
                        const double prob = std::norm(inner(trio[y]->state(i), psi));
                        if (i == pd.target) pd.success = prob;
                        acc += prob;
                        pd.cdf[i] = acc;
                    }
                    out.push_back(std::move(pd));
                }
            }
        }
    }
    return out;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

ShotScenario simulate(const MubSet& mubs, const TripletId& id, std::uint64_t stream_base, const ShotOptions& opt) {
    const auto& c = mubs[id.idx[0]];
    const auto& e = mubs[id.idx[1]];
    const auto& f = mubs[id.idx[2]];
    ShotScenario sc;
    sc.id = id;
    sc.exact = born_expectation(c, e, f);
    if (opt.infinite) {
        sc.estimates.assign(std::max<std::size_t>(opt.trials, 1), sc.exact);
        sc.mean = sc.exact;
        sc.sd = 0.0;
        return sc;
    }
    const auto dists = pair_distributions(c, e, f);
    const auto counts = allocate_shots(opt.shots, dists.size());
    sc.estimates.assign(opt.trials, 0.0);
    parallel_jobs(opt.trials, 0, [&](std::size_t trial) {
        std::mt19937_64 rng(derive_seed(*opt.seed, stream_base + trial));
        std::uint64_t hits = 0;
        for (std::size_t k = 0; k < dists.size(); ++k) {
            const auto& pd = dists[k];
            const double total = pd.cdf.back();
            for (std::uint64_t s = 0; s < counts[k]; ++s) {
                const double u = uniform01(rng) * total;
                const auto it = std::upper_bound(pd.cdf.begin(), pd.cdf.end(), u);
                const auto outcome = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
                    it - pd.cdf.begin(), static_cast<std::ptrdiff_t>(pd.cdf.size()) - 1));
                if (outcome == pd.target) ++hits;
            }
        }
        sc.estimates[trial] = static_cast<double>(hits) / static_cast<double>(opt.shots);
    });
    double mean = 0.0;
    for (double v : sc.estimates) mean += v;
    mean /= static_cast<double>(sc.estimates.size());
    double var = 0.0;
    for (double v : sc.estimates) var += (v - mean) * (v - mean);
    var /= static_cast<double>(sc.estimates.size() - 1);
    sc.mean = mean;
    sc.sd = std::sqrt(var);
    return sc;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double born_expectation(const Basis& c, const Basis& e, const Basis& f) {
    const auto dists = pair_distributions(c, e, f);
    std::vector<double> parts;
    parts.reserve(dists.size());
    for (const auto& pd : dists) parts.push_back(pd.success);
    return tree_sum(std::move(parts)) / static_cast<double>(dists.size());
}

std::vector<std::uint64_t> allocate_shots(std::uint64_t shots, std::size_t pairs) {
    std::vector<std::uint64_t> counts(pairs, shots / pairs);
    const std::uint64_t remainder = shots % pairs;
    for (std::uint64_t i = 0; i < remainder; ++i) ++counts[i];
    return counts;
}

ShotReport run_shots(const MubSet& mubs, const TripletId& plus, const TripletId& minus, const ShotOptions& options) {
    if (!options.infinite) {
        if (!options.seed) throw Error(ErrorKind::SeedMissing, "a seed is required for Monte Carlo sampling");
        if (options.trials < 2) throw Error(ErrorKind::Usage, "at least 2 trials are needed for a standard deviation");
        if (options.shots < 1) throw Error(ErrorKind::Usage, "shots must be >= 1");
    }
    make_triplet(plus.idx[0], plus.idx[1], plus.idx[2], mubs.size());
    make_triplet(minus.idx[0], minus.idx[1], minus.idx[2], mubs.size());

    ShotReport rep;
    rep.dim = mubs.dim();
    rep.shots = options.shots;
    rep.trials = options.trials;
    rep.seed = options.seed.value_or(0);
    rep.infinite = options.infinite;
    // Streams 0..trials-1 for the plus scenario, 2^32.. for the minus scenario.
    rep.plus = simulate(mubs, plus, 0, options);
    rep.minus = simulate(mubs, minus, std::uint64_t{1} << 32, options);
    const double spread = std::sqrt(rep.plus.sd * rep.plus.sd + rep.minus.sd * rep.minus.sd);
    rep.sigma_gap = spread > 0.0 ? (rep.plus.mean - rep.minus.mean) / spread
                                 : std::numeric_limits<double>::infinity();
    return rep;
}

std::string shots_to_json(const ShotReport& report) {
    using nlohmann::ordered_json;
    auto scenario = [](const ShotScenario& s) {
        return ordered_json{{"triplet", s.id.idx}, {"exact", s.exact}, {"mean", s.mean},
                            {"sd", s.sd},          {"estimates", s.estimates}};
    };
    ordered_json j;
    j["dim"] = report.dim;
    j["shots"] = report.shots;
    j["trials"] = report.trials;
    j["seed"] = report.seed;
    j["rng"] = report.rng;
    j["infinite"] = report.infinite;
    j["plus"] = scenario(report.plus);
    j["minus"] = scenario(report.minus);
    j["sigma_gap"] = std::isfinite(report.sigma_gap) ? ordered_json(report.sigma_gap) : ordered_json(nullptr);
    return j.dump(2) + "\n";
}

}  // namespace qrac
