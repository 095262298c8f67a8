#include "qrac/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <map>

#include <nlohmann/json.hpp>

#include "qrac/error.hpp"
#include "qrac/format.hpp"
#include "qrac/parallel.hpp"
#include "qrac/qrac.hpp"

namespace qrac {

std::vector<Basis> perturb_set(std::span<const Basis> bases, double delta) {
    if (!(delta >= 0.0)) throw Error(ErrorKind::Usage, "delta must be non-negative");
    std::vector<Basis> out;
    out.reserve(bases.size());
    for (const auto& b : bases) {
        CMatrix shifted = b.matrix;
        for (std::size_t i = 0; i < shifted.dim(); ++i) shifted(i, i) += delta;
        out.push_back(Basis{gram_schmidt(shifted), b.index, b.tag + "+perturbed"});
    }
    return out;
}

std::vector<Basis> perturb_set(const MubSet& mubs, double delta) { return perturb_set(mubs.bases(), delta); }

std::vector<double> SweepSpec::default_grid() { return make_grid(0.0, 2.0, 0.02); }

std::vector<double> SweepSpec::make_grid(double start, double end, double step) {
    if (!(step > 0.0) || !(end >= start) || !(start >= 0.0)) {
        throw Error(ErrorKind::Usage, "grid needs 0 <= start <= end and step > 0");
    }
    const auto count = static_cast<std::size_t>(std::llround((end - start) / step)) + 1;
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i) grid[i] = start + static_cast<double>(i) * step;
    return grid;
}

SweepReport sweep(const SweepSpec& spec, const MubSet& mubs, const ScanReport& reference) {
    const auto& grid = spec.delta_grid;
    if (grid.empty() || grid.front() != 0.0) throw Error(ErrorKind::Usage, "grid must start at delta = 0");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) throw Error(ErrorKind::Usage, "grid must be strictly increasing");
    }
    if (reference.dim != mubs.dim()) throw Error(ErrorKind::DimensionMismatch, "reference scan is for another dimension");

    const std::vector<TripletId> triplets = spec.triplets ? *spec.triplets : all_triplets(mubs.size());
    for (const auto& t : triplets) make_triplet(t.idx[0], t.idx[1], t.idx[2], mubs.size());

    const std::uint64_t d = mubs.dim();
    const long double cost = static_cast<long double>(d * d * d) * grid.size() * triplets.size();
    if (cost > static_cast<long double>(spec.budget)) {
        throw Error(ErrorKind::BudgetExceeded, "sweep needs " + std::to_string(static_cast<double>(cost)) +
                                                   " word evaluations, budget " + std::to_string(spec.budget));
    }

    std::map<TripletId, double> closed_form;
    for (const auto& e : reference.entries) closed_form[e.id] = e.value;

    SweepReport rep;
    rep.dim = mubs.dim();
    rep.grid = grid;
    rep.P_plus = reference.P_plus;
    rep.P_minus = reference.P_minus;
    rep.reference_N = reference.N;
    rep.margin = spec.margin;
    rep.curves.resize(triplets.size());
    for (std::size_t t = 0; t < triplets.size(); ++t) {
        auto& c = rep.curves[t];
        c.id = triplets[t];
        c.values.assign(grid.size(), 0.0);
        c.mub_value = closed_form.at(c.id);
        c.cluster = reference.cluster_of(c.id);
    }

    const auto weights = RequestWeights::uniform(3);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t g = 0; g < grid.size(); ++g) {
        // A basis whose U + delta I is singular has no Schmidt orthogonalization
        // at this delta; its triplets get NaN and the point is listed.
        std::vector<std::optional<Basis>> bases(mubs.size());
        for (std::size_t b = 0; b < mubs.size(); ++b) {
            try {
                bases[b] = std::move(perturb_set(std::span<const Basis>(&mubs[b], 1), grid[g]).front());
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::RankDeficient) throw;
                rep.rank_deficient.push_back(RankDeficientPoint{grid[g], b});
            }
        }
        parallel_jobs(triplets.size(), spec.threads, [&](std::size_t t) {
            const auto& id = triplets[t].idx;
            if (!bases[id[0]] || !bases[id[1]] || !bases[id[2]]) {
                rep.curves[t].values[g] = nan;
                return;
            }
            const Basis* trio[3] = {&*bases[id[0]], &*bases[id[1]], &*bases[id[2]]};
            rep.curves[t].values[g] = p_general(std::span<const Basis* const>(trio, 3), weights, {false, 1}).value;
        });
    }

    rep.best_value = -1.0;
    for (auto& c : rep.curves) {
        c.max_value = -1.0;
        for (std::size_t g = 0; g < grid.size(); ++g) {
            if (c.values[g] > c.max_value) {
                c.max_value = c.values[g];
                c.argmax_delta = grid[g];
            }
        }
        rep.delta0_max_error = std::max(rep.delta0_max_error, std::abs(c.values.front() - c.mub_value));
        for (std::size_t g = 1; g < grid.size(); ++g) {
            if (std::isnan(c.values[g]) || std::isnan(c.values[g - 1])) continue;
            const double slope = std::abs(c.values[g] - c.values[g - 1]) / (grid[g] - grid[g - 1]);
            rep.continuity_constant = std::max(rep.continuity_constant, slope);
        }
        if (c.max_value > rep.best_value) {
            rep.best_value = c.max_value;
            rep.best = c.id;
            rep.best_delta = c.argmax_delta;
            rep.best_from_plus = c.cluster + 1 == reference.clusters.size();
        }
    }
    rep.surpass = rep.best_value - rep.P_plus >= spec.margin;
    return rep;
}

SweepReport sweep(const SweepSpec& spec, const MubSet& mubs) {
    ScanOptions so;
    so.threads = spec.threads;
    return sweep(spec, mubs, scan(mubs, so));
}

void write_sweep_csv(const SweepReport& report, std::ostream& out) {
    out << "mu1,mu2,mu3,delta,P\n";
    for (const auto& c : report.curves) {
        for (std::size_t g = 0; g < report.grid.size(); ++g) {
            out << c.id.idx[0] << ',' << c.id.idx[1] << ',' << c.id.idx[2] << ',' << fmt17(report.grid[g]) << ','
                << fmt17(c.values[g]) << '\n';
        }
    }
}

std::string sweep_to_json(const SweepReport& report) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["dim"] = report.dim;
    j["grid"] = {{"start", report.grid.front()}, {"end", report.grid.back()}, {"points", report.grid.size()}};
    j["P_plus"] = report.P_plus;
    j["P_minus"] = report.P_minus;
    j["reference_N"] = report.reference_N;
    j["margin"] = report.margin;
    j["surpass"] = report.surpass;
    j["best"] = {{"triplet", report.best.idx},
                 {"delta", report.best_delta},
                 {"P", report.best_value},
                 {"excess_over_P_plus", report.best_value - report.P_plus},
                 {"cluster", report.best_from_plus ? "plus" : "minus"}};
    j["continuity_constant"] = report.continuity_constant;
    j["delta0_max_error"] = report.delta0_max_error;
    ordered_json skipped = ordered_json::array();
    for (const auto& r : report.rank_deficient) skipped.push_back({{"delta", r.delta}, {"basis", r.basis}});
    j["rank_deficient"] = std::move(skipped);
    ordered_json curves = ordered_json::array();
    for (const auto& c : report.curves) {
        curves.push_back({{"triplet", c.id.idx},
                          {"mub_value", c.mub_value},
                          {"max", c.max_value},
                          {"argmax_delta", c.argmax_delta},
                          {"surpasses", c.max_value - report.P_plus >= report.margin}});
    }
    j["curves"] = std::move(curves);
    return j.dump(2) + "\n";
}

}  // namespace qrac
