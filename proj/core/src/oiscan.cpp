#include "qrac/oiscan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "qrac/error.hpp"
#include "qrac/format.hpp"
#include "qrac/parallel.hpp"
#include "qrac/qrac.hpp"

namespace qrac {

std::string TripletId::str() const {
    return std::to_string(idx[0]) + "," + std::to_string(idx[1]) + "," + std::to_string(idx[2]);
}

TripletId make_triplet(std::size_t a, std::size_t b, std::size_t c, std::size_t basis_count) {
    TripletId t{{a, b, c}};
    std::sort(t.idx.begin(), t.idx.end());
    if (t.idx[0] == t.idx[1] || t.idx[1] == t.idx[2]) throw Error(ErrorKind::Usage, "triplet indices must be distinct");
    if (t.idx[2] >= basis_count) {
        throw Error(ErrorKind::Usage, "basis index " + std::to_string(t.idx[2]) + " out of range");
    }
    return t;
}

std::vector<TripletId> all_triplets(std::size_t basis_count) {
    std::vector<TripletId> out;
    for (std::size_t a = 0; a < basis_count; ++a) {
        for (std::size_t b = a + 1; b < basis_count; ++b) {
            for (std::size_t c = b + 1; c < basis_count; ++c) out.push_back(TripletId{{a, b, c}});
        }
    }
    return out;
}

std::vector<ValueCluster> cluster_values(std::span<const double> values, double tol) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<ValueCluster> out;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const std::size_t i = order[k];
        if (k == 0 || values[i] - values[order[k - 1]] > tol) out.emplace_back();
        out.back().members.push_back(i);
    }
    for (auto& c : out) {
        double s = 0.0;
        for (std::size_t i : c.members) s += values[i];
        c.representative = s / static_cast<double>(c.members.size());
        std::sort(c.members.begin(), c.members.end());
    }
    return out;
}

std::size_t ScanReport::cluster_of(const TripletId& id) const {
    for (std::size_t k = 0; k < clusters.size(); ++k) {
        const auto& m = clusters[k].members;
        if (std::binary_search(m.begin(), m.end(), id)) return k;
    }
    throw Error(ErrorKind::Usage, "triplet " + id.str() + " not in scan");
}

std::size_t predicted_cluster_count(std::size_t d) noexcept { return d % 4 == 1 ? 2 : 1; }

ScanReport scan(const MubSet& mubs, const ScanOptions& options) {
    if (!(options.tol > 0.0)) throw Error(ErrorKind::Usage, "tolerance must be positive");
    ScanReport rep;
    rep.dim = mubs.dim();
    rep.tol = options.tol;
    const auto triplets = all_triplets(mubs.size());
    std::vector<double> values(triplets.size());
    parallel_jobs(triplets.size(), options.threads, [&](std::size_t t) {
        const auto& id = triplets[t].idx;
        values[t] = p3_analytic(mubs[id[0]], mubs[id[1]], mubs[id[2]]).value;
    });
    for (std::size_t t = 0; t < triplets.size(); ++t) rep.entries.push_back(ScanEntry{triplets[t], values[t]});

    const auto clusters = cluster_values(values, options.tol);
    for (const auto& c : clusters) {
        TripletCluster tc;
        tc.representative = c.representative;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t i : c.members) {
            tc.members.push_back(triplets[i]);
            lo = std::min(lo, values[i]);
            hi = std::max(hi, values[i]);
        }
        tc.spread = hi - lo;
        rep.clusters.push_back(std::move(tc));
    }
    rep.N = rep.clusters.size();
    if (rep.N > 0) {
        rep.P_plus = rep.clusters.back().representative;
        rep.P_minus = rep.clusters.front().representative;
    }
    rep.gap_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < clusters.size(); ++k) {
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t i : clusters[k].members) top = std::max(top, values[i]);
        double bottom = std::numeric_limits<double>::infinity();
        for (std::size_t i : clusters[k + 1].members) bottom = std::min(bottom, values[i]);
        rep.gap_ratio = std::min(rep.gap_ratio, (bottom - top) / options.tol);
    }
    rep.predicted_N = predicted_cluster_count(rep.dim);
    rep.agrees = check_pattern(rep);
    return rep;
}

bool check_pattern(const ScanReport& report) noexcept { return report.N == predicted_cluster_count(report.dim); }

void write_scan_csv(const ScanReport& report, std::ostream& out) {
    out << "mu1,mu2,mu3,P\n";
    for (const auto& e : report.entries) {
        out << e.id.idx[0] << ',' << e.id.idx[1] << ',' << e.id.idx[2] << ',' << fmt17(e.value) << '\n';
    }
}

std::string scan_to_json(const ScanReport& report) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["dim"] = report.dim;
    j["tol"] = report.tol;
    j["N"] = report.N;
    j["predicted_N"] = report.predicted_N;
    j["agrees"] = report.agrees;
    j["P_plus"] = report.P_plus;
    j["P_minus"] = report.P_minus;
    j["gap_ratio"] = std::isinf(report.gap_ratio) ? ordered_json(nullptr) : ordered_json(report.gap_ratio);
    ordered_json clusters = ordered_json::array();
    for (const auto& c : report.clusters) {
        ordered_json members = ordered_json::array();
        for (const auto& m : c.members) members.push_back(m.idx);
        clusters.push_back({{"representative", c.representative},
                            {"spread", c.spread},
                            {"size", c.members.size()},
                            {"members", std::move(members)}});
    }
    j["clusters"] = std::move(clusters);
    ordered_json entries = ordered_json::array();
    for (const auto& e : report.entries) entries.push_back({{"triplet", e.id.idx}, {"P", e.value}});
    j["entries"] = std::move(entries);
    return j.dump(2) + "\n";
}

}  // namespace qrac
