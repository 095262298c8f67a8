// qrac: command-line front end for MUB construction, QRAC evaluation,
// orientation scans, perturbation sweeps, shot-noise simulation and the
// stationary-point verifier.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qrac/error.hpp"
#include "qrac/format.hpp"
#include "qrac/mub.hpp"
#include "qrac/oiscan.hpp"
#include "qrac/perturb.hpp"
#include "qrac/qrac.hpp"
#include "qrac/shots.hpp"
#include "qrac/stationary.hpp"

namespace {

using namespace qrac;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitBudget = 4;

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NoConvergence:
        case ErrorKind::RankDeficient:
        case ErrorKind::RootNotFound:
        case ErrorKind::UnbiasednessCheckFailed:
            return kExitNumerical;
        case ErrorKind::BudgetExceeded:
            return kExitBudget;
        default:
            return kExitUsage;
    }
}

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct Config {
    std::size_t dim = 0;
    std::size_t n = 0;
    std::string bases_path;
    std::vector<std::size_t> subset;
    std::string method = "eig";
    std::vector<double> weights;
    double tol = kDefaultScanTol;
    double delta_start = 0.0;
    double delta_end = 2.0;
    double delta_step = 0.02;
    double margin = 1e-3;
    std::uint64_t shots = 25000;
    std::size_t trials = 5;
    std::optional<std::uint64_t> seed;
    bool exact = false;
    std::vector<std::size_t> plus;
    std::vector<std::size_t> minus;
    std::vector<std::uint32_t> word;
    std::string out;
    std::string format;
    unsigned threads = 0;
};

// Output sink opened before any computation so bad paths fail fast.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path.empty()) return;
        path_ = path;
        file_.open(path);
        if (!file_) throw Error(ErrorKind::IoError, "cannot open " + path + " for writing");
    }
    bool to_file() const { return !path_.empty(); }
    std::ostream& stream() { return to_file() ? static_cast<std::ostream&>(file_) : std::cout; }
    void finish() {
        if (!to_file()) return;
        file_.close();
        if (!file_) throw Error(ErrorKind::IoError, "write failed for " + path_);
    }

private:
    std::string path_;
    std::ofstream file_;
};

void require_format(const std::string& format, std::initializer_list<const char*> allowed) {
    if (format.empty()) return;
    for (const char* a : allowed) {
        if (format == a) return;
    }
    throw Error(ErrorKind::Usage, "unsupported --format " + format);
}

// Dimension from --dim or the basis file, whichever is given.
std::vector<Basis> input_bases(const Config& cfg, std::string* construction) {
    if (!cfg.bases_path.empty()) {
        auto loaded = load_bases(cfg.bases_path);
        if (loaded.bases.empty()) throw Error(ErrorKind::ParseError, "basis file holds no bases");
        if (cfg.dim != 0 && loaded.bases.front().dim() != cfg.dim) {
            throw Error(ErrorKind::DimensionMismatch, "--dim disagrees with the basis file");
        }
        if (construction) *construction = loaded.construction;
        return std::move(loaded.bases);
    }
    if (cfg.dim == 0) throw Error(ErrorKind::Usage, "either --dim or --bases is required");
    auto set = galois_mubs(cfg.dim);
    if (construction) *construction = set.construction();
    return set.bases();
}

MubSet input_mubs(const Config& cfg) {
    if (cfg.bases_path.empty()) {
        if (cfg.dim == 0) throw Error(ErrorKind::Usage, "either --dim or --bases is required");
        return galois_mubs(cfg.dim);
    }
    std::string construction;
    auto bases = input_bases(cfg, &construction);
    return certify_mub_set(std::move(bases), construction);
}

TripletId triplet_arg(const std::vector<std::size_t>& v, std::size_t count, const char* flag) {
    if (v.size() != 3) throw Error(ErrorKind::Usage, std::string(flag) + " needs exactly three indices");
    return make_triplet(v[0], v[1], v[2], count);
}

int cmd_mub(const Config& cfg) {
    require_format(cfg.format, {"json"});
    if (cfg.dim == 0) throw Error(ErrorKind::Usage, "--dim is required");
    Sink sink(cfg.out);
    const auto set = galois_mubs(cfg.dim);
    sink.stream() << bases_to_json(set.bases(), set.construction());
    sink.finish();
    if (sink.to_file()) {
        std::cout << "bases: " << set.size() << "\n"
                  << "max_unbiasedness_deviation: " << fmt17(set.certified_deviation()) << "\n";
    } else {
        std::cerr << "max_unbiasedness_deviation: " << fmt17(set.certified_deviation()) << "\n";
    }
    return kExitOk;
}

int cmd_qrac(const Config& cfg) {
    require_format(cfg.format, {"json", "text"});
    if (cfg.method != "eig" && cfg.method != "analytic" && cfg.method != "both") {
        throw Error(ErrorKind::Usage, "--method must be eig, analytic or both");
    }
    Sink sink(cfg.out);
    const auto bases = input_bases(cfg, nullptr);

    std::vector<std::size_t> subset = cfg.subset;
    const std::size_t n = cfg.n != 0 ? cfg.n : (subset.empty() ? 3 : subset.size());
    if (subset.empty()) {
        for (std::size_t i = 0; i < n; ++i) subset.push_back(i);
    }
    if (subset.size() != n) throw Error(ErrorKind::Usage, "--subset must list exactly n indices");
    std::vector<const Basis*> chosen;
    for (std::size_t i : subset) {
        if (i >= bases.size()) throw Error(ErrorKind::Usage, "subset index " + std::to_string(i) + " out of range");
        chosen.push_back(&bases[i]);
    }
    const RequestWeights weights = cfg.weights.empty() ? RequestWeights::uniform(n) : RequestWeights(cfg.weights);
    if (weights.n() != n) throw Error(ErrorKind::WeightError, "--weights must have n entries");

    std::optional<double> eig;
    std::optional<double> analytic;
    if (cfg.method != "eig") {
        if (n != 3) throw Error(ErrorKind::Usage, "the analytic method needs n = 3");
        for (std::size_t i = 0; i < 3; ++i) {
            if (std::abs(weights[i] - 1.0 / 3.0) > 1e-12) {
                throw Error(ErrorKind::Usage, "the analytic method needs uniform weights");
            }
        }
        analytic = p3_analytic(*chosen[0], *chosen[1], *chosen[2]).value;
    }
    if (cfg.method != "analytic") {
        GeneralOptions opt;
        opt.threads = cfg.threads;
        eig = p_general(std::span<const Basis* const>(chosen), weights, opt).value;
    }

    auto& os = sink.stream();
    if (cfg.format == "json") {
        os << "{\"dim\":" << bases.front().dim() << ",\"n\":" << n << ",\"subset\":[";
        for (std::size_t i = 0; i < subset.size(); ++i) os << (i ? "," : "") << subset[i];
        os << "]";
        if (eig) os << ",\"eig\":" << fmt17(*eig);
        if (analytic) os << ",\"analytic\":" << fmt17(*analytic);
        if (eig && analytic) os << ",\"abs_diff\":" << fmt17(std::abs(*eig - *analytic));
        os << "}\n";
    } else {
        if (eig) os << "P[eig]      = " << fmt12(*eig) << "\n";
        if (analytic) os << "P[analytic] = " << fmt12(*analytic) << "\n";
        if (eig && analytic) os << "|diff|      = " << fmt12(std::abs(*eig - *analytic)) << "\n";
    }
    sink.finish();
    return kExitOk;
}

void print_scan_summary(const ScanReport& r, std::ostream& os) {
    os << "dim: " << r.dim << "\n"
       << "clusters: " << r.N << " (predicted " << r.predicted_N << ", " << (r.agrees ? "agrees" : "DISAGREES") << ")\n";
    for (const auto& c : r.clusters) {
        os << "  P = " << fmt12(c.representative) << "  members " << c.members.size() << "  spread "
           << fmt12(c.spread) << "\n";
    }
    os << "P_plus: " << fmt12(r.P_plus) << "\nP_minus: " << fmt12(r.P_minus) << "\n";
}

int cmd_oi(const Config& cfg) {
    require_format(cfg.format, {"json", "csv", "text"});
    Sink sink(cfg.out);
    const auto mubs = input_mubs(cfg);
    ScanOptions opt;
    opt.tol = cfg.tol;
    opt.threads = cfg.threads;
    const auto report = scan(mubs, opt);
    auto& os = sink.stream();
    if (cfg.format == "csv") {
        write_scan_csv(report, os);
    } else if (cfg.format == "json" || (cfg.format.empty() && sink.to_file())) {
        os << scan_to_json(report);
    } else {
        print_scan_summary(report, os);
    }
    sink.finish();
    if (sink.to_file()) print_scan_summary(report, std::cout);
    return report.agrees ? kExitOk : kExitNumerical;
}

void print_sweep_summary(const SweepReport& r, std::ostream& os) {
    os << "dim: " << r.dim << "\n"
       << "grid: " << fmt12(r.grid.front()) << " .. " << fmt12(r.grid.back()) << " (" << r.grid.size() << " points)\n"
       << "P_plus: " << fmt12(r.P_plus) << "\n"
       << "best: " << r.best.str() << " at delta " << fmt12(r.best_delta) << " P = " << fmt12(r.best_value)
       << " (from " << (r.best_from_plus ? "P_plus" : "P_minus") << " cluster)\n"
       << "excess over P_plus: " << fmt12(r.best_value - r.P_plus) << " (margin " << fmt12(r.margin) << ")\n"
       << "surpass: " << (r.surpass ? "true" : "false") << "\n";
}

int cmd_perturb(const Config& cfg) {
    require_format(cfg.format, {"json", "csv", "text"});
    Sink sink(cfg.out);
    SweepSpec spec;
    spec.delta_grid = SweepSpec::make_grid(cfg.delta_start, cfg.delta_end, cfg.delta_step);
    spec.margin = cfg.margin;
    spec.threads = cfg.threads;
    const auto mubs = input_mubs(cfg);
    if (!cfg.subset.empty()) {
        spec.triplets = std::vector<TripletId>{triplet_arg(cfg.subset, mubs.size(), "--subset")};
    }
    const auto report = sweep(spec, mubs);
    auto& os = sink.stream();
    if (cfg.format == "csv") {
        write_sweep_csv(report, os);
    } else if (cfg.format == "json" || (cfg.format.empty() && sink.to_file())) {
        os << sweep_to_json(report);
    } else {
        print_sweep_summary(report, os);
    }
    sink.finish();
    if (sink.to_file()) print_sweep_summary(report, std::cout);
    return kExitOk;
}

int cmd_shots(const Config& cfg) {
    require_format(cfg.format, {"json", "text"});
    ShotOptions opt;
    opt.shots = cfg.shots;
    opt.trials = cfg.trials;
    opt.seed = cfg.seed;
    opt.infinite = cfg.exact;
    if (!opt.infinite) {
        if (!opt.seed) throw Error(ErrorKind::SeedMissing, "--seed is required for sampling");
        if (opt.trials < 2) throw Error(ErrorKind::Usage, "--trials must be >= 2 (the spread needs two trials)");
    }
    Sink sink(cfg.out);
    const auto mubs = input_mubs(cfg);
    TripletId plus;
    TripletId minus;
    if (cfg.plus.empty() || cfg.minus.empty()) {
        ScanOptions so;
        so.threads = cfg.threads;
        const auto rep = scan(mubs, so);
        plus = rep.clusters.back().members.front();
        minus = rep.clusters.front().members.front();
    }
    if (!cfg.plus.empty()) plus = triplet_arg(cfg.plus, mubs.size(), "--plus");
    if (!cfg.minus.empty()) minus = triplet_arg(cfg.minus, mubs.size(), "--minus");
    const auto report = run_shots(mubs, plus, minus, opt);
    auto& os = sink.stream();
    if (cfg.format == "json" || (cfg.format.empty() && sink.to_file())) {
        os << shots_to_json(report);
    } else {
        auto line = [&](const char* name, const ShotScenario& s) {
            os << name << " " << s.id.str() << ": exact " << fmt12(s.exact) << "  mean " << fmt12(s.mean) << "  sd "
               << fmt12(s.sd) << "\n";
        };
        line("plus ", report.plus);
        line("minus", report.minus);
        os << "sigma_gap: " << (std::isfinite(report.sigma_gap) ? fmt12(report.sigma_gap) : "inf") << "\n"
           << "rng: " << report.rng << "\n";
    }
    sink.finish();
    return kExitOk;
}

int cmd_verify(const Config& cfg) {
    require_format(cfg.format, {"json", "text"});
    Sink sink(cfg.out);
    const auto bases = input_bases(cfg, nullptr);
    std::vector<std::size_t> subset = cfg.subset.empty() ? std::vector<std::size_t>{0, 1, 2} : cfg.subset;
    if (subset.size() != 3) throw Error(ErrorKind::Usage, "--subset needs exactly three indices");
    for (std::size_t i : subset) {
        if (i >= bases.size()) throw Error(ErrorKind::Usage, "subset index " + std::to_string(i) + " out of range");
    }
    if (cfg.word.size() != 3) throw Error(ErrorKind::Usage, "--word needs exactly three digits");
    const InputWord word(bases.front().dim(), cfg.word);
    const auto rep = verify_stationary_structure(bases[subset[0]], bases[subset[1]], bases[subset[2]], word);
    auto& os = sink.stream();
    if (cfg.format == "json") {
        os << stationary_to_json(rep);
    } else {
        os << "word: (" << rep.word[0] << "," << rep.word[1] << "," << rep.word[2] << ")\n"
           << "varphi: " << fmt12(rep.varphi) << "\n"
           << "Phi: " << fmt12(rep.Phi) << "\n"
           << "gamma0: " << fmt12(rep.gamma0) << "\n"
           << "q_m1: " << fmt12(rep.q_m1) << "\n"
           << "q_m2: " << fmt12(rep.q_m2) << "\n"
           << "gamma roots:";
        for (const auto& r : rep.roots) os << " " << fmt12(r.gamma);
        os << "\ngradient norms at intersections:";
        for (std::size_t k = 0; k < 3; ++k) {
            os << " " << (rep.intersection_singular[k] ? std::string("singular") : fmt12(rep.gradient_norms[k]));
        }
        os << "\nmax q variation along gamma lines: " << fmt12(rep.max_q_variation) << "\n"
           << "grid max q: " << fmt12(rep.grid_max) << "\n"
           << "q_m1 dominates: " << (rep.qm1_dominates ? "true" : "false") << "\n"
           << "grid bounded by q_m1: " << (rep.grid_bounded ? "true" : "false") << "\n";
    }
    sink.finish();
    return kExitOk;
}

// Splits "a,b,c" into values of type T.
template <typename T>
std::vector<T> parse_list(const std::string& text, const char* flag) {
    std::vector<T> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::istringstream is(item);
        T v{};
        if (!(is >> v) || !(is >> std::ws).eof()) throw Error(ErrorKind::Usage, std::string("bad value in ") + flag);
        out.push_back(v);
    }
    if (out.empty()) throw Error(ErrorKind::Usage, std::string(flag) + " is empty");
    return out;
}

constexpr const char* kFooter =
    "CSV columns:\n"
    "  oi-scan: mu1,mu2,mu3,P        one row per basis triplet\n"
    "  perturb: mu1,mu2,mu3,delta,P  one row per triplet and grid point\n"
    "Doubles are written with 17 significant digits.\n"
    "Exit codes: 0 ok, 2 usage or validation error, 3 numerical failure, 4 budget exceeded.";

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum random access codes over mutually unbiased bases"};
    app.require_subcommand(1);
    app.footer(kFooter);

    Config cfg;
    std::string subset, weights, word, plus, minus;
    std::optional<std::uint64_t> seed;

    auto add_dim = [&](CLI::App* sub) { sub->add_option("--dim", cfg.dim, "Dimension d (prime power)"); };
    auto add_bases = [&](CLI::App* sub) {
        sub->add_option("--bases", cfg.bases_path, "Basis-set JSON file instead of the Galois construction");
    };
    auto add_out = [&](CLI::App* sub, const char* formats) {
        sub->add_option("--out", cfg.out, "Output path (stdout when omitted)");
        sub->add_option("--format", cfg.format, formats);
    };
    auto add_threads = [&](CLI::App* sub) {
        sub->add_option("--threads", cfg.threads, "Worker threads (0: all cores)");
    };

    auto* mub = app.add_subcommand("mub", "Generate and certify the Galois MUB set");
    add_dim(mub);
    add_out(mub, "json");

    auto* qrac_cmd = app.add_subcommand("qrac", "Success probability of an n-basis QRAC");
    add_dim(qrac_cmd);
    add_bases(qrac_cmd);
    qrac_cmd->add_option("--n", cfg.n, "Number of bases (defaults to the subset size, else 3)");
    qrac_cmd->add_option("--subset", subset, "Basis indices a,b,c");
    qrac_cmd->add_option("--method", cfg.method, "eig | analytic | both")->default_val("eig");
    qrac_cmd->add_option("--weights", weights, "Question probabilities p1,...,pn");
    add_out(qrac_cmd, "text | json");
    add_threads(qrac_cmd);

    auto* oi = app.add_subcommand("oi-scan", "Closed-form value of every MUB triplet, clustered");
    add_dim(oi);
    add_bases(oi);
    oi->add_option("--tol", cfg.tol, "Clustering tolerance")->default_val(kDefaultScanTol);
    add_out(oi, "text | json | csv");
    add_threads(oi);

    auto* pert = app.add_subcommand("perturb", "Sweep gram_schmidt(U + delta I) over a delta grid");
    add_dim(pert);
    add_bases(pert);
    pert->add_option("--delta-start", cfg.delta_start, "First grid point")->default_val(0.0);
    pert->add_option("--delta-end", cfg.delta_end, "Last grid point")->default_val(2.0);
    pert->add_option("--delta-step", cfg.delta_step, "Grid step")->default_val(0.02);
    pert->add_option("--margin", cfg.margin, "Required excess over P_plus")->default_val(1e-3);
    pert->add_option("--subset", subset, "Restrict to one triplet a,b,c");
    add_out(pert, "text | json | csv");
    add_threads(pert);

    auto* shots = app.add_subcommand("shots", "Shot-noise Monte Carlo of the P_plus and P_minus scenarios");
    add_dim(shots);
    add_bases(shots);
    shots->add_option("--shots", cfg.shots, "Total shots per trial")->default_val(25000);
    shots->add_option("--trials", cfg.trials, "Independent trials (>= 2)")->default_val(5);
    shots->add_option("--seed", seed, "64-bit seed (required unless --exact)");
    shots->add_flag("--exact", cfg.exact, "Infinite-shot limit: exact Born-rule expectation");
    shots->add_option("--plus", plus, "P_plus triplet a,b,c (first of the top cluster by default)");
    shots->add_option("--minus", minus, "P_minus triplet a,b,c (first of the bottom cluster by default)");
    add_out(shots, "text | json");
    add_threads(shots);

    auto* verify = app.add_subcommand("verify", "Stationary structure of the q landscape for one word");
    add_dim(verify);
    add_bases(verify);
    verify->add_option("--word", word, "Digits x0,x1,x2")->required();
    verify->add_option("--subset", subset, "Basis indices a,b,c (default 0,1,2)");
    add_out(verify, "text | json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (!subset.empty()) cfg.subset = parse_list<std::size_t>(subset, "--subset");
        if (!weights.empty()) cfg.weights = parse_list<double>(weights, "--weights");
        if (!word.empty()) cfg.word = parse_list<std::uint32_t>(word, "--word");
        if (!plus.empty()) cfg.plus = parse_list<std::size_t>(plus, "--plus");
        if (!minus.empty()) cfg.minus = parse_list<std::size_t>(minus, "--minus");
        cfg.seed = seed;

        if (mub->parsed()) return cmd_mub(cfg);
        if (qrac_cmd->parsed()) return cmd_qrac(cfg);
        if (oi->parsed()) return cmd_oi(cfg);
        if (pert->parsed()) return cmd_perturb(cfg);
        if (shots->parsed()) return cmd_shots(cfg);
        if (verify->parsed()) return cmd_verify(cfg);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
