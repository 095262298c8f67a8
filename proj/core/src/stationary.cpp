#include "qrac/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <nlohmann/json.hpp>

#include "qrac/error.hpp"

namespace qrac {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRootTol = 1e-12;
constexpr double kDominanceTol = 1e-12;
constexpr double kGridTol = 1e-9;
constexpr double kSingularNorm2 = 1e-9;

template <typename F>
double bisect(F&& fn, double lo, double hi, double flo) {
    while (hi - lo > kRootTol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = fn(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

QLandscape::QLandscape(const Basis& c, const Basis& e, const Basis& f, const InputWord& word)
    : d_(c.dim()), phases_(phi_of(c, e, f, word)) {
    const auto sc = c.state(word[0]);
    const auto se = e.state(word[1]);
    const auto sf = f.state(word[2]);
    c_.assign(sc.begin(), sc.end());
    e_.assign(se.begin(), se.end());
    f_.assign(sf.begin(), sf.end());
}

double QLandscape::q(double t1, double t2) const noexcept {
    const double d = static_cast<double>(d_);
    const double phi = phases_.varphi;
    const double num = -3.0 + 6.0 / d + 2.0 / d * std::cos(t1 - t2) + 2.0 / d * std::cos(t2 + phi) +
                       2.0 / d * std::cos(t1 - phi);
    return num / state_norm2(t1, t2);
}

double QLandscape::state_norm2(double t1, double t2) const noexcept {
    const double sd = std::sqrt(static_cast<double>(d_));
    const double phi = phases_.varphi;
    return 3.0 + 2.0 / sd * (std::cos(t1) + std::cos(t2) + std::cos(t1 - t2 - phi));
}

double QLandscape::q_born(double t1, double t2) const {
    const cplx pe = std::polar(1.0, t1 - phases_.phi01);
    const cplx pf = std::polar(1.0, t2 - phases_.phi02);
    CVector psi(d_);
    for (std::size_t i = 0; i < d_; ++i) psi[i] = c_[i] + pe * e_[i] + pf * f_[i];
    const double nrm = norm(psi);
    for (auto& z : psi) z /= nrm;
    const double p = (std::norm(inner(c_, psi)) + std::norm(inner(e_, psi)) + std::norm(inner(f_, psi))) / 3.0;
    return 3.0 * p - 2.0;
}

double QLandscape::gamma_equation(double t2) const noexcept {
    const double d = static_cast<double>(d_);
    const double sd = std::sqrt(d);
    const double d32 = d * sd;
    const double phi = phases_.varphi;
    return std::cos((t2 - phi) / 2.0) * (6.0 / d + 4.0 / d32 * std::cos(t2)) +
           std::cos((t2 + phi) / 2.0) * (6.0 / sd - 12.0 / d32 - 4.0 / d32 * std::cos(t2 + phi));
}

double QLandscape::dq_dt1(double t1, double t2) const noexcept {
    const double sd = std::sqrt(static_cast<double>(d_));
    const double phi = phases_.varphi;
    const double n2 = 3.0 + 2.0 / sd * (std::cos(t1) + std::cos(t2) + std::cos(t1 - t2 - phi));
    return -2.0 * std::sin((2.0 * t1 - t2 - phi) / 2.0) * gamma_equation(t2) / (n2 * n2);
}

double QLandscape::dq_dt2(double t1, double t2) const noexcept { return -dq_dt1(-t2, -t1); }

std::array<std::array<double, 2>, 3> QLandscape::slanted_intersections() const noexcept {
    const double a = phases_.Phi / 3.0;
    const double b = 2.0 * kPi / 3.0;
    return {{{a, -a}, {a + b, -a - b}, {a - b, -a + b}}};
}

double QLandscape::q_m1() const noexcept {
    return -1.0 + 2.0 / std::sqrt(static_cast<double>(d_)) * std::cos(phases_.Phi / 3.0);
}

double QLandscape::q_m2(double gamma) const noexcept {
    const double d = static_cast<double>(d_);
    return (-3.0 + 6.0 / d + 2.0 / d * std::cos(gamma + phases_.Phi)) /
           (3.0 + 2.0 / std::sqrt(d) * std::cos(gamma));
}

StationaryReport verify_stationary_structure(const Basis& c, const Basis& e, const Basis& f, const InputWord& word,
                                             const StationaryOptions& options) {
    const QLandscape land(c, e, f, word);
    StationaryReport rep;
    rep.word = word.digits();
    rep.Phi = land.phases().Phi;
    rep.varphi = land.phases().varphi;
    rep.q_m1 = land.q_m1();

    // (a) bracketed roots of the gamma equation. The scan runs one step past pi so a
    // root sitting on the wrap point is still bracketed (g flips sign over 2 pi).
    auto g = [&](double t) { return land.gamma_equation(t); };
    const std::size_t m = options.scan_points;
    double prev_t = -kPi;
    double prev_g = g(prev_t);
    for (std::size_t i = 1; i <= m + 1; ++i) {
        const double t = -kPi + 2.0 * kPi * static_cast<double>(i) / static_cast<double>(m);
        const double gt = g(t);
        double root = std::numeric_limits<double>::quiet_NaN();
        if (prev_g == 0.0) {
            root = prev_t;
        } else if ((prev_g < 0.0) != (gt < 0.0) && gt != 0.0) {
            root = bisect(g, prev_t, t, prev_g);
        }
        if (!std::isnan(root)) {
            const double wrapped = wrap_phase(root);
            const bool dup = std::any_of(rep.roots.begin(), rep.roots.end(), [&](const GammaRoot& r) {
                return std::abs(wrap_phase(r.gamma - wrapped)) < 1e-9;
            });
            if (!dup) rep.roots.push_back(GammaRoot{wrapped, 0.0, 0.0});
        }
        prev_t = t;
        prev_g = gt;
    }
    if (rep.roots.empty()) throw Error(ErrorKind::RootNotFound, "gamma equation has no sign change on [-pi, pi)");

    // (c) + (d) constancy along each horizontal line and q_m2
    rep.qm1_dominates = true;
    for (auto& r : rep.roots) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t i = 0; i < options.line_samples; ++i) {
            const double t1 = -kPi + 2.0 * kPi * static_cast<double>(i) / static_cast<double>(options.line_samples);
            const double v = land.q(t1, r.gamma);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        r.q_variation = hi - lo;
        r.q_m2 = land.q_m2(r.gamma);
        rep.max_q_variation = std::max(rep.max_q_variation, r.q_variation);
        if (rep.q_m1 < r.q_m2 - kDominanceTol) rep.qm1_dominates = false;
    }
    rep.gamma0 = rep.roots.front().gamma;
    rep.q_m2 = rep.roots.front().q_m2;

    // (b) finite-difference gradients at the slanted intersections. In d = 3 the
    // three states can be linearly dependent, and then one intersection is a zero
    // of the trial state where q is 0/0.
    const double h = options.fd_step;
    const auto pts = land.slanted_intersections();
    for (std::size_t k = 0; k < 3; ++k) {
        const double t1 = pts[k][0];
        const double t2 = pts[k][1];
        if (land.state_norm2(t1, t2) < kSingularNorm2) {
            rep.intersection_singular[k] = true;
            rep.gradient_norms[k] = std::numeric_limits<double>::quiet_NaN();
            rep.intersection_q[k] = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        const double g1 = (land.q(t1 + h, t2) - land.q(t1 - h, t2)) / (2.0 * h);
        const double g2 = (land.q(t1, t2 + h) - land.q(t1, t2 - h)) / (2.0 * h);
        rep.gradient_norms[k] = std::hypot(g1, g2);
        rep.intersection_q[k] = land.q(t1, t2);
    }

    // (e) global maximum on a uniform grid
    rep.grid_max = -std::numeric_limits<double>::infinity();
    const std::size_t n = options.grid_points;
    for (std::size_t i = 0; i < n; ++i) {
        const double t1 = -kPi + 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double t2 = -kPi + 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
            rep.grid_max = std::max(rep.grid_max, land.q(t1, t2));
        }
    }
    rep.grid_bounded = rep.grid_max <= rep.q_m1 + kGridTol;
    return rep;
}

std::string stationary_to_json(const StationaryReport& report) {
    using nlohmann::ordered_json;
    ordered_json roots = ordered_json::array();
    for (const auto& r : report.roots) {
        roots.push_back({{"gamma", r.gamma}, {"q_m2", r.q_m2}, {"q_variation", r.q_variation}});
    }
    ordered_json j;
    j["word"] = report.word;
    j["Phi"] = report.Phi;
    j["varphi"] = report.varphi;
    j["gamma0"] = report.gamma0;
    j["q_m1"] = report.q_m1;
    j["q_m2"] = report.q_m2;
    j["roots"] = std::move(roots);
    j["gradient_norms"] = report.gradient_norms;
    j["intersection_singular"] = report.intersection_singular;
    j["intersection_q"] = report.intersection_q;
    j["max_q_variation"] = report.max_q_variation;
    j["grid_max"] = report.grid_max;
    j["qm1_dominates"] = report.qm1_dominates;
    j["grid_bounded"] = report.grid_bounded;
    return j.dump(2) + "\n";
}

}  // namespace qrac
