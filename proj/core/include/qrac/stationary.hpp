#pragma once

#include <array>
#include <string>
#include <vector>

#include "qrac/qrac.hpp"

namespace qrac {

/// Success-probability landscape of the trial state
///   |psi> ~ |c_x0> + e^{i(t1 - phi01)} |e_x1> + e^{i(t2 - phi02)} |f_x2>
/// written as P = (2 + q(t1, t2)) / 3.
class QLandscape {
public:
    /// Throws NotUnbiased.
    QLandscape(const Basis& c, const Basis& e, const Basis& f, const InputWord& word);

    const PhiRecord& phases() const noexcept { return phases_; }
    std::size_t dim() const noexcept { return d_; }

    /// Closed-form q. Undefined (0/0) where the unnormalized trial state vanishes.
    double q(double t1, double t2) const noexcept;
    /// Squared norm of the unnormalized trial state, the denominator of q.
    double state_norm2(double t1, double t2) const noexcept;
    /// 3 * (Born-rule success probability of the explicit state) - 2.
    double q_born(double t1, double t2) const;
    /// Closed-form dq/dt1.
    double dq_dt1(double t1, double t2) const noexcept;
    /// dq/dt2 via the reflection symmetry q(t1, t2) = q(-t2, -t1).
    double dq_dt2(double t1, double t2) const noexcept;

    /// The t1-independent factor of dq/dt1 whose zeros t2 = gamma give the
    /// horizontal stationary lines.
    double gamma_equation(double t2) const noexcept;

    /// Intersections of the two slanted stationary lines, ordered as
    /// (Phi/3, -Phi/3), (Phi/3 + 2pi/3, -Phi/3 - 2pi/3), (Phi/3 - 2pi/3, -Phi/3 + 2pi/3).
    std::array<std::array<double, 2>, 3> slanted_intersections() const noexcept;

    double q_m1() const noexcept;
    double q_m2(double gamma) const noexcept;

private:
    std::size_t d_;
    PhiRecord phases_;
    CVector c_, e_, f_;
};

struct GammaRoot {
    double gamma = 0.0;
    double q_m2 = 0.0;
    double q_variation = 0.0;  // max - min of q along t2 = gamma
};

struct StationaryReport {
    std::vector<std::uint32_t> word;
    double Phi = 0.0;
    double varphi = 0.0;
    double gamma0 = 0.0;
    double q_m1 = 0.0;
    double q_m2 = 0.0;
    std::vector<GammaRoot> roots;
    std::array<double, 3> gradient_norms{};       // NaN where the intersection is singular
    std::array<bool, 3> intersection_singular{};  // trial state vanishes, so q has no gradient
    std::array<double, 3> intersection_q{};
    double max_q_variation = 0.0;
    double grid_max = 0.0;
    bool qm1_dominates = false;   // q_m1 >= q_m2 - 1e-12 for every root
    bool grid_bounded = false;    // grid max <= q_m1 + 1e-9
};

struct StationaryOptions {
    std::size_t scan_points = 4096;
    std::size_t line_samples = 256;
    std::size_t grid_points = 512;
    double fd_step = 1e-6;
};

/// Locates every root of the gamma equation on [-pi, pi), checks stationarity
/// at the slanted intersections where the trial state is nonzero, constancy along each t2 = gamma line and the
/// global maximum on a uniform grid. Throws RootNotFound, NotUnbiased.
StationaryReport verify_stationary_structure(const Basis& c, const Basis& e, const Basis& f, const InputWord& word,
                                             const StationaryOptions& options = {});

std::string stationary_to_json(const StationaryReport& report);

}  // namespace qrac
