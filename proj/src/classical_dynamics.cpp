#include "quartosc/classical_dynamics.hpp"

#include <cmath>

namespace quartosc {

namespace {

constexpr double pi = 3.14159265358979323846;

struct PhasePoint {
    double x;
    double p;
};

PhasePoint derivative(const PhasePoint& s, double phi,
                      const OscillatorParams& osc) {
    return {s.p / osc.m,
            -osc.m * osc.omega0 * osc.omega0 * s.x - osc.beta * s.x * s.x * s.x -
                phi};
}

PhasePoint rk4_step(const PhasePoint& s, double h, double phi,
                    const OscillatorParams& osc) {
    const PhasePoint k1 = derivative(s, phi, osc);
    const PhasePoint k2 =
        derivative({s.x + 0.5 * h * k1.x, s.p + 0.5 * h * k1.p}, phi, osc);
    const PhasePoint k3 =
        derivative({s.x + 0.5 * h * k2.x, s.p + 0.5 * h * k2.p}, phi, osc);
    const PhasePoint k4 =
        derivative({s.x + h * k3.x, s.p + h * k3.p}, phi, osc);
    return {s.x + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
            s.p + h / 6.0 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p)};
}

// Energy-drift allowance: 1e-8 relative, loosened proportionally for runs
// longer than 1000 steps since RK4 drift accumulates linearly.
void check_energy(double e0, double e_now, double e_ref, std::size_t steps) {
    const double allowance =
        1e-8 * e_ref * std::max(1.0, static_cast<double>(steps) / 1000.0);
    if (std::fabs(e_now - e0) > allowance) {
        throw NumericError(ErrorCode::StepTooLarge,
                           "energy drift " + std::to_string(e_now - e0) +
                               " after " + std::to_string(steps) + " steps");
    }
}

}  // namespace

double default_step(const OscillatorParams& osc) {
    return 1e-3 * 2.0 * pi / osc.omega0;
}

double total_energy(double x, double p, double phi,
                    const OscillatorParams& osc) {
    return p * p / (2.0 * osc.m) +
           0.5 * osc.m * osc.omega0 * osc.omega0 * x * x +
           0.25 * osc.beta * x * x * x * x + phi * x;
}

ClassicalTrajectory integrate(double x0, double p0, double phi,
                              const OscillatorParams& osc, double t_end,
                              double h) {
    if (t_end < 0.0) {
        throw ConfigError(ErrorCode::NonMonotonicTimes,
                          "t_end must be nonnegative");
    }
    if (h <= 0.0) h = default_step(osc);
    const std::size_t n =
        std::max<std::size_t>(1, static_cast<std::size_t>(
                                     std::ceil(t_end / h - 1e-12)));
    const double step = t_end > 0.0 ? t_end / static_cast<double>(n) : h;

    ClassicalTrajectory traj;
    traj.phi = phi;
    traj.step = step;
    traj.times.reserve(n + 1);
    traj.positions.reserve(n + 1);
    traj.momenta.reserve(n + 1);

    PhasePoint s{x0, p0};
    const double e0 = total_energy(x0, p0, phi, osc);
    const double e_ref = std::max(std::fabs(e0), hbar * osc.omega0);
    traj.times.push_back(0.0);
    traj.positions.push_back(s.x);
    traj.momenta.push_back(s.p);
    if (t_end == 0.0) return traj;
    for (std::size_t k = 1; k <= n; ++k) {
        s = rk4_step(s, step, phi, osc);
        traj.times.push_back(step * static_cast<double>(k));
        traj.positions.push_back(s.x);
        traj.momenta.push_back(s.p);
        check_energy(e0, total_energy(s.x, s.p, phi, osc), e_ref, k);
    }
    return traj;
}

TimeSeries integrate_at(double x0, double p0, double phi,
                        const OscillatorParams& osc,
                        const std::vector<double>& times, double h) {
    if (times.empty()) {
        throw ConfigError(ErrorCode::EmptyTimeGrid, "no sample times");
    }
    if (times.front() < 0.0) {
        throw ConfigError(ErrorCode::NonMonotonicTimes,
                          "times must start at t >= 0");
    }
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        if (!(times[i] < times[i + 1])) {
            throw ConfigError(ErrorCode::NonMonotonicTimes,
                              "times must be strictly increasing");
        }
    }
    if (h <= 0.0) h = default_step(osc);

    TimeSeries out;
    out.times = times;
    out.values.assign(times.size(), 0.0);
    out.method = "classical-rk4";

    PhasePoint s{x0, p0};
    double t = 0.0;
    std::size_t steps = 0;
    const double e0 = total_energy(x0, p0, phi, osc);
    const double e_ref = std::max(std::fabs(e0), hbar * osc.omega0);
    for (std::size_t j = 0; j < times.size(); ++j) {
        const double target = times[j];
        while (t < target) {
            const double dt = std::min(h, target - t);
            s = rk4_step(s, dt, phi, osc);
            t += dt;
            ++steps;
        }
        check_energy(e0, total_energy(s.x, s.p, phi, osc), e_ref,
                     std::max<std::size_t>(steps, 1));
        out.values[j] = s.x;
    }
    return out;
}

double appendix_frequency(double x0, const OscillatorParams& osc) {
    const double b = osc.beta / osc.m;  // x'' = -w0^2 x - b x^3
    const double w02 = osc.omega0 * osc.omega0;
    const double bx2 = b * x0 * x0;
    const double w2 =
        (6.0 * bx2 + 8.0 * w02 +
         std::sqrt(30.0 * bx2 * bx2 + 96.0 * bx2 * w02 + 64.0 * w02 * w02)) /
        16.0;
    return std::sqrt(w2);
}

double appendix_solution(double x0, const OscillatorParams& osc, double t) {
    const double b = osc.beta / osc.m;
    const double w = appendix_frequency(x0, osc);
    const double w2 = w * w;
    const double a3 = b * x0 * x0 * x0 / (32.0 * w2);
    const double a5 = b * b * std::pow(x0, 5) / (1024.0 * w2 * w2);
    return x0 * std::cos(w * t) + a3 * (std::cos(3.0 * w * t) - std::cos(w * t)) +
           a5 * (std::cos(5.0 * w * t) - std::cos(w * t));
}

}  // namespace quartosc
