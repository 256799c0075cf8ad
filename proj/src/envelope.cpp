#include "quartosc/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "quartosc/errors.hpp"

namespace quartosc {

TimeSeries extract_envelope(const TimeSeries& series, double baseline) {
    if (series.times.size() != series.values.size()) {
        throw ConfigError(ErrorCode::BadSeriesFile,
                          "times/values length mismatch");
    }
    const std::size_t n = series.times.size();
    TimeSeries env;
    env.method = "envelope";
    if (n < 3) {
        throw NumericError(ErrorCode::TooFewPeaks,
                           "series has fewer than 3 samples");
    }
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const double a = std::fabs(series.values[j - 1] - baseline);
        const double b = std::fabs(series.values[j] - baseline);
        const double c = std::fabs(series.values[j + 1] - baseline);
        if (!(b > a && b >= c)) continue;
        // Parabola through the triple: vertex offset in sample units.
        const double denom = a - 2.0 * b + c;
        double d = 0.0;
        if (denom != 0.0) {
            d = 0.5 * (a - c) / denom;
            d = std::clamp(d, -0.5, 0.5);
        }
        const double half_span =
            0.5 * (series.times[j + 1] - series.times[j - 1]);
        env.times.push_back(series.times[j] + d * half_span);
        env.values.push_back(b - 0.25 * (a - c) * d);
    }
    if (env.times.size() < 10) {
        throw NumericError(ErrorCode::TooFewPeaks,
                           std::to_string(env.times.size()) +
                               " peaks found, need at least 10");
    }
    return env;
}

namespace {

struct WindowedPeaks {
    std::vector<double> t;
    std::vector<double> v;
};

WindowedPeaks select_window(const TimeSeries& envelope, double lo, double hi) {
    if (!(lo < hi)) {
        throw ConfigError(ErrorCode::BadFitWindow,
                          "window_lo must be below window_hi");
    }
    WindowedPeaks w;
    for (std::size_t j = 0; j < envelope.times.size(); ++j) {
        const double t = envelope.times[j];
        if (t < lo || t > hi) continue;
        w.t.push_back(t);
        w.v.push_back(envelope.values[j]);
    }
    if (w.t.size() < 3) {
        throw NumericError(ErrorCode::TooFewPeaks,
                           std::to_string(w.t.size()) +
                               " peaks in window, need at least 3");
    }
    for (double v : w.v) {
        if (!(v > 0.0)) {
            throw NumericError(ErrorCode::NonPositiveEnvelope,
                               "peak value " + std::to_string(v));
        }
    }
    return w;
}

// Simple linear regression y = b0 + b1 u; returns slope, intercept,
// residual rms and the slope standard error.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;
    double slope_stderr = 0.0;
};

LineFit fit_line(const std::vector<double>& u, const std::vector<double>& y) {
    const double n = static_cast<double>(u.size());
    double su = 0.0;
    double sy = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        su += u[i];
        sy += y[i];
    }
    const double mu = su / n;
    const double my = sy / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        sxx += (u[i] - mu) * (u[i] - mu);
        sxy += (u[i] - mu) * (y[i] - my);
    }
    if (sxx == 0.0) {
        throw ConfigError(ErrorCode::BadFitWindow,
                          "degenerate window: all abscissae equal");
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mu;
    double ss = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * u[i]);
        ss += r * r;
    }
    f.rms = std::sqrt(ss / n);
    f.slope_stderr = u.size() > 2 ? std::sqrt(ss / (n - 2.0) / sxx) : 0.0;
    return f;
}

}  // namespace

EnvelopeFit fit_gaussian(const TimeSeries& envelope, double window_lo,
                         double window_hi) {
    const WindowedPeaks w = select_window(envelope, window_lo, window_hi);
    std::vector<double> u(w.t.size());
    std::vector<double> y(w.t.size());
    for (std::size_t i = 0; i < w.t.size(); ++i) {
        u[i] = w.t[i] * w.t[i];
        y[i] = std::log(w.v[i]);
    }
    const LineFit line = fit_line(u, y);
    EnvelopeFit fit;
    fit.model = "gaussian";
    fit.window_lo = window_lo;
    fit.window_hi = window_hi;
    fit.n_points = static_cast<int>(w.t.size());
    fit.residual_rms = line.rms;
    fit.prefactor = std::exp(line.intercept);
    if (line.slope >= 0.0) {
        fit.t_g_infinite = true;
        fit.t_g = std::numeric_limits<double>::infinity();
    } else {
        // ln v = ln A - t^2/(2 t_G^2)
        fit.t_g = 1.0 / std::sqrt(-2.0 * line.slope);
    }
    return fit;
}

EnvelopeFit fit_powerlaw(const TimeSeries& envelope, double window_lo,
                         double window_hi) {
    if (window_lo <= 0.0) {
        throw ConfigError(ErrorCode::BadFitWindow,
                          "power-law window must lie at t > 0");
    }
    const WindowedPeaks w = select_window(envelope, window_lo, window_hi);
    std::vector<double> u(w.t.size());
    std::vector<double> y(w.t.size());
    for (std::size_t i = 0; i < w.t.size(); ++i) {
        u[i] = std::log(w.t[i]);
        y[i] = std::log(w.v[i]);
    }
    const LineFit line = fit_line(u, y);
    EnvelopeFit fit;
    fit.model = "powerlaw";
    fit.window_lo = window_lo;
    fit.window_hi = window_hi;
    fit.n_points = static_cast<int>(w.t.size());
    fit.residual_rms = line.rms;
    fit.exponent = line.slope;
    fit.exponent_stderr = line.slope_stderr;
    fit.prefactor = std::exp(line.intercept);
    return fit;
}

}  // namespace quartosc
