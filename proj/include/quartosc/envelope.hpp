#pragma once

#include <string>

#include "quartosc/time_series.hpp"

// Envelope extraction and decay-law fitting for oscillatory signals:
// rectify around a baseline, locate peaks with sub-sample refinement, then
// fit either a Gaussian or a power law to the peak sequence.

namespace quartosc {

struct EnvelopeFit {
    std::string model;        // "gaussian" or "powerlaw"
    double t_g = 0.0;         // gaussian: decay scale (1/e^{1/2} width)
    bool t_g_infinite = false;  // gaussian: non-decaying envelope marker
    double exponent = 0.0;    // powerlaw: fitted slope of log-log
    double exponent_stderr = 0.0;
    double prefactor = 0.0;   // powerlaw: amplitude at t = 1
    double window_lo = 0.0;
    double window_hi = 0.0;
    double residual_rms = 0.0;  // in log space
    int n_points = 0;
};

// Peak sequence of |values - baseline|: local maxima over three samples,
// refined by fitting a parabola through the triple. Throws TooFewPeaks when
// fewer than 10 peaks exist (too sparse to call it an envelope).
TimeSeries extract_envelope(const TimeSeries& series, double baseline);

// Least-squares fit of ln(v) against t^2 over peaks with window_lo <= t <=
// window_hi. A non-negative slope means no decay; the fit then reports
// t_g_infinite instead of a scale. Needs at least 3 peaks in the window.
EnvelopeFit fit_gaussian(const TimeSeries& envelope, double window_lo,
                         double window_hi);

// Least-squares fit of ln(v) against ln(t) over the window; the slope
// standard error comes from the usual regression estimate. Window must lie
// at t > 0.
EnvelopeFit fit_powerlaw(const TimeSeries& envelope, double window_lo,
                         double window_hi);

}  // namespace quartosc
