#pragma once

#include <string>
#include <vector>

namespace quartosc {

// Sampled real-valued signal. `times` and `values` always have equal length;
// `method` records which engine produced it (carried into CSV metadata).
struct TimeSeries {
    std::vector<double> times;
    std::vector<double> values;
    std::string method;
};

}  // namespace quartosc
