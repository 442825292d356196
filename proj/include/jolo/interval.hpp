#pragma once

namespace jolo {

enum class IntervalMethod { ACI, BootP, BootT, Bayes };

struct IntervalEstimate {
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.95;
    IntervalMethod method = IntervalMethod::ACI;
    bool clamped_lower = false;  // set when a negative lower bound was clamped to 0

    bool contains(double v) const { return lower <= v && v <= upper; }
    double length() const { return upper - lower; }
};

const char* interval_method_name(IntervalMethod m);

} // namespace jolo
