#pragma once

#include <string>

#include "ymflow/flow.hpp"

namespace ymflow {

struct FitResult {
    std::string quantity;
    double t_lo = 0.0, t_hi = 0.0;
    double slope = 0.0, intercept = 0.0;
    double residual_rms = 0.0;
    bool bounded = false;  // t^alpha * value varies by < bounded_factor over the window
    std::size_t n_samples = 0;
};

/// Least squares on (log t, log value) over [t_lo, t_hi]; needs >= 8 samples
/// with positive values. weight_exponent alpha drives the bounded flag.
FitResult fit_scaling_exponent(const FlowSeries& s, const std::string& column, double t_lo,
                               double t_hi, double weight_exponent,
                               double bounded_factor = 3.0);

/// Earliest window of at least one decade holding >= min_samples rows, after
/// dropping the first skip_steps integrator steps (and t = 0).
std::pair<double, double> default_fit_window(const FlowSeries& s, long skip_steps = 4,
                                             std::size_t min_samples = 16);

}  // namespace ymflow
