#include "ymflow/fit.hpp"

#include <cmath>

namespace ymflow {

FitResult fit_scaling_exponent(const FlowSeries& s, const std::string& column, double t_lo,
                               double t_hi, double weight_exponent, double bounded_factor) {
    if (!(t_lo < t_hi)) throw std::invalid_argument("fit: need t_lo < t_hi");
    auto ts = s.times();
    auto vs = s.column(column);
    std::vector<double> lx, ly;
    double wmin = 0.0, wmax = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i] < t_lo || ts[i] > t_hi) continue;
        if (!(ts[i] > 0.0)) continue;
        if (!(vs[i] > 0.0))
            throw std::invalid_argument("fit: nonpositive value of " + column + " in window");
        lx.push_back(std::log(ts[i]));
        ly.push_back(std::log(vs[i]));
        double w = std::pow(ts[i], weight_exponent) * vs[i];
        if (first) {
            wmin = wmax = w;
            first = false;
        } else {
            wmin = std::min(wmin, w);
            wmax = std::max(wmax, w);
        }
    }
    if (lx.size() < 8) throw std::invalid_argument("fit: fewer than 8 samples in window");

    double n = static_cast<double>(lx.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("fit: degenerate sample times");
    FitResult r;
    r.quantity = column;
    r.t_lo = t_lo;
    r.t_hi = t_hi;
    r.n_samples = lx.size();
    r.slope = (n * sxy - sx * sy) / denom;
    r.intercept = (sy - r.slope * sx) / n;
    double rss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        double e = ly[i] - (r.intercept + r.slope * lx[i]);
        rss += e * e;
    }
    r.residual_rms = std::sqrt(rss / n);
    r.bounded = (wmin > 0.0) && (wmax / wmin < bounded_factor);
    return r;
}

std::pair<double, double> default_fit_window(const FlowSeries& s, long skip_steps,
                                             std::size_t min_samples) {
    auto ts = s.times();
    auto steps = s.column("step");
    std::vector<double> eligible;
    for (std::size_t i = 0; i < ts.size(); ++i)
        if (steps[i] > static_cast<double>(skip_steps) && ts[i] > 0.0) eligible.push_back(ts[i]);
    if (eligible.size() < std::max<std::size_t>(min_samples, 8))
        throw std::invalid_argument("default_fit_window: not enough recorded samples");
    double t_lo = eligible.front();
    double t_hi = 10.0 * t_lo;
    std::size_t count = 0;
    for (double t : eligible)
        if (t <= t_hi) ++count;
    if (count < min_samples) t_hi = eligible[min_samples - 1];
    t_hi = std::min(t_hi, eligible.back());
    return {t_lo, t_hi};
}

}  // namespace ymflow
