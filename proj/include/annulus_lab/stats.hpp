#pragma once

#include "annulus_lab/errors.hpp"

#include <cmath>
#include <cstddef>
#include <span>

namespace annulus_lab {

struct FitResult
{
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
    std::size_t n = 0;
};

/// Least-squares line through (log x, log y).
inline FitResult fit_loglog(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size())
        throw ArgumentError("fit_loglog: x and y differ in length");
    if (x.size() < 3)
        throw ArgumentError("fit_loglog: need at least 3 points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i]))
            throw ArgumentError("fit_loglog: values must be positive and finite");
        sx += std::log(x[i]);
        sy += std::log(y[i]);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y[i]) - my);
    }
    if (sxx == 0.0)
        throw ArgumentError("fit_loglog: x values are all equal");
    FitResult f;
    f.n = x.size();
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = std::log(y[i]) - (f.intercept + f.slope * std::log(x[i]));
        ss += r * r;
    }
    f.residual_rms = std::sqrt(ss / n);
    return f;
}

} // namespace annulus_lab
