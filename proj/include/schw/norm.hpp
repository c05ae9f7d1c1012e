#pragma once

#include <functional>

#include "schw/jet.hpp"

namespace schw {

/// Sampling plan for sup_{|z|<1} (1-|z|^2)^2 |S(z)|: a resolution x
/// resolution Cartesian grid over [-max_radius, max_radius]^2, restricted to
/// |z| <= max_radius, followed by local ascent from the best grid point.
struct GridSpec {
    int resolution = 401;
    double max_radius = 1.0 - 1e-6;
    bool refine = true;
};

struct NormEstimate {
    /// (1-|z*|^2)^2 |S(z*)| at z* = attaining_point; a lower bound on the norm.
    double lower_bound = 0.0;
    Complex attaining_point{};
    int grid_resolution = 0;
    bool refined = false;
    int evaluated = 0;
    /// Grid points where S could not be evaluated (poles, critical points).
    int skipped = 0;
};

/// Weighted supremum of a Schwarzian-like field. `schwarzian` may throw
/// schw::Error at bad points; those are skipped and counted. Throws
/// NumericalError if every grid point fails.
NormEstimate estimate_weighted_sup(const std::function<Complex(Complex)>& schwarzian,
                                   const GridSpec& grid);

} // namespace schw
