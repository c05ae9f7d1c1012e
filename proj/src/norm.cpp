#include "schw/norm.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "schw/errors.hpp"
#include "schw/parallel.hpp"

namespace schw {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Objective {
    const std::function<Complex(Complex)>& schwarzian;
    double max_radius;

    double operator()(Complex z) const {
        const double r2 = std::norm(z);
        if (!(std::sqrt(r2) <= max_radius)) return kNegInf;
        try {
            const double w = 1.0 - r2;
            const double v = w * w * std::abs(schwarzian(z));
            return std::isfinite(v) ? v : kNegInf;
        } catch (const Error&) {
            return kNegInf;
        }
    }
};

// Golden-section maximisation of g on [-h, h]; returns the best abscissa.
double golden_max(const std::function<double(double)>& g, double h) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = -h, b = h;
    double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
    double gc = g(c), gd = g(d);
    for (int it = 0; it < 48; ++it) {
        if (gc >= gd) {
            b = d;
            d = c;
            gd = gc;
            c = b - kInvPhi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + kInvPhi * (b - a);
            gd = g(d);
        }
    }
    return gc >= gd ? c : d;
}

// Coordinate ascent along x, y, radial and angular directions.
void ascend(const Objective& F, Complex& z, double& best, double h0) {
    double h = h0;
    for (int round = 0; round < 400 && h > 1e-11; ++round) {
        const double before = best;
        for (int dir = 0; dir < 4; ++dir) {
            const double r = std::abs(z);
            if (dir >= 2 && r < 1e-9) continue;
            const Complex base = z;
            auto along = [&, dir, r, base](double t) -> Complex {
                switch (dir) {
                case 0:
                    return base + t;
                case 1:
                    return base + Complex(0.0, t);
                case 2:
                    return base * ((r + t) / r);
                default:
                    return base * std::polar(1.0, t / r);
                }
            };
            auto g = [&](double t) { return F(along(t)); };
            const double t = golden_max(g, h);
            const double v = g(t);
            if (v > best) {
                best = v;
                z = along(t);
            }
        }
        if (best - before <= 1e-15 * std::max(1.0, std::abs(best))) h *= 0.25;
    }
}

} // namespace

NormEstimate estimate_weighted_sup(const std::function<Complex(Complex)>& schwarzian,
                                   const GridSpec& grid) {
    if (grid.resolution < 2) throw DomainError("grid resolution must be at least 2");
    if (!(grid.max_radius > 0.0 && grid.max_radius < 1.0))
        throw DomainError("grid max_radius must lie in (0, 1)");

    const Objective F{schwarzian, grid.max_radius};
    const int n = grid.resolution;
    const double spacing = 2.0 * grid.max_radius / (n - 1);
    std::vector<double> values(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), kNegInf);
    std::vector<char> inside(values.size(), 0);
    auto point = [&](std::size_t idx) {
        const int i = static_cast<int>(idx / static_cast<std::size_t>(n));
        const int j = static_cast<int>(idx % static_cast<std::size_t>(n));
        return Complex(-grid.max_radius + i * spacing, -grid.max_radius + j * spacing);
    };
    parallel_for(values.size(), [&](std::size_t idx) {
        const Complex z = point(idx);
        if (std::abs(z) <= grid.max_radius) {
            inside[idx] = 1;
            values[idx] = F(z);
        }
    });

    NormEstimate est;
    est.grid_resolution = n;
    std::optional<std::size_t> best;
    for (std::size_t idx = 0; idx < values.size(); ++idx) {
        if (!inside[idx]) continue;
        if (values[idx] == kNegInf) {
            ++est.skipped;
            continue;
        }
        ++est.evaluated;
        // Ties resolve to the lexicographically smallest (re, im); the scan
        // order is already lexicographic, so only strict improvements move.
        if (!best || values[idx] > values[*best]) best = idx;
    }
    if (!best) throw NumericalError("norm estimate: no grid point could be evaluated");

    Complex z = point(*best);
    double value = values[*best];
    if (grid.refine) {
        ascend(F, z, value, 2.0 * spacing);
        est.refined = true;
    }
    est.lower_bound = value;
    est.attaining_point = z;
    return est;
}

} // namespace schw
