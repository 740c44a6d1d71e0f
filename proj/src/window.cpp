#include "rfid/window.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rfid/error.hpp"

namespace rfid {

std::string to_string(WindowKind kind)
{
    switch (kind) {
    case WindowKind::rectangular: return "rect";
    case WindowKind::bartlett: return "bartlett";
    case WindowKind::hann: return "hann";
    case WindowKind::hamming: return "hamming";
    case WindowKind::blackman: return "blackman";
    }
    return "?";
}

WindowKind window_from_string(std::string_view name)
{
    if (name == "rect" || name == "rectangular")
        return WindowKind::rectangular;
    if (name == "bartlett")
        return WindowKind::bartlett;
    if (name == "hann")
        return WindowKind::hann;
    if (name == "hamming")
        return WindowKind::hamming;
    if (name == "blackman")
        return WindowKind::blackman;
    throw Error("unknown window '" + std::string(name) + "'");
}

double window_factor(WindowKind kind, double k, double n)
{
    if (!(n > 0.0))
        throw Error("window half-width must be positive");
    const double a = std::abs(k);
    if (a > n)
        return 0.0;
    const double t = std::numbers::pi * k / n;
    double w = 1.0;
    switch (kind) {
    case WindowKind::rectangular: w = 1.0; break;
    case WindowKind::bartlett: w = (n - a) / n; break;
    case WindowKind::hann: w = 0.5 + 0.5 * std::cos(t); break;
    case WindowKind::hamming: w = 0.54 + 0.46 * std::cos(t); break;
    case WindowKind::blackman: w = 0.42 + 0.5 * std::cos(t) + 0.08 * std::cos(2.0 * t); break;
    }
    return std::clamp(w, 0.0, 1.0);
}

double window_value(WindowKind kind, double k, double l, double n, double m)
{
    if (!(n > 0.0) || !(m > 0.0))
        throw Error("window half-widths must be positive");
    return window_factor(kind, k, n) * window_factor(kind, l, m);
}

WindowGrid window_grid(WindowKind kind, const GridSpec& spec)
{
    spec.validate();
    const double half_x = 0.5 * static_cast<double>(spec.nx - 1);
    const double half_y = 0.5 * static_cast<double>(spec.ny - 1);

    std::vector<double> wx(spec.nx), wy(spec.ny);
    for (std::size_t i = 0; i < spec.nx; ++i)
        wx[i] = window_factor(kind, static_cast<double>(i) - half_x, half_x);
    for (std::size_t j = 0; j < spec.ny; ++j)
        wy[j] = window_factor(kind, static_cast<double>(j) - half_y, half_y);

    WindowGrid w;
    w.spec = spec;
    w.kind = kind;
    w.weights.resize(spec.size());
    for (std::size_t j = 0; j < spec.ny; ++j) {
        for (std::size_t i = 0; i < spec.nx; ++i)
            w.weights[spec.index(i, j)] = wx[i] * wy[j];
    }
    w.energy = window_energy(w);
    return w;
}

double window_energy(const WindowGrid& w)
{
    double sum = 0.0;
    for (double v : w.weights)
        sum += v * v;
    if (sum == 0.0)
        throw Error("degenerate window");
    return sum / (w.spec.extent_x() * w.spec.extent_y());
}

}  // namespace rfid
