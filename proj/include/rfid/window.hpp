#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rfid/grid.hpp"

namespace rfid {

enum class WindowKind { rectangular, bartlett, hann, hamming, blackman };

/// CLI spelling: rect, bartlett, hann, hamming, blackman.
std::string to_string(WindowKind kind);
WindowKind window_from_string(std::string_view name);

/// Separable taper evaluated at offsets (k, l) from the window center with
/// half-widths (n, m). Zero outside |k| <= n, |l| <= m. Clamped to [0, 1] so
/// the cosine windows return exact zeros at their edges.
double window_value(WindowKind kind, double k, double l, double n, double m);

/// One axis of the separable product above.
double window_factor(WindowKind kind, double k, double n);

/// Window sampled on a grid, centered on the grid midpoint with half-width
/// (nx-1)/2 along X and (ny-1)/2 along Y.
struct WindowGrid
{
    GridSpec spec;
    WindowKind kind = WindowKind::rectangular;
    std::vector<double> weights;
    /// Window energy U = sum(w^2) / (D1*D2), D1 = nx*dx, D2 = ny*dy.
    double energy = 0.0;

    double at(std::size_t i, std::size_t j) const { return weights[spec.index(i, j)]; }
};

WindowGrid window_grid(WindowKind kind, const GridSpec& spec);

/// Recomputes U from the weights. Throws "degenerate window" if all weights
/// are zero.
double window_energy(const WindowGrid& w);

}  // namespace rfid
