#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "rfid/grid.hpp"
#include "rfid/window.hpp"

namespace rfid {

/// PSD estimate on the centered DFT frequency grid of its originating field.
///
/// Bin (ic, jc) holds frequency (fx, fy) = ((ic - nx/2)/(nx*dx),
/// (jc - ny/2)/(ny*dy)) with integer division, so zero frequency sits at
/// (nx/2, ny/2). Values are in field-units^2 * length^2, the same units as
/// a continuous PSD.
struct Periodogram
{
    GridSpec spec;
    std::vector<double> values;
    WindowKind window = WindowKind::rectangular;
    std::size_t n_averaged = 1;
    bool demean = false;

    std::ptrdiff_t freq_index_x(std::size_t ic) const
    {
        return static_cast<std::ptrdiff_t>(ic) - static_cast<std::ptrdiff_t>(spec.nx / 2);
    }
    std::ptrdiff_t freq_index_y(std::size_t jc) const
    {
        return static_cast<std::ptrdiff_t>(jc) - static_cast<std::ptrdiff_t>(spec.ny / 2);
    }
    double df_x() const { return 1.0 / spec.extent_x(); }
    double df_y() const { return 1.0 / spec.extent_y(); }
    double fx(std::size_t ic) const { return static_cast<double>(freq_index_x(ic)) * df_x(); }
    double fy(std::size_t jc) const { return static_cast<double>(freq_index_y(jc)) * df_y(); }

    double at(std::size_t ic, std::size_t jc) const { return values[spec.index(ic, jc)]; }

    /// Value at signed frequency indices, wrapped modulo the grid.
    double at_freq(std::ptrdiff_t k, std::ptrdiff_t l) const;

    /// Frequency lattice as a GridSpec (spacing df, origin at the most negative bin).
    GridSpec frequency_spec() const;

    /// Zero frequency bin is meaningful only when the data was not demeaned.
    bool zero_bin_informative() const { return !demean; }
};

/// Biased covariance estimate on non-negative lags (k*dx, l*dy),
/// 0 <= k <= max_lag_x, 0 <= l <= max_lag_y.
struct CovarianceGrid
{
    std::size_t max_lag_x = 0;
    std::size_t max_lag_y = 0;
    double dx = 1.0;
    double dy = 1.0;
    std::vector<double> values;

    double at(std::size_t k, std::size_t l) const { return values[l * (max_lag_x + 1) + k]; }
};

/// S(f) = |DFT2{(z - mean?) * w}|^2 / (N*M*U).
Periodogram modified_periodogram(const GridField& field, WindowKind window, bool demean);

/// Pointwise mean of per-realization modified periodograms. Realizations are
/// transformed in parallel and folded in ascending index order, so the result
/// is independent of the worker count.
Periodogram average_periodogram(const Ensemble& ens, WindowKind window, bool demean);

/// C(k, l) = 1/(N M) * sum_{n < N-k, m < M-l} Z(n+k, m+l) Z(n, m).
CovarianceGrid covariance_estimate(const GridField& field, std::size_t max_lag_x,
                                   std::size_t max_lag_y);

/// Triangular bias factor ((N-|k|)/N) * ((M-|l|)/M), zero outside the grid.
double bartlett_bias_weight(std::ptrdiff_t k, std::ptrdiff_t l, std::size_t n, std::size_t m);

/// The factor above tabulated on lags 0..N by 0..M (CovarianceGrid layout).
CovarianceGrid bartlett_bias_weights(std::size_t n, std::size_t m);

/// Writes the RFGRID values on the frequency lattice plus `<path>.meta`
/// (key=value lines: window, n_averaged, demean, dx, dy, origin_x, origin_y).
void save_periodogram(const Periodogram& p, const std::filesystem::path& path);
Periodogram load_periodogram(const std::filesystem::path& path);

std::filesystem::path periodogram_meta_path(const std::filesystem::path& path);

}  // namespace rfid
