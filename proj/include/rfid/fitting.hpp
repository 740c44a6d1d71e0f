#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rfid/models.hpp"
#include "rfid/spectral.hpp"

namespace rfid {

/// What the model is compared against on the frequency grid.
enum class FitTarget {
    /// The model PSD sampled at the bin frequencies.
    psd,
    /// The exact expectation of the modified periodogram of a field with the
    /// model covariance: window taper, finite grid, aliasing and (when the
    /// periodogram was demeaned) mean removal included.
    expected_periodogram,
};

std::string to_string(FitTarget target);
FitTarget target_from_string(std::string_view name);

struct ParameterBounds
{
    double lower = 0.0;
    double upper = 0.0;
};

struct FitOptions
{
    std::size_t max_iterations = 200;
    double damping_init = 1e-3;
    double parameter_tolerance = 1e-8;
    double residual_tolerance = 1e-10;
    std::size_t n_multistarts = 8;
    std::uint64_t seed = 0;
    /// Empty means default_bounds().
    std::vector<ParameterBounds> bounds;
    FitTarget target = FitTarget::psd;

    void validate() const;
};

struct FitResult
{
    PsdModel model;
    double epsilon = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::size_t start_index = 0;
    /// Sum of squared deviations of the winning start.
    double cost = 0.0;
    /// Cost after the initial evaluation and after every accepted step.
    std::vector<double> cost_history;
    bool zero_bin_included = true;
    FitTarget target = FitTarget::psd;
};

/// Theoretical values of a model on the full centered grid of `layout`.
class TheoreticalPeriodogram
{
  public:
    TheoreticalPeriodogram(const Periodogram& layout, FitTarget target);

    std::vector<double> evaluate(const PsdModel& model) const;
    void evaluate(const PsdModel& model, std::vector<double>& out) const;

  private:
    struct AxisData;
    const AxisData& axis(bool along_x) const;
    void axis_factors(const AxisData& ax, ModelFamily family, double l, double f0,
                      std::vector<double>& t1, std::vector<std::complex<double>>& q,
                      double& mbar) const;

    GridSpec spec_;
    FitTarget target_;
    bool demean_;
    std::shared_ptr<const AxisData> x_;
    std::shared_ptr<const AxisData> y_;
};

/// Bins that enter the objective and epsilon: all of them, minus the zero
/// frequency bin when the periodogram was demeaned.
std::vector<char> fit_mask(const Periodogram& p);

/// sqrt(mean of squared deviations) / max(empirical), over fit_mask bins.
/// Throws "degenerate periodogram" for an all-zero input.
double residual_epsilon(const Periodogram& empirical, const PsdModel& model,
                        FitTarget target = FitTarget::psd);

/// Defaults: lengths in [dx/2, 10 * extent], shifts in [0, Nyquist], sigmas
/// in [0, 10 * sqrt(periodogram mass)].
std::vector<ParameterBounds> default_bounds(const Periodogram& empirical, ModelFamily family);

/// Moment/peak based starting point (see implementation notes in the source).
PsdModel initial_guess(const Periodogram& empirical, ModelFamily family);

/// Damped least squares (Levenberg-Marquardt) with projected bounds and
/// seeded multistarts; the winner is the start with the smallest epsilon,
/// ties going to the lower start index.
FitResult fit_psd(const Periodogram& empirical, ModelFamily family, const FitOptions& options = {});

/// Fits each family and keeps the smallest epsilon; near-ties go to the
/// family with fewer parameters, then to list order.
FitResult select_model(const Periodogram& empirical, const std::vector<ModelFamily>& families,
                       const FitOptions& options = {});

/// Epsilon difference below which select_model treats two fits as tied.
inline constexpr double kEpsilonTieTolerance = 1e-9;

nlohmann::json fit_report_json(const FitResult& result, const FitOptions& options);
FitResult fit_result_from_json(const nlohmann::json& j);

}  // namespace rfid
