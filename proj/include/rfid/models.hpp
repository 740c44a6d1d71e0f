#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace rfid {

enum class ModelFamily { exponential, gaussian, wave, triangle, mixed };

std::string to_string(ModelFamily family);
ModelFamily family_from_string(std::string_view name);

/// One separable covariance term: sigma^2 * rho(hx/lx) rho(hy/ly)
/// * cos(2 pi fx0 hx) cos(2 pi fy0 hy).
struct ModelComponent
{
    double sigma = 0.0;
    double lx = 1.0;
    double ly = 1.0;
    double fx0 = 0.0;
    double fy0 = 0.0;

    bool operator==(const ModelComponent&) const = default;
};

/// Parametric covariance / PSD pair.
///
/// Single families use `first` only. The mixed family is a Gaussian term
/// (`first`) plus an exponential term (`second`), each with its own shift
/// frequencies.
struct PsdModel
{
    ModelFamily family = ModelFamily::exponential;
    ModelComponent first;
    ModelComponent second;

    static PsdModel single(ModelFamily family, ModelComponent c);
    static PsdModel mixed(ModelComponent gaussian_part, ModelComponent exponential_part);

    /// Throws rfid::Error unless sigmas >= 0, lengths > 0, shifts >= 0.
    void validate() const;

    /// 5 for single families, 10 for mixed.
    std::size_t parameter_count() const;
    /// Flat parameter vector: (sigma, lx, ly, fx0, fy0) per component.
    std::vector<double> parameters() const;
    /// Inverse of parameters(). Negative sigmas are folded to |sigma|.
    static PsdModel from_parameters(ModelFamily family, std::span<const double> p);

    bool operator==(const PsdModel&) const = default;
};

std::size_t parameter_count(ModelFamily family);

/// JSON / report names: sigma, lx, ly, fx0, fy0 for single families;
/// sigma1, lx1, ..., fy0_1, sigma2, ..., fy0_2 for mixed.
std::vector<std::string> parameter_names(ModelFamily family);

double cov_eval(const PsdModel& model, double hx, double hy);

/// Exact 2D Fourier transform of cov_eval. Shifted terms are symmetrized over
/// +-fx0 and +-fy0, which is what makes their covariance real.
double psd_eval(const PsdModel& model, double fx, double fy);

/// Total variance, equal to cov_eval(model, 0, 0).
double model_variance(const PsdModel& model);

/// Half the integral of the 1D autocorrelation: l for exponential,
/// sqrt(pi)/2 * l for Gaussian. Other families throw.
double scale_of_fluctuation(ModelFamily family, double l);

/// Unit-variance, unshifted 1D autocorrelation and its transform.
double correlation_1d(ModelFamily family, double h, double l);
double spectrum_1d(ModelFamily family, double f, double l);
/// (S(f - f0) + S(f + f0)) / 2, the transform of rho(h) cos(2 pi f0 h).
double shifted_spectrum_1d(ModelFamily family, double f, double f0, double l);

struct SeparableTerm
{
    ModelFamily family;
    ModelComponent component;
};

/// The model as a sum of separable terms (one, or two for mixed).
std::vector<SeparableTerm> separable_terms(const PsdModel& model);

nlohmann::json model_to_json(const PsdModel& model, const std::string& units = "");
PsdModel model_from_json(const nlohmann::json& j);
PsdModel load_model(const std::filesystem::path& path);
void save_model(const PsdModel& model, const std::filesystem::path& path,
                const std::string& units = "");

}  // namespace rfid
