#include "rfid/models.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "rfid/error.hpp"

namespace rfid {

namespace {

constexpr double pi = std::numbers::pi;

double sinc(double x)
{
    if (std::abs(x) < 1e-6)
        return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

ModelFamily component_family(const PsdModel& m, int which)
{
    if (m.family != ModelFamily::mixed)
        return m.family;
    return which == 0 ? ModelFamily::gaussian : ModelFamily::exponential;
}

double component_cov(ModelFamily fam, const ModelComponent& c, double hx, double hy)
{
    return c.sigma * c.sigma * correlation_1d(fam, hx, c.lx) * correlation_1d(fam, hy, c.ly) *
           std::cos(2.0 * pi * c.fx0 * hx) * std::cos(2.0 * pi * c.fy0 * hy);
}

double component_psd(ModelFamily fam, const ModelComponent& c, double fx, double fy)
{
    return c.sigma * c.sigma * shifted_spectrum_1d(fam, fx, c.fx0, c.lx) *
           shifted_spectrum_1d(fam, fy, c.fy0, c.ly);
}

void validate_component(const ModelComponent& c)
{
    if (!(std::isfinite(c.sigma) && c.sigma >= 0.0))
        throw Error("model sigma must be finite and non-negative");
    if (!(std::isfinite(c.lx) && c.lx > 0.0) || !(std::isfinite(c.ly) && c.ly > 0.0))
        throw Error("model correlation lengths must be positive");
    if (!(std::isfinite(c.fx0) && c.fx0 >= 0.0) || !(std::isfinite(c.fy0) && c.fy0 >= 0.0))
        throw Error("model shift frequencies must be non-negative");
}

}  // namespace

std::string to_string(ModelFamily family)
{
    switch (family) {
    case ModelFamily::exponential: return "exponential";
    case ModelFamily::gaussian: return "gaussian";
    case ModelFamily::wave: return "wave";
    case ModelFamily::triangle: return "triangle";
    case ModelFamily::mixed: return "mixed";
    }
    return "?";
}

ModelFamily family_from_string(std::string_view name)
{
    if (name == "exponential")
        return ModelFamily::exponential;
    if (name == "gaussian")
        return ModelFamily::gaussian;
    if (name == "wave")
        return ModelFamily::wave;
    if (name == "triangle")
        return ModelFamily::triangle;
    if (name == "mixed")
        return ModelFamily::mixed;
    throw Error("unknown model family '" + std::string(name) + "'");
}

PsdModel PsdModel::single(ModelFamily family, ModelComponent c)
{
    if (family == ModelFamily::mixed)
        throw Error("PsdModel::single called with the mixed family");
    PsdModel m;
    m.family = family;
    m.first = c;
    m.first.sigma = std::abs(m.first.sigma);
    m.validate();
    return m;
}

PsdModel PsdModel::mixed(ModelComponent gaussian_part, ModelComponent exponential_part)
{
    PsdModel m;
    m.family = ModelFamily::mixed;
    m.first = gaussian_part;
    m.second = exponential_part;
    m.first.sigma = std::abs(m.first.sigma);
    m.second.sigma = std::abs(m.second.sigma);
    m.validate();
    return m;
}

void PsdModel::validate() const
{
    validate_component(first);
    if (family == ModelFamily::mixed)
        validate_component(second);
}

std::size_t parameter_count(ModelFamily family)
{
    return family == ModelFamily::mixed ? 10 : 5;
}

std::size_t PsdModel::parameter_count() const { return rfid::parameter_count(family); }

std::vector<double> PsdModel::parameters() const
{
    std::vector<double> p{first.sigma, first.lx, first.ly, first.fx0, first.fy0};
    if (family == ModelFamily::mixed)
        p.insert(p.end(), {second.sigma, second.lx, second.ly, second.fx0, second.fy0});
    return p;
}

PsdModel PsdModel::from_parameters(ModelFamily family, std::span<const double> p)
{
    if (p.size() != rfid::parameter_count(family))
        throw Error("parameter vector has the wrong length for family " + to_string(family));
    auto comp = [&](std::size_t o) { return ModelComponent{p[o], p[o + 1], p[o + 2], p[o + 3], p[o + 4]}; };
    if (family == ModelFamily::mixed)
        return mixed(comp(0), comp(5));
    return single(family, comp(0));
}

std::vector<std::string> parameter_names(ModelFamily family)
{
    if (family == ModelFamily::mixed)
        return {"sigma1", "lx1", "ly1", "fx0_1", "fy0_1", "sigma2", "lx2", "ly2", "fx0_2", "fy0_2"};
    return {"sigma", "lx", "ly", "fx0", "fy0"};
}

double correlation_1d(ModelFamily family, double h, double l)
{
    const double u = std::abs(h) / l;
    switch (family) {
    case ModelFamily::exponential: return std::exp(-u);
    case ModelFamily::gaussian: return std::exp(-u * u);
    case ModelFamily::wave: return sinc(u);
    case ModelFamily::triangle: return u <= 1.0 ? 1.0 - u : 0.0;
    case ModelFamily::mixed: break;
    }
    throw Error("correlation_1d is defined for single families only");
}

double spectrum_1d(ModelFamily family, double f, double l)
{
    switch (family) {
    case ModelFamily::exponential: return 2.0 * l / (1.0 + 4.0 * pi * pi * l * l * f * f);
    case ModelFamily::gaussian: return std::sqrt(pi) * l * std::exp(-pi * pi * l * l * f * f);
    case ModelFamily::wave: return std::abs(pi * l * f) <= 0.5 ? pi * l : 0.0;
    case ModelFamily::triangle: {
        const double s = sinc(pi * f * l);
        return l * s * s;
    }
    case ModelFamily::mixed: break;
    }
    throw Error("spectrum_1d is defined for single families only");
}

double shifted_spectrum_1d(ModelFamily family, double f, double f0, double l)
{
    if (f0 == 0.0)
        return spectrum_1d(family, f, l);
    return 0.5 * (spectrum_1d(family, f - f0, l) + spectrum_1d(family, f + f0, l));
}

std::vector<SeparableTerm> separable_terms(const PsdModel& model)
{
    if (model.family == ModelFamily::mixed)
        return {{ModelFamily::gaussian, model.first}, {ModelFamily::exponential, model.second}};
    return {{model.family, model.first}};
}

double cov_eval(const PsdModel& model, double hx, double hy)
{
    double c = component_cov(component_family(model, 0), model.first, hx, hy);
    if (model.family == ModelFamily::mixed)
        c += component_cov(component_family(model, 1), model.second, hx, hy);
    return c;
}

double psd_eval(const PsdModel& model, double fx, double fy)
{
    double s = component_psd(component_family(model, 0), model.first, fx, fy);
    if (model.family == ModelFamily::mixed)
        s += component_psd(component_family(model, 1), model.second, fx, fy);
    return s;
}

double model_variance(const PsdModel& model)
{
    double v = model.first.sigma * model.first.sigma;
    if (model.family == ModelFamily::mixed)
        v += model.second.sigma * model.second.sigma;
    return v;
}

double scale_of_fluctuation(ModelFamily family, double l)
{
    if (!(l > 0.0))
        throw Error("correlation length must be positive");
    switch (family) {
    case ModelFamily::exponential: return l;
    case ModelFamily::gaussian: return 0.5 * std::sqrt(pi) * l;
    default: break;
    }
    throw Error("scale of fluctuation is only defined here for exponential and gaussian families");
}

nlohmann::json model_to_json(const PsdModel& model, const std::string& units)
{
    nlohmann::json j;
    j["family"] = to_string(model.family);
    const auto names = parameter_names(model.family);
    const auto values = model.parameters();
    for (std::size_t k = 0; k < names.size(); ++k)
        j[names[k]] = values[k];
    if (!units.empty())
        j["units"] = units;
    return j;
}

PsdModel model_from_json(const nlohmann::json& j)
{
    if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
        throw Error("model JSON must be an object with a string 'family'");
    const ModelFamily family = family_from_string(j["family"].get<std::string>());
    const auto names = parameter_names(family);
    std::vector<double> p(names.size(), 0.0);
    for (std::size_t k = 0; k < names.size(); ++k) {
        const bool is_shift = names[k].rfind("fx0", 0) == 0 || names[k].rfind("fy0", 0) == 0;
        if (!j.contains(names[k])) {
            if (is_shift)
                continue;
            throw Error("model JSON is missing parameter '" + names[k] + "'");
        }
        if (!j[names[k]].is_number())
            throw Error("model parameter '" + names[k] + "' must be a number");
        p[k] = j[names[k]].get<double>();
    }
    return PsdModel::from_parameters(family, p);
}

PsdModel load_model(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open model file " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(path.string() + ": " + e.what());
    }
    return model_from_json(j);
}

void save_model(const PsdModel& model, const std::filesystem::path& path, const std::string& units)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw Error("cannot write model file " + path.string());
    out << model_to_json(model, units).dump(2) << "\n";
}

}  // namespace rfid
