#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "rfid/cli.hpp"
#include "rfid/diagnostics.hpp"
#include "rfid/error.hpp"
#include "rfid/fitting.hpp"
#include "rfid/microstructure.hpp"
#include "rfid/models.hpp"
#include "rfid/parallel.hpp"
#include "rfid/spectral.hpp"
#include "rfid/synthesis.hpp"

namespace py = pybind11;
using namespace rfid;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

PsdModel parse_model(const std::string& text) { return model_from_json(nlohmann::json::parse(text)); }

// (ny, nx) array for a row-major field.
Array to_array(const std::vector<double>& v, std::size_t nx, std::size_t ny)
{
    Array a({ny, nx});
    std::copy(v.begin(), v.end(), a.mutable_data());
    return a;
}

// Accepts (ny, nx) or (K, ny, nx).
std::vector<GridField> fields_from(const Array& a, double dx, double dy)
{
    if (a.ndim() != 2 && a.ndim() != 3)
        throw Error("expected a 2-D field or a 3-D stack of fields");
    const std::size_t k = a.ndim() == 3 ? a.shape(0) : 1;
    const std::size_t ny = a.shape(a.ndim() - 2), nx = a.shape(a.ndim() - 1);
    const GridSpec spec{nx, ny, dx, dy, 0.0, 0.0};
    std::vector<GridField> out;
    const double* d = a.data();
    for (std::size_t m = 0; m < k; ++m)
        out.emplace_back(spec, std::vector<double>(d + m * nx * ny, d + (m + 1) * nx * ny));
    return out;
}

py::object optional_list(const std::vector<std::optional<double>>& v)
{
    py::list out;
    for (const auto& x : v)
        out.append(x ? py::cast(*x) : py::none());
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Random field identification core";
    py::register_exception<Error>(m, "RfidError", PyExc_ValueError);

    m.def("set_thread_count", &set_thread_count, py::arg("n"));

    m.def(
        "psd",
        [](const std::string& model, Array fx, Array fy) {
            const auto mdl = parse_model(model);
            if (fx.size() != fy.size())
                throw Error("fx and fy must have the same size");
            Array out(fx.request().shape);
            for (py::ssize_t q = 0; q < fx.size(); ++q)
                out.mutable_data()[q] = psd_eval(mdl, fx.data()[q], fy.data()[q]);
            return out;
        },
        py::arg("model"), py::arg("fx"), py::arg("fy"));

    m.def(
        "covariance",
        [](const std::string& model, Array hx, Array hy) {
            const auto mdl = parse_model(model);
            if (hx.size() != hy.size())
                throw Error("hx and hy must have the same size");
            Array out(hx.request().shape);
            for (py::ssize_t q = 0; q < hx.size(); ++q)
                out.mutable_data()[q] = cov_eval(mdl, hx.data()[q], hy.data()[q]);
            return out;
        },
        py::arg("model"), py::arg("hx"), py::arg("hy"));

    m.def("model_variance", [](const std::string& model) { return model_variance(parse_model(model)); });

    m.def(
        "simulate",
        [](const std::string& model, std::size_t nx, std::size_t ny, double dx, double dy, double mean,
           const std::string& method, std::uint64_t seed, std::size_t count, unsigned embedding_factor) {
            SynthesisPlan plan;
            plan.model = parse_model(model);
            plan.spec = GridSpec{nx, ny, dx, dy, 0.0, 0.0};
            plan.method = method_from_string(method);
            plan.mean = mean;
            plan.seed = seed;
            plan.embedding_factor = embedding_factor;
            Ensemble ens;
            {
                py::gil_scoped_release release;
                ens = simulate_ensemble(plan, count);
            }
            Array out({count, ny, nx});
            for (std::size_t k = 0; k < count; ++k)
                std::copy(ens.fields()[k].values().begin(), ens.fields()[k].values().end(),
                          out.mutable_data() + k * nx * ny);
            return out;
        },
        py::arg("model"), py::arg("nx"), py::arg("ny"), py::arg("dx") = 1.0, py::arg("dy") = 1.0,
        py::arg("mean") = 0.0, py::arg("method") = "circulant-embedding", py::arg("seed") = 0,
        py::arg("count") = 1, py::arg("embedding_factor") = 2);

    py::class_<Periodogram>(m, "Periodogram")
        .def_property_readonly("values",
                               [](const Periodogram& p) { return to_array(p.values, p.spec.nx, p.spec.ny); })
        .def_property_readonly("fx",
                               [](const Periodogram& p) {
                                   std::vector<double> f(p.spec.nx);
                                   for (std::size_t i = 0; i < f.size(); ++i)
                                       f[i] = p.fx(i);
                                   return f;
                               })
        .def_property_readonly("fy",
                               [](const Periodogram& p) {
                                   std::vector<double> f(p.spec.ny);
                                   for (std::size_t j = 0; j < f.size(); ++j)
                                       f[j] = p.fy(j);
                                   return f;
                               })
        .def_property_readonly("window", [](const Periodogram& p) { return to_string(p.window); })
        .def_readonly("n_averaged", &Periodogram::n_averaged)
        .def_readonly("demean", &Periodogram::demean)
        .def("save", [](const Periodogram& p, const std::string& path) { save_periodogram(p, path); });

    m.def("load_periodogram", [](const std::string& path) { return load_periodogram(path); });

    m.def(
        "periodogram",
        [](const Array& fields, double dx, double dy, const std::string& window, bool demean, double trim) {
            auto fs = fields_from(fields, dx, dy);
            if (trim > 0.0)
                for (auto& f : fs)
                    f = trim_margin(f, trim);
            return average_periodogram(Ensemble(std::move(fs)), window_from_string(window), demean);
        },
        py::arg("fields"), py::arg("dx") = 1.0, py::arg("dy") = 1.0, py::arg("window") = "blackman",
        py::arg("demean") = true, py::arg("trim") = 0.0);

    m.def(
        "fit",
        [](const Periodogram& p, const std::vector<std::string>& families, std::uint64_t seed, std::size_t starts,
           std::size_t max_iter, const std::string& target) {
            FitOptions o;
            o.seed = seed;
            o.n_multistarts = starts;
            o.max_iterations = max_iter;
            o.target = target_from_string(target);
            std::vector<ModelFamily> fams;
            for (const auto& f : families)
                fams.push_back(family_from_string(f));
            FitResult r;
            {
                py::gil_scoped_release release;
                r = fams.size() == 1 ? fit_psd(p, fams[0], o) : select_model(p, fams, o);
            }
            return fit_report_json(r, o).dump();
        },
        py::arg("periodogram"), py::arg("families"), py::arg("seed") = 0, py::arg("starts") = 8,
        py::arg("max_iter") = 200, py::arg("target") = "psd");

    m.def(
        "residual_epsilon",
        [](const Periodogram& p, const std::string& model, const std::string& target) {
            return residual_epsilon(p, parse_model(model), target_from_string(target));
        },
        py::arg("periodogram"), py::arg("model"), py::arg("target") = "psd");

    m.def(
        "homogeneity",
        [](const Array& fields, bool random_order, std::uint64_t seed) {
            HomogeneityOptions o;
            o.random_subsample = random_order;
            o.seed = seed;
            const auto r = homogeneity_curves(Ensemble(fields_from(fields, 1.0, 1.0)), o);
            py::dict d;
            d["K"] = r.k_values;
            d["cv_mean"] = optional_list(r.cv_mean);
            d["cv_var"] = optional_list(r.cv_var);
            return d;
        },
        py::arg("fields"), py::arg("random_order") = false, py::arg("seed") = 0);

    m.def(
        "voronoi",
        [](std::size_t n_grains, std::size_t nx, std::size_t ny, double dx, double dy, std::uint64_t seed) {
            const auto t = voronoi_tessellation(n_grains, GridSpec{nx, ny, dx, dy, 0.0, 0.0}, seed);
            py::array_t<std::uint32_t> out({ny, nx});
            std::copy(t.grain_map.begin(), t.grain_map.end(), out.mutable_data());
            return out;
        },
        py::arg("n_grains"), py::arg("nx"), py::arg("ny"), py::arg("dx") = 1.0, py::arg("dy") = 1.0,
        py::arg("seed") = 0);

    m.def(
        "sample_orientations",
        [](std::size_t n, std::uint64_t seed, const std::string& mode) {
            const auto s = sample_orientations(
                n, seed, mode == "literal" ? OrientationSampling::literal_uniform : OrientationSampling::sphere_uniform);
            Array out({n, std::size_t{3}});
            for (std::size_t g = 0; g < n; ++g) {
                out.mutable_at(g, 0) = s[g].phi1;
                out.mutable_at(g, 1) = s[g].Phi;
                out.mutable_at(g, 2) = s[g].phi2;
            }
            return out;
        },
        py::arg("n"), py::arg("seed") = 0, py::arg("mode") = "sphere");

    m.def(
        "schmid_factors",
        [](double phi1, double Phi, double phi2, int axis) {
            std::vector<double> out;
            for (const auto& s : slip_systems_bcc24())
                out.push_back(resolved_shear(uniaxial_stress(axis), s, Orientation{phi1, Phi, phi2}));
            return out;
        },
        py::arg("phi1") = 0.0, py::arg("Phi") = 0.0, py::arg("phi2") = 0.0, py::arg("axis") = 2);

    m.def(
        "run_cli", [](const std::vector<std::string>& args) { return rfid::run(args); }, py::arg("args"));
}
