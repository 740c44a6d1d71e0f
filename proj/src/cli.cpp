#include "rfid/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rfid/diagnostics.hpp"
#include "rfid/error.hpp"
#include "rfid/fitting.hpp"
#include "rfid/grid_io.hpp"
#include "rfid/microstructure.hpp"
#include "rfid/parallel.hpp"
#include "rfid/spectral.hpp"
#include "rfid/synthesis.hpp"

#ifndef RFID_VERSION
#define RFID_VERSION "dev"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace rfid {

namespace {

std::string realization_name(std::size_t i)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "real_%04zu.rfg", i + 1);
    return buf;
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot write " + path.string());
    out << text;
}

json read_json(const fs::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open " + path.string());
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

void ensure_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw Error("cannot create directory " + dir.string() + ": " + ec.message());
}

void ensure_parent(const fs::path& file)
{
    if (file.has_parent_path())
        ensure_dir(file.parent_path());
}

/// RFGRID files of a directory in lexicographic order, or the file itself.
std::vector<fs::path> grid_inputs(const fs::path& input)
{
    if (!fs::exists(input))
        throw Error("input does not exist: " + input.string());
    if (!fs::is_directory(input))
        return {input};
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(input)) {
        if (e.is_regular_file() && e.path().extension() == ".rfg")
            files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw Error("no .rfg files in " + input.string());
    return files;
}

Ensemble load_ensemble(const fs::path& input, double trim)
{
    std::vector<GridField> fields;
    std::vector<std::string> labels;
    for (const auto& f : grid_inputs(input)) {
        fields.push_back(trim > 0.0 ? trim_margin(load_grid(f), trim) : load_grid(f));
        labels.push_back(f.filename().string());
    }
    return Ensemble(std::move(fields), std::move(labels));
}

struct Manifest
{
    std::string subcommand;
    std::vector<std::string> args;
    json parameters = json::object();
    json inputs = json::array();
    json outputs = json::array();

    void write(const fs::path& path) const
    {
        json m;
        m["tool"] = "rfid";
        m["version"] = RFID_VERSION;
        m["subcommand"] = subcommand;
        m["arguments"] = args;
        m["parameters"] = parameters;
        m["inputs"] = inputs;
        m["outputs"] = outputs;
        m["rng"] = "Philox4x32-10, (seed, purpose/stream, index) addressed";
        write_text(path, m.dump(2) + "\n");
    }
};

fs::path file_manifest_path(const fs::path& out)
{
    fs::path p = out;
    p += ".manifest.json";
    return p;
}

GridSpec grid_spec_from(std::size_t nx, std::size_t ny, double dx, double dy, double ox, double oy)
{
    GridSpec s{nx, ny, dx, dy, ox, oy};
    s.validate();
    return s;
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

// ---------------------------------------------------------------------------

struct SimulateArgs
{
    std::string model;
    std::size_t nx = 0, ny = 0;
    double dx = 1.0, dy = 1.0, mean = 0.0;
    std::string method = "circulant-embedding";
    std::uint64_t seed = 0;
    std::size_t count = 1;
    unsigned factor = 2;
    std::string out;
};

void do_simulate(const SimulateArgs& a, Manifest& m)
{
    SynthesisPlan plan;
    plan.model = load_model(a.model);
    plan.spec = grid_spec_from(a.nx, a.ny, a.dx, a.dy, 0.0, 0.0);
    plan.method = method_from_string(a.method);
    plan.mean = a.mean;
    plan.seed = a.seed;
    plan.embedding_factor = a.factor;
    const FieldSynthesizer synth(plan);

    const fs::path out(a.out);
    ensure_dir(out);
    std::vector<std::string> names(a.count);
    parallel_for(a.count, [&](std::size_t i) {
        names[i] = realization_name(i);
        save_grid(synth.realization(i), out / names[i]);
    });

    m.parameters = {{"model", model_to_json(plan.model)}, {"nx", a.nx}, {"ny", a.ny},
                    {"dx", a.dx}, {"dy", a.dy}, {"mean", a.mean}, {"method", to_string(plan.method)},
                    {"seed", a.seed}, {"count", a.count}, {"embedding_factor", a.factor},
                    {"clipped_fraction", synth.clipped_fraction()}};
    m.inputs.push_back(a.model);
    for (const auto& n : names)
        m.outputs.push_back(n);
    m.write(out / "manifest.json");
}

struct MicrostructureArgs
{
    std::size_t grains = 0;
    std::size_t nx = 0, ny = 0;
    double dx = 1.0, dy = 1.0;
    std::uint64_t seed = 0;
    std::string surrogate;
    std::size_t count = 1;
    bool fixed_geometry = false;
    std::string sampling = "sphere";
    std::string out;
};

void do_microstructure(const MicrostructureArgs& a, Manifest& m)
{
    const GridSpec spec = grid_spec_from(a.nx, a.ny, a.dx, a.dy, 0.0, 0.0);
    OrientationSampling mode;
    if (a.sampling == "sphere")
        mode = OrientationSampling::sphere_uniform;
    else if (a.sampling == "literal")
        mode = OrientationSampling::literal_uniform;
    else
        throw Error("orientation sampling must be 'sphere' or 'literal'");

    std::optional<SurrogateParams> params;
    if (!a.surrogate.empty()) {
        const json j = read_json(a.surrogate);
        try {
            SurrogateParams p;
            p.base_mean = j.at("base_mean").get<double>();
            p.schmid_gain = j.at("schmid_gain").get<double>();
            p.intra_model = model_from_json(j.at("intra_model"));
            p.loading_axis = j.value("loading_axis", 1);
            p.seed = a.seed;
            params = p;
        } catch (const json::exception& e) {
            throw Error(a.surrogate + ": " + e.what());
        }
        m.inputs.push_back(a.surrogate);
    }

    const fs::path out(a.out);
    ensure_dir(out);
    if (params)
        ensure_dir(out / "fields");

    auto numbered = [&](const std::string& stem, const std::string& ext, std::size_t i) {
        if (a.count == 1)
            return stem + ext;
        char buf[32];
        std::snprintf(buf, sizeof(buf), "_%04zu", i + 1);
        return stem + buf + ext;
    };

    for (std::size_t i = 0; i < a.count; ++i) {
        const auto tess = voronoi_tessellation(a.grains, spec, a.seed, a.fixed_geometry ? 0 : i);
        const auto orientations = sample_orientations(a.grains, a.seed, mode, i);
        const auto grain_file = numbered("grains", ".rfg", i);
        const auto orient_file = numbered("orientations", ".csv", i);
        save_grid(tess.as_field(), out / grain_file);
        write_text(out / orient_file, orientations_csv(orientations));
        m.outputs.push_back(grain_file);
        m.outputs.push_back(orient_file);
        if (params) {
            SurrogateParams p = *params;
            p.realization = i;
            const auto field_file = fs::path("fields") / realization_name(i);
            save_grid(surrogate_stress_field(tess, orientations, p), out / field_file);
            m.outputs.push_back(field_file.generic_string());
        }
    }

    m.parameters = {{"grains", a.grains}, {"nx", a.nx}, {"ny", a.ny}, {"dx", a.dx}, {"dy", a.dy},
                    {"seed", a.seed}, {"count", a.count}, {"fixed_geometry", a.fixed_geometry},
                    {"orientation_sampling", a.sampling},
                    {"equivalent_grain_diameter",
                     equivalent_grain_diameter(spec.extent_x() * spec.extent_y(), a.grains)}};
    if (params) {
        m.parameters["surrogate"] = {{"base_mean", params->base_mean},
                                     {"schmid_gain", params->schmid_gain},
                                     {"intra_model", model_to_json(params->intra_model)},
                                     {"loading_axis", params->loading_axis}};
    }
    m.write(out / "manifest.json");
}

struct ProjectArgs
{
    std::string input;
    std::size_t nx = 0, ny = 0;
    double dx = 1.0, dy = 1.0, ox = 0.0, oy = 0.0;
    std::string method = "idw";
    double power = 2.0;
    std::size_t neighbors = 4;
    std::string out;
};

void do_project(const ProjectArgs& a, Manifest& m)
{
    const GridSpec spec = grid_spec_from(a.nx, a.ny, a.dx, a.dy, a.ox, a.oy);
    ProjectionMethod method;
    if (a.method == "nearest")
        method = ProjectionMethod::nearest();
    else if (a.method == "idw" || a.method == "inverse-distance")
        method = ProjectionMethod::inverse_distance(a.power, a.neighbors);
    else
        throw Error("projection method must be 'nearest' or 'idw'");

    const fs::path out(a.out);
    ensure_parent(out);
    save_grid(project_scattered(load_scattered(a.input), spec, method), out);
    m.parameters = {{"nx", a.nx}, {"ny", a.ny}, {"dx", a.dx}, {"dy", a.dy}, {"origin_x", a.ox},
                    {"origin_y", a.oy}, {"method", a.method}, {"power", a.power},
                    {"neighbors", a.neighbors}};
    m.inputs.push_back(a.input);
    m.outputs.push_back(out.filename().string());
    m.write(file_manifest_path(out));
}

struct PeriodogramArgs
{
    std::string input;
    std::string window = "blackman";
    bool demean = true;
    double trim = 0.1;
    std::string out;
};

void do_periodogram(const PeriodogramArgs& a, Manifest& m)
{
    const WindowKind window = window_from_string(a.window);
    const Ensemble ens = load_ensemble(a.input, a.trim);
    const Periodogram p = average_periodogram(ens, window, a.demean);

    const fs::path out(a.out);
    ensure_parent(out);
    save_periodogram(p, out);
    m.parameters = {{"window", to_string(window)}, {"demean", a.demean}, {"trim", a.trim},
                    {"n_averaged", p.n_averaged}};
    for (const auto& l : ens.labels())
        m.inputs.push_back(l);
    m.outputs.push_back(out.filename().string());
    m.outputs.push_back(periodogram_meta_path(out).filename().string());
    m.write(file_manifest_path(out));
}

struct FitArgs
{
    std::string periodogram;
    std::string family = "mixed";
    std::string target = "psd";
    std::uint64_t seed = 0;
    std::size_t starts = 8;
    std::size_t max_iter = 200;
    std::string out;
};

void do_fit(const FitArgs& a, Manifest& m)
{
    const Periodogram p = load_periodogram(a.periodogram);
    std::vector<ModelFamily> families;
    for (const auto& name : split_list(a.family))
        families.push_back(family_from_string(name));
    if (families.empty())
        throw Error("--family needs at least one family");

    FitOptions opt;
    opt.seed = a.seed;
    opt.n_multistarts = a.starts;
    opt.max_iterations = a.max_iter;
    opt.target = target_from_string(a.target);
    const FitResult r = families.size() == 1 ? fit_psd(p, families.front(), opt)
                                             : select_model(p, families, opt);

    json report = fit_report_json(r, opt);
    report["candidates"] = split_list(a.family);
    const fs::path out(a.out);
    ensure_parent(out);
    write_text(out, report.dump(2) + "\n");

    m.parameters = {{"families", split_list(a.family)}, {"seed", a.seed}, {"starts", a.starts},
                    {"max_iterations", a.max_iter}, {"target", a.target}};
    m.inputs.push_back(a.periodogram);
    m.outputs.push_back(out.filename().string());
    m.write(file_manifest_path(out));
}

struct HomogeneityArgs
{
    std::string input;
    bool random_order = false;
    std::uint64_t seed = 0;
    std::string out;
};

void do_homogeneity(const HomogeneityArgs& a, Manifest& m)
{
    const Ensemble ens = load_ensemble(a.input, 0.0);
    HomogeneityOptions opt;
    opt.random_subsample = a.random_order;
    opt.seed = a.seed;
    const auto report = homogeneity_curves(ens, opt);

    const fs::path out(a.out);
    ensure_dir(out);
    write_text(out / "homogeneity.csv", homogeneity_csv(report));
    save_grid(report.final_mean_field, out / "mean_field.rfg");
    save_grid(report.final_var_field, out / "var_field.rfg");

    m.parameters = {{"random_order", a.random_order}, {"seed", a.seed},
                    {"realizations", ens.size()},
                    {"cv_mean_decreasing_fraction", report.cv_mean_decreasing_fraction},
                    {"cv_var_decreasing_fraction", report.cv_var_decreasing_fraction}};
    for (const auto& l : ens.labels())
        m.inputs.push_back(l);
    m.outputs = {"homogeneity.csv", "mean_field.rfg", "var_field.rfg"};
    m.write(out / "manifest.json");
}

struct ReportArgs
{
    std::string fit;
    std::string periodogram;
    std::string cuts = "x,y,diag";
    std::string out;
};

void do_report(const ReportArgs& a, Manifest& m)
{
    const FitResult fit = fit_result_from_json(read_json(a.fit));
    const Periodogram p = load_periodogram(a.periodogram);
    const auto theory = TheoreticalPeriodogram(p, fit.target).evaluate(fit.model);

    std::string csv = "cut,offset,fx,fy,empirical,fitted\n";
    auto row = [&](const std::string& cut, int offset, std::size_t ic, std::size_t jc) {
        const std::size_t q = p.spec.index(ic, jc);
        csv += cut + "," + std::to_string(offset) + "," + format_number(p.fx(ic)) + "," +
               format_number(p.fy(jc)) + "," + format_number(p.values[q]) + "," +
               format_number(theory[q]) + "\n";
    };
    const std::size_t i0 = p.spec.nx / 2, j0 = p.spec.ny / 2;
    for (const auto& cut : split_list(a.cuts)) {
        if (cut == "x") {
            for (int off = 0; off <= 1; ++off)
                for (std::size_t ic = 0; ic < p.spec.nx; ++ic)
                    row("x", off, ic, (j0 + static_cast<std::size_t>(off)) % p.spec.ny);
        } else if (cut == "y") {
            for (int off = 0; off <= 1; ++off)
                for (std::size_t jc = 0; jc < p.spec.ny; ++jc)
                    row("y", off, (i0 + static_cast<std::size_t>(off)) % p.spec.nx, jc);
        } else if (cut == "diag") {
            // Equal frequency indices; this is fx = fy when nx*dx == ny*dy.
            const std::size_t n = std::min(p.spec.nx, p.spec.ny);
            for (std::size_t s = 0; s < n; ++s) {
                const auto k = static_cast<std::ptrdiff_t>(s) - static_cast<std::ptrdiff_t>(n / 2);
                row("diag", 0, static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i0) + k),
                    static_cast<std::size_t>(static_cast<std::ptrdiff_t>(j0) + k));
            }
        } else {
            throw Error("unknown cut '" + cut + "' (expected x, y or diag)");
        }
    }

    const fs::path out(a.out);
    ensure_parent(out);
    write_text(out, csv);
    m.parameters = {{"cuts", split_list(a.cuts)}, {"target", to_string(fit.target)}};
    m.inputs = {a.fit, a.periodogram};
    m.outputs.push_back(out.filename().string());
    m.write(file_manifest_path(out));
}

}  // namespace

int run(const std::vector<std::string>& args)
{
    CLI::App app{"Identification and synthesis of homogeneous 2D Gaussian random fields", "rfid"};
    app.require_subcommand(1);
    app.set_version_flag("--version", RFID_VERSION);

    unsigned threads = 0;
    app.add_option("--threads", threads, "Worker thread cap (falls back to RFID_THREADS)");

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "Synthesize realizations from a covariance model");
    c_sim->add_option("--model", sim.model, "Model JSON file")->required()->check(CLI::ExistingFile);
    c_sim->add_option("--nx", sim.nx)->required();
    c_sim->add_option("--ny", sim.ny)->required();
    c_sim->add_option("--dx", sim.dx)->required();
    c_sim->add_option("--dy", sim.dy)->required();
    c_sim->add_option("--mean", sim.mean, "Constant added to every sample");
    c_sim->add_option("--method", sim.method)->check(CLI::IsMember({"circulant-embedding", "spectral"}));
    c_sim->add_option("--seed", sim.seed);
    c_sim->add_option("--count", sim.count)->check(CLI::PositiveNumber);
    c_sim->add_option("--embedding-factor", sim.factor)->check(CLI::Range(2u, 8u));
    c_sim->add_option("--out", sim.out, "Output directory")->required();

    MicrostructureArgs mic;
    auto* c_mic = app.add_subcommand("microstructure", "Voronoi aggregates and surrogate stress fields");
    c_mic->add_option("--grains", mic.grains)->required()->check(CLI::PositiveNumber);
    c_mic->add_option("--nx", mic.nx)->required();
    c_mic->add_option("--ny", mic.ny)->required();
    c_mic->add_option("--dx", mic.dx)->required();
    c_mic->add_option("--dy", mic.dy)->required();
    c_mic->add_option("--seed", mic.seed);
    c_mic->add_option("--surrogate", mic.surrogate, "Surrogate parameter JSON")->check(CLI::ExistingFile);
    c_mic->add_option("--count", mic.count)->check(CLI::PositiveNumber);
    c_mic->add_flag("--fixed-geometry", mic.fixed_geometry, "Reuse one tessellation for all realizations");
    c_mic->add_option("--orientation-sampling", mic.sampling)->check(CLI::IsMember({"sphere", "literal"}));
    c_mic->add_option("--out", mic.out, "Output directory")->required();

    ProjectArgs prj;
    auto* c_prj = app.add_subcommand("project", "Project scattered x,y,value CSV onto a grid");
    c_prj->add_option("--input", prj.input)->required()->check(CLI::ExistingFile);
    c_prj->add_option("--nx", prj.nx)->required();
    c_prj->add_option("--ny", prj.ny)->required();
    c_prj->add_option("--dx", prj.dx)->required();
    c_prj->add_option("--dy", prj.dy)->required();
    c_prj->add_option("--origin-x", prj.ox);
    c_prj->add_option("--origin-y", prj.oy);
    c_prj->add_option("--method", prj.method)->check(CLI::IsMember({"idw", "inverse-distance", "nearest"}));
    c_prj->add_option("--power", prj.power);
    c_prj->add_option("--neighbors", prj.neighbors);
    c_prj->add_option("--out", prj.out)->required();

    PeriodogramArgs pgm;
    auto* c_pgm = app.add_subcommand("periodogram", "Average modified periodogram of RFGRID fields");
    c_pgm->add_option("--input", pgm.input, "RFGRID file or directory")->required();
    c_pgm->add_option("--window", pgm.window)
        ->check(CLI::IsMember({"rect", "bartlett", "hann", "hamming", "blackman"}));
    c_pgm->add_flag("--demean,!--no-demean", pgm.demean, "Remove each field's spatial mean (default on)");
    c_pgm->add_option("--trim", pgm.trim, "Edge fraction discarded before windowing");
    c_pgm->add_option("--out", pgm.out)->required();

    FitArgs fit;
    auto* c_fit = app.add_subcommand("fit", "Least-squares fit of a model periodogram");
    c_fit->add_option("--periodogram", fit.periodogram)->required()->check(CLI::ExistingFile);
    c_fit->add_option("--family", fit.family, "Family or comma-separated list to select from");
    c_fit->add_option("--target", fit.target)->check(CLI::IsMember({"psd", "expected-periodogram"}));
    c_fit->add_option("--seed", fit.seed);
    c_fit->add_option("--starts", fit.starts)->check(CLI::PositiveNumber);
    c_fit->add_option("--max-iter", fit.max_iter);
    c_fit->add_option("--out", fit.out)->required();

    HomogeneityArgs hom;
    auto* c_hom = app.add_subcommand("homogeneity", "CV curves of ensemble mean and variance");
    c_hom->add_option("--input", hom.input)->required();
    c_hom->add_flag("--random-order", hom.random_order, "Visit realizations in seeded random order");
    c_hom->add_option("--seed", hom.seed);
    c_hom->add_option("--out", hom.out)->required();

    ReportArgs rep;
    auto* c_rep = app.add_subcommand("report", "Empirical vs fitted periodogram cuts as CSV");
    c_rep->add_option("--fit", rep.fit)->required()->check(CLI::ExistingFile);
    c_rep->add_option("--periodogram", rep.periodogram)->required()->check(CLI::ExistingFile);
    c_rep->add_option("--cuts", rep.cuts);
    c_rep->add_option("--out", rep.out)->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp& e) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::CallForVersion& e) {
        std::cout << RFID_VERSION << "\n";
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        std::cerr << "rfid: " << e.what() << "\n\n" << app.help();
        return exit_usage;
    }

    if (threads == 0) {
        if (const char* env = std::getenv("RFID_THREADS")) {
            try {
                threads = static_cast<unsigned>(std::stoul(env));
            } catch (const std::exception&) {
                std::cerr << "rfid: ignoring invalid RFID_THREADS='" << env << "'\n";
            }
        }
    }
    set_thread_count(threads);

    Manifest manifest;
    manifest.args = args;
    try {
        if (c_sim->parsed()) {
            manifest.subcommand = "simulate";
            do_simulate(sim, manifest);
        } else if (c_mic->parsed()) {
            manifest.subcommand = "microstructure";
            do_microstructure(mic, manifest);
        } else if (c_prj->parsed()) {
            manifest.subcommand = "project";
            do_project(prj, manifest);
        } else if (c_pgm->parsed()) {
            manifest.subcommand = "periodogram";
            do_periodogram(pgm, manifest);
        } else if (c_fit->parsed()) {
            manifest.subcommand = "fit";
            do_fit(fit, manifest);
        } else if (c_hom->parsed()) {
            manifest.subcommand = "homogeneity";
            do_homogeneity(hom, manifest);
        } else if (c_rep->parsed()) {
            manifest.subcommand = "report";
            do_report(rep, manifest);
        }
    } catch (const std::exception& e) {
        std::cerr << "rfid: " << e.what() << "\n";
        return exit_computation;
    }
    return exit_ok;
}

int run(int argc, char** argv)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i)
        args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace rfid
