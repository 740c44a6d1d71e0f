#include "rfid/spectral.hpp"

#include <complex>
#include <fstream>
#include <map>
#include <sstream>

#include "rfid/error.hpp"
#include "rfid/fft.hpp"
#include "rfid/grid_io.hpp"
#include "rfid/parallel.hpp"

namespace rfid {

double Periodogram::at_freq(std::ptrdiff_t k, std::ptrdiff_t l) const
{
    const auto nx = static_cast<std::ptrdiff_t>(spec.nx);
    const auto ny = static_cast<std::ptrdiff_t>(spec.ny);
    auto wrap = [](std::ptrdiff_t v, std::ptrdiff_t n) { return ((v % n) + n) % n; };
    const auto ic = wrap(k + nx / 2, nx);
    const auto jc = wrap(l + ny / 2, ny);
    return values[spec.index(static_cast<std::size_t>(ic), static_cast<std::size_t>(jc))];
}

GridSpec Periodogram::frequency_spec() const
{
    GridSpec f;
    f.nx = spec.nx;
    f.ny = spec.ny;
    f.dx = df_x();
    f.dy = df_y();
    f.origin_x = fx(0);
    f.origin_y = fy(0);
    return f;
}

Periodogram modified_periodogram(const GridField& field, WindowKind window, bool demean)
{
    const auto& spec = field.spec();
    const WindowGrid w = window_grid(window, spec);
    const double mean = demean ? spatial_stats(field).mean : 0.0;

    const std::size_t nx = spec.nx, ny = spec.ny;
    std::vector<std::complex<double>> buf(spec.size());
    const auto z = field.values();
    for (std::size_t k = 0; k < buf.size(); ++k)
        buf[k] = (z[k] - mean) * w.weights[k];
    fft2d(buf, nx, ny, FftDirection::forward);

    const double norm = 1.0 / (static_cast<double>(nx) * static_cast<double>(ny) * w.energy);
    Periodogram p;
    p.spec = spec;
    p.window = window;
    p.demean = demean;
    p.n_averaged = 1;
    p.values.resize(spec.size());
    for (std::size_t l = 0; l < ny; ++l) {
        const std::size_t jc = (l + ny / 2) % ny;
        for (std::size_t k = 0; k < nx; ++k) {
            const std::size_t ic = (k + nx / 2) % nx;
            p.values[spec.index(ic, jc)] = std::norm(buf[l * nx + k]) * norm;
        }
    }
    return p;
}

Periodogram average_periodogram(const Ensemble& ens, WindowKind window, bool demean)
{
    const std::size_t count = ens.size();
    std::vector<Periodogram> parts(count);
    parallel_for(count, [&](std::size_t i) { parts[i] = modified_periodogram(ens[i], window, demean); });

    Periodogram avg = parts.front();
    for (std::size_t i = 1; i < count; ++i) {
        for (std::size_t k = 0; k < avg.values.size(); ++k)
            avg.values[k] += parts[i].values[k];
    }
    const double inv = 1.0 / static_cast<double>(count);
    for (double& v : avg.values)
        v *= inv;
    avg.n_averaged = count;
    return avg;
}

CovarianceGrid covariance_estimate(const GridField& field, std::size_t max_lag_x,
                                   std::size_t max_lag_y)
{
    const auto& spec = field.spec();
    if (max_lag_x >= spec.nx || max_lag_y >= spec.ny)
        throw Error("lag out of range: max lags must be smaller than the grid extents");

    CovarianceGrid c;
    c.max_lag_x = max_lag_x;
    c.max_lag_y = max_lag_y;
    c.dx = spec.dx;
    c.dy = spec.dy;
    c.values.assign((max_lag_x + 1) * (max_lag_y + 1), 0.0);
    const double norm = 1.0 / static_cast<double>(spec.size());
    for (std::size_t l = 0; l <= max_lag_y; ++l) {
        for (std::size_t k = 0; k <= max_lag_x; ++k) {
            double sum = 0.0;
            for (std::size_t m = 0; m + l < spec.ny; ++m) {
                for (std::size_t n = 0; n + k < spec.nx; ++n)
                    sum += field.at(n + k, m + l) * field.at(n, m);
            }
            c.values[l * (max_lag_x + 1) + k] = sum * norm;
        }
    }
    return c;
}

double bartlett_bias_weight(std::ptrdiff_t k, std::ptrdiff_t l, std::size_t n, std::size_t m)
{
    const auto N = static_cast<std::ptrdiff_t>(n);
    const auto M = static_cast<std::ptrdiff_t>(m);
    const auto ak = k < 0 ? -k : k;
    const auto al = l < 0 ? -l : l;
    if (N <= 0 || M <= 0 || ak > N || al > M)
        return 0.0;
    return (static_cast<double>(N - ak) / static_cast<double>(N)) *
           (static_cast<double>(M - al) / static_cast<double>(M));
}

CovarianceGrid bartlett_bias_weights(std::size_t n, std::size_t m)
{
    if (n < 1 || m < 1)
        throw Error("bartlett weights need N, M >= 1");
    CovarianceGrid w;
    w.max_lag_x = n;
    w.max_lag_y = m;
    w.values.resize((n + 1) * (m + 1));
    for (std::size_t l = 0; l <= m; ++l) {
        for (std::size_t k = 0; k <= n; ++k)
            w.values[l * (n + 1) + k] = bartlett_bias_weight(static_cast<std::ptrdiff_t>(k),
                                                             static_cast<std::ptrdiff_t>(l), n, m);
    }
    return w;
}

std::filesystem::path periodogram_meta_path(const std::filesystem::path& path)
{
    auto meta = path;
    meta += ".meta";
    return meta;
}

void save_periodogram(const Periodogram& p, const std::filesystem::path& path)
{
    save_grid(GridField(p.frequency_spec(), p.values), path);
    std::ofstream meta(periodogram_meta_path(path), std::ios::binary | std::ios::trunc);
    if (!meta)
        throw Error("cannot write periodogram metadata next to " + path.string());
    meta << "window=" << to_string(p.window) << "\n"
         << "n_averaged=" << p.n_averaged << "\n"
         << "demean=" << (p.demean ? "true" : "false") << "\n"
         << "dx=" << format_number(p.spec.dx) << "\n"
         << "dy=" << format_number(p.spec.dy) << "\n"
         << "origin_x=" << format_number(p.spec.origin_x) << "\n"
         << "origin_y=" << format_number(p.spec.origin_y) << "\n";
}

Periodogram load_periodogram(const std::filesystem::path& path)
{
    const GridField grid = load_grid(path);
    const auto meta_path = periodogram_meta_path(path);
    std::ifstream in(meta_path);
    if (!in)
        throw Error("missing periodogram metadata file " + meta_path.string());

    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(meta_path.string(), lineno, "expected key=value");
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    auto need = [&](const std::string& key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end())
            throw Error(meta_path.string() + ": missing key '" + key + "'");
        return it->second;
    };
    auto number = [&](const std::string& key) {
        double v;
        if (!parse_number(need(key), v))
            throw Error(meta_path.string() + ": bad number for '" + key + "'");
        return v;
    };

    Periodogram p;
    p.spec.nx = grid.spec().nx;
    p.spec.ny = grid.spec().ny;
    p.spec.dx = number("dx");
    p.spec.dy = number("dy");
    p.spec.origin_x = kv.count("origin_x") ? number("origin_x") : 0.0;
    p.spec.origin_y = kv.count("origin_y") ? number("origin_y") : 0.0;
    p.spec.validate();
    p.window = window_from_string(need("window"));
    p.n_averaged = static_cast<std::size_t>(number("n_averaged"));
    const auto& dm = need("demean");
    if (dm != "true" && dm != "false")
        throw Error(meta_path.string() + ": demean must be true or false");
    p.demean = dm == "true";
    p.values.assign(grid.values().begin(), grid.values().end());
    for (double v : p.values) {
        if (v < 0.0)
            throw Error(path.string() + ": periodogram values must be non-negative");
    }
    return p;
}

}  // namespace rfid
