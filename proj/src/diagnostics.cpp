#include "rfid/diagnostics.hpp"

#include <numeric>

#include "rfid/error.hpp"
#include "rfid/parallel.hpp"
#include "rfid/random.hpp"

namespace rfid {

namespace {

EnsembleMoments moments_of(const Ensemble& ens, const std::vector<std::size_t>& order, std::size_t k)
{
    const auto& spec = ens.spec();
    const std::size_t n = spec.size();
    std::vector<double> mean(n, 0.0), var(n, 0.0);
    for (std::size_t m = 0; m < k; ++m) {
        const auto v = ens[order[m]].values();
        for (std::size_t q = 0; q < n; ++q)
            mean[q] += v[q];
    }
    const double inv_k = 1.0 / static_cast<double>(k);
    for (double& x : mean)
        x *= inv_k;
    for (std::size_t m = 0; m < k; ++m) {
        const auto v = ens[order[m]].values();
        for (std::size_t q = 0; q < n; ++q) {
            const double d = v[q] - mean[q];
            var[q] += d * d;
        }
    }
    const double inv_k1 = 1.0 / static_cast<double>(k - 1);
    for (double& x : var)
        x *= inv_k1;
    return {GridField(spec, std::move(mean)), GridField(spec, std::move(var))};
}

double decreasing_fraction(const std::vector<std::optional<double>>& curve)
{
    std::size_t steps = 0, down = 0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        if (!curve[i] || !curve[i - 1])
            continue;
        ++steps;
        if (*curve[i] < *curve[i - 1])
            ++down;
    }
    return steps ? static_cast<double>(down) / static_cast<double>(steps) : 0.0;
}

}  // namespace

EnsembleMoments ensemble_moments(const Ensemble& ens, std::size_t k)
{
    if (k < 2)
        throw Error("ensemble moments need K >= 2 (variance undefined)");
    if (k > ens.size())
        throw Error("K exceeds the ensemble size");
    std::vector<std::size_t> order(ens.size());
    std::iota(order.begin(), order.end(), 0);
    return moments_of(ens, order, k);
}

HomogeneityReport homogeneity_curves(const Ensemble& ens, const HomogeneityOptions& options)
{
    const std::size_t total = ens.size();
    if (total < 3)
        throw Error("homogeneity curves need at least 3 realizations");

    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), 0);
    if (options.random_subsample) {
        // Fisher-Yates on counter-addressed uniforms.
        const auto rng = CounterRng::substream(options.seed, StreamPurpose::subsample, 0);
        for (std::size_t i = total - 1; i > 0; --i) {
            const auto j = static_cast<std::size_t>(rng.uniform(i) * static_cast<double>(i + 1));
            std::swap(order[i], order[std::min(j, i)]);
        }
    }

    const std::size_t count = total - 1;
    HomogeneityReport report;
    report.k_values.resize(count);
    report.cv_mean.resize(count);
    report.cv_var.resize(count);
    std::vector<EnsembleMoments> last(1);
    parallel_for(count, [&](std::size_t n) {
        const std::size_t k = n + 2;
        auto m = moments_of(ens, order, k);
        report.k_values[n] = k;
        report.cv_mean[n] = spatial_stats(m.mean_field).cv;
        report.cv_var[n] = spatial_stats(m.var_field).cv;
        if (k == total)
            last[0] = std::move(m);
    });
    report.final_mean_field = last[0].mean_field;
    report.final_var_field = last[0].var_field;
    report.cv_mean_decreasing_fraction = decreasing_fraction(report.cv_mean);
    report.cv_var_decreasing_fraction = decreasing_fraction(report.cv_var);
    return report;
}

std::string homogeneity_csv(const HomogeneityReport& report)
{
    std::string out = "K,cv_mean,cv_var\n";
    for (std::size_t n = 0; n < report.k_values.size(); ++n) {
        out += std::to_string(report.k_values[n]) + "," + format_cv(report.cv_mean[n]) + "," +
               format_cv(report.cv_var[n]) + "\n";
    }
    return out;
}

}  // namespace rfid
