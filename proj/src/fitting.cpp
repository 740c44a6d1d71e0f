#include "rfid/fitting.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rfid/error.hpp"
#include "rfid/parallel.hpp"
#include "rfid/random.hpp"

namespace rfid {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

enum class ParamRole { sigma, length_x, length_y, shift_x, shift_y };

ParamRole role_of(std::size_t j)
{
    switch (j % 5) {
    case 0: return ParamRole::sigma;
    case 1: return ParamRole::length_x;
    case 2: return ParamRole::length_y;
    case 3: return ParamRole::shift_x;
    default: return ParamRole::shift_y;
    }
}

double total_mass(const Periodogram& p)
{
    double sum = 0.0;
    for (double v : p.values)
        sum += v;
    return sum * p.df_x() * p.df_y();
}

// Typical magnitude of each parameter; used for finite-difference steps and
// relative-step tests when the parameter itself is zero.
std::vector<double> typical_scales(const Periodogram& p, ModelFamily family)
{
    const double sigma = std::max(std::sqrt(total_mass(p)), std::numeric_limits<double>::min());
    std::vector<double> s;
    for (std::size_t j = 0; j < parameter_count(family); ++j) {
        switch (role_of(j)) {
        case ParamRole::sigma: s.push_back(sigma); break;
        case ParamRole::length_x: s.push_back(p.spec.dx); break;
        case ParamRole::length_y: s.push_back(p.spec.dy); break;
        case ParamRole::shift_x: s.push_back(p.df_x()); break;
        case ParamRole::shift_y: s.push_back(p.df_y()); break;
        }
    }
    return s;
}

void project(std::vector<double>& x, const std::vector<ParameterBounds>& b)
{
    for (std::size_t j = 0; j < x.size(); ++j)
        x[j] = std::clamp(x[j], b[j].lower, b[j].upper);
}

struct StartOutcome
{
    std::vector<double> x;
    double cost = 0.0;
    double epsilon = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<double> history;
};

class Objective
{
  public:
    Objective(const Periodogram& empirical, ModelFamily family, FitTarget target)
        : family_(family), model_(empirical, target), mask_(fit_mask(empirical))
    {
        for (std::size_t q = 0; q < mask_.size(); ++q) {
            if (mask_[q]) {
                bins_.push_back(q);
                data_.push_back(empirical.values[q]);
            }
        }
        peak_ = *std::max_element(data_.begin(), data_.end());
    }

    std::size_t size() const { return bins_.size(); }

    void residuals(const std::vector<double>& x, Eigen::VectorXd& r) const
    {
        thread_local std::vector<double> theory;
        model_.evaluate(PsdModel::from_parameters(family_, x), theory);
        r.resize(static_cast<Eigen::Index>(bins_.size()));
        for (std::size_t n = 0; n < bins_.size(); ++n)
            r[static_cast<Eigen::Index>(n)] = theory[bins_[n]] - data_[n];
    }

    double epsilon_of(double cost) const
    {
        return std::sqrt(cost / static_cast<double>(bins_.size())) / peak_;
    }

  private:
    ModelFamily family_;
    TheoreticalPeriodogram model_;
    std::vector<char> mask_;
    std::vector<std::size_t> bins_;
    std::vector<double> data_;
    double peak_ = 0.0;
};

StartOutcome levenberg_marquardt(const Objective& obj, std::vector<double> x,
                                 const std::vector<ParameterBounds>& bounds,
                                 const std::vector<double>& typical, const FitOptions& opt)
{
    const auto n = static_cast<Eigen::Index>(x.size());
    project(x, bounds);

    StartOutcome out;
    Eigen::VectorXd r;
    obj.residuals(x, r);
    double cost = r.squaredNorm();
    out.history.push_back(cost);

    double lambda = opt.damping_init;
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(obj.size()), n);
    Eigen::VectorXd r_probe, r_new;
    std::vector<double> probe, x_new;

    for (std::size_t iter = 1; iter <= opt.max_iterations; ++iter) {
        out.iterations = iter;

        // Forward differences, relative step 1e-6; backward at an upper bound.
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            double h = 1e-6 * (x[ju] != 0.0 ? std::abs(x[ju]) : typical[ju]);
            if (x[ju] + h > bounds[ju].upper)
                h = -h;
            probe = x;
            probe[ju] += h;
            obj.residuals(probe, r_probe);
            jac.col(j) = (r_probe - r) / h;
        }
        const Eigen::MatrixXd a = jac.transpose() * jac;
        const Eigen::VectorXd g = jac.transpose() * r;

        Eigen::VectorXd diag = a.diagonal();
        const double dmax = std::max(diag.maxCoeff(), std::numeric_limits<double>::min());
        for (Eigen::Index j = 0; j < n; ++j)
            diag[j] = std::max(diag[j], 1e-12 * dmax);

        bool accepted = false;
        double cost_new = cost;
        while (lambda < 1e16) {
            Eigen::MatrixXd lhs = a;
            lhs.diagonal() += lambda * diag;
            const Eigen::VectorXd step = lhs.ldlt().solve(-g);
            x_new = x;
            for (Eigen::Index j = 0; j < n; ++j)
                x_new[static_cast<std::size_t>(j)] += step[j];
            project(x_new, bounds);
            if (x_new != x && step.allFinite()) {
                obj.residuals(x_new, r_new);
                cost_new = r_new.squaredNorm();
                if (std::isfinite(cost_new) && cost_new < cost) {
                    accepted = true;
                    lambda = std::max(lambda / 10.0, 1e-15);
                    break;
                }
            }
            lambda *= 10.0;
        }
        if (!accepted) {
            // No downhill step at any damping: a (bounded) local minimum.
            out.converged = true;
            break;
        }

        double rel_step = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j)
            rel_step = std::max(rel_step, std::abs(x_new[j] - x[j]) / (std::abs(x[j]) + typical[j]));
        const double rel_decrease = (cost - cost_new) / cost;

        x.swap(x_new);
        r.swap(r_new);
        cost = cost_new;
        out.history.push_back(cost);

        if (rel_step <= opt.parameter_tolerance || rel_decrease <= opt.residual_tolerance ||
            cost == 0.0) {
            out.converged = true;
            break;
        }
    }

    out.x = std::move(x);
    out.cost = cost;
    out.epsilon = obj.epsilon_of(cost);
    return out;
}

std::vector<double> perturbed_start(const std::vector<double>& base,
                                    const std::vector<ParameterBounds>& bounds,
                                    const std::vector<double>& typical, std::uint64_t seed,
                                    std::size_t start)
{
    const auto rng = CounterRng::substream(seed, StreamPurpose::multistart, start);
    const double span = std::log(3.0);
    std::vector<double> x = base;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double u = rng.uniform(j);
        const bool shift = role_of(j) == ParamRole::shift_x || role_of(j) == ParamRole::shift_y;
        if (x[j] > 0.0)
            x[j] *= std::exp(span * (2.0 * u - 1.0));
        else if (shift)
            x[j] = 3.0 * typical[j] * u;
    }
    project(x, bounds);
    return x;
}

// Half width at half maximum walking outward (+k) from the peak.
double half_width(const Periodogram& p, const std::vector<double>& v, std::size_t ic, std::size_t jc,
                  bool along_x)
{
    const double peak = v[p.spec.index(ic, jc)];
    const std::size_t n = along_x ? p.spec.nx : p.spec.ny;
    const std::size_t start = along_x ? ic : jc;
    const double df = along_x ? p.df_x() : p.df_y();
    double prev = peak;
    for (std::size_t s = start + 1; s < n; ++s) {
        const double cur = along_x ? v[p.spec.index(s, jc)] : v[p.spec.index(ic, s)];
        if (cur <= 0.5 * peak) {
            const double frac = prev > cur ? (prev - 0.5 * peak) / (prev - cur) : 0.0;
            return (static_cast<double>(s - start - 1) + frac) * df;
        }
        prev = cur;
    }
    return static_cast<double>(n - 1 - start) * df;
}

double length_from_half_width(ModelFamily family, double hw)
{
    switch (family) {
    case ModelFamily::gaussian: return std::sqrt(std::log(2.0)) / (std::numbers::pi * hw);
    case ModelFamily::triangle: return 1.3916 / (std::numbers::pi * hw);
    default: return 1.0 / (two_pi * hw);
    }
}

}  // namespace

std::string to_string(FitTarget target)
{
    return target == FitTarget::psd ? "psd" : "expected-periodogram";
}

FitTarget target_from_string(std::string_view name)
{
    if (name == "psd")
        return FitTarget::psd;
    if (name == "expected-periodogram" || name == "expected")
        return FitTarget::expected_periodogram;
    throw Error("unknown fit target '" + std::string(name) + "'");
}

void FitOptions::validate() const
{
    if (!(damping_init > 0.0))
        throw Error("damping_init must be positive");
    if (!(parameter_tolerance > 0.0) || !(residual_tolerance > 0.0))
        throw Error("fit tolerances must be positive");
    if (n_multistarts < 1)
        throw Error("n_multistarts must be at least 1");
    for (const auto& b : bounds) {
        if (!(b.lower <= b.upper))
            throw Error("parameter bounds must satisfy lower <= upper");
    }
}

// ---------------------------------------------------------------------------
// Theoretical periodogram

struct TheoreticalPeriodogram::AxisData
{
    std::size_t n = 0;
    double spacing = 1.0;
    std::vector<double> freq;                 // centered bin -> frequency
    std::vector<std::size_t> dft_index;       // centered bin -> DFT index
    std::vector<double> cos_table;            // cos(2 pi m / n)
    std::vector<double> sin_table;
    std::vector<double> w;                    // window factor
    double energy = 0.0;                      // sum w^2
    std::vector<double> autocorr;             // sum_i w(i) w(i+lag), lag >= 0
    std::vector<std::complex<double>> w_dft;  // sum_i w(i) e^{-2 pi i k i / n}
};

TheoreticalPeriodogram::TheoreticalPeriodogram(const Periodogram& layout, FitTarget target)
    : spec_(layout.spec), target_(target), demean_(layout.demean)
{
    spec_.validate();
    auto build = [&](bool along_x) {
        auto ax = std::make_shared<AxisData>();
        ax->n = along_x ? spec_.nx : spec_.ny;
        ax->spacing = along_x ? spec_.dx : spec_.dy;
        const std::size_t n = ax->n;
        ax->freq.resize(n);
        ax->dft_index.resize(n);
        for (std::size_t c = 0; c < n; ++c) {
            const auto k = static_cast<std::ptrdiff_t>(c) - static_cast<std::ptrdiff_t>(n / 2);
            ax->freq[c] = static_cast<double>(k) / (static_cast<double>(n) * ax->spacing);
            ax->dft_index[c] = static_cast<std::size_t>((k + static_cast<std::ptrdiff_t>(n)) %
                                                        static_cast<std::ptrdiff_t>(n));
        }
        if (target_ == FitTarget::expected_periodogram) {
            ax->cos_table.resize(n);
            ax->sin_table.resize(n);
            for (std::size_t m = 0; m < n; ++m) {
                ax->cos_table[m] = std::cos(two_pi * static_cast<double>(m) / static_cast<double>(n));
                ax->sin_table[m] = std::sin(two_pi * static_cast<double>(m) / static_cast<double>(n));
            }
            const double half = 0.5 * static_cast<double>(n - 1);
            ax->w.resize(n);
            for (std::size_t i = 0; i < n; ++i)
                ax->w[i] = window_factor(layout.window, static_cast<double>(i) - half, half);
            ax->autocorr.assign(n, 0.0);
            for (std::size_t lag = 0; lag < n; ++lag) {
                for (std::size_t i = 0; i + lag < n; ++i)
                    ax->autocorr[lag] += ax->w[i] * ax->w[i + lag];
            }
            ax->energy = ax->autocorr[0];
            ax->w_dft.assign(n, {0.0, 0.0});
            for (std::size_t k = 0; k < n; ++k) {
                for (std::size_t i = 0; i < n; ++i) {
                    const std::size_t m = (k * i) % n;
                    ax->w_dft[k] += ax->w[i] * std::complex<double>(ax->cos_table[m], -ax->sin_table[m]);
                }
            }
        }
        return ax;
    };
    x_ = build(true);
    y_ = build(false);
}

const TheoreticalPeriodogram::AxisData& TheoreticalPeriodogram::axis(bool along_x) const
{
    return along_x ? *x_ : *y_;
}

void TheoreticalPeriodogram::axis_factors(const AxisData& ax, ModelFamily family, double l,
                                          double f0, std::vector<double>& t1,
                                          std::vector<std::complex<double>>& q, double& mbar) const
{
    const std::size_t n = ax.n;
    std::vector<double> r(n);
    for (std::size_t lag = 0; lag < n; ++lag) {
        const double h = static_cast<double>(lag) * ax.spacing;
        r[lag] = correlation_1d(family, h, l) * std::cos(two_pi * f0 * h);
    }

    t1.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = r[0] * ax.autocorr[0];
        for (std::size_t lag = 1; lag < n; ++lag)
            acc += 2.0 * r[lag] * ax.autocorr[lag] * ax.cos_table[(k * lag) % n];
        t1[k] = acc;
    }

    if (!demean_) {
        q.clear();
        mbar = 0.0;
        return;
    }
    // Mean removal: b(i) = sum_j r(|i - j|).
    std::vector<double> b(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            b[i] += r[i > j ? i - j : j - i];
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    mbar = 0.0;
    for (double v : b)
        mbar += v;
    mbar *= inv_n * inv_n;
    q.assign(n, {0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> pk{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t m = (k * i) % n;
            pk += ax.w[i] * b[i] * std::complex<double>(ax.cos_table[m], -ax.sin_table[m]);
        }
        q[k] = pk * inv_n * std::conj(ax.w_dft[k]);
    }
}

std::vector<double> TheoreticalPeriodogram::evaluate(const PsdModel& model) const
{
    std::vector<double> out;
    evaluate(model, out);
    return out;
}

void TheoreticalPeriodogram::evaluate(const PsdModel& model, std::vector<double>& out) const
{
    const auto& ax = axis(true);
    const auto& ay = axis(false);
    out.assign(spec_.size(), 0.0);

    if (target_ == FitTarget::psd) {
        std::vector<double> sx(ax.n), sy(ay.n);
        for (const auto& term : separable_terms(model)) {
            const auto& c = term.component;
            const double var = c.sigma * c.sigma;
            if (var == 0.0)
                continue;
            for (std::size_t i = 0; i < ax.n; ++i)
                sx[i] = shifted_spectrum_1d(term.family, ax.freq[i], c.fx0, c.lx);
            for (std::size_t j = 0; j < ay.n; ++j)
                sy[j] = var * shifted_spectrum_1d(term.family, ay.freq[j], c.fy0, c.ly);
            for (std::size_t j = 0; j < ay.n; ++j) {
                for (std::size_t i = 0; i < ax.n; ++i)
                    out[j * ax.n + i] += sx[i] * sy[j];
            }
        }
        return;
    }

    const double norm = spec_.dx * spec_.dy / (ax.energy * ay.energy);
    std::vector<double> t1x, t1y;
    std::vector<std::complex<double>> qx, qy;
    double mx = 0.0, my = 0.0;
    for (const auto& term : separable_terms(model)) {
        const auto& c = term.component;
        const double var = c.sigma * c.sigma;
        if (var == 0.0)
            continue;
        axis_factors(ax, term.family, c.lx, c.fx0, t1x, qx, mx);
        axis_factors(ay, term.family, c.ly, c.fy0, t1y, qy, my);
        const double scale = var * norm;
        for (std::size_t jc = 0; jc < ay.n; ++jc) {
            const std::size_t l = ay.dft_index[jc];
            for (std::size_t ic = 0; ic < ax.n; ++ic) {
                const std::size_t k = ax.dft_index[ic];
                double v = t1x[k] * t1y[l];
                if (demean_) {
                    v -= 2.0 * (qx[k] * qy[l]).real();
                    v += mx * my * std::norm(ax.w_dft[k]) * std::norm(ay.w_dft[l]);
                }
                out[jc * ax.n + ic] += scale * v;
            }
        }
    }
}

// ---------------------------------------------------------------------------

std::vector<char> fit_mask(const Periodogram& p)
{
    std::vector<char> mask(p.values.size(), 1);
    if (p.demean)
        mask[p.spec.index(p.spec.nx / 2, p.spec.ny / 2)] = 0;
    return mask;
}

double residual_epsilon(const Periodogram& empirical, const PsdModel& model, FitTarget target)
{
    const auto mask = fit_mask(empirical);
    double peak = 0.0;
    for (std::size_t q = 0; q < mask.size(); ++q) {
        if (mask[q])
            peak = std::max(peak, empirical.values[q]);
    }
    if (!(peak > 0.0))
        throw Error("degenerate periodogram");
    const auto theory = TheoreticalPeriodogram(empirical, target).evaluate(model);
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t q = 0; q < mask.size(); ++q) {
        if (!mask[q])
            continue;
        const double d = empirical.values[q] - theory[q];
        sum += d * d;
        ++count;
    }
    return std::sqrt(sum / static_cast<double>(count)) / peak;
}

std::vector<ParameterBounds> default_bounds(const Periodogram& empirical, ModelFamily family)
{
    const auto& s = empirical.spec;
    const double sigma_max = 10.0 * std::sqrt(std::max(total_mass(empirical), 0.0));
    std::vector<ParameterBounds> b;
    for (std::size_t j = 0; j < parameter_count(family); ++j) {
        switch (role_of(j)) {
        case ParamRole::sigma: b.push_back({0.0, sigma_max}); break;
        case ParamRole::length_x: b.push_back({0.5 * s.dx, 10.0 * s.extent_x()}); break;
        case ParamRole::length_y: b.push_back({0.5 * s.dy, 10.0 * s.extent_y()}); break;
        case ParamRole::shift_x: b.push_back({0.0, 0.5 / s.dx}); break;
        case ParamRole::shift_y: b.push_back({0.0, 0.5 / s.dy}); break;
        }
    }
    return b;
}

// Starting point:
//  - variance from the discrete integral of the periodogram (split evenly
//    between the two parts of the mixed model);
//  - shifts from the peak location in the quadrant fx, fy >= 0;
//  - lengths from the half width at half maximum walking outward from the
//    peak along each axis, converted with the family's PSD shape.
// A flat periodogram falls back to lengths of a tenth of the domain and zero
// shifts. When the input was demeaned the zero bin is replaced by the mean of
// its four neighbours before the peak search.
PsdModel initial_guess(const Periodogram& empirical, ModelFamily family)
{
    const auto& s = empirical.spec;
    const double mass = total_mass(empirical);
    if (!(mass > 0.0))
        throw Error("initial guess needs a periodogram with positive mass");

    std::vector<double> v = empirical.values;
    const std::size_t i0 = s.nx / 2, j0 = s.ny / 2;
    if (empirical.demean) {
        v[s.index(i0, j0)] = 0.25 * (empirical.at_freq(1, 0) + empirical.at_freq(-1, 0) +
                                     empirical.at_freq(0, 1) + empirical.at_freq(0, -1));
    }

    const auto [vmin, vmax] = std::minmax_element(v.begin(), v.end());
    const bool flat = *vmax - *vmin <= 1e-12 * std::abs(*vmax);

    const auto bounds = default_bounds(empirical, family);
    auto component = [&](ModelFamily fam, double variance) {
        ModelComponent c;
        c.sigma = std::sqrt(variance);
        if (flat) {
            c.lx = 0.1 * s.extent_x();
            c.ly = 0.1 * s.extent_y();
            return c;
        }
        std::size_t best_i = i0, best_j = j0;
        for (std::size_t j = j0; j < s.ny; ++j) {
            for (std::size_t i = i0; i < s.nx; ++i) {
                if (v[s.index(i, j)] > v[s.index(best_i, best_j)]) {
                    best_i = i;
                    best_j = j;
                }
            }
        }
        c.fx0 = empirical.fx(best_i);
        c.fy0 = empirical.fy(best_j);
        const double hx = std::max(half_width(empirical, v, best_i, best_j, true), 0.5 * empirical.df_x());
        const double hy = std::max(half_width(empirical, v, best_i, best_j, false), 0.5 * empirical.df_y());
        c.lx = length_from_half_width(fam, hx);
        c.ly = length_from_half_width(fam, hy);
        return c;
    };

    std::vector<double> p;
    if (family == ModelFamily::mixed) {
        const auto g = component(ModelFamily::gaussian, 0.5 * mass);
        const auto e = component(ModelFamily::exponential, 0.5 * mass);
        p = PsdModel::mixed(g, e).parameters();
    } else {
        p = PsdModel::single(family, component(family, mass)).parameters();
    }
    project(p, bounds);
    return PsdModel::from_parameters(family, p);
}

FitResult fit_psd(const Periodogram& empirical, ModelFamily family, const FitOptions& options)
{
    options.validate();
    const auto mask = fit_mask(empirical);
    const auto bounds = options.bounds.empty() ? default_bounds(empirical, family) : options.bounds;
    if (bounds.size() != parameter_count(family))
        throw Error("bounds must list one (lower, upper) pair per parameter");

    const Objective objective(empirical, family, options.target);
    if (!(objective.epsilon_of(1.0) < std::numeric_limits<double>::infinity()))
        throw Error("degenerate periodogram");

    const auto typical = typical_scales(empirical, family);
    const auto base = initial_guess(empirical, family).parameters();

    std::vector<StartOutcome> outcomes(options.n_multistarts);
    parallel_for(options.n_multistarts, [&](std::size_t s) {
        auto x0 = s == 0 ? base : perturbed_start(base, bounds, typical, options.seed, s);
        outcomes[s] = levenberg_marquardt(objective, std::move(x0), bounds, typical, options);
    });

    std::size_t best = 0;
    for (std::size_t s = 1; s < outcomes.size(); ++s) {
        if (outcomes[s].epsilon < outcomes[best].epsilon)
            best = s;
    }

    const auto& win = outcomes[best];
    FitResult result;
    result.model = PsdModel::from_parameters(family, win.x);
    result.epsilon = win.epsilon;
    result.iterations = win.iterations;
    result.converged = win.converged;
    result.start_index = best;
    result.cost = win.cost;
    result.cost_history = win.history;
    result.zero_bin_included = !empirical.demean;
    result.target = options.target;
    return result;
}

FitResult select_model(const Periodogram& empirical, const std::vector<ModelFamily>& families,
                       const FitOptions& options)
{
    if (families.empty())
        throw Error("select_model needs at least one family");

    std::vector<FitResult> fits;
    std::vector<std::size_t> order;
    std::string failures;
    for (std::size_t n = 0; n < families.size(); ++n) {
        try {
            fits.push_back(fit_psd(empirical, families[n], options));
            order.push_back(n);
        } catch (const Error& e) {
            failures += to_string(families[n]) + ": " + e.what() + "; ";
        }
    }
    if (fits.empty())
        throw Error("every family failed to fit: " + failures);

    std::size_t best = 0;
    for (std::size_t n = 1; n < fits.size(); ++n) {
        const double d = fits[n].epsilon - fits[best].epsilon;
        if (d < -kEpsilonTieTolerance) {
            best = n;
        } else if (std::abs(d) <= kEpsilonTieTolerance &&
                   fits[n].model.parameter_count() < fits[best].model.parameter_count()) {
            best = n;
        }
    }
    return fits[best];
}

nlohmann::json fit_report_json(const FitResult& result, const FitOptions& options)
{
    nlohmann::json j;
    j["family"] = to_string(result.model.family);
    j["parameters"] = model_to_json(result.model);
    j["parameters"].erase("family");
    j["epsilon"] = result.epsilon;
    j["iterations"] = result.iterations;
    j["converged"] = result.converged;
    j["start_index"] = result.start_index;
    j["cost"] = result.cost;
    j["metadata"] = {{"zero_bin_included", result.zero_bin_included},
                     {"epsilon_grid", "full centered grid"},
                     {"target", to_string(result.target)}};
    nlohmann::json o;
    o["max_iterations"] = options.max_iterations;
    o["damping_init"] = options.damping_init;
    o["parameter_tolerance"] = options.parameter_tolerance;
    o["residual_tolerance"] = options.residual_tolerance;
    o["n_multistarts"] = options.n_multistarts;
    o["seed"] = options.seed;
    o["target"] = to_string(options.target);
    if (!options.bounds.empty()) {
        o["bounds"] = nlohmann::json::array();
        for (const auto& b : options.bounds)
            o["bounds"].push_back({b.lower, b.upper});
    }
    j["options"] = o;
    return j;
}

FitResult fit_result_from_json(const nlohmann::json& j)
{
    try {
        FitResult r;
        nlohmann::json params = j.at("parameters");
        params["family"] = j.at("family");
        r.model = model_from_json(params);
        r.epsilon = j.at("epsilon").get<double>();
        r.iterations = j.at("iterations").get<std::size_t>();
        r.converged = j.at("converged").get<bool>();
        r.start_index = j.at("start_index").get<std::size_t>();
        r.cost = j.value("cost", 0.0);
        if (j.contains("metadata")) {
            const auto& m = j["metadata"];
            r.zero_bin_included = m.value("zero_bin_included", true);
            r.target = target_from_string(m.value("target", std::string("psd")));
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed fit report: ") + e.what());
    }
}

}  // namespace rfid
