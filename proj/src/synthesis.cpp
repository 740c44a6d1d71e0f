#include "rfid/synthesis.hpp"

#include <cmath>
#include <numbers>

#include "rfid/error.hpp"
#include "rfid/fft.hpp"
#include "rfid/parallel.hpp"
#include "rfid/random.hpp"

namespace rfid {

namespace {

// Alias images summed on each side when folding the PSD onto the torus.
constexpr int kAliasImages = 64;

double signed_offset(std::size_t i, std::size_t n)
{
    return i <= n / 2 ? static_cast<double>(i) : static_cast<double>(i) - static_cast<double>(n);
}

std::vector<double> folded_axis_spectrum(const SeparableTerm& t, bool along_x, std::size_t p,
                                         double spacing)
{
    const double df = 1.0 / (static_cast<double>(p) * spacing);
    const double fs = 1.0 / spacing;
    const double l = along_x ? t.component.lx : t.component.ly;
    const double f0 = along_x ? t.component.fx0 : t.component.fy0;
    std::vector<double> s(p);
    for (std::size_t k = 0; k < p; ++k) {
        const double f = signed_offset(k, p) * df;
        double acc = 0.0;
        for (int a = -kAliasImages; a <= kAliasImages; ++a)
            acc += shifted_spectrum_1d(t.family, f + a * fs, f0, l);
        s[k] = acc;
    }
    return s;
}

}  // namespace

std::string to_string(SynthesisMethod method)
{
    return method == SynthesisMethod::spectral ? "spectral" : "circulant-embedding";
}

SynthesisMethod method_from_string(std::string_view name)
{
    if (name == "circulant-embedding" || name == "circulant")
        return SynthesisMethod::circulant_embedding;
    if (name == "spectral")
        return SynthesisMethod::spectral;
    throw Error("unknown synthesis method '" + std::string(name) + "'");
}

FieldSynthesizer::FieldSynthesizer(SynthesisPlan plan) : plan_(std::move(plan))
{
    plan_.spec.validate();
    plan_.model.validate();
    if (plan_.embedding_factor < 2 || plan_.embedding_factor > 8)
        throw Error("embedding factor must lie in [2, 8]");

    px_ = plan_.embedding_factor * plan_.spec.nx;
    py_ = plan_.embedding_factor * plan_.spec.ny;
    const double dx = plan_.spec.dx, dy = plan_.spec.dy;
    const double cells = static_cast<double>(px_) * static_cast<double>(py_);
    amplitude_.assign(px_ * py_, 0.0);

    if (plan_.method == SynthesisMethod::circulant_embedding) {
        std::vector<std::complex<double>> c(px_ * py_);
        for (std::size_t j = 0; j < py_; ++j) {
            const double hy = signed_offset(j, py_) * dy;
            for (std::size_t i = 0; i < px_; ++i)
                c[j * px_ + i] = cov_eval(plan_.model, signed_offset(i, px_) * dx, hy);
        }
        fft2d(c, px_, py_, FftDirection::forward);

        double negative = 0.0, total = 0.0;
        for (std::size_t q = 0; q < c.size(); ++q) {
            const double lambda = c[q].real();
            total += std::abs(lambda);
            if (lambda < 0.0)
                negative -= lambda;
            else
                amplitude_[q] = std::sqrt(lambda / cells);
        }
        clipped_fraction_ = total > 0.0 ? negative / total : 0.0;
        if (clipped_fraction_ > kMaxClippedFraction)
            throw Error("embedding not nonnegative; enlarge embedding factor (clipped mass fraction " +
                        std::to_string(clipped_fraction_) + ")");
    } else {
        const double dfx = 1.0 / (static_cast<double>(px_) * dx);
        const double dfy = 1.0 / (static_cast<double>(py_) * dy);
        std::vector<double> s(px_ * py_, 0.0);
        for (const auto& term : separable_terms(plan_.model)) {
            const double var = term.component.sigma * term.component.sigma;
            if (var == 0.0)
                continue;
            const auto sx = folded_axis_spectrum(term, true, px_, dx);
            const auto sy = folded_axis_spectrum(term, false, py_, dy);
            for (std::size_t j = 0; j < py_; ++j) {
                for (std::size_t i = 0; i < px_; ++i)
                    s[j * px_ + i] += var * sx[i] * sy[j];
            }
        }
        for (std::size_t q = 0; q < s.size(); ++q)
            amplitude_[q] = std::sqrt(s[q] * dfx * dfy);
    }
}

GridField FieldSynthesizer::realization(std::uint64_t index) const
{
    const auto& spec = plan_.spec;
    std::vector<std::complex<double>> buf(px_ * py_);

    if (plan_.method == SynthesisMethod::circulant_embedding) {
        const auto rng = CounterRng::substream(plan_.seed, StreamPurpose::field, index);
        for (std::size_t q = 0; q < buf.size(); ++q) {
            if (amplitude_[q] == 0.0)
                continue;
            buf[q] = amplitude_[q] * std::complex<double>(rng.normal(2 * q), rng.normal(2 * q + 1));
        }
        fft2d(buf, px_, py_, FftDirection::forward);
    } else {
        const auto rng = CounterRng::substream(plan_.seed, StreamPurpose::phases, index);
        const double two_pi = 2.0 * std::numbers::pi;
        for (std::size_t j = 0; j < py_; ++j) {
            const std::size_t jc = (py_ - j) % py_;
            for (std::size_t i = 0; i < px_; ++i) {
                const std::size_t ic = (px_ - i) % px_;
                const std::size_t q = j * px_ + i;
                const std::size_t qc = jc * px_ + ic;
                if (q > qc || amplitude_[q] == 0.0)
                    continue;
                const double phase = two_pi * rng.uniform(q);
                if (q == qc) {
                    buf[q] = std::sqrt(2.0) * amplitude_[q] * std::cos(phase);
                } else {
                    buf[q] = std::polar(amplitude_[q], phase);
                    buf[qc] = std::conj(buf[q]);
                }
            }
        }
        fft2d(buf, px_, py_, FftDirection::backward);
    }

    std::vector<double> values(spec.size());
    for (std::size_t j = 0; j < spec.ny; ++j) {
        for (std::size_t i = 0; i < spec.nx; ++i)
            values[spec.index(i, j)] = plan_.mean + buf[j * px_ + i].real();
    }
    return GridField(spec, std::move(values));
}

GridField simulate_field(const SynthesisPlan& plan)
{
    return FieldSynthesizer(plan).realization(0);
}

Ensemble simulate_ensemble(const SynthesisPlan& plan, std::size_t count)
{
    if (count < 1)
        throw Error("ensemble size must be at least 1");
    const FieldSynthesizer synth(plan);
    std::vector<GridField> fields(count);
    parallel_for(count, [&](std::size_t i) { fields[i] = synth.realization(i); });
    return Ensemble(std::move(fields));
}

}  // namespace rfid
