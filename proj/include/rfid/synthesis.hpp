#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rfid/grid.hpp"
#include "rfid/models.hpp"

namespace rfid {

enum class SynthesisMethod { circulant_embedding, spectral };

std::string to_string(SynthesisMethod method);
SynthesisMethod method_from_string(std::string_view name);

struct SynthesisPlan
{
    PsdModel model;
    GridSpec spec;
    SynthesisMethod method = SynthesisMethod::circulant_embedding;
    double mean = 0.0;
    std::uint64_t seed = 0;
    /// Torus size as a multiple of the grid, 2..8.
    unsigned embedding_factor = 2;
};

/// Largest clipped negative-eigenvalue mass tolerated by circulant embedding.
inline constexpr double kMaxClippedFraction = 0.01;

/// Precomputed spectral amplitudes for one plan; draws any realization.
///
/// Circulant embedding: the covariance is laid on a torus embedding_factor
/// times the grid, its DFT gives the eigenvalues, negatives are clipped and
/// complex Gaussian amplitudes are transformed back.
///
/// Spectral: random-phase cosine sum on the same torus frequency lattice with
/// amplitudes sqrt(S * dfx * dfy), where S is the model PSD folded over
/// aliases of the grid sampling rate.
///
/// Realization i reads only the counter stream derived from (seed, i).
class FieldSynthesizer
{
  public:
    explicit FieldSynthesizer(SynthesisPlan plan);

    GridField realization(std::uint64_t index) const;

    /// Negative eigenvalue mass / total absolute mass (0 for the spectral method).
    double clipped_fraction() const { return clipped_fraction_; }
    const SynthesisPlan& plan() const { return plan_; }

  private:
    SynthesisPlan plan_;
    std::size_t px_ = 0;
    std::size_t py_ = 0;
    std::vector<double> amplitude_;
    double clipped_fraction_ = 0.0;
};

/// Realization 0 of the plan.
GridField simulate_field(const SynthesisPlan& plan);

/// Realizations 0..count-1, generated in parallel.
Ensemble simulate_ensemble(const SynthesisPlan& plan, std::size_t count);

}  // namespace rfid
