#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "rfid/grid.hpp"

namespace rfid {

struct EnsembleMoments
{
    GridField mean_field;
    GridField var_field;
};

/// Pointwise mean and unbiased (K-1) variance over the first K members.
EnsembleMoments ensemble_moments(const Ensemble& ens, std::size_t k);

struct HomogeneityOptions
{
    /// Visit members in a seeded random order instead of ensemble order.
    bool random_subsample = false;
    std::uint64_t seed = 0;
};

struct HomogeneityReport
{
    std::vector<std::size_t> k_values;
    std::vector<std::optional<double>> cv_mean;
    std::vector<std::optional<double>> cv_var;
    GridField final_mean_field;
    GridField final_var_field;
    /// Fraction of K -> K+1 steps along which each curve decreased.
    double cv_mean_decreasing_fraction = 0.0;
    double cv_var_decreasing_fraction = 0.0;
};

/// Spatial CV of the ensemble mean and variance fields for K = 2..L.
HomogeneityReport homogeneity_curves(const Ensemble& ens, const HomogeneityOptions& options = {});

/// CSV with header `K,cv_mean,cv_var`; undefined entries print as n/a.
std::string homogeneity_csv(const HomogeneityReport& report);

}  // namespace rfid
