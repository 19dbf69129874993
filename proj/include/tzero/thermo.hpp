// thermo.hpp - imaginary-time correspondence Z(beta) = Phi(-i beta), the
// canonical distribution it normalizes, and the entropy limit calculators.

#pragma once

#include "tzero/error.hpp"
#include "tzero/spectrum.hpp"
#include "tzero/summation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace tzero {

// Z(beta) = sum_j w_j exp(-beta E_j). Negative beta is accepted (Z is entire).
inline double partition_function(const Spectrum& s, double beta) {
    if (!std::isfinite(beta)) throw ValidationError("beta must be finite");
    CompensatedSum acc;
    for (std::size_t j = 0; j < s.size(); ++j) {
        const auto& l = s.levels()[j];
        if (l.weight == 0.0) continue;
        const double term = l.weight * std::exp(-beta * l.energy);
        if (!std::isfinite(term)) {
            throw ComputeError("partition function overflow at level index " + std::to_string(j) +
                               "; shift the energies (Z scales by exp(-beta * shift))");
        }
        acc += term;
    }
    return acc.value();
}

struct CanonicalState {
    double beta = 0.0;
    double z_value = 1.0;
    double log_z = 0.0;
    std::vector<double> weights; // aligned with Spectrum::levels()
    double mean_energy = 0.0;    // <E>_c
    bool negative_beta = false;
};

// Weights are formed from log w_j - beta E_j shifted by its maximum, so they
// stay finite even when Z itself does not fit in a double.
inline CanonicalState canonical_distribution(const Spectrum& s, double beta) {
    if (!std::isfinite(beta)) throw ValidationError("beta must be finite");
    const auto levels = s.levels();
    std::vector<double> log_terms(levels.size(), -std::numeric_limits<double>::infinity());
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < levels.size(); ++j) {
        if (levels[j].weight == 0.0) continue;
        log_terms[j] = std::log(levels[j].weight) - beta * levels[j].energy;
        peak = std::max(peak, log_terms[j]);
    }

    CanonicalState st;
    st.beta = beta;
    st.negative_beta = beta < 0.0;
    st.weights.assign(levels.size(), 0.0);
    CompensatedSum total;
    for (std::size_t j = 0; j < levels.size(); ++j) {
        if (levels[j].weight == 0.0) continue;
        st.weights[j] = std::exp(log_terms[j] - peak);
        total += st.weights[j];
    }
    const double sum = total.value();
    CompensatedSum mean;
    for (std::size_t j = 0; j < levels.size(); ++j) {
        st.weights[j] /= sum;
        mean += st.weights[j] * levels[j].energy;
    }
    st.log_z = peak + std::log(sum);
    st.z_value = std::exp(st.log_z);
    if (!std::isfinite(st.z_value) || !(st.z_value > 0.0)) {
        throw ComputeError("partition function out of floating range (log Z = " +
                           std::to_string(st.log_z) + "); shift the energies");
    }
    st.mean_energy = mean.value();
    return st;
}

struct EntropyReport {
    double entropy = 0.0;         // -sum p ln p, nats
    double log_z = 0.0;           // ln Z
    double beta_mean_energy = 0.0; // beta <E>_c
    double mean_log_prior = 0.0;   // <ln w>_c
    // ln Z + beta <E>_c - <ln w>_c
    double decomposition() const noexcept { return log_z + beta_mean_energy - mean_log_prior; }
};

// Counting-measure entropy of the canonical weights, with the three-term
// decomposition checked against the direct sum.
inline EntropyReport canonical_entropy(const Spectrum& s, double beta) {
    const auto st = canonical_distribution(s, beta);
    const auto levels = s.levels();
    CompensatedSum direct;
    CompensatedSum log_prior;
    for (std::size_t j = 0; j < levels.size(); ++j) {
        const double p = st.weights[j];
        if (p == 0.0) continue;
        direct += -p * std::log(p);
        log_prior += p * std::log(levels[j].weight);
    }
    EntropyReport r;
    r.entropy = direct.value();
    r.log_z = st.log_z;
    r.beta_mean_energy = beta * st.mean_energy;
    r.mean_log_prior = log_prior.value();
    const double scale = 1.0 + std::abs(r.log_z) + std::abs(r.beta_mean_energy) + std::abs(r.mean_log_prior);
    if (std::abs(r.decomposition() - r.entropy) > 1e-10 * scale) {
        throw ComputeError("entropy decomposition mismatch");
    }
    return r;
}

// CODATA 2018.
namespace si {
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double c = 299792458.0;              // m / s
inline constexpr double planck_length = 1.616255e-35; // m
} // namespace si

// S / k_B < E L / (hbar c)
inline double bekenstein_bound(double energy, double length) {
    if (!(energy > 0.0) || !(length > 0.0)) {
        throw ValidationError("energy and length must be positive");
    }
    return energy * length / (si::hbar * si::c);
}

// S / k_B < L^2 / (2 l_p^2)
inline double holographic_bound(double length) {
    if (!(length > 0.0)) throw ValidationError("length must be positive");
    const double ratio = length / si::planck_length;
    return ratio * ratio / 2.0;
}

// |dS/dt| / k_B < E / hbar, in 1/s
inline double entropy_rate_limit(double energy) {
    if (!(energy > 0.0)) throw ValidationError("energy must be positive");
    return energy / si::hbar;
}

} // namespace tzero
