#pragma once

#include <cstdint>
#include <vector>

#include "levyx/model.hpp"
#include "levyx/pricer.hpp"

namespace levyx {

struct SimConfig {
    std::int64_t paths = 100000;
    int steps_per_year = 250;
    std::uint64_t seed = 1;
    double lambda_max = 0.0; // thinning bound; 0 = derive from domain lattice
    bool antithetic = false;
};

struct MCEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    double ci_lo = 0.0, ci_hi = 0.0;
    std::int64_t n_paths = 0;
    std::int64_t n_defaulted = 0;
    std::int64_t lambda_bound_breaches = 0;
    double thinning_acceptance = 0.0; // accepted / candidate jumps
};

// Euler scheme with jump thinning and canonical-construction default for
// Gaussian jump models; per-strike estimates share one simulated path set.
std::vector<MCEstimate> simulate_price_multi(const ModelSpec& model, PayoffKind kind,
                                             const std::vector<double>& strikes, double t,
                                             double x, double T, const SimConfig& cfg);

MCEstimate simulate_price(const ModelSpec& model, PayoffKind kind, double K, double t,
                          double x, double T, const SimConfig& cfg);

// Frozen-parameter scheme for NIG-type symbols: each step draws the exact
// NIG increment for the parameters frozen at the step's left endpoint.  The
// scheme is biased for state-dependent scale, with bias -> 0 as the step
// shrinks; step halving is the convergence diagnostic.
std::vector<MCEstimate> simulate_nig_frozen_multi(const ModelSpec& model, PayoffKind kind,
                                                  const std::vector<double>& strikes,
                                                  double t, double x, double T,
                                                  const SimConfig& cfg);

MCEstimate simulate_nig_frozen(const ModelSpec& model, PayoffKind kind, double K,
                               double t, double x, double T, const SimConfig& cfg);

} // namespace levyx
