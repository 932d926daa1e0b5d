#pragma once

// Instance families: variations of a base instance that differ only in the
// objective, each drawn by resampling the positive and negative cost entries
// from normal distributions and clipping at zero so signs are preserved.

#include "mirlab/cutting_loop.hpp"
#include "mirlab/model.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace mirlab {

struct PoolMoments {
    double mean = 0.0;
    double stddev = 0.0;
};

struct PerturbationConfig {
    std::uint64_t seed = 0;
    Index count = 1;
    std::optional<PoolMoments> positive;  // empirical moments of the base when empty
    std::optional<PoolMoments> negative;

    /// Throws ConfigError.
    void validate() const;
};

/// Mean and population std of the entries of `cost` with the given sign (+1 or -1).
PoolMoments empirical_moments(const Vector& cost, int sign);

/// Random stream of one draw; independent of how draws are scheduled.
std::mt19937_64 draw_stream(std::uint64_t seed, std::uint64_t draw);

/// Perturbed copy of `cost`. Nonzero entries are visited in index order, each
/// consuming one normal sample from `rng`.
Vector perturb_objective(const Vector& cost, const PoolMoments& positive, const PoolMoments& negative,
                         std::mt19937_64& rng);

/// Draw number `draw` of the stream seeded by `config.seed`.
Vector perturb_objective(const MipInstance& base, const PerturbationConfig& config, std::uint64_t draw = 0);

struct Variation {
    std::uint64_t draw = 0;
    Vector cost;                          // stacked [f; g]
    Vector lp_optimum;                    // stacked [x; v]
    double lp_objective = 0.0;
    std::vector<long long> fingerprint;   // lp_optimum on a 1e-7 grid
};

struct InstanceFamily {
    MipInstance base;
    PerturbationConfig config;
    std::vector<Variation> variations;
    Index draws = 0;                      // draws consumed, kept or not

    /// The base instance with the objective of variation `k`.
    MipInstance instance(Index k) const;
};

inline constexpr double kFingerprintGrid = 1e-7;
inline constexpr Index kDrawCapFactor = 100;

std::vector<long long> lp_fingerprint(const Vector& point);

/// Draws until `config.count` variations are kept. With `require_distinct`, a
/// draw is kept only when its LP optimum fingerprint is new. Throws
/// ExhaustedDraws after 100 x count draws. `workers` threads solve LPs; the
/// result does not depend on it.
InstanceFamily generate_family(const MipInstance& base, const PerturbationConfig& config, bool require_distinct = true,
                               int workers = 1);

struct GapPartition {
    std::vector<Index> kept;              // final gap >= min_gap
    std::vector<Index> discarded;         // below min_gap, or degenerate (z_I = z_LP)
    std::vector<LoopResult> runs;         // one per variation, in family order
};

GapPartition filter_by_gap(const InstanceFamily& family, const LoopConfig& config, double min_gap = 5.0,
                           int workers = 1);

/// Keep/discard decision for one finished run.
bool passes_gap_filter(const LoopResult& run, double min_gap);

/// Manifest JSON listing the base path, seed, moments and every variation's
/// objective.
std::string family_manifest(const InstanceFamily& family, const std::string& base_path);

struct FamilyManifest {
    std::string base_path;
    PerturbationConfig config;
    std::vector<Variation> variations;    // cost and draw only
};

/// Throws SchemaMismatch.
FamilyManifest read_family_manifest(const std::string& text);

} // namespace mirlab
