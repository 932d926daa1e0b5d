#include "mirlab/instance_gen.hpp"

#include "mirlab/errors.hpp"
#include "mirlab/parallel.hpp"
#include "mirlab/solver.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace mirlab {

namespace {

struct DrawOutcome {
    Vector cost;
    LpSolution lp;
};

} // namespace

void PerturbationConfig::validate() const {
    if (count < 1) throw ConfigError("variation count must be at least 1");
    for (const auto* m : {&positive, &negative})
        if (*m && !((*m)->stddev >= 0.0 && std::isfinite((*m)->mean) && std::isfinite((*m)->stddev)))
            throw ConfigError("pool moments must be finite with a nonnegative std");
}

PoolMoments empirical_moments(const Vector& cost, int sign) {
    std::vector<double> pool;
    for (Index j = 0; j < cost.size(); ++j)
        if ((sign > 0 && cost(j) > 0.0) || (sign < 0 && cost(j) < 0.0)) pool.push_back(cost(j));
    PoolMoments m;
    if (pool.empty()) return m;
    for (double d : pool) m.mean += d;
    m.mean /= static_cast<double>(pool.size());
    double var = 0.0;
    for (double d : pool) var += (d - m.mean) * (d - m.mean);
    m.stddev = std::sqrt(var / static_cast<double>(pool.size()));
    return m;
}

std::mt19937_64 draw_stream(std::uint64_t seed, std::uint64_t draw) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(draw), static_cast<std::uint32_t>(draw >> 32)};
    return std::mt19937_64(seq);
}

Vector perturb_objective(const Vector& cost, const PoolMoments& positive, const PoolMoments& negative,
                         std::mt19937_64& rng) {
    Vector out = Vector::Zero(cost.size());
    for (Index j = 0; j < cost.size(); ++j) {
        if (cost(j) == 0.0) continue;
        const PoolMoments& m = cost(j) > 0.0 ? positive : negative;
        double u = m.mean;
        if (m.stddev > 0.0) u = std::normal_distribution<double>(m.mean, m.stddev)(rng);
        out(j) = cost(j) > 0.0 ? std::max(0.0, u) : std::min(0.0, u);
    }
    return out;
}

Vector perturb_objective(const MipInstance& base, const PerturbationConfig& config, std::uint64_t draw) {
    config.validate();
    const Vector cost = base.cost();
    const PoolMoments positive = config.positive ? *config.positive : empirical_moments(cost, 1);
    const PoolMoments negative = config.negative ? *config.negative : empirical_moments(cost, -1);
    auto rng = draw_stream(config.seed, draw);
    return perturb_objective(cost, positive, negative, rng);
}

MipInstance InstanceFamily::instance(Index k) const {
    if (k < 0 || k >= static_cast<Index>(variations.size())) throw ShapeError("variation index out of range");
    MipInstance out = base;
    const Vector& cost = variations[static_cast<std::size_t>(k)].cost;
    out.f = cost.head(base.num_int_vars());
    out.g = cost.tail(base.num_cont_vars());
    out.name = base.name + "#" + std::to_string(k);
    return out;
}

std::vector<long long> lp_fingerprint(const Vector& point) {
    std::vector<long long> out(static_cast<std::size_t>(point.size()));
    for (Index j = 0; j < point.size(); ++j) out[static_cast<std::size_t>(j)] = std::llround(point(j) / kFingerprintGrid);
    return out;
}

InstanceFamily generate_family(const MipInstance& base, const PerturbationConfig& config, bool require_distinct,
                               int workers) {
    base.validate();
    config.validate();
    InstanceFamily family;
    family.base = base;
    family.config = config;
    const Index cap = kDrawCapFactor * config.count;
    const Index batch = std::max<Index>(1, workers);
    std::set<std::vector<long long>> seen;

    GeneralMip model = base.as_general();
    while (static_cast<Index>(family.variations.size()) < config.count && family.draws < cap) {
        const Index size = std::min(batch, cap - family.draws);
        std::vector<DrawOutcome> outcomes(static_cast<std::size_t>(size));
        parallel_for(size, workers, [&](Index i) {
            auto& out = outcomes[static_cast<std::size_t>(i)];
            out.cost = perturb_objective(base, config, static_cast<std::uint64_t>(family.draws + i));
            GeneralMip local = model;
            local.cost = out.cost;
            out.lp = solve_lp(local);
        });
        for (Index i = 0; i < size && static_cast<Index>(family.variations.size()) < config.count; ++i) {
            auto& out = outcomes[static_cast<std::size_t>(i)];
            ++family.draws;
            if (out.lp.status != LpStatus::Optimal) continue;
            Variation v;
            v.draw = static_cast<std::uint64_t>(family.draws - 1);
            v.cost = std::move(out.cost);
            v.lp_optimum = out.lp.primal;
            v.lp_objective = out.lp.objective;
            v.fingerprint = lp_fingerprint(v.lp_optimum);
            if (require_distinct && !seen.insert(v.fingerprint).second) continue;
            family.variations.push_back(std::move(v));
        }
    }
    if (static_cast<Index>(family.variations.size()) < config.count)
        throw ExhaustedDraws("kept " + std::to_string(family.variations.size()) + " of " +
                             std::to_string(config.count) + " variations after " + std::to_string(cap) + " draws");
    return family;
}

bool passes_gap_filter(const LoopResult& run, double min_gap) {
    const auto gap = run.final_gap();
    return gap.has_value() && *gap >= min_gap;
}

GapPartition filter_by_gap(const InstanceFamily& family, const LoopConfig& config, double min_gap, int workers) {
    GapPartition out;
    const Index count = static_cast<Index>(family.variations.size());
    out.runs.resize(static_cast<std::size_t>(count));
    parallel_for(count, workers,
                 [&](Index k) { out.runs[static_cast<std::size_t>(k)] = run_cutting_loop(family.instance(k), config); });
    for (Index k = 0; k < count; ++k)
        (passes_gap_filter(out.runs[static_cast<std::size_t>(k)], min_gap) ? out.kept : out.discarded).push_back(k);
    return out;
}

std::string family_manifest(const InstanceFamily& family, const std::string& base_path) {
    nlohmann::json doc;
    doc["format"] = "mirlab.family.v1";
    doc["base"] = base_path;
    doc["seed"] = family.config.seed;
    doc["count"] = family.config.count;
    doc["draws"] = family.draws;
    const Vector cost = family.base.cost();
    const PoolMoments pos = family.config.positive ? *family.config.positive : empirical_moments(cost, 1);
    const PoolMoments neg = family.config.negative ? *family.config.negative : empirical_moments(cost, -1);
    doc["positive"] = {{"mean", pos.mean}, {"std", pos.stddev}};
    doc["negative"] = {{"mean", neg.mean}, {"std", neg.stddev}};
    auto& list = doc["variations"] = nlohmann::json::array();
    for (const auto& v : family.variations)
        list.push_back({{"draw", v.draw},
                        {"lp_objective", v.lp_objective},
                        {"cost", std::vector<double>(v.cost.data(), v.cost.data() + v.cost.size())}});
    return doc.dump(1);
}

FamilyManifest read_family_manifest(const std::string& text) {
    FamilyManifest out;
    try {
        const auto doc = nlohmann::json::parse(text);
        if (doc.value("format", "") != "mirlab.family.v1") throw SchemaMismatch("unknown family manifest format");
        out.base_path = doc.at("base").get<std::string>();
        out.config.seed = doc.at("seed").get<std::uint64_t>();
        out.config.count = doc.at("count").get<Index>();
        out.config.positive = PoolMoments{doc.at("positive").at("mean").get<double>(), doc.at("positive").at("std").get<double>()};
        out.config.negative = PoolMoments{doc.at("negative").at("mean").get<double>(), doc.at("negative").at("std").get<double>()};
        for (const auto& item : doc.at("variations")) {
            Variation v;
            v.draw = item.at("draw").get<std::uint64_t>();
            v.lp_objective = item.value("lp_objective", 0.0);
            const auto cost = item.at("cost").get<std::vector<double>>();
            v.cost = Eigen::Map<const Vector>(cost.data(), static_cast<Index>(cost.size()));
            out.variations.push_back(std::move(v));
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaMismatch(std::string("malformed family manifest: ") + e.what());
    }
    return out;
}

} // namespace mirlab
