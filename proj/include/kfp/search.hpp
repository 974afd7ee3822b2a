#pragma once

#include "kfp/contractivity.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kfp {

enum class SpaceMethod { EuclideanEmbedding, RepairedRandomMatrix };
enum class MapPolicy { UniformRandom, FixedPointBiased };

std::string to_string(SpaceMethod m);
std::string to_string(MapPolicy p);
std::optional<SpaceMethod> space_method_from_string(std::string_view s);
std::optional<MapPolicy> map_policy_from_string(std::string_view s);

struct GeneratorConfig {
    std::uint64_t seed = 1;
    int size = 3;
    SpaceMethod method = SpaceMethod::EuclideanEmbedding;
    int dim = 2;  // embedding dimension
    MapPolicy policy = MapPolicy::UniformRandom;
    int pinned = 0;  // fixed points pinned under fixed-point-biased
};

// Deterministic in the seed. Embedded spaces draw dyadic coordinates from
// the unit cube, take rounded-down Euclidean distances, and close them
// under shortest paths; matrix spaces draw symmetric positive dyadic
// entries and repair them.
SpacePtr random_space(const GeneratorConfig& config);
TableMap random_map(SpacePtr space, const GeneratorConfig& config);

enum class WitnessKind {
    KannanNotGkannan,
    GkannanNotKannan,
    NoFixedPointConditionIViolated,
    TwoFixedPoints,
};
inline constexpr int witness_kind_count = 4;

std::string to_string(WitnessKind k);
std::optional<WitnessKind> witness_kind_from_string(std::string_view s);

// A witness is either a finite table or a sampled interval map; its kind is
// re-derivable from the stored data.
struct WitnessRecord {
    WitnessKind kind = WitnessKind::KannanNotGkannan;
    std::uint64_t seed = 0;
    std::string source;  // "fixture" or "seed-sweep"
    std::optional<TableMap> table;
    std::optional<PiecewiseLinearMap> piecewise;
    int grid_n = 0;  // sample resolution for piecewise witnesses
    ContractionReport report;
};

struct HuntResult {
    std::vector<WitnessRecord> records;
    std::array<int, witness_kind_count> counts{};
    int attempts = 0;
};

// Classifies seeded random instances and records every witness kind each one
// exhibits. The embedded fixtures guarantee at least one record of each
// independence kind regardless of the random draw.
HuntResult hunt_independence(const GeneratorConfig& config, int budget,
                             bool include_fixtures = true);

struct FalsifyResult {
    int attempts = 0;
    int candidates = 0;  // coefficient < 2/3 and two-cycle free
    std::optional<TableMap> counterexample;
    std::uint64_t counterexample_seed = 0;
};

// Hunts for a candidate with no fixed point, more than two of them, or a
// start that fails to reach one within |X| steps. Expected empty; a hit
// means the toolkit itself is broken somewhere.
FalsifyResult falsify_theorem1(const GeneratorConfig& config, int budget);

struct ParamSearchConfig {
    Rat step = Rat(1);  // grid step for the a and b sweeps
    Rat max = Rat(64);
    int grid_n = 257;  // sample resolution for the case audits
};

struct ConstraintAudit {
    bool lower_bound_a = false;        // 2/(a-1) <= lambda
    bool lower_bound_b = false;        // 2/(b-1) <= lambda
    bool mixed_case_two_low = false;   // x above the seam, y, z at or below
    bool mixed_case_one_low = false;   // x, y above the seam, z at or below
    long checked_triples = 0;
};

struct ParamSearchResult {
    bool found = false;
    Rat a;
    Rat b;
    ConstraintAudit audit;
    std::string tightest_failing;  // set when not found
};

// Smallest (b, a) with a > b on the grid such that both slope bounds hold
// and the two mixed-seam linear inequalities hold on every applicable grid
// triple x > y > z.
ParamSearchResult find_two_branch_params(const Rat& lambda,
                                         const ParamSearchConfig& cfg = {});

}  // namespace kfp
