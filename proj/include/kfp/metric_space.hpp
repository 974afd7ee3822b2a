#pragma once

#include "kfp/rational.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kfp {

using RatMatrix = std::vector<std::vector<Rat>>;

enum class Provenance { Explicit, GridSample, RandomEmbedding, Repaired };

std::string to_string(Provenance p);
std::optional<Provenance> provenance_from_string(std::string_view s);

struct Violation {
    enum class Axiom { ZeroDiagonal, PositiveOffDiagonal, Symmetry, Triangle };
    Axiom axiom;
    std::array<int, 3> indices;  // indices[2] is -1 for pair axioms
    Rat lhs;
    Rat rhs;
};

std::string to_string(Violation::Axiom a);

struct ValidationReport {
    bool ok = true;
    std::vector<Violation> violations;
};

/// Structural problems (non-square matrix, duplicate labels, bad sizes),
/// as opposed to metric-axiom violations.
struct StructureError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Construction rejected because the distance matrix is not a metric.
struct MetricError : std::runtime_error {
    explicit MetricError(ValidationReport r);
    ValidationReport report;
};

/// Checks all metric axioms on a square matrix and reports every violation
/// with its witnessing indices. Triangle violations are reported once per
/// endpoint pair (i < k) and intermediate j. Throws StructureError if the
/// matrix is not square.
ValidationReport validate_metric(const RatMatrix& dist);

/// All-pairs shortest-path closure (Floyd-Warshall). Entries never increase;
/// the result satisfies the triangle inequality. Symmetry and diagonal zeros
/// are preserved.
RatMatrix shortest_path_closure(RatMatrix dist);

struct GridInfo {
    Rat lo;
    Rat hi;
    int n = 0;
    Rat step;  // (hi - lo) / (n - 1)
};

/// Immutable labeled point set with an exact rational distance matrix.
/// Every constructor validates the metric axioms; instances are safe to
/// share across threads.
class FiniteMetricSpace {
public:
    static FiniteMetricSpace build(std::vector<std::string> labels, RatMatrix dist,
                                   Provenance provenance = Provenance::Explicit);

    /// n equally spaced points on [lo, hi]; distances are exact coordinate
    /// differences. Labels are the reduced coordinate strings.
    static FiniteMetricSpace sample_interval(const Rat& lo, const Rat& hi, int n);

    /// Shortest-path repair of a symmetric nonnegative matrix with zero
    /// diagonal and positive off-diagonal entries.
    static FiniteMetricSpace repair(std::vector<std::string> labels, RatMatrix dist);

    int size() const { return static_cast<int>(labels_.size()); }
    const std::string& label(int i) const { return labels_[static_cast<size_t>(i)]; }
    const std::vector<std::string>& labels() const { return labels_; }
    std::optional<int> index_of(std::string_view label) const;

    const Rat& d(int i, int j) const { return dist_[static_cast<size_t>(i) * labels_.size() + static_cast<size_t>(j)]; }
    RatMatrix matrix() const;

    Provenance provenance() const { return provenance_; }
    const std::optional<GridInfo>& grid() const { return grid_; }
    /// Grid coordinate of point i; only valid for grid-sampled spaces.
    Rat grid_point(int i) const;

private:
    FiniteMetricSpace(std::vector<std::string> labels, std::vector<Rat> flat, Provenance p);

    std::vector<std::string> labels_;
    std::vector<Rat> dist_;  // row-major n*n
    Provenance provenance_;
    std::optional<GridInfo> grid_;
};

}  // namespace kfp
