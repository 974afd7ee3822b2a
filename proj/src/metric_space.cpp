#include "kfp/metric_space.hpp"

#include <sstream>
#include <unordered_set>
#include <utility>

namespace kfp {

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::Explicit: return "explicit";
        case Provenance::GridSample: return "grid-sample";
        case Provenance::RandomEmbedding: return "random-embedding";
        case Provenance::Repaired: return "repaired";
    }
    return "explicit";
}

std::optional<Provenance> provenance_from_string(std::string_view s) {
    if (s == "explicit") return Provenance::Explicit;
    if (s == "grid-sample") return Provenance::GridSample;
    if (s == "random-embedding") return Provenance::RandomEmbedding;
    if (s == "repaired") return Provenance::Repaired;
    return std::nullopt;
}

std::string to_string(Violation::Axiom a) {
    switch (a) {
        case Violation::Axiom::ZeroDiagonal: return "zero-diagonal";
        case Violation::Axiom::PositiveOffDiagonal: return "positive-off-diagonal";
        case Violation::Axiom::Symmetry: return "symmetry";
        case Violation::Axiom::Triangle: return "triangle";
    }
    return "triangle";
}

MetricError::MetricError(ValidationReport r)
    : std::runtime_error("distance matrix violates " + std::to_string(r.violations.size()) +
                         " metric axiom(s), first: " +
                         (r.violations.empty() ? std::string("?") : to_string(r.violations.front().axiom))),
      report(std::move(r)) {}

ValidationReport validate_metric(const RatMatrix& dist) {
    const int n = static_cast<int>(dist.size());
    for (const auto& row : dist)
        if (static_cast<int>(row.size()) != n)
            throw StructureError("distance matrix is not square");

    ValidationReport rep;
    auto add = [&rep](Violation::Axiom a, int i, int j, int k, Rat lhs, Rat rhs) {
        rep.violations.push_back({a, {i, j, k}, std::move(lhs), std::move(rhs)});
    };

    for (int i = 0; i < n; ++i) {
        if (dist[i][i] != 0)
            add(Violation::Axiom::ZeroDiagonal, i, i, -1, dist[i][i], Rat(0));
        for (int j = i + 1; j < n; ++j) {
            if (dist[i][j] != dist[j][i])
                add(Violation::Axiom::Symmetry, i, j, -1, dist[i][j], dist[j][i]);
            if (dist[i][j] <= 0)
                add(Violation::Axiom::PositiveOffDiagonal, i, j, -1, dist[i][j], Rat(0));
        }
    }
    // d(i,k) <= d(i,j) + d(j,k), reported per endpoint pair i < k.
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k)
            for (int j = 0; j < n; ++j) {
                if (j == i || j == k) continue;
                Rat rhs = dist[i][j] + dist[j][k];
                if (dist[i][k] > rhs)
                    add(Violation::Axiom::Triangle, i, j, k, dist[i][k], std::move(rhs));
            }

    rep.ok = rep.violations.empty();
    return rep;
}

RatMatrix shortest_path_closure(RatMatrix dist) {
    const int n = static_cast<int>(dist.size());
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Rat via = dist[i][k] + dist[k][j];
                if (via < dist[i][j]) dist[i][j] = std::move(via);
            }
    return dist;
}

namespace {

void check_labels(const std::vector<std::string>& labels, size_t n) {
    if (labels.size() != n)
        throw StructureError("label count does not match matrix dimension");
    std::unordered_set<std::string_view> seen;
    for (const auto& l : labels)
        if (!seen.insert(l).second)
            throw StructureError("duplicate label: " + l);
}

std::vector<Rat> flatten(RatMatrix&& m) {
    std::vector<Rat> flat;
    flat.reserve(m.size() * m.size());
    for (auto& row : m)
        for (auto& v : row) flat.push_back(std::move(v));
    return flat;
}

}  // namespace

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> labels, std::vector<Rat> flat, Provenance p)
    : labels_(std::move(labels)), dist_(std::move(flat)), provenance_(p) {}

FiniteMetricSpace FiniteMetricSpace::build(std::vector<std::string> labels, RatMatrix dist,
                                           Provenance provenance) {
    if (dist.empty()) throw StructureError("a finite metric space needs at least one point");
    auto report = validate_metric(dist);
    check_labels(labels, dist.size());
    if (!report.ok) throw MetricError(std::move(report));
    return FiniteMetricSpace(std::move(labels), flatten(std::move(dist)), provenance);
}

FiniteMetricSpace FiniteMetricSpace::sample_interval(const Rat& lo, const Rat& hi, int n) {
    if (n < 2) throw StructureError("interval sample needs at least 2 points");
    if (!(lo < hi)) throw StructureError("interval sample needs lo < hi");

    Rat step = (hi - lo) / (n - 1);
    std::vector<Rat> points;
    points.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) points.push_back(lo + step * i);
    points.back() = hi;  // exact by construction; keep it explicit

    std::vector<std::string> labels;
    labels.reserve(points.size());
    for (const auto& p : points) labels.push_back(to_string(p));

    std::vector<Rat> flat(static_cast<size_t>(n) * n, Rat(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            flat[static_cast<size_t>(i) * n + j] = i < j ? points[j] - points[i] : points[i] - points[j];

    FiniteMetricSpace space(std::move(labels), std::move(flat), Provenance::GridSample);
    space.grid_ = GridInfo{lo, hi, n, step};
    return space;
}

FiniteMetricSpace FiniteMetricSpace::repair(std::vector<std::string> labels, RatMatrix dist) {
    const int n = static_cast<int>(dist.size());
    for (const auto& row : dist)
        if (static_cast<int>(row.size()) != n)
            throw StructureError("distance matrix is not square");
    check_labels(labels, dist.size());
    for (int i = 0; i < n; ++i) {
        if (dist[i][i] != 0) throw StructureError("repair requires a zero diagonal");
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (dist[i][j] != dist[j][i]) throw StructureError("repair requires a symmetric matrix");
            if (dist[i][j] <= 0)
                throw StructureError("repair requires positive off-diagonal entries");
        }
    }
    return FiniteMetricSpace(std::move(labels), flatten(shortest_path_closure(std::move(dist))),
                             Provenance::Repaired);
}

std::optional<int> FiniteMetricSpace::index_of(std::string_view label) const {
    for (size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == label) return static_cast<int>(i);
    return std::nullopt;
}

RatMatrix FiniteMetricSpace::matrix() const {
    const size_t n = labels_.size();
    RatMatrix m(n, std::vector<Rat>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) m[i][j] = dist_[i * n + j];
    return m;
}

Rat FiniteMetricSpace::grid_point(int i) const {
    if (!grid_) throw StructureError("not a grid-sampled space");
    if (i == grid_->n - 1) return grid_->hi;
    return grid_->lo + grid_->step * i;
}

}  // namespace kfp
