#include "kfp/contractivity.hpp"

#include <cstdint>
#include <type_traits>
#include <utility>

namespace kfp {
namespace {

// Scaled integer path: distances become int64 once multiplied by the common
// denominator. Values are capped at 2^31 so cross products of triple sums
// (each < 3 * 2^32) stay inside 128 bits.
constexpr int64_t scale_limit = int64_t(1) << 31;

bool ratio_less(int64_t n1, int64_t d1, int64_t n2, int64_t d2) {
    return static_cast<__int128>(n1) * d2 < static_cast<__int128>(n2) * d1;
}
bool ratio_equal(int64_t n1, int64_t d1, int64_t n2, int64_t d2) {
    return static_cast<__int128>(n1) * d2 == static_cast<__int128>(n2) * d1;
}
bool ratio_less(const Rat& n1, const Rat& d1, const Rat& n2, const Rat& d2) {
    return n1 * d2 < n2 * d1;
}
bool ratio_equal(const Rat& n1, const Rat& d1, const Rat& n2, const Rat& d2) {
    return n1 * d2 == n2 * d1;
}

int64_t iabs(int64_t v) { return v < 0 ? -v : v; }

template <class T>
struct Best {
    int state = 0;  // 0 nothing positive seen, 1 finite positive, 2 infinite
    T num{};
    T den{};
    std::array<int, 3> w{-1, -1, -1};
};

// Strict preference: higher state, then larger ratio, then smaller witness.
// The maximum under this order is unique, so parallel merges are
// order-independent.
template <class T>
bool better(const Best<T>& a, const Best<T>& b) {
    if (a.state == 0) return false;
    if (b.state == 0) return true;
    if (a.state != b.state) return a.state > b.state;
    if (a.state == 1 && !ratio_equal(a.num, a.den, b.num, b.den))
        return ratio_less(b.num, b.den, a.num, a.den);
    return a.w < b.w;
}

template <class T, class NumF, class DenF>
Best<T> scan_pairs(int n, const NumF& num_of, const DenF& den_of) {
    Best<T> best;
#pragma omp parallel if(n >= 32)
    {
        Best<T> local;
#pragma omp for schedule(static) nowait
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                T num = num_of(i, j);
                if (num == 0) continue;
                Best<T> cand;
                cand.den = den_of(i, j);
                cand.state = cand.den == 0 ? 2 : 1;
                cand.num = std::move(num);
                cand.w = {i, j, -1};
                if (better(cand, local)) local = std::move(cand);
            }
        }
#pragma omp critical
        {
            if (better(local, best)) best = std::move(local);
        }
    }
    return best;
}

template <class T, class NumF, class DenF>
Best<T> scan_triples(int n, const NumF& num_of, const DenF& den_of) {
    Best<T> best;
#pragma omp parallel if(n >= 32)
    {
        Best<T> local;
#pragma omp for schedule(dynamic) nowait
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                for (int k = j + 1; k < n; ++k) {
                    T num = num_of(i, j, k);
                    if (num == 0) continue;
                    Best<T> cand;
                    cand.den = den_of(i, j, k);
                    cand.state = cand.den == 0 ? 2 : 1;
                    cand.num = std::move(num);
                    cand.w = {i, j, k};
                    if (better(cand, local)) local = std::move(cand);
                }
            }
        }
#pragma omp critical
        {
            if (better(local, best)) best = std::move(local);
        }
    }
    return best;
}

template <class T>
ExtRat best_value(const Best<T>& b) {
    if (b.state == 0) return ExtRat::finite(Rat(0));
    if (b.state == 2) return ExtRat::inf();
    if constexpr (std::is_same_v<T, int64_t>) {
        return ExtRat::finite(Rat(Int(b.num)) / Rat(Int(b.den)));
    } else {
        return ExtRat::finite(b.num / b.den);
    }
}

template <class T>
PairResult pair_result(const Best<T>& b) {
    PairResult out;
    out.value = best_value(b);
    if (b.state != 0) out.witness = std::array<int, 2>{b.w[0], b.w[1]};
    return out;
}

template <class T>
TripleResult triple_result(const Best<T>& b) {
    TripleResult out;
    out.value = best_value(b);
    if (b.state != 0) out.witness = b.w;
    return out;
}

struct ScaledTable {
    int n = 0;
    std::vector<int64_t> dist;  // flattened n*n
    std::vector<int> image;
    std::vector<int64_t> disp;
    int64_t d(int i, int j) const { return dist[static_cast<size_t>(i) * n + j]; }
};

std::optional<std::vector<int64_t>> scale_values(const std::vector<Rat>& vals) {
    Int l(1);
    for (const auto& v : vals) {
        l = lcm(l, Int(denominator(v)));
        if (l > scale_limit) return std::nullopt;
    }
    std::vector<int64_t> out;
    out.reserve(vals.size());
    for (const auto& v : vals) {
        Int s = Int(numerator(v)) * (l / Int(denominator(v)));
        if (s > scale_limit || s < -scale_limit) return std::nullopt;
        out.push_back(s.convert_to<int64_t>());
    }
    return out;
}

std::optional<ScaledTable> scale_table(const TableMap& map) {
    const auto& s = map.space();
    const int n = s.size();
    std::vector<Rat> vals;
    vals.reserve(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) vals.push_back(s.d(i, j));
    auto scaled = scale_values(vals);
    if (!scaled) return std::nullopt;
    ScaledTable t;
    t.n = n;
    t.dist = std::move(*scaled);
    t.image = map.image();
    t.disp.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) t.disp[static_cast<size_t>(i)] = t.d(i, t.image[static_cast<size_t>(i)]);
    return t;
}

void require_size(const TableMap& map, int n, const char* what) {
    if (map.size() < n) throw StructureError(what);
}

}  // namespace

PairResult kannan_coefficient(const TableMap& map) {
    require_size(map, 2, "kannan coefficient needs at least 2 points");
    if (auto t = scale_table(map)) {
        auto best = scan_pairs<int64_t>(
            t->n,
            [&](int i, int j) -> int64_t { return t->d(t->image[static_cast<size_t>(i)], t->image[static_cast<size_t>(j)]); },
            [&](int i, int j) -> int64_t { return t->disp[static_cast<size_t>(i)] + t->disp[static_cast<size_t>(j)]; });
        return pair_result(best);
    }
    const auto& s = map.space();
    auto best = scan_pairs<Rat>(
        s.size(),
        [&](int i, int j) -> Rat { return s.d(map.apply(i), map.apply(j)); },
        [&](int i, int j) -> Rat { return s.d(i, map.apply(i)) + s.d(j, map.apply(j)); });
    return pair_result(best);
}

TripleResult gkannan_coefficient(const TableMap& map) {
    require_size(map, 3, "generalized kannan coefficient needs at least 3 points");
    if (auto t = scale_table(map)) {
        auto best = scan_triples<int64_t>(
            t->n,
            [&](int i, int j, int k) -> int64_t {
                int ti = t->image[static_cast<size_t>(i)], tj = t->image[static_cast<size_t>(j)], tk = t->image[static_cast<size_t>(k)];
                return t->d(ti, tj) + t->d(tj, tk) + t->d(ti, tk);
            },
            [&](int i, int j, int k) -> int64_t {
                return t->disp[static_cast<size_t>(i)] + t->disp[static_cast<size_t>(j)] + t->disp[static_cast<size_t>(k)];
            });
        return triple_result(best);
    }
    const auto& s = map.space();
    auto best = scan_triples<Rat>(
        s.size(),
        [&](int i, int j, int k) -> Rat {
            int ti = map.apply(i), tj = map.apply(j), tk = map.apply(k);
            return s.d(ti, tj) + s.d(tj, tk) + s.d(ti, tk);
        },
        [&](int i, int j, int k) -> Rat {
            return s.d(i, map.apply(i)) + s.d(j, map.apply(j)) + s.d(k, map.apply(k));
        });
    return triple_result(best);
}

PairResult lipschitz_coefficient(const TableMap& map) {
    require_size(map, 2, "lipschitz coefficient needs at least 2 points");
    if (auto t = scale_table(map)) {
        auto best = scan_pairs<int64_t>(
            t->n,
            [&](int i, int j) -> int64_t { return t->d(t->image[static_cast<size_t>(i)], t->image[static_cast<size_t>(j)]); },
            [&](int i, int j) -> int64_t { return t->d(i, j); });
        return pair_result(best);
    }
    const auto& s = map.space();
    auto best = scan_pairs<Rat>(
        s.size(),
        [&](int i, int j) -> Rat { return s.d(map.apply(i), map.apply(j)); },
        [&](int i, int j) -> Rat { return s.d(i, j); });
    return pair_result(best);
}

ContractionReport classify(const TableMap& map) {
    require_size(map, 3, "classification needs at least 3 points");
    auto k = kannan_coefficient(map);
    auto g = gkannan_coefficient(map);
    auto l = lipschitz_coefficient(map);
    ContractionReport r;
    r.lambda_kannan = k.value;
    r.lambda_gkannan = g.value;
    r.lipschitz = l.value;
    r.is_kannan = k.value.less_than(Rat(1, 2));
    r.is_gkannan = g.value.less_than(Rat(2, 3));
    r.witness_pair = k.witness;
    r.witness_triple = g.witness;
    r.witness_lipschitz = l.witness;
    return r;
}

std::vector<W1Violation> audit_w1(const TableMap& map, const Rat& lambda) {
    if (lambda < 0) throw StructureError("audit needs a nonnegative lambda");
    const auto& s = map.space();
    const int n = s.size();
    std::vector<W1Violation> out;
    for (int x = 0; x < n; ++x) {
        const Rat& dx = s.d(x, map.apply(x));
        for (int y = 0; y < n; ++y) {
            if (y == x) continue;
            const Rat& lhs = s.d(map.apply(x), map.apply(y));
            Rat rhs = lambda * (dx + s.d(y, map.apply(y)) / 2);
            if (lhs > rhs) out.push_back({x, y, lhs, rhs, lhs - rhs});
        }
    }
    return out;
}

Rat w1_band(const Rat& delta, const Rat& lambda) {
    return delta * (Rat(2) + lambda * Rat(3, 2));
}

SampledReport sampled_classify(const PiecewiseLinearMap& map, int grid_n) {
    if (grid_n < 3) throw StructureError("sampled audit needs at least 3 grid points");
    const int n = grid_n;
    Rat span = map.hi() - map.lo();
    Rat step = span / (n - 1);
    std::vector<Rat> pos(static_cast<size_t>(n)), val(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        pos[static_cast<size_t>(i)] = map.lo() + step * i;
        val[static_cast<size_t>(i)] = map.evaluate(pos[static_cast<size_t>(i)]);
    }

    Best<int64_t> bk, bg, bl;
    Best<Rat> rk, rg, rl;
    bool scaled_ok = false;
    {
        std::vector<Rat> all = pos;
        all.insert(all.end(), val.begin(), val.end());
        if (auto scaled = scale_values(all)) {
            scaled_ok = true;
            std::vector<int64_t> p(scaled->begin(), scaled->begin() + n);
            std::vector<int64_t> v(scaled->begin() + n, scaled->end());
            auto dd = [&](int i, int j) { return iabs(p[static_cast<size_t>(i)] - p[static_cast<size_t>(j)]); };
            auto vd = [&](int i, int j) { return iabs(v[static_cast<size_t>(i)] - v[static_cast<size_t>(j)]); };
            auto disp = [&](int i) { return iabs(p[static_cast<size_t>(i)] - v[static_cast<size_t>(i)]); };
            bk = scan_pairs<int64_t>(
                n, [&](int i, int j) -> int64_t { return vd(i, j); },
                [&](int i, int j) -> int64_t { return disp(i) + disp(j); });
            bg = scan_triples<int64_t>(
                n,
                [&](int i, int j, int k) -> int64_t { return vd(i, j) + vd(j, k) + vd(i, k); },
                [&](int i, int j, int k) -> int64_t { return disp(i) + disp(j) + disp(k); });
            bl = scan_pairs<int64_t>(
                n, [&](int i, int j) -> int64_t { return vd(i, j); },
                [&](int i, int j) -> int64_t { return dd(i, j); });
        }
    }
    if (!scaled_ok) {
        auto dd = [&](int i, int j) -> Rat { return abs(pos[static_cast<size_t>(i)] - pos[static_cast<size_t>(j)]); };
        auto vd = [&](int i, int j) -> Rat { return abs(val[static_cast<size_t>(i)] - val[static_cast<size_t>(j)]); };
        auto disp = [&](int i) -> Rat { return abs(pos[static_cast<size_t>(i)] - val[static_cast<size_t>(i)]); };
        rk = scan_pairs<Rat>(
            n, [&](int i, int j) -> Rat { return vd(i, j); },
            [&](int i, int j) -> Rat { return disp(i) + disp(j); });
        rg = scan_triples<Rat>(
            n,
            [&](int i, int j, int k) -> Rat { return vd(i, j) + vd(j, k) + vd(i, k); },
            [&](int i, int j, int k) -> Rat { return disp(i) + disp(j) + disp(k); });
        rl = scan_pairs<Rat>(
            n, [&](int i, int j) -> Rat { return vd(i, j); },
            [&](int i, int j) -> Rat { return dd(i, j); });
    }

    auto k = scaled_ok ? pair_result(bk) : pair_result(rk);
    auto g = scaled_ok ? triple_result(bg) : triple_result(rg);
    auto l = scaled_ok ? pair_result(bl) : pair_result(rl);

    Rat widen = Rat(1) + Rat(1, n - 1);
    auto ceil_of = [&](const ExtRat& v) {
        return v.is_inf() ? ExtRat::inf() : ExtRat::finite(v.value() * widen);
    };

    SampledReport out;
    out.grid_n = n;
    out.grid_step = step;
    out.kannan_ceiling = ceil_of(k.value);
    out.gkannan_ceiling = ceil_of(g.value);
    out.report.lambda_kannan = k.value;
    out.report.lambda_gkannan = g.value;
    out.report.lipschitz = l.value;
    out.report.witness_pair = k.witness;
    out.report.witness_triple = g.witness;
    out.report.witness_lipschitz = l.witness;
    out.report.is_kannan = out.kannan_ceiling.less_than(Rat(1, 2));
    out.report.is_gkannan = out.gkannan_ceiling.less_than(Rat(2, 3));
    return out;
}

namespace reference {

PairResult kannan_coefficient(const TableMap& map) {
    require_size(map, 2, "kannan coefficient needs at least 2 points");
    const auto& s = map.space();
    const int n = s.size();
    PairResult out;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Rat& num = s.d(map.apply(i), map.apply(j));
            if (num == 0) continue;
            Rat den = s.d(i, map.apply(i)) + s.d(j, map.apply(j));
            ExtRat ratio = den == 0 ? ExtRat::inf() : ExtRat::finite(num / den);
            if (!out.witness || out.value < ratio) {
                out.value = ratio;
                out.witness = std::array<int, 2>{i, j};
            }
        }
    }
    return out;
}

TripleResult gkannan_coefficient(const TableMap& map) {
    require_size(map, 3, "generalized kannan coefficient needs at least 3 points");
    const auto& s = map.space();
    const int n = s.size();
    TripleResult out;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (int k = j + 1; k < n; ++k) {
                int ti = map.apply(i), tj = map.apply(j), tk = map.apply(k);
                Rat num = s.d(ti, tj) + s.d(tj, tk) + s.d(ti, tk);
                if (num == 0) continue;
                Rat den = s.d(i, ti) + s.d(j, tj) + s.d(k, tk);
                ExtRat ratio = den == 0 ? ExtRat::inf() : ExtRat::finite(num / den);
                if (!out.witness || out.value < ratio) {
                    out.value = ratio;
                    out.witness = std::array<int, 3>{i, j, k};
                }
            }
        }
    }
    return out;
}

PairResult lipschitz_coefficient(const TableMap& map) {
    require_size(map, 2, "lipschitz coefficient needs at least 2 points");
    const auto& s = map.space();
    const int n = s.size();
    PairResult out;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Rat& num = s.d(map.apply(i), map.apply(j));
            if (num == 0) continue;
            ExtRat ratio = ExtRat::finite(num / s.d(i, j));
            if (!out.witness || out.value < ratio) {
                out.value = ratio;
                out.witness = std::array<int, 2>{i, j};
            }
        }
    }
    return out;
}

}  // namespace reference

}  // namespace kfp
