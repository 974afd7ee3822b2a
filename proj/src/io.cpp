#include "kfp/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace kfp::io {

using nlohmann::json;

namespace {

json parse_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError("malformed document: not valid structured text");
    return j;
}

Rat rat_from_json(const json& v, const std::string& where) {
    if (v.is_string()) {
        auto s = v.get<std::string>();
        auto r = parse_rational(s);
        if (!r) throw ParseError(where + ": bad rational \"" + s + "\"");
        return *r;
    }
    if (v.is_number_integer()) return Rat(v.get<std::int64_t>());
    if (v.is_number_unsigned()) return Rat(Int(v.get<std::uint64_t>()));
    throw ParseError(where + ": non-integer numeric literals lose exactness; quote the value");
}

ExtRat ext_from_string(const std::string& s, const std::string& where) {
    if (s == "inf") return ExtRat::inf();
    auto r = parse_rational(s);
    if (!r) throw ParseError(where + ": bad value \"" + s + "\"");
    return ExtRat::finite(*r);
}

std::string double_text(double v) {
    if (v == std::numeric_limits<double>::infinity()) return "inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json space_json(const FiniteMetricSpace& s) {
    json j;
    j["labels"] = s.labels();
    json rows = json::array();
    for (int i = 0; i < s.size(); ++i) {
        json row = json::array();
        for (int k = 0; k < s.size(); ++k) row.push_back(to_string(s.d(i, k)));
        rows.push_back(std::move(row));
    }
    j["dist"] = std::move(rows);
    j["provenance"] = to_string(s.provenance());
    return j;
}

json table_json(const TableMap& map) {
    json t = json::object();
    for (int i = 0; i < map.size(); ++i)
        t[map.space().label(i)] = map.space().label(map.apply(i));
    return json{{"table", std::move(t)}};
}

json piecewise_json(const PiecewiseLinearMap& map) {
    json segs = json::array();
    for (const auto& s : map.segments())
        segs.push_back({{"upto", to_string(s.upto)},
                        {"slope", to_string(s.slope)},
                        {"intercept", to_string(s.intercept)}});
    return json{{"piecewise",
                 {{"domain", {to_string(map.lo()), to_string(map.hi())}},
                  {"segments", std::move(segs)}}}};
}

template <size_t N>
json witness_labels(const std::optional<std::array<int, N>>& w, const FiniteMetricSpace& s) {
    if (!w) return nullptr;
    json arr = json::array();
    for (int idx : *w) arr.push_back(s.label(idx));
    return arr;
}

template <size_t N>
json witness_indices(const std::optional<std::array<int, N>>& w) {
    if (!w) return nullptr;
    json arr = json::array();
    for (int idx : *w) arr.push_back(idx);
    return arr;
}

template <size_t N>
std::optional<std::array<int, N>> indices_from_json(const json& v) {
    if (v.is_null()) return std::nullopt;
    if (!v.is_array() || v.size() != N) throw ParseError("bad witness tuple in record");
    std::array<int, N> out{};
    for (size_t i = 0; i < N; ++i) out[i] = v[i].get<int>();
    return out;
}

json report_json_indices(const ContractionReport& r) {
    json j;
    j["lambda_kannan"] = to_string(r.lambda_kannan);
    j["lambda_gkannan"] = to_string(r.lambda_gkannan);
    j["lipschitz"] = to_string(r.lipschitz);
    j["is_kannan"] = r.is_kannan;
    j["is_gkannan"] = r.is_gkannan;
    j["witness_pair"] = witness_indices(r.witness_pair);
    j["witness_triple"] = witness_indices(r.witness_triple);
    j["witness_lipschitz"] = witness_indices(r.witness_lipschitz);
    return j;
}

ContractionReport report_from_json(const json& j) {
    ContractionReport r;
    r.lambda_kannan = ext_from_string(j.at("lambda_kannan").get<std::string>(), "report");
    r.lambda_gkannan = ext_from_string(j.at("lambda_gkannan").get<std::string>(), "report");
    r.lipschitz = ext_from_string(j.at("lipschitz").get<std::string>(), "report");
    r.is_kannan = j.at("is_kannan").get<bool>();
    r.is_gkannan = j.at("is_gkannan").get<bool>();
    r.witness_pair = indices_from_json<2>(j.value("witness_pair", json()));
    r.witness_triple = indices_from_json<3>(j.value("witness_triple", json()));
    r.witness_lipschitz = indices_from_json<2>(j.value("witness_lipschitz", json()));
    return r;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

ParsedSpace parse_space_raw(const std::string& text) {
    json j = parse_json(text);
    if (!j.is_object()) throw ParseError("space document must be an object");
    if (!j.contains("labels") || !j["labels"].is_array())
        throw ParseError("space document needs a labels array");
    if (!j.contains("dist") || !j["dist"].is_array())
        throw ParseError("space document needs a dist matrix");
    ParsedSpace out;
    for (const auto& l : j["labels"]) {
        if (!l.is_string()) throw ParseError("labels must be strings");
        out.labels.push_back(l.get<std::string>());
    }
    for (const auto& row : j["dist"]) {
        if (!row.is_array()) throw ParseError("dist must be a matrix");
        std::vector<Rat> r;
        for (const auto& v : row) r.push_back(rat_from_json(v, "dist"));
        out.dist.push_back(std::move(r));
    }
    if (j.contains("provenance")) {
        auto p = provenance_from_string(j["provenance"].get<std::string>());
        if (!p) throw ParseError("unknown provenance");
        out.provenance = *p;
    }
    return out;
}

SpacePtr parse_space(const std::string& text) {
    auto raw = parse_space_raw(text);
    return std::make_shared<const FiniteMetricSpace>(
        FiniteMetricSpace::build(std::move(raw.labels), std::move(raw.dist), raw.provenance));
}

SpacePtr load_space(const std::string& path) { return parse_space(read_file(path)); }

std::string space_to_text(const FiniteMetricSpace& s) { return dump(space_json(s)); }

ParsedMap parse_map(const std::string& text) {
    json j = parse_json(text);
    if (!j.is_object()) throw ParseError("map document must be an object");
    ParsedMap out;
    if (j.contains("table")) {
        if (!j["table"].is_object()) throw ParseError("table must map labels to labels");
        for (const auto& [from, to] : j["table"].items()) {
            if (!to.is_string()) throw ParseError("table values must be labels");
            out.table.emplace_back(from, to.get<std::string>());
        }
        out.is_table = true;
        return out;
    }
    if (j.contains("piecewise")) {
        const auto& p = j["piecewise"];
        if (!p.is_object() || !p.contains("domain") || !p.contains("segments") ||
            !p["domain"].is_array() || p["domain"].size() != 2 || !p["segments"].is_array())
            throw ParseError("piecewise needs a [lo, hi] domain and a segments array");
        Rat lo = rat_from_json(p["domain"][0], "domain");
        Rat hi = rat_from_json(p["domain"][1], "domain");
        std::vector<PiecewiseLinearMap::Segment> segs;
        for (const auto& s : p["segments"]) {
            if (!s.is_object()) throw ParseError("segments must be objects");
            segs.push_back({rat_from_json(s.at("upto"), "segment"),
                            rat_from_json(s.at("slope"), "segment"),
                            rat_from_json(s.at("intercept"), "segment")});
        }
        try {
            out.piecewise = PiecewiseLinearMap(std::move(lo), std::move(hi), std::move(segs));
        } catch (const StructureError& e) {
            throw ParseError(std::string("bad piecewise map: ") + e.what());
        }
        return out;
    }
    throw ParseError("map document needs a table or piecewise entry");
}

ParsedMap load_map(const std::string& path) { return parse_map(read_file(path)); }

TableMap bind_table(const ParsedMap& m, SpacePtr space) {
    if (!m.is_table) throw ParseError("expected a table map");
    std::vector<int> image(static_cast<size_t>(space->size()), -1);
    for (const auto& [from, to] : m.table) {
        auto i = space->index_of(from);
        auto t = space->index_of(to);
        if (!i || !t) throw ParseError("table names unknown label \"" + (i ? to : from) + "\"");
        if (image[static_cast<size_t>(*i)] != -1)
            throw ParseError("duplicate table entry for \"" + from + "\"");
        image[static_cast<size_t>(*i)] = *t;
    }
    for (int i = 0; i < space->size(); ++i)
        if (image[static_cast<size_t>(i)] == -1)
            throw ParseError("table is missing an entry for \"" + space->label(i) + "\"");
    return TableMap(std::move(space), std::move(image));
}

std::string table_to_text(const TableMap& map) { return dump(table_json(map)); }

std::string piecewise_to_text(const PiecewiseLinearMap& map) { return dump(piecewise_json(map)); }

std::string validation_to_text(const ValidationReport& r,
                               const std::vector<std::string>& labels, bool structured) {
    auto name = [&](int i) {
        return i >= 0 && i < static_cast<int>(labels.size()) ? labels[static_cast<size_t>(i)]
                                                            : std::to_string(i);
    };
    if (structured) {
        json j;
        j["ok"] = r.ok;
        json vs = json::array();
        for (const auto& v : r.violations) {
            json pts = json::array();
            for (int idx : v.indices)
                if (idx >= 0) pts.push_back(name(idx));
            vs.push_back({{"axiom", to_string(v.axiom)},
                          {"points", std::move(pts)},
                          {"lhs", to_string(v.lhs)},
                          {"rhs", to_string(v.rhs)}});
        }
        j["violations"] = std::move(vs);
        return dump(j);
    }
    std::ostringstream out;
    if (r.ok) {
        out << "ok: all metric axioms hold\n";
        return std::move(out).str();
    }
    out << "not a metric: " << r.violations.size() << " violation(s)\n";
    for (const auto& v : r.violations) {
        out << "  " << to_string(v.axiom) << " (";
        bool first = true;
        for (int idx : v.indices) {
            if (idx < 0) continue;
            if (!first) out << ", ";
            out << name(idx);
            first = false;
        }
        out << "): " << to_string(v.lhs) << " vs " << to_string(v.rhs) << "\n";
    }
    return std::move(out).str();
}

std::string report_to_text(const ContractionReport& r, const FiniteMetricSpace& s,
                           bool structured) {
    if (structured) {
        json j;
        j["lambda_kannan"] = to_string(r.lambda_kannan);
        j["lambda_gkannan"] = to_string(r.lambda_gkannan);
        j["lipschitz"] = to_string(r.lipschitz);
        j["is_kannan"] = r.is_kannan;
        j["is_gkannan"] = r.is_gkannan;
        j["witness_pair"] = witness_labels(r.witness_pair, s);
        j["witness_triple"] = witness_labels(r.witness_triple, s);
        j["witness_lipschitz"] = witness_labels(r.witness_lipschitz, s);
        return dump(j);
    }
    auto tuple = [&](const auto& w) {
        if (!w) return std::string("none");
        std::string t = "(";
        for (size_t i = 0; i < w->size(); ++i) {
            if (i) t += ", ";
            t += s.label((*w)[i]);
        }
        return t + ")";
    };
    std::ostringstream out;
    out << "lambda_kannan   " << to_string(r.lambda_kannan) << "  witness " << tuple(r.witness_pair) << "\n";
    out << "lambda_gkannan  " << to_string(r.lambda_gkannan) << "  witness " << tuple(r.witness_triple) << "\n";
    out << "lipschitz       " << to_string(r.lipschitz) << "  witness " << tuple(r.witness_lipschitz) << "\n";
    out << "kannan          " << (r.is_kannan ? "yes" : "no") << "\n";
    out << "gkannan         " << (r.is_gkannan ? "yes" : "no") << "\n";
    return std::move(out).str();
}

std::string sampled_to_text(const SampledReport& r, const PiecewiseLinearMap& map,
                            bool structured) {
    auto coord = [&](int i) { return to_string(map.lo() + r.grid_step * i); };
    auto tuple_json = [&](const auto& w) -> json {
        if (!w) return nullptr;
        json arr = json::array();
        for (int idx : *w) arr.push_back(coord(idx));
        return arr;
    };
    if (structured) {
        json j;
        j["grid_n"] = r.grid_n;
        j["grid_step"] = to_string(r.grid_step);
        j["lambda_kannan"] = to_string(r.report.lambda_kannan);
        j["lambda_gkannan"] = to_string(r.report.lambda_gkannan);
        j["lipschitz"] = to_string(r.report.lipschitz);
        j["kannan_ceiling"] = to_string(r.kannan_ceiling);
        j["gkannan_ceiling"] = to_string(r.gkannan_ceiling);
        j["is_kannan"] = r.report.is_kannan;
        j["is_gkannan"] = r.report.is_gkannan;
        j["witness_pair"] = tuple_json(r.report.witness_pair);
        j["witness_triple"] = tuple_json(r.report.witness_triple);
        j["witness_lipschitz"] = tuple_json(r.report.witness_lipschitz);
        return dump(j);
    }
    auto tuple = [&](const auto& w) {
        if (!w) return std::string("none");
        std::string t = "(";
        for (size_t i = 0; i < w->size(); ++i) {
            if (i) t += ", ";
            t += coord((*w)[i]);
        }
        return t + ")";
    };
    std::ostringstream out;
    out << "sample grid     " << r.grid_n << " points, step " << to_string(r.grid_step) << "\n";
    out << "lambda_kannan   " << to_string(r.report.lambda_kannan) << "  ceiling "
        << to_string(r.kannan_ceiling) << "  witness " << tuple(r.report.witness_pair) << "\n";
    out << "lambda_gkannan  " << to_string(r.report.lambda_gkannan) << "  ceiling "
        << to_string(r.gkannan_ceiling) << "  witness " << tuple(r.report.witness_triple) << "\n";
    out << "lipschitz       " << to_string(r.report.lipschitz) << "  witness "
        << tuple(r.report.witness_lipschitz) << "\n";
    out << "kannan          " << (r.report.is_kannan ? "yes" : "no") << "\n";
    out << "gkannan         " << (r.report.is_gkannan ? "yes" : "no") << "\n";
    out << "values are exact sample suprema; flags use the one-step ceilings\n";
    return std::move(out).str();
}

namespace {

json solve_json(const SolveResult& res, const FiniteMetricSpace& s) {
    json j;
    j["outcome"] = to_string(res.trace.outcome);
    json pts = json::array();
    for (int p : res.trace.points) pts.push_back(s.label(p));
    j["points"] = std::move(pts);
    json sd = json::array();
    for (const auto& a : res.trace.step_distances) sd.push_back(to_string(a));
    j["step_distances"] = std::move(sd);
    j["fixed_point"] = res.fixed_point ? json(s.label(*res.fixed_point)) : json();
    if (res.certificate) {
        j["certificate"] = {{"lambda", to_string(res.certificate->lambda)},
                            {"alpha", to_string(res.certificate->alpha)},
                            {"a", to_string(res.certificate->a)}};
        json tb = json::array();
        for (int n = 1; n <= res.trace.steps(); ++n)
            tb.push_back(double_text(res.certificate->tail_bound(n)));
        j["tail_bounds"] = std::move(tb);
        j["rate_check"] = {{"pass", res.rate_check.pass}};
        if (!res.rate_check.pass) {
            j["rate_check"]["failing_n"] = *res.rate_check.failing_n;
            j["rate_check"]["failed_bound"] = res.rate_check.failed_bound;
        }
    }
    if (res.r_diagnostics) {
        json vals = json::array();
        for (const auto& e : res.r_diagnostics->values)
            vals.push_back({{"n", e.n}, {"value", to_string(e.value)}});
        j["r_diagnostics"] = {{"values", std::move(vals)},
                              {"skipped", res.r_diagnostics->skipped}};
    }
    return j;
}

}  // namespace

std::string solve_to_text(const SolveResult& res, const FiniteMetricSpace& s, bool structured) {
    if (structured) return dump(solve_json(res, s));
    std::ostringstream out;
    out << "n  point  a_n  tail_bound\n";
    for (size_t i = 0; i < res.trace.points.size(); ++i) {
        out << i << "  " << s.label(res.trace.points[i]) << "  ";
        if (i == 0)
            out << "-";
        else
            out << to_string(res.trace.step_distances[i - 1]);
        out << "  ";
        if (i == 0 || !res.certificate)
            out << "-";
        else
            out << double_text(res.certificate->tail_bound(static_cast<int>(i)));
        out << "\n";
    }
    out << "outcome " << to_string(res.trace.outcome) << "\n";
    if (res.fixed_point) out << "fixed point " << s.label(*res.fixed_point) << "\n";
    if (res.certificate) {
        out << "certificate lambda " << to_string(res.certificate->lambda) << ", alpha "
            << to_string(res.certificate->alpha) << ", a " << to_string(res.certificate->a) << "\n";
        out << "rate check " << (res.rate_check.pass ? "pass" : "fail") << "\n";
    }
    if (res.r_diagnostics && !res.r_diagnostics->values.empty()) {
        out << "uniqueness ratios";
        for (const auto& e : res.r_diagnostics->values)
            out << "  R_" << e.n << "=" << to_string(e.value);
        out << "\n";
    }
    return std::move(out).str();
}

std::string all_starts_to_text(const AllStartsResult& res, const FiniteMetricSpace& s,
                               bool structured) {
    if (structured) {
        json j;
        json starts = json::array();
        for (size_t i = 0; i < res.results.size(); ++i) {
            const auto& r = res.results[i];
            starts.push_back({{"start", s.label(static_cast<int>(i))},
                              {"outcome", to_string(r.trace.outcome)},
                              {"steps", r.trace.steps()},
                              {"fixed_point", r.fixed_point ? json(s.label(*r.fixed_point)) : json()}});
        }
        j["starts"] = std::move(starts);
        j["all_reached"] = res.all_reached;
        j["worst_steps"] = res.worst_steps;
        return dump(j);
    }
    std::ostringstream out;
    out << "start  outcome  steps  fixed_point\n";
    for (size_t i = 0; i < res.results.size(); ++i) {
        const auto& r = res.results[i];
        out << s.label(static_cast<int>(i)) << "  " << to_string(r.trace.outcome) << "  "
            << r.trace.steps() << "  " << (r.fixed_point ? s.label(*r.fixed_point) : "-") << "\n";
    }
    out << (res.all_reached ? "all starts reached a fixed point" : "some start failed") << "\n";
    out << "worst-case steps " << res.worst_steps << "\n";
    return std::move(out).str();
}

std::string witness_to_text(const WitnessRecord& rec) {
    json j;
    j["kind"] = to_string(rec.kind);
    j["seed"] = rec.seed;
    j["source"] = rec.source;
    if (rec.table) {
        j["space"] = space_json(rec.table->space());
        j["map"] = table_json(*rec.table);
    } else if (rec.piecewise) {
        j["map"] = piecewise_json(*rec.piecewise);
        j["grid"] = rec.grid_n;
    }
    j["report"] = report_json_indices(rec.report);
    return dump(j);
}

WitnessRecord parse_witness(const std::string& text) {
    json j = parse_json(text);
    WitnessRecord rec;
    auto kind = witness_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) throw ParseError("unknown witness kind");
    rec.kind = *kind;
    rec.seed = j.at("seed").get<std::uint64_t>();
    rec.source = j.value("source", "");
    auto map = parse_map(j.at("map").dump());
    if (map.is_table) {
        if (!j.contains("space")) throw ParseError("table witness needs its space");
        rec.table = bind_table(map, parse_space(j["space"].dump()));
    } else {
        rec.piecewise = map.piecewise;
        rec.grid_n = j.value("grid", 0);
    }
    rec.report = report_from_json(j.at("report"));
    return rec;
}

std::string write_witness(const WitnessRecord& rec, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::string content = witness_to_text(rec);
    std::string base = to_string(rec.kind) + "_" + std::to_string(rec.seed);
    for (int counter = 0;; ++counter) {
        std::string name = counter == 0 ? base : base + "_" + std::to_string(counter);
        fs::path path = fs::path(dir) / (name + ".json");
        if (fs::exists(path)) {
            if (read_file(path.string()) == content) return path.string();
            continue;
        }
        write_file(path.string(), content);
        return path.string();
    }
}

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string digest_string(std::string_view bytes) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a(bytes)));
    return buf;
}

std::string manifest_to_text(const RunManifest& m) {
    json j;
    j["command"] = m.command;
    j["inputs"] = m.inputs;
    json params = json::object();
    for (const auto& [k, v] : m.parameters) params[k] = v;
    j["parameters"] = std::move(params);
    j["seed"] = m.seed;
    j["tool_version"] = m.tool_version_string;
    j["output_digest"] = m.output_digest;
    return dump(j);
}

}  // namespace kfp::io
