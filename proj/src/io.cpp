#include "hkflow/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace hk {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw ConfigError("trailing characters in number: " + s);
        return v;
    } catch (const std::invalid_argument&) {
        throw ConfigError("not a number: '" + s + "'");
    } catch (const std::out_of_range&) {
        throw ConfigError("number out of range: '" + s + "'");
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Field CSV
// ---------------------------------------------------------------------------

void write_field_csv(const Field& field, std::ostream& os) {
    const Grid& grid = field.grid;
    if (grid.dim() == 1) {
        os << "x,value\n";
        for (int i = 0; i < grid.n; ++i)
            os << format_double(grid.center(i)) << ','
               << format_double(field[static_cast<std::size_t>(i)]) << '\n';
    } else {
        os << "x,y,value\n";
        for (int j = 0; j < grid.n; ++j)
            for (int i = 0; i < grid.n; ++i)
                os << format_double(grid.center(i)) << ',' << format_double(grid.center(j)) << ','
                   << format_double(field.at2(i, j)) << '\n';
    }
}

Field read_field_csv(std::istream& is, const Grid& grid) {
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("field CSV is empty");
    const auto header = split_csv_line(line);
    const std::size_t want_cols = grid.dim() == 2 ? 3 : 2;
    if (header.size() != want_cols || header.back() != "value")
        throw ConfigError("field CSV header does not match the grid dimension");

    Field out(grid);
    std::size_t row = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (row >= out.size()) throw ConfigError("field CSV has more rows than grid cells");
        const auto cols = split_csv_line(line);
        if (cols.size() != want_cols)
            throw ConfigError("field CSV row " + std::to_string(row + 2) + " has wrong arity");
        out[row] = parse_double(cols.back());
        ++row;
    }
    if (row != out.size()) throw ConfigError("field CSV has fewer rows than grid cells");
    return out;
}

// ---------------------------------------------------------------------------
// Series CSV
// ---------------------------------------------------------------------------

void write_series_csv(const Trajectory& traj, std::ostream& os) {
    os << "t,mass";
    for (std::size_t m = 0; m < traj.entropy_series.size(); ++m)
        os << ",entropy_" << m << ",prod_total_" << m << ",prod_w_" << m << ",prod_h_" << m;
    os << '\n';
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        os << format_double(traj.times[k]) << ',' << format_double(traj.mass_series[k]);
        for (std::size_t m = 0; m < traj.entropy_series.size(); ++m) {
            const EntropyReport& rep = traj.production_series[m][k];
            os << ',' << format_double(traj.entropy_series[m][k]) << ','
               << format_double(rep.production_total) << ',' << format_double(rep.production_w)
               << ',' << format_double(rep.production_h);
        }
        os << '\n';
    }
}

SeriesTable read_series_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("series CSV is empty");
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "t" || header[1] != "mass" ||
        (header.size() - 2) % 4 != 0)
        throw ConfigError("series CSV header is malformed");
    const std::size_t monitors = (header.size() - 2) / 4;

    SeriesTable out;
    out.entropy.resize(monitors);
    out.prod_total.resize(monitors);
    out.prod_w.resize(monitors);
    out.prod_h.resize(monitors);
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty()) continue;
        const auto cols = split_csv_line(line);
        if (cols.size() != header.size())
            throw ConfigError("series CSV row " + std::to_string(row) + " has wrong arity");
        out.times.push_back(parse_double(cols[0]));
        out.mass.push_back(parse_double(cols[1]));
        for (std::size_t m = 0; m < monitors; ++m) {
            out.entropy[m].push_back(parse_double(cols[2 + 4 * m]));
            out.prod_total[m].push_back(parse_double(cols[3 + 4 * m]));
            out.prod_w[m].push_back(parse_double(cols[4 + 4 * m]));
            out.prod_h[m].push_back(parse_double(cols[5 + 4 * m]));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sequence CSV
// ---------------------------------------------------------------------------

void write_sequence_csv(const std::vector<SequenceRow>& rows, std::ostream& os) {
    os << "param,entropy,production_w,production_h\n";
    for (const SequenceRow& r : rows)
        os << format_double(r.param) << ',' << format_double(r.entropy) << ','
           << format_double(r.production_w) << ',' << format_double(r.production_h) << '\n';
}

std::vector<SequenceRow> read_sequence_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("sequence CSV is empty");
    if (split_csv_line(line) !=
        std::vector<std::string>{"param", "entropy", "production_w", "production_h"})
        throw ConfigError("sequence CSV header is malformed");
    std::vector<SequenceRow> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cols = split_csv_line(line);
        if (cols.size() != 4) throw ConfigError("sequence CSV row has wrong arity");
        out.push_back(SequenceRow{parse_double(cols[0]), parse_double(cols[1]),
                                  parse_double(cols[2]), parse_double(cols[3])});
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

json to_json(const GSpec& g) {
    json j{{"kind", to_string(g.kind)}};
    if (g.kind == GKind::power) j["alpha"] = g.alpha;
    return j;
}

GSpec g_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError("profile object needs a \"kind\" field");
    const GKind kind = g_kind_from_string(j.at("kind").get<std::string>());
    const double alpha = j.value("alpha", 0.0);
    return make_g(kind, alpha);
}

json to_json(const PsiSpec& psi) {
    json j{{"kind", to_string(psi.kind)}};
    if (psi.kind != PsiKind::driving) j["p"] = psi.p;
    if (psi.kind == PsiKind::driving) j["base"] = to_json(psi.base);
    return j;
}

PsiSpec psi_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError("entropy object needs a \"kind\" field");
    const PsiKind kind = psi_kind_from_string(j.at("kind").get<std::string>());
    if (kind == PsiKind::driving) {
        if (!j.contains("base")) throw ConfigError("driving entropy needs a \"base\" profile");
        return make_psi_driving(g_from_json(j.at("base")));
    }
    if (!j.contains("p")) throw ConfigError("beckner/abs_power entropy needs a \"p\" field");
    return make_psi(kind, j.at("p").get<double>());
}

json to_json(const Grid& grid) {
    return json{{"domain_kind", to_string(grid.kind)}, {"n", grid.n}};
}

Grid grid_from_json(const json& j) {
    if (!j.is_object() || !j.contains("domain_kind") || !j.contains("n"))
        throw ConfigError("grid object needs \"domain_kind\" and \"n\"");
    return build_grid(domain_kind_from_string(j.at("domain_kind").get<std::string>()),
                      j.at("n").get<int>());
}

json to_json(const DensityBuilder& b) {
    json j{{"kind", to_string(b.kind)}, {"normalize", b.normalize}};
    switch (b.kind) {
        case BuilderKind::constant:
            j["value"] = b.value;
            break;
        case BuilderKind::cosine:
            j["a"] = b.a;
            j["k"] = b.k;
            break;
        case BuilderKind::scaled_steady:
            j["k"] = b.scale;
            break;
        case BuilderKind::indicator_band:
            j["n"] = b.band_n;
            break;
        case BuilderKind::mollified_indicator:
            j["x0"] = b.x0;
            j["x1"] = b.x1;
            j["w"] = b.width;
            break;
        case BuilderKind::trig_random:
            j["seed"] = b.seed;
            j["modes"] = b.modes;
            j["amplitude"] = b.amplitude;
            break;
    }
    return j;
}

DensityBuilder builder_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError("density builder needs a \"kind\" field");
    DensityBuilder b;
    b.kind = builder_kind_from_string(j.at("kind").get<std::string>());
    b.normalize = j.value("normalize", false);
    switch (b.kind) {
        case BuilderKind::constant:
            b.value = j.value("value", 1.0);
            break;
        case BuilderKind::cosine:
            b.a = j.value("a", 0.0);
            b.k = j.value("k", 1);
            break;
        case BuilderKind::scaled_steady:
            b.scale = j.value("k", 1.0);
            break;
        case BuilderKind::indicator_band:
            b.band_n = j.value("n", 2);
            break;
        case BuilderKind::mollified_indicator:
            b.x0 = j.value("x0", 0.25);
            b.x1 = j.value("x1", 0.75);
            b.width = j.value("w", 0.1);
            break;
        case BuilderKind::trig_random:
            b.seed = j.value("seed", std::uint64_t{0});
            b.modes = j.value("modes", 3);
            b.amplitude = j.value("amplitude", 0.5);
            break;
    }
    return b;
}

json to_json(const EntropyReport& rep) {
    return json{{"entropy", rep.entropy},
                {"production_total", rep.production_total},
                {"production_w", rep.production_w},
                {"production_h", rep.production_h},
                {"mass", rep.mass}};
}

json to_json(const DecayFit& fit) {
    return json{{"gamma_hat", fit.gamma_hat},
                {"fit_quality", fit.fit_quality},
                {"bound_holds", fit.bound_holds}};
}

json to_json(const ValidationReport& report) {
    json checks = json::array();
    for (const ValidationCheck& c : report.checks) {
        json entry{{"name", c.name},
                   {"pass", c.pass},
                   {"worst_s", c.worst_s},
                   {"worst_value", c.worst_value}};
        if (!c.note.empty()) entry["note"] = c.note;
        checks.push_back(entry);
    }
    return json{{"checks", checks}, {"all_pass", report.all_pass()}};
}

json to_json(const IneqReport& rep, const std::string& name, const json& params) {
    json j{{"name", name}, {"lhs", rep.lhs}, {"rhs", rep.rhs}, {"params", params}};
    if (std::isinf(rep.ratio))
        j["ratio"] = "inf";
    else
        j["ratio"] = rep.ratio;
    return j;
}

}  // namespace hk
