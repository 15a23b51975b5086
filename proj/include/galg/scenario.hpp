#pragma once

// Scenario files: a sectioned plain-text format (grammar in docs/grammar.md).
//
//   # comment
//   [chart]
//   name = Sigma
//   coords = x1, x2, x3
//   [anchor]
//   matrix = [1, 0, 0]
//            [x1, x2, 1]
//
// Section headers start in column 1; a line that starts with whitespace
// continues the value on the previous line.  Sections are built in file
// order, so anything a section refers to must appear above it.  Every
// error is a ScenarioError naming the line, column and block.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "galg/algebroid.hpp"
#include "galg/bundle.hpp"
#include "galg/control.hpp"
#include "galg/error.hpp"
#include "galg/expr.hpp"
#include "galg/matrix.hpp"
#include "galg/parser.hpp"

namespace galg {

/// Rational controls y(t) for the `simulate` command.
struct SimulationSpec {
    std::vector<double> x0;
    double horizon = 1;
    double step = 1e-3;
    std::vector<Expr> controls;
};

struct Scenario {
    std::string path;
    Chart chart;
    std::optional<Bundle> bundle;
    std::optional<FMatrix> anchor;
    std::optional<StructureFunctions> structure;
    std::map<std::string, CoordMap> maps;
    std::map<std::string, FMatrix> matrices;
    std::map<std::string, VBMorphism> morphisms;
    std::optional<ControlSystem> system;
    std::optional<SimulationSpec> simulation;
    std::optional<ELProblem> euler_lagrange;
    CheckOptions checks;

    CoordMap map_or_identity(const std::string& name) const {
        const auto it = maps.find(name);
        return it == maps.end() ? CoordMap::identity(chart) : it->second;
    }

    bool has_model() const noexcept { return bundle && anchor && structure; }

    AlgebroidModel model() const {
        if (!has_model()) throw InvariantError("scenario '" + path + "' needs [bundle], [anchor] and [structure]");
        return AlgebroidModel(*bundle, *anchor, *structure, map_or_identity("h"), map_or_identity("eta"));
    }

    Controls controls() const {
        if (!simulation) throw InvariantError("scenario '" + path + "' has no [simulate] block");
        const std::vector<std::string> t{"t"};
        std::vector<CompiledExpr> cs;
        for (const auto& e : simulation->controls) cs.emplace_back(e, t);
        return [cs](double time) {
            std::vector<double> y;
            const double arg[1] = {time};
            for (const auto& c : cs) y.push_back(c(arg));
            return y;
        };
    }
};

namespace detail {

/// Maps offsets in a (possibly continued) value back to file positions.
struct ValueText {
    std::string text;
    struct Segment {
        std::size_t offset;
        std::size_t line;
        std::size_t column;
    };
    std::vector<Segment> segments;

    std::pair<std::size_t, std::size_t> locate(std::size_t offset) const {
        const Segment* s = &segments.front();
        for (const auto& seg : segments)
            if (seg.offset <= offset) s = &seg;
        return {s->line, s->column + (offset - s->offset)};
    }
};

struct RawEntry {
    std::string key;
    std::size_t line;
    std::size_t column;
    ValueText value;
};

struct RawSection {
    std::string name;
    std::string argument;
    std::size_t line;
    std::vector<RawEntry> entries;

    std::string label() const { return argument.empty() ? name : name + " " + argument; }
};

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

class ScenarioReader {
public:
    ScenarioReader(std::string file, std::istream& in) : file_(std::move(file)) { read(in); }

    std::vector<RawSection>& sections() { return sections_; }
    const std::string& file() const { return file_; }

private:
    [[noreturn]] void fail(std::size_t line, std::size_t col, const std::string& block, const std::string& msg) const {
        throw ScenarioError(file_, line, col, block, msg);
    }

    void read(std::istream& in) {
        std::string raw;
        std::size_t lineno = 0;
        while (std::getline(in, raw)) {
            ++lineno;
            std::string line = raw;
            if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            if (trim(line).empty()) continue;
            const bool continued = line[0] == ' ' || line[0] == '\t';
            if (continued) {
                if (sections_.empty() || sections_.back().entries.empty())
                    fail(lineno, 1, sections_.empty() ? "file" : sections_.back().label(),
                         "indented line does not continue a value");
                auto& v = sections_.back().entries.back().value;
                const std::size_t first = line.find_first_not_of(" \t");
                v.text += ' ';
                v.segments.push_back({v.text.size(), lineno, first + 1});
                v.text += trim(line);
                continue;
            }
            if (line[0] == '[') {
                const auto close = line.find(']');
                if (close == std::string::npos) fail(lineno, 1, "file", "unterminated section header");
                if (!trim(line.substr(close + 1)).empty())
                    fail(lineno, close + 2, "file", "text after section header");
                const std::string head = trim(line.substr(1, close - 1));
                const auto space = head.find(' ');
                RawSection s;
                s.name = head.substr(0, space);
                s.argument = space == std::string::npos ? "" : trim(head.substr(space));
                s.line = lineno;
                if (s.name.empty()) fail(lineno, 2, "file", "empty section name");
                sections_.push_back(std::move(s));
                continue;
            }
            const auto eq = line.find('=');
            if (sections_.empty()) fail(lineno, 1, "file", "key outside of any section");
            if (eq == std::string::npos) fail(lineno, 1, sections_.back().label(), "expected 'key = value'");
            RawEntry e;
            e.key = trim(line.substr(0, eq));
            e.line = lineno;
            e.column = line.find_first_not_of(" \t") + 1;
            if (e.key.empty()) fail(lineno, 1, sections_.back().label(), "missing key before '='");
            const std::size_t vstart = line.find_first_not_of(" \t", eq + 1);
            e.value.text = vstart == std::string::npos ? "" : trim(line.substr(vstart));
            e.value.segments.push_back({0, lineno, (vstart == std::string::npos ? eq + 1 : vstart) + 1});
            for (const auto& other : sections_.back().entries)
                if (other.key == e.key) fail(lineno, e.column, sections_.back().label(), "duplicate key '" + e.key + "'");
            sections_.back().entries.push_back(std::move(e));
        }
    }

    std::string file_;
    std::vector<RawSection> sections_;
};

class ScenarioBuilder {
public:
    ScenarioBuilder(std::string file, std::vector<RawSection>& sections) : file_(std::move(file)), sections_(sections) {
        sc_.path = file_;
    }

    Scenario build() {
        std::set<std::string> seen;
        for (auto& s : sections_) {
            section_ = &s;
            if (!seen.insert(s.label()).second) fail_at_header("duplicate section [" + s.label() + "]");
            if (s.name != "morphism" && !s.argument.empty()) fail_at_header("section takes no argument");
            if (s.name == "morphism" && s.argument.empty()) fail_at_header("[morphism NAME] needs a name");
            if (s.name != "chart" && !have_chart_) fail_at_header("[chart] must be the first section");
            try {
                dispatch(s);
            } catch (const ScenarioError&) {
                throw;
            } catch (const Error& e) {
                fail_at_header(e.what());
            }
        }
        if (!have_chart_) throw ScenarioError(file_, 1, 1, "chart", "no [chart] section");
        return std::move(sc_);
    }

private:
    [[noreturn]] void fail_at_header(const std::string& msg) const {
        throw ScenarioError(file_, section_->line, 1, section_->label(), msg);
    }

    [[noreturn]] void fail_at(const RawEntry& e, std::size_t offset, const std::string& msg) const {
        const auto [line, col] = e.value.locate(offset);
        throw ScenarioError(file_, line, col, section_->label(), msg);
    }

    [[noreturn]] void fail_key(const RawEntry& e, const std::string& msg) const {
        throw ScenarioError(file_, e.line, e.column, section_->label(), msg);
    }

    void require_keys(const RawSection& s, std::initializer_list<const char*> allowed) const {
        for (const auto& e : s.entries) {
            bool ok = false;
            for (const char* k : allowed) ok = ok || e.key == k;
            if (!ok) fail_key(e, "unknown key '" + e.key + "'");
        }
    }

    const RawEntry* find(const RawSection& s, const std::string& key) const {
        for (const auto& e : s.entries)
            if (e.key == key) return &e;
        return nullptr;
    }

    const RawEntry& need(const RawSection& s, const std::string& key) const {
        if (const RawEntry* e = find(s, key)) return *e;
        fail_at_header("missing key '" + key + "'");
    }

    /// Top-level comma split with offsets.
    static std::vector<std::pair<std::string, std::size_t>> split_list(const std::string& text, std::size_t base = 0) {
        std::vector<std::pair<std::string, std::size_t>> out;
        std::size_t start = 0;
        int depth = 0;
        for (std::size_t i = 0; i <= text.size(); ++i) {
            if (i < text.size() && text[i] == '(') ++depth;
            if (i < text.size() && text[i] == ')') --depth;
            if (i == text.size() || (text[i] == ',' && depth == 0)) {
                const std::string raw = text.substr(start, i - start);
                const std::size_t lead = raw.find_first_not_of(" \t");
                out.emplace_back(trim(raw), base + start + (lead == std::string::npos ? 0 : lead));
                start = i + 1;
            }
        }
        return out;
    }

    std::vector<std::string> names(const RawEntry& e) const {
        std::vector<std::string> out;
        for (const auto& [item, off] : split_list(e.value.text)) {
            if (item.empty()) fail_at(e, off, "empty name in list");
            for (char c : item)
                if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
                    fail_at(e, off, "invalid name '" + item + "'");
            if (std::isdigit(static_cast<unsigned char>(item[0]))) fail_at(e, off, "invalid name '" + item + "'");
            out.push_back(item);
        }
        return out;
    }

    Expr expression(const RawEntry& e, const std::string& text, std::size_t offset,
                    std::span<const std::string> vars) const {
        if (text.empty()) fail_at(e, offset, "empty expression");
        try {
            return parse(text, vars);
        } catch (const ParseError& pe) {
            fail_at(e, offset + pe.position(), pe.message());
        } catch (const DomainError& de) {
            fail_at(e, offset, de.what());
        }
    }

    std::vector<Expr> expressions(const RawEntry& e, std::span<const std::string> vars) const {
        std::vector<Expr> out;
        for (const auto& [item, off] : split_list(e.value.text)) out.push_back(expression(e, item, off, vars));
        return out;
    }

    double number(const RawEntry& e, const std::string& text, std::size_t offset) const {
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        if (!text.empty() && end == text.c_str() + text.size()) return v;
        const Expr q = expression(e, text, offset, {});
        return q.constant_value().get_d();
    }

    std::vector<double> numbers(const RawEntry& e) const {
        std::vector<double> out;
        for (const auto& [item, off] : split_list(e.value.text)) out.push_back(number(e, item, off));
        return out;
    }

    double scalar(const RawEntry& e) const { return number(e, e.value.text, 0); }

    std::uint64_t unsigned_integer(const RawEntry& e) const {
        const std::string& t = e.value.text;
        if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
            fail_at(e, 0, "expected a non-negative integer");
        return std::stoull(t);
    }

    /// "[a, b] [c, d]" over the chart coordinates.
    FMatrix matrix(const RawEntry& e, std::span<const std::string> vars) const {
        const std::string& t = e.value.text;
        std::vector<std::vector<Expr>> rows;
        std::size_t i = 0;
        for (;;) {
            while (i < t.size() && std::isspace(static_cast<unsigned char>(t[i]))) ++i;
            if (i == t.size()) break;
            if (t[i] != '[') fail_at(e, i, "expected '[' to open a matrix row");
            const std::size_t close = t.find(']', i);
            if (close == std::string::npos) fail_at(e, i, "unterminated matrix row");
            std::vector<Expr> row;
            for (const auto& [item, off] : split_list(t.substr(i + 1, close - i - 1), i + 1))
                row.push_back(expression(e, item, off, vars));
            if (!rows.empty() && row.size() != rows.front().size())
                fail_at(e, i, "row " + std::to_string(rows.size() + 1) + " has " + std::to_string(row.size()) +
                                  " entries, expected " + std::to_string(rows.front().size()));
            rows.push_back(std::move(row));
            i = close + 1;
        }
        if (rows.empty()) fail_at(e, 0, "empty matrix");
        return FMatrix::from_rows(rows);
    }

    void dispatch(RawSection& s) {
        if (s.name == "chart") return chart(s);
        if (s.name == "bundle") return bundle(s);
        if (s.name == "maps") return maps(s);
        if (s.name == "anchor") return anchor(s);
        if (s.name == "structure") return structure(s);
        if (s.name == "matrices") return matrices(s);
        if (s.name == "morphism") return morphism(s);
        if (s.name == "system") return system(s);
        if (s.name == "simulate") return simulate(s);
        if (s.name == "euler-lagrange") return euler_lagrange(s);
        if (s.name == "checks") return checks(s);
        fail_at_header("unknown section [" + s.name + "]");
    }

    void chart(const RawSection& s) {
        require_keys(s, {"name", "coords"});
        const RawEntry* n = find(s, "name");
        const RawEntry& c = need(s, "coords");
        const std::vector<std::string> coords = names(c);
        sc_.chart = Chart(n ? n->value.text : std::string("N"), coords);
        if (std::find(coords.begin(), coords.end(), "t") != coords.end())
            fail_at(c, 0, "'t' is reserved for time in [simulate] controls");
        have_chart_ = true;
    }

    void bundle(const RawSection& s) {
        require_keys(s, {"frame"});
        sc_.bundle = Bundle(sc_.chart, names(need(s, "frame")));
    }

    void maps(const RawSection& s) {
        std::map<std::string, std::pair<const RawEntry*, const RawEntry*>> parts;
        for (const auto& e : s.entries) {
            const auto dot = e.key.rfind('.');
            const std::string which = dot == std::string::npos ? "" : e.key.substr(dot + 1);
            if (dot == 0 || (which != "forward" && which != "inverse"))
                fail_key(e, "expected NAME.forward or NAME.inverse, got '" + e.key + "'");
            auto& p = parts[e.key.substr(0, dot)];
            (which == "forward" ? p.first : p.second) = &e;
        }
        const auto& coords = sc_.chart.coords();
        for (const auto& [name, p] : parts) {
            if (!p.first || !p.second) fail_at_header("map '" + name + "' needs both forward and inverse");
            if (name == "id") fail_key(*p.first, "'id' is reserved for the identity map");
            const std::vector<Expr> fwd = expressions(*p.first, coords);
            const std::vector<Expr> inv = expressions(*p.second, coords);
            try {
                sc_.maps.emplace(name, make_coord_map(sc_.chart, sc_.chart, fwd, inv));
            } catch (const Error& err) {
                fail_key(*p.first, "map '" + name + "': " + err.what());
            }
        }
    }

    void anchor(const RawSection& s) {
        require_keys(s, {"matrix"});
        if (!sc_.bundle) fail_at_header("[anchor] needs a [bundle] above it");
        const RawEntry& e = need(s, "matrix");
        FMatrix m = matrix(e, sc_.chart.coords());
        if (m.rows() != sc_.bundle->rank() || m.cols() != sc_.chart.dimension())
            fail_key(e, "anchor must be " + std::to_string(sc_.bundle->rank()) + "x" +
                            std::to_string(sc_.chart.dimension()) + " (rank x dimension), got " + m.shape());
        sc_.anchor = std::move(m);
    }

    void structure(const RawSection& s) {
        if (!sc_.bundle || !sc_.anchor) fail_at_header("[structure] needs [bundle] and [anchor] above it");
        const std::size_t r = sc_.bundle->rank();
        if (const RawEntry* d = find(s, "derive")) {
            if (d->value.text != "true" && d->value.text != "false") fail_at(*d, 0, "expected true or false");
            if (d->value.text == "true") {
                if (s.entries.size() > 1) fail_key(*d, "'derive = true' excludes explicit C entries");
                try {
                    sc_.structure = derive_structure_functions(*sc_.bundle, *sc_.anchor, sc_.map_or_identity("h"));
                } catch (const Error& err) {
                    fail_key(*d, err.what());
                }
                return;
            }
        }
        StructureFunctions c(r);
        std::map<std::tuple<std::size_t, std::size_t, std::size_t>, const RawEntry*> given;
        for (const auto& e : s.entries) {
            if (e.key == "derive") continue;
            // C^g_{a,b}, 1-based.
            std::size_t g = 0, a = 0, b = 0;
            char tail = 0;
            if (std::sscanf(e.key.c_str(), "C^%zu_{%zu,%zu}%c", &g, &a, &b, &tail) != 3 || g < 1 || a < 1 || b < 1 ||
                g > r || a > r || b > r)
                fail_key(e, "expected C^g_{a,b} with indices in 1.." + std::to_string(r) + ", got '" + e.key + "'");
            const Expr v = expression(e, e.value.text, 0, sc_.chart.coords());
            --g, --a, --b;
            const auto mirror = given.find({g, b, a});
            if (mirror != given.end() && !(c(g, b, a) == -v))
                fail_key(e, "conflicts with " + mirror->second->key + " = " + mirror->second->value.text +
                                " (structure functions are antisymmetric)");
            if (a == b && !v.is_zero()) fail_key(e, "diagonal structure function must vanish");
            c.set(g, a, b, v);
            given[{g, a, b}] = &e;
        }
        sc_.structure = std::move(c);
    }

    void matrices(const RawSection& s) {
        for (const auto& e : s.entries) {
            for (char ch : e.key)
                if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') fail_key(e, "invalid matrix name");
            sc_.matrices.emplace(e.key, matrix(e, sc_.chart.coords()));
        }
    }

    Bundle bundle_ref(const RawEntry& e) const {
        if (e.value.text == "T") return Bundle::tangent(sc_.chart);
        if (e.value.text == "F") {
            if (!sc_.bundle) fail_at(e, 0, "bundle F used before [bundle] is declared");
            return *sc_.bundle;
        }
        fail_at(e, 0, "expected F (the declared bundle) or T (the tangent bundle)");
    }

    void morphism(const RawSection& s) {
        require_keys(s, {"source", "target", "base", "matrix"});
        const Bundle src = bundle_ref(need(s, "source"));
        const Bundle dst = bundle_ref(need(s, "target"));
        CoordMap base = CoordMap::identity(sc_.chart);
        if (const RawEntry* b = find(s, "base"); b && b->value.text != "id") {
            const auto it = sc_.maps.find(b->value.text);
            if (it == sc_.maps.end()) fail_at(*b, 0, "unknown map '" + b->value.text + "'");
            base = it->second;
        }
        const RawEntry& m = need(s, "matrix");
        FMatrix comps;
        if (const auto it = sc_.matrices.find(m.value.text); it != sc_.matrices.end())
            comps = it->second;
        else if (!m.value.text.empty() && m.value.text[0] == '[')
            comps = matrix(m, sc_.chart.coords());
        else
            fail_at(m, 0, "unknown matrix '" + m.value.text + "'");
        try {
            sc_.morphisms.emplace(s.argument, VBMorphism(src, dst, base, comps));
        } catch (const Error& err) {
            fail_key(m, err.what());
        }
    }

    void system(const RawSection& s) {
        require_keys(s, {"inputs", "matrix", "lagrangian"});
        const std::vector<std::string> inputs = names(need(s, "inputs"));
        std::vector<std::string> all = sc_.chart.coords();
        all.insert(all.end(), inputs.begin(), inputs.end());
        const RawEntry& m = need(s, "matrix");
        const RawEntry& l = need(s, "lagrangian");
        FMatrix mat = matrix(m, sc_.chart.coords());
        const Expr lag = expression(l, l.value.text, 0, all);
        try {
            sc_.system = ControlSystem(sc_.chart, inputs, std::move(mat), lag);
        } catch (const Error& err) {
            fail_key(m, err.what());
        }
    }

    void simulate(const RawSection& s) {
        require_keys(s, {"x0", "horizon", "step", "controls"});
        if (!sc_.system) fail_at_header("[simulate] needs a [system] above it");
        SimulationSpec spec;
        const RawEntry& x0 = need(s, "x0");
        spec.x0 = numbers(x0);
        if (spec.x0.size() != sc_.chart.dimension())
            fail_key(x0, "x0 needs " + std::to_string(sc_.chart.dimension()) + " values");
        if (const RawEntry* h = find(s, "horizon")) spec.horizon = scalar(*h);
        if (const RawEntry* h = find(s, "step")) spec.step = scalar(*h);
        if (!(spec.horizon > 0) || !(spec.step > 0)) fail_at_header("horizon and step must be positive");
        const RawEntry& c = need(s, "controls");
        const std::vector<std::string> t{"t"};
        spec.controls = expressions(c, t);
        if (spec.controls.size() != sc_.system->inputs().size())
            fail_key(c, "controls need " + std::to_string(sc_.system->inputs().size()) + " expressions in t");
        sc_.simulation = std::move(spec);
    }

    void euler_lagrange(const RawSection& s) {
        require_keys(s, {"velocities", "lagrangian", "x0", "z0", "horizon", "step"});
        if (!sc_.has_model()) fail_at_header("[euler-lagrange] needs [bundle], [anchor] and [structure] above it");
        const std::vector<std::string> vel = names(need(s, "velocities"));
        std::vector<std::string> all = sc_.chart.coords();
        all.insert(all.end(), vel.begin(), vel.end());
        const RawEntry& l = need(s, "lagrangian");
        const Expr lag = expression(l, l.value.text, 0, all);
        double horizon = 1, step = 1e-3;
        if (const RawEntry* h = find(s, "horizon")) horizon = scalar(*h);
        if (const RawEntry* h = find(s, "step")) step = scalar(*h);
        try {
            sc_.euler_lagrange =
                ELProblem(sc_.model(), vel, lag, numbers(need(s, "x0")), numbers(need(s, "z0")), horizon, step);
        } catch (const ScenarioError&) {
            throw;
        } catch (const Error& err) {
            fail_key(l, err.what());
        }
    }

    void checks(const RawSection& s) {
        require_keys(s, {"seed", "samples", "degree"});
        if (const RawEntry* e = find(s, "seed")) sc_.checks.seed = unsigned_integer(*e);
        if (const RawEntry* e = find(s, "samples")) sc_.checks.samples = unsigned_integer(*e);
        if (const RawEntry* e = find(s, "degree")) sc_.checks.degree = static_cast<unsigned>(unsigned_integer(*e));
    }

    std::string file_;
    std::vector<RawSection>& sections_;
    const RawSection* section_ = nullptr;
    Scenario sc_;
    bool have_chart_ = false;
};

} // namespace detail

inline Scenario parse_scenario(std::istream& in, const std::string& name = "<scenario>") {
    detail::ScenarioReader reader(name, in);
    return detail::ScenarioBuilder(name, reader.sections()).build();
}

inline Scenario parse_scenario_text(const std::string& text, const std::string& name = "<scenario>") {
    std::istringstream in(text);
    return parse_scenario(in, name);
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError(path, 0, 0, "file", "cannot open scenario file");
    return parse_scenario(in, path);
}

} // namespace galg
