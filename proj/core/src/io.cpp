#include "capkit/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "json.hpp"

namespace capkit::io {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path);
    out << text;
}

double parse_real(const std::string& text) {
    std::string t;
    for (char c : text)
        t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (t == "inf" || t == "infinity" || t == "+inf")
        return kInf;
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        throw Error("not a number: '" + text + "'");
    }
    if (used != t.size())
        throw Error("not a number: '" + text + "'");
    return v;
}

std::string format_real(double v) {
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    std::ostringstream ss;
    ss << std::setprecision(17) << v;
    return ss.str();
}

namespace {

json parse_json(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(std::string("malformed ") + what + ": " + e.what());
    }
}

json real_json(double v) {
    if (std::isinf(v))
        return "inf";
    return v;
}

double json_real(const json& j, const char* field) {
    if (j.is_number())
        return j.get<double>();
    if (j.is_string())
        return parse_real(j.get<std::string>());
    throw Error(std::string("field '") + field + "' is not a number");
}

int point_index(const Space& s, const std::string& id) {
    const int i = s.index_of(id);
    if (i < 0)
        throw Error("unknown point id '" + id + "'");
    return i;
}

std::string id_of(const json& j) {
    if (j.is_string())
        return j.get<std::string>();
    if (j.is_number_integer())
        return std::to_string(j.get<long long>());
    throw Error("point id must be a string or integer");
}

}  // namespace

bool declares_euclidean(const std::string& text) {
    const json doc = parse_json(text, "space file");
    return doc.value("metric", std::string("explicit")) == "euclidean";
}

Space parse_space(const std::string& text) {
    const json doc = parse_json(text, "space file");
    if (!doc.is_object() || !doc.contains("points") || !doc["points"].is_array())
        throw Error("space file needs a 'points' array");
    const auto& pts = doc["points"];
    const std::size_t n = pts.size();
    if (n > kMaxPoints)
        throw Error("space exceeds the size cap of " + std::to_string(kMaxPoints) + " points");
    std::vector<std::string> ids;
    std::vector<double> mass;
    std::vector<std::vector<double>> coords;
    std::map<std::string, int> seen;
    bool have_coords = true;
    for (const auto& p : pts) {
        if (!p.is_object() || !p.contains("id") || !p.contains("mass"))
            throw Error("each point needs 'id' and 'mass'");
        ids.push_back(id_of(p["id"]));
        if (!seen.emplace(ids.back(), 0).second)
            throw Error("duplicate point id '" + ids.back() + "'");
        mass.push_back(json_real(p["mass"], "mass"));
        if (p.contains("coords")) {
            std::vector<double> c;
            for (const auto& v : p["coords"])
                c.push_back(json_real(v, "coords"));
            coords.push_back(std::move(c));
        } else {
            have_coords = false;
        }
    }
    if (!have_coords)
        coords.clear();
    const std::string metric = doc.value("metric", std::string(doc.contains("matrix") ? "explicit" : "euclidean"));
    if (metric == "euclidean") {
        if (!have_coords)
            throw Error("euclidean metric requires coords on every point");
        return euclidean_space(std::move(ids), std::move(mass), std::move(coords));
    }
    if (metric != "explicit")
        throw Error("metric must be 'euclidean' or 'explicit'");
    if (!doc.contains("matrix") || !doc["matrix"].is_array() || doc["matrix"].size() != n)
        throw Error("explicit metric requires a matrix with one row per point");
    std::vector<double> dist(n * n, 0.0);
    const auto& m = doc["matrix"];
    bool full = true;
    for (std::size_t i = 0; i < n; ++i)
        full = full && m[i].size() == n;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = m[i];
        if (!full && row.size() != i + 1)
            throw Error("matrix row " + std::to_string(i) + " has the wrong length");
        for (std::size_t j = 0; j < row.size(); ++j) {
            const double v = json_real(row[j], "matrix");
            dist[i * n + j] = v;
            if (!full)
                dist[j * n + i] = v;
        }
    }
    return Space(std::move(ids), std::move(mass), std::move(dist), std::move(coords));
}

std::string dump_space(const Space& s) {
    json doc;
    const bool euc = !s.coords().empty();
    doc["metric"] = euc ? "euclidean" : "explicit";
    json pts = json::array();
    for (int i = 0; i < static_cast<int>(s.size()); ++i) {
        json p;
        p["id"] = s.id(i);
        p["mass"] = s.mass(i);
        if (euc)
            p["coords"] = s.coords()[static_cast<std::size_t>(i)];
        pts.push_back(p);
    }
    doc["points"] = pts;
    if (!euc) {
        json m = json::array();
        for (int i = 0; i < static_cast<int>(s.size()); ++i) {
            json row = json::array();
            for (int j = 0; j <= i; ++j)
                row.push_back(s.d(i, j));
            m.push_back(row);
        }
        doc["matrix"] = m;
    }
    return doc.dump(1) + "\n";
}

PointSet parse_set(const Space& s, const std::string& text) {
    const json doc = parse_json(text, "set file");
    if (!doc.is_array())
        throw Error("set file must be a list of ids");
    PointSet e;
    for (const auto& v : doc)
        e.push_back(point_index(s, id_of(v)));
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    return e;
}

PointSet parse_set_arg(const Space& s, const std::string& arg) {
    std::string t = arg;
    t.erase(std::remove_if(t.begin(), t.end(), [](unsigned char c) { return std::isspace(c); }), t.end());
    if (!t.empty() && t.front() == '[')
        return parse_set(s, t);
    if (t.size() < 2 || t.front() != '{' || t.back() != '}')
        throw Error("set must be a JSON list or {id,...}");
    PointSet e;
    std::string body = t.substr(1, t.size() - 2);
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty())
            e.push_back(point_index(s, tok));
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    return e;
}

std::string dump_set(const Space& s, const PointSet& e) {
    json doc = json::array();
    for (int x : e)
        doc.push_back(s.id(x));
    return doc.dump() + "\n";
}

std::string dump_sequence(const Space& s, const ScaleSequence& f) {
    std::ostringstream out;
    for (int n = f.window.n0; n <= f.window.n_max; ++n)
        for (int x = 0; x < static_cast<int>(s.size()); ++x)
            out << n << ' ' << s.id(x) << ' ' << format_real(f.at(n, x)) << '\n';
    for (int x = 0; x < static_cast<int>(s.size()); ++x)
        out << "tail " << s.id(x) << ' ' << format_real(f.tail[static_cast<std::size_t>(x)]) << '\n';
    return out.str();
}

ScaleSequence parse_sequence(const Space& s, const std::string& text) {
    ScaleSequence f(scale_window(s), s.size());
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream ls(line);
        std::string sc, id, val;
        if (!(ls >> sc >> id >> val))
            throw Error("sequence line " + std::to_string(lineno) + ": expected 'scale point value'");
        const int x = point_index(s, id);
        const double v = parse_real(val);
        if (!(v >= 0))
            throw Error("sequence line " + std::to_string(lineno) + ": values must be nonnegative");
        if (sc == "tail") {
            f.tail[static_cast<std::size_t>(x)] = v;
            continue;
        }
        const int n = static_cast<int>(parse_real(sc));
        if (n < f.window.n0 || n > f.window.n_max)
            throw Error("sequence line " + std::to_string(lineno) + ": scale outside [" +
                        std::to_string(f.window.n0) + "," + std::to_string(f.window.n_max) + "]");
        f.at(n, x) = v;
    }
    return f;
}

std::string dump_point_values(const Space& s, const std::vector<double>& v) {
    std::ostringstream out;
    for (int x = 0; x < static_cast<int>(s.size()); ++x)
        out << s.id(x) << ' ' << format_real(v[static_cast<std::size_t>(x)]) << '\n';
    return out.str();
}

std::vector<double> parse_point_values(const Space& s, const std::string& text) {
    std::vector<double> v(s.size(), 0.0);
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream ls(line);
        std::string id, val;
        if (!(ls >> id >> val))
            throw Error("line " + std::to_string(lineno) + ": expected 'point value'");
        v[static_cast<std::size_t>(point_index(s, id))] = parse_real(val);
    }
    return v;
}

std::string dump_certificate(const Space& s, const CapacityCertificate& c) {
    json doc;
    doc["kind"] = c.kind;
    doc["solver_id"] = c.solver_id;
    doc["value"] = c.value;
    doc["dual_value"] = c.dual_value;
    doc["rel_gap"] = c.rel_gap;
    doc["iterations"] = c.iterations;
    doc["converged"] = c.converged;
    doc["params"] = {{"beta", c.params.beta},
                     {"p", c.params.p},
                     {"q", real_json(c.params.q)},
                     {"Lambda", c.params.Lambda},
                     {"outer_closed", c.params.outer_closed}};
    json set = json::array();
    for (int x : c.set)
        set.push_back(s.id(x));
    doc["set"] = set;
    auto point_table = [&](const std::vector<double>& v) {
        json t = json::array();
        for (int x = 0; x < static_cast<int>(v.size()); ++x)
            if (v[static_cast<std::size_t>(x)] != 0)
                t.push_back({{"point", s.id(x)}, {"value", v[static_cast<std::size_t>(x)]}});
        return t;
    };
    if (c.kind == "tl") {
        const auto& w = c.sequence.window;
        doc["window"] = {{"n0", w.n0}, {"n_max", w.n_max}, {"tail_start", w.tail_start}};
        doc["tail_coeff"] = c.tail_coeff;
        json prim = json::array();
        for (int n = w.n0; n <= w.n_max; ++n)
            for (int x = 0; x < static_cast<int>(s.size()); ++x)
                if (c.sequence.at(n, x) != 0)
                    prim.push_back({{"scale", n}, {"point", s.id(x)}, {"value", c.sequence.at(n, x)}});
        for (int x = 0; x < static_cast<int>(s.size()); ++x)
            if (c.sequence.tail[static_cast<std::size_t>(x)] != 0)
                prim.push_back({{"scale", "tail"}, {"point", s.id(x)}, {"value", c.sequence.tail[static_cast<std::size_t>(x)]}});
        doc["primal"] = prim;
        doc["dual"] = point_table(c.dual);
    } else if (c.kind == "relative") {
        doc["center"] = c.center >= 0 ? json(s.id(c.center)) : json(nullptr);
        doc["radius"] = c.radius;
        doc["phi"] = point_table(c.phi);
        json scales = json::array(), grad = json::array();
        for (const auto& [k, vals] : c.gradient.g) {
            scales.push_back(k);
            for (int x = 0; x < static_cast<int>(vals.size()); ++x)
                if (vals[static_cast<std::size_t>(x)] != 0)
                    grad.push_back({{"scale", k}, {"point", s.id(x)}, {"value", vals[static_cast<std::size_t>(x)]}});
        }
        doc["gradient_scales"] = scales;
        doc["gradient"] = grad;
    } else if (c.kind == "riesz") {
        doc["density"] = point_table(c.density);
        doc["dual"] = point_table(c.dual);
    }
    return doc.dump(1) + "\n";
}

CapacityCertificate parse_certificate(const Space& s, const std::string& text) {
    const json doc = parse_json(text, "certificate");
    CapacityCertificate c;
    try {
        c.kind = doc.at("kind").get<std::string>();
        c.solver_id = doc.value("solver_id", std::string());
        c.value = json_real(doc.at("value"), "value");
        c.dual_value = json_real(doc.at("dual_value"), "dual_value");
        c.rel_gap = json_real(doc.at("rel_gap"), "rel_gap");
        c.iterations = doc.value("iterations", 0);
        c.converged = doc.value("converged", true);
        const auto& p = doc.at("params");
        c.params.beta = json_real(p.at("beta"), "beta");
        c.params.p = json_real(p.at("p"), "p");
        c.params.q = json_real(p.at("q"), "q");
        c.params.Lambda = json_real(p.at("Lambda"), "Lambda");
        c.params.outer_closed = p.value("outer_closed", false);
        for (const auto& v : doc.at("set"))
            c.set.push_back(point_index(s, id_of(v)));
        std::sort(c.set.begin(), c.set.end());
        auto read_table = [&](const json& t) {
            std::vector<double> v(s.size(), 0.0);
            for (const auto& e : t)
                v[static_cast<std::size_t>(point_index(s, id_of(e.at("point"))))] = json_real(e.at("value"), "value");
            return v;
        };
        if (c.kind == "tl") {
            const auto& w = doc.at("window");
            ScaleWindow win;
            win.n0 = w.at("n0").get<int>();
            win.n_max = w.at("n_max").get<int>();
            win.tail_start = w.at("tail_start").get<int>();
            c.sequence = ScaleSequence(win, s.size());
            c.tail_coeff = json_real(doc.at("tail_coeff"), "tail_coeff");
            for (const auto& e : doc.at("primal")) {
                const int x = point_index(s, id_of(e.at("point")));
                const double v = json_real(e.at("value"), "value");
                if (e.at("scale").is_string())
                    c.sequence.tail[static_cast<std::size_t>(x)] = v;
                else {
                    const int n = e.at("scale").get<int>();
                    if (n < win.n0 || n > win.n_max)
                        throw Error("primal scale outside the window");
                    c.sequence.at(n, x) = v;
                }
            }
            c.dual = read_table(doc.at("dual"));
        } else if (c.kind == "relative") {
            c.center = doc.at("center").is_null() ? -1 : point_index(s, id_of(doc.at("center")));
            c.radius = json_real(doc.at("radius"), "radius");
            c.phi = read_table(doc.at("phi"));
            for (const auto& k : doc.at("gradient_scales"))
                c.gradient.g[k.get<int>()].assign(s.size(), 0.0);
            for (const auto& e : doc.at("gradient")) {
                const int k = e.at("scale").get<int>();
                auto it = c.gradient.g.find(k);
                if (it == c.gradient.g.end())
                    throw Error("gradient scale not listed in gradient_scales");
                it->second[static_cast<std::size_t>(point_index(s, id_of(e.at("point"))))] =
                    json_real(e.at("value"), "value");
            }
        } else if (c.kind == "riesz") {
            c.density = read_table(doc.at("density"));
            c.dual = read_table(doc.at("dual"));
        } else {
            throw Error("unknown certificate kind '" + c.kind + "'");
        }
    } catch (const json::exception& e) {
        throw Error(std::string("malformed certificate: ") + e.what());
    }
    return c;
}

std::string dump_cover(const Space& s, const Cover& c) {
    std::ostringstream out;
    out << "# center radius cost\n";
    for (const auto& b : c.balls)
        out << s.id(b.center) << ' ' << format_real(b.radius) << ' ' << format_real(b.cost) << '\n';
    out << "total " << format_real(c.total) << '\n';
    return out.str();
}

}  // namespace capkit::io
