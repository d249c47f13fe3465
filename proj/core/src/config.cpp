#include "minsurf/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace minsurf {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void parse_fail(const std::string& where, const std::string& msg) {
    throw ParseError(where + ": " + msg);
}

[[noreturn]] void value_fail(const std::string& where, const std::string& field,
                             const std::string& msg) {
    throw ValidationError(where + ": " + field + ": " + msg);
}

double parse_double(const std::string& where, const std::string& field,
                    const std::string& tok) {
    size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        parse_fail(where, field + ": expected number, got '" + tok + "'");
    }
    if (used != tok.size())
        parse_fail(where, field + ": expected number, got '" + tok + "'");
    return v;
}

long parse_int(const std::string& where, const std::string& field,
               const std::string& tok) {
    size_t used = 0;
    long v = 0;
    try {
        v = std::stol(tok, &used);
    } catch (const std::exception&) {
        parse_fail(where, field + ": expected integer, got '" + tok + "'");
    }
    if (used != tok.size())
        parse_fail(where, field + ": expected integer, got '" + tok + "'");
    return v;
}

bool parse_bool(const std::string& where, const std::string& field,
                const std::string& tok) {
    if (tok == "true" || tok == "1") return true;
    if (tok == "false" || tok == "0") return false;
    parse_fail(where, field + ": expected true/false, got '" + tok + "'");
}

// Splits on commas and/or whitespace.
std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

const char* kBuiltinNames[] = {"circle", "ellipse", "rose3",
                               "curve3d", "square", "arc_on_plane"};

bool is_builtin(const std::string& name) {
    for (const char* n : kBuiltinNames)
        if (name == n) return true;
    return false;
}

void set_contour(RunConfig& cfg, const std::string& where,
                 const std::string& value) {
    std::string name = value;
    std::string params;
    size_t colon = value.find(':');
    if (colon != std::string::npos) {
        name = trim(value.substr(0, colon));
        params = value.substr(colon + 1);
    }
    if (!is_builtin(name))
        value_fail(where, "contour", "unknown contour name '" + name + "'");
    cfg.contour_name = name;
    cfg.contour_params.clear();
    cfg.fourier_cos.clear();
    cfg.fourier_sin.clear();
    for (const auto& tok : split_list(params))
        cfg.contour_params.push_back(parse_double(where, "contour", tok));
    size_t np = cfg.contour_params.size();
    if (name == "ellipse") {
        if (np > 2) value_fail(where, "contour", "ellipse takes at most a, b");
    } else if (name == "arc_on_plane") {
        if (np > 1)
            value_fail(where, "contour", "arc_on_plane takes at most alpha");
    } else if (np != 0) {
        value_fail(where, "contour", name + " takes no parameters");
    }
}

void set_triangulation(RunConfig& cfg, const std::string& where,
                       const std::string& value) {
    if (value == "T1" || value == "T2") {
        cfg.triangulation = value;
        return;
    }
    if (value.rfind("rings:", 0) == 0) {
        long n = parse_int(where, "triangulation", value.substr(6));
        if (n < 1)
            value_fail(where, "triangulation", "ring count must be >= 1");
        cfg.triangulation = value;
        return;
    }
    if (value.rfind("file:", 0) == 0) {
        if (trim(value.substr(5)).empty())
            value_fail(where, "triangulation", "empty mesh file path");
        cfg.triangulation = value;
        return;
    }
    value_fail(where, "triangulation",
               "expected T1, T2, rings:N or file:PATH, got '" + value + "'");
}

void set_fixed_points(RunConfig& cfg, const std::string& where,
                      const std::string& value) {
    cfg.solver.fixed_points.clear();
    for (const auto& entry : split_list(value)) {
        size_t colon = entry.find(':');
        if (colon == std::string::npos)
            parse_fail(where, "fixed_points: expected pos:param, got '" +
                                  entry + "'");
        FixedPoint fp;
        fp.boundary_pos = static_cast<int>(
            parse_int(where, "fixed_points", entry.substr(0, colon)));
        fp.param = parse_double(where, "fixed_points", entry.substr(colon + 1));
        cfg.solver.fixed_points.push_back(fp);
    }
    if (cfg.solver.fixed_points.size() != 3)
        value_fail(where, "fixed_points", "exactly three pins required");
}

// Applies one top-level key.  Returns false for an unrecognized key.
bool apply_key(RunConfig& cfg, const std::string& where, const std::string& key,
               const std::string& value) {
    if (key == "contour") {
        set_contour(cfg, where, value);
    } else if (key == "triangulation") {
        set_triangulation(cfg, where, value);
    } else if (key == "strategy") {
        if (value == "none")
            cfg.solver.strategy = RefineStrategy::None;
        else if (value == "bisect")
            cfg.solver.strategy = RefineStrategy::Bisect;
        else if (value == "regular")
            cfg.solver.strategy = RefineStrategy::Regular;
        else
            value_fail(where, "strategy",
                       "expected none, bisect or regular, got '" + value + "'");
    } else if (key == "metric") {
        if (value == "distance")
            cfg.solver.metric = DefectMetric::Distance;
        else if (value == "angle")
            cfg.solver.metric = DefectMetric::Angle;
        else
            value_fail(where, "metric",
                       "expected distance or angle, got '" + value + "'");
    } else if (key == "tol") {
        cfg.solver.tol = parse_double(where, key, value);
        if (!(cfg.solver.tol > 0.0)) value_fail(where, key, "must be positive");
    } else if (key == "max_iter") {
        cfg.solver.max_iter = static_cast<int>(parse_int(where, key, value));
        if (cfg.solver.max_iter < 1)
            value_fail(where, key, "must be at least 1");
    } else if (key == "check_interval") {
        cfg.solver.check_interval =
            static_cast<int>(parse_int(where, key, value));
        if (cfg.solver.check_interval < 1)
            value_fail(where, key, "must be at least 1");
    } else if (key == "tau") {
        cfg.solver.tau = parse_double(where, key, value);
        if (!(cfg.solver.tau > 0.0)) value_fail(where, key, "must be positive");
    } else if (key == "max_insertions") {
        cfg.solver.max_insertions =
            static_cast<int>(parse_int(where, key, value));
    } else if (key == "verbose") {
        cfg.solver.verbose = parse_bool(where, key, value);
    } else if (key == "fixed_points") {
        set_fixed_points(cfg, where, value);
    } else if (key == "out") {
        cfg.out_dir = value;
    } else if (key == "export_surface") {
        cfg.export_surface = parse_bool(where, key, value);
    } else if (key == "export_boundary") {
        cfg.export_boundary = parse_bool(where, key, value);
    } else if (key == "export_log") {
        cfg.export_log = parse_bool(where, key, value);
    } else if (key == "seed") {
        cfg.seed = static_cast<unsigned>(parse_int(where, key, value));
    } else {
        return false;
    }
    return true;
}

} // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    bool in_contour_section = false;
    bool saw_contour_key = false;
    std::vector<std::vector<double>> cos_lists, sin_lists;
    std::string fourier_where;

    auto ensure_coord = [&](size_t idx) {
        if (cos_lists.size() <= idx) cos_lists.resize(idx + 1);
        if (sin_lists.size() <= idx) sin_lists.resize(idx + 1);
    };

    while (std::getline(in, raw)) {
        ++line;
        std::string where = "line " + std::to_string(line);
        std::string s = raw;
        size_t hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s == "[contour]") {
                in_contour_section = true;
                continue;
            }
            parse_fail(where, "unknown section '" + s + "'");
        }
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            parse_fail(where, "expected key = value, got '" + s + "'");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (key.empty()) parse_fail(where, "missing key");
        if (value.empty()) parse_fail(where, key + ": missing value");

        if (in_contour_section) {
            if (key.size() == 4 &&
                (key.rfind("cos", 0) == 0 || key.rfind("sin", 0) == 0) &&
                key[3] >= '0' && key[3] <= '2') {
                size_t coord = static_cast<size_t>(key[3] - '0');
                ensure_coord(coord);
                auto& dst = key[0] == 'c' ? cos_lists[coord] : sin_lists[coord];
                if (!dst.empty()) parse_fail(where, key + ": duplicate key");
                for (const auto& tok : split_list(value))
                    dst.push_back(parse_double(where, key, tok));
                if (dst.empty()) parse_fail(where, key + ": empty list");
                fourier_where = where;
                continue;
            }
            parse_fail(where, "unknown contour key '" + key + "'");
        }

        if (!apply_key(cfg, where, key, value))
            parse_fail(where, "unknown key '" + key + "'");
        if (key == "contour") saw_contour_key = true;
    }

    bool have_fourier = !cos_lists.empty() || !sin_lists.empty();
    if (have_fourier) {
        if (saw_contour_key)
            value_fail(fourier_where, "contour",
                       "both a named contour and a [contour] section given");
        size_t coords = std::max(cos_lists.size(), sin_lists.size());
        if (coords < 2)
            value_fail(fourier_where, "contour",
                       "a Fourier contour needs at least coordinates 0 and 1");
        cos_lists.resize(coords);
        sin_lists.resize(coords);
        size_t length = 0;
        for (size_t c = 0; c < coords; ++c)
            length =
                std::max({length, cos_lists[c].size(), sin_lists[c].size()});
        if (length < 2)
            value_fail(fourier_where, "contour",
                       "coefficient lists must reach harmonic 1");
        for (size_t c = 0; c < coords; ++c) {
            for (auto* list : {&cos_lists[c], &sin_lists[c]}) {
                if (list->empty()) continue; // omitted list: all zero
                if (list->size() != length)
                    value_fail(fourier_where, "contour",
                               "coefficient lists must all have the same "
                               "length");
            }
            cos_lists[c].resize(length, 0.0);
            sin_lists[c].resize(length, 0.0);
        }
        cfg.contour_name = "fourier";
        cfg.fourier_cos = std::move(cos_lists);
        cfg.fourier_sin = std::move(sin_lists);
    } else if (!saw_contour_key) {
        throw ValidationError("contour: required (no contour key and no "
                              "[contour] section)");
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void apply_override(RunConfig& cfg, const std::string& key,
                    const std::string& value) {
    std::string where = "option --" + key;
    if (!apply_key(cfg, where, key, value))
        parse_fail(where, "unknown key");
}

ContourHandle make_contour(const RunConfig& config) {
    ContourHandle handle;
    if (config.contour_name == "fourier") {
        handle.curve = std::make_unique<FourierCurve>(config.fourier_cos,
                                                      config.fourier_sin);
        return handle;
    }
    if (config.contour_name == "arc_on_plane") {
        double alpha = config.contour_params.empty()
                           ? 3.14159265358979323846
                           : config.contour_params[0];
        handle.free_boundary =
            std::make_unique<FreeBoundaryContour>(make_arc_on_plane(alpha));
        return handle;
    }
    handle.curve =
        make_builtin_curve(config.contour_name, config.contour_params);
    return handle;
}

DiskMesh make_triangulation(const RunConfig& config) {
    const std::string& t = config.triangulation;
    if (t == "T1") return generate_disk_mesh(TriangulationPreset::t1());
    if (t == "T2") return generate_disk_mesh(TriangulationPreset::t2());
    if (t.rfind("rings:", 0) == 0) {
        int n = std::stoi(t.substr(6));
        return generate_disk_mesh(TriangulationPreset::rings(n));
    }
    if (t.rfind("file:", 0) == 0) return load_mesh_file(t.substr(5));
    throw ValidationError("triangulation: unrecognized value '" + t + "'");
}

} // namespace minsurf
