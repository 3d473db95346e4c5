#include "rigidemt/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rigidemt/errors.hpp"

namespace rigidemt {

using nlohmann::json;

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << content;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

json parse_or_throw(const std::string& text, const std::string& origin) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) {
        throw ValidationError(origin + ": not valid JSON");
    }
    return j;
}

double number_field(const json& j, const std::string& key, const std::string& origin) {
    if (!j.contains(key)) throw ValidationError(origin + ": missing field \"" + key + "\"");
    if (!j[key].is_number()) throw ValidationError(origin + ": field \"" + key + "\" must be a number");
    return j[key].get<double>();
}

} // namespace

ExteriorMap parse_shape_json(const std::string& text, const std::string& origin) {
    const json j = parse_or_throw(text, origin);
    if (!j.is_object()) throw ValidationError(origin + ": shape file must be a JSON object");
    ExteriorMap map;
    map.gamma = number_field(j, "gamma", origin);
    if (!(map.gamma > 0.0)) throw ValidationError(origin + ": \"gamma\" must be positive");
    if (j.contains("a")) {
        if (!j["a"].is_array()) throw ValidationError(origin + ": field \"a\" must be an array");
        int idx = 0;
        for (const auto& e : j["a"]) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
                throw ValidationError(origin + ": \"a\"[" + std::to_string(idx) +
                                      "] must be a [re, im] pair");
            }
            map.a.emplace_back(e[0].get<double>(), e[1].get<double>());
            ++idx;
        }
    }
    return map;
}

ExteriorMap read_shape(const std::string& path) {
    return parse_shape_json(read_text_file(path), path);
}

std::string shape_to_json(const ExteriorMap& map) {
    json j;
    j["gamma"] = map.gamma;
    j["a"] = json::array();
    for (const auto& c : map.a) j["a"].push_back({c.real(), c.imag()});
    return j.dump(2);
}

LameMaterial parse_material_json(const std::string& text, const std::string& origin) {
    const json j = parse_or_throw(text, origin);
    if (!j.is_object()) throw ValidationError(origin + ": material file must be a JSON object");
    const double lambda = number_field(j, "lambda", origin);
    const double mu = number_field(j, "mu", origin);
    KappaConvention conv = KappaConvention::PlaneStrain;
    if (j.contains("kappa_convention")) {
        const std::string s = j["kappa_convention"].get<std::string>();
        if (s == "plane_strain") {
            conv = KappaConvention::PlaneStrain;
        } else if (s == "plane_stress") {
            conv = KappaConvention::PlaneStress;
        } else {
            throw ValidationError(origin + ": \"kappa_convention\" must be plane_strain or plane_stress");
        }
    }
    try {
        return make_material(lambda, mu, conv);
    } catch (const ValidationError& e) {
        throw ValidationError(origin + ": " + e.what());
    }
}

LameMaterial read_material(const std::string& path) {
    return parse_material_json(read_text_file(path), path);
}

Eigen::Matrix3d read_s_matrix(const std::string& path) {
    const json j = parse_or_throw(read_text_file(path), path);
    const json* rows = nullptr;
    if (j.is_array()) {
        rows = &j;
    } else if (j.is_object() && j.contains("s")) {
        rows = &j["s"];
    } else {
        throw ValidationError(path + ": expected a 3x3 array or an object with field \"s\"");
    }
    if (!rows->is_array() || rows->size() != 3) {
        throw ValidationError(path + ": S must have exactly 3 rows");
    }
    Eigen::Matrix3d s;
    for (int r = 0; r < 3; ++r) {
        const auto& row = (*rows)[static_cast<size_t>(r)];
        if (!row.is_array() || row.size() != 3) {
            throw ValidationError(path + ": S row " + std::to_string(r) + " must have 3 entries");
        }
        for (int c = 0; c < 3; ++c) {
            if (!row[static_cast<size_t>(c)].is_number()) {
                throw ValidationError(path + ": S entry (" + std::to_string(r) + "," +
                                      std::to_string(c) + ") must be a number");
            }
            s(r, c) = row[static_cast<size_t>(c)].get<double>();
        }
    }
    return s;
}

std::string density_to_json(const DensityCoefficients& dc) {
    json j;
    j["loading"] = dc.loading.name();
    json c = json::object();
    for (const auto& [m, cm] : dc.c) {
        c[std::to_string(m)] = {cm.real(), cm.imag()};
    }
    j["c"] = c;
    j["b"] = {dc.b1, dc.b2, dc.b3};
    j["residual"] = dc.residual;
    j["map_degree"] = dc.map_degree;
    j["extra_support"] = dc.extra_support;
    return j.dump(2);
}

} // namespace rigidemt
