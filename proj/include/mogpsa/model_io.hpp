#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "mogpsa/beam_fe.hpp"
#include "mogpsa/errors.hpp"
#include "mogpsa/modal.hpp"

// JSON model files.
//
//   {
//     "theory": "euler_bernoulli" | "timoshenko",
//     "boundary": "clamped" | "free",
//     "nodes": [s_0, ..., s_n]              or  "uniform": {"elements": n, "length": L},
//     "default_section": {...},              optional, applies to every element
//     "sections": [{"elements": [first, last], ...}],  1-based inclusive ranges, later wins
//     "point_masses": [{"node": i, "mass": kg}]
//   }
//
// Section keys: youngs_modulus, density, area, area_moment, width, thickness,
// shear_modulus, shear_constant, extra_linear_density. `area`/`area_moment`
// default to w t and w t^3 / 12 when width and thickness are given.

namespace mogpsa {

using json = nlohmann::json;

namespace detail {

inline void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where)
{
    if (!j.is_object()) throw InvalidInput(where + ": expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items())
        if (!ok.contains(key)) throw InvalidInput(where + ": unknown key '" + key + "'");
}

inline json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidInput("'" + path + "': " + e.what());
    }
}

inline void write_json_file(const std::string& path, const json& j)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed for '" + path + "'");
}

inline json merged(json base, const json& overrides)
{
    for (const auto& [k, v] : overrides.items()) base[k] = v;
    return base;
}

inline SectionMaterial section_from_json(const json& j, const std::string& where)
{
    reject_unknown_keys(j,
                        {"elements", "youngs_modulus", "density", "area", "area_moment", "width", "thickness",
                         "shear_modulus", "shear_constant", "extra_linear_density"},
                        where);
    auto get = [&](const char* key) -> double {
        if (!j.contains(key)) throw InvalidInput(where + ": missing '" + key + "'");
        return j.at(key).get<double>();
    };
    SectionMaterial s;
    s.youngs_modulus = get("youngs_modulus");
    s.density = get("density");
    const bool rect = j.contains("width") && j.contains("thickness");
    if (rect) {
        const auto r = SectionMaterial::rectangular(s.youngs_modulus, s.density, get("width"), get("thickness"));
        s.area = r.area;
        s.area_moment = r.area_moment;
    }
    if (j.contains("area")) s.area = get("area");
    if (j.contains("area_moment")) s.area_moment = get("area_moment");
    if (!rect && (!j.contains("area") || !j.contains("area_moment")))
        throw InvalidInput(where + ": need area and area_moment, or width and thickness");
    s.shear_modulus = j.value("shear_modulus", 0.0);
    s.shear_constant = j.value("shear_constant", 0.0);
    s.extra_linear_density = j.value("extra_linear_density", 0.0);
    return s;
}

inline json section_to_json(const SectionMaterial& s)
{
    json j{{"youngs_modulus", s.youngs_modulus},
           {"density", s.density},
           {"area", s.area},
           {"area_moment", s.area_moment}};
    if (s.shear_modulus != 0.0) j["shear_modulus"] = s.shear_modulus;
    if (s.shear_constant != 0.0) j["shear_constant"] = s.shear_constant;
    if (s.extra_linear_density != 0.0) j["extra_linear_density"] = s.extra_linear_density;
    return j;
}

inline bool same_section(const SectionMaterial& a, const SectionMaterial& b)
{
    return a.youngs_modulus == b.youngs_modulus && a.density == b.density && a.area == b.area &&
           a.area_moment == b.area_moment && a.shear_modulus == b.shear_modulus &&
           a.shear_constant == b.shear_constant && a.extra_linear_density == b.extra_linear_density;
}

} // namespace detail

inline BeamModel model_from_json(const json& j)
try {
    detail::reject_unknown_keys(j, {"theory", "boundary", "nodes", "uniform", "default_section", "sections",
                                    "point_masses", "note"},
                                "model");
    BeamModel m;
    const auto theory = j.value("theory", std::string("euler_bernoulli"));
    if (theory == "euler_bernoulli")
        m.theory = BeamTheory::EulerBernoulli;
    else if (theory == "timoshenko")
        m.theory = BeamTheory::Timoshenko;
    else
        throw InvalidInput("model: unknown theory '" + theory + "'");
    const auto boundary = j.value("boundary", std::string("clamped"));
    if (boundary == "clamped")
        m.boundary = Boundary::ClampedAtNodeZero;
    else if (boundary == "free")
        m.boundary = Boundary::Free;
    else
        throw InvalidInput("model: unknown boundary '" + boundary + "'");

    if (j.contains("nodes") == j.contains("uniform"))
        throw InvalidInput("model: give exactly one of 'nodes' or 'uniform'");
    if (j.contains("nodes")) {
        m.node_positions = j.at("nodes").get<std::vector<double>>();
    } else {
        const auto& u = j.at("uniform");
        detail::reject_unknown_keys(u, {"elements", "length"}, "model.uniform");
        const auto n = u.at("elements").get<std::size_t>();
        const double length = u.at("length").get<double>();
        if (n == 0) throw InvalidInput("model.uniform: elements must be >= 1");
        for (std::size_t i = 0; i <= n; ++i)
            m.node_positions.push_back(length * static_cast<double>(i) / static_cast<double>(n));
    }
    if (m.node_positions.size() < 2) throw InvalidInput("model: need at least two nodes");
    const std::size_t n = m.node_positions.size() - 1;

    std::vector<json> per_element(n, json::object());
    std::vector<bool> covered(n, false);
    if (j.contains("default_section")) {
        for (auto& e : per_element) e = j.at("default_section");
        covered.assign(n, true);
    }
    if (j.contains("sections")) {
        for (const auto& sec : j.at("sections")) {
            const auto range = sec.at("elements").get<std::vector<std::size_t>>();
            if (range.size() != 2 || range[0] < 1 || range[1] < range[0] || range[1] > n)
                throw InvalidInput("model.sections: bad element range");
            json props = sec;
            props.erase("elements");
            for (std::size_t e = range[0] - 1; e < range[1]; ++e) {
                per_element[e] = detail::merged(per_element[e], props);
                covered[e] = true;
            }
        }
    }
    for (std::size_t e = 0; e < n; ++e) {
        if (!covered[e]) throw InvalidInput("model: element " + std::to_string(e + 1) + " has no section");
        m.sections.push_back(detail::section_from_json(per_element[e], "model element " + std::to_string(e + 1)));
    }
    if (j.contains("point_masses"))
        for (const auto& pm : j.at("point_masses")) {
            detail::reject_unknown_keys(pm, {"node", "mass"}, "model.point_masses");
            m.point_masses.push_back({pm.at("node").get<std::size_t>(), pm.at("mass").get<double>()});
        }
    m.validate();
    return m;
} catch (const json::exception& e) {
    throw InvalidInput(std::string("model: ") + e.what());
}

/// Writes consecutive equal sections as one range.
inline json model_to_json(const BeamModel& m)
{
    json j;
    j["theory"] = m.theory == BeamTheory::EulerBernoulli ? "euler_bernoulli" : "timoshenko";
    j["boundary"] = m.boundary == Boundary::ClampedAtNodeZero ? "clamped" : "free";
    j["nodes"] = m.node_positions;
    json sections = json::array();
    for (std::size_t e = 0; e < m.sections.size();) {
        std::size_t last = e;
        while (last + 1 < m.sections.size() && detail::same_section(m.sections[last + 1], m.sections[e])) ++last;
        json s = detail::section_to_json(m.sections[e]);
        s["elements"] = {e + 1, last + 1};
        sections.push_back(std::move(s));
        e = last + 1;
    }
    j["sections"] = std::move(sections);
    json masses = json::array();
    for (const auto& pm : m.point_masses) masses.push_back({{"node", pm.node}, {"mass", pm.mass}});
    j["point_masses"] = std::move(masses);
    return j;
}

inline BeamModel load_model(const std::string& path)
{
    try {
        return model_from_json(detail::read_json_file(path));
    } catch (const json::exception& e) {
        throw InvalidInput("'" + path + "': " + e.what());
    } catch (const InvalidInput& e) {
        throw InvalidInput("'" + path + "': " + e.what());
    }
}

inline void save_model(const std::string& path, const BeamModel& m) { detail::write_json_file(path, model_to_json(m)); }

/// Declarative description of the laboratory cantilever: a rectangular steel
/// beam carrying screwed-on fishplates (one or two per element where they
/// overlap), sensor point masses and a uniform screw mass.
struct CantileverLayout {
    std::size_t elements = 241;
    double element_length = 0.005;
    double youngs_modulus = 127e9;
    double density = 7800.0;
    double beam_width = 0.060;
    double beam_height = 0.00515;
    double fishplate_width = 0.002;
    double fishplate_height = 0.00485;
    /// 1-based inclusive element ranges covered by each fishplate.
    std::vector<std::pair<std::size_t, std::size_t>> fishplates;
    std::size_t sensor_count = 15;
    double sensor_mass = 0.006;
    double screw_linear_density = 0.05;

    /// Best-effort reconstruction of the lab beam: nine 130 mm plates centred on
    /// elements 15, 39, ..., 207, overlapping their neighbours by two elements.
    /// Sensor and screw masses are plausible values, not measured ones.
    static CantileverLayout laboratory()
    {
        CantileverLayout l;
        for (std::size_t i = 0; i < 9; ++i) {
            const std::size_t centre = 15 + 24 * i;
            l.fishplates.emplace_back(centre - 12, centre + 13);
        }
        return l;
    }

    SensorLayout sensors() const { return SensorLayout::uniform(elements, sensor_count); }
};

/// Euler-Bernoulli clamped cantilever built from `layout`.
inline BeamModel make_cantilever_model(const CantileverLayout& layout = CantileverLayout::laboratory())
{
    const auto beam = SectionMaterial::rectangular(layout.youngs_modulus, layout.density, layout.beam_width,
                                                   layout.beam_height);
    const auto plate = SectionMaterial::rectangular(layout.youngs_modulus, layout.density, layout.fishplate_width,
                                                    layout.fishplate_height);
    BeamModel m = BeamModel::uniform(layout.elements, layout.element_length * static_cast<double>(layout.elements),
                                     beam);
    for (std::size_t i = 0; i <= layout.elements; ++i)
        m.node_positions[i] = layout.element_length * static_cast<double>(i);
    std::vector<int> plates(layout.elements, 0);
    for (const auto& [first, last] : layout.fishplates) {
        if (first < 1 || last < first || last > layout.elements)
            throw InvalidInput("cantilever layout: bad fishplate range");
        for (std::size_t e = first - 1; e < last; ++e) ++plates[e];
    }
    for (std::size_t e = 0; e < layout.elements; ++e) {
        auto& s = m.sections[e];
        s.area = beam.area + plates[e] * plate.area;
        s.area_moment = beam.area_moment + plates[e] * plate.area_moment;
        s.extra_linear_density = layout.screw_linear_density;
    }
    for (auto node : layout.sensors().nodes) m.point_masses.push_back({node, layout.sensor_mass});
    m.validate();
    return m;
}

inline CantileverLayout cantilever_layout_from_json(const json& j)
try {
    detail::reject_unknown_keys(j, {"elements", "element_length", "youngs_modulus", "density", "beam_width",
                                    "beam_height", "fishplate_width", "fishplate_height", "fishplates",
                                    "sensor_count", "sensor_mass", "screw_linear_density", "note"},
                                "cantilever layout");
    CantileverLayout l = CantileverLayout::laboratory();
    l.elements = j.value("elements", l.elements);
    l.element_length = j.value("element_length", l.element_length);
    l.youngs_modulus = j.value("youngs_modulus", l.youngs_modulus);
    l.density = j.value("density", l.density);
    l.beam_width = j.value("beam_width", l.beam_width);
    l.beam_height = j.value("beam_height", l.beam_height);
    l.fishplate_width = j.value("fishplate_width", l.fishplate_width);
    l.fishplate_height = j.value("fishplate_height", l.fishplate_height);
    if (j.contains("fishplates")) {
        l.fishplates.clear();
        for (const auto& f : j.at("fishplates")) {
            const auto r = f.get<std::vector<std::size_t>>();
            if (r.size() != 2) throw InvalidInput("cantilever layout: fishplate needs [first, last]");
            l.fishplates.emplace_back(r[0], r[1]);
        }
    }
    l.sensor_count = j.value("sensor_count", l.sensor_count);
    l.sensor_mass = j.value("sensor_mass", l.sensor_mass);
    l.screw_linear_density = j.value("screw_linear_density", l.screw_linear_density);
    return l;
} catch (const json::exception& e) {
    throw InvalidInput(std::string("cantilever layout: ") + e.what());
}

inline json cantilever_layout_to_json(const CantileverLayout& l)
{
    json plates = json::array();
    for (const auto& [a, b] : l.fishplates) plates.push_back({a, b});
    return json{{"elements", l.elements},
                {"element_length", l.element_length},
                {"youngs_modulus", l.youngs_modulus},
                {"density", l.density},
                {"beam_width", l.beam_width},
                {"beam_height", l.beam_height},
                {"fishplate_width", l.fishplate_width},
                {"fishplate_height", l.fishplate_height},
                {"fishplates", plates},
                {"sensor_count", l.sensor_count},
                {"sensor_mass", l.sensor_mass},
                {"screw_linear_density", l.screw_linear_density}};
}

} // namespace mogpsa
