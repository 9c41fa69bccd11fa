#include "qd/masses.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "qd/errors.hpp"

namespace qd {

using json = nlohmann::json;

double MassTable::j_max() const {
    double m = 0.0;
    for (const auto& row : vertex) m = std::max(m, *std::max_element(row.begin(), row.end()));
    for (const auto& row : plaquette) m = std::max(m, *std::max_element(row.begin(), row.end()));
    return m;
}

MassTable MassTable::scaled(double c) const {
    MassTable out = *this;
    for (auto& row : out.vertex)
        for (double& j : row) j *= c;
    for (auto& row : out.plaquette)
        for (double& j : row) j *= c;
    return out;
}

static void check_row(const std::vector<double>& row, int d) {
    if ((int)row.size() != d) throw validation_error("mass list must have exactly d entries");
    if (row[0] != 0.0) throw validation_error("vacuum mass J^0 must be 0");
    for (double j : row)
        if (!(j >= 0.0)) throw validation_error("masses must be finite and >= 0");
}

MassTable uniform_masses(int d, int n_sites, const std::vector<double>& charges) {
    check_row(charges, d);
    MassTable m;
    m.d = d;
    m.vertex.assign(n_sites, charges);
    m.plaquette.assign(n_sites, charges);
    return m;
}

MassTable uniform_masses(int d, int n_sites, double j) {
    std::vector<double> row(d, j);
    row[0] = 0.0;
    return uniform_masses(d, n_sites, row);
}

static std::vector<std::vector<double>> parse_sector(const json& sec, int d, int n_sites, const std::string& name) {
    if (!sec.is_object() || !sec.contains("default"))
        throw validation_error(name + " must be an object with a \"default\" mass list");
    std::vector<double> def = sec.at("default").get<std::vector<double>>();
    check_row(def, d);
    std::vector<std::vector<double>> rows(n_sites, def);
    if (sec.contains("overrides")) {
        for (auto it = sec.at("overrides").begin(); it != sec.at("overrides").end(); ++it) {
            int site;
            try {
                site = std::stoi(it.key());
            } catch (const std::exception&) {
                throw validation_error("override key '" + it.key() + "' is not a site index");
            }
            if (site < 0 || site >= n_sites) throw validation_error("override site " + it.key() + " out of range");
            std::vector<double> row = it.value().get<std::vector<double>>();
            check_row(row, d);
            rows[site] = row;
        }
    }
    return rows;
}

MassTable masses_from_json(const std::string& json_text, int n_sites) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw validation_error(std::string("mass table JSON parse error: ") + e.what());
    }
    try {
        MassTable m;
        m.d = j.at("d").get<int>();
        if (m.d < 2) throw validation_error("qudit dimension must be >= 2");
        m.vertex = parse_sector(j.at("vertex_masses"), m.d, n_sites, "vertex_masses");
        m.plaquette = parse_sector(j.at("plaquette_masses"), m.d, n_sites, "plaquette_masses");
        return m;
    } catch (const json::exception& e) {
        throw validation_error(std::string("mass table JSON: ") + e.what());
    }
}

std::string masses_to_json(const MassTable& m) {
    // emitted with explicit per-site overrides; fine for the small lattices here
    json sec_v, sec_p;
    sec_v["default"] = m.vertex.empty() ? std::vector<double>{} : m.vertex[0];
    sec_p["default"] = m.plaquette.empty() ? std::vector<double>{} : m.plaquette[0];
    json ov_v = json::object(), ov_p = json::object();
    for (std::size_t s = 0; s < m.vertex.size(); ++s)
        if (m.vertex[s] != m.vertex[0]) ov_v[std::to_string(s)] = m.vertex[s];
    for (std::size_t s = 0; s < m.plaquette.size(); ++s)
        if (m.plaquette[s] != m.plaquette[0]) ov_p[std::to_string(s)] = m.plaquette[s];
    if (!ov_v.empty()) sec_v["overrides"] = ov_v;
    if (!ov_p.empty()) sec_p["overrides"] = ov_p;
    json out;
    out["d"] = m.d;
    out["vertex_masses"] = sec_v;
    out["plaquette_masses"] = sec_p;
    return out.dump(2);
}

}  // namespace qd
