#include "qd/defects.hpp"

#include <deque>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qd/barrier.hpp"
#include "qd/errors.hpp"

namespace qd {

namespace {

// Multiply the canonical-crossing multiplier of the qudit cut by one line
// step. For each step direction the cut qudit and whether the canonical
// (minus -> plus) anyon flow runs along the rotated step direction follow
// from the lattice sign tables.
void apply_line_step(std::vector<int>& mult, const TorusLattice& lat, Sector sec, int ax,
                     int ay, int bx, int by, int m, int m_inv, int d) {
    int dx = bx - ax, dy = by - ay;
    if (dx * dx + dy * dy != 1)
        throw validation_error("defect line points must differ by one unit step");
    int q = -1, factor = 1;
    if (sec == Sector::chargeon) {
        // dual walk; canonical chargeon flow is west across H, north across V
        if (dx == 1) {  // along = north = canonical across V
            q = lat.edge_v(ax + 1, ay);
            factor = m;
        } else if (dx == -1) {
            q = lat.edge_v(ax, ay);
            factor = m_inv;
        } else if (dy == 1) {  // along = west = canonical across H
            q = lat.edge_h(ax, ay + 1);
            factor = m;
        } else {
            q = lat.edge_h(ax, ay);
            factor = m_inv;
        }
    } else {
        // primal walk; canonical fluxon flow is south across H, west across V
        if (dx == 1) {  // along = north, against the southward canonical flow
            q = lat.edge_h(ax, ay);
            factor = m_inv;
        } else if (dx == -1) {
            q = lat.edge_h(ax - 1, ay);
            factor = m;
        } else if (dy == 1) {  // along = west = canonical across V
            q = lat.edge_v(ax, ay);
            factor = m;
        } else {
            q = lat.edge_v(ax, ay - 1);
            factor = m_inv;
        }
    }
    mult[q] = mod_d(static_cast<long long>(mult[q]) * factor, d);
}

struct SectorMults {
    std::vector<int> z, x;
};

SectorMults compile_mults(const DefectConfig& cfg, const TorusLattice& lat) {
    if (cfg.d != lat.d()) throw validation_error("defect config dimension does not match lattice");
    SectorMults sm;
    sm.z.assign(lat.n_qudits(), 1);
    sm.x.assign(lat.n_qudits(), 1);
    for (const auto& line : cfg.lines) {
        int m = mod_d(line.m, cfg.d);
        int m_inv = mod_inverse(m, cfg.d);  // throws on non-invertible M
        if (line.points.size() < 2)
            throw validation_error("defect line needs at least two points");
        auto& mult = line.sector == Sector::chargeon ? sm.z : sm.x;
        for (std::size_t i = 0; i + 1 < line.points.size(); ++i)
            apply_line_step(mult, lat, line.sector, line.points[i].first,
                            line.points[i].second, line.points[i + 1].first,
                            line.points[i + 1].second, m, m_inv, cfg.d);
    }
    return sm;
}

// BFS labels from site 0 across the sector's anyon graph; every edge must
// then satisfy L[plus] = mult[q] * L[minus].
std::vector<int> propagate_labels(const std::vector<int>& mult, const TorusLattice& lat,
                                  Sector sec, int d, std::vector<std::string>* violations) {
    const char* name = sec == Sector::chargeon ? "chargeon" : "fluxon";
    std::vector<int> label(lat.n_sites(sec), 0);
    label[0] = 1;
    std::deque<int> bfs{0};
    std::vector<std::vector<std::pair<int, int>>> adj(lat.n_sites(sec));  // (qudit, other)
    for (int q = 0; q < lat.n_qudits(); ++q) {
        adj[lat.site_minus(q, sec)].push_back({q, lat.site_plus(q, sec)});
        adj[lat.site_plus(q, sec)].push_back({q, lat.site_minus(q, sec)});
    }
    while (!bfs.empty()) {
        int u = bfs.front();
        bfs.pop_front();
        for (auto [q, v] : adj[u]) {
            if (label[v] != 0) continue;
            bool canonical = u == lat.site_minus(q, sec);
            label[v] = canonical ? mod_d(static_cast<long long>(mult[q]) * label[u], d)
                                 : mod_d(static_cast<long long>(mod_inverse(mult[q], d)) * label[u], d);
            bfs.push_back(v);
        }
    }
    for (int q = 0; q < lat.n_qudits(); ++q) {
        int lhs = label[lat.site_plus(q, sec)];
        int rhs = mod_d(static_cast<long long>(mult[q]) * label[lat.site_minus(q, sec)], d);
        if (lhs != rhs && violations)
            violations->push_back(std::string(name) + " label mismatch across qudit " +
                                  std::to_string(q));
    }
    return label;
}

void check_faces(const SectorMults& sm, const TorusLattice& lat, int d,
                 std::vector<std::string>& violations) {
    auto inv = [&](int a) { return mod_inverse(a, d); };
    // chargeon loops around each plaquette: E over H(x,y) against, N over
    // V(x+1,y) canonical, W over H(x,y+1) canonical, S over V(x,y) against
    for (int y = 0; y < lat.ly(); ++y) {
        for (int x = 0; x < lat.lx(); ++x) {
            long long h = 1;
            h = mod_d(h * inv(sm.z[lat.edge_h(x, y)]), d);
            h = mod_d(h * sm.z[lat.edge_v(x + 1, y)], d);
            h = mod_d(h * sm.z[lat.edge_h(x, y + 1)], d);
            h = mod_d(h * inv(sm.z[lat.edge_v(x, y)]), d);
            if (h != 1)
                violations.push_back("chargeon loop around plaquette (" + std::to_string(x) +
                                     "," + std::to_string(y) + ") has holonomy " +
                                     std::to_string(h));
        }
    }
    // fluxon loops around each vertex: W over V(x,y) canonical, S over
    // H(x-1,y) canonical, E over V(x,y-1) against, N over H(x,y) against
    for (int y = 0; y < lat.ly(); ++y) {
        for (int x = 0; x < lat.lx(); ++x) {
            long long h = 1;
            h = mod_d(h * sm.x[lat.edge_v(x, y)], d);
            h = mod_d(h * sm.x[lat.edge_h(x - 1, y)], d);
            h = mod_d(h * inv(sm.x[lat.edge_v(x, y - 1)]), d);
            h = mod_d(h * inv(sm.x[lat.edge_h(x, y)]), d);
            if (h != 1)
                violations.push_back("fluxon loop around vertex (" + std::to_string(x) + "," +
                                     std::to_string(y) + ") has holonomy " + std::to_string(h));
        }
    }
    // torus generators
    long long h = 1;
    for (int x = 0; x < lat.lx(); ++x) h = mod_d(h * inv(sm.z[lat.edge_h(x, 0)]), d);
    if (h != 1) violations.push_back("chargeon generator along y=0 has holonomy " + std::to_string(h));
    h = 1;
    for (int y = 0; y < lat.ly(); ++y) h = mod_d(h * sm.z[lat.edge_v(0, y)], d);
    if (h != 1) violations.push_back("chargeon generator along x=0 has holonomy " + std::to_string(h));
    h = 1;
    for (int x = 0; x < lat.lx(); ++x) h = mod_d(h * inv(sm.x[lat.edge_v(x + 1, 0)]), d);
    if (h != 1) violations.push_back("fluxon generator along y=0 has holonomy " + std::to_string(h));
    h = 1;
    for (int y = 0; y < lat.ly(); ++y) h = mod_d(h * inv(sm.x[lat.edge_h(0, y + 1)]), d);
    if (h != 1) violations.push_back("fluxon generator along x=0 has holonomy " + std::to_string(h));
}

}  // namespace

int crossing_action(int k, int m, bool along, int d) {
    int mm = mod_d(m, d);
    int inv = mod_inverse(mm, d);  // rejects non-invertible M in both directions
    int factor = along ? mm : inv;
    return mod_d(static_cast<long long>(factor) * mod_d(k, d), d);
}

ConsistencyReport validate_consistency(const DefectConfig& cfg, const TorusLattice& lat) {
    ConsistencyReport rep;
    SectorMults sm = compile_mults(cfg, lat);
    check_faces(sm, lat, cfg.d, rep.violations);
    propagate_labels(sm.z, lat, Sector::chargeon, cfg.d, &rep.violations);
    propagate_labels(sm.x, lat, Sector::fluxon, cfg.d, &rep.violations);
    rep.ok = rep.violations.empty();
    return rep;
}

CompiledDefects compile_defects(const DefectConfig& cfg, const TorusLattice& lat) {
    ConsistencyReport rep = validate_consistency(cfg, lat);
    if (!rep.ok) throw validation_error("inconsistent defect config: " + rep.violations.front());
    SectorMults sm = compile_mults(cfg, lat);
    CompiledDefects cd;
    cd.d = cfg.d;
    cd.mult_z = std::move(sm.z);
    cd.mult_x = std::move(sm.x);
    cd.label_z = propagate_labels(cd.mult_z, lat, Sector::chargeon, cfg.d, nullptr);
    cd.label_x = propagate_labels(cd.mult_x, lat, Sector::fluxon, cfg.d, nullptr);
    return cd;
}

std::pair<Syndrome, Syndrome> syndrome_with_defects(const PauliError& p,
                                                    const CompiledDefects& cd,
                                                    const TorusLattice& lat) {
    if (cd.d != lat.d()) throw validation_error("compiled defects do not match lattice");
    Syndrome free = lat.syndrome(p);
    Syndrome local = free, global = free;
    for (int v = 0; v < lat.n_vertices(); ++v) {
        local.a.set(v, mod_d(static_cast<long long>(cd.label_z[v]) * free.a[v], cd.d));
        global.a.set(v, mod_d(static_cast<long long>(mod_inverse(cd.label_z[v], cd.d)) * local.a[v], cd.d));
    }
    for (int pq = 0; pq < lat.n_plaquettes(); ++pq) {
        local.b.set(pq, mod_d(static_cast<long long>(cd.label_x[pq]) * free.b[pq], cd.d));
        global.b.set(pq, mod_d(static_cast<long long>(mod_inverse(cd.label_x[pq], cd.d)) * local.b[pq], cd.d));
    }
    return {local, global};
}

MassTable twisted_masses(const MassTable& m, const CompiledDefects& cd) {
    if (m.d != cd.d) throw validation_error("mass table dimension does not match defects");
    if (m.vertex.size() != cd.label_z.size() || m.plaquette.size() != cd.label_x.size())
        throw validation_error("mass table does not match defect label shape");
    MassTable out = m;
    for (std::size_t v = 0; v < m.vertex.size(); ++v)
        for (int k = 0; k < m.d; ++k)
            out.vertex[v][k] = m.vertex[v][mod_d(static_cast<long long>(cd.label_z[v]) * k, m.d)];
    for (std::size_t p = 0; p < m.plaquette.size(); ++p)
        for (int k = 0; k < m.d; ++k)
            out.plaquette[p][k] = m.plaquette[p][mod_d(static_cast<long long>(cd.label_x[p]) * k, m.d)];
    return out;
}

double barrier_with_defects(const PauliError& p, const DefectConfig& cfg,
                            const TorusLattice& lat, const MassTable& m) {
    CompiledDefects cd = compile_defects(cfg, lat);
    MassTable tw = twisted_masses(m, cd);
    auto path = schedule_path(p, lat, tw);
    double best = 0;
    for (double v : path.profile) best = std::max(best, v);
    return best;
}

DefectConfig make_brown_config(int lx, int ly, int variant) {
    DefectConfig cfg;
    cfg.d = 5;
    auto wrap_line = [&](int y, bool eastward, int m) {
        DefectLine line;
        line.sector = Sector::chargeon;
        line.m = m;
        if (eastward)
            for (int x = 0; x <= lx; ++x) line.points.push_back({x, y});
        else
            for (int x = lx; x >= 0; --x) line.points.push_back({x, y});
        return line;
    };
    if (variant == 0) {
        cfg.lines.push_back(wrap_line(0, true, 2));
        cfg.lines.push_back(wrap_line(ly / 2, false, 2));
    } else if (variant == 1) {
        for (int y = 0; y < ly; ++y) cfg.lines.push_back(wrap_line(y, true, 2));
    } else {
        throw validation_error("unknown brown config variant");
    }
    return cfg;
}

DefectConfig defects_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw validation_error(std::string("bad defect config JSON: ") + e.what());
    }
    DefectConfig cfg;
    if (!j.contains("d") || !j["d"].is_number_integer())
        throw validation_error("defect config needs an integer field d");
    cfg.d = j["d"].get<int>();
    for (const auto& jl : j.value("lines", nlohmann::json::array())) {
        DefectLine line;
        std::string sec = jl.value("sector", "chargeon");
        if (sec == "chargeon")
            line.sector = Sector::chargeon;
        else if (sec == "fluxon")
            line.sector = Sector::fluxon;
        else
            throw validation_error("defect line sector must be chargeon or fluxon");
        if (!jl.contains("M") || !jl["M"].is_number_integer())
            throw validation_error("defect line needs an integer field M");
        line.m = jl["M"].get<int>();
        if (!jl.contains("path") || !jl["path"].is_array())
            throw validation_error("defect line needs a path array");
        for (const auto& pt : jl["path"]) {
            if (!pt.is_array() || pt.size() != 2)
                throw validation_error("defect path points must be [x, y] pairs");
            line.points.push_back({pt[0].get<int>(), pt[1].get<int>()});
        }
        cfg.lines.push_back(std::move(line));
    }
    return cfg;
}

std::string defects_to_json(const DefectConfig& cfg) {
    nlohmann::json j;
    j["d"] = cfg.d;
    j["lines"] = nlohmann::json::array();
    for (const auto& line : cfg.lines) {
        nlohmann::json jl;
        jl["sector"] = line.sector == Sector::chargeon ? "chargeon" : "fluxon";
        jl["M"] = line.m;
        jl["path"] = nlohmann::json::array();
        for (auto [x, y] : line.points) jl["path"].push_back({x, y});
        j["lines"].push_back(std::move(jl));
    }
    return j.dump(2);
}

}  // namespace qd
