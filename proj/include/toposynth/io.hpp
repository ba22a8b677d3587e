#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "toposynth/delay_model.hpp"
#include "toposynth/overlay.hpp"
#include "toposynth/simulator.hpp"
#include "toposynth/training.hpp"

namespace toposynth {

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw parse_error(path + ": cannot open for writing");
    out << content;
    if (!out) throw parse_error(path + ": write failed");
}

/// Rejects members not in the allowed list, naming the offending field.
inline void check_fields(const nlohmann::json& obj, const std::string& where,
                         std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* name : allowed)
            if (it.key() == name) {
                ok = true;
                break;
            }
        if (!ok)
            throw parse_error(where + ": unknown field \"" + it.key() + "\"");
    }
}

inline double require_number(const nlohmann::json& obj, const std::string& where,
                             const char* field) {
    if (!obj.contains(field))
        throw parse_error(where + ": missing field \"" + field + "\"");
    if (!obj[field].is_number())
        throw parse_error(where + ": field \"" + field + "\" must be a number");
    return obj[field].get<double>();
}

} // namespace detail

/// Parses the canonical underlay JSON: {name, nodes:[{id, kind, lat, lon,
/// up_mbps?, down_mbps?, compute_ms?}], links:[{u, v, capacity_mbps,
/// latency_ms?}]}. Unknown fields are rejected.
inline Underlay parse_underlay_json(const std::string& text, const std::string& origin) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(origin + ": " + e.what());
    }
    if (!doc.is_object()) throw parse_error(origin + ": top level must be an object");
    detail::check_fields(doc, origin, {"name", "nodes", "links"});

    Underlay u;
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) throw parse_error(origin + ": name must be a string");
        u.name = doc["name"].get<std::string>();
    }
    if (!doc.contains("nodes") || !doc["nodes"].is_array())
        throw parse_error(origin + ": missing nodes array");
    int idx = 0;
    for (const auto& jn : doc["nodes"]) {
        std::string where = origin + ": nodes[" + std::to_string(idx++) + "]";
        if (!jn.is_object()) throw parse_error(where + ": must be an object");
        detail::check_fields(jn, where,
                             {"id", "kind", "lat", "lon", "up_mbps", "down_mbps",
                              "compute_ms"});
        UnderlayNode nd;
        nd.id = static_cast<int>(detail::require_number(jn, where, "id"));
        if (!jn.contains("kind") || !jn["kind"].is_string())
            throw parse_error(where + ": missing kind");
        std::string kind = jn["kind"].get<std::string>();
        if (kind == "silo")
            nd.kind = NodeKind::silo;
        else if (kind == "router")
            nd.kind = NodeKind::router;
        else
            throw parse_error(where + ": kind must be \"silo\" or \"router\"");
        nd.pos.lat_deg = detail::require_number(jn, where, "lat");
        nd.pos.lon_deg = detail::require_number(jn, where, "lon");
        if (nd.kind == NodeKind::silo) {
            nd.up_mbps = detail::require_number(jn, where, "up_mbps");
            nd.down_mbps = detail::require_number(jn, where, "down_mbps");
            nd.compute_ms = jn.contains("compute_ms")
                                ? detail::require_number(jn, where, "compute_ms")
                                : 0.0;
        } else {
            for (const char* f : {"up_mbps", "down_mbps", "compute_ms"})
                if (jn.contains(f))
                    throw parse_error(where + ": field \"" + f +
                                      "\" only applies to silos");
        }
        u.nodes.push_back(nd);
    }
    idx = 0;
    if (doc.contains("links")) {
        if (!doc["links"].is_array())
            throw parse_error(origin + ": links must be an array");
        for (const auto& jl : doc["links"]) {
            std::string where = origin + ": links[" + std::to_string(idx++) + "]";
            if (!jl.is_object()) throw parse_error(where + ": must be an object");
            detail::check_fields(jl, where, {"u", "v", "capacity_mbps", "latency_ms"});
            CoreLink l;
            l.u = static_cast<int>(detail::require_number(jl, where, "u"));
            l.v = static_cast<int>(detail::require_number(jl, where, "v"));
            l.capacity_mbps = detail::require_number(jl, where, "capacity_mbps");
            if (jl.contains("latency_ms"))
                l.latency_ms = detail::require_number(jl, where, "latency_ms");
            u.links.push_back(l);
        }
    }
    u.validate();
    return u;
}

/// Silo parameters attached to every imported GraphML node.
struct GraphmlDefaults {
    double up_mbps = 100.0;
    double down_mbps = 100.0;
    double compute_ms = 0.0;
    /// Used for links without a LinkSpeedRaw attribute.
    double capacity_mbps = 1000.0;
};

namespace detail {

struct XmlTag {
    std::string name;
    std::map<std::string, std::string> attrs;
    bool closing = false;
    bool self_closing = false;
    std::size_t end = 0; // index just past '>'
};

inline bool next_tag(const std::string& s, std::size_t from, XmlTag& tag) {
    std::size_t lt = s.find('<', from);
    while (lt != std::string::npos &&
           (s.compare(lt, 4, "<!--") == 0 || s.compare(lt, 2, "<?") == 0)) {
        std::size_t skip = s.compare(lt, 4, "<!--") == 0 ? s.find("-->", lt) : s.find('>', lt);
        if (skip == std::string::npos) return false;
        lt = s.find('<', skip);
    }
    if (lt == std::string::npos) return false;
    std::size_t gt = s.find('>', lt);
    if (gt == std::string::npos) throw parse_error("graphml: unterminated tag");
    std::string inner = s.substr(lt + 1, gt - lt - 1);
    tag = XmlTag{};
    tag.end = gt + 1;
    if (!inner.empty() && inner.front() == '/') {
        tag.closing = true;
        inner.erase(0, 1);
    }
    if (!inner.empty() && inner.back() == '/') {
        tag.self_closing = true;
        inner.pop_back();
    }
    std::size_t i = 0;
    while (i < inner.size() && !std::isspace(static_cast<unsigned char>(inner[i]))) ++i;
    tag.name = inner.substr(0, i);
    while (i < inner.size()) {
        while (i < inner.size() && std::isspace(static_cast<unsigned char>(inner[i]))) ++i;
        std::size_t eq = inner.find('=', i);
        if (eq == std::string::npos) break;
        std::string key = inner.substr(i, eq - i);
        std::size_t q1 = inner.find('"', eq);
        if (q1 == std::string::npos) throw parse_error("graphml: malformed attribute");
        std::size_t q2 = inner.find('"', q1 + 1);
        if (q2 == std::string::npos) throw parse_error("graphml: malformed attribute");
        tag.attrs[key] = inner.substr(q1 + 1, q2 - q1 - 1);
        i = q2 + 1;
    }
    return true;
}

} // namespace detail

/// Minimal Topology Zoo GraphML import: every file node becomes a router with
/// a co-located silo carrying the default access parameters; edges become
/// core links with capacity from LinkSpeedRaw (bits/s) when present. Nodes
/// without coordinates are dropped, as are edges touching them.
inline Underlay parse_underlay_graphml(const std::string& text, const std::string& origin,
                                       const GraphmlDefaults& defaults = {}) {
    // Map attribute keys to names (Latitude, Longitude, LinkSpeedRaw).
    std::map<std::string, std::string> key_name;
    struct RawNode {
        std::string id;
        double lat = 0.0, lon = 0.0;
        bool has_lat = false, has_lon = false;
    };
    struct RawEdge {
        std::string src, dst;
        double speed_bps = -1.0;
    };
    std::vector<RawNode> raw_nodes;
    std::vector<RawEdge> raw_edges;

    detail::XmlTag tag;
    std::size_t pos = 0;
    int open_node = -1, open_edge = -1;
    std::string open_data_key;
    std::size_t data_text_start = 0;
    while (detail::next_tag(text, pos, tag)) {
        std::size_t here = tag.end;
        if (!tag.closing && tag.name == "key") {
            if (tag.attrs.count("id") && tag.attrs.count("attr.name"))
                key_name[tag.attrs["id"]] = tag.attrs["attr.name"];
        } else if (!tag.closing && tag.name == "node") {
            if (!tag.attrs.count("id")) throw parse_error(origin + ": node without id");
            raw_nodes.push_back({tag.attrs["id"]});
            if (!tag.self_closing) open_node = static_cast<int>(raw_nodes.size()) - 1;
        } else if (tag.closing && tag.name == "node") {
            open_node = -1;
        } else if (!tag.closing && tag.name == "edge") {
            if (!tag.attrs.count("source") || !tag.attrs.count("target"))
                throw parse_error(origin + ": edge without endpoints");
            raw_edges.push_back({tag.attrs["source"], tag.attrs["target"]});
            if (!tag.self_closing) open_edge = static_cast<int>(raw_edges.size()) - 1;
        } else if (tag.closing && tag.name == "edge") {
            open_edge = -1;
        } else if (!tag.closing && !tag.self_closing && tag.name == "data") {
            open_data_key = tag.attrs.count("key") ? tag.attrs["key"] : "";
            data_text_start = tag.end;
        } else if (tag.closing && tag.name == "data") {
            std::string value = text.substr(data_text_start,
                                            text.rfind('<', tag.end - 1) - data_text_start);
            auto it = key_name.find(open_data_key);
            if (it != key_name.end()) {
                try {
                    if (open_node >= 0 && it->second == "Latitude") {
                        raw_nodes[open_node].lat = std::stod(value);
                        raw_nodes[open_node].has_lat = true;
                    } else if (open_node >= 0 && it->second == "Longitude") {
                        raw_nodes[open_node].lon = std::stod(value);
                        raw_nodes[open_node].has_lon = true;
                    } else if (open_edge >= 0 && it->second == "LinkSpeedRaw") {
                        raw_edges[open_edge].speed_bps = std::stod(value);
                    }
                } catch (const std::exception&) {
                    throw parse_error(origin + ": bad numeric value \"" + value + "\"");
                }
            }
        }
        pos = here;
    }

    std::map<std::string, int> router_id; // file id -> router node id
    Underlay u;
    u.name = origin;
    int next_id = 0;
    for (const RawNode& rn : raw_nodes) {
        if (!rn.has_lat || !rn.has_lon) continue;
        UnderlayNode router;
        router.id = next_id++;
        router.kind = NodeKind::router;
        router.pos = {rn.lat, rn.lon};
        router_id[rn.id] = router.id;
        u.nodes.push_back(router);
    }
    for (const auto& [fid, rid] : router_id) {
        UnderlayNode silo;
        silo.id = next_id++;
        silo.kind = NodeKind::silo;
        silo.pos = u.node(rid).pos;
        silo.up_mbps = defaults.up_mbps;
        silo.down_mbps = defaults.down_mbps;
        silo.compute_ms = defaults.compute_ms;
        u.nodes.push_back(silo);
    }
    for (const RawEdge& re : raw_edges) {
        auto a = router_id.find(re.src);
        auto b = router_id.find(re.dst);
        if (a == router_id.end() || b == router_id.end()) continue;
        if (a->second == b->second) continue;
        CoreLink l;
        l.u = a->second;
        l.v = b->second;
        l.capacity_mbps =
            re.speed_bps > 0.0 ? re.speed_bps / 1e6 : defaults.capacity_mbps;
        u.links.push_back(l);
    }
    u.validate();
    return u;
}

inline Underlay load_underlay(const std::string& path, const std::string& format,
                              const GraphmlDefaults& defaults = {}) {
    std::string text = detail::read_file(path);
    if (format == "json") return parse_underlay_json(text, path);
    if (format == "graphml") return parse_underlay_graphml(text, path, defaults);
    throw validation_error("load_underlay: unknown format \"" + format + "\"");
}

/// Overlay file: {name?, silos, undirected, arcs:[{src, dst, delay_ms}],
/// self_loops_ms:[...]}. Delays are the realized per-arc values.
inline std::string overlay_to_json(const Overlay& o, const std::string& name = "") {
    nlohmann::json doc;
    if (!name.empty()) doc["name"] = name;
    doc["silos"] = o.silo_count;
    doc["undirected"] = o.undirected;
    doc["arcs"] = nlohmann::json::array();
    for (const Arc& a : o.arcs)
        doc["arcs"].push_back({{"src", a.src}, {"dst", a.dst}, {"delay_ms", a.weight_ms}});
    doc["self_loops_ms"] = o.self_loop_ms;
    return doc.dump(2) + "\n";
}

inline Overlay parse_overlay_json(const std::string& text, const std::string& origin) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(origin + ": " + e.what());
    }
    if (!doc.is_object()) throw parse_error(origin + ": top level must be an object");
    detail::check_fields(doc, origin, {"name", "silos", "undirected", "arcs",
                                       "self_loops_ms"});
    Overlay o;
    o.silo_count = static_cast<int>(detail::require_number(doc, origin, "silos"));
    if (o.silo_count < 1) throw parse_error(origin + ": silos must be >= 1");
    if (doc.contains("undirected")) {
        if (!doc["undirected"].is_boolean())
            throw parse_error(origin + ": undirected must be a boolean");
        o.undirected = doc["undirected"].get<bool>();
    }
    if (!doc.contains("arcs") || !doc["arcs"].is_array())
        throw parse_error(origin + ": missing arcs array");
    int idx = 0;
    for (const auto& ja : doc["arcs"]) {
        std::string where = origin + ": arcs[" + std::to_string(idx++) + "]";
        detail::check_fields(ja, where, {"src", "dst", "delay_ms"});
        Arc a;
        a.src = static_cast<int>(detail::require_number(ja, where, "src"));
        a.dst = static_cast<int>(detail::require_number(ja, where, "dst"));
        a.weight_ms = detail::require_number(ja, where, "delay_ms");
        if (a.src == a.dst)
            throw parse_error(where + ": self-loops belong in self_loops_ms");
        if (a.src < 0 || a.src >= o.silo_count || a.dst < 0 || a.dst >= o.silo_count)
            throw parse_error(where + ": node id out of range");
        o.arcs.push_back(a);
    }
    o.self_loop_ms.assign(o.silo_count, 0.0);
    if (doc.contains("self_loops_ms")) {
        if (!doc["self_loops_ms"].is_array() ||
            static_cast<int>(doc["self_loops_ms"].size()) != o.silo_count)
            throw parse_error(origin + ": self_loops_ms must have one entry per silo");
        for (int i = 0; i < o.silo_count; ++i) {
            if (!doc["self_loops_ms"][i].is_number())
                throw parse_error(origin + ": self_loops_ms entries must be numbers");
            o.self_loop_ms[i] = doc["self_loops_ms"][i].get<double>();
        }
    }
    if (!is_strongly_connected(o.delay_graph()))
        throw validation_error(origin + ": overlay is not strongly connected");
    return o;
}

inline Overlay load_overlay(const std::string& path) {
    return parse_overlay_json(detail::read_file(path), path);
}

/// RFC-4180 field quoting; applied only when the field needs it.
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string format_ms(double v) {
    std::ostringstream ss;
    ss.precision(12);
    ss << v;
    return ss.str();
}

inline std::string trace_to_csv(const SimulationTrace& tr) {
    std::string out = "silo,round,time_ms\r\n";
    const int n = static_cast<int>(tr.times_ms[0].size());
    for (int i = 0; i < n; ++i)
        for (int k = 0; k <= tr.rounds; ++k)
            out += std::to_string(i) + "," + std::to_string(k) + "," +
                   format_ms(tr.times_ms[k][i]) + "\r\n";
    return out;
}

inline std::string loss_series_to_csv(const std::vector<TimedLossPoint>& pts) {
    std::string out = "round,time_ms,global_loss,consensus_residual\r\n";
    for (const TimedLossPoint& p : pts)
        out += std::to_string(p.round) + "," + format_ms(p.time_ms) + "," +
               format_ms(p.global_loss) + "," + format_ms(p.consensus_residual) + "\r\n";
    return out;
}

} // namespace toposynth
