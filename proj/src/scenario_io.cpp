#include "advscen/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace advscen {

using nlohmann::json;

namespace {

json state_to_json(const BicycleState& s) {
    return json{{"x", s.x}, {"y", s.y}, {"theta", s.theta},
                {"v", s.v}, {"kappa", s.kappa}, {"a", s.a}};
}

json trajectory_to_json(const Trajectory& t) {
    json arr = json::array();
    for (const auto& s : t.states) arr.push_back(state_to_json(s));
    return arr;
}

double require_number(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
    if (!j[key].is_number()) throw ParseError(where + ": field '" + key + "' must be a number");
    return j[key].get<double>();
}

BicycleState state_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) throw ParseError(where + ": state must be an object");
    BicycleState s;
    s.x = require_number(j, "x", where);
    s.y = require_number(j, "y", where);
    s.theta = require_number(j, "theta", where);
    s.v = require_number(j, "v", where);
    s.kappa = require_number(j, "kappa", where);
    s.a = require_number(j, "a", where);
    return s;
}

Trajectory trajectory_from_json(const json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError(where + ": must be an array of states");
    Trajectory t;
    t.states.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        t.states.push_back(state_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    }
    return t;
}

json points_to_json(const std::vector<Vec2>& pts) {
    json arr = json::array();
    for (const auto& p : pts) arr.push_back(json::array({p.x, p.y}));
    return arr;
}

std::vector<Vec2> points_from_json(const json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError(where + ": must be an array of [x, y] pairs");
    std::vector<Vec2> pts;
    pts.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& p = j[i];
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
            throw ParseError(where + "[" + std::to_string(i) + "]: expected [x, y]");
        }
        pts.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return pts;
}

}  // namespace

std::string scenario_to_json(const Scenario& s) {
    json j;
    j["version"] = kScenarioSchemaVersion;
    j["dt"] = s.dt;
    j["n_history"] = s.n_history;
    j["n_future"] = s.n_future;

    json lanes = json::array();
    for (const auto& lane : s.map.lanes) {
        lanes.push_back({{"width", lane.width}, {"centerline", points_to_json(lane.centerline.points())}});
    }
    json statics = json::array();
    for (const auto& poly : s.map.static_obstacles) statics.push_back(points_to_json(poly));
    j["map"] = {{"lanes", lanes}, {"static_obstacles", statics}};

    json actors = json::array();
    for (const auto& a : s.actors) {
        actors.push_back({{"id", a.id},
                          {"length", a.length},
                          {"width", a.width},
                          {"is_perturbable", a.is_perturbable},
                          {"trajectory", trajectory_to_json(a.trajectory)}});
    }
    j["actors"] = actors;
    j["sdv_expert"] = trajectory_to_json(s.sdv_expert);
    return j.dump(2);
}

Scenario scenario_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("scenario: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("scenario: top level must be an object");
    if (!j.contains("version")) throw ParseError("scenario: missing field 'version'");
    if (!j["version"].is_number_integer() || j["version"].get<int>() != kScenarioSchemaVersion) {
        throw ParseError("scenario: unsupported 'version' (expected " +
                         std::to_string(kScenarioSchemaVersion) + ")");
    }

    Scenario s;
    s.dt = require_number(j, "dt", "scenario");
    if (!j.contains("n_history")) throw ParseError("scenario: missing field 'n_history'");
    if (!j.contains("n_future")) throw ParseError("scenario: missing field 'n_future'");
    s.n_history = j["n_history"].get<int>();
    s.n_future = j["n_future"].get<int>();

    if (!j.contains("map") || !j["map"].is_object()) throw ParseError("scenario: missing object 'map'");
    const json& jm = j["map"];
    if (!jm.contains("lanes") || !jm["lanes"].is_array()) throw ParseError("map: missing array 'lanes'");
    for (std::size_t i = 0; i < jm["lanes"].size(); ++i) {
        const auto& jl = jm["lanes"][i];
        const std::string where = "map.lanes[" + std::to_string(i) + "]";
        Lane lane;
        lane.width = require_number(jl, "width", where);
        if (!jl.contains("centerline")) throw ParseError(where + ": missing field 'centerline'");
        lane.centerline = Polyline(points_from_json(jl["centerline"], where + ".centerline"));
        s.map.lanes.push_back(std::move(lane));
    }
    if (jm.contains("static_obstacles")) {
        for (std::size_t i = 0; i < jm["static_obstacles"].size(); ++i) {
            s.map.static_obstacles.push_back(points_from_json(
                jm["static_obstacles"][i], "map.static_obstacles[" + std::to_string(i) + "]"));
        }
    }

    if (!j.contains("actors") || !j["actors"].is_array()) throw ParseError("scenario: missing array 'actors'");
    for (std::size_t i = 0; i < j["actors"].size(); ++i) {
        const auto& ja = j["actors"][i];
        const std::string where = "actors[" + std::to_string(i) + "]";
        Actor a;
        if (!ja.contains("id") || !ja["id"].is_number_integer()) {
            throw ParseError(where + ": missing integer field 'id'");
        }
        a.id = ja["id"].get<int>();
        a.length = require_number(ja, "length", where);
        a.width = require_number(ja, "width", where);
        a.is_perturbable = ja.value("is_perturbable", true);
        if (!ja.contains("trajectory")) throw ParseError(where + ": missing field 'trajectory'");
        a.trajectory = trajectory_from_json(ja["trajectory"], where + ".trajectory");
        s.actors.push_back(std::move(a));
    }

    if (!j.contains("sdv_expert")) throw ParseError("scenario: missing field 'sdv_expert'");
    s.sdv_expert = trajectory_from_json(j["sdv_expert"], "sdv_expert");

    s.validate();
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

void save_scenario(const std::string& path, const Scenario& s) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write scenario file: " + path);
    out << scenario_to_json(s) << "\n";
}

std::uint64_t scenario_hash(const Scenario& s) {
    const std::string text = scenario_to_json(s);
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (const char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ull;
    }
    return h;
}

}  // namespace advscen
