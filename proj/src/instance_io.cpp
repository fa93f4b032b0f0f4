#include "evrep/instance_io.h"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace evrep {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::ParseError, field + ": " + what);
}

const json& member(const json& object, const char* key, const std::string& path) {
  if (!object.is_object()) {
    parse_fail(path, "expected an object");
  }
  auto it = object.find(key);
  if (it == object.end()) {
    parse_fail(path.empty() ? key : path + "." + key, "missing");
  }
  return *it;
}

std::string child(const std::string& path, const char* key) {
  return path.empty() ? key : path + "." + key;
}

double number(const json& object, const char* key, const std::string& path) {
  const auto& v = member(object, key, path);
  if (!v.is_number()) {
    parse_fail(child(path, key), "expected a number");
  }
  return v.get<double>();
}

std::int64_t integer(const json& object, const char* key, const std::string& path) {
  const auto& v = member(object, key, path);
  if (!v.is_number_integer()) {
    parse_fail(child(path, key), "expected an integer");
  }
  return v.get<std::int64_t>();
}

std::string text(const json& object, const char* key, const std::string& path) {
  const auto& v = member(object, key, path);
  if (!v.is_string()) {
    parse_fail(child(path, key), "expected a string");
  }
  return v.get<std::string>();
}

const json& array(const json& object, const char* key, const std::string& path) {
  const auto& v = member(object, key, path);
  if (!v.is_array()) {
    parse_fail(child(path, key), "expected an array");
  }
  return v;
}

void check_header(const json& document, const char* format) {
  if (text(document, "format", "") != format) {
    parse_fail("format", std::string("expected \"") + format + "\"");
  }
  if (integer(document, "version", "") != kFormatVersion) {
    parse_fail("version", "unsupported version");
  }
}

std::string indexed(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

} // namespace

json instance_to_json(const Instance& instance) {
  const auto& p = instance.parameters();
  json doc;
  doc["format"] = kInstanceFormat;
  doc["version"] = kFormatVersion;
  doc["parameters"] = {
    {"duty_time", p.duty_time},
    {"ev_speed", p.ev_speed},
    {"bike_speed", p.bike_speed},
    {"park_and_unfold", p.park_and_unfold},
    {"load_bike", p.load_bike},
    {"full_range", p.full_range},
    {"full_recharge_time", p.full_recharge_time},
    {"worker_count", p.worker_count},
    {"worker_cost", p.worker_cost},
  };
  json requests = json::array();
  for (const auto& r : instance.requests()) {
    requests.push_back({
      {"id", r.id},
      {"kind", to_string(r.kind)},
      {"location", r.location},
      {"tw_min", r.tw_min},
      {"tw_max", r.tw_max},
      {"battery", r.battery},
      {"revenue", r.revenue},
      {"rent_minutes", r.rent_minutes},
    });
  }
  doc["requests"] = std::move(requests);
  doc["distances"] = instance.distance_matrix();
  if (const auto* flat = std::get_if<FlatRevenue>(&instance.revenue_model())) {
    doc["revenue_model"] = {{"type", "flat"}, {"amount", flat->amount}};
  } else {
    const auto& v = std::get<VrcFrcRevenue>(instance.revenue_model());
    doc["revenue_model"] = {
      {"type", "vrc_frc"},
      {"rate_per_min", v.rate_per_min},
      {"rent_min", v.rent_min},
      {"rent_max", v.rent_max},
      {"frc", v.frc},
    };
  }
  const auto& prov = instance.provenance();
  doc["provenance"] = {
    {"generator", prov.generator},
    {"seed", prov.seed},
    {"config_hash", prov.config_hash},
  };
  return doc;
}

Instance instance_from_json(const json& doc) {
  check_header(doc, kInstanceFormat);

  const auto& pj = member(doc, "parameters", "");
  Parameters p;
  p.duty_time = number(pj, "duty_time", "parameters");
  p.ev_speed = number(pj, "ev_speed", "parameters");
  p.bike_speed = number(pj, "bike_speed", "parameters");
  p.park_and_unfold = number(pj, "park_and_unfold", "parameters");
  p.load_bike = number(pj, "load_bike", "parameters");
  p.full_range = number(pj, "full_range", "parameters");
  p.full_recharge_time = number(pj, "full_recharge_time", "parameters");
  p.worker_count = static_cast<int>(integer(pj, "worker_count", "parameters"));
  p.worker_cost = number(pj, "worker_cost", "parameters");

  std::vector<Request> requests;
  const auto& rj = array(doc, "requests", "");
  for (std::size_t i = 0; i < rj.size(); ++i) {
    const std::string path = indexed("requests", i);
    const auto& e = rj[i];
    Request r;
    r.id = integer(e, "id", path);
    const std::string kind = text(e, "kind", path);
    if (kind != "pickup" && kind != "delivery") {
      parse_fail(path + ".kind", "expected \"pickup\" or \"delivery\"");
    }
    r.kind = request_kind_from_string(kind);
    const auto location = integer(e, "location", path);
    if (location < 0) {
      parse_fail(path + ".location", "must be non-negative");
    }
    r.location = static_cast<LocationIndex>(location);
    r.tw_min = number(e, "tw_min", path);
    r.tw_max = number(e, "tw_max", path);
    r.battery = number(e, "battery", path);
    r.revenue = number(e, "revenue", path);
    r.rent_minutes = number(e, "rent_minutes", path);
    requests.push_back(r);
  }

  std::vector<std::vector<Km>> distances;
  const auto& dj = array(doc, "distances", "");
  for (std::size_t i = 0; i < dj.size(); ++i) {
    if (!dj[i].is_array()) {
      parse_fail(indexed("distances", i), "expected an array");
    }
    std::vector<Km> row;
    for (std::size_t j = 0; j < dj[i].size(); ++j) {
      if (!dj[i][j].is_number()) {
        parse_fail(indexed(indexed("distances", i), j), "expected a number");
      }
      row.push_back(dj[i][j].get<double>());
    }
    distances.push_back(std::move(row));
  }

  RevenueModel model = FlatRevenue{};
  const auto& mj = member(doc, "revenue_model", "");
  const std::string type = text(mj, "type", "revenue_model");
  if (type == "flat") {
    model = FlatRevenue{number(mj, "amount", "revenue_model")};
  } else if (type == "vrc_frc") {
    model = VrcFrcRevenue{number(mj, "rate_per_min", "revenue_model"),
                          number(mj, "rent_min", "revenue_model"),
                          number(mj, "rent_max", "revenue_model"),
                          number(mj, "frc", "revenue_model")};
  } else {
    parse_fail("revenue_model.type", "expected \"flat\" or \"vrc_frc\"");
  }

  Provenance prov;
  if (doc.contains("provenance")) {
    const auto& vj = doc["provenance"];
    prov.generator = text(vj, "generator", "provenance");
    const auto& seed = member(vj, "seed", "provenance");
    if (!seed.is_number_unsigned() && !seed.is_number_integer()) {
      parse_fail("provenance.seed", "expected an integer");
    }
    prov.seed = seed.get<std::uint64_t>();
    prov.config_hash = text(vj, "config_hash", "provenance");
  }

  return Instance(p, std::move(requests), std::move(distances), model, prov);
}

std::string dump_json(const json& document) {
  return document.dump(2) + "\n";
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line =
      1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw Error(ErrorKind::ParseError,
                "line " + std::to_string(line) + ": malformed JSON");
  }
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::ParseError, "cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_json(buffer.str());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::ParseError, "cannot write " + path.string());
  }
  out << text;
}

std::string dump_instance(const Instance& instance) {
  return dump_json(instance_to_json(instance));
}

Instance parse_instance(const std::string& text) {
  return instance_from_json(parse_json(text));
}

void save_instance(const Instance& instance, const std::filesystem::path& path) {
  write_text(path, dump_instance(instance));
}

Instance load_instance(const std::filesystem::path& path) {
  return instance_from_json(read_json(path));
}

json solution_to_json(const Solution& solution) {
  json doc;
  doc["format"] = kSolutionFormat;
  doc["version"] = kFormatVersion;
  json routes = json::array();
  for (const auto& route : solution.routes) {
    json visits = json::array();
    for (const auto& v : route.visits) {
      json visit = {
        {"request", v.request},
        {"kind", to_string(v.kind)},
        {"arrival", v.arrival},
        {"waiting", v.waiting},
        {"tw_min", v.tw_min},
        {"tw_max", v.tw_max},
        {"battery_demand", v.battery_demand},
      };
      if (v.battery_at_pickup) {
        visit["battery_at_pickup"] = *v.battery_at_pickup;
      }
      visits.push_back(std::move(visit));
    }
    routes.push_back({
      {"worker", route.worker},
      {"start_time", route.start_time},
      {"end_time", route.end_time},
      {"visits", std::move(visits)},
    });
  }
  doc["routes"] = std::move(routes);
  doc["served"] = solution.served;
  doc["rejected"] = solution.rejected;
  doc["total_revenue"] = solution.total_revenue;
  doc["worker_cost"] = solution.worker_cost;
  doc["profit"] = solution.profit;
  return doc;
}

Solution solution_from_json(const json& doc) {
  check_header(doc, kSolutionFormat);
  Solution s;
  const auto& rj = array(doc, "routes", "");
  for (std::size_t i = 0; i < rj.size(); ++i) {
    const std::string path = indexed("routes", i);
    RouteSchedule route;
    route.worker = static_cast<int>(integer(rj[i], "worker", path));
    route.start_time = number(rj[i], "start_time", path);
    route.end_time = number(rj[i], "end_time", path);
    const auto& vj = array(rj[i], "visits", path);
    for (std::size_t k = 0; k < vj.size(); ++k) {
      const std::string vpath = indexed(path + ".visits", k);
      ScheduledVisit v;
      v.request = integer(vj[k], "request", vpath);
      const std::string kind = text(vj[k], "kind", vpath);
      if (kind != "pickup" && kind != "delivery") {
        parse_fail(vpath + ".kind", "expected \"pickup\" or \"delivery\"");
      }
      v.kind = request_kind_from_string(kind);
      v.arrival = number(vj[k], "arrival", vpath);
      v.waiting = number(vj[k], "waiting", vpath);
      v.tw_min = number(vj[k], "tw_min", vpath);
      v.tw_max = number(vj[k], "tw_max", vpath);
      v.battery_demand = number(vj[k], "battery_demand", vpath);
      if (vj[k].contains("battery_at_pickup")) {
        v.battery_at_pickup = number(vj[k], "battery_at_pickup", vpath);
      }
      route.visits.push_back(v);
    }
    s.routes.push_back(std::move(route));
  }
  auto ids = [&](const char* key) {
    std::vector<RequestId> out;
    const auto& a = array(doc, key, "");
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!a[i].is_number_integer()) {
        parse_fail(indexed(key, i), "expected an integer");
      }
      out.push_back(a[i].get<RequestId>());
    }
    return out;
  };
  s.served = ids("served");
  s.rejected = ids("rejected");
  s.total_revenue = number(doc, "total_revenue", "");
  s.worker_cost = number(doc, "worker_cost", "");
  s.profit = number(doc, "profit", "");
  return s;
}

} // namespace evrep
