#include <sstream>

#include <nlohmann/json.hpp>

#include "deon/syntax.hpp"
#include "deon/theory.hpp"

namespace deon {

namespace {

using json = nlohmann::ordered_json;

json worlds_json(WorldSet s) {
  json arr = json::array();
  for (int w : set_to_worlds(s)) arr.push_back(w);
  return arr;
}

json pairs_json(const std::vector<WorldSet>& rel, int n) {
  json arr = json::array();
  for (int w = 0; w < n; ++w)
    for (int v : set_to_worlds(rel[w])) arr.push_back(json::array({w, v}));
  return arr;
}

json per_world_json(const std::vector<WorldSet>& rows, int n) {
  json obj = json::object();
  for (int w = 0; w < n; ++w) obj[std::to_string(w)] = worlds_json(rows[w]);
  return obj;
}

json model_json(const FiniteModel& m) {
  json j;
  j["worlds"] = m.n;
  j["actual"] = m.actual;
  json val = json::object();
  for (const auto& [atom, worlds] : m.valuation)
    if (worlds != 0) val[atom] = worlds_json(worlds);
  j["valuation"] = val;
  json rels = json::object();
  for (const auto& [name, rel] : m.relations) rels[name] = pairs_json(rel, m.n);
  j["relations"] = rels;
  json av = json::object(), pv = json::object();
  for (const auto& [tag, rows] : m.av) av[tag.display()] = per_world_json(rows, m.n);
  for (const auto& [tag, rows] : m.pv) pv[tag.display()] = per_world_json(rows, m.n);
  j["av"] = av;
  j["pv"] = pv;
  json ob = json::object();
  for (const auto& [tag, obmap] : m.ob) {
    json entries = json::array();
    for (const auto& [ctx, cores] : obmap) {
      if (cores.empty()) continue;
      json cs = json::array();
      for (WorldSet core : cores) cs.push_back(worlds_json(core));
      entries.push_back(json{{"context", worlds_json(ctx)}, {"core", cs}});
    }
    ob[tag.display()] = entries;
  }
  j["ob"] = ob;
  json stit = json::array();
  for (const auto& [key, choice] : m.stit)
    stit.push_back(json{{"agent", key.first},
                        {"prop", worlds_json(key.second)},
                        {"choice", worlds_json(choice)}});
  j["stit"] = stit;
  return j;
}

std::string model_text(const FiniteModel& m) {
  std::ostringstream os;
  auto set_str = [](WorldSet s) {
    std::string out = "{";
    bool first = true;
    for (int w : set_to_worlds(s)) {
      if (!first) out += ",";
      out += std::to_string(w);
      first = false;
    }
    return out + "}";
  };
  os << "worlds: " << m.n << "  actual: " << m.actual << "  theory: " << to_string(m.theory)
     << "\n";
  os << "valuation:\n";
  for (const auto& [atom, worlds] : m.valuation)
    if (worlds != 0) os << "  " << atom << ": " << set_str(worlds) << "\n";
  for (const auto& [name, rel] : m.relations) {
    os << "relation " << name << ":";
    for (int w = 0; w < m.n; ++w)
      for (int v : set_to_worlds(rel[w])) os << " (" << w << "," << v << ")";
    os << "\n";
  }
  for (const auto& [tag, rows] : m.av) {
    os << "av[" << tag.display() << "]:";
    for (int w = 0; w < m.n; ++w) os << " " << w << "->" << set_str(rows[w]);
    os << "\n";
  }
  for (const auto& [tag, rows] : m.pv) {
    os << "pv[" << tag.display() << "]:";
    for (int w = 0; w < m.n; ++w) os << " " << w << "->" << set_str(rows[w]);
    os << "\n";
  }
  for (const auto& [tag, obmap] : m.ob) {
    os << "ob[" << tag.display() << "]:";
    bool any = false;
    for (const auto& [ctx, cores] : obmap) {
      for (WorldSet core : cores) {
        os << " " << set_str(ctx) << "=>" << set_str(core);
        any = true;
      }
    }
    if (!any) os << " (no cores)";
    os << "\n";
  }
  for (const auto& [key, choice] : m.stit)
    os << "stit[" << key.first << "]: " << set_str(key.second) << "->" << set_str(choice) << "\n";
  return os.str();
}

WorldSet parse_world_set(const json& arr, int n, const char* what) {
  if (!arr.is_array()) throw std::runtime_error(std::string(what) + ": expected an array");
  WorldSet s = 0;
  for (const auto& v : arr) {
    if (!v.is_number_integer()) throw std::runtime_error(std::string(what) + ": expected world indices");
    int w = v.get<int>();
    if (w < 0 || w >= n) throw std::runtime_error(std::string(what) + ": world index out of range");
    s |= world_bit(w);
  }
  return s;
}

}  // namespace

std::string print_model(const FiniteModel& m, ModelFormat fmt) {
  if (fmt == ModelFormat::Text) return model_text(m);
  return model_json(m).dump();
}

FiniteModel parse_model_json(const std::string& text, TheoryId theory) {
  json j = json::parse(text);  // throws on malformed JSON
  FiniteModel m;
  m.theory = theory;
  if (!j.contains("worlds") || !j["worlds"].is_number_integer())
    throw std::runtime_error("model json: missing integer 'worlds'");
  m.n = j["worlds"].get<int>();
  if (m.n < 1 || m.n > kMaxWorlds) throw std::runtime_error("model json: world count out of range");
  m.actual = j.value("actual", 0);
  if (m.actual < 0 || m.actual >= m.n)
    throw std::runtime_error("model json: actual world out of range");
  if (j.contains("valuation"))
    for (const auto& [atom, arr] : j["valuation"].items())
      m.valuation[atom] = parse_world_set(arr, m.n, "valuation");
  if (j.contains("relations"))
    for (const auto& [name, pairs] : j["relations"].items()) {
      std::vector<WorldSet> rel(m.n, 0);
      if (!pairs.is_array()) throw std::runtime_error("model json: relation must be a pair list");
      for (const auto& pr : pairs) {
        if (!pr.is_array() || pr.size() != 2) throw std::runtime_error("model json: bad pair");
        int w = pr[0].get<int>(), v = pr[1].get<int>();
        if (w < 0 || w >= m.n || v < 0 || v >= m.n)
          throw std::runtime_error("model json: relation world out of range");
        rel[w] |= world_bit(v);
      }
      m.relations[name] = std::move(rel);
    }
  auto parse_rows = [&](const json& obj, const char* what) {
    std::map<AgentTag, std::vector<WorldSet>> out;
    for (const auto& [tagname, rows] : obj.items()) {
      AgentTag tag = tagname == "default" ? AgentTag::def() : AgentTag::agent(tagname);
      std::vector<WorldSet> r(m.n, 0);
      for (const auto& [wkey, arr] : rows.items()) {
        int w = std::stoi(wkey);
        if (w < 0 || w >= m.n) throw std::runtime_error(std::string(what) + ": world out of range");
        r[w] = parse_world_set(arr, m.n, what);
      }
      out[tag] = std::move(r);
    }
    return out;
  };
  if (j.contains("av")) m.av = parse_rows(j["av"], "av");
  if (j.contains("pv")) m.pv = parse_rows(j["pv"], "pv");
  if (j.contains("ob"))
    for (const auto& [tagname, entries] : j["ob"].items()) {
      AgentTag tag = tagname == "default" ? AgentTag::def() : AgentTag::agent(tagname);
      ObMap obmap;
      for (const auto& entry : entries) {
        WorldSet ctx = parse_world_set(entry.at("context"), m.n, "ob context");
        for (const auto& core : entry.at("core"))
          obmap[ctx].insert(parse_world_set(core, m.n, "ob core"));
      }
      m.ob[tag] = std::move(obmap);
    }
  if (j.contains("stit"))
    for (const auto& entry : j["stit"]) {
      std::string agent = entry.at("agent").get<std::string>();
      WorldSet prop = parse_world_set(entry.at("prop"), m.n, "stit prop");
      WorldSet choice = parse_world_set(entry.at("choice"), m.n, "stit choice");
      m.stit[{agent, prop}] = choice;
    }
  return m;
}

}  // namespace deon
