#include "pedacc/export.hpp"

#include <map>
#include <stdexcept>

#include "pedacc/surface.hpp"

namespace pedacc::surface {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "pedacc-derivation/1";

json term_json(const Term& t) { return print(t); }

}  // namespace

json derivation_json(const std::vector<DerivationPtr>& roots) {
  json nodes = json::array();
  json envs = json::array();
  std::map<const Derivation*, std::size_t> node_id;
  std::map<const Environment*, std::size_t> env_id;

  auto env_ref = [&](const EnvPtr& e) {
    auto it = env_id.find(e.get());
    if (it != env_id.end()) return it->second;
    json entries = json::array();
    for (const Entry& x : *e) {
      json je{{"name", x.name}, {"type", term_json(x.type)}};
      if (x.witness) je["witness"] = term_json(*x.witness);
      entries.push_back(std::move(je));
    }
    std::size_t id = envs.size();
    envs.push_back({{"id", id}, {"entries", std::move(entries)}});
    env_id.emplace(e.get(), id);
    return id;
  };

  json root_ids = json::array();
  for (const auto& root : roots) {
    if (!root) {
      root_ids.push_back(nullptr);
      continue;
    }
    for_each_node(root, [&](const DerivationPtr& d) {
      if (node_id.count(d.get())) return;
      json n;
      std::size_t id = nodes.size();
      n["id"] = id;
      n["rule"] = to_string(d->rule);
      n["mode"] = to_string(d->mode);
      json jg{{"env", env_ref(d->conclusion.env)}};
      if (d->conclusion.is_wf()) {
        jg["kind"] = "wf";
      } else {
        jg["kind"] = "type";
        jg["term"] = term_json(d->conclusion.subject());
        jg["type"] = term_json(d->conclusion.ty());
      }
      n["judgment"] = std::move(jg);
      json prem = json::array();
      for (const auto& p : d->premises) prem.push_back(node_id.at(p.get()));
      n["premises"] = std::move(prem);
      if (d->witness) n["witness"] = term_json(*d->witness);
      if (d->motivation) {
        json m = json::array();
        for (const auto& [x, t] : d->motivation->bindings) m.push_back({x, term_json(t)});
        n["motivation"] = std::move(m);
      }
      n["height"] = d->height;
      nodes.push_back(std::move(n));
      node_id.emplace(d.get(), id);
    });
    root_ids.push_back(node_id.at(root.get()));
  }
  return json{{"format", kFormat}, {"roots", std::move(root_ids)}, {"envs", std::move(envs)},
              {"nodes", std::move(nodes)}};
}

json diagnostic_json(const Diagnostic& d) {
  json j{{"rule", d.rule}, {"where", d.where}, {"message", d.message}};
  if (d.expected) j["expected"] = term_json(*d.expected);
  if (d.found) j["found"] = term_json(*d.found);
  if (d.pos) j["pos"] = {{"line", d.pos->line}, {"column", d.pos->column}, {"offset", d.pos->offset}};
  return j;
}

TableShape validate_derivation_json(const json& j) {
  if (j.at("format") != kFormat) throw std::runtime_error("unknown derivation format");
  const json& envs = j.at("envs");
  const json& nodes = j.at("nodes");
  for (std::size_t i = 0; i < envs.size(); ++i) {
    if (envs[i].at("id") != i) throw std::runtime_error("environment ids are not consecutive");
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const json& n = nodes[i];
    if (n.at("id") != i) throw std::runtime_error("node ids are not consecutive");
    if (!parse_rule(n.at("rule").get<std::string>())) throw std::runtime_error("unknown rule");
    if (!parse_mode(n.at("mode").get<std::string>())) throw std::runtime_error("unknown mode");
    if (n.at("judgment").at("env").get<std::size_t>() >= envs.size()) throw std::runtime_error("dangling env");
    for (const json& p : n.at("premises")) {
      if (p.get<std::size_t>() >= i) throw std::runtime_error("premise does not precede its conclusion");
    }
  }
  for (const json& r : j.at("roots")) {
    if (!r.is_null() && r.get<std::size_t>() >= nodes.size()) throw std::runtime_error("dangling root");
  }
  return {nodes.size(), envs.size()};
}

}  // namespace pedacc::surface
