#include <json.hpp>
#include <string>
#include <vector>

#include "dpnppl/error.hpp"
#include "dpnppl/formats.hpp"

namespace dpnppl {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void failAt(ErrorKind kind, const std::string& path,
                         const std::string& message) {
  fail(kind, path + ": " + message);
}

json parseJsonBytes(std::string_view bytes) {
  try {
    return json::parse(bytes);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ParseError,
         "byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

const json& member(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) failAt(ErrorKind::ParseError, path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end())
    failAt(ErrorKind::ParseError, path, std::string("missing field '") + key + "'");
  return *it;
}

std::string stringField(const json& v, const std::string& path) {
  if (!v.is_string()) failAt(ErrorKind::ParseError, path, "expected a string");
  return v.get<std::string>();
}

Rat ratField(const json& v, const std::string& path) {
  if (v.is_number_integer()) return Rat(v.get<long long>());
  if (v.is_string()) {
    try {
      return Rat::parse(v.get<std::string>());
    } catch (const Error& e) {
      failAt(e.kind(), path, e.what());
    }
  }
  failAt(ErrorKind::ParseError, path,
         "expected an integer or a rational string");
}

template <typename Parse>
auto exprField(const json& v, const std::string& path, Parse parse) {
  try {
    return parse(stringField(v, path));
  } catch (const Error& e) {
    failAt(e.kind(), path, e.what());
  }
}

// Integers stay JSON numbers; proper rationals become strings.
ordered_json ratValue(const Rat& r) {
  if (r.isInteger()) return ordered_json(r.asInt());
  return ordered_json(r.str());
}

}  // namespace

NetState documentState(const NetDocument& doc) {
  return makeNetState(doc.net, doc.initialMarking, doc.initialValuation);
}

NetDocument parseNetJson(std::string_view bytes) {
  json doc = parseJsonBytes(bytes);

  std::vector<std::string> places;
  const json& jp = member(doc, "places", "places");
  if (!jp.is_array()) failAt(ErrorKind::ParseError, "places", "expected an array");
  for (std::size_t i = 0; i < jp.size(); i++)
    places.push_back(stringField(jp[i], "places[" + std::to_string(i) + "]"));

  std::vector<std::string> variables;
  std::map<std::string, Rat> valuation;
  if (doc.contains("variables")) {
    const json& jv = doc["variables"];
    if (!jv.is_array())
      failAt(ErrorKind::ParseError, "variables", "expected an array");
    for (std::size_t i = 0; i < jv.size(); i++) {
      std::string path = "variables[" + std::to_string(i) + "]";
      variables.push_back(stringField(member(jv[i], "name", path), path + ".name"));
      if (jv[i].contains("initial"))
        valuation[variables.back()] =
            ratField(jv[i]["initial"], path + ".initial");
    }
  }

  std::vector<Transition> transitions;
  const json& jt = member(doc, "transitions", "transitions");
  if (!jt.is_array())
    failAt(ErrorKind::ParseError, "transitions", "expected an array");
  for (std::size_t i = 0; i < jt.size(); i++) {
    std::string path = "transitions[" + std::to_string(i) + "]";
    Transition t;
    t.name = stringField(member(jt[i], "name", path), path + ".name");
    if (jt[i].contains("label"))
      t.label = stringField(jt[i]["label"], path + ".label");
    t.pre = jt[i].contains("pre")
                ? exprField(jt[i]["pre"], path + ".pre", parseBoolText)
                : parseBoolText("true");
    t.post = jt[i].contains("post")
                 ? exprField(jt[i]["post"], path + ".post", parseBoolText)
                 : parseBoolText("true");
    transitions.push_back(std::move(t));
  }

  std::vector<Arc> arcs;
  const json& ja = member(doc, "arcs", "arcs");
  if (!ja.is_array()) failAt(ErrorKind::ParseError, "arcs", "expected an array");
  for (std::size_t i = 0; i < ja.size(); i++) {
    std::string path = "arcs[" + std::to_string(i) + "]";
    arcs.push_back({stringField(member(ja[i], "from", path), path + ".from"),
                    stringField(member(ja[i], "to", path), path + ".to")});
  }

  NetDocument out{Dpn(std::move(places), std::move(transitions),
                      std::move(variables), std::move(arcs)),
                  {},
                  std::move(valuation)};

  if (doc.contains("marking")) {
    const json& jm = doc["marking"];
    if (!jm.is_object())
      failAt(ErrorKind::ParseError, "marking", "expected an object");
    for (const auto& [place, v] : jm.items()) {
      if (!v.is_number_integer() || v.get<long long>() < 0)
        failAt(ErrorKind::ParseError, "marking." + place,
               "expected a nonnegative integer");
      out.initialMarking[place] = v.get<long long>();
    }
  }

  // surfaces unknown places and variables with their file location
  try {
    documentState(out);
  } catch (const Error& e) {
    failAt(e.kind(), "marking/variables", e.what());
  }
  return out;
}

std::string serializeNetJson(const NetDocument& doc) {
  ordered_json out;
  out["places"] = doc.net.places();

  out["variables"] = ordered_json::array();
  for (const std::string& v : doc.net.variables()) {
    ordered_json entry;
    entry["name"] = v;
    auto it = doc.initialValuation.find(v);
    if (it != doc.initialValuation.end()) entry["initial"] = ratValue(it->second);
    out["variables"].push_back(std::move(entry));
  }

  out["transitions"] = ordered_json::array();
  for (const Transition& t : doc.net.transitions()) {
    ordered_json entry;
    entry["name"] = t.name;
    entry["label"] = t.label;
    entry["pre"] = boolToString(t.pre);
    entry["post"] = boolToString(t.post);
    out["transitions"].push_back(std::move(entry));
  }

  out["arcs"] = ordered_json::array();
  for (const Arc& a : doc.net.arcs())
    out["arcs"].push_back(ordered_json{{"from", a.source}, {"to", a.target}});

  out["marking"] = ordered_json::object();
  for (const auto& [place, count] : doc.initialMarking)
    out["marking"][place] = count;

  return out.dump(2) + "\n";
}

Scheduler parseScheduler(const Dpn& net, std::string_view bytes) {
  json doc = parseJsonBytes(bytes);
  Scheduler sched;

  std::map<std::string, DistExpr> values;
  if (doc.contains("values")) {
    const json& jv = doc["values"];
    if (!jv.is_object())
      failAt(ErrorKind::ParseError, "values", "expected an object");
    for (const auto& [key, v] : jv.items())
      values.emplace(key, exprField(v, "values." + key, parseDistText));
  }

  const json& jt = member(doc, "transitions", "transitions");
  if (jt.is_string() && jt.get<std::string>() == "uniform") {
    sched = uniformScheduler(net, std::move(values));
  } else if (jt.is_object()) {
    sched.weights.resize(net.transitions().size());
    for (const auto& [name, v] : jt.items()) {
      int idx = 0;
      try {
        idx = net.transitionIndex(name);
      } catch (const Error& e) {
        failAt(e.kind(), "transitions." + name, e.what());
      }
      sched.weights[static_cast<std::size_t>(idx)] =
          exprField(v, "transitions." + name, parseArithText);
    }
    for (std::size_t i = 0; i < sched.weights.size(); i++) {
      if (!sched.weights[i])
        failAt(ErrorKind::InvalidScheduler, "transitions",
               "no weight for transition '" + net.transitions()[i].name + "'");
    }
    sched.valueDists = std::move(values);
  } else {
    failAt(ErrorKind::ParseError, "transitions",
           "expected \"uniform\" or an object of weight expressions");
  }

  validateScheduler(net, sched);
  return sched;
}

std::string serializeScheduler(const Dpn& net, const Scheduler& sched) {
  ordered_json out;
  out["transitions"] = ordered_json::object();
  for (std::size_t i = 0; i < net.transitions().size(); i++)
    out["transitions"][net.transitions()[i].name] =
        arithToString(sched.weights[i]);
  out["values"] = ordered_json::object();
  for (const auto& [key, dist] : sched.valueDists)
    out["values"][key] = distToString(dist);
  return out.dump(2) + "\n";
}

}  // namespace dpnppl
