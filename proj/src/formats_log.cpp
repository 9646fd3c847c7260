#include <json.hpp>
#include <iomanip>
#include <sstream>
#include <string>

#include "dpnppl/formats.hpp"

namespace dpnppl {

namespace {

using nlohmann::ordered_json;

ordered_json ratValue(const Rat& r) {
  if (r.isInteger()) return ordered_json(r.asInt());
  return ordered_json(r.str());
}

std::string writeJsonl(const EventLog& log) {
  ordered_json head;
  head["seed"] = log.meta.seed;
  head["scheduler"] = log.meta.schedulerId;
  head["goal"] = log.meta.goal;
  head["samples"] = log.meta.samples;
  head["acceptRate"] = log.meta.acceptRate.str();
  std::string out = head.dump() + "\n";

  for (const Trace& trace : log.traces) {
    ordered_json jt;
    jt["id"] = trace.id;
    jt["initial"]["marking"] = ordered_json::object();
    for (const auto& [place, count] : trace.initialMarking)
      jt["initial"]["marking"][place] = count;
    jt["initial"]["valuation"] = ordered_json::object();
    for (const auto& [var, value] : trace.initialValuation)
      jt["initial"]["valuation"][var] = ratValue(value);
    jt["events"] = ordered_json::array();
    for (const Event& ev : trace.events) {
      ordered_json je;
      je["activity"] = ev.activity;
      je["payload"] = ordered_json::object();
      for (const auto& [key, value] : ev.payload)
        je["payload"][key] = ratValue(value);
      jt["events"].push_back(std::move(je));
    }
    out += jt.dump() + "\n";
  }
  return out;
}

std::string xmlEscape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string xesNumber(const Rat& r) {
  if (r.isInteger()) return r.str();
  std::ostringstream out;
  out << std::setprecision(17) << r.approx();
  return out.str();
}

void xesAttr(std::string& out, int depth, const char* kind,
             const std::string& key, const std::string& value) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  out += "<" + std::string(kind) + " key=\"" + xmlEscape(key) + "\" value=\"" +
         xmlEscape(value) + "\"/>\n";
}

std::string writeXes(const EventLog& log) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<log xes.version=\"1.0\">\n";
  xesAttr(out, 1, "string", "generator:seed", std::to_string(log.meta.seed));
  xesAttr(out, 1, "string", "generator:scheduler", log.meta.schedulerId);
  xesAttr(out, 1, "string", "generator:goal", log.meta.goal);
  xesAttr(out, 1, "string", "generator:samples",
          std::to_string(log.meta.samples));
  xesAttr(out, 1, "string", "generator:acceptRate", log.meta.acceptRate.str());
  for (const Trace& trace : log.traces) {
    out += "  <trace>\n";
    xesAttr(out, 2, "string", "concept:name", trace.id);
    for (const auto& [place, count] : trace.initialMarking)
      xesAttr(out, 2, "float", "initial:marking:" + place,
              std::to_string(count));
    for (const auto& [var, value] : trace.initialValuation)
      xesAttr(out, 2, "float", "initial:" + var, xesNumber(value));
    for (const Event& ev : trace.events) {
      out += "    <event>\n";
      xesAttr(out, 3, "string", "concept:name", ev.activity);
      for (const auto& [key, value] : ev.payload)
        xesAttr(out, 3, "float", key, xesNumber(value));
      out += "    </event>\n";
    }
    out += "  </trace>\n";
  }
  out += "</log>\n";
  return out;
}

}  // namespace

std::string writeLog(const EventLog& log, LogFormat format) {
  if (format == LogFormat::Jsonl) return writeJsonl(log);
  return writeXes(log);
}

}  // namespace dpnppl
