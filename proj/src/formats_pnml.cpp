#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "dpnppl/error.hpp"
#include "dpnppl/formats.hpp"

namespace dpnppl {

namespace {

namespace pt = boost::property_tree;

[[noreturn]] void failAt(ErrorKind kind, const std::string& path,
                         const std::string& message) {
  fail(kind, path + ": " + message);
}

std::string idOf(const pt::ptree& node, const std::string& path) {
  auto id = node.get_optional<std::string>("<xmlattr>.id");
  if (!id) failAt(ErrorKind::XmlError, path, "missing id attribute");
  return *id;
}

void splitConjuncts(const BoolPtr& e, std::vector<BoolPtr>& out) {
  if (const auto* b = std::get_if<BoolExpr::Bin>(&e->node); b && b->conj) {
    splitConjuncts(b->lhs, out);
    splitConjuncts(b->rhs, out);
    return;
  }
  out.push_back(e);
}

bool mentionsPrimed(const BoolPtr& e) {
  NameRefs refs;
  collectRefs(e, refs);
  for (const std::string& v : refs.vars)
    if (isPrimedName(v)) return true;
  return false;
}

// Conjuncts that read a primed variable form the postcondition, the rest
// the precondition. A guard without top-level conjunction stays whole.
std::pair<BoolPtr, BoolPtr> splitGuard(const std::string& text,
                                       const std::string& path) {
  BoolPtr guard;
  try {
    guard = parseBoolText(text);
  } catch (const Error& e) {
    failAt(e.kind(), path, e.what());
  }
  std::vector<BoolPtr> conjuncts, pre, post;
  splitConjuncts(guard, conjuncts);
  for (const BoolPtr& c : conjuncts)
    (mentionsPrimed(c) ? post : pre).push_back(c);
  return {bAndAll(pre), bAndAll(post)};
}

struct RawPnml {
  std::vector<std::string> places;
  std::vector<Transition> transitions;
  std::vector<std::string> variables;
  std::vector<Arc> arcs;
  std::map<std::string, long long> marking;
  std::map<std::string, Rat> valuation;
};

void collectElements(const pt::ptree& parent, RawPnml& out) {
  for (const auto& [tag, node] : parent) {
    if (tag == "page") {
      collectElements(node, out);
    } else if (tag == "variable") {
      auto name = node.get_optional<std::string>("<xmlattr>.name");
      if (!name) failAt(ErrorKind::XmlError, "net/variable", "missing name attribute");
      out.variables.push_back(*name);
      if (auto initial = node.get_optional<std::string>("<xmlattr>.initial")) {
        try {
          out.valuation[*name] = Rat::parse(*initial);
        } catch (const Error& e) {
          failAt(e.kind(), "net/variable[" + *name + "]/initial", e.what());
        }
      }
    } else if (tag == "place") {
      std::string id = idOf(node, "net/place");
      out.places.push_back(id);
      if (auto tokens = node.get_optional<long long>("initialMarking.text")) {
        if (*tokens < 0)
          failAt(ErrorKind::XmlError, "net/place[" + id + "]/initialMarking",
                 "negative token count");
        out.marking[id] = *tokens;
      }
    } else if (tag == "transition") {
      std::string id = idOf(node, "net/transition");
      Transition t;
      t.name = id;
      t.label = node.get("name.text", std::string());
      if (auto guard = node.get_optional<std::string>("<xmlattr>.guard")) {
        auto [pre, post] = splitGuard(*guard, "net/transition[" + id + "]/guard");
        t.pre = pre;
        t.post = post;
      } else {
        t.pre = bConst(true);
        t.post = bConst(true);
      }
      out.transitions.push_back(std::move(t));
    } else if (tag == "arc") {
      std::string id = idOf(node, "net/arc");
      auto source = node.get_optional<std::string>("<xmlattr>.source");
      auto target = node.get_optional<std::string>("<xmlattr>.target");
      if (!source || !target)
        failAt(ErrorKind::XmlError, "net/arc[" + id + "]",
               "missing source or target attribute");
      if (auto weight = node.get_optional<std::string>("inscription.text")) {
        if (*weight != "1")
          failAt(ErrorKind::UnsupportedFeature, "net/arc[" + id + "]",
                 "arc weight " + *weight + " (only weight 1 is supported)");
      }
      out.arcs.push_back({*source, *target});
    }
  }
}

}  // namespace

NetDocument parsePnml(std::string_view bytes) {
  pt::ptree doc;
  try {
    std::istringstream in{std::string(bytes)};
    pt::read_xml(in, doc);
  } catch (const pt::xml_parser_error& e) {
    fail(ErrorKind::XmlError,
         "line " + std::to_string(e.line()) + ": " + e.message());
  }

  auto net = doc.get_child_optional("pnml.net");
  if (!net) fail(ErrorKind::XmlError, "pnml/net: element not found");

  RawPnml raw;
  collectElements(*net, raw);

  NetDocument out{Dpn(std::move(raw.places), std::move(raw.transitions),
                      std::move(raw.variables), std::move(raw.arcs)),
                  std::move(raw.marking), std::move(raw.valuation)};
  documentState(out);
  return out;
}

}  // namespace dpnppl
