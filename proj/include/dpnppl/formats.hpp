#pragma once

#include <map>
#include <string>
#include <string_view>

#include "dpnppl/dpn.hpp"
#include "dpnppl/mining.hpp"

namespace dpnppl {

// A parsed net file: the validated net plus whatever initial state the file
// declared. Omitted places hold zero tokens, omitted variables start at zero.
struct NetDocument {
  Dpn net;
  std::map<std::string, long long> initialMarking;
  std::map<std::string, Rat> initialValuation;

  friend bool operator==(const NetDocument& a, const NetDocument& b) {
    return a.net == b.net && a.initialMarking == b.initialMarking &&
           a.initialValuation == b.initialValuation;
  }
};

NetState documentState(const NetDocument& doc);

// PNML subset: place, transition, and arc elements under pnml/net/page (the
// page level is optional). Transitions carry the activity label in
// name/text and the guard in a `guard` attribute; the guard's conjuncts are
// split by primed-variable occurrence into precondition and postcondition.
// Case variables are declared as <variable name=".." initial=".."/>. Arc
// inscriptions other than 1 and the reserved silent label "tau" are
// rejected.
NetDocument parsePnml(std::string_view bytes);

NetDocument parseNetJson(std::string_view bytes);
std::string serializeNetJson(const NetDocument& doc);

// Scheduler file: {"transitions": "uniform" | {name: weight expression},
// "values": {primed name: distribution expression}}.
Scheduler parseScheduler(const Dpn& net, std::string_view bytes);
std::string serializeScheduler(const Dpn& net, const Scheduler& sched);

enum class LogFormat { Jsonl, XesXml };

// Deterministic serialization; jsonl keeps exact rationals, the XES flavor
// renders payloads as float attributes.
std::string writeLog(const EventLog& log, LogFormat format);

}  // namespace dpnppl
