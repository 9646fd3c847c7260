#include <pybind11/pybind11.h>

#include <string>
#include <utility>

#include "dpnppl/error.hpp"
#include "dpnppl/formats.hpp"
#include "dpnppl/mining.hpp"

namespace py = pybind11;
using namespace dpnppl;

namespace {

// Same content sniffing as the command line tool: a leading '<' means PNML,
// anything else the native JSON form.
NetDocument parseNet(const std::string& text) {
  std::size_t i = text.find_first_not_of(" \t\r\n");
  if (i != std::string::npos && text[i] == '<') return parsePnml(text);
  return parseNetJson(text);
}

struct Model {
  NetDocument doc;
  Scheduler sched;
  GoalSpec goal;
  NetState initial;
};

Model load(const std::string& netText, const std::string& schedulerText,
           const std::string& goalText) {
  NetDocument doc = parseNet(netText);
  Scheduler sched = parseScheduler(doc.net, schedulerText);
  GoalSpec goal{parseBoolText(goalText)};
  validateGoal(doc.net, goal);
  NetState initial = documentState(doc);
  return Model{std::move(doc), std::move(sched), std::move(goal),
               std::move(initial)};
}

py::object ratToPy(const Rat& value) {
  if (value.isInteger()) return py::int_(value.asInt());
  return py::str(value.str());
}

py::list runToPy(const Run& run) {
  py::list steps;
  for (const Step& step : run) {
    py::dict binding;
    for (const auto& [name, value] : step.binding)
      binding[py::str(name)] = ratToPy(value);
    py::dict entry;
    entry["transition"] = step.transition;
    entry["binding"] = binding;
    steps.append(entry);
  }
  return steps;
}

py::dict reportToPy(const DistributionReport& report) {
  py::list runs;
  for (const auto& [run, p] : report.runs) {
    py::dict entry;
    entry["probability"] = p.str();
    entry["approx"] = p.approx();
    entry["run"] = runToPy(run);
    runs.append(entry);
  }
  py::dict out;
  out["runs"] = std::move(runs);
  out["residual"] = report.residual.str();
  out["noFeasibleExecution"] = report.noFeasibleExecution;
  return out;
}

std::string translateText(const std::string& net, const std::string& scheduler,
                          const std::string& goal,
                          const std::string& dialect) {
  Model m = load(net, scheduler, goal);
  Dialect d;
  if (dialect == "native")
    d = Dialect::Native;
  else if (dialect == "webppl")
    d = Dialect::Webppl;
  else
    throw Error(ErrorKind::UnsupportedFeature,
                "unknown dialect '" + dialect + "', expected native or webppl");
  return emitText(buildProgram(m.doc.net, m.sched, m.goal, m.initial), d);
}

py::dict simulateLog(const std::string& net, const std::string& scheduler,
                     const std::string& goal, long long runs,
                     std::uint64_t seed, const std::string& format,
                     long long maxRejections, long long maxSteps) {
  Model m = load(net, scheduler, goal);
  LogFormat fmt;
  if (format == "jsonl")
    fmt = LogFormat::Jsonl;
  else if (format == "xes")
    fmt = LogFormat::XesXml;
  else
    throw Error(ErrorKind::UnsupportedFeature,
                "unknown format '" + format + "', expected jsonl or xes");

  SampleBudgets budgets;
  budgets.maxRejections = maxRejections;
  budgets.maxSteps = maxSteps;
  EventLog log =
      generateLog(m.doc.net, m.sched, m.goal, m.initial, runs, seed, budgets);

  py::dict out;
  out["log"] = writeLog(log, fmt);
  out["acceptRate"] = log.meta.acceptRate.str();
  out["acceptRateApprox"] = log.meta.acceptRate.approx();
  out["samples"] = log.meta.samples;
  return out;
}

py::dict inferDistribution(const std::string& net,
                           const std::string& scheduler,
                           const std::string& goal, long long maxDepth,
                           const std::string& observe) {
  Model m = load(net, scheduler, goal);
  Query q;
  if (!observe.empty()) q.condition = parseBoolText(observe);
  return reportToPy(queryDistribution(m.doc.net, m.sched, m.goal, m.initial, q,
                                      maxDepth + 1));
}

py::dict whatIfComparison(const std::string& net, const std::string& scheduler,
                          const std::string& altScheduler,
                          const std::string& goal, long long maxDepth,
                          const std::string& observe) {
  Model m = load(net, scheduler, goal);
  Scheduler alt = parseScheduler(m.doc.net, altScheduler);
  Query q;
  if (!observe.empty()) q.condition = parseBoolText(observe);
  WhatIfReport report = whatIf(m.doc.net, m.sched, alt, m.goal, m.initial, q,
                               maxDepth + 1);

  py::dict out;
  out["base"] = reportToPy(report.base);
  out["alt"] = reportToPy(report.alt);
  out["tvDistance"] = report.tvDistance.str();
  out["tvDistanceApprox"] = report.tvDistance.approx();
  return out;
}

}  // namespace

PYBIND11_MODULE(dpnppl, m) {
  m.doc() =
      "Data Petri net simulation toolkit: translates a net, a scheduler, and "
      "a goal into a probabilistic program, then runs exact or sampling "
      "queries on it. Nets and schedulers are passed as document text, the "
      "goal as an expression over case variables and marking(p) references. "
      "Deadlocked states always count as goals.";

  py::register_exception<Error>(m, "ToolkitError");

  m.def("translate", &translateText, py::arg("net"), py::arg("scheduler"),
        py::arg("goal"), py::arg("dialect") = "native",
        "Emit the simulation program for a net in the chosen dialect "
        "(native or webppl).");

  m.def("simulate", &simulateLog, py::arg("net"), py::arg("scheduler"),
        py::arg("goal"), py::arg("runs"), py::arg("seed") = 0,
        py::arg("format") = "jsonl", py::arg("max_rejections") = 1000000,
        py::arg("max_steps") = 1000000,
        "Sample goal-reaching runs and return the serialized event log "
        "with its acceptance rate.");

  m.def("infer", &inferDistribution, py::arg("net"), py::arg("scheduler"),
        py::arg("goal"), py::arg("max_depth"), py::arg("observe") = "",
        "Exact run distribution up to max_depth steps, optionally "
        "conditioned on an observation over final values and #t counters.");

  m.def("whatif", &whatIfComparison, py::arg("net"), py::arg("scheduler"),
        py::arg("alt_scheduler"), py::arg("goal"), py::arg("max_depth"),
        py::arg("observe") = "",
        "Run the same query under two schedulers and report the total "
        "variation distance between the run distributions.");
}
