#include <string>
#include <vector>

#include "dpnppl/error.hpp"
#include "dpnppl/ppl.hpp"

namespace dpnppl {

namespace {

CommandPtr parseCommand(Scanner& sc);

MsgExpr parseMsg(Scanner& sc) {
  MsgExpr msg;
  msg.label = sc.expectIdent("activity label");
  if (sc.tryPunct(",")) {
    sc.expectPunct("{");
    if (!sc.tryPunct("}")) {
      do {
        std::string key = sc.expectIdent("payload key");
        sc.expectPunct(":");
        msg.fields.emplace_back(key, sc.expectIdent("variable name"));
      } while (sc.tryPunct(","));
      sc.expectPunct("}");
    }
  }
  return msg;
}

GuardedPtr parseGuarded(Scanner& sc, const char* terminator) {
  std::vector<GuardedPtr> branches;
  do {
    BoolPtr guard = parseBool(sc);
    sc.expectPunct("->");
    sc.expectPunct("(");
    ArithPtr weight = parseArith(sc);
    sc.expectPunct(")");
    sc.expectPunct(":");
    branches.push_back(gBranch(guard, weight, parseCommand(sc)));
  } while (sc.tryPunct("[]"));
  if (!sc.tryIdent(terminator))
    sc.error(std::string("expected '") + terminator + "'");
  return choiceOf(branches);
}

CommandPtr parseSimple(Scanner& sc) {
  if (sc.tryIdent("skip")) return cSkip();
  if (sc.tryIdent("observe")) {
    sc.expectPunct("(");
    BoolPtr cond = parseBool(sc);
    sc.expectPunct(")");
    return cObserve(cond);
  }
  if (sc.tryIdent("log")) {
    sc.expectPunct("(");
    MsgExpr msg = parseMsg(sc);
    sc.expectPunct(")");
    return cLog(std::move(msg));
  }
  if (sc.tryIdent("if")) return cCond(parseGuarded(sc, "fi"));
  if (sc.tryIdent("do")) return cLoop(parseGuarded(sc, "od"));
  std::string var = sc.expectIdent("variable name");
  sc.expectPunct(":=");
  return cAssign(std::move(var), parseDist(sc));
}

bool startsCommand(const Scanner& sc) {
  const Token& t = sc.peek();
  if (t.kind != Token::Kind::Ident) return false;
  if (t.text == "observe" || t.text == "log" || t.text == "do" ||
      t.text == "if" || t.text == "skip")
    return true;
  const Token& after = sc.peek(1);
  return after.kind == Token::Kind::Punct && after.text == ":=";
}

CommandPtr parseCommand(Scanner& sc) {
  CommandPtr head = parseSimple(sc);
  // A semicolon continues the sequence only if a command follows, so a
  // trailing one before od/fi or the end of input is harmless.
  if (sc.tryPunct(";") && startsCommand(sc))
    return cSeq(std::move(head), parseCommand(sc));
  return head;
}

void printIndent(std::string& out, int indent) {
  out.append(static_cast<std::size_t>(indent), ' ');
}

void printMsg(std::string& out, const MsgExpr& msg) {
  out += msg.label;
  if (msg.fields.empty()) return;
  out += ", {";
  for (std::size_t i = 0; i < msg.fields.size(); i++) {
    if (i) out += ", ";
    out += msg.fields[i].first + ": " + msg.fields[i].second;
  }
  out += "}";
}

void printCmd(std::string& out, const CommandPtr& c, int indent);

void printGuarded(std::string& out, const GuardedPtr& gc, int indent) {
  std::vector<const GuardedCommand::Branch*> branches = branchesOf(*gc);
  for (std::size_t i = 0; i < branches.size(); i++) {
    printIndent(out, indent);
    if (i) out += "[] ";
    out += boolToString(branches[i]->guard) + " -> (" +
           arithToString(branches[i]->weight) + "):\n";
    printCmd(out, branches[i]->body, indent + 4);
    out += "\n";
  }
}

void printCmd(std::string& out, const CommandPtr& c, int indent) {
  using C = Command;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, C::Skip>) {
          printIndent(out, indent);
          out += "skip";
        } else if constexpr (std::is_same_v<T, C::Assign>) {
          printIndent(out, indent);
          out += x.var + " := " + distToString(x.dist);
        } else if constexpr (std::is_same_v<T, C::Observe>) {
          printIndent(out, indent);
          out += "observe(" + boolToString(x.cond) + ")";
        } else if constexpr (std::is_same_v<T, C::Log>) {
          printIndent(out, indent);
          out += "log(";
          printMsg(out, x.msg);
          out += ")";
        } else if constexpr (std::is_same_v<T, C::Seq>) {
          printCmd(out, x.first, indent);
          out += ";\n";
          printCmd(out, x.second, indent);
        } else if constexpr (std::is_same_v<T, C::Cond>) {
          printIndent(out, indent);
          out += "if\n";
          printGuarded(out, x.branches, indent + 2);
          printIndent(out, indent);
          out += "fi";
        } else {
          printIndent(out, indent);
          out += "do\n";
          printGuarded(out, x.branches, indent + 2);
          printIndent(out, indent);
          out += "od";
        }
      },
      c->node);
}

}  // namespace

Program parseProgram(Scanner& sc) {
  Program p;
  if (sc.tryIdent("var")) {
    do {
      p.vars.push_back(sc.expectIdent("variable name"));
    } while (sc.tryPunct(","));
    sc.expectPunct(";");
  }
  p.body = parseCommand(sc);
  validateProgram(p);
  return p;
}

Program parseProgramText(std::string_view text) {
  Scanner sc(text);
  Program p = parseProgram(sc);
  if (!sc.atEnd()) sc.error("unexpected trailing input");
  return p;
}

std::string printCommand(const CommandPtr& c, int indent) {
  std::string out;
  printCmd(out, c, indent);
  return out;
}

std::string printProgram(const Program& p) {
  std::string out;
  if (!p.vars.empty()) {
    out += "var ";
    for (std::size_t i = 0; i < p.vars.size(); i++) {
      if (i) out += ", ";
      out += p.vars[i];
    }
    out += ";\n";
  }
  out += printCommand(p.body, 0);
  out += "\n";
  return out;
}

}  // namespace dpnppl
