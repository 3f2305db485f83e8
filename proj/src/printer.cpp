#include <sstream>

#include "deon/syntax.hpp"

namespace deon {

namespace {

using K = Formula::Kind;

// Precedence levels: iff=1 < implies=2 < or=3 < and=4 < unary=5 < atom=6.
int level_of(const Formula& f) {
  switch (f.kind()) {
    case K::Iff: return 1;
    case K::Implies: return 2;
    case K::Or: return 3;
    case K::And: return 4;
    case K::Not:
    case K::Box:
    case K::Dia:
    case K::BoxRel:
    case K::BoxAv:
    case K::BoxPv:
    case K::Ob:
    case K::Perm:
    case K::Forb:
    case K::ActualOb:
    case K::PrimaryOb:
    case K::AgentOb:
      return 5;
    default:
      return 6;  // constants, atoms, O{.|.}, stit(.,.)
  }
}

// in_slot: printing inside O{ . | . }, where a bare '|' would be read as
// the separator; Or gets parenthesized along the unparenthesized spine.
void print(const Formula& f, int min_level, bool in_slot, std::string& out);

void parens(const Formula& f, std::string& out) {
  out += '(';
  print(f, 1, false, out);
  out += ')';
}

void print_slot(const Formula& f, std::string& out) {
  if (f.kind() == K::Or)
    parens(f, out);
  else
    print(f, 1, true, out);
}

void print(const Formula& f, int min_level, bool in_slot, std::string& out) {
  if (level_of(f) < min_level || (in_slot && f.kind() == K::Or)) {
    parens(f, out);
    return;
  }
  switch (f.kind()) {
    case K::True: out += "true"; return;
    case K::False: out += "false"; return;
    case K::Prop: out += f.sym(); return;
    case K::Not:
      out += '~';
      print(f.child(0), 5, in_slot, out);
      return;
    case K::And:
      print(f.child(0), 4, in_slot, out);
      out += " & ";
      print(f.child(1), 5, in_slot, out);
      return;
    case K::Or:
      print(f.child(0), 3, false, out);
      out += " | ";
      print(f.child(1), 4, false, out);
      return;
    case K::Implies:
      print(f.child(0), 3, in_slot, out);
      out += " -> ";
      print(f.child(1), 2, in_slot, out);
      return;
    case K::Iff:
      print(f.child(0), 1, in_slot, out);
      out += " <-> ";
      print(f.child(1), 2, in_slot, out);
      return;
    case K::Box: out += "[] "; print(f.child(0), 5, in_slot, out); return;
    case K::Dia: out += "<> "; print(f.child(0), 5, in_slot, out); return;
    case K::BoxRel:
      out += "[rel " + f.sym() + "] ";
      print(f.child(0), 5, in_slot, out);
      return;
    case K::BoxAv: out += "[av] "; print(f.child(0), 5, in_slot, out); return;
    case K::BoxPv: out += "[pv] "; print(f.child(0), 5, in_slot, out); return;
    case K::Ob: out += "O "; print(f.child(0), 5, in_slot, out); return;
    case K::Perm: out += "P "; print(f.child(0), 5, in_slot, out); return;
    case K::Forb: out += "Fb "; print(f.child(0), 5, in_slot, out); return;
    case K::ActualOb: out += "Oa "; print(f.child(0), 5, in_slot, out); return;
    case K::PrimaryOb: out += "Op "; print(f.child(0), 5, in_slot, out); return;
    case K::AgentOb:
      out += "O[" + f.sym() + "] ";
      print(f.child(0), 5, in_slot, out);
      return;
    case K::CondOb:
      out += f.sym().empty() ? "O{" : "O[" + f.sym() + "]{";
      print_slot(f.child(0), out);
      out += " | ";
      print_slot(f.child(1), out);
      out += '}';
      return;
    case K::Stit:
      out += "stit(" + f.sym() + ", ";
      print(f.child(0), 1, false, out);
      out += ')';
      return;
  }
}

}  // namespace

std::string print_formula(const Formula& f) {
  std::string out;
  print(f, 1, false, out);
  return out;
}

std::string print_problem(const Problem& p) {
  std::ostringstream os;
  os << "theory " << to_string(p.signature.theory) << "\n";
  for (const auto& a : p.signature.atoms) os << "atom " << a.name << "\n";
  for (const auto& a : p.signature.agents) os << "agent " << a.name << "\n";
  for (const auto& g : p.globals) os << "global " << g.label << ": " << print_formula(g.formula) << "\n";
  for (const auto& l : p.locals) os << "local " << l.label << ": " << print_formula(l.formula) << "\n";
  for (const auto& q : p.queries) {
    os << "query " << q.label << ": ";
    if (q.kind == QueryKind::Consistent)
      os << "consistent";
    else
      os << "entails " << print_formula(*q.goal);
    if (q.expected) os << " expect " << *q.expected;
    os << "\n";
  }
  return os.str();
}

}  // namespace deon
