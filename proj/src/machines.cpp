#include "countreg/machines.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "text_util.hpp"

namespace countreg {

namespace {

bool sorted_contains(const std::vector<int>& v, int x) { return std::binary_search(v.begin(), v.end(), x); }

void sort_unique(std::vector<int>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

int CounterMachine::add_state(const std::string& name) {
  states.push_back(name);
  return num_states() - 1;
}

bool CounterMachine::is_accepting(int q) const { return sorted_contains(accepting, q); }

void CounterMachine::validate() {
  if (counters < 1) throw Error("counter machine needs at least one counter");
  if (static_cast<int>(reversals.size()) != counters) throw Error("reversal bound count differs from counter count");
  for (int t : reversals)
    if (t < 1) throw Error("reversal bounds must be at least 1");
  sort_unique(accepting);
  int n = num_states();
  if (initial < 0 || initial >= n) throw Error("initial state out of range");
  for (int q : accepting)
    if (q < 0 || q >= n) throw Error("accepting state out of range");
  for (auto& t : trans) {
    if (t.from < 0 || t.from >= n || t.to < 0 || t.to >= n) throw Error("transition state out of range");
    if (t.label != kEps && (t.label < 0 || t.label >= alphabet.size())) throw Error("transition label out of range");
    if (static_cast<int>(t.guard.size()) != counters || static_cast<int>(t.delta.size()) != counters)
      throw Error("guard/delta arity differs from counter count");
    for (int i = 0; i < counters; ++i) {
      if (t.delta[i] < -1 || t.delta[i] > 1) throw Error("delta entries must be -1, 0 or +1");
      if (t.delta[i] == -1 && t.guard[i] != Guard::NonZero)
        throw Error("a decrement of counter " + std::to_string(i + 1) + " requires guard n");
    }
  }
}

bool CounterMachine::is_deterministic() const {
  for (int q = 0; q < num_states(); ++q) {
    for (int mask = 0; mask < (1 << counters); ++mask) {
      int eps = 0;
      std::vector<int> per(alphabet.size(), 0);
      bool any_letter = false;
      for (auto& t : trans) {
        if (t.from != q) continue;
        bool ok = true;
        for (int i = 0; i < counters && ok; ++i) {
          bool nz = mask >> i & 1;
          if (t.guard[i] == Guard::Zero && nz) ok = false;
          if (t.guard[i] == Guard::NonZero && !nz) ok = false;
        }
        if (!ok) continue;
        if (t.label == kEps) {
          ++eps;
        } else {
          any_letter = true;
          if (++per[t.label] > 1) return false;
        }
      }
      if (eps > 1 || (eps == 1 && any_letter)) return false;
    }
  }
  return true;
}

bool PushdownMachine::is_accepting(int q) const { return sorted_contains(accepting, q); }

void PushdownMachine::validate() {
  if (stack_symbols.empty()) throw Error("pushdown machine needs a stack alphabet");
  if (reversals < 1) throw Error("reversal bound must be at least 1");
  sort_unique(accepting);
  int n = num_states(), g = static_cast<int>(stack_symbols.size());
  if (initial < 0 || initial >= n) throw Error("initial state out of range");
  for (auto& t : trans) {
    if (t.from < 0 || t.from >= n || t.to < 0 || t.to >= n) throw Error("transition state out of range");
    if (t.top < 0 || t.top >= g) throw Error("stack symbol out of range");
    if (t.op == StackOp::Pop && t.top == 0) throw Error("the bottom marker cannot be popped");
    if (t.op == StackOp::Push) {
      if (t.push.empty()) throw Error("push words must be non-empty");
      for (size_t i = 0; i < t.push.size(); ++i) {
        if (t.push[i] < 0 || t.push[i] >= g) throw Error("stack symbol out of range");
        bool last = i + 1 == t.push.size();
        if (t.push[i] == 0 && !(last && t.top == 0)) throw Error("the bottom marker may only stay at the bottom");
      }
      if (t.top == 0 && t.push.back() != 0) throw Error("pushing on the bottom marker must keep it");
    }
  }
}

bool TapeTransition::operator<(const TapeTransition& o) const {
  return std::tie(from, label, read, write, move, to) < std::tie(o.from, o.label, o.read, o.write, o.move, o.to);
}

bool TapeTransition::operator==(const TapeTransition& o) const {
  return std::tie(from, label, read, write, move, to) == std::tie(o.from, o.label, o.read, o.write, o.move, o.to);
}

int WorktapeMachine::add_state(const std::string& name) {
  states.push_back(name);
  return num_states() - 1;
}

int WorktapeMachine::tape_index(const std::string& s) const {
  for (size_t i = 0; i < tape_symbols.size(); ++i)
    if (tape_symbols[i] == s) return static_cast<int>(i);
  return -1;
}

bool WorktapeMachine::is_accepting(int q) const { return sorted_contains(accepting, q); }

void WorktapeMachine::validate() {
  if (tape_symbols.empty() || tape_symbols[0] != "_") throw Error("tape alphabet must start with the blank '_'");
  if (reversals < 1) throw Error("reversal bound must be at least 1");
  sort_unique(accepting);
  std::sort(trans.begin(), trans.end());
  trans.erase(std::unique(trans.begin(), trans.end()), trans.end());
  int n = num_states(), g = static_cast<int>(tape_symbols.size());
  if (initial < 0 || initial >= n) throw Error("initial state out of range");
  for (auto& t : trans) {
    if (t.from < 0 || t.from >= n || t.to < 0 || t.to >= n) throw Error("transition state out of range");
    if (t.read < 0 || t.read >= g || t.write < 0 || t.write >= g) throw Error("tape symbol out of range");
    if (t.label != kEps && (t.label < 0 || t.label >= alphabet.size())) throw Error("transition label out of range");
  }
}

// ---------------------------------------------------------------- parsing

namespace {

struct Header {
  std::string type;
  Alphabet alphabet;
  std::vector<std::string> states;
  std::map<std::string, int> sid;
  std::string initial;
  std::vector<std::string> accepting;
  bool have_alpha = false;
};

int lookup_state(const Header& h, const std::string& s, int line) {
  auto it = h.sid.find(s);
  if (it == h.sid.end()) throw ParseError("unknown state '" + s + "'", line);
  return it->second;
}

int lookup_label(const Header& h, const std::string& s, int line) {
  if (s == "eps") return kEps;
  int i = h.alphabet.index(s);
  if (i < 0) throw ParseError("unknown symbol '" + s + "'", line);
  return i;
}

// returns true when the directive was a shared header directive
bool header_directive(Header& h, const detail::Line& ln) {
  auto& t = ln.tokens;
  if (t[0] == "type") {
    if (t.size() != 2) throw ParseError("type expects one argument", ln.number);
    h.type = t[1];
  } else if (t[0] == "alphabet") {
    try {
      h.alphabet = Alphabet(std::vector<std::string>(t.begin() + 1, t.end()));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), ln.number);
    }
    h.have_alpha = true;
  } else if (t[0] == "states") {
    for (size_t i = 1; i < t.size(); ++i) {
      if (!h.sid.emplace(t[i], static_cast<int>(h.states.size())).second)
        throw ParseError("duplicate state '" + t[i] + "'", ln.number);
      h.states.push_back(t[i]);
    }
  } else if (t[0] == "initial") {
    if (t.size() != 2) throw ParseError("initial expects one state", ln.number);
    h.initial = t[1];
  } else if (t[0] == "accepting") {
    h.accepting.insert(h.accepting.end(), t.begin() + 1, t.end());
  } else {
    return false;
  }
  return true;
}

void finish_header(const Header& h, int& initial, std::vector<int>& accepting) {
  if (!h.have_alpha) throw ParseError("missing alphabet directive");
  if (h.states.empty()) throw ParseError("missing states directive");
  if (h.initial.empty()) throw ParseError("missing initial directive");
  initial = lookup_state(h, h.initial, 0);
  for (auto& s : h.accepting) accepting.push_back(lookup_state(h, s, 0));
}

template <class F>
void wrap_validate(F&& f) {
  try {
    f();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

std::vector<int> parse_symbol_word(const std::string& w, const std::vector<std::string>& syms, int line) {
  auto find = [&](const std::string& s) {
    for (size_t i = 0; i < syms.size(); ++i)
      if (syms[i] == s) return static_cast<int>(i);
    throw ParseError("unknown stack symbol '" + s + "'", line);
  };
  std::vector<int> out;
  bool compact = true;
  for (auto& s : syms)
    if (s.size() != 1) compact = false;
  if (compact && w.find('.') == std::string::npos) {
    for (char c : w) out.push_back(find(std::string(1, c)));
  } else {
    for (auto& part : detail::split_on(w, '.')) out.push_back(find(part));
  }
  return out;
}

std::string guard_name(Guard g) { return g == Guard::Zero ? "z" : g == Guard::NonZero ? "n" : "*"; }

std::string delta_name(int d) { return d > 0 ? "+1" : d < 0 ? "-1" : "0"; }

std::string move_name(Move m) { return m == Move::L ? "L" : m == Move::R ? "R" : "S"; }

std::string label_name(const Alphabet& a, int l) { return l == kEps ? "eps" : a.name(l); }

}  // namespace

CounterMachine parse_counter_machine(const std::string& text) {
  Header h;
  CounterMachine m;
  bool have_counters = false;
  std::vector<std::vector<std::string>> pending;
  std::vector<int> pending_lines;
  std::vector<long> rev;
  for (auto& ln : detail::tokenize_lines(text)) {
    if (header_directive(h, ln)) continue;
    auto& t = ln.tokens;
    if (t[0] == "counters") {
      if (t.size() != 2) throw ParseError("counters expects one number", ln.number);
      m.counters = static_cast<int>(detail::parse_long(t[1], ln.number));
      have_counters = true;
    } else if (t[0] == "reversals") {
      for (size_t i = 1; i < t.size(); ++i) rev.push_back(detail::parse_long(t[i], ln.number));
    } else if (t[0] == "accept") {
      if (t.size() != 2 || (t[1] != "final" && t[1] != "final-zero"))
        throw ParseError("accept must be final or final-zero", ln.number);
      m.mode = t[1] == "final" ? AcceptMode::FinalState : AcceptMode::FinalZero;
    } else if (t[0] == "trans") {
      if (t.size() != 6) throw ParseError("trans expects: trans <from> <symbol|eps> <guards> <to> <deltas>", ln.number);
      pending.push_back(t);
      pending_lines.push_back(ln.number);
    } else {
      throw ParseError("unknown directive '" + t[0] + "'", ln.number);
    }
  }
  if (h.type != "ncm" && h.type != "dcm") throw ParseError("type must be ncm or dcm");
  if (!have_counters) throw ParseError("missing counters directive");
  if (rev.size() == 1) rev.assign(m.counters, rev[0]);
  if (static_cast<int>(rev.size()) != m.counters) throw ParseError("reversals must list one bound per counter");
  for (long r : rev) m.reversals.push_back(static_cast<int>(r));
  m.alphabet = h.alphabet;
  m.states = h.states;
  finish_header(h, m.initial, m.accepting);
  for (size_t k = 0; k < pending.size(); ++k) {
    auto& t = pending[k];
    int line = pending_lines[k];
    CounterTransition tr;
    tr.from = lookup_state(h, t[1], line);
    tr.label = lookup_label(h, t[2], line);
    tr.to = lookup_state(h, t[4], line);
    auto gs = detail::split_on(t[3], ',');
    auto ds = detail::split_on(t[5], ',');
    if (static_cast<int>(gs.size()) != m.counters || static_cast<int>(ds.size()) != m.counters)
      throw ParseError("guard/delta lists must have one entry per counter", line);
    for (auto& g : gs) {
      if (g == "z") tr.guard.push_back(Guard::Zero);
      else if (g == "n") tr.guard.push_back(Guard::NonZero);
      else if (g == "*") tr.guard.push_back(Guard::Any);
      else throw ParseError("guard must be z, n or *", line);
    }
    for (auto& d : ds) {
      if (d == "+1" || d == "1") tr.delta.push_back(1);
      else if (d == "0") tr.delta.push_back(0);
      else if (d == "-1") tr.delta.push_back(-1);
      else throw ParseError("delta must be -1, 0 or +1", line);
    }
    for (int i = 0; i < m.counters; ++i)
      if (tr.delta[i] < 0 && tr.guard[i] != Guard::NonZero)
        throw ParseError("a decrement of counter " + std::to_string(i + 1) + " requires guard n", line);
    m.trans.push_back(tr);
  }
  wrap_validate([&] { m.validate(); });
  if (h.type == "dcm" && !m.is_deterministic()) throw ParseError("machine declared dcm is not deterministic");
  return m;
}

PushdownMachine parse_pushdown(const std::string& text) {
  Header h;
  PushdownMachine m;
  std::vector<std::vector<std::string>> pending;
  std::vector<int> lines;
  for (auto& ln : detail::tokenize_lines(text)) {
    if (header_directive(h, ln)) continue;
    auto& t = ln.tokens;
    if (t[0] == "stack") {
      m.stack_symbols.assign(t.begin() + 1, t.end());
    } else if (t[0] == "reversals") {
      if (t.size() != 2) throw ParseError("reversals expects one number", ln.number);
      m.reversals = static_cast<int>(detail::parse_long(t[1], ln.number));
    } else if (t[0] == "trans") {
      if (t.size() != 6) throw ParseError("trans expects: trans <from> <symbol|eps> <top> <action> <to>", ln.number);
      pending.push_back(t);
      lines.push_back(ln.number);
    } else {
      throw ParseError("unknown directive '" + t[0] + "'", ln.number);
    }
  }
  if (h.type != "pda" && h.type != "dpda") throw ParseError("type must be pda or dpda");
  if (m.stack_symbols.empty()) throw ParseError("missing stack directive");
  m.alphabet = h.alphabet;
  m.states = h.states;
  finish_header(h, m.initial, m.accepting);
  for (size_t k = 0; k < pending.size(); ++k) {
    auto& t = pending[k];
    int line = lines[k];
    PushdownTransition tr;
    tr.from = lookup_state(h, t[1], line);
    tr.label = lookup_label(h, t[2], line);
    auto top = parse_symbol_word(t[3], m.stack_symbols, line);
    if (top.size() != 1) throw ParseError("stack top must be a single symbol", line);
    tr.top = top[0];
    if (t[4] == "pop") {
      tr.op = StackOp::Pop;
    } else if (t[4] == "stay") {
      tr.op = StackOp::Stay;
    } else if (t[4].rfind("push:", 0) == 0) {
      tr.op = StackOp::Push;
      tr.push = parse_symbol_word(t[4].substr(5), m.stack_symbols, line);
    } else {
      throw ParseError("stack action must be push:<word>, pop or stay", line);
    }
    tr.to = lookup_state(h, t[5], line);
    m.trans.push_back(tr);
  }
  wrap_validate([&] { m.validate(); });
  return m;
}

WorktapeMachine parse_worktape(const std::string& text) {
  Header h;
  WorktapeMachine m;
  std::vector<std::vector<std::string>> pending;
  std::vector<int> lines;
  for (auto& ln : detail::tokenize_lines(text)) {
    if (header_directive(h, ln)) continue;
    auto& t = ln.tokens;
    if (t[0] == "tape") {
      m.tape_symbols = {"_"};
      for (size_t i = 1; i < t.size(); ++i)
        if (t[i] != "_") m.tape_symbols.push_back(t[i]);
    } else if (t[0] == "reversals") {
      if (t.size() != 2) throw ParseError("reversals expects one number", ln.number);
      m.reversals = static_cast<int>(detail::parse_long(t[1], ln.number));
    } else if (t[0] == "trans") {
      if (t.size() != 7) throw ParseError("trans expects: trans <from> <symbol|eps> <read> <write> <L|R|S> <to>", ln.number);
      pending.push_back(t);
      lines.push_back(ln.number);
    } else {
      throw ParseError("unknown directive '" + t[0] + "'", ln.number);
    }
  }
  if (h.type != "ntm" && h.type != "dtm") throw ParseError("type must be ntm or dtm");
  if (m.tape_symbols.empty()) m.tape_symbols = {"_"};
  m.alphabet = h.alphabet;
  m.states = h.states;
  finish_header(h, m.initial, m.accepting);
  for (size_t k = 0; k < pending.size(); ++k) {
    auto& t = pending[k];
    int line = lines[k];
    TapeTransition tr;
    tr.from = lookup_state(h, t[1], line);
    tr.label = lookup_label(h, t[2], line);
    tr.read = m.tape_index(t[3]);
    tr.write = m.tape_index(t[4]);
    if (tr.read < 0) throw ParseError("unknown tape symbol '" + t[3] + "'", line);
    if (tr.write < 0) throw ParseError("unknown tape symbol '" + t[4] + "'", line);
    if (t[5] == "L") tr.move = Move::L;
    else if (t[5] == "R") tr.move = Move::R;
    else if (t[5] == "S") tr.move = Move::S;
    else throw ParseError("head move must be L, R or S", line);
    tr.to = lookup_state(h, t[6], line);
    m.trans.push_back(tr);
  }
  wrap_validate([&] { m.validate(); });
  return m;
}

static void write_header(std::ostringstream& o, const std::string& type, const Alphabet& a,
                         const std::vector<std::string>& states) {
  o << "type " << type << "\nalphabet";
  for (auto& s : a.symbols()) o << ' ' << s;
  o << "\n";
  (void)states;
}

static void write_states(std::ostringstream& o, const std::vector<std::string>& states, int initial,
                         const std::vector<int>& accepting) {
  o << "states";
  for (auto& s : states) o << ' ' << s;
  o << "\ninitial " << states[initial] << "\naccepting";
  for (int q : accepting) o << ' ' << states[q];
  o << "\n";
}

std::string counter_machine_to_text(const CounterMachine& m) {
  std::ostringstream o;
  write_header(o, m.is_deterministic() ? "dcm" : "ncm", m.alphabet, m.states);
  o << "counters " << m.counters << "\nreversals";
  for (int r : m.reversals) o << ' ' << r;
  o << "\naccept " << (m.mode == AcceptMode::FinalState ? "final" : "final-zero") << "\n";
  write_states(o, m.states, m.initial, m.accepting);
  for (auto& t : m.trans) {
    o << "trans " << m.states[t.from] << ' ' << label_name(m.alphabet, t.label) << ' ';
    for (int i = 0; i < m.counters; ++i) o << (i ? "," : "") << guard_name(t.guard[i]);
    o << ' ' << m.states[t.to] << ' ';
    for (int i = 0; i < m.counters; ++i) o << (i ? "," : "") << delta_name(t.delta[i]);
    o << "\n";
  }
  return o.str();
}

std::string pushdown_to_text(const PushdownMachine& m) {
  std::ostringstream o;
  write_header(o, "pda", m.alphabet, m.states);
  o << "stack";
  for (auto& s : m.stack_symbols) o << ' ' << s;
  o << "\nreversals " << m.reversals << "\n";
  write_states(o, m.states, m.initial, m.accepting);
  bool compact = true;
  for (auto& s : m.stack_symbols)
    if (s.size() != 1) compact = false;
  for (auto& t : m.trans) {
    o << "trans " << m.states[t.from] << ' ' << label_name(m.alphabet, t.label) << ' ' << m.stack_symbols[t.top] << ' ';
    if (t.op == StackOp::Pop) o << "pop";
    else if (t.op == StackOp::Stay) o << "stay";
    else {
      o << "push:";
      for (size_t i = 0; i < t.push.size(); ++i) o << (i && !compact ? "." : "") << m.stack_symbols[t.push[i]];
    }
    o << ' ' << m.states[t.to] << "\n";
  }
  return o.str();
}

std::string worktape_to_text(const WorktapeMachine& m) {
  std::ostringstream o;
  write_header(o, "ntm", m.alphabet, m.states);
  o << "tape";
  for (auto& s : m.tape_symbols) o << ' ' << s;
  o << "\nreversals " << m.reversals << "\n";
  write_states(o, m.states, m.initial, m.accepting);
  for (auto& t : m.trans)
    o << "trans " << m.states[t.from] << ' ' << label_name(m.alphabet, t.label) << ' ' << m.tape_symbols[t.read] << ' '
      << m.tape_symbols[t.write] << ' ' << move_name(t.move) << ' ' << m.states[t.to] << "\n";
  return o.str();
}

// ---------------------------------------------------------------- simulation

namespace {

using Cfg = std::vector<int>;
const BigInt kInf = -1;

BigInt add_runs(const BigInt& a, const BigInt& b) {
  if (a == kInf || b == kInf) return kInf;
  return a + b;
}

struct Caps {
  long counter, eps, cells, steps;
};

Caps derive(const RunCaps& c, int len, int nstates) {
  Caps r;
  r.counter = c.max_counter > 0 ? c.max_counter : 2L * (len + 1);
  r.cells = c.max_tape_cells > 0 ? c.max_tape_cells : 2L * (len + 2);
  long span = std::max(r.counter, r.cells);
  r.eps = c.max_eps_chain > 0 ? c.max_eps_chain : static_cast<long>(nstates) * (span + 1);
  r.steps = c.max_steps > 0 ? c.max_steps : 1000000L;
  return r;
}

// configurations are flat integer vectors whose first entry is the control state
struct CounterModel {
  const CounterMachine& m;
  Caps caps;
  std::vector<std::vector<std::vector<int>>> by_label;  // [state][label+1] -> transition ids

  CounterModel(const CounterMachine& mm, Caps c) : m(mm), caps(c) {
    by_label.assign(m.num_states(), std::vector<std::vector<int>>(m.alphabet.size() + 1));
    for (size_t i = 0; i < m.trans.size(); ++i) by_label[m.trans[i].from][m.trans[i].label + 1].push_back(static_cast<int>(i));
  }
  int nstates() const { return m.num_states(); }
  // layout: q, values[k], reversals[k], direction[k]
  Cfg initial() const {
    Cfg c(1 + 3 * m.counters, 0);
    c[0] = m.initial;
    return c;
  }
  void step(const Cfg& c, int label, std::vector<Cfg>& out, bool& capped) const {
    int k = m.counters;
    for (int id : by_label[c[0]][label + 1]) {
      auto& t = m.trans[id];
      bool ok = true;
      for (int i = 0; i < k && ok; ++i) {
        int v = c[1 + i];
        if (t.guard[i] == Guard::Zero && v != 0) ok = false;
        if (t.guard[i] == Guard::NonZero && v == 0) ok = false;
      }
      if (!ok) continue;
      Cfg n = c;
      n[0] = t.to;
      for (int i = 0; i < k && ok; ++i) {
        int d = t.delta[i];
        if (d == 0) continue;
        int& v = n[1 + i];
        int& rev = n[1 + k + i];
        int& dir = n[1 + 2 * k + i];
        int want = d > 0 ? 0 : 1;
        if (dir != want) {
          ++rev;
          dir = want;
          if (rev > m.reversals[i]) ok = false;
        }
        v += d;
        if (v < 0) ok = false;
        if (v > caps.counter) {
          capped = true;
          ok = false;
        }
      }
      if (ok) out.push_back(std::move(n));
    }
  }
  bool accepting(const Cfg& c) const {
    if (!m.is_accepting(c[0])) return false;
    if (m.mode == AcceptMode::FinalZero)
      for (int i = 0; i < m.counters; ++i)
        if (c[1 + i] != 0) return false;
    return true;
  }
};

struct PushdownModel {
  const PushdownMachine& m;
  Caps caps;
  std::vector<std::vector<std::vector<int>>> by_label;

  PushdownModel(const PushdownMachine& mm, Caps c) : m(mm), caps(c) {
    by_label.assign(m.num_states(), std::vector<std::vector<int>>(m.alphabet.size() + 1));
    for (size_t i = 0; i < m.trans.size(); ++i) by_label[m.trans[i].from][m.trans[i].label + 1].push_back(static_cast<int>(i));
  }
  int nstates() const { return m.num_states(); }
  // layout: q, reversals, direction, stack bottom..top
  Cfg initial() const { return {m.initial, 0, 0, 0}; }
  void step(const Cfg& c, int label, std::vector<Cfg>& out, bool& capped) const {
    int top = c.back();
    for (int id : by_label[c[0]][label + 1]) {
      auto& t = m.trans[id];
      if (t.top != top) continue;
      Cfg n = c;
      n[0] = t.to;
      int dh = 0;
      if (t.op == StackOp::Pop) {
        n.pop_back();
        dh = -1;
      } else if (t.op == StackOp::Push) {
        n.pop_back();
        for (auto it = t.push.rbegin(); it != t.push.rend(); ++it) n.push_back(*it);
        dh = static_cast<int>(t.push.size()) - 1;
      }
      if (dh != 0) {
        int want = dh > 0 ? 0 : 1;
        if (n[2] != want) {
          ++n[1];
          n[2] = want;
          if (n[1] > m.reversals) continue;
        }
      }
      if (static_cast<long>(n.size()) - 3 > caps.cells) {
        capped = true;
        continue;
      }
      out.push_back(std::move(n));
    }
  }
  bool accepting(const Cfg& c) const { return m.is_accepting(c[0]); }
};

struct TapeModel {
  const WorktapeMachine& m;
  Caps caps;
  std::vector<std::vector<std::vector<int>>> by_label;

  TapeModel(const WorktapeMachine& mm, Caps c) : m(mm), caps(c) {
    by_label.assign(m.num_states(), std::vector<std::vector<int>>(m.alphabet.size() + 1));
    for (size_t i = 0; i < m.trans.size(); ++i) by_label[m.trans[i].from][m.trans[i].label + 1].push_back(static_cast<int>(i));
  }
  int nstates() const { return m.num_states(); }
  // layout: q, head, reversals, direction, tape cells (trailing blanks trimmed)
  Cfg initial() const { return {m.initial, 0, 0, 0}; }
  void step(const Cfg& c, int label, std::vector<Cfg>& out, bool& capped) const {
    int head = c[1];
    int cell = 4 + head < static_cast<int>(c.size()) ? c[4 + head] : 0;
    for (int id : by_label[c[0]][label + 1]) {
      auto& t = m.trans[id];
      if (t.read != cell) continue;
      Cfg n = c;
      n[0] = t.to;
      if (4 + head >= static_cast<int>(n.size())) n.resize(5 + head, 0);
      n[4 + head] = t.write;
      if (t.move != Move::S) {
        int want = t.move == Move::R ? 0 : 1;
        if (n[3] != want) {
          ++n[2];
          n[3] = want;
          if (n[2] > m.reversals) continue;
        }
        if (t.move == Move::L) {
          if (head == 0) continue;
          n[1] = head - 1;
        } else {
          n[1] = head + 1;
          if (n[1] >= caps.cells) {
            capped = true;
            continue;
          }
        }
      }
      while (n.size() > 4 && n.back() == 0) n.pop_back();
      out.push_back(std::move(n));
    }
  }
  bool accepting(const Cfg& c) const { return m.is_accepting(c[0]); }
};

struct Node {
  std::map<Cfg, BigInt> cfg;
  bool tainted = false;
};

template <class Model>
class Engine {
 public:
  explicit Engine(const Model& model) : model_(model) {}

  Node start() const {
    std::map<Cfg, BigInt> src;
    src[model_.initial()] = 1;
    Node n;
    n.cfg = closure(src, n.tainted);
    return n;
  }

  Node advance(const Node& node, int letter) const {
    std::map<Cfg, BigInt> src;
    bool capped = node.tainted;
    std::vector<Cfg> succ;
    for (auto& [c, runs] : node.cfg) {
      succ.clear();
      model_.step(c, letter, succ, capped);
      for (auto& s : succ) {
        auto it = src.find(s);
        if (it == src.end()) src.emplace(s, runs);
        else it->second = add_runs(it->second, runs);
      }
    }
    Node n;
    n.tainted = capped;
    if (!src.empty()) n.cfg = closure(src, n.tainted);
    return n;
  }

  // total accepting runs of the current prefix
  BigInt accepting_runs(const Node& n) const {
    BigInt total = 0;
    for (auto& [c, runs] : n.cfg)
      if (model_.accepting(c)) total = add_runs(total, runs);
    return total;
  }

 private:
  std::map<Cfg, BigInt> closure(const std::map<Cfg, BigInt>& src, bool& capped) const {
    std::map<Cfg, int> id;
    std::vector<Cfg> nodes;
    std::vector<std::vector<int>> succ;
    std::vector<long> depth;
    std::deque<int> queue;
    for (auto& [c, r] : src) {
      id.emplace(c, static_cast<int>(nodes.size()));
      queue.push_back(static_cast<int>(nodes.size()));
      nodes.push_back(c);
      succ.emplace_back();
      depth.push_back(0);
    }
    std::vector<Cfg> out;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      out.clear();
      model_.step(nodes[v], kEps, out, capped);
      if (out.empty()) continue;
      if (depth[v] >= model_.caps.eps || static_cast<long>(nodes.size()) >= model_.caps.steps) {
        capped = true;
        continue;
      }
      for (auto& w : out) {
        auto it = id.find(w);
        int wi;
        if (it == id.end()) {
          wi = static_cast<int>(nodes.size());
          id.emplace(w, wi);
          nodes.push_back(w);
          succ.emplace_back();
          depth.push_back(depth[v] + 1);
          queue.push_back(wi);
        } else {
          wi = it->second;
        }
        succ[v].push_back(wi);
      }
    }
    // run counts along the epsilon graph; anything fed by a cycle has infinitely many runs
    int n = static_cast<int>(nodes.size());
    std::vector<int> indeg(n, 0);
    for (auto& s : succ)
      for (int w : s) ++indeg[w];
    std::vector<BigInt> runs(n, 0);
    for (auto& [c, r] : src) runs[id[c]] = r;
    std::vector<int> order;
    for (int v = 0; v < n; ++v)
      if (indeg[v] == 0) order.push_back(v);
    std::vector<char> done(n, 0);
    for (size_t i = 0; i < order.size(); ++i) {
      int v = order[i];
      done[v] = 1;
      for (int w : succ[v]) {
        runs[w] = add_runs(runs[w], runs[v]);
        if (--indeg[w] == 0) order.push_back(w);
      }
    }
    std::map<Cfg, BigInt> res;
    for (int v = 0; v < n; ++v) res.emplace(nodes[v], done[v] ? runs[v] : kInf);
    return res;
  }

  const Model& model_;
};

enum class Purpose { Accept, Enumerate, Ambiguity };

struct SearchResult {
  std::vector<Word> words;
  BigInt best = 0;
  Word witness;
};

template <class Model>
void search(const Engine<Model>& eng, const Node& node, Word& prefix, int max_len, int exact_len, int nsym,
            Purpose purpose, SearchResult& res) {
  if (exact_len < 0 || static_cast<int>(prefix.size()) == exact_len) {
    BigInt runs = eng.accepting_runs(node);
    bool acc = runs != 0;
    if (node.tainted && (!acc || purpose == Purpose::Ambiguity))
      throw CapExceeded("run caps exceeded while examining word of length " + std::to_string(prefix.size()));
    if (acc) {
      res.words.push_back(prefix);
      if (purpose == Purpose::Ambiguity) {
        if (runs == kInf) throw Error("infinitely many accepting runs on a word of length " + std::to_string(prefix.size()));
        if (runs > res.best) {
          res.best = runs;
          res.witness = prefix;
        }
      }
    }
  }
  if (static_cast<int>(prefix.size()) >= max_len) return;
  for (int a = 0; a < nsym; ++a) {
    Node next = eng.advance(node, a);
    if (next.cfg.empty()) {
      if (next.tainted && exact_len < 0)
        throw CapExceeded("run caps exceeded while examining word of length " + std::to_string(prefix.size() + 1));
      continue;
    }
    prefix.push_back(a);
    search(eng, next, prefix, max_len, exact_len, nsym, purpose, res);
    prefix.pop_back();
  }
}

template <class Model>
bool accepts_impl(const Model& model, const Word& w) {
  Engine<Model> eng(model);
  Node n = eng.start();
  for (int a : w) {
    n = eng.advance(n, a);
    if (n.cfg.empty()) break;
  }
  if (eng.accepting_runs(n) != 0) return true;
  if (n.tainted) throw CapExceeded("run caps exceeded on a word of length " + std::to_string(w.size()));
  return false;
}

template <class Model>
SearchResult explore(const Model& model, int max_len, int exact_len, int nsym, Purpose p) {
  Engine<Model> eng(model);
  SearchResult res;
  Word prefix;
  Node start = eng.start();
  search(eng, start, prefix, max_len, exact_len, nsym, p, res);
  std::sort(res.words.begin(), res.words.end(), canonical_less);
  return res;
}

std::vector<BigInt> counts_of(const std::vector<Word>& words, int N) {
  std::vector<BigInt> c(N + 1, 0);
  for (auto& w : words)
    if (static_cast<int>(w.size()) <= N) ++c[w.size()];
  return c;
}

}  // namespace

bool accepts(const CounterMachine& m, const Word& w, const RunCaps& caps) {
  return accepts_impl(CounterModel(m, derive(caps, static_cast<int>(w.size()), m.num_states())), w);
}
bool accepts(const PushdownMachine& m, const Word& w, const RunCaps& caps) {
  return accepts_impl(PushdownModel(m, derive(caps, static_cast<int>(w.size()), m.num_states())), w);
}
bool accepts(const WorktapeMachine& m, const Word& w, const RunCaps& caps) {
  return accepts_impl(TapeModel(m, derive(caps, static_cast<int>(w.size()), m.num_states())), w);
}

WordList enumerate_lang(const CounterMachine& m, int max_len, const RunCaps& caps) {
  return {explore(CounterModel(m, derive(caps, max_len, m.num_states())), max_len, -1, m.alphabet.size(), Purpose::Enumerate).words};
}
WordList enumerate_lang(const PushdownMachine& m, int max_len, const RunCaps& caps) {
  return {explore(PushdownModel(m, derive(caps, max_len, m.num_states())), max_len, -1, m.alphabet.size(), Purpose::Enumerate).words};
}
WordList enumerate_lang(const WorktapeMachine& m, int max_len, const RunCaps& caps) {
  return {explore(TapeModel(m, derive(caps, max_len, m.num_states())), max_len, -1, m.alphabet.size(), Purpose::Enumerate).words};
}

WordList enumerate_length(const CounterMachine& m, int n, const RunCaps& caps) {
  return {explore(CounterModel(m, derive(caps, n, m.num_states())), n, n, m.alphabet.size(), Purpose::Enumerate).words};
}

template <class M, class Model>
static AmbiguityReport ambiguity_impl(const M& m, int max_len, const RunCaps& caps) {
  auto res = explore(Model(m, derive(caps, max_len, m.num_states())), max_len, -1, m.alphabet.size(), Purpose::Ambiguity);
  AmbiguityReport r;
  r.max_ambiguity = res.best;
  r.witness = res.witness;
  r.lengths_examined = max_len + 1;
  return r;
}

AmbiguityReport ambiguity(const CounterMachine& m, int max_len, const RunCaps& caps) {
  return ambiguity_impl<CounterMachine, CounterModel>(m, max_len, caps);
}
AmbiguityReport ambiguity(const PushdownMachine& m, int max_len, const RunCaps& caps) {
  return ambiguity_impl<PushdownMachine, PushdownModel>(m, max_len, caps);
}
AmbiguityReport ambiguity(const WorktapeMachine& m, int max_len, const RunCaps& caps) {
  return ambiguity_impl<WorktapeMachine, TapeModel>(m, max_len, caps);
}

std::vector<BigInt> machine_counts(const CounterMachine& m, int N, const RunCaps& caps) {
  return counts_of(enumerate_lang(m, N, caps).words, N);
}
std::vector<BigInt> machine_counts(const PushdownMachine& m, int N, const RunCaps& caps) {
  return counts_of(enumerate_lang(m, N, caps).words, N);
}
std::vector<BigInt> machine_counts(const WorktapeMachine& m, int N, const RunCaps& caps) {
  return counts_of(enumerate_lang(m, N, caps).words, N);
}

// ---------------------------------------------------------------- constructions

CounterMachine product_regular(const CounterMachine& m, const FiniteAutomaton& dfa) {
  if (m.alphabet != dfa.alphabet) throw PreconditionError("product_regular: alphabet mismatch");
  if (!dfa.structurally_deterministic()) throw PreconditionError("product_regular: automaton must be deterministic");
  auto next = dfa_table(dfa);
  CounterMachine p;
  p.alphabet = m.alphabet;
  p.counters = m.counters;
  p.reversals = m.reversals;
  p.mode = m.mode;
  std::map<std::pair<int, int>, int> id;
  std::deque<std::pair<int, int>> queue;
  auto intern = [&](int q, int d) {
    auto key = std::make_pair(q, d);
    auto it = id.find(key);
    if (it != id.end()) return it->second;
    int s = p.add_state(m.states[q] + "|" + dfa.states[d]);
    id.emplace(key, s);
    queue.push_back(key);
    if (m.is_accepting(q) && dfa.is_accepting(d)) p.accepting.push_back(s);
    return s;
  };
  p.initial = intern(m.initial, dfa.initial[0]);
  while (!queue.empty()) {
    auto [q, d] = queue.front();
    queue.pop_front();
    int from = id[{q, d}];
    for (auto& t : m.trans) {
      if (t.from != q) continue;
      int nd = d;
      if (t.label != kEps) {
        nd = next[d][t.label];
        if (nd < 0) continue;
      }
      int to = intern(t.to, nd);
      p.trans.push_back({from, t.label, t.guard, to, t.delta});
    }
  }
  p.validate();
  return p;
}

CounterMachine normalize_phases(const CounterMachine& m) {
  CounterMachine p;
  p.alphabet = m.alphabet;
  p.counters = m.counters;
  p.reversals = m.reversals;
  p.mode = m.mode;
  using Key = std::vector<int>;  // q, phase per counter
  std::map<Key, int> id;
  std::deque<Key> queue;
  auto intern = [&](const Key& k) {
    auto it = id.find(k);
    if (it != id.end()) return it->second;
    std::string name = m.states[k[0]] + "[";
    for (int i = 0; i < m.counters; ++i) name += (i ? "." : "") + std::to_string(k[1 + i]);
    int s = p.add_state(name + "]");
    id.emplace(k, s);
    queue.push_back(k);
    if (m.is_accepting(k[0])) p.accepting.push_back(s);
    return s;
  };
  Key init(1 + m.counters, 0);
  init[0] = m.initial;
  p.initial = intern(init);
  while (!queue.empty()) {
    Key k = queue.front();
    queue.pop_front();
    int from = id[k];
    for (auto& t : m.trans) {
      if (t.from != k[0]) continue;
      Key nk = k;
      nk[0] = t.to;
      bool ok = true;
      for (int i = 0; i < m.counters && ok; ++i) {
        int ph = nk[1 + i];
        bool inc_phase = ph % 2 == 0;
        if ((t.delta[i] == 1 && !inc_phase) || (t.delta[i] == -1 && inc_phase)) {
          if (ph + 1 > m.reversals[i]) ok = false;
          else nk[1 + i] = ph + 1;
        }
      }
      if (!ok) continue;
      p.trans.push_back({from, t.label, t.guard, intern(nk), t.delta});
    }
  }
  p.validate();
  return p;
}

CounterMachine to_final_state(const CounterMachine& m) {
  if (m.mode == AcceptMode::FinalState) return m;
  CounterMachine r = m;
  r.mode = AcceptMode::FinalState;
  int acc = r.add_state("accept.zero");
  std::vector<Guard> zero(m.counters, Guard::Zero);
  std::vector<int> none(m.counters, 0);
  for (int q : m.accepting) r.trans.push_back({q, kEps, zero, acc, none});
  r.accepting = {acc};
  r.validate();
  return r;
}

CounterMachine widen_machine(const CounterMachine& m, const Alphabet& sigma) {
  CounterMachine r = m;
  r.alphabet = sigma;
  for (auto& t : r.trans) {
    if (t.label == kEps) continue;
    int i = sigma.index(m.alphabet.name(t.label));
    if (i < 0) throw PreconditionError("symbol '" + m.alphabet.name(t.label) + "' missing from wider alphabet");
    t.label = i;
  }
  return r;
}

CounterMachine machine_from_automaton(const FiniteAutomaton& fa) {
  CounterMachine m;
  m.alphabet = fa.alphabet;
  m.counters = 1;
  m.reversals = {1};
  m.states = fa.states;
  std::vector<Guard> any = {Guard::Any};
  std::vector<int> none = {0};
  if (fa.initial.size() == 1) {
    m.initial = fa.initial[0];
  } else {
    m.initial = m.add_state("start");
    for (int q : fa.initial) m.trans.push_back({m.initial, kEps, any, q, none});
  }
  m.accepting = fa.accepting;
  for (auto& t : fa.trans) m.trans.push_back({t.from, t.label, any, t.to, none});
  m.validate();
  return m;
}

static Alphabet merged_alphabet(const Alphabet& a, const Alphabet& b) {
  std::vector<std::string> s = a.symbols();
  for (auto& x : b.symbols())
    if (!a.contains(x)) s.push_back(x);
  return Alphabet(s);
}

CounterMachine machine_intersection(const CounterMachine& a0, const CounterMachine& b0) {
  Alphabet sigma = merged_alphabet(a0.alphabet, b0.alphabet);
  CounterMachine a = widen_machine(to_final_state(a0), sigma);
  CounterMachine b = widen_machine(to_final_state(b0), sigma);
  CounterMachine p;
  p.alphabet = sigma;
  p.counters = a.counters + b.counters;
  p.reversals = a.reversals;
  p.reversals.insert(p.reversals.end(), b.reversals.begin(), b.reversals.end());
  std::vector<Guard> any_a(a.counters, Guard::Any), any_b(b.counters, Guard::Any);
  std::vector<int> zero_a(a.counters, 0), zero_b(b.counters, 0);
  auto cat = [](auto x, const auto& y) {
    x.insert(x.end(), y.begin(), y.end());
    return x;
  };
  // the flag forbids a-moves after a b epsilon move until the next letter, so
  // epsilon interleavings are not duplicated
  using Key = std::array<int, 3>;
  std::map<Key, int> id;
  std::deque<Key> queue;
  auto intern = [&](int x, int y, int f) {
    Key k{x, y, f};
    auto it = id.find(k);
    if (it != id.end()) return it->second;
    int s = p.add_state("(" + a.states[x] + "," + b.states[y] + ")" + (f ? "'" : ""));
    id.emplace(k, s);
    queue.push_back(k);
    if (a.is_accepting(x) && b.is_accepting(y)) p.accepting.push_back(s);
    return s;
  };
  p.initial = intern(a.initial, b.initial, 0);
  while (!queue.empty()) {
    Key k = queue.front();
    queue.pop_front();
    int from = id[k];
    for (auto& ta : a.trans) {
      if (ta.from != k[0]) continue;
      if (ta.label == kEps) {
        if (k[2] == 0) p.trans.push_back({from, kEps, cat(ta.guard, any_b), intern(ta.to, k[1], 0), cat(ta.delta, zero_b)});
        continue;
      }
      for (auto& tb : b.trans) {
        if (tb.from != k[1] || tb.label != ta.label) continue;
        p.trans.push_back({from, ta.label, cat(ta.guard, tb.guard), intern(ta.to, tb.to, 0), cat(ta.delta, tb.delta)});
      }
    }
    for (auto& tb : b.trans) {
      if (tb.from != k[1] || tb.label != kEps) continue;
      p.trans.push_back({from, kEps, cat(any_a, tb.guard), intern(k[0], tb.to, 1), cat(zero_a, tb.delta)});
    }
  }
  p.validate();
  return p;
}

CounterMachine machine_union(const CounterMachine& a0, const CounterMachine& b0) {
  Alphabet sigma = merged_alphabet(a0.alphabet, b0.alphabet);
  CounterMachine a = widen_machine(to_final_state(a0), sigma);
  CounterMachine b = widen_machine(to_final_state(b0), sigma);
  CounterMachine u;
  u.alphabet = sigma;
  u.counters = a.counters + b.counters;
  u.reversals = a.reversals;
  u.reversals.insert(u.reversals.end(), b.reversals.begin(), b.reversals.end());
  int start = u.add_state("start");
  u.initial = start;
  int oa = u.num_states();
  for (auto& s : a.states) u.add_state("L." + s);
  int ob = u.num_states();
  for (auto& s : b.states) u.add_state("R." + s);
  std::vector<Guard> any(u.counters, Guard::Any);
  std::vector<int> none(u.counters, 0);
  u.trans.push_back({start, kEps, any, a.initial + oa, none});
  u.trans.push_back({start, kEps, any, b.initial + ob, none});
  for (auto& t : a.trans) {
    auto g = t.guard;
    auto d = t.delta;
    g.resize(u.counters, Guard::Any);
    d.resize(u.counters, 0);
    u.trans.push_back({t.from + oa, t.label, g, t.to + oa, d});
  }
  for (auto& t : b.trans) {
    std::vector<Guard> g(a.counters, Guard::Any);
    std::vector<int> d(a.counters, 0);
    g.insert(g.end(), t.guard.begin(), t.guard.end());
    d.insert(d.end(), t.delta.begin(), t.delta.end());
    u.trans.push_back({t.from + ob, t.label, g, t.to + ob, d});
  }
  for (int q : a.accepting) u.accepting.push_back(q + oa);
  for (int q : b.accepting) u.accepting.push_back(q + ob);
  u.validate();
  return u;
}

}  // namespace countreg
