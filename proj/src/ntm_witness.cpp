#include "countreg/ntm_witness.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <tuple>

namespace countreg {

// ---------------------------------------------------------------- normal form

WorktapeMachine normal_form(const WorktapeMachine& m) {
  WorktapeMachine out;
  out.alphabet = m.alphabet;
  out.tape_symbols = m.tape_symbols;
  out.reversals = m.reversals;
  int n = m.num_states(), g = static_cast<int>(m.tape_symbols.size());
  for (int q = 0; q < n; ++q) out.add_state(m.states[q]);
  out.initial = m.initial;
  // chain state (p, v, f): original state p, real content v, guessed final content f on the tape
  std::map<std::tuple<int, int, int>, int> chain;
  std::deque<std::tuple<int, int, int>> work;
  auto chain_state = [&](int p, int v, int f) {
    auto key = std::make_tuple(p, v, f);
    auto it = chain.find(key);
    if (it != chain.end()) return it->second;
    int id = out.add_state(m.states[p] + "<" + m.tape_symbols[v] + "," + m.tape_symbols[f] + ">");
    chain[key] = id;
    work.push_back(key);
    return id;
  };
  for (auto& t : m.trans) {
    if (t.move != Move::S) {
      out.trans.push_back(t);
      continue;
    }
    for (int f = 0; f < g; ++f) out.trans.push_back({t.from, t.label, t.read, f, Move::S, chain_state(t.to, t.write, f)});
  }
  while (!work.empty()) {
    auto [p, v, f] = work.front();
    work.pop_front();
    int self = chain.at({p, v, f});
    for (auto& t : m.trans) {
      if (t.from != p || t.read != v) continue;
      if (t.move == Move::S)
        out.trans.push_back({self, t.label, f, f, Move::S, chain_state(t.to, t.write, f)});
      else if (t.write == f)
        out.trans.push_back({self, t.label, f, f, t.move, t.to});
    }
  }
  for (int q : m.accepting) out.accepting.push_back(q);
  for (auto& [key, id] : chain)
    if (m.is_accepting(std::get<0>(key)) && std::get<1>(key) == std::get<2>(key)) out.accepting.push_back(id);
  out.validate();
  return out;
}

// ---------------------------------------------------------------- code automaton

namespace {

enum Req { kNone = 0, kReqS, kReqR };
constexpr int kL = 1, kR = 2, kS = 4;

int move_bit(Move m) { return m == Move::L ? kL : m == Move::R ? kR : kS; }

// NFA state of the single left-to-right pass over the cell blocks
struct CS {
  int P = 0;
  int seg = -1;
  int have_c = 0;
  int cell = 0;  // 0 before any block, 1 inside block 0, 2 inside a later block
  // per track, 1-based
  std::vector<int> st, cur, req, d, off, offb, nextp, same, pendd, due_now, due_next;

  auto key() const {
    return std::tie(P, seg, have_c, cell, st, cur, req, d, off, offb, nextp, same, pendd, due_now, due_next);
  }
  bool operator<(const CS& o) const { return key() < o.key(); }
};

class Builder {
 public:
  explicit Builder(const WorktapeMachine& m) : m_(m) {
    t_ = m.reversals;
    T_ = t_ % 2 == 1 ? t_ + 1 : t_ + 2;
    work_limit_ = default_state_budget() * 64;
    cseg_ = T_ / 2;
    for (auto& tr : m.trans) {
      int id = tuple_id({tr.from, tr.label, tr.to, tr.write});
      moves_[{id, tr.read}] |= move_bit(tr.move);
      by_read_[tr.read].insert(id);
    }
  }

  CodeAutomaton run() {
    CodeAutomaton code;
    code.tracks = T_;
    code.input = m_.alphabet;
    FiniteAutomaton& nfa = code.nfa;
    long budget = default_state_budget();
    int empty = nfa.add_state("empty");
    nfa.initial.push_back(empty);
    if (m_.is_accepting(m_.initial)) nfa.accepting.push_back(empty);
    std::map<CS, int> ids;
    std::deque<CS> work;
    auto intern = [&](const CS& s) {
      auto it = ids.find(s);
      if (it != ids.end()) return it->second;
      if (static_cast<long>(ids.size()) >= budget) throw BudgetExceeded("code automaton exceeds the state budget");
      int id = nfa.add_state();
      ids.emplace(s, id);
      work.push_back(s);
      if (final_ok(s)) nfa.accepting.push_back(id);
      return id;
    };
    for (int P = 1; P <= t_ + 1; ++P) {
      CS s;
      s.P = P;
      for (auto* v : {&s.st, &s.cur, &s.req, &s.off, &s.same}) v->assign(T_ + 1, 0);
      for (auto* v : {&s.d, &s.offb, &s.nextp, &s.pendd, &s.due_now, &s.due_next}) v->assign(T_ + 1, -1);
      s.due_next[1] = m_.initial;
      nfa.initial.push_back(intern(s));
    }
    std::vector<std::tuple<int, std::vector<int>, int>> edges;
    while (!work.empty()) {
      CS s = work.front();
      work.pop_front();
      int from = ids.at(s);
      std::vector<std::pair<std::vector<int>, CS>> out;
      successors(s, out);
      for (auto& [letter, next] : out) edges.emplace_back(from, letter, intern(next));
    }
    std::map<std::vector<int>, int> letter_ids;
    std::vector<std::string> names;
    for (auto& e : edges) {
      auto& key = std::get<1>(e);
      if (letter_ids.count(key)) continue;
      letter_ids[key] = static_cast<int>(code.letters.size());
      TrackLetter tl{key[0], std::vector<int>(key.begin() + 1, key.end())};
      names.push_back(letter_name(tl));
      code.letters.push_back(tl);
    }
    nfa.alphabet = Alphabet(names);
    for (auto& [from, key, to] : edges) nfa.add_transition(from, letter_ids.at(key), to);
    code.tuples = tuples_;
    nfa.normalize();
    return code;
  }

 private:
  const WorktapeMachine& m_;
  int t_, T_, cseg_;
  mutable long work_ = 0;
  long work_limit_;
  std::vector<TrackTuple> tuples_;
  std::map<TrackTuple, int> tuple_ids_;
  std::map<std::pair<int, int>, int> moves_;  // (tuple, read) -> move bits
  std::map<int, std::set<int>> by_read_;

  int tuple_id(const TrackTuple& t) {
    auto it = tuple_ids_.find(t);
    if (it != tuple_ids_.end()) return it->second;
    int id = static_cast<int>(tuples_.size());
    tuples_.push_back(t);
    tuple_ids_[t] = id;
    return id;
  }
  int moves(int id, int read) const {
    auto it = moves_.find({id, read});
    return it == moves_.end() ? 0 : it->second;
  }
  const std::set<int>& reading(int x) const {
    static const std::set<int> none;
    auto it = by_read_.find(x);
    return it == by_read_.end() ? none : it->second;
  }

  std::string tuple_name(int id) const {
    auto& t = tuples_[id];
    std::string a = t.label == kEps ? "eps" : m_.alphabet.name(t.label);
    return "(" + m_.states[t.from] + "," + a + "," + m_.states[t.to] + "," + m_.tape_symbols[t.write] + ")";
  }
  std::string letter_name(const TrackLetter& tl) const {
    if (tl.kind > 0) return "C" + std::to_string(tl.kind) + tuple_name(tl.tuples[0]);
    std::string s = "[";
    for (size_t i = 0; i < tl.tuples.size(); ++i) {
      if (i) s += "|";
      s += tl.tuples[i] < 0 ? "_" : tuple_name(tl.tuples[i]);
    }
    return s + "]";
  }

  int seg_of_track(int i) const { return i % 2 == 0 ? (T_ - i) / 2 : cseg_ + 1 + (i - 1) / 2; }

  bool block_end_ok(const CS& s) const {
    if (!s.have_c) return false;
    for (int i = 1; i <= T_; ++i) {
      if (s.off[i]) return false;
      if (i % 2 == 1 && s.st[i] == 1 && s.req[i] == kReqS) return false;
    }
    return true;
  }
  bool final_ok(const CS& s) const {
    if (s.cell == 0 || !block_end_ok(s)) return false;
    for (int i = 1; i <= T_; ++i) {
      if (i <= s.P && s.st[i] != 2) return false;
      if (s.due_next[i] >= 0) return false;
    }
    return true;
  }
  CS begin_block(const CS& s) const {
    CS b = s;
    b.cell = s.cell == 0 ? 1 : 2;
    b.seg = -1;
    b.have_c = 0;
    b.due_now = s.due_next;
    std::fill(b.due_next.begin(), b.due_next.end(), -1);
    for (int i = 1; i <= T_; ++i) {
      b.d[i] = -1;
      b.same[i] = 0;
      b.pendd[i] = -1;
      b.off[i] = 0;
      b.offb[i] = -1;
    }
    return b;
  }

  // allowed endings of an odd-track transition; appends successor states
  void odd_continue(const CS& s, int i, int id, int read, std::vector<CS>& out) const {
    int mm = moves(id, read);
    if (!mm) return;
    int q = tuples_[id].to;
    if (mm & kS) {
      CS n = s;
      n.cur[i] = q;
      n.req[i] = kReqS;
      out.push_back(n);
    }
    if (mm & kR) {
      CS n = s;
      n.cur[i] = q;
      n.req[i] = kReqR;
      out.push_back(n);
    }
    if ((mm & kL) && i < s.P && s.cell == 2 && s.off[i] && s.offb[i] == q) {
      CS n = s;
      n.st[i] = 2;
      n.req[i] = kNone;
      n.off[i] = 0;
      out.push_back(n);
    }
    if (i == s.P && m_.is_accepting(q) &&
        ((mm & (kS | kR)) || ((mm & kL) && s.P <= t_ && s.cell == 2))) {
      CS n = s;
      n.st[i] = 2;
      n.req[i] = kNone;
      out.push_back(n);
    }
  }

  // even tracks are read against time; false when the transition cannot sit here
  bool even_step(CS& s, int i, int id, int read) const {
    int mm = moves(id, read);
    if (!mm) return false;
    auto& tp = tuples_[id];
    if (s.same[i]) {
      if (!(mm & kS) || tp.to != s.nextp[i]) return false;
    } else if (s.st[i] == 1) {
      if (!(mm & kL) || tp.to != s.nextp[i]) return false;
    } else {
      bool rev = (mm & kR) && i < s.P;
      bool end = i == s.P && m_.is_accepting(tp.to) &&
                 ((mm & kS) || ((mm & kL) && s.cell == 2) || ((mm & kR) && s.P <= t_));
      if (rev) s.due_next[i + 1] = tp.to;
      else if (!end) return false;
    }
    s.nextp[i] = tp.from;
    s.same[i] = 1;
    s.st[i] = 1;
    return true;
  }

  void successors(const CS& s, std::vector<std::pair<std::vector<int>, CS>>& out) const {
    if (s.cell == 0) {
      in_block(begin_block(s), out);
      return;
    }
    in_block(s, out);
    if (s.have_c && block_end_ok(s)) in_block(begin_block(s), out);
  }

  void in_block(const CS& b, std::vector<std::pair<std::vector<int>, CS>>& out) const {
    if (!b.have_c) {
      for (int i = T_; i >= 2; i -= 2)
        if (seg_of_track(i) >= b.seg) even_letter(b, i, out);
      full_letter(b, out);
    } else {
      for (int i = 1; i <= T_; i += 2)
        if (seg_of_track(i) >= b.seg) odd_letter(b, i, out);
    }
  }

  void even_letter(const CS& b, int i, std::vector<std::pair<std::vector<int>, CS>>& out) const {
    if (i > b.P || b.st[i] == 2) return;
    for (auto& [x, ids] : by_read_) {
      if (b.pendd[i] >= 0 && x != b.pendd[i]) continue;
      for (int id : ids) {
        if (tuples_[id].write != x) continue;
        CS n = b;
        if (!even_step(n, i, id, x)) continue;
        n.pendd[i] = x;
        n.seg = seg_of_track(i);
        out.push_back({{i, id}, n});
      }
    }
  }

  void odd_letter(const CS& b, int i, std::vector<std::pair<std::vector<int>, CS>>& out) const {
    if (i > b.P || b.st[i] != 1 || b.req[i] != kReqS || b.d[i] < 0) return;
    int x = b.d[i];
    for (int id : reading(x)) {
      auto& tp = tuples_[id];
      if (tp.from != b.cur[i] || tp.write != x) continue;
      std::vector<CS> nexts;
      odd_continue(b, i, id, x, nexts);
      for (auto& n : nexts) {
        n.seg = seg_of_track(i);
        out.push_back({{i, id}, n});
      }
    }
  }

  // choose a tuple (or blank) per track, then apply even tracks and odd tracks in turn
  void full_letter(const CS& b, std::vector<std::pair<std::vector<int>, CS>>& out) const {
    std::vector<int> pick(T_ + 1, -1), reads(T_ + 1, 0);
    choose(b, 1, pick, reads, out);
  }

  void choose(const CS& b, int i, std::vector<int>& pick, std::vector<int>& reads,
              std::vector<std::pair<std::vector<int>, CS>>& out) const {
    if (++work_ > work_limit_) throw BudgetExceeded("code automaton letters exceed the work budget");
    if (i > T_) {
      apply_full(b, pick, reads, out);
      return;
    }
    int x = 0;
    for (int j = i - 1; j >= 1; --j)
      if (pick[j] >= 0) {
        x = tuples_[pick[j]].write;
        break;
      }
    reads[i] = x;
    bool blank_ok, tuple_ok;
    int need_from = -1, need_to = -1;
    if (i > b.P || b.st[i] == 2) {
      blank_ok = true;
      tuple_ok = false;
    } else if (i % 2 == 1) {
      if (b.st[i] == 0) {
        blank_ok = b.due_now[i] < 0;
        tuple_ok = b.due_now[i] >= 0;
        need_from = b.due_now[i];
      } else {
        blank_ok = false;
        tuple_ok = b.req[i] == kReqR;
        need_from = b.cur[i];
      }
    } else {
      blank_ok = !b.same[i];
      tuple_ok = true;
      if (b.st[i] == 1 || b.same[i]) need_to = b.nextp[i];
    }
    if (blank_ok) {
      pick[i] = -1;
      choose(b, i + 1, pick, reads, out);
    }
    if (tuple_ok) {
      for (int id : reading(x)) {
        auto& tp = tuples_[id];
        if (need_from >= 0 && tp.from != need_from) continue;
        if (need_to >= 0 && tp.to != need_to) continue;
        if (i % 2 == 0 && b.pendd[i] >= 0 && tp.write != b.pendd[i]) continue;
        pick[i] = id;
        choose(b, i + 1, pick, reads, out);
      }
      pick[i] = -1;
    }
  }

  void apply_full(const CS& b, const std::vector<int>& pick, const std::vector<int>& reads,
                  std::vector<std::pair<std::vector<int>, CS>>& out) const {
    bool any = false;
    for (int i = 1; i <= T_; ++i) any |= pick[i] >= 0;
    if (!any) return;
    CS n = b;
    n.have_c = 1;
    n.seg = cseg_;
    for (int i = 2; i <= T_; i += 2) {
      if (pick[i] < 0) {
        if (n.st[i] == 1) {
          n.off[i - 1] = 1;
          n.offb[i - 1] = n.nextp[i];
          n.st[i] = 2;
        }
        continue;
      }
      if (!even_step(n, i, pick[i], reads[i])) return;
    }
    std::vector<CS> layer{n};
    for (int i = 1; i <= T_; i += 2) {
      std::vector<CS> next;
      for (auto& s : layer) {
        if (pick[i] < 0) {
          next.push_back(s);
          continue;
        }
        CS c = s;
        if (c.st[i] == 0) c.due_now[i] = -1;
        c.st[i] = 1;
        c.d[i] = tuples_[pick[i]].write;
        odd_continue(c, i, pick[i], reads[i], next);
      }
      layer.swap(next);
    }
    std::vector<int> key{0};
    key.insert(key.end(), pick.begin() + 1, pick.end());
    for (auto& s : layer) out.push_back({key, s});
  }
};

}  // namespace

CodeAutomaton build_code_nfa(const WorktapeMachine& normal) { return Builder(normal).run(); }

Word decode_code_word(const CodeAutomaton& code, const Word& w) {
  std::vector<Word> track(code.tracks + 1);
  for (int l : w) {
    auto& tl = code.letters.at(l);
    auto push = [&](int i, int id) {
      if (id >= 0 && code.tuples[id].label != kEps) track[i].push_back(code.tuples[id].label);
    };
    if (tl.kind > 0) push(tl.kind, tl.tuples[0]);
    else
      for (int i = 1; i <= code.tracks; ++i) push(i, tl.tuples[i - 1]);
  }
  Word x;
  for (int i = 1; i <= code.tracks; ++i) {
    if (i % 2 == 0) std::reverse(track[i].begin(), track[i].end());
    x.insert(x.end(), track[i].begin(), track[i].end());
  }
  return x;
}

FiniteAutomaton project_witness(const CodeAutomaton& code) {
  const FiniteAutomaton& nfa = code.nfa;
  std::vector<int> width(code.letters.size(), 0);
  for (size_t l = 0; l < code.letters.size(); ++l)
    for (int id : code.letters[l].tuples)
      if (id >= 0 && code.tuples[id].label != kEps) ++width[l];
  std::vector<std::string> names;
  std::vector<int> image(code.letters.size(), -1);
  for (auto& t : nfa.trans)
    if (width[t.label] > 0 && image[t.label] < 0) {
      image[t.label] = static_cast<int>(names.size());
      names.push_back(nfa.alphabet.name(t.label));
    }
  names.push_back("$");
  int dollar = static_cast<int>(names.size()) - 1;
  FiniteAutomaton out;
  out.alphabet = Alphabet(names);
  for (int q = 0; q < nfa.num_states(); ++q) out.add_state();
  out.initial = nfa.initial;
  out.accepting = nfa.accepting;
  for (auto& t : nfa.trans) {
    int l = width[t.label];
    if (l == 0) {
      out.add_transition(t.from, kEps, t.to);
      continue;
    }
    int prev = t.from;
    for (int k = 0; k < l; ++k) {
      int next = k + 1 == l ? t.to : out.add_state();
      out.add_transition(prev, k == 0 ? image[t.label] : dollar, next);
      prev = next;
    }
  }
  out.normalize();
  return minimal_dfa(out);
}

WitnessResult counting_witness(const WorktapeMachine& m, int N, const RunCaps& caps) {
  AmbiguityReport amb = ambiguity(m, N, caps);
  if (amb.max_ambiguity >= 2)
    throw AmbiguityDetected("machine is ambiguous on '" + word_to_string(amb.witness, m.alphabet) + "' (" +
                                amb.max_ambiguity.str() + " accepting runs)",
                            amb);
  WitnessResult r;
  r.horizon = N;
  CodeAutomaton code = build_code_nfa(normal_form(m));
  r.witness = project_witness(code);
  r.source_counts = machine_counts(m, N, caps);
  r.witness_counts = counting_sequence(r.witness, N).terms;
  r.verified = true;
  for (int n = 0; n <= N; ++n)
    if (r.source_counts[n] != r.witness_counts[n]) {
      r.verified = false;
      r.first_disagreement = n;
      break;
    }
  return r;
}

// ---------------------------------------------------------------- adapters

WorktapeMachine dcm_to_ntm(const CounterMachine& m) {
  if (m.counters != 1) throw PreconditionError("dcm_to_ntm: expected exactly one counter");
  WorktapeMachine out;
  out.alphabet = m.alphabet;
  out.tape_symbols = {"_", "Z", "X"};
  out.reversals = m.reversals.empty() ? 0 : m.reversals[0];
  const int Z = 1, X = 2;
  int n = m.num_states();
  // state (q, eb): eb records that cell 0 has been written
  for (int q = 0; q < n; ++q) {
    out.add_state(m.states[q]);
    out.add_state(m.states[q] + "'");
  }
  auto sid = [](int q, int eb) { return 2 * q + eb; };
  out.initial = sid(m.initial, 0);
  for (auto& t : m.trans) {
    for (int eb = 0; eb < 2; ++eb)
      for (int r = 0; r < 3; ++r) {
        bool zero = r == Z || (r == 0 && !eb);
        if (r == Z && !eb) continue;  // cell 0 is only marked after the first move
        if (t.guard[0] == Guard::Zero && !zero) continue;
        if (t.guard[0] == Guard::NonZero && zero) continue;
        Move mv = t.delta[0] > 0 ? Move::R : t.delta[0] < 0 ? Move::L : Move::S;
        out.trans.push_back({sid(t.from, eb), t.label, r, zero ? Z : X, mv, sid(t.to, 1)});
      }
  }
  if (m.mode == AcceptMode::FinalZero) {
    int sink = out.add_state("accept.zero");
    out.accepting.push_back(sink);
    for (int q : m.accepting) {
      out.trans.push_back({sid(q, 0), kEps, 0, Z, Move::S, sink});
      out.trans.push_back({sid(q, 1), kEps, Z, Z, Move::S, sink});
    }
  } else {
    for (int q : m.accepting) {
      out.accepting.push_back(sid(q, 0));
      out.accepting.push_back(sid(q, 1));
    }
  }
  out.validate();
  return out;
}

WorktapeMachine pda_to_ntm(const PushdownMachine& m) {
  WorktapeMachine out;
  out.alphabet = m.alphabet;
  out.tape_symbols = {"_"};
  for (auto& s : m.stack_symbols) out.tape_symbols.push_back(s);
  out.reversals = m.reversals;
  for (int q = 0; q < m.num_states(); ++q) out.add_state(m.states[q]);
  out.initial = m.initial;
  out.accepting = m.accepting;
  int g = static_cast<int>(out.tape_symbols.size());
  auto cell = [](int s) { return s + 1; };
  for (size_t ti = 0; ti < m.trans.size(); ++ti) {
    auto& t = m.trans[ti];
    std::vector<int> reads{cell(t.top)};
    if (t.top == 0) reads.push_back(0);  // the untouched bottom cell
    for (int r : reads) {
      if (t.op == StackOp::Pop) {
        out.trans.push_back({t.from, t.label, r, r, Move::L, t.to});
      } else if (t.op == StackOp::Stay) {
        out.trans.push_back({t.from, t.label, r, r, Move::S, t.to});
      } else {
        int len = static_cast<int>(t.push.size());
        if (len == 0) throw Error("pda_to_ntm: empty push");
        if (len == 1) {
          out.trans.push_back({t.from, t.label, r, cell(t.push[0]), Move::S, t.to});
          continue;
        }
        // write push[len-1] here, then the rest in fresh cells above
        int prev = out.add_state("push" + std::to_string(ti) + "_" + std::to_string(r) + "_1");
        out.trans.push_back({t.from, t.label, r, cell(t.push[len - 1]), Move::R, prev});
        for (int k = len - 2; k >= 0; --k) {
          int next = k == 0 ? t.to
                            : out.add_state("push" + std::to_string(ti) + "_" + std::to_string(r) + "_" +
                                            std::to_string(len - k));
          for (int stale = 0; stale < g; ++stale)
            out.trans.push_back({prev, kEps, stale, cell(t.push[k]), k == 0 ? Move::S : Move::R, next});
          prev = next;
        }
      }
    }
  }
  out.validate();
  return out;
}

}  // namespace countreg
