#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "countreg/artifacts.hpp"
#include "countreg/bounded.hpp"
#include "countreg/counting.hpp"
#include "countreg/ntm_witness.hpp"
#include "countreg/parikh.hpp"
#include "countreg/slender.hpp"

using namespace countreg;
using json = nlohmann::ordered_json;

namespace {

// a semi-decision result carries its horizon; everything else says exact
struct Report {
  std::string command;
  std::vector<std::string> lines;
  json result = json::object();
  std::string status = "exact";
  json inputs = json::array();
  json limits = json::object();
  int exit_code = 0;

  void line(const std::string& s) { lines.push_back(s); }
  void horizon(int n) { status = "verified to horizon " + std::to_string(n); }
};

struct Options {
  std::string format = "text";
  std::vector<std::string> files;
  int n = 10;
  int k = 1;
  std::string out;
  std::string mode;
  std::string shape;
  std::string alphabet;
  int merge = 1;
  int max_word = 2;
  long max_counter = 0, max_eps = 0, max_cells = 0, max_steps = 0;
  RunCaps caps() const { return {max_counter, max_eps, max_cells, max_steps}; }
};

std::string big(const BigInt& v) { return v.str(); }

std::string join_counts(const std::vector<BigInt>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + big(v[i]);
  return s;
}

json counts_json(const std::vector<BigInt>& v) {
  json a = json::array();
  for (auto& x : v) a.push_back(big(x));
  return a;
}

std::string show_word(const Word& w, const Alphabet& a) { return w.empty() ? "eps" : word_to_string(w, a); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
}

std::string default_out(const std::string& input, const std::string& suffix) {
  return std::filesystem::path(input).stem().string() + suffix;
}

class Runner {
 public:
  Runner(const Options& o, Report& r) : o_(o), r_(r) {}

  Artifact load(size_t i) {
    if (i >= o_.files.size()) throw Error("missing input file");
    Artifact a = load_artifact(o_.files[i]);
    r_.inputs.push_back({{"path", o_.files[i]}, {"kind", kind_name(a.kind)}, {"fnv1a", fnv1a_hex(a.text)}});
    return a;
  }

  FiniteAutomaton automaton(size_t i) {
    Artifact a = load(i);
    if (!a.fa) throw PreconditionError(o_.files[i] + ": expected a finite automaton or regex");
    return *a.fa;
  }

  void caps() {
    RunCaps c = o_.caps();
    r_.limits["max_counter"] = c.max_counter;
    r_.limits["max_eps_chain"] = c.max_eps_chain;
    r_.limits["max_tape_cells"] = c.max_tape_cells;
    r_.limits["max_steps"] = c.max_steps;
  }

  void count() {
    Artifact a = load(0);
    BigInt v;
    if (a.fa) {
      v = count_words(minimal_dfa(*a.fa), o_.n);
    } else {
      caps();
      v = artifact_counts(a, o_.n, o_.caps()).back();
      r_.result["method"] = "enumeration";
    }
    r_.result["n"] = o_.n;
    r_.result["count"] = big(v);
    r_.line(big(v));
  }

  void seq() {
    Artifact a = load(0);
    if (!a.fa) {
      caps();
      r_.result["method"] = "enumeration";
    }
    auto c = artifact_counts(a, o_.n, o_.caps());
    r_.result["n"] = o_.n;
    r_.result["counts"] = counts_json(c);
    r_.line(join_counts(c));
  }

  void gf() {
    FiniteAutomaton d = minimal_dfa(automaton(0));
    RationalGF g = generating_function(d);
    r_.result["gf"] = gf_to_string(g);
    r_.line(gf_to_string(g));
    PoleReport p = pole_report(g, o_.merge);
    json roots = json::array();
    for (auto& root : p.roots) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "%.9g%+.9gi", root.value.real(), root.value.imag());
      roots.push_back({{"root", buf}, {"multiplicity", root.multiplicity}, {"modulus", root.modulus}});
      char row[192];
      std::snprintf(row, sizeof row, "pole %s multiplicity %d modulus %.9g", buf, root.multiplicity, root.modulus);
      r_.line(row);
    }
    json classes = json::array();
    for (auto& c : p.classes) {
      classes.push_back({{"residue", c.residue}, {"dominating", dominance_name(c.dominating)}, {"note", c.note}});
      r_.line("residue " + std::to_string(c.residue) + " mod " + std::to_string(p.merge_period) +
              ": dominating pole " + dominance_name(c.dominating) + (c.note.empty() ? "" : " (" + c.note + ")"));
    }
    r_.result["poles"] = roots;
    r_.result["merge_period"] = p.merge_period;
    r_.result["classes"] = classes;
  }

  void classify() {
    GrowthClass g = classify_growth(minimal_dfa(automaton(0)));
    r_.result["growth"] = growth_to_string(g);
    r_.line("growth: " + growth_to_string(g));
  }

  void eqcount() {
    FiniteAutomaton a = minimal_dfa(automaton(0)), b = minimal_dfa(automaton(1));
    bool eq = counting_equal(a, b);
    int h = counting_equal_horizon(a, b);
    r_.result["equal"] = eq;
    r_.result["compared_terms"] = h;
    r_.line(std::string("counting-equal: ") + (eq ? "yes" : "no"));
    r_.line("compared terms: " + std::to_string(h));
    if (!eq) {
      auto sa = counting_sequence(a, h).terms, sb = counting_sequence(b, h).terms;
      for (int i = 0; i <= h; ++i)
        if (sa[i] != sb[i]) {
          r_.result["first_difference"] = i;
          r_.line("first difference at n=" + std::to_string(i) + ": " + big(sa[i]) + " vs " + big(sb[i]));
          break;
        }
      r_.exit_code = 1;
    }
  }

  void enumerate_words() {
    Artifact a = load(0);
    if (!a.fa) caps();
    WordList w = artifact_words(a, o_.n, o_.caps());
    json arr = json::array();
    for (auto& x : w.words) {
      arr.push_back(show_word(x, artifact_alphabet(a)));
      r_.line(show_word(x, artifact_alphabet(a)));
    }
    r_.result["max_len"] = o_.n;
    r_.result["words"] = arr;
  }

  void ambiguity_check() {
    Artifact a = load(0);
    caps();
    AmbiguityReport rep;
    if (a.pda) rep = ambiguity(*a.pda, o_.n, o_.caps());
    else if (a.ntm) rep = ambiguity(*a.ntm, o_.n, o_.caps());
    else rep = ambiguity(as_counter_machine(a), o_.n, o_.caps());
    r_.horizon(o_.n);
    r_.result["max_ambiguity"] = big(rep.max_ambiguity);
    r_.line("max ambiguity: " + big(rep.max_ambiguity));
    if (rep.max_ambiguity > 1) {
      r_.result["witness"] = show_word(rep.witness, artifact_alphabet(a));
      r_.line("witness: " + show_word(rep.witness, artifact_alphabet(a)));
      r_.exit_code = 1;
    }
  }

  void ncm_empty() {
    Artifact a = load(0);
    CounterMachine m = as_counter_machine(a);
    EmptinessResult e = ncm_emptiness(m);
    r_.result["empty"] = e.empty;
    r_.line(std::string("empty: ") + (e.empty ? "yes" : "no"));
    if (!e.empty) {
      r_.result["witness"] = show_word(e.witness, m.alphabet);
      r_.line("witness: " + show_word(e.witness, m.alphabet));
      r_.exit_code = 1;
    }
  }

  void ncm_parikh_image() {
    Artifact a = load(0);
    SemilinearSet s = ncm_parikh(as_counter_machine(a));
    std::string text = semilinear_to_text(s);
    r_.result["alphabet"] = artifact_alphabet(a).symbols();
    r_.result["semilinear"] = text;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) r_.line(l);
  }

  void witness_ntm() {
    Artifact a = load(0);
    caps();
    WorktapeMachine m = as_worktape(a);
    r_.horizon(o_.n);
    WitnessResult w;
    try {
      w = counting_witness(m, o_.n, o_.caps());
    } catch (const AmbiguityDetected& e) {
      r_.result["refused"] = "ambiguous";
      r_.result["ambiguity"] = big(e.report.max_ambiguity);
      r_.result["witness"] = show_word(e.report.witness, m.alphabet);
      r_.line("refused: machine is ambiguous");
      r_.line("ambiguity: " + big(e.report.max_ambiguity));
      r_.line("witness: " + show_word(e.report.witness, m.alphabet));
      r_.exit_code = 1;
      return;
    }
    std::string out = o_.out.empty() ? default_out(o_.files[0], ".witness.dfa") : o_.out;
    write_text(out, automaton_to_text(w.witness));
    r_.result["verified"] = w.verified;
    r_.result["witness_file"] = out;
    r_.result["witness_states"] = w.witness.num_states();
    r_.result["source_counts"] = counts_json(w.source_counts);
    r_.result["witness_counts"] = counts_json(w.witness_counts);
    r_.line(std::string("verified=") + (w.verified ? "true" : "false"));
    r_.line("witness: " + out + " (" + std::to_string(w.witness.num_states()) + " states)");
    r_.line("source counts: " + join_counts(w.source_counts));
    r_.line("witness counts: " + join_counts(w.witness_counts));
    if (!w.verified) {
      r_.result["first_disagreement"] = w.first_disagreement;
      r_.line("first disagreement at n=" + std::to_string(w.first_disagreement));
      r_.exit_code = 1;
    }
  }

  void witness_bounded() {
    Artifact a = load(0);
    SemilinearSet s;
    BoundedShape shape;
    std::string shape_text = o_.shape;
    if (o_.files.size() > 1) {
      Artifact sh = load(1);
      shape_text = sh.text;
    }
    if (shape_text.empty()) throw Error("witness-bounded needs --shape or a shape file");
    if (shape_text.rfind("shape", 0) != 0) shape_text = "shape " + shape_text;
    if (a.kind == ArtifactKind::Semilinear) {
      Alphabet sigma;
      if (!o_.alphabet.empty()) {
        std::istringstream in(o_.alphabet);
        std::vector<std::string> syms;
        for (std::string t; in >> t;) syms.push_back(t);
        sigma = Alphabet(syms);
      } else {
        std::set<std::string> used;
        std::istringstream in(shape_text);
        std::string t;
        in >> t;
        while (in >> t)
          for (char c : t) used.insert(std::string(1, c));
        sigma = Alphabet(std::vector<std::string>(used.begin(), used.end()));
      }
      shape = parse_shape(shape_text, sigma);
      s = *a.sl;
    } else {
      CounterMachine m = as_counter_machine(a);
      shape = parse_shape(shape_text, m.alphabet);
      s = ind_of(m, shape);
      r_.result["ind"] = semilinear_to_text(s);
    }
    BoundedWitness w = bounded_witness(s, shape);
    r_.status = "exact; injectivity verified to horizon " + std::to_string(w.injectivity_horizon);
    std::string out = o_.out.empty() ? default_out(o_.files[0], ".bounded.dfa") : o_.out;
    write_text(out, automaton_to_text(w.witness));
    // phi-image counts by enumeration of the set
    IntVec weight;
    for (auto& u : shape.words) weight.push_back(static_cast<long>(u.size()));
    std::vector<BigInt> image(o_.n + 1, 0);
    for (auto& v : members_up_to(s, weight, o_.n)) {
      long len = 0;
      for (size_t i = 0; i < v.size(); ++i) len += v[i] * weight[i];
      image[len] += 1;
    }
    auto wc = counting_sequence(w.witness, o_.n).terms;
    bool agree = wc == image;
    r_.result["witness_file"] = out;
    r_.result["witness_counts"] = counts_json(wc);
    r_.result["image_counts"] = counts_json(image);
    r_.result["agree"] = agree;
    r_.line("witness: " + out + " (" + std::to_string(w.witness.num_states()) + " states)");
    r_.line("witness counts: " + join_counts(wc));
    r_.line("image counts: " + join_counts(image));
    r_.line(std::string("agree to n=") + std::to_string(o_.n) + ": " + (agree ? "yes" : "no"));
    if (!agree) r_.exit_code = 1;
  }

  void witness_combine_cmd() {
    CombineMode mode = parse_combine_mode(o_.mode);
    FiniteAutomaton r1 = automaton(0);
    std::optional<FiniteAutomaton> r2;
    if (o_.files.size() > 1) r2 = automaton(1);
    FiniteAutomaton w = witness_combine(mode, r1, r2 ? &*r2 : nullptr);
    std::string text = automaton_to_text(w);
    if (!o_.out.empty()) write_text(o_.out, text);
    r_.result["states"] = w.num_states();
    r_.result["counts"] = counts_json(counting_sequence(minimal_dfa(w), o_.n).terms);
    if (!o_.out.empty()) r_.result["witness_file"] = o_.out;
    emit_text(text);
  }

  void slender() {
    Artifact a = load(0);
    SlenderVerdict v = a.fa ? dfa_k_slender(*a.fa, o_.k) : ncm_k_slender(as_counter_machine(a), o_.k);
    verdict(v, artifact_alphabet(a));
  }

  // boundedness evidence for slender inputs: a shape holding every word up to n
  void shape_search() {
    Artifact a = load(0);
    CounterMachine m = as_counter_machine(a);
    r_.horizon(o_.n);
    auto sh = find_shape(m, o_.k, o_.max_word, o_.n);
    r_.result["found"] = sh.has_value();
    if (!sh) {
      r_.line("no shape with at most " + std::to_string(o_.k) + " words of length <= " + std::to_string(o_.max_word));
      r_.exit_code = 1;
      return;
    }
    std::string text = shape_to_text(*sh, m.alphabet);
    while (!text.empty() && text.back() == '\n') text.pop_back();
    r_.result["shape"] = text;
    r_.line(text);
  }

  CountingAutomaton effective(const Artifact& a) {
    if (a.table) return *a.table;
    return a.fa ? slender_effective_dfa(*a.fa, o_.k) : ncm_slender_effective(as_counter_machine(a), o_.k);
  }

  void slender_effective() {
    Artifact a = load(0);
    CountingAutomaton ca = effective(a);
    std::string text = counting_automaton_to_text(ca);
    if (!o_.out.empty()) {
      write_text(o_.out, text);
      r_.result["file"] = o_.out;
    }
    json vals = json::array();
    std::string row;
    for (int n = 0; n <= o_.n; ++n) {
      vals.push_back(ca.value(n));
      row += (n ? " " : "") + std::to_string(ca.value(n));
    }
    r_.result["k"] = ca.k;
    r_.result["values"] = vals;
    if (o_.out.empty()) emit_text(text);
    r_.line("f(0.." + std::to_string(o_.n) + "): " + row);
  }

  void witness_slender() {
    Artifact a = load(0);
    CountingAutomaton ca = effective(a);
    FiniteAutomaton w = k_counting_witness(ca);
    std::string text = automaton_to_text(w);
    if (!o_.out.empty()) {
      write_text(o_.out, text);
      r_.result["witness_file"] = o_.out;
    }
    r_.result["states"] = w.num_states();
    r_.result["counts"] = counts_json(counting_sequence(w, o_.n).terms);
    if (o_.out.empty()) emit_text(text);
  }

  void slender_contain() {
    Artifact a = load(0), b = load(1);
    CounterMachine m1 = as_counter_machine(a), m2 = as_counter_machine(b);
    ContainmentResult c = slender_containment(m1, m2, o_.k);
    r_.result["contained"] = c.contained;
    r_.line(std::string("contained: ") + (c.contained ? "yes" : "no"));
    if (!c.contained) {
      if (c.witness) {
        r_.result["witness"] = show_word(*c.witness, m1.alphabet);
        r_.line("witness: " + show_word(*c.witness, m1.alphabet));
      }
      r_.exit_code = 1;
    }
  }

  void slender_diff() {
    Artifact a = load(0), b = load(1);
    CounterMachine d = slender_difference(as_counter_machine(a), as_counter_machine(b), o_.k);
    std::string text = counter_machine_to_text(d);
    if (!o_.out.empty()) {
      write_text(o_.out, text);
      r_.result["file"] = o_.out;
    }
    r_.result["states"] = d.num_states();
    r_.result["transitions"] = d.trans.size();
    if (o_.out.empty()) emit_text(text);
  }

  void slender_disjoint_cmd() {
    Artifact a = load(0), b = load(1);
    bool dis = slender_disjoint(as_counter_machine(a), as_counter_machine(b), o_.k);
    r_.result["disjoint"] = dis;
    r_.line(std::string("disjoint: ") + (dis ? "yes" : "no"));
    if (!dis) r_.exit_code = 1;
  }

  void check_witness() {
    FiniteAutomaton w = automaton(0);
    Artifact src = load(1);
    if (!src.fa) caps();
    auto wc = counting_sequence(minimal_dfa(w), o_.n).terms;
    auto sc = artifact_counts(src, o_.n, o_.caps());
    r_.horizon(o_.n);
    bool agree = wc == sc;
    r_.result["agree"] = agree;
    r_.result["witness_counts"] = counts_json(wc);
    r_.result["source_counts"] = counts_json(sc);
    r_.line(std::string("agree: ") + (agree ? "yes" : "no"));
    r_.line("witness counts: " + join_counts(wc));
    r_.line("source counts: " + join_counts(sc));
    if (!agree) {
      for (int i = 0; i <= o_.n; ++i)
        if (wc[i] != sc[i]) {
          r_.result["first_disagreement"] = i;
          r_.line("first disagreement at n=" + std::to_string(i));
          break;
        }
      r_.exit_code = 1;
    }
  }

  void plot() {
    Artifact a = load(0);
    if (!a.fa) caps();
    auto c = artifact_counts(a, o_.n, o_.caps());
    std::vector<double> lg;
    double top = 0;
    for (auto& v : c) {
      double x = std::log2(static_cast<double>(v) + 1.0);
      lg.push_back(x);
      top = std::max(top, x);
    }
    r_.line("n count log2(1+count)");
    for (size_t i = 0; i < c.size(); ++i) {
      char buf[64];
      std::snprintf(buf, sizeof buf, " %.6f", lg[i]);
      r_.line(std::to_string(i) + " " + big(c[i]) + buf);
    }
    r_.result["counts"] = counts_json(c);
    if (!o_.out.empty()) {
      // one 8-pixel column per n, bar height proportional to log2(1+count)
      int W = static_cast<int>(c.size()) * 8, H = 100;
      std::string img = "P2\n" + std::to_string(W) + " " + std::to_string(H) + "\n255\n";
      for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
          double h = top > 0 ? lg[x / 8] / top * (H - 1) : 0;
          bool on = (x % 8) != 7 && H - 1 - y <= h && lg[x / 8] > 0;
          img += on ? "0 " : "255 ";
        }
        img += "\n";
      }
      write_text(o_.out, img);
      r_.result["image"] = o_.out;
    }
  }

  void corpus() {
    std::string dir = o_.files.empty() ? "fixtures" : o_.files[0];
    r_.inputs.push_back({{"path", dir + "/corpus.txt"}, {"fnv1a", fnv1a_hex(read_file(dir + "/corpus.txt"))}});
    caps();
    json entries = json::array();
    bool all = true;
    int longest = 0;
    for (auto& e : load_fixture_corpus(dir)) {
      int N = static_cast<int>(e.recorded.size()) - 1;
      longest = std::max(longest, N);
      auto got = artifact_counts(e.artifact, N, o_.caps());
      bool ok = got == e.recorded;
      all = all && ok;
      entries.push_back({{"name", e.name}, {"file", e.file}, {"ok", ok}, {"counts", counts_json(got)}});
      r_.line(e.name + " " + (ok ? "ok" : "MISMATCH") + ": " + join_counts(got));
    }
    r_.result["entries"] = entries;
    r_.result["all_ok"] = all;
    r_.horizon(longest);
    r_.status = "exact on each recorded prefix";
    if (!all) r_.exit_code = 1;
  }

 private:
  void verdict(const SlenderVerdict& v, const Alphabet& sigma) {
    r_.result["k"] = v.k;
    r_.result["slender"] = v.slender;
    r_.line(std::string("k-slender: ") + (v.slender ? "yes" : "no") + " (exact)");
    if (!v.slender) {
      json ws = json::array();
      std::string row;
      for (auto& w : v.counterexample) {
        ws.push_back(show_word(w, sigma));
        row += " " + show_word(w, sigma);
      }
      r_.result["counterexample"] = ws;
      r_.result["length"] = v.counterexample.empty() ? 0 : v.counterexample[0].size();
      r_.line("counterexample:" + row);
      r_.exit_code = 1;
    }
  }

  void emit_text(const std::string& text) {
    r_.result["text"] = text;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) r_.line(l);
  }

  const Options& o_;
  Report& r_;
};

void print(const Report& r, const std::string& format, double ms) {
  if (format == "structured") {
    json j;
    j["command"] = r.command;
    j["status"] = r.status;
    j["result"] = r.result;
    j["provenance"] = {{"inputs", r.inputs}, {"budget", default_state_budget()}, {"limits", r.limits}};
    j["exit_code"] = r.exit_code;
    j["timing_ms"] = ms;
    std::cout << j.dump(2) << "\n";
    return;
  }
  for (auto& l : r.lines) std::cout << l << "\n";
  std::cout << "result: " << r.status << "\n";
  for (auto& in : r.inputs) {
    std::cout << "input: " << in["path"].get<std::string>();
    if (in.contains("kind")) std::cout << " (" << in["kind"].get<std::string>() << ")";
    std::cout << " fnv1a:" << in["fnv1a"].get<std::string>() << "\n";
  }
  std::cout << "budget: " << default_state_budget() << "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "time: %.1f ms", ms);
  std::cout << buf << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"counting functions, counting-regular witnesses and slenderness"};
  app.require_subcommand(1, 1);
  Options o;

  struct Cmd {
    const char* name;
    const char* help;
    void (Runner::*run)();
    int files;   // required inputs; -1 for optional
    bool n, k, out, caps;
  };
  const std::vector<Cmd> cmds = {
      {"count", "number of words of length n", &Runner::count, 1, true, false, false, true},
      {"seq", "counting sequence for lengths 0..n", &Runner::seq, 1, true, false, false, true},
      {"gf", "rational generating function and pole diagnostics", &Runner::gf, 1, false, false, false, false},
      {"classify", "growth class of the counting function", &Runner::classify, 1, false, false, false, false},
      {"eqcount", "do two automata have the same counting function", &Runner::eqcount, 2, false, false, false, false},
      {"enum", "words up to length n", &Runner::enumerate_words, 1, true, false, false, true},
      {"ambiguity", "largest number of accepting runs up to length n", &Runner::ambiguity_check, 1, true, false, false, true},
      {"ncm-empty", "emptiness of a reversal-bounded counter machine", &Runner::ncm_empty, 1, false, false, false, false},
      {"ncm-parikh", "Parikh image as a semilinear set", &Runner::ncm_parikh_image, 1, false, false, false, false},
      {"witness-ntm", "regular witness with the same counting function", &Runner::witness_ntm, 1, true, false, true, true},
      {"witness-bounded", "regular witness for a bounded semilinear language", &Runner::witness_bounded, -1, true, false, true, false},
      {"witness-combine", "combine two witnesses", &Runner::witness_combine_cmd, -1, true, false, true, false},
      {"slender", "decide k-slenderness", &Runner::slender, 1, false, true, false, false},
      {"slender-effective", "unary automaton reporting f(n) up to k", &Runner::slender_effective, 1, true, true, true, false},
      {"witness-slender", "DFA over {1,#1..#k} with the same counting function", &Runner::witness_slender, 1, true, true, true, false},
      {"slender-contain", "is L1 contained in the k-slender L2", &Runner::slender_contain, 2, false, true, false, false},
      {"slender-diff", "machine for L1 - L2 with L2 k-slender", &Runner::slender_diff, 2, false, true, true, false},
      {"slender-disjoint", "are L1 and L2 disjoint", &Runner::slender_disjoint_cmd, 2, false, true, false, false},
      {"shape-search", "look for u1..uk with every accepted word in u1*..uk*", &Runner::shape_search, 1, true, true, false, false},
      {"check-witness", "compare a witness with a brute-force counting sequence", &Runner::check_witness, 2, true, false, false, true},
      {"plot", "counting curve as text columns and an optional PGM image", &Runner::plot, 1, true, false, true, true},
      {"corpus", "check the fixture corpus against its recorded sequences", &Runner::corpus, -1, false, false, false, true},
  };
  std::map<CLI::App*, const Cmd*> by_app;
  for (auto& c : cmds) {
    CLI::App* s = app.add_subcommand(c.name, c.help);
    auto* files = s->add_option("files", o.files, "input files");
    if (c.files > 0) files->required()->expected(c.files);
    s->add_option("--format", o.format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
    if (c.n) s->add_option("--n,--N", o.n, "length or horizon")->check(CLI::NonNegativeNumber);
    if (c.k) s->add_option("--k", o.k, "slenderness bound")->check(CLI::PositiveNumber);
    if (c.out) s->add_option("--out,-o", o.out, "output file");
    if (c.caps) {
      s->add_option("--max-counter", o.max_counter, "counter value cap");
      s->add_option("--max-eps", o.max_eps, "epsilon chain cap");
      s->add_option("--max-cells", o.max_cells, "tape cell cap");
      s->add_option("--max-steps", o.max_steps, "step cap");
    }
    if (std::string(c.name) == "shape-search") s->add_option("--max-word", o.max_word, "longest shape word")->check(CLI::PositiveNumber);
    if (std::string(c.name) == "gf") s->add_option("--merge", o.merge, "merge period for the dominance check")->check(CLI::PositiveNumber);
    if (std::string(c.name) == "witness-combine")
      s->add_option("--mode", o.mode, "marked_union, marked_concat, marked_star, tag_concat_prefixcode or tag_star_code")->required();
    if (std::string(c.name) == "witness-bounded") {
      s->add_option("--shape", o.shape, "words u1 .. uk, e.g. \"ab c\"");
      s->add_option("--alphabet", o.alphabet, "symbols for splitting the shape words");
    }
    by_app[s] = &c;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  CLI::App* sub = app.get_subcommands().front();
  const Cmd* cmd = by_app.at(sub);
  Report r;
  r.command = cmd->name;
  auto t0 = std::chrono::steady_clock::now();
  try {
    Runner run(o, r);
    (run.*(cmd->run))();
  } catch (const Error& e) {
    std::cerr << "countreg " << cmd->name << ": error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "countreg " << cmd->name << ": error: " << e.what() << "\n";
    return 2;
  }
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  print(r, o.format, ms);
  return r.exit_code;
}
