#include "countreg/artifacts.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "text_util.hpp"
#include "countreg/ntm_witness.hpp"

namespace countreg {

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string fnv1a_hex(const std::string& data) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(data)));
  return buf;
}

std::string kind_name(ArtifactKind k) {
  switch (k) {
    case ArtifactKind::Automaton: return "automaton";
    case ArtifactKind::Regex: return "regex";
    case ArtifactKind::Counter: return "counter-machine";
    case ArtifactKind::Pushdown: return "pushdown";
    case ArtifactKind::Worktape: return "worktape";
    case ArtifactKind::Semilinear: return "semilinear";
    case ArtifactKind::CountingTable: return "counting-automaton";
    case ArtifactKind::Shape: return "shape";
  }
  return "?";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

namespace {

FiniteAutomaton regex_artifact(const std::string& text) {
  std::string pattern;
  std::optional<Alphabet> sigma;
  for (auto& ln : detail::tokenize_lines(text)) {
    if (ln.tokens[0] == "alphabet") {
      sigma = Alphabet(std::vector<std::string>(ln.tokens.begin() + 1, ln.tokens.end()));
    } else {
      if (!pattern.empty()) throw ParseError("more than one pattern line", ln.number);
      pattern = detail::join(ln.tokens, " ");
    }
  }
  if (pattern.empty()) throw ParseError("empty pattern");
  if (!sigma) {
    std::string rest;
    for (size_t i = 0; i < pattern.size(); ++i) {
      if (pattern.compare(i, 3, "eps") == 0) {
        i += 2;
        continue;
      }
      rest += pattern[i];
    }
    std::set<std::string> used;
    for (char c : rest)
      if (!std::isspace(static_cast<unsigned char>(c)) && std::string("()+|*^").find(c) == std::string::npos)
        used.insert(std::string(1, c));
    sigma = Alphabet(std::vector<std::string>(used.begin(), used.end()));
  }
  return parse_regex(pattern, *sigma);
}

}  // namespace

Artifact parse_artifact(const std::string& text, const std::string& path) {
  Artifact a;
  a.path = path;
  a.text = text;
  auto lines = detail::tokenize_lines(text);
  if (lines.empty()) throw ParseError("empty input");
  std::string head = lines[0].tokens[0];
  std::string type;
  bool labels = false;
  for (auto& ln : lines) {
    if (ln.tokens[0] == "type" && ln.tokens.size() >= 2 && type.empty()) type = ln.tokens[1];
    if (ln.tokens[0] == "labels") labels = true;
  }
  if (head == "semilinear") {
    a.kind = ArtifactKind::Semilinear;
    a.sl = parse_semilinear(text);
  } else if (head == "shape") {
    a.kind = ArtifactKind::Shape;
  } else if (type == "dfa" || type == "nfa") {
    if (labels) {
      a.kind = ArtifactKind::CountingTable;
      a.table = parse_counting_automaton(text);
      a.fa = a.table->dfa;
    } else {
      a.kind = ArtifactKind::Automaton;
      a.fa = parse_automaton(text);
    }
  } else if (type == "dcm" || type == "ncm") {
    a.kind = ArtifactKind::Counter;
    a.cm = parse_counter_machine(text);
  } else if (type == "pda") {
    a.kind = ArtifactKind::Pushdown;
    a.pda = parse_pushdown(text);
  } else if (type == "ntm" || type == "dtm") {
    a.kind = ArtifactKind::Worktape;
    a.ntm = parse_worktape(text);
  } else if (!type.empty()) {
    throw ParseError("unknown type '" + type + "'", lines[0].number);
  } else {
    a.kind = ArtifactKind::Regex;
    a.fa = regex_artifact(text);
  }
  return a;
}

Artifact load_artifact(const std::string& path) {
  std::string text = read_file(path);
  try {
    return parse_artifact(text, path);
  } catch (const Error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

bool is_machine(const Artifact& a) {
  return a.kind == ArtifactKind::Counter || a.kind == ArtifactKind::Pushdown || a.kind == ArtifactKind::Worktape;
}

bool is_finite(const Artifact& a) { return a.fa.has_value(); }

const Alphabet& artifact_alphabet(const Artifact& a) {
  if (a.fa) return a.fa->alphabet;
  if (a.cm) return a.cm->alphabet;
  if (a.pda) return a.pda->alphabet;
  if (a.ntm) return a.ntm->alphabet;
  throw PreconditionError(kind_name(a.kind) + " has no input alphabet");
}

CounterMachine as_counter_machine(const Artifact& a) {
  if (a.cm) return *a.cm;
  if (a.fa && a.kind != ArtifactKind::CountingTable) return machine_from_automaton(*a.fa);
  throw PreconditionError("expected a counter machine or finite automaton, got " + kind_name(a.kind));
}

WorktapeMachine as_worktape(const Artifact& a) {
  if (a.ntm) return *a.ntm;
  if (a.cm) return dcm_to_ntm(*a.cm);
  if (a.pda) return pda_to_ntm(*a.pda);
  throw PreconditionError("expected a worktape, counter, or pushdown machine, got " + kind_name(a.kind));
}

std::vector<BigInt> artifact_counts(const Artifact& a, int N, const RunCaps& caps) {
  if (a.fa) return counting_sequence(minimal_dfa(*a.fa), N).terms;
  if (a.cm) return machine_counts(*a.cm, N, caps);
  if (a.pda) return machine_counts(*a.pda, N, caps);
  if (a.ntm) return machine_counts(*a.ntm, N, caps);
  throw PreconditionError(kind_name(a.kind) + " has no counting sequence");
}

WordList artifact_words(const Artifact& a, int max_len, const RunCaps& caps) {
  if (a.fa) return enumerate(*a.fa, max_len);
  if (a.cm) return enumerate_lang(*a.cm, max_len, caps);
  if (a.pda) return enumerate_lang(*a.pda, max_len, caps);
  if (a.ntm) return enumerate_lang(*a.ntm, max_len, caps);
  throw PreconditionError(kind_name(a.kind) + " has no words");
}

std::vector<CorpusEntry> load_fixture_corpus(const std::string& dir) {
  std::string listing = dir + "/corpus.txt";
  std::vector<CorpusEntry> out;
  for (auto& ln : detail::tokenize_lines(read_file(listing))) {
    if (ln.tokens.size() < 3) throw ParseError(listing + ": expected name, file and counts", ln.number);
    CorpusEntry e;
    e.name = ln.tokens[0];
    e.file = ln.tokens[1];
    for (size_t i = 2; i < ln.tokens.size(); ++i) {
      try {
        e.recorded.emplace_back(ln.tokens[i]);
      } catch (const std::exception&) {
        throw ParseError(listing + ": bad count '" + ln.tokens[i] + "'", ln.number);
      }
    }
    e.artifact = load_artifact(dir + "/" + e.file);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace countreg
