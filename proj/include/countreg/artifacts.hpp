#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "countreg/automata.hpp"
#include "countreg/counting.hpp"
#include "countreg/machines.hpp"
#include "countreg/semilinear.hpp"
#include "countreg/slender.hpp"

namespace countreg {

enum class ArtifactKind { Automaton, Regex, Counter, Pushdown, Worktape, Semilinear, CountingTable, Shape };

struct Artifact {
  std::string path;
  ArtifactKind kind = ArtifactKind::Automaton;
  std::string text;
  std::optional<FiniteAutomaton> fa;  // automata and regexes
  std::optional<CounterMachine> cm;
  std::optional<PushdownMachine> pda;
  std::optional<WorktapeMachine> ntm;
  std::optional<SemilinearSet> sl;
  std::optional<CountingAutomaton> table;
};

std::uint64_t fnv1a(const std::string& data);
std::string fnv1a_hex(const std::string& data);
std::string kind_name(ArtifactKind k);

// The kind comes from the `type` directive, a leading `semilinear` or `shape`
// line, or else the text is a regular expression (with an optional
// `alphabet` line; otherwise the alphabet is the set of characters used).
// Shapes are kept as text since they need an alphabet to split.
Artifact parse_artifact(const std::string& text, const std::string& path = "");
Artifact load_artifact(const std::string& path);
std::string read_file(const std::string& path);

bool is_machine(const Artifact& a);
bool is_finite(const Artifact& a);
const Alphabet& artifact_alphabet(const Artifact& a);
// finite automata as one-idle-counter machines
CounterMachine as_counter_machine(const Artifact& a);
// counter machines and pushdown machines through the adapters
WorktapeMachine as_worktape(const Artifact& a);

// exact counts 0..N: transfer matrix for finite automata, enumeration otherwise
std::vector<BigInt> artifact_counts(const Artifact& a, int N, const RunCaps& caps = {});
WordList artifact_words(const Artifact& a, int max_len, const RunCaps& caps = {});

struct CorpusEntry {
  std::string name;
  std::string file;
  Artifact artifact;
  std::vector<BigInt> recorded;  // counts from length 0
};

// reads corpus.txt in dir: "name file c0 c1 ..." per line
std::vector<CorpusEntry> load_fixture_corpus(const std::string& dir);

}  // namespace countreg
