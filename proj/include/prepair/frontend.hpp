#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "prepair/constraints.hpp"
#include "prepair/mc.hpp"
#include "prepair/repair.hpp"

namespace prepair {

struct input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Document {
  std::string name;
  System original;  // as written (guards unsplit, no completion)
  System sys;       // split, completed, and producted if an automaton is given
  UpSet err;
  bool pairing = false;
  bool one_hot = false;
  std::vector<std::string> extra_text;
  Constraint init;
  std::optional<Automaton> automaton;
  int explicit_b = 0;
  std::vector<std::string> notes;  // completions and other normalizations
  nlohmann::json errors_spec;      // normalized copy of the errors section
  nlohmann::json meta;             // passthrough "meta" block
};

Document parse_document(const std::string& text, const std::string& name = "<input>");
Document load_document(const std::string& path);
nlohmann::json emit_document(const Document& doc);

nlohmann::json config_json(const System& sys, const Config& c);
nlohmann::json sequence_json(const System& sys, const std::vector<std::vector<Config>>& sets);
std::string format_set(const System& sys, const std::vector<Config>& set);

nlohmann::json repair_report(const Document& doc, const RepairOutcome& out, const RepairOptions& opts);
std::string repair_summary(const Document& doc, const RepairOutcome& out, bool show_constraints);

// removed transitions of a candidate, by id
std::vector<std::string> removed_ids(const System& sys, const std::vector<char>& keep);

}  // namespace prepair
