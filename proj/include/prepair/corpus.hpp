#pragma once

#include <string>
#include <vector>

#include "prepair/frontend.hpp"

namespace prepair {

struct CorpusEntry {
  std::string name;
  std::string path;
  bool reconstructed = false;
};

// PREPAIR_CORPUS overrides the compiled-in directory
std::string corpus_dir();
std::vector<CorpusEntry> corpus_files();
Document load_corpus(const std::string& name);

}  // namespace prepair
