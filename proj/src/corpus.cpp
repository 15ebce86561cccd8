#include "prepair/corpus.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>

#ifndef PREPAIR_CORPUS_DIR
#define PREPAIR_CORPUS_DIR "corpus"
#endif

namespace prepair {

std::string corpus_dir() {
  if (const char* env = std::getenv("PREPAIR_CORPUS")) return env;
  return PREPAIR_CORPUS_DIR;
}

std::vector<CorpusEntry> corpus_files() {
  namespace fs = std::filesystem;
  std::vector<CorpusEntry> out;
  const fs::path dir = corpus_dir();
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".json") continue;
    CorpusEntry c;
    c.name = e.path().stem().string();
    c.path = e.path().string();
    auto doc = load_document(c.path);
    c.reconstructed = doc.meta.is_object() && doc.meta.value("reconstructed", false);
    out.push_back(c);
  }
  std::sort(out.begin(), out.end(), [](const CorpusEntry& a, const CorpusEntry& b) { return a.name < b.name; });
  return out;
}

Document load_corpus(const std::string& name) {
  return load_document((std::filesystem::path(corpus_dir()) / (name + ".json")).string());
}

}  // namespace prepair
