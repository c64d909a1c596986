#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hybridsense/graph/types.hpp"

namespace hybridsense {

struct SubplotEntry {
  std::string name;
  std::vector<DocumentId> documents;
};

struct CorpusManifest {
  std::vector<SubplotEntry> subplots;
  std::map<std::string, std::int64_t> per_subplot_counts;
  std::map<std::string, std::int64_t> total_word_counts;
};

struct Corpus {
  std::vector<DocumentRecord> documents;  // sorted by id
  CorpusManifest manifest;

  const DocumentRecord* find(const DocumentId& id) const;
};

struct CorpusShape {
  int key_documents_per_subplot = 6;
  int background_documents_per_subplot = 2;
  std::vector<std::int64_t> subplot_word_targets{1207, 1229, 1180};
};

// Synthetic stand-in for the study corpus with the same shape. Subplot totals
// hit the targets exactly. Deterministic by seed.
Corpus generate_corpus(std::uint64_t seed, const CorpusShape& shape = {});

// Rebuilds the manifest from the documents.
CorpusManifest build_manifest(const std::vector<DocumentRecord>& documents);

// Throws std::invalid_argument if a document is in zero or several subplots or
// a stored word count disagrees with the body.
void validate_corpus(const Corpus& corpus);

nlohmann::json to_json(const DocumentRecord& document);
nlohmann::json to_json(const CorpusManifest& manifest);
DocumentRecord document_from_json(const nlohmann::json& j);
CorpusManifest manifest_from_json(const nlohmann::json& j);

// Directory layout: corpus.json ({"documents": [...]}) and manifest.json.
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);
Corpus load_corpus(const std::filesystem::path& dir);

}  // namespace hybridsense
