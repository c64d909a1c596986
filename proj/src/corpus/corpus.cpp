#include "hybridsense/corpus/corpus.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hybridsense {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 12> kMonths = {"January", "February", "March",     "April",
                                                      "May",     "June",     "July",      "August",
                                                      "September", "October", "November", "December"};

constexpr std::array<std::string_view, 24> kNouns = {
    "shipment", "courier",  "warehouse", "invoice",  "iguana",   "smuggler", "broker",  "ledger",
    "permit",   "dock",     "customs",   "crate",    "informant", "account", "vessel",  "port",
    "contract", "supplier", "agent",     "transfer", "passport", "cargo",   "license", "buyer"};
constexpr std::array<std::string_view, 12> kVerbs = {"met",    "paid",     "shipped", "contacted", "signed", "moved",
                                                     "hid",    "reported", "sold",    "wired",     "called", "inspected"};
constexpr std::array<std::string_view, 16> kNames = {"Ramirez", "Okafor", "Lindqvist", "Haddad", "Novak", "Tanaka",
                                                     "Moreau",  "Kowalski", "Silva",   "Osei",   "Petrov", "Quinn",
                                                     "Brandt",  "Ferreira", "Ivanova", "Chen"};
constexpr std::array<std::string_view, 8> kPlaces = {"Caracas", "Miami",   "Bogota", "Kingston",
                                                     "Panama",  "Havana",  "Lima",   "Nassau"};

// Uniform integer in [0, n) from raw generator bits; avoids
// implementation-defined distribution objects so output is portable.
std::size_t pick(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

std::vector<std::string> sentence(std::mt19937_64& rng) {
  std::vector<std::string> words;
  words.emplace_back(kNames[pick(rng, kNames.size())]);
  words.emplace_back(kVerbs[pick(rng, kVerbs.size())]);
  words.emplace_back("the");
  words.emplace_back(kNouns[pick(rng, kNouns.size())]);
  switch (pick(rng, 3)) {
    case 0:
      words.emplace_back("in");
      words.emplace_back(kPlaces[pick(rng, kPlaces.size())]);
      break;
    case 1: {
      words.emplace_back("on");
      words.emplace_back(kMonths[pick(rng, kMonths.size())]);
      words.push_back(std::to_string(1 + pick(rng, 28)) + ",");
      words.emplace_back("2007");
      break;
    }
    default:
      words.emplace_back("with");
      words.emplace_back(kNames[pick(rng, kNames.size())]);
      break;
  }
  words.back() += ".";
  return words;
}

std::string body_with_words(std::mt19937_64& rng, std::int64_t word_target) {
  std::vector<std::string> words;
  while (static_cast<std::int64_t>(words.size()) < word_target) {
    for (auto& w : sentence(rng)) words.push_back(std::move(w));
  }
  words.resize(static_cast<std::size_t>(word_target));
  std::string body;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) body += (i % 60 == 0) ? "\n" : " ";
    body += words[i];
  }
  return body;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

const DocumentRecord* Corpus::find(const DocumentId& id) const {
  const auto it = std::find_if(documents.begin(), documents.end(), [&](const auto& d) { return d.id == id; });
  return it == documents.end() ? nullptr : &*it;
}

Corpus generate_corpus(std::uint64_t seed, const CorpusShape& shape) {
  const int per_subplot = shape.key_documents_per_subplot + shape.background_documents_per_subplot;
  if (per_subplot <= 0 || shape.subplot_word_targets.empty())
    throw std::invalid_argument("corpus shape needs documents and subplots");
  std::mt19937_64 rng(seed);
  Corpus corpus;
  for (std::size_t s = 0; s < shape.subplot_word_targets.size(); ++s) {
    const std::string subplot = "subplot-" + std::string(1, static_cast<char>('a' + s));
    const std::int64_t total = shape.subplot_word_targets[s];
    // Key documents get roughly twice the weight of background ones.
    std::vector<std::int64_t> weights;
    for (int d = 0; d < per_subplot; ++d) {
      const bool key = d < shape.key_documents_per_subplot;
      weights.push_back((key ? 20 : 10) + static_cast<std::int64_t>(pick(rng, 10)));
    }
    const std::int64_t weight_sum = std::accumulate(weights.begin(), weights.end(), std::int64_t{0});
    std::vector<std::int64_t> counts;
    std::int64_t assigned = 0;
    for (int d = 0; d < per_subplot; ++d) {
      const std::int64_t count = d + 1 == per_subplot ? total - assigned : total * weights[d] / weight_sum;
      counts.push_back(count);
      assigned += count;
    }
    for (int d = 0; d < per_subplot; ++d) {
      const bool key = d < shape.key_documents_per_subplot;
      DocumentRecord doc;
      char id[32];
      std::snprintf(id, sizeof id, "%c%02d", static_cast<char>('A' + s), d + 1);
      doc.id = id;
      doc.subplot = subplot;
      doc.title = std::string(key ? "Report " : "Bulletin ") + id + ": " +
                  std::string(kNames[pick(rng, kNames.size())]) + " and the " +
                  std::string(kNouns[pick(rng, kNouns.size())]);
      doc.body = body_with_words(rng, counts[d]);
      doc.word_count = count_words(doc.body);
      corpus.documents.push_back(std::move(doc));
    }
  }
  std::sort(corpus.documents.begin(), corpus.documents.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  corpus.manifest = build_manifest(corpus.documents);
  return corpus;
}

CorpusManifest build_manifest(const std::vector<DocumentRecord>& documents) {
  CorpusManifest manifest;
  std::map<std::string, SubplotEntry> by_name;
  for (const auto& doc : documents) {
    auto& entry = by_name[doc.subplot];
    entry.name = doc.subplot;
    entry.documents.push_back(doc.id);
    manifest.per_subplot_counts[doc.subplot] += 1;
    manifest.total_word_counts[doc.subplot] += count_words(doc.body);
  }
  for (auto& [name, entry] : by_name) manifest.subplots.push_back(std::move(entry));
  return manifest;
}

void validate_corpus(const Corpus& corpus) {
  std::map<DocumentId, int> membership;
  for (const auto& subplot : corpus.manifest.subplots)
    for (const auto& id : subplot.documents) ++membership[id];
  for (const auto& doc : corpus.documents) {
    if (membership[doc.id] != 1) throw std::invalid_argument("document " + doc.id + " must be in exactly one subplot");
    if (doc.word_count != count_words(doc.body))
      throw std::invalid_argument("document " + doc.id + " has a stale word count");
  }
  if (membership.size() != corpus.documents.size())
    throw std::invalid_argument("manifest lists documents that are not in the corpus");
  const auto rebuilt = build_manifest(corpus.documents);
  if (rebuilt.total_word_counts != corpus.manifest.total_word_counts ||
      rebuilt.per_subplot_counts != corpus.manifest.per_subplot_counts)
    throw std::invalid_argument("manifest counts disagree with the documents");
}

json to_json(const DocumentRecord& document) {
  return json{{"id", document.id},
              {"title", document.title},
              {"body", document.body},
              {"subplot", document.subplot},
              {"wordCount", document.word_count}};
}

json to_json(const CorpusManifest& manifest) {
  json subplots = json::array();
  for (const auto& s : manifest.subplots) subplots.push_back({{"name", s.name}, {"documents", s.documents}});
  return json{{"subplots", subplots},
              {"perSubplotCounts", manifest.per_subplot_counts},
              {"totalWordCounts", manifest.total_word_counts}};
}

DocumentRecord document_from_json(const json& j) {
  DocumentRecord doc;
  doc.id = j.at("id").get<std::string>();
  doc.title = j.at("title").get<std::string>();
  doc.body = j.at("body").get<std::string>();
  doc.subplot = j.at("subplot").get<std::string>();
  doc.word_count = j.at("wordCount").get<std::int64_t>();
  return doc;
}

CorpusManifest manifest_from_json(const json& j) {
  CorpusManifest manifest;
  for (const auto& s : j.at("subplots"))
    manifest.subplots.push_back({s.at("name").get<std::string>(), s.at("documents").get<std::vector<DocumentId>>()});
  manifest.per_subplot_counts = j.at("perSubplotCounts").get<std::map<std::string, std::int64_t>>();
  manifest.total_word_counts = j.at("totalWordCounts").get<std::map<std::string, std::int64_t>>();
  return manifest;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  json documents = json::array();
  for (const auto& doc : corpus.documents) documents.push_back(to_json(doc));
  write_file(dir / "corpus.json", json{{"documents", documents}}.dump(2) + "\n");
  write_file(dir / "manifest.json", to_json(corpus.manifest).dump(2) + "\n");
}

Corpus load_corpus(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw std::runtime_error("corpus directory not found: " + dir.string());
  Corpus corpus;
  const json parsed = json::parse(read_file(dir / "corpus.json"));
  for (const auto& d : parsed.at("documents")) corpus.documents.push_back(document_from_json(d));
  std::sort(corpus.documents.begin(), corpus.documents.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  corpus.manifest = manifest_from_json(json::parse(read_file(dir / "manifest.json")));
  validate_corpus(corpus);
  return corpus;
}

}  // namespace hybridsense
