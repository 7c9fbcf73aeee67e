#ifndef LVSIE_SYNTHETIC_HPP
#define LVSIE_SYNTHETIC_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>

#include "lvsie/dataset.hpp"

namespace lvsie {

// Shape of a generated corpus pair. Overlapped abstracts appear in both
// releases with independently perturbed annotations.
struct SyntheticSpec {
  std::size_t overlapped = 12;
  std::size_t sem_only = 4;
  std::size_t sci_only = 4;
  std::size_t scirex = 4;
  std::size_t sentences_per_doc = 3;
  // Per-relation outcome on the SemEval side of an overlapped sentence; the
  // remainder after agree + conflict is "omitted".
  double p_agree = 0.6;
  double p_conflict = 0.2;
  // Chance that a SemEval entity boundary is shifted, breaking the exact match.
  double p_partial = 0.1;
  std::uint64_t seed = 1;
};

// Release-format text of every file the parsers read.
struct SyntheticCorpus {
  std::string semeval_xml;
  std::string semeval_relations;
  std::string scierc_jsonl;
  std::string scirex_jsonl;
  // doc_key -> "train" | "dev" | "test"
  std::map<std::string, std::string> scierc_partition;
};

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec);

// File names used inside a data directory.
namespace data_files {
inline constexpr const char* kSemevalXml = "semeval.xml";
inline constexpr const char* kSemevalRelations = "semeval_relations.txt";
inline constexpr const char* kScierc = "scierc.jsonl";
inline constexpr const char* kScirex = "scirex.jsonl";
inline constexpr const char* kSciercSplit = "scierc_split.json";
}  // namespace data_files

void write_synthetic(const SyntheticCorpus& corpus, const std::string& directory);

std::map<std::string, Partition> parse_partition(const std::string& json_text);

}  // namespace lvsie

#endif  // LVSIE_SYNTHETIC_HPP
