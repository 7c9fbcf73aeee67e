#ifndef LVSIE_FORMAT_IO_HPP
#define LVSIE_FORMAT_IO_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "lvsie/corpus.hpp"
#include "lvsie/tokenize.hpp"

namespace lvsie {

class ParseError : public Error {
 public:
  using Error::Error;
};

struct ParseReport {
  std::size_t documents = 0;
  std::size_t entities = 0;
  std::size_t relations = 0;
  std::size_t dropped_relations = 0;
  std::size_t skipped_documents = 0;
  std::vector<std::string> warnings;

  double relations_per_document() const {
    return documents == 0 ? 0.0 : static_cast<double>(relations) / static_cast<double>(documents);
  }
};

struct ParseResult {
  std::vector<Document> documents;
  ParseReport report;
};

struct SemevalOptions {
  // The released abstracts carry a <title> element; SciERC has none, so the
  // title is left out unless asked for.
  bool include_title = false;
  SentenceSegmenter segmenter = rule_segmenter;
};

// SemEval-2018 Task 7 sub-task 2: XML abstracts with inline <entity id=...>
// markers plus a relation list of lines LABEL(id1,id2[,REVERSE]).
ParseResult parse_semeval(std::string_view entity_file_content,
                          std::string_view relation_file_content,
                          const SemevalOptions& options = {});

// Canonical SemEval relation name for a release label such as "PART_WHOLE".
std::string canonical_semeval_label(std::string_view raw);

// Schema spelling of a SciERC relation label; the release uses "USED-FOR".
std::string canonical_scierc_label(std::string_view raw);

// SciERC release: one JSON object per line (or a JSON array) with doc_key,
// sentences, ner and relations using document-level inclusive token offsets.
ParseResult parse_scierc(std::string_view json_content);

// SciREX release: only the abstract section of each paper is kept, and only
// Method / Task / Metric / Material mentions.
ParseResult parse_scirex_abstracts(std::string_view json_content);

// Unified interchange format: one JSON document per line, fixed key order.
std::string write_unified(const std::vector<Document>& docs);
std::vector<Document> read_unified(std::string_view content);

std::string report_to_json(const ParseReport& report, int indent = 2);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace lvsie

#endif  // LVSIE_FORMAT_IO_HPP
