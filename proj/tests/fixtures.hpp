#ifndef LVSIE_TESTS_FIXTURES_HPP
#define LVSIE_TESTS_FIXTURES_HPP

#include <cstddef>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "lvsie/alignment.hpp"
#include "lvsie/dataset.hpp"
#include "lvsie/format_io.hpp"
#include "lvsie/model.hpp"

namespace lvsie::fixtures {

// Four one-sentence abstracts in release formats:
//   1. both annotate architecture -> system as Usage / Used-for
//   2. Model vs Used-for on the same pair
//   3. SemEval marks one long span where SciERC marks two short ones
//   4. disjoint entities and relations
std::string four_docs_semeval_xml();
std::string four_docs_semeval_relations();
std::string four_docs_scierc_jsonl();

struct FourDocs {
  ParseResult sem;
  ParseResult sci;
  OverlapResult overlap;
};
FourDocs load_four_docs();

// Synthetic corpus pair parsed and aligned.
struct Aligned {
  ParseResult sem;
  ParseResult sci;
  OverlapResult overlap;
};
Aligned synthetic_aligned(std::size_t overlapped, std::size_t sentences, std::uint64_t seed);

// (doc, sentence, head span, tail span, SciERC label)
using RelKey = std::tuple<std::string, std::size_t, Span, Span, std::string>;

// Brute-force expectations for the single-head strategies, computed from the
// aligned documents and their verdicts.
std::set<RelKey> oracle_mixed(const OverlapResult& o, Strategy s);
std::multiset<RelKey> oracle_concat(const OverlapResult& o);

// Relations of the built examples keyed the same way.
std::multiset<RelKey> relation_keys(const std::vector<TrainingExample>& examples, Head h);

// Five overlapped sentences with both heads filled in.
std::vector<TrainingExample> overfit_corpus(bool soft);

// Small model for gradient checks and quick training.
ModelConfig tiny_model_config(bool soft, Divergence d = Divergence::kKlStandard);

}  // namespace lvsie::fixtures

#endif  // LVSIE_TESTS_FIXTURES_HPP
