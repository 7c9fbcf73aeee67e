#include "lvsie/synthetic.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <random>
#include <sstream>
#include <vector>

#include "json.hpp"

#include "lvsie/format_io.hpp"

namespace lvsie {

namespace {

using json = nlohmann::json;

const std::map<std::string, std::vector<std::string>>& phrases() {
  static const std::map<std::string, std::vector<std::string>> p{
      {"Method",
       {"neural parser", "support vector machine", "graph model", "beam search", "rule system",
        "crf tagger", "lstm encoder", "kernel method"}},
      {"Task",
       {"machine translation", "dependency parsing", "question answering", "summarization",
        "entity recognition", "speech recognition"}},
      {"Metric", {"accuracy", "bleu score", "f1 measure", "error rate", "recall"}},
      {"Material", {"treebank", "news corpus", "web text", "speech data", "dialogue logs"}},
      {"OtherScientificTerm",
       {"syntactic features", "word embeddings", "attention weights", "lexical rules",
        "semantic roles"}},
      {"Generic", {"approach", "framework", "model"}},
  };
  return p;
}

// A sentence pattern: literal words and numbered slots, plus the SciERC
// relation between two slots and the SemEval label that agrees with it.
struct Template {
  std::vector<std::string> words;  // "{0}" style placeholders mark slots
  std::vector<std::string> slot_types;
  std::optional<std::string> sci_label;
  std::optional<std::string> sem_label;
  std::size_t head = 0, tail = 1;
};

const std::vector<Template>& templates() {
  static const std::vector<Template> t{
      {{"We", "apply", "the", "{0}", "to", "{1}", "."}, {"Method", "Task"}, "Used-for", "Usage", 0, 1},
      {{"The", "{0}", "is", "evaluated", "by", "{1}", "."}, {"Method", "Metric"}, "Evaluate-for", "Result", 1, 0},
      {{"The", "{0}", "outperforms", "the", "{1}", "."}, {"Method", "Method"}, "Compare", "Comparison", 0, 1},
      {{"The", "{0}", "of", "the", "{1}", "is", "studied", "."}, {"OtherScientificTerm", "Material"}, "Feature-of", "Model", 0, 1},
      {{"The", "{0}", "is", "part", "of", "the", "{1}", "."}, {"OtherScientificTerm", "Method"}, "Part-of", "Part-whole", 0, 1},
      {{"Both", "{0}", "and", "{1}", "are", "hard", "."}, {"Task", "Task"}, "Conjunction", std::nullopt, 0, 1},
      {{"Our", "{0}", "addresses", "{1}", "."}, {"Generic", "Task"}, std::nullopt, "Topic", 0, 1},
      {{"We", "train", "the", "{0}", "on", "{1}", "."}, {"Method", "Material"}, "Used-for", "Usage", 1, 0},
  };
  return t;
}

constexpr std::array<std::string_view, 5> kMappedSem{"Usage", "Comparison", "Model", "Part-whole",
                                                     "Result"};

struct Mention {
  std::size_t start, end;  // sentence-local, half open
  std::string type;
};

struct GeneratedSentence {
  std::vector<std::string> tokens;
  std::vector<Mention> sci_entities;
  std::vector<Mention> sem_entities;
  std::vector<std::tuple<std::size_t, std::size_t, std::string>> sci_relations;  // entity indices
  std::vector<std::tuple<std::size_t, std::size_t, std::string>> sem_relations;
};

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

class Generator {
 public:
  explicit Generator(const SyntheticSpec& spec) : spec_(spec), rng_(spec.seed) {}

  GeneratedSentence sentence(bool perturb) {
    const auto& tmpl = templates()[pick(templates().size())];
    GeneratedSentence g;
    std::vector<Mention> slots(tmpl.slot_types.size());
    for (const auto& w : tmpl.words) {
      if (w.size() == 3 && w.front() == '{') {
        const std::size_t k = static_cast<std::size_t>(w[1] - '0');
        const auto& pool = phrases().at(tmpl.slot_types[k]);
        const auto words = split_words(pool[pick(pool.size())]);
        slots[k] = {g.tokens.size(), g.tokens.size() + words.size(), tmpl.slot_types[k]};
        g.tokens.insert(g.tokens.end(), words.begin(), words.end());
      } else {
        g.tokens.push_back(w);
      }
    }
    g.sci_entities = slots;
    for (auto m : slots) {
      // A shifted boundary takes in the preceding article when there is one.
      if (perturb && coin(spec_.p_partial) && m.start > 0 && g.tokens[m.start - 1] == "the")
        --m.start;
      m.type = std::string(kUntypedEntity);
      g.sem_entities.push_back(m);
    }
    if (tmpl.sci_label) g.sci_relations.emplace_back(tmpl.head, tmpl.tail, *tmpl.sci_label);
    if (tmpl.sem_label) {
      if (!perturb) {
        g.sem_relations.emplace_back(tmpl.head, tmpl.tail, *tmpl.sem_label);
      } else {
        const double u = uniform();
        if (u < spec_.p_agree) {
          g.sem_relations.emplace_back(tmpl.head, tmpl.tail, *tmpl.sem_label);
        } else if (u < spec_.p_agree + spec_.p_conflict) {
          std::string other;
          do other = std::string(kMappedSem[pick(kMappedSem.size())]);
          while (other == *tmpl.sem_label);
          g.sem_relations.emplace_back(tmpl.head, tmpl.tail, other);
        }
      }
    }
    return g;
  }

  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  bool coin(double p) { return uniform() < p; }
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

 private:
  SyntheticSpec spec_;
  std::mt19937_64 rng_;
};

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out.push_back(c);
  }
  return out;
}

std::string semeval_abstract(const std::vector<GeneratedSentence>& sents, const std::string& doc_id,
                             std::vector<std::vector<std::string>>& ids) {
  std::string out;
  std::size_t next = 1;
  ids.clear();
  for (const auto& s : sents) {
    ids.emplace_back();
    std::vector<std::string> open_at(s.tokens.size() + 1), close_at(s.tokens.size() + 1);
    for (const auto& m : s.sem_entities) {
      const std::string id = doc_id + "." + std::to_string(next++);
      ids.back().push_back(id);
      open_at[m.start] += "<entity id=\"" + id + "\">";
      close_at[m.end] += "</entity>";
    }
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      if (!out.empty()) out.push_back(' ');
      out += open_at[i] + xml_escape(s.tokens[i]);
      // Close right after the last token so no space sits inside the marker.
      out += close_at[i + 1];
    }
  }
  return out;
}

}  // namespace

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec) {
  if (spec.sentences_per_doc == 0) throw Error("synthetic documents need at least one sentence");
  Generator gen(spec);
  SyntheticCorpus out;
  std::ostringstream xml, rels, sci, scirex;
  xml << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<doc>\n";

  auto emit_semeval = [&](const std::string& id, const std::vector<GeneratedSentence>& sents) {
    std::vector<std::vector<std::string>> ids;
    const std::string body = semeval_abstract(sents, id, ids);
    xml << "<text id=\"" << id << "\">\n<title>Study " << id << "</title>\n<abstract>\n"
        << body << "\n</abstract>\n</text>\n";
    for (std::size_t si = 0; si < sents.size(); ++si)
      for (const auto& [h, t, label] : sents[si].sem_relations) {
        std::string raw = label == "Part-whole" ? "PART_WHOLE" : label == "Model" ? "MODEL-FEATURE" : label;
        for (auto& c : raw) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        // The release writes undirected labels in text order with a REVERSE flag.
        if (h < t)
          rels << raw << "(" << ids[si][h] << "," << ids[si][t] << ")\n";
        else
          rels << raw << "(" << ids[si][t] << "," << ids[si][h] << ",REVERSE)\n";
      }
  };

  auto emit_scierc = [&](const std::string& id, const std::vector<GeneratedSentence>& sents) {
    json rec;
    rec["doc_key"] = id;
    rec["sentences"] = json::array();
    rec["ner"] = json::array();
    rec["relations"] = json::array();
    std::size_t base = 0;
    for (const auto& s : sents) {
      rec["sentences"].push_back(s.tokens);
      json ner = json::array(), rr = json::array();
      for (const auto& m : s.sci_entities) ner.push_back({base + m.start, base + m.end - 1, m.type});
      for (const auto& [h, t, label] : s.sci_relations) {
        const auto& a = s.sci_entities[h];
        const auto& b = s.sci_entities[t];
        rr.push_back({base + a.start, base + a.end - 1, base + b.start, base + b.end - 1, label});
      }
      rec["ner"].push_back(ner);
      rec["relations"].push_back(rr);
      base += s.tokens.size();
    }
    sci << rec.dump() << "\n";
  };

  auto doc = [&](bool perturb) {
    std::vector<GeneratedSentence> sents;
    for (std::size_t i = 0; i < spec.sentences_per_doc; ++i) sents.push_back(gen.sentence(perturb));
    return sents;
  };

  std::vector<std::string> sci_ids;
  for (std::size_t d = 0; d < spec.overlapped; ++d) {
    const auto sents = doc(true);
    emit_semeval("S" + std::to_string(d), sents);
    const std::string id = "X" + std::to_string(d);
    emit_scierc(id, sents);
    sci_ids.push_back(id);
  }
  for (std::size_t d = 0; d < spec.sem_only; ++d)
    emit_semeval("E" + std::to_string(d), doc(false));
  for (std::size_t d = 0; d < spec.sci_only; ++d) {
    const std::string id = "C" + std::to_string(d);
    emit_scierc(id, doc(false));
    sci_ids.push_back(id);
  }
  xml << "</doc>\n";

  for (std::size_t d = 0; d < spec.scirex; ++d) {
    const auto sents = doc(false);
    json rec;
    rec["doc_id"] = "R" + std::to_string(d);
    std::vector<std::string> words{"Abstract"};
    json sentences = json::array({json::array({0, 1})});
    json ner = json::array();
    for (const auto& s : sents) {
      const std::size_t base = words.size();
      words.insert(words.end(), s.tokens.begin(), s.tokens.end());
      sentences.push_back({base, words.size()});
      for (const auto& m : s.sci_entities) ner.push_back({base + m.start, base + m.end, m.type});
    }
    const std::size_t abstract_end = words.size();
    for (const auto& w : {"Introduction", "The", "body", "is", "ignored", "."}) words.push_back(w);
    sentences.push_back({abstract_end, words.size()});
    rec["words"] = words;
    rec["sections"] = json::array({json::array({0, abstract_end}),
                                   json::array({abstract_end, words.size()})});
    rec["sentences"] = sentences;
    rec["ner"] = ner;
    scirex << rec.dump() << "\n";
  }

  // Roughly 70 / 10 / 20, assigned round-robin so every split is populated.
  static constexpr std::array<const char*, 10> kCycle{"train", "test", "train", "dev",  "train",
                                                      "train", "test", "train", "train", "train"};
  for (std::size_t i = 0; i < sci_ids.size(); ++i)
    out.scierc_partition[sci_ids[i]] = kCycle[i % kCycle.size()];

  out.semeval_xml = xml.str();
  out.semeval_relations = rels.str();
  out.scierc_jsonl = sci.str();
  out.scirex_jsonl = scirex.str();
  return out;
}

void write_synthetic(const SyntheticCorpus& corpus, const std::string& directory) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  const fs::path dir(directory);
  write_file((dir / data_files::kSemevalXml).string(), corpus.semeval_xml);
  write_file((dir / data_files::kSemevalRelations).string(), corpus.semeval_relations);
  write_file((dir / data_files::kScierc).string(), corpus.scierc_jsonl);
  write_file((dir / data_files::kScirex).string(), corpus.scirex_jsonl);
  write_file((dir / data_files::kSciercSplit).string(),
             json(corpus.scierc_partition).dump(2) + "\n");
}

std::map<std::string, Partition> parse_partition(const std::string& json_text) {
  std::map<std::string, Partition> out;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(std::string("partition file: ") + e.what());
  }
  if (!j.is_object()) throw Error("partition file must map document ids to train/dev/test");
  for (const auto& [key, value] : j.items()) {
    const std::string v = value.get<std::string>();
    if (v == "train") out[key] = Partition::kTrain;
    else if (v == "dev") out[key] = Partition::kDev;
    else if (v == "test") out[key] = Partition::kTest;
    else throw Error("partition entry " + key + " has unknown split '" + v + "'");
  }
  return out;
}

}  // namespace lvsie
