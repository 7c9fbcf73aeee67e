#include "lvsie/format_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace lvsie {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Splits JSONL or a top-level JSON array into records.
std::vector<json> parse_records(std::string_view content, std::string_view what) {
  std::vector<json> out;
  const std::string_view body = trim(content);
  if (body.empty()) return out;
  if (body.front() == '[') {
    try {
      json arr = json::parse(body);
      for (auto& r : arr) out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw ParseError(std::string(what) + ": malformed JSON array: " + e.what());
    }
    return out;
  }
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    std::size_t nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    ++line_no;
    const std::string_view line = trim(content.substr(pos, nl - pos));
    if (!line.empty()) {
      try {
        out.push_back(json::parse(line));
      } catch (const json::exception& e) {
        throw ParseError(std::string(what) + ": malformed JSON on line " +
                         std::to_string(line_no) + ": " + e.what());
      }
    }
    pos = nl + 1;
  }
  return out;
}

// Builds sentences from a token stream and sentence bounds.
std::vector<Sentence> make_sentences(const std::vector<Token>& tokens,
                                     const std::vector<SentenceBounds>& bounds) {
  std::vector<Sentence> out;
  for (const auto& [b, e] : bounds) {
    Sentence s;
    for (std::size_t i = b; i < e; ++i) {
      Token t = tokens[i];
      t.index = i - b;
      s.tokens.push_back(std::move(t));
    }
    out.push_back(std::move(s));
  }
  return out;
}

// Sentence index and sentence-local span for a document-level token range.
struct Located {
  std::size_t sentence;
  Span span;
};

std::optional<Located> locate(const std::vector<SentenceBounds>& bounds, std::size_t first,
                              std::size_t last_exclusive) {
  for (std::size_t si = 0; si < bounds.size(); ++si) {
    const auto [b, e] = bounds[si];
    if (first >= b && first < e) {
      if (last_exclusive > e) return std::nullopt;
      return Located{si, Span{first - b, last_exclusive - b}};
    }
  }
  return std::nullopt;
}

void decode_xml_entity(std::string_view text, std::size_t& i, std::string& out) {
  static const std::pair<std::string_view, char> kEntities[] = {
      {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&apos;", '\''}};
  for (const auto& [name, ch] : kEntities) {
    if (text.substr(i, name.size()) == name) {
      out.push_back(ch);
      i += name.size();
      return;
    }
  }
  out.push_back('&');
  ++i;
}

struct MarkedEntity {
  std::string id;
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Strips inline markup, returning clean text and entity character ranges.
std::string strip_markup(std::string_view xml, std::vector<MarkedEntity>& entities,
                         std::string_view doc_id) {
  std::string clean;
  std::vector<MarkedEntity> open;
  std::size_t i = 0;
  static const std::regex id_re(R"re(id\s*=\s*"([^"]*)")re");
  while (i < xml.size()) {
    const char c = xml[i];
    if (c == '&') {
      decode_xml_entity(xml, i, clean);
      continue;
    }
    if (c != '<') {
      clean.push_back(c);
      ++i;
      continue;
    }
    const std::size_t close = xml.find('>', i);
    if (close == std::string_view::npos)
      throw ParseError("unterminated tag in document " + std::string(doc_id));
    const std::string tag(xml.substr(i + 1, close - i - 1));
    i = close + 1;
    if (tag.rfind("entity", 0) == 0) {
      std::smatch m;
      if (!std::regex_search(tag, m, id_re))
        throw ParseError("entity marker without id in document " + std::string(doc_id));
      open.push_back({m[1].str(), clean.size(), 0});
    } else if (tag == "/entity") {
      if (open.empty())
        throw ParseError("unbalanced </entity> in document " + std::string(doc_id));
      MarkedEntity e = open.back();
      open.pop_back();
      e.end = clean.size();
      entities.push_back(std::move(e));
    }
  }
  if (!open.empty()) throw ParseError("unclosed entity in document " + std::string(doc_id));
  return clean;
}

std::string extract_element(std::string_view block, std::string_view name) {
  const std::string open_tag = "<" + std::string(name);
  const std::string close_tag = "</" + std::string(name) + ">";
  std::size_t b = block.find(open_tag);
  if (b == std::string_view::npos) return {};
  b = block.find('>', b);
  if (b == std::string_view::npos) return {};
  const std::size_t e = block.find(close_tag, b);
  if (e == std::string_view::npos) return {};
  return std::string(block.substr(b + 1, e - b - 1));
}

std::string join_tokens(const std::vector<std::vector<std::string>>& sentences,
                        std::vector<std::vector<std::pair<std::size_t, std::size_t>>>& offsets) {
  std::string text;
  offsets.clear();
  for (const auto& sent : sentences) {
    offsets.emplace_back();
    for (const auto& tok : sent) {
      if (!text.empty()) text.push_back(' ');
      offsets.back().emplace_back(text.size(), text.size() + tok.size());
      text += tok;
    }
  }
  return text;
}

}  // namespace

std::string canonical_semeval_label(std::string_view raw) {
  std::string up;
  for (char c : raw) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  std::replace(up.begin(), up.end(), '-', '_');
  if (up == "USAGE") return "Usage";
  if (up == "RESULT") return "Result";
  if (up == "MODEL_FEATURE" || up == "MODEL") return "Model";
  if (up == "PART_WHOLE") return "Part-whole";
  if (up == "TOPIC") return "Topic";
  if (up == "COMPARE" || up == "COMPARISON") return "Comparison";
  throw ParseError("unknown SemEval relation label '" + std::string(raw) + "'");
}

std::string canonical_scierc_label(std::string_view raw) {
  auto upper = [](std::string_view v) {
    std::string out;
    for (char c : v) out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    std::replace(out.begin(), out.end(), '_', '-');
    return out;
  };
  const std::string key = upper(raw);
  for (const auto& label : schema::scierc_full().relation_types)
    if (upper(label) == key) return label;
  throw ParseError("unknown SciERC relation label '" + std::string(raw) + "'");
}

ParseResult parse_semeval(std::string_view entity_file_content,
                          std::string_view relation_file_content,
                          const SemevalOptions& options) {
  ParseResult result;
  // id -> (document index, sentence index, entity index); ids inside excluded
  // regions (the title) map to nothing but are still known.
  struct EntityLoc {
    std::size_t doc, sentence;
  };
  std::unordered_map<std::string, EntityLoc> where;
  std::unordered_set<std::string> excluded;
  std::unordered_map<std::string, std::size_t> doc_index;

  static const std::regex text_id_re(R"re(<text\s+id\s*=\s*"([^"]*)"\s*>)re");
  const std::string content(entity_file_content);
  auto it = std::sregex_iterator(content.begin(), content.end(), text_id_re);
  for (; it != std::sregex_iterator(); ++it) {
    const std::string doc_id = (*it)[1].str();
    const std::size_t body_begin = static_cast<std::size_t>(it->position() + it->length());
    std::size_t body_end = content.find("</text>", body_begin);
    if (body_end == std::string::npos) throw ParseError("unterminated <text> for " + doc_id);
    const std::string_view block(content.data() + body_begin, body_end - body_begin);

    std::vector<MarkedEntity> title_entities;
    const std::string title = strip_markup(extract_element(block, "title"), title_entities, doc_id);
    std::vector<MarkedEntity> marked;
    std::string text = strip_markup(extract_element(block, "abstract"), marked, doc_id);
    if (options.include_title) {
      const std::string prefix = std::string(trim(title)) + "\n";
      for (auto& e : marked) {
        e.begin += prefix.size();
        e.end += prefix.size();
      }
      for (auto e : title_entities) {
        // Title markup offsets are relative to the untrimmed title.
        const std::size_t lead = title.find_first_not_of(" \t\r\n");
        const std::size_t shift = lead == std::string::npos ? 0 : lead;
        if (e.begin < shift) continue;
        e.begin -= shift;
        e.end -= shift;
        marked.push_back(e);
      }
      text = prefix + text;
    } else {
      for (const auto& e : title_entities) excluded.insert(e.id);
    }

    std::vector<std::size_t> breaks;
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    for (const auto& e : marked) {
      breaks.push_back(e.begin);
      breaks.push_back(e.end);
      ranges.emplace_back(e.begin, e.end);
    }
    const std::vector<Token> tokens = tokenize(text, breaks);
    const std::vector<SentenceBounds> bounds = options.segmenter(text, tokens, ranges);

    Document doc;
    doc.doc_id = doc_id;
    doc.source = Source::kSemeval;
    doc.raw_text = text;
    doc.sentences = make_sentences(tokens, bounds);
    std::sort(marked.begin(), marked.end(),
              [](const MarkedEntity& a, const MarkedEntity& b) { return a.begin < b.begin; });
    for (const auto& e : marked) {
      std::size_t first = tokens.size(), last = 0;
      for (std::size_t ti = 0; ti < tokens.size(); ++ti) {
        if (tokens[ti].char_start >= e.begin && tokens[ti].char_end <= e.end) {
          first = std::min(first, ti);
          last = ti + 1;
        }
      }
      if (first >= last) {
        result.report.warnings.push_back("entity " + e.id + " covers no token; skipped");
        excluded.insert(e.id);
        continue;
      }
      const auto loc = locate(bounds, first, last);
      if (!loc) {
        result.report.warnings.push_back("entity " + e.id + " crosses a sentence boundary");
        excluded.insert(e.id);
        continue;
      }
      doc.sentences[loc->sentence].entities.push_back(
          {e.id, loc->span, std::string(kUntypedEntity), Perspective::kSem});
      where[e.id] = {result.documents.size(), loc->sentence};
    }
    doc_index[doc_id] = result.documents.size();
    result.documents.push_back(std::move(doc));
  }

  static const std::regex rel_re(
      R"re(^\s*([A-Za-z_\-]+)\s*\(\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*(,\s*REVERSE\s*)?\)\s*$)re");
  std::istringstream lines{std::string(relation_file_content)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::smatch m;
    if (!std::regex_match(line, m, rel_re))
      throw ParseError("relation file line " + std::to_string(line_no) + ": malformed '" + line +
                       "'");
    const std::string label = canonical_semeval_label(m[1].str());
    std::string head = m[2].str();
    std::string tail = m[3].str();
    if (m[4].matched) std::swap(head, tail);
    for (const auto& id : {head, tail}) {
      if (!where.count(id) && !excluded.count(id))
        throw ParseError("relation file line " + std::to_string(line_no) +
                         ": unknown entity id '" + id + "'");
    }
    if (excluded.count(head) || excluded.count(tail)) {
      ++result.report.dropped_relations;
      result.report.warnings.push_back("line " + std::to_string(line_no) +
                                       ": relation touches an excluded entity; dropped");
      continue;
    }
    const EntityLoc h = where.at(head);
    const EntityLoc t = where.at(tail);
    if (h.doc != t.doc || h.sentence != t.sentence) {
      ++result.report.dropped_relations;
      result.report.warnings.push_back("line " + std::to_string(line_no) +
                                       ": relation crosses a sentence boundary; dropped");
      continue;
    }
    result.documents[h.doc].sentences[h.sentence].relations.push_back(
        {head, tail, label, Perspective::kSem});
  }

  for (const auto& d : result.documents) {
    result.report.entities += d.entity_count();
    result.report.relations += d.relation_count();
  }
  result.report.documents = result.documents.size();
  return result;
}

ParseResult parse_scierc(std::string_view json_content) {
  ParseResult result;
  const std::vector<json> records = parse_records(json_content, "SciERC");
  for (std::size_t ri = 0; ri < records.size(); ++ri) {
    const json& rec = records[ri];
    Document doc;
    doc.source = Source::kScierc;
    try {
      doc.doc_id = rec.at("doc_key").get<std::string>();
      const auto sentences = rec.at("sentences").get<std::vector<std::vector<std::string>>>();
      std::vector<std::vector<std::pair<std::size_t, std::size_t>>> offsets;
      doc.raw_text = join_tokens(sentences, offsets);

      std::vector<SentenceBounds> bounds;
      std::size_t base = 0;
      for (std::size_t si = 0; si < sentences.size(); ++si) {
        Sentence s;
        for (std::size_t ti = 0; ti < sentences[si].size(); ++ti)
          s.tokens.push_back({ti, sentences[si][ti], offsets[si][ti].first, offsets[si][ti].second});
        bounds.emplace_back(base, base + sentences[si].size());
        base += sentences[si].size();
        doc.sentences.push_back(std::move(s));
      }
      const std::size_t total_tokens = base;

      const json empty = json::array();
      const json& ner = rec.contains("ner") ? rec.at("ner") : empty;
      const json& rels = rec.contains("relations") ? rec.at("relations") : empty;

      std::map<std::pair<std::size_t, std::size_t>, std::string> id_of;
      std::size_t next_id = 0;
      for (std::size_t si = 0; si < ner.size(); ++si) {
        for (const auto& triple : ner[si]) {
          const auto first = triple.at(0).get<std::size_t>();
          const auto last = triple.at(1).get<std::size_t>();
          if (last < first || last >= total_tokens)
            throw ParseError("SciERC document " + doc.doc_id + ": entity span [" +
                             std::to_string(first) + "," + std::to_string(last) +
                             "] out of range");
          const auto loc = locate(bounds, first, last + 1);
          if (!loc) {
            result.report.warnings.push_back(doc.doc_id + ": entity crosses sentences; skipped");
            continue;
          }
          if (id_of.count({first, last})) continue;
          const std::string id = doc.doc_id + ":T" + std::to_string(next_id++);
          id_of[{first, last}] = id;
          doc.sentences[loc->sentence].entities.push_back(
              {id, loc->span, triple.at(2).get<std::string>(), Perspective::kSci});
        }
      }
      for (std::size_t si = 0; si < rels.size(); ++si) {
        for (const auto& tuple : rels[si]) {
          const std::pair<std::size_t, std::size_t> h{tuple.at(0).get<std::size_t>(),
                                                      tuple.at(1).get<std::size_t>()};
          const std::pair<std::size_t, std::size_t> t{tuple.at(2).get<std::size_t>(),
                                                      tuple.at(3).get<std::size_t>()};
          if (h.second >= total_tokens || t.second >= total_tokens)
            throw ParseError("SciERC document " + doc.doc_id + ": relation span out of range");
          if (!id_of.count(h) || !id_of.count(t))
            throw ParseError("SciERC document " + doc.doc_id +
                             ": relation endpoint is not an annotated entity");
          const auto lh = locate(bounds, h.first, h.second + 1);
          const auto lt = locate(bounds, t.first, t.second + 1);
          if (!lh || !lt || lh->sentence != lt->sentence) {
            ++result.report.dropped_relations;
            result.report.warnings.push_back(doc.doc_id +
                                             ": relation crosses a sentence boundary; dropped");
            continue;
          }
          doc.sentences[lh->sentence].relations.push_back(
              {id_of[h], id_of[t], canonical_scierc_label(tuple.at(4).get<std::string>()),
               Perspective::kSci});
        }
      }
    } catch (const json::exception& e) {
      throw ParseError("SciERC record " + std::to_string(ri) + ": " + e.what());
    }
    result.documents.push_back(std::move(doc));
  }
  for (const auto& d : result.documents) {
    result.report.entities += d.entity_count();
    result.report.relations += d.relation_count();
  }
  result.report.documents = result.documents.size();
  return result;
}

ParseResult parse_scirex_abstracts(std::string_view json_content) {
  static const std::set<std::string> kKept{"Method", "Task", "Metric", "Material"};
  ParseResult result;
  const std::vector<json> records = parse_records(json_content, "SciREX");
  for (std::size_t ri = 0; ri < records.size(); ++ri) {
    const json& rec = records[ri];
    try {
      const auto doc_id = rec.at("doc_id").get<std::string>();
      const auto words = rec.at("words").get<std::vector<std::string>>();
      const auto sections = rec.at("sections").get<std::vector<std::vector<std::size_t>>>();
      const auto sentence_spans = rec.at("sentences").get<std::vector<std::vector<std::size_t>>>();

      // The abstract is the section whose header mentions it.
      std::optional<std::pair<std::size_t, std::size_t>> abstract;
      for (const auto& sec : sections) {
        if (sec.size() < 2 || sec[1] > words.size() || sec[0] >= sec[1]) continue;
        const std::size_t probe = std::min<std::size_t>(sec[1], sec[0] + 6);
        for (std::size_t w = sec[0]; w < probe; ++w) {
          std::string lw;
          for (char c : words[w]) lw.push_back(static_cast<char>(std::tolower(c)));
          if (lw == "abstract") {
            abstract = std::make_pair(sec[0], sec[1]);
            break;
          }
        }
        if (abstract) break;
      }
      if (!abstract) {
        ++result.report.skipped_documents;
        result.report.warnings.push_back(doc_id + ": no abstract section; skipped");
        continue;
      }
      const auto [ab, ae] = *abstract;

      std::vector<SentenceBounds> bounds;
      for (const auto& s : sentence_spans) {
        if (s.size() < 2) continue;
        const std::size_t b = std::max(s[0], ab);
        const std::size_t e = std::min(s[1], ae);
        if (b < e) bounds.emplace_back(b, e);
      }
      if (bounds.empty()) bounds.emplace_back(ab, ae);

      Document doc;
      doc.doc_id = doc_id;
      doc.source = Source::kScirex;
      std::vector<std::vector<std::string>> sent_words;
      for (const auto& [b, e] : bounds)
        sent_words.emplace_back(words.begin() + static_cast<std::ptrdiff_t>(b),
                                words.begin() + static_cast<std::ptrdiff_t>(e));
      std::vector<std::vector<std::pair<std::size_t, std::size_t>>> offsets;
      doc.raw_text = join_tokens(sent_words, offsets);
      for (std::size_t si = 0; si < sent_words.size(); ++si) {
        Sentence s;
        for (std::size_t ti = 0; ti < sent_words[si].size(); ++ti)
          s.tokens.push_back({ti, sent_words[si][ti], offsets[si][ti].first, offsets[si][ti].second});
        doc.sentences.push_back(std::move(s));
      }

      std::size_t next_id = 0;
      if (rec.contains("ner")) {
        for (const auto& triple : rec.at("ner")) {
          const auto b = triple.at(0).get<std::size_t>();
          const auto e = triple.at(1).get<std::size_t>();
          const auto type = triple.at(2).get<std::string>();
          if (!kKept.count(type) || b < ab || e > ae || b >= e) continue;
          const auto loc = locate(bounds, b, e);
          if (!loc) continue;
          doc.sentences[loc->sentence].entities.push_back(
              {doc_id + ":T" + std::to_string(next_id++), loc->span, type, Perspective::kSci});
        }
      }
      result.documents.push_back(std::move(doc));
    } catch (const json::exception& e) {
      throw ParseError("SciREX record " + std::to_string(ri) + ": " + e.what());
    }
  }
  for (const auto& d : result.documents) result.report.entities += d.entity_count();
  result.report.documents = result.documents.size();
  return result;
}

std::string write_unified(const std::vector<Document>& docs) {
  std::string out;
  for (const auto& d : docs) {
    ordered_json rec;
    rec["doc_id"] = d.doc_id;
    rec["source"] = std::string(to_string(d.source));
    rec["raw_text"] = d.raw_text;
    ordered_json sents = ordered_json::array();
    for (const auto& s : d.sentences) {
      ordered_json js;
      ordered_json toks = ordered_json::array();
      for (const auto& t : s.tokens) toks.push_back({t.text, t.char_start, t.char_end});
      js["tokens"] = std::move(toks);
      ordered_json ents = ordered_json::array();
      for (const auto& e : s.entities) {
        ordered_json je;
        je["id"] = e.id;
        je["start"] = e.span.start;
        je["end"] = e.span.end;
        je["type"] = e.entity_type;
        je["perspective"] = std::string(to_string(e.perspective));
        ents.push_back(std::move(je));
      }
      js["entities"] = std::move(ents);
      ordered_json rels = ordered_json::array();
      for (const auto& r : s.relations) {
        ordered_json jr;
        jr["head"] = r.head;
        jr["tail"] = r.tail;
        jr["type"] = r.relation_type;
        jr["perspective"] = std::string(to_string(r.perspective));
        rels.push_back(std::move(jr));
      }
      js["relations"] = std::move(rels);
      sents.push_back(std::move(js));
    }
    rec["sentences"] = std::move(sents);
    if (!d.soft_labels.empty()) {
      ordered_json soft = ordered_json::array();
      for (const auto& sl : d.soft_labels) {
        ordered_json j;
        j["sentence"] = sl.sentence;
        j["relation"] = sl.relation;
        if (sl.on_entity) j["on_entity"] = true;
        j["agreement"] = std::string(to_string(sl.agreement));
        j["num_classes"] = sl.num_classes;
        j["target_class"] = sl.target_class;
        soft.push_back(std::move(j));
      }
      rec["soft_labels"] = std::move(soft);
    }
    if (!d.perspectives.empty()) {
      ordered_json ps = ordered_json::array();
      for (auto p : d.perspectives) ps.push_back(std::string(to_string(p)));
      rec["perspectives"] = std::move(ps);
    }
    out += rec.dump();
    out.push_back('\n');
  }
  return out;
}

std::vector<Document> read_unified(std::string_view content) {
  std::vector<Document> docs;
  std::size_t index = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    const std::string_view line = trim(content.substr(pos, nl - pos));
    pos = nl + 1;
    if (line.empty()) continue;
    const std::string where = "unified record " + std::to_string(index);
    try {
      const json rec = json::parse(line);
      Document d;
      d.doc_id = rec.at("doc_id").get<std::string>();
      d.source = source_from_string(rec.at("source").get<std::string>());
      d.raw_text = rec.at("raw_text").get<std::string>();
      for (const auto& js : rec.at("sentences")) {
        Sentence s;
        for (const auto& jt : js.at("tokens")) {
          if (!jt.is_array() || jt.size() != 3) throw Error("token must be [text, start, end]");
          s.tokens.push_back({s.tokens.size(), jt.at(0).get<std::string>(),
                              jt.at(1).get<std::size_t>(), jt.at(2).get<std::size_t>()});
        }
        for (const auto& je : js.at("entities"))
          s.entities.push_back({je.at("id").get<std::string>(),
                                {je.at("start").get<std::size_t>(), je.at("end").get<std::size_t>()},
                                je.at("type").get<std::string>(),
                                perspective_from_string(je.at("perspective").get<std::string>())});
        for (const auto& jr : js.at("relations"))
          s.relations.push_back({jr.at("head").get<std::string>(), jr.at("tail").get<std::string>(),
                                 jr.at("type").get<std::string>(),
                                 perspective_from_string(jr.at("perspective").get<std::string>())});
        d.sentences.push_back(std::move(s));
      }
      if (rec.contains("soft_labels")) {
        for (const auto& j : rec.at("soft_labels"))
          d.soft_labels.push_back({j.at("sentence").get<std::size_t>(),
                                   j.at("relation").get<std::size_t>(),
                                   j.value("on_entity", false),
                                   agreement_from_string(j.at("agreement").get<std::string>()),
                                   j.at("num_classes").get<std::size_t>(),
                                   j.at("target_class").get<std::size_t>()});
      }
      if (rec.contains("perspectives"))
        for (const auto& p : rec.at("perspectives"))
          d.perspectives.push_back(perspective_from_string(p.get<std::string>()));
      docs.push_back(std::move(d));
    } catch (const json::exception& e) {
      throw Error(where + ": " + e.what());
    } catch (const Error& e) {
      throw Error(where + ": " + e.what());
    }
    ++index;
  }
  return docs;
}

std::string report_to_json(const ParseReport& report, int indent) {
  ordered_json j;
  j["documents"] = report.documents;
  j["entities"] = report.entities;
  j["relations"] = report.relations;
  j["relations_per_document"] = report.relations_per_document();
  j["dropped_relations"] = report.dropped_relations;
  j["skipped_documents"] = report.skipped_documents;
  j["warnings"] = report.warnings;
  return j.dump(indent);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("short write to '" + path + "'");
}

}  // namespace lvsie
