#include "lvsie/plots.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <vector>

#include "lvsie/format_io.hpp"

namespace lvsie {

namespace {

using json = nlohmann::json;

constexpr const char* kPalette[] = {"#c0392b", "#2471a3", "#229954", "#b9770e", "#7d3c98",
                                    "#17a589"};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string svg_open(int w, int h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) +
         "\" height=\"" + std::to_string(h) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
}

std::string text(double x, double y, const std::string& s, const char* anchor = "start") {
  return "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" text-anchor=\"" + anchor + "\">" + s +
         "</text>\n";
}

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

PlotFiles quantity_curve(const json& artifact, const std::filesystem::path& base) {
  std::vector<Series> series;
  for (const auto& s : artifact.value("series", json::array())) {
    Series out{s.at("name").get<std::string>(), {}};
    for (const auto& p : s.at("points")) out.points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    if (!out.points.empty()) series.push_back(std::move(out));
  }
  if (series.empty()) throw Error("quantity curve has no data points");

  std::string csv = "series,x,y\n";
  double x0 = 1e300, x1 = -1e300, y1 = 0.0;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      csv += s.name + "," + fmt(x) + "," + fmt(y) + "\n";
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
    }
  if (x1 <= x0) x1 = x0 + 1;
  if (y1 <= 0) y1 = 1;

  const int W = 520, H = 340, L = 60, R = 130, T = 20, B = 40;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - y / y1 * (H - T - B); };
  std::string svg = svg_open(W, H);
  svg += "<line x1=\"" + fmt(L) + "\" y1=\"" + fmt(H - B) + "\" x2=\"" + fmt(W - R) + "\" y2=\"" +
         fmt(H - B) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fmt(L) + "\" y1=\"" + fmt(T) + "\" x2=\"" + fmt(L) + "\" y2=\"" +
         fmt(H - B) + "\" stroke=\"black\"/>\n";
  svg += text(L, H - 10, fmt(x0)) + text(W - R, H - 10, fmt(x1), "end");
  svg += text(L - 5, H - B, "0", "end") + text(L - 5, T + 8, fmt(y1), "end");
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % std::size(kPalette)];
    auto pts = series[i].points;
    std::sort(pts.begin(), pts.end());
    std::string path;
    for (const auto& [x, y] : pts) path += fmt(px(x)) + "," + fmt(py(y)) + " ";
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"" +
           path + "\"/>\n";
    svg += text(W - R + 8, T + 14 + 16 * static_cast<double>(i), series[i].name);
  }
  svg += "</svg>\n";

  PlotFiles f{base.string() + ".csv", base.string() + ".svg"};
  write_file(f.data, csv);
  write_file(f.image, svg);
  return f;
}

PlotFiles relation_distribution(const json& artifact, const std::filesystem::path& base) {
  std::vector<std::tuple<std::string, std::string, double>> rows;
  for (const auto& [key, name] : {std::pair{"semeval", "SEM"}, std::pair{"scierc", "SCI"}}) {
    if (!artifact.contains(key)) continue;
    for (const auto& [label, count] : artifact.at(key).at("label_distribution").items())
      rows.emplace_back(name, label, count.get<double>());
  }
  if (rows.empty()) throw Error("relation distribution input has no label counts");

  std::string csv = "perspective,label,count\n";
  double mx = 1.0;
  for (const auto& [p, l, c] : rows) {
    csv += p + "," + l + "," + fmt(c) + "\n";
    mx = std::max(mx, c);
  }
  const int W = 560, bar = 16, gap = 6, L = 170;
  const int H = 20 + static_cast<int>(rows.size()) * (bar + gap);
  std::string svg = svg_open(W, H);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& [p, l, c] = rows[i];
    const double y = 10 + static_cast<double>(i) * (bar + gap);
    const double w = c / mx * (W - L - 50);
    svg += text(L - 6, y + 12, p + " " + l, "end");
    svg += "<rect x=\"" + fmt(L) + "\" y=\"" + fmt(y) + "\" width=\"" + fmt(w) + "\" height=\"" +
           std::to_string(bar) + "\" fill=\"" + (p == "SEM" ? kPalette[1] : kPalette[2]) + "\"/>\n";
    svg += text(L + w + 4, y + 12, fmt(c));
  }
  svg += "</svg>\n";
  PlotFiles f{base.string() + ".csv", base.string() + ".svg"};
  write_file(f.data, csv);
  write_file(f.image, svg);
  return f;
}

PlotFiles heatmap(const json& artifact, const std::filesystem::path& base) {
  const auto cells = artifact.value("cells", json::array());
  if (cells.empty()) throw Error("co-occurrence input has no cells");
  const auto relations = artifact.at("relation_labels").get<std::vector<std::string>>();

  std::string csv = "arg1_type,arg2_type,relation,count,score\n";
  std::vector<std::string> pairs;
  for (const auto& c : cells) {
    const std::string pair = c.at("arg1").get<std::string>() + " > " + c.at("arg2").get<std::string>();
    if (std::find(pairs.begin(), pairs.end(), pair) == pairs.end()) pairs.push_back(pair);
    csv += c.at("arg1").get<std::string>() + "," + c.at("arg2").get<std::string>() + "," +
           c.at("relation").get<std::string>() + "," + fmt(c.at("count").get<double>()) + "," +
           fmt(c.at("score").get<double>()) + "\n";
  }
  double mx = 0.0;
  for (const auto& c : cells) mx = std::max(mx, c.at("score").get<double>());
  if (mx <= 0) mx = 1;

  const int cell = 22, L = 260, T = 90;
  const int W = L + cell * static_cast<int>(relations.size()) + 20;
  const int H = T + cell * static_cast<int>(pairs.size()) + 20;
  std::string svg = svg_open(W, H);
  for (std::size_t k = 0; k < relations.size(); ++k) {
    const double x = L + cell * static_cast<double>(k) + cell / 2.0;
    svg += "<text transform=\"translate(" + fmt(x) + "," + fmt(T - 6) + ") rotate(-60)\">" +
           relations[k] + "</text>\n";
  }
  for (std::size_t r = 0; r < pairs.size(); ++r)
    svg += text(L - 6, T + cell * static_cast<double>(r) + 15, pairs[r], "end");
  for (const auto& c : cells) {
    const std::string pair = c.at("arg1").get<std::string>() + " > " + c.at("arg2").get<std::string>();
    const auto r = static_cast<std::size_t>(std::find(pairs.begin(), pairs.end(), pair) - pairs.begin());
    const auto k = static_cast<std::size_t>(
        std::find(relations.begin(), relations.end(), c.at("relation").get<std::string>()) -
        relations.begin());
    const double a = c.at("score").get<double>() / mx;
    svg += "<rect x=\"" + fmt(L + cell * static_cast<double>(k)) + "\" y=\"" +
           fmt(T + cell * static_cast<double>(r)) + "\" width=\"" + std::to_string(cell) +
           "\" height=\"" + std::to_string(cell) + "\" fill=\"#2471a3\" fill-opacity=\"" +
           fmt(0.08 + 0.92 * a) + "\"/>\n";
  }
  svg += "</svg>\n";
  PlotFiles f{base.string() + ".csv", base.string() + ".svg"};
  write_file(f.data, csv);
  write_file(f.image, svg);
  return f;
}

}  // namespace

std::string_view to_string(PlotKind k) {
  switch (k) {
    case PlotKind::kQuantityCurve: return "QUANTITY_CURVE";
    case PlotKind::kRelationDistribution: return "RELATION_DISTRIBUTION";
    case PlotKind::kCooccurrenceHeatmap: return "COOCCURRENCE_HEATMAP";
  }
  return "?";
}

PlotKind plot_kind_from_string(std::string_view s) {
  for (auto k : {PlotKind::kQuantityCurve, PlotKind::kRelationDistribution,
                 PlotKind::kCooccurrenceHeatmap})
    if (to_string(k) == s) return k;
  throw Error("unknown plot kind '" + std::string(s) + "'");
}

PlotFiles emit_plots(const json& artifact, PlotKind kind, const std::string& directory,
                     const std::string& stem) {
  std::filesystem::create_directories(directory);
  const auto base = std::filesystem::path(directory) / stem;
  try {
    switch (kind) {
      case PlotKind::kQuantityCurve: return quantity_curve(artifact, base);
      case PlotKind::kRelationDistribution: return relation_distribution(artifact, base);
      case PlotKind::kCooccurrenceHeatmap: return heatmap(artifact, base);
    }
  } catch (const json::exception& e) {
    throw Error(std::string(to_string(kind)) + " input is malformed: " + e.what());
  }
  throw Error("unknown plot kind");
}

json cooccurrence_to_json(const CooccurrenceTable& table) {
  json cells = json::array();
  for (const auto& [key, count] : table.pair_counts) {
    const auto& [i, j, k] = key;
    cells.push_back({{"arg1", i},
                     {"arg2", j},
                     {"relation", k},
                     {"count", count},
                     {"score", cooccurrence_score(table, i, j, k)}});
  }
  return {{"perspective", std::string(to_string(table.perspective))},
          {"entity_labels", table.entity_labels},
          {"relation_labels", table.relation_labels},
          {"cells", cells}};
}

}  // namespace lvsie
