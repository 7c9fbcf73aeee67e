#ifndef LVSIE_PLOTS_HPP
#define LVSIE_PLOTS_HPP

#include <string>
#include <string_view>

#include "json.hpp"

#include "lvsie/alignment.hpp"

namespace lvsie {

enum class PlotKind { kQuantityCurve, kRelationDistribution, kCooccurrenceHeatmap };

std::string_view to_string(PlotKind k);
PlotKind plot_kind_from_string(std::string_view s);

struct PlotFiles {
  std::string data;   // CSV
  std::string image;  // SVG
};

// Artifact shapes:
//   QUANTITY_CURVE        {"series": [{"name": s, "points": [[x, y], ...]}, ...]}
//   RELATION_DISTRIBUTION an overlap report (semeval/scierc label_distribution)
//   COOCCURRENCE_HEATMAP  cooccurrence_to_json() output
// The CSV is always written; nothing is written when the artifact is empty.
PlotFiles emit_plots(const nlohmann::json& artifact, PlotKind kind, const std::string& directory,
                     const std::string& stem);

nlohmann::json cooccurrence_to_json(const CooccurrenceTable& table);

}  // namespace lvsie

#endif  // LVSIE_PLOTS_HPP
