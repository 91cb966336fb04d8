#pragma once

#include <span>
#include <string>

#include "spiderpcg/experiment.hpp"

namespace spiderpcg {

/// One line per (initial, category, method) with accuracy, mean, std and markers.
std::string summary_csv(std::span<const CellSummary> summaries, std::span<const ComparisonResult> comparisons);

/// Rows: initial x category. Columns: methods. Best per row in bold, with
/// significance markers and the accuracy filter annotated inline.
std::string summary_markdown(std::span<const CellSummary> summaries, std::span<const ComparisonResult> comparisons);

/// Per-cell best method and p-values of every other method against it.
std::string comparison_csv(std::span<const CellSummary> summaries, std::span<const ComparisonResult> comparisons);
std::string comparison_markdown(std::span<const CellSummary> summaries,
                                std::span<const ComparisonResult> comparisons);

} // namespace spiderpcg
