#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "spiderpcg/policies.hpp"
#include "spiderpcg/session.hpp"
#include "spiderpcg/virtual_subjects.hpp"

namespace spiderpcg {

enum class StressCategory { Low = 0, Moderate = 1, High = 2 };

inline constexpr std::array<StressCategory, 3> kAllCategories{StressCategory::Low, StressCategory::Moderate,
                                                              StressCategory::High};

/// low = 1..3, moderate = 4..6, high = 7..9.
StressCategory category_of(int target);
std::string_view category_name(StressCategory c);

struct RunCoordinates {
    Method method = Method::RLZero;
    InitialKind initial_kind = InitialKind::Min;
    int target = 1;
    int subject_id = 0;
    int repeat = 0;

    auto operator<=>(const RunCoordinates&) const = default;
};

struct GridRecord {
    RunCoordinates coords;
    bool success = false;
    int spiders_presented = 0;
    int iterations_used = 0;

    bool operator==(const GridRecord&) const = default;
};

struct GridConfig {
    std::vector<Method> methods{kAllMethods.begin(), kAllMethods.end()};
    std::vector<InitialKind> initial_kinds{kAllInitialKinds.begin(), kAllInitialKinds.end()};
    std::vector<int> targets{1, 2, 3, 4, 5, 6, 7, 8, 9};
    int repeats = 10;
    std::uint64_t master_seed = 0;
    // record_sequence is ignored; grid runs never keep traces.
    SessionOptions options;
    int workers = 1;

    void validate() const;
    std::size_t run_count(std::size_t subjects) const;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Every (method, initial, target, subject, repeat) run, sorted by coordinates.
/// The result does not depend on the worker count.
std::vector<GridRecord> run_grid(const GridConfig& cfg, const SubjectPopulation& population,
                                 const ProgressFn& progress = {});

inline constexpr double kConsideredAccuracy = 75.0;

enum class StdMode { Pooled, PerTarget };

StdMode parse_std_mode(std::string_view name);

struct CellSummary {
    InitialKind initial_kind = InitialKind::Min;
    StressCategory stress_category = StressCategory::Low;
    Method method = Method::RLZero;
    int n_runs = 0;
    int n_success = 0;
    double accuracy_percent = 0.0;
    /// Over successful runs only; absent when there are none.
    std::optional<double> mean_presented;
    /// Sample (n-1) std; absent with fewer than two values.
    std::optional<double> std_presented;
    bool considered = false;
};

/// One summary per (initial, category, method) present in the records, in
/// canonical order. Independent of record order.
std::vector<CellSummary> summarize(std::span<const GridRecord> records, StdMode std_mode = StdMode::Pooled);

/// subject id -> mean Spiders Presented over that subject's successful runs in the cell.
std::map<int, double> per_subject_means(std::span<const GridRecord> records, InitialKind initial,
                                        StressCategory category, Method method);

/// Paired t-test p-value over subjects present in both maps. Equal nonzero
/// differences count as p = 0; fewer than two pairs gives nullopt.
std::optional<double> paired_p_value(const std::map<int, double>& a, const std::map<int, double>& b);

enum class Marker { None, Single, Double };

std::string_view marker_text(Marker m);

struct ComparisonResult {
    InitialKind initial_kind = InitialKind::Min;
    StressCategory stress_category = StressCategory::Low;
    std::optional<Method> best;
    std::map<Method, std::optional<double>> p_values;
    std::map<Method, Marker> markers;

    Marker marker(Method m) const;
};

/// Considered method with the lowest mean; the earlier method wins ties.
std::optional<Method> best_method(std::span<const CellSummary> cell);

/// `cell` holds the summaries of one (initial, category) cell; `p_vs_best`
/// maps each other method to its p-value against the best.
ComparisonResult mark_significance(std::span<const CellSummary> cell,
                                   const std::map<Method, std::optional<double>>& p_vs_best);

/// best / p-values / markers for every cell in `summaries`.
std::vector<ComparisonResult> compare_cells(std::span<const GridRecord> records,
                                            std::span<const CellSummary> summaries);

// Results CSV: method,initial_kind,target,subject_id,repeat,success,spiders_presented,iterations_used
void write_results_csv(std::ostream& out, std::span<const GridRecord> records);
/// Throws std::runtime_error on missing columns or malformed rows.
std::vector<GridRecord> read_results_csv(std::istream& in);

} // namespace spiderpcg
