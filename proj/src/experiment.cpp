#include "spiderpcg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <unordered_map>

#include "spiderpcg/stats.hpp"

namespace spiderpcg {

namespace {

constexpr std::uint64_t kSharedTableTag = 0x9u;

// A unit of scheduling: usually one run; a whole subject chain when RL
// tables persist across subjects.
struct GridTask {
    std::vector<std::size_t> slots;
    bool shared_table = false;
};

struct IntAccumulator {
    std::int64_t n = 0;
    std::int64_t sum = 0;
    std::int64_t sumsq = 0;

    void add(std::int64_t v)
    {
        ++n;
        sum += v;
        sumsq += v * v;
    }
    std::optional<double> mean() const
    {
        return n > 0 ? std::optional<double>(static_cast<double>(sum) / static_cast<double>(n)) : std::nullopt;
    }
    // Exact integer numerator, so the result does not depend on record order.
    std::optional<double> sample_std() const
    {
        if (n < 2) {
            return std::nullopt;
        }
        const double num = static_cast<double>(n * sumsq - sum * sum);
        return std::sqrt(num / (static_cast<double>(n) * static_cast<double>(n - 1)));
    }
};

std::optional<double> sample_std_of(const std::vector<double>& values)
{
    if (values.size() < 2) {
        return std::nullopt;
    }
    double mean = 0.0;
    for (double v : values) {
        mean += v;
    }
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) {
        if (!field.empty() && field.back() == '\r') {
            field.pop_back();
        }
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

int parse_int_field(const std::string& text, const char* column, std::size_t line_no)
{
    try {
        std::size_t used = 0;
        const int v = std::stoi(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("results line " + std::to_string(line_no) + ": bad integer in column " + column);
    }
}

} // namespace

StressCategory category_of(int target)
{
    if (target >= 1 && target <= 3) {
        return StressCategory::Low;
    }
    if (target >= 4 && target <= 6) {
        return StressCategory::Moderate;
    }
    if (target >= 7 && target <= 9) {
        return StressCategory::High;
    }
    throw std::invalid_argument("target " + std::to_string(target) + " has no stress category");
}

std::string_view category_name(StressCategory c)
{
    switch (c) {
    case StressCategory::Low:
        return "low";
    case StressCategory::Moderate:
        return "moderate";
    case StressCategory::High:
        return "high";
    }
    return "?";
}

void GridConfig::validate() const
{
    if (methods.empty() || initial_kinds.empty() || targets.empty()) {
        throw std::invalid_argument("grid needs at least one method, initial state and target");
    }
    if (repeats < 1) {
        throw std::invalid_argument("repeats must be at least 1");
    }
    for (int t : targets) {
        RewardSpec::for_target(t);
    }
    options.validate();
}

std::size_t GridConfig::run_count(std::size_t subjects) const
{
    return methods.size() * initial_kinds.size() * targets.size() * subjects * static_cast<std::size_t>(repeats);
}

std::vector<GridRecord> run_grid(const GridConfig& cfg, const SubjectPopulation& population,
                                 const ProgressFn& progress)
{
    cfg.validate();

    std::vector<Method> methods = cfg.methods;
    std::sort(methods.begin(), methods.end());
    methods.erase(std::unique(methods.begin(), methods.end()), methods.end());
    std::vector<InitialKind> initials = cfg.initial_kinds;
    std::sort(initials.begin(), initials.end());
    initials.erase(std::unique(initials.begin(), initials.end()), initials.end());
    std::vector<int> targets = cfg.targets;
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

    // Records laid out in coordinate order; tasks point into the slots.
    std::vector<GridRecord> records;
    records.reserve(methods.size() * initials.size() * targets.size() * population.size()
                    * static_cast<std::size_t>(cfg.repeats));
    std::vector<GridTask> tasks;
    for (Method m : methods) {
        const bool chain = cfg.options.rl.persist_qtable && (m == Method::RLZero || m == Method::RLRandom);
        for (InitialKind k : initials) {
            for (int t : targets) {
                const std::size_t block = records.size();
                for (const VirtualSubject& s : population.subjects) {
                    for (int r = 0; r < cfg.repeats; ++r) {
                        GridRecord rec;
                        rec.coords = RunCoordinates{m, k, t, s.id, r};
                        records.push_back(rec);
                        if (!chain) {
                            tasks.push_back(GridTask{{records.size() - 1}, false});
                        }
                    }
                }
                if (chain) {
                    const std::size_t n_subjects = population.size();
                    for (int r = 0; r < cfg.repeats; ++r) {
                        GridTask task{{}, true};
                        for (std::size_t si = 0; si < n_subjects; ++si) {
                            task.slots.push_back(block + si * static_cast<std::size_t>(cfg.repeats)
                                                 + static_cast<std::size_t>(r));
                        }
                        tasks.push_back(std::move(task));
                    }
                }
            }
        }
    }

    const auto run_task = [&](const GridTask& task) {
        std::optional<QTable> table;
        if (task.shared_table) {
            const RunCoordinates& c = records[task.slots.front()].coords;
            Rng rng(derive_seed(cfg.master_seed, {kSharedTableTag, static_cast<std::uint64_t>(c.method),
                                                  static_cast<std::uint64_t>(c.initial_kind),
                                                  static_cast<std::uint64_t>(c.target),
                                                  static_cast<std::uint64_t>(c.repeat)}));
            table = QTable::make(c.method == Method::RLZero ? QInit::Zero : QInit::Random, rng);
        }
        for (std::size_t slot : task.slots) {
            GridRecord& rec = records[slot];
            RunConfig rc;
            rc.method = rec.coords.method;
            rc.subject_id = rec.coords.subject_id;
            rc.target = rec.coords.target;
            rc.initial_kind = rec.coords.initial_kind;
            rc.repeat_index = rec.coords.repeat;
            rc.master_seed = cfg.master_seed;
            rc.options = cfg.options;
            rc.options.record_sequence = false;
            const VirtualSubject& subject = population.at(rec.coords.subject_id);
            const RunResult res = table ? run_session(rc, subject, *table) : run_session(rc, subject);
            rec.success = res.success;
            rec.spiders_presented = res.spiders_presented;
            rec.iterations_used = res.iterations_used;
        }
    };

    const std::size_t total = records.size();
    std::atomic<std::size_t> next_task{0};
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;
    std::exception_ptr failure;
    std::mutex failure_mutex;

    const auto worker = [&] {
        for (;;) {
            const std::size_t i = next_task.fetch_add(1);
            if (i >= tasks.size()) {
                return;
            }
            try {
                run_task(tasks[i]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next_task = tasks.size();
                return;
            }
            const std::size_t finished = done.fetch_add(tasks[i].slots.size()) + tasks[i].slots.size();
            if (progress) {
                std::lock_guard lock(progress_mutex);
                progress(finished, total);
            }
        }
    };

    const int n_workers = std::max(1, cfg.workers);
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < n_workers; ++w) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return records;
}

StdMode parse_std_mode(std::string_view name)
{
    if (name == "pooled") {
        return StdMode::Pooled;
    }
    if (name == "per_target") {
        return StdMode::PerTarget;
    }
    throw std::invalid_argument("unknown std mode '" + std::string(name) + "' (expected pooled or per_target)");
}

std::vector<CellSummary> summarize(std::span<const GridRecord> records, StdMode std_mode)
{
    struct CellAcc {
        int runs = 0;
        IntAccumulator pooled;
        std::map<int, IntAccumulator> by_target;
    };
    std::map<std::tuple<InitialKind, StressCategory, Method>, CellAcc> cells;
    for (const GridRecord& r : records) {
        CellAcc& acc = cells[{r.coords.initial_kind, category_of(r.coords.target), r.coords.method}];
        ++acc.runs;
        if (r.success) {
            acc.pooled.add(r.spiders_presented);
            acc.by_target[r.coords.target].add(r.spiders_presented);
        }
    }

    std::vector<CellSummary> out;
    out.reserve(cells.size());
    for (const auto& [key, acc] : cells) {
        CellSummary s;
        std::tie(s.initial_kind, s.stress_category, s.method) = key;
        s.n_runs = acc.runs;
        s.n_success = static_cast<int>(acc.pooled.n);
        s.accuracy_percent = acc.runs > 0 ? 100.0 * s.n_success / acc.runs : 0.0;
        s.mean_presented = acc.pooled.mean();
        if (std_mode == StdMode::Pooled) {
            s.std_presented = acc.pooled.sample_std();
        } else {
            std::vector<double> target_means;
            for (const auto& [target, t_acc] : acc.by_target) {
                target_means.push_back(*t_acc.mean());
            }
            s.std_presented = sample_std_of(target_means);
        }
        s.considered = s.accuracy_percent >= kConsideredAccuracy;
        out.push_back(s);
    }
    return out;
}

std::map<int, double> per_subject_means(std::span<const GridRecord> records, InitialKind initial,
                                        StressCategory category, Method method)
{
    std::map<int, IntAccumulator> by_subject;
    for (const GridRecord& r : records) {
        if (r.success && r.coords.method == method && r.coords.initial_kind == initial
            && category_of(r.coords.target) == category) {
            by_subject[r.coords.subject_id].add(r.spiders_presented);
        }
    }
    std::map<int, double> out;
    for (const auto& [id, acc] : by_subject) {
        out[id] = *acc.mean();
    }
    return out;
}

std::optional<double> paired_p_value(const std::map<int, double>& a, const std::map<int, double>& b)
{
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& [id, v] : a) {
        const auto it = b.find(id);
        if (it != b.end()) {
            xs.push_back(v);
            ys.push_back(it->second);
        }
    }
    if (xs.size() < 2) {
        return std::nullopt;
    }
    try {
        return paired_ttest(xs, ys).p;
    } catch (const StatsError&) {
        // Constant nonzero difference: the methods differ on every subject.
        return 0.0;
    }
}

std::string_view marker_text(Marker m)
{
    switch (m) {
    case Marker::None:
        return "";
    case Marker::Single:
        return "*";
    case Marker::Double:
        return "**";
    }
    return "";
}

Marker ComparisonResult::marker(Method m) const
{
    const auto it = markers.find(m);
    return it == markers.end() ? Marker::None : it->second;
}

std::optional<Method> best_method(std::span<const CellSummary> cell)
{
    std::optional<Method> best;
    double best_mean = 0.0;
    for (const CellSummary& s : cell) {
        if (!s.considered || !s.mean_presented) {
            continue;
        }
        if (!best || *s.mean_presented < best_mean || (*s.mean_presented == best_mean && s.method < *best)) {
            best = s.method;
            best_mean = *s.mean_presented;
        }
    }
    return best;
}

ComparisonResult mark_significance(std::span<const CellSummary> cell,
                                   const std::map<Method, std::optional<double>>& p_vs_best)
{
    constexpr double kAlpha = 0.05;
    ComparisonResult result;
    if (!cell.empty()) {
        result.initial_kind = cell.front().initial_kind;
        result.stress_category = cell.front().stress_category;
    }
    result.best = best_method(cell);
    result.p_values = p_vs_best;
    if (!result.best) {
        return result;
    }
    std::vector<Method> rivals;
    for (const CellSummary& s : cell) {
        if (s.method != *result.best && s.considered && s.mean_presented) {
            rivals.push_back(s.method);
        }
    }
    if (rivals.empty()) {
        return result;
    }
    const auto significant = [&](Method m) {
        const auto it = p_vs_best.find(m);
        return it != p_vs_best.end() && it->second && *it->second < kAlpha;
    };
    if (std::all_of(rivals.begin(), rivals.end(), significant)) {
        result.markers[*result.best] = Marker::Double;
        return result;
    }
    result.markers[*result.best] = Marker::Single;
    for (Method m : rivals) {
        if (!significant(m)) {
            result.markers[m] = Marker::Single;
        }
    }
    return result;
}

std::vector<ComparisonResult> compare_cells(std::span<const GridRecord> records,
                                            std::span<const CellSummary> summaries)
{
    std::map<std::pair<InitialKind, StressCategory>, std::vector<CellSummary>> cells;
    for (const CellSummary& s : summaries) {
        cells[{s.initial_kind, s.stress_category}].push_back(s);
    }
    std::vector<ComparisonResult> out;
    for (const auto& [key, cell] : cells) {
        const auto [initial, category] = key;
        std::map<Method, std::optional<double>> p_vs_best;
        if (const auto best = best_method(cell)) {
            const auto best_means = per_subject_means(records, initial, category, *best);
            for (const CellSummary& s : cell) {
                if (s.method != *best) {
                    p_vs_best[s.method]
                        = paired_p_value(best_means, per_subject_means(records, initial, category, s.method));
                }
            }
        }
        ComparisonResult cmp = mark_significance(cell, p_vs_best);
        cmp.initial_kind = initial;
        cmp.stress_category = category;
        out.push_back(std::move(cmp));
    }
    return out;
}

void write_results_csv(std::ostream& out, std::span<const GridRecord> records)
{
    out << "method,initial_kind,target,subject_id,repeat,success,spiders_presented,iterations_used\n";
    for (const GridRecord& r : records) {
        out << method_name(r.coords.method) << ',' << initial_kind_name(r.coords.initial_kind) << ','
            << r.coords.target << ',' << r.coords.subject_id << ',' << r.coords.repeat << ',' << (r.success ? 1 : 0)
            << ',' << r.spiders_presented << ',' << r.iterations_used << '\n';
    }
}

std::vector<GridRecord> read_results_csv(std::istream& in)
{
    static constexpr std::array<const char*, 8> kColumns{
        "method", "initial_kind", "target", "subject_id", "repeat", "success", "spiders_presented", "iterations_used"};

    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("results file is empty");
    }
    const std::vector<std::string> header = split_csv_line(line);
    std::array<std::size_t, kColumns.size()> pos{};
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
        const auto it = std::find(header.begin(), header.end(), kColumns[c]);
        if (it == header.end()) {
            throw std::runtime_error(std::string("results file is missing column '") + kColumns[c] + "'");
        }
        pos[c] = static_cast<std::size_t>(it - header.begin());
    }

    std::vector<GridRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != header.size()) {
            throw std::runtime_error("results line " + std::to_string(line_no) + ": wrong number of fields");
        }
        GridRecord r;
        try {
            r.coords.method = parse_method(f[pos[0]]);
            r.coords.initial_kind = parse_initial_kind(f[pos[1]]);
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error("results line " + std::to_string(line_no) + ": " + e.what());
        }
        r.coords.target = parse_int_field(f[pos[2]], kColumns[2], line_no);
        if (r.coords.target < kMinTarget || r.coords.target > kMaxTarget) {
            throw std::runtime_error("results line " + std::to_string(line_no) + ": target out of range");
        }
        r.coords.subject_id = parse_int_field(f[pos[3]], kColumns[3], line_no);
        r.coords.repeat = parse_int_field(f[pos[4]], kColumns[4], line_no);
        const int success = parse_int_field(f[pos[5]], kColumns[5], line_no);
        if (success != 0 && success != 1) {
            throw std::runtime_error("results line " + std::to_string(line_no) + ": success must be 0 or 1");
        }
        r.success = success == 1;
        r.spiders_presented = parse_int_field(f[pos[6]], kColumns[6], line_no);
        r.iterations_used = parse_int_field(f[pos[7]], kColumns[7], line_no);
        records.push_back(r);
    }
    return records;
}

} // namespace spiderpcg
