#include "spiderpcg/cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "spiderpcg/config.hpp"
#include "spiderpcg/experiment.hpp"
#include "spiderpcg/report.hpp"
#include "spiderpcg/session.hpp"
#include "spiderpcg/virtual_subjects.hpp"

namespace spiderpcg {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GenSubjectsArgs {
    std::size_t n = 100;
    std::optional<std::uint64_t> seed;
    std::string out;
};

struct RunArgs {
    std::string subjects;
    std::vector<std::string> methods;
    std::optional<int> repeats;
    std::optional<std::uint64_t> seed;
    std::string config;
    std::string out;
    std::optional<int> workers;
    std::vector<std::string> initials;
    std::vector<int> targets;
    std::optional<int> iteration_cap;
};

struct ReportArgs {
    std::string results;
    std::string format = "markdown";
    std::string std_mode = "pooled";
    std::string out;
};

struct OracleArgs {
    std::string subjects;
    int subject_id = 0;
    int target = 1;
    std::string initial = "min";
};

struct TraceArgs {
    std::string subjects;
    std::string method = "rl_zero";
    std::optional<int> subject_id;
    int target = 1;
    std::string initial = "min";
    std::optional<std::uint64_t> seed;
    int repeat = 0;
    std::string config;
    std::string out;
};

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    out << content;
    if (!out) {
        throw std::runtime_error("failed writing " + path);
    }
}

void emit(const std::string& path, const std::string& content, std::ostream& out)
{
    if (path.empty()) {
        out << content;
    } else {
        write_file(path, content);
    }
}

std::vector<GridRecord> load_results(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open results file " + path);
    }
    std::vector<GridRecord> records = read_results_csv(in);
    if (records.empty()) {
        throw std::runtime_error("results file " + path + " has no runs");
    }
    return records;
}

int cmd_gen_subjects(const GenSubjectsArgs& a, std::ostream& out)
{
    if (!a.seed) {
        throw UsageError("--seed is required (no implicit entropy)");
    }
    if (a.n == 0) {
        throw UsageError("--n must be at least 1");
    }
    const std::string text = subjects_to_json(generate_population(a.n, *a.seed));
    write_file(a.out, text);
    out << "wrote " << a.n << " subjects to " << a.out << '\n' << "sha256 " << sha256_hex(text) << '\n';
    return kExitOk;
}

int cmd_run(const RunArgs& a, std::ostream& out, std::ostream& err)
{
    GridConfig cfg;
    bool has_seed = false;
    if (!a.config.empty()) {
        LoadedGridConfig loaded = load_grid_config(a.config, cfg);
        cfg = loaded.grid;
        has_seed = loaded.has_seed;
    }
    try {
        if (!a.methods.empty()) {
            cfg.methods.clear();
            for (const auto& m : a.methods) {
                cfg.methods.push_back(parse_method(m));
            }
        }
        if (!a.initials.empty()) {
            cfg.initial_kinds.clear();
            for (const auto& k : a.initials) {
                cfg.initial_kinds.push_back(parse_initial_kind(k));
            }
        }
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (!a.targets.empty()) {
        cfg.targets = a.targets;
    }
    if (a.repeats) {
        cfg.repeats = *a.repeats;
    }
    if (a.workers) {
        cfg.workers = *a.workers;
    }
    if (a.iteration_cap) {
        cfg.options.iteration_cap = *a.iteration_cap;
    }
    if (a.seed) {
        cfg.master_seed = *a.seed;
        has_seed = true;
    }
    if (!has_seed) {
        throw UsageError("--seed is required unless the config file sets master_seed");
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    const SubjectPopulation population = load_subjects(a.subjects);
    const std::size_t total = cfg.run_count(population.size());
    std::size_t last_report = 0;
    const auto progress = [&](std::size_t done, std::size_t all) {
        if (done == all || done - last_report >= std::max<std::size_t>(all / 20, 1)) {
            last_report = done;
            err << "progress " << done << '/' << all << '\n';
        }
    };
    const std::vector<GridRecord> records = run_grid(cfg, population, progress);

    std::ostringstream csv;
    write_results_csv(csv, records);
    write_file(a.out, csv.str());
    const auto successes = std::count_if(records.begin(), records.end(), [](const GridRecord& r) { return r.success; });
    out << "wrote " << total << " runs (" << successes << " successful) to " << a.out << '\n';
    return kExitOk;
}

int cmd_summarize(const ReportArgs& a, bool comparison_only, std::ostream& out)
{
    StdMode mode{};
    try {
        mode = parse_std_mode(a.std_mode);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const std::vector<GridRecord> records = load_results(a.results);
    const std::vector<CellSummary> summaries = summarize(records, mode);
    const std::vector<ComparisonResult> comparisons = compare_cells(records, summaries);
    std::string text;
    if (comparison_only) {
        text = a.format == "csv" ? comparison_csv(summaries, comparisons) : comparison_markdown(summaries, comparisons);
    } else {
        text = a.format == "csv" ? summary_csv(summaries, comparisons) : summary_markdown(summaries, comparisons);
    }
    emit(a.out, text, out);
    return kExitOk;
}

int cmd_oracle(const OracleArgs& a, std::ostream& out)
{
    if (a.target < kMinTarget || a.target > kMaxTarget) {
        throw UsageError("--target must be in [1, 9]");
    }
    InitialKind kind{};
    try {
        kind = parse_initial_kind(a.initial);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const SubjectPopulation population = load_subjects(a.subjects);
    const VirtualSubject* subject = nullptr;
    try {
        subject = &population.at(a.subject_id);
    } catch (const std::out_of_range& e) {
        throw UsageError(e.what());
    }
    const SpiderState start = initial_state(kind);
    const std::vector<SpiderState> hits = success_states(*subject, a.target);
    const std::optional<int> dist = bfs_distance(*subject, start, a.target);

    out << "subject " << subject->id << " target " << a.target << " initial " << a.initial << ' '
        << start.to_string() << " stress " << stress(*subject, start) << '\n';
    out << "success states: " << hits.size() << '\n';
    for (std::size_t i = 0; i < std::min<std::size_t>(hits.size(), 5); ++i) {
        out << "  " << hits[i].to_string() << " stress " << stress(*subject, hits[i]) << '\n';
    }
    if (dist) {
        out << "bfs distance: " << *dist << '\n';
    } else {
        out << "bfs distance: unreachable\n";
    }
    return kExitOk;
}

int cmd_trace(const TraceArgs& a, std::ostream& out)
{
    GridConfig cfg;
    bool has_seed = false;
    if (!a.config.empty()) {
        LoadedGridConfig loaded = load_grid_config(a.config, cfg);
        cfg = loaded.grid;
        has_seed = loaded.has_seed;
    }
    if (a.seed) {
        cfg.master_seed = *a.seed;
        has_seed = true;
    }
    if (!has_seed) {
        throw UsageError("--seed is required unless the config file sets master_seed");
    }
    RunConfig rc;
    try {
        rc.method = parse_method(a.method);
        rc.initial_kind = parse_initial_kind(a.initial);
        RewardSpec::for_target(a.target);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    rc.target = a.target;
    rc.repeat_index = a.repeat;
    rc.master_seed = cfg.master_seed;
    rc.options = cfg.options;
    rc.options.record_sequence = true;

    const SubjectPopulation population = load_subjects(a.subjects);
    std::vector<const VirtualSubject*> subjects;
    if (a.subject_id) {
        try {
            subjects.push_back(&population.at(*a.subject_id));
        } catch (const std::out_of_range& e) {
            throw UsageError(e.what());
        }
    } else {
        for (const VirtualSubject& s : population.subjects) {
            subjects.push_back(&s);
        }
    }

    std::ostringstream lines;
    for (const VirtualSubject* s : subjects) {
        rc.subject_id = s->id;
        write_trace(lines, run_session(rc, *s), a.subject_id ? -1 : s->id);
    }
    emit(a.out, lines.str(), out);
    return kExitOk;
}

} // namespace

std::string sha256_hex(std::string_view bytes)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += kHex[digest[i] >> 4];
        out += kHex[digest[i] & 0xf];
    }
    return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Adaptive spider content generation: simulator and benchmark harness", "spiderpcg"};
    app.require_subcommand(1);

    GenSubjectsArgs gen;
    auto* gen_cmd = app.add_subcommand("gen-subjects", "Sample a virtual subject population");
    gen_cmd->add_option("--n", gen.n, "Number of subjects")->capture_default_str();
    gen_cmd->add_option("--seed", gen.seed, "Population seed (required)");
    gen_cmd->add_option("--out", gen.out, "Output JSON path")->required();

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Run the evaluation grid and write a results CSV");
    run_cmd->add_option("--subjects", run.subjects, "Subjects JSON")->required();
    run_cmd->add_option("--methods", run.methods, "rl_zero,rl_random,ga,greedy,random (default all)")
        ->delimiter(',');
    run_cmd->add_option("--repeats", run.repeats, "Repeats per subject/initial/target (default 10)");
    run_cmd->add_option("--seed", run.seed, "Master seed");
    run_cmd->add_option("--config", run.config, "Config JSON");
    run_cmd->add_option("--out", run.out, "Results CSV path")->required();
    run_cmd->add_option("--workers", run.workers, "Parallel workers (default 1)");
    run_cmd->add_option("--initials", run.initials, "min,avg,max (default all)")->delimiter(',');
    run_cmd->add_option("--targets", run.targets, "Target stress levels (default 1..9)")->delimiter(',');
    run_cmd->add_option("--iteration-cap", run.iteration_cap, "Iterations per run (default 100)");

    ReportArgs summary;
    auto* sum_cmd = app.add_subcommand("summarize", "Aggregate a results CSV per cell");
    sum_cmd->add_option("--results", summary.results, "Results CSV")->required();
    sum_cmd->add_option("--format", summary.format, "csv | markdown")
        ->check(CLI::IsMember({"csv", "markdown"}))
        ->capture_default_str();
    sum_cmd->add_option("--std-mode", summary.std_mode, "pooled | per_target")->capture_default_str();
    sum_cmd->add_option("--out", summary.out, "Output path (default stdout)");

    ReportArgs compare;
    auto* cmp_cmd = app.add_subcommand("compare", "Paired t-tests against the best method per cell");
    cmp_cmd->add_option("--results", compare.results, "Results CSV")->required();
    cmp_cmd->add_option("--format", compare.format, "csv | markdown")
        ->check(CLI::IsMember({"csv", "markdown"}))
        ->capture_default_str();
    cmp_cmd->add_option("--out", compare.out, "Output path (default stdout)");

    OracleArgs oracle;
    auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force success set and BFS distance");
    oracle_cmd->add_option("--subjects", oracle.subjects, "Subjects JSON")->required();
    oracle_cmd->add_option("--subject-id", oracle.subject_id, "Subject id")->required();
    oracle_cmd->add_option("--target", oracle.target, "Target stress 1..9")->required();
    oracle_cmd->add_option("--initial", oracle.initial, "min | avg | max")->capture_default_str();

    TraceArgs trace;
    auto* trace_cmd = app.add_subcommand("trace", "Emit per-presentation JSON lines for one method");
    trace_cmd->add_option("--subjects", trace.subjects, "Subjects JSON")->required();
    trace_cmd->add_option("--method", trace.method, "Method name")->capture_default_str();
    trace_cmd->add_option("--subject-id", trace.subject_id, "Subject id (default: every subject in order)");
    trace_cmd->add_option("--target", trace.target, "Target stress 1..9")->capture_default_str();
    trace_cmd->add_option("--initial", trace.initial, "min | avg | max")->capture_default_str();
    trace_cmd->add_option("--seed", trace.seed, "Master seed");
    trace_cmd->add_option("--repeat", trace.repeat, "Repeat index")->capture_default_str();
    trace_cmd->add_option("--config", trace.config, "Config JSON");
    trace_cmd->add_option("--out", trace.out, "Output path (default stdout)");

    std::vector<std::string> argv_storage{"spiderpcg"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_storage) {
        argv.push_back(s.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*gen_cmd) {
            return cmd_gen_subjects(gen, out);
        }
        if (*run_cmd) {
            return cmd_run(run, out, err);
        }
        if (*sum_cmd) {
            return cmd_summarize(summary, false, out);
        }
        if (*cmp_cmd) {
            return cmd_summarize(compare, true, out);
        }
        if (*oracle_cmd) {
            return cmd_oracle(oracle, out);
        }
        if (*trace_cmd) {
            return cmd_trace(trace, out);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

} // namespace spiderpcg
