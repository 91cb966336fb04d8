// Acceptance suite: one [PASS]/[FAIL] line per criterion, non-zero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "spiderpcg/experiment.hpp"
#include "spiderpcg/report.hpp"
#include "spiderpcg/reward_model.hpp"
#include "spiderpcg/session.hpp"
#include "spiderpcg/spider_domain.hpp"
#include "spiderpcg/stats.hpp"
#include "spiderpcg/virtual_subjects.hpp"

using namespace spiderpcg;

namespace {

constexpr std::uint64_t kPopulationSeed = 42;
constexpr std::uint64_t kMasterSeed = 2021;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what)
    {
        if (!cond) {
            ok = false;
            if (!detail.empty()) {
                detail += "; ";
            }
            detail += what;
        }
    }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

int failures = 0;

void report(int id, const std::string& name, const Check& c, double elapsed, const std::string& info)
{
    std::printf("[%s] %d. %s (%.2fs) %s%s%s\n", c.ok ? "PASS" : "FAIL", id, name.c_str(), elapsed, info.c_str(),
                c.detail.empty() ? "" : " :: ", c.detail.c_str());
    std::fflush(stdout);
    if (!c.ok) {
        ++failures;
    }
}

void reward_identities()
{
    const auto start = Clock::now();
    Check c;
    double worst = 0.0;
    for (int t = kMinTarget; t <= kMaxTarget; ++t) {
        const auto spec = RewardSpec::for_target(t);
        worst = std::max({worst, std::abs(reward(t, spec) - 1.0), std::abs(reward(spec.alpha, spec) + 1.0)});
        // Symmetric pairs t - d, t + d that stay inside [0, 10].
        const double reach = std::min(t - kMinStress, kMaxStress - t);
        for (int i = 0; i < 1000; ++i) {
            const double d = reach * i / 999.0;
            worst = std::max(worst, std::abs(reward(t - d, spec) - reward(t + d, spec)));
        }
    }
    c.require(worst <= 1e-12, fmt("max deviation %.3g", worst));
    const double elapsed = seconds_since(start);
    c.require(elapsed < 1.0, "slower than 1 s");
    report(1, "reward identities", c, elapsed, fmt("max deviation %.3g", worst));
}

void state_structure()
{
    const auto start = Clock::now();
    Check c;
    const auto& states = enumerate_states();
    c.require(states.size() == 486, "state count " + std::to_string(states.size()));
    std::size_t lo = 99;
    std::size_t hi = 0;
    int with_eleven = 0;
    for (const auto& s : states) {
        const std::size_t n = neighbors(s).size();
        lo = std::min(lo, n);
        hi = std::max(hi, n);
        with_eleven += n == 11 ? 1 : 0;
    }
    c.require(lo >= 6 && hi <= 11, "neighbour counts outside [6, 11]");
    c.require(with_eleven == 2, "states with 11 neighbours: " + std::to_string(with_eleven));
    const double elapsed = seconds_since(start);
    c.require(elapsed < 1.0, "slower than 1 s");
    report(2, "state-space structure", c, elapsed,
           "states=" + std::to_string(states.size()) + " neighbours=[" + std::to_string(lo) + "," +
               std::to_string(hi) + "] eleven=" + std::to_string(with_eleven));
}

void subject_scaling()
{
    const auto start = Clock::now();
    Check c;
    const auto pop = generate_population(10000, kPopulationSeed);
    const auto& states = enumerate_states();
    double worst_max = 0.0;
    double worst_min = 0.0;
    for (const auto& subject : pop.subjects) {
        double mx = -1.0;
        double mn = 11.0;
        for (const auto& s : states) {
            const double x = stress(subject, s);
            mx = std::max(mx, x);
            mn = std::min(mn, x);
        }
        worst_max = std::max(worst_max, std::abs(mx - 10.0));
        worst_min = std::max(worst_min, std::abs(mn));
    }
    c.require(worst_max <= 1e-9, fmt("max stress off by %.3g", worst_max));
    c.require(worst_min <= 1e-9, fmt("min stress off by %.3g", worst_min));
    const auto example = VirtualSubject::from_weights(0, {0.97, 0.87, 0.07, 0.63, 0.67, 0.77});
    c.require(std::abs(example.coefficient - 1.3717) <= 0.005, fmt("example coefficient %.6f", example.coefficient));
    const double elapsed = seconds_since(start);
    c.require(elapsed < 30.0, "slower than 30 s");
    report(3, "subject scaling", c, elapsed,
           fmt("max dev %.3g, min dev %.3g, example coefficient %.4f", worst_max, worst_min, example.coefficient));
}

void oracle_lower_bound(const SubjectPopulation& pop)
{
    const auto start = Clock::now();
    Check c;
    const std::vector<Method> sequential{Method::RLZero, Method::RLRandom, Method::Greedy, Method::Random};
    Rng pick(derive_seed(kMasterSeed, {0xACu}));
    int collected = 0;
    int violations = 0;
    int attempts = 0;
    while (collected < 1000 && attempts < 100000) {
        ++attempts;
        RunConfig cfg;
        cfg.method = sequential[pick.uniform_index(sequential.size())];
        cfg.subject_id = static_cast<int>(pick.uniform_index(pop.size()));
        cfg.target = 1 + static_cast<int>(pick.uniform_index(9));
        cfg.initial_kind = kAllInitialKinds[pick.uniform_index(kAllInitialKinds.size())];
        cfg.repeat_index = attempts;
        cfg.master_seed = kMasterSeed;
        cfg.options.record_sequence = false;
        const auto result = run_session(cfg, pop.at(cfg.subject_id));
        if (!result.success) {
            continue;
        }
        ++collected;
        const auto dist = bfs_distance(pop.at(cfg.subject_id), initial_state(cfg.initial_kind), cfg.target);
        if (!dist || result.spiders_presented < *dist + 1) {
            ++violations;
        }
    }
    c.require(collected == 1000, "only " + std::to_string(collected) + " successful runs");
    c.require(violations == 0, std::to_string(violations) + " violations");
    const double elapsed = seconds_since(start);
    c.require(elapsed < 60.0, "slower than 1 min");
    report(4, "oracle lower bound", c, elapsed,
           std::to_string(collected) + " successful runs, " + std::to_string(violations) + " violations");
}

const CellSummary* find_cell(const std::vector<CellSummary>& summaries, InitialKind k, StressCategory cat, Method m)
{
    for (const auto& s : summaries) {
        if (s.initial_kind == k && s.stress_category == cat && s.method == m) {
            return &s;
        }
    }
    return nullptr;
}

double mean_or_nan(const CellSummary* s)
{
    return s != nullptr && s->mean_presented ? *s->mean_presented : std::nan("");
}

void ga_corner(const SubjectPopulation& pop, const std::vector<GridRecord>& records, double grid_seconds)
{
    const auto start = Clock::now();
    Check c;
    int wrong_batches = 0;
    for (const auto& subject : pop.subjects) {
        RunConfig cfg;
        cfg.method = Method::GA;
        cfg.subject_id = subject.id;
        cfg.target = 1;
        cfg.initial_kind = InitialKind::Min;
        cfg.master_seed = kMasterSeed;
        const auto result = run_session(cfg, subject);
        const auto first_batch = std::count_if(result.presented_sequence.begin(), result.presented_sequence.end(),
                                               [](const Presentation& p) { return p.iteration == 0; });
        wrong_batches += first_batch == 7 ? 0 : 1;
    }
    c.require(wrong_batches == 0, std::to_string(wrong_batches) + " subjects with a first batch other than 7");

    double sum = 0.0;
    int n = 0;
    for (const auto& r : records) {
        if (r.coords.method == Method::GA && r.coords.initial_kind == InitialKind::Min && r.coords.target == 1 &&
            r.success) {
            sum += r.spiders_presented;
            ++n;
        }
    }
    const double mean = n > 0 ? sum / n : std::nan("");
    c.require(n > 0 && mean <= 10.0, fmt("GA mean at min/target 1 is %.3f", mean));
    report(5, "GA corner", c, seconds_since(start) + grid_seconds, fmt("first batch 7 for all subjects, mean %.3f", mean));
}

void directional(const std::vector<CellSummary>& summaries, double grid_seconds)
{
    Check c;
    std::string info;
    const std::pair<InitialKind, StressCategory> corners[] = {{InitialKind::Min, StressCategory::Low},
                                                              {InitialKind::Max, StressCategory::High}};
    for (const auto& [k, cat] : corners) {
        const double rl = mean_or_nan(find_cell(summaries, k, cat, Method::RLZero));
        const double ga = mean_or_nan(find_cell(summaries, k, cat, Method::GA));
        const double greedy = mean_or_nan(find_cell(summaries, k, cat, Method::Greedy));
        const std::string where = std::string(initial_kind_name(k)) + "/" + std::string(category_name(cat));
        c.require(rl < ga, where + ": RL_Zero not below GA");
        c.require(rl < greedy, where + ": RL_Zero not below Greedy");
        c.require(rl >= 2.0 && rl <= 9.0, where + fmt(": RL_Zero mean %.3f outside [2, 9]", rl));
        info += where + fmt(" rl_zero %.2f ga %.2f greedy %.2f; ", rl, ga, greedy);
    }
    double worst_ga = 100.0;
    for (const auto k : kAllInitialKinds) {
        for (const auto cat : {StressCategory::Low, StressCategory::Moderate}) {
            const auto* s = find_cell(summaries, k, cat, Method::GA);
            const double acc = s != nullptr ? s->accuracy_percent : 0.0;
            worst_ga = std::min(worst_ga, acc);
        }
    }
    c.require(worst_ga >= 90.0, fmt("GA accuracy %.2f%% below 90%%", worst_ga));
    info += fmt("lowest GA accuracy on low/moderate %.2f%%", worst_ga);
    c.require(grid_seconds < 600.0, "full grid slower than 10 min");
    report(6, "directional reproduction", c, grid_seconds, info);
}

struct Artifacts {
    std::string results_csv;
    std::string summary_csv;
    std::string summary_md;
    std::string comparison_csv;
};

Artifacts artifacts(const std::vector<GridRecord>& records)
{
    Artifacts a;
    std::ostringstream csv;
    write_results_csv(csv, records);
    a.results_csv = csv.str();
    const auto summaries = summarize(records);
    const auto comparisons = compare_cells(records, summaries);
    a.summary_csv = summary_csv(summaries, comparisons);
    a.summary_md = summary_markdown(summaries, comparisons);
    a.comparison_csv = comparison_csv(summaries, comparisons);
    return a;
}

void determinism(const SubjectPopulation& pop, const GridConfig& cfg, const Artifacts& single)
{
    const auto start = Clock::now();
    Check c;
    GridConfig parallel = cfg;
    parallel.workers = 4;
    const auto other = artifacts(run_grid(parallel, pop));
    c.require(other.results_csv == single.results_csv, "results CSV differs");
    c.require(other.summary_csv == single.summary_csv, "summary CSV differs");
    c.require(other.summary_md == single.summary_md, "summary markdown differs");
    c.require(other.comparison_csv == single.comparison_csv, "comparison CSV differs");
    report(7, "determinism across worker counts", c, seconds_since(start),
           "workers 1 vs 4, " + std::to_string(single.results_csv.size()) + " bytes of results");
}

void statistics_oracle()
{
    const auto start = Clock::now();
    Check c;
    const std::vector<double> a{1, 2, 3, 4, 5};
    const std::vector<double> zeros(5, 0.0);
    const auto r = paired_ttest(a, zeros);
    // mean 3, sample sd sqrt(2.5): t = 3 / sqrt(0.5).
    const double t_ref = 3.0 / std::sqrt(0.5);
    const boost::math::students_t dist(4.0);
    const double p_ref = 2.0 * boost::math::cdf(boost::math::complement(dist, t_ref));
    c.require(std::abs(r.t - t_ref) <= 1e-3, fmt("t = %.6f vs %.6f", r.t, t_ref));
    c.require(std::abs(r.p - p_ref) <= 1e-3, fmt("p = %.6f vs %.6f", r.p, p_ref));
    const std::vector<double> b{3.5, 4.0, 6.25, 2.0, 5.5, 7.0};
    const auto same = paired_ttest(b, b);
    c.require(same.t == 0.0 && same.p == 1.0, fmt("identical samples gave t = %g, p = %g", same.t, same.p));
    report(8, "statistics oracle", c, seconds_since(start),
           fmt("t=%.4f p=%.4f (reference p=%.4f)", r.t, r.p, p_ref));
}

} // namespace

int main()
{
    reward_identities();
    state_structure();
    subject_scaling();

    const auto pop = generate_population(100, kPopulationSeed);
    oracle_lower_bound(pop);

    GridConfig cfg;
    cfg.master_seed = kMasterSeed;
    cfg.workers = 1;
    const auto grid_start = Clock::now();
    const auto records = run_grid(cfg, pop);
    const double grid_seconds = seconds_since(grid_start);
    const auto single = artifacts(records);
    const auto summaries = summarize(records);

    ga_corner(pop, records, grid_seconds);
    directional(summaries, grid_seconds);
    determinism(pop, cfg, single);
    statistics_oracle();

    std::printf("%s: %d of 8 criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
    std::printf("\nSummary (pooled std, %zu runs):\n%s", records.size(), single.summary_md.c_str());
    return failures == 0 ? 0 : 1;
}
