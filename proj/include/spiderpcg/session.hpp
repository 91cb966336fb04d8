#pragma once

#include <cstdint>
#include <ostream>
#include <string_view>
#include <vector>

#include "spiderpcg/policies.hpp"
#include "spiderpcg/spider_domain.hpp"
#include "spiderpcg/virtual_subjects.hpp"

namespace spiderpcg {

enum class InitialKind { Min = 0, Avg = 1, Max = 2 };

inline constexpr std::array<InitialKind, 3> kAllInitialKinds{InitialKind::Min, InitialKind::Avg, InitialKind::Max};

std::string_view initial_kind_name(InitialKind k);
/// Throws std::invalid_argument for anything but min | avg | max.
InitialKind parse_initial_kind(std::string_view name);
SpiderState initial_state(InitialKind k);

/// Everything about a session except its grid coordinates.
struct SessionOptions {
    int iteration_cap = 100;
    RLConfig rl;
    GAConfig ga;
    bool reward_on_rounded_stress = false;
    /// Keep the per-presentation trace in RunResult::presented_sequence.
    bool record_sequence = true;

    void validate() const;
};

struct RunConfig {
    Method method = Method::RLZero;
    int subject_id = 0;
    int target = 1;
    InitialKind initial_kind = InitialKind::Min;
    int repeat_index = 0;
    std::uint64_t master_seed = 0;
    SessionOptions options;

    /// Seed of the run's private random stream, derived from the coordinates.
    std::uint64_t run_seed() const;
};

struct Presentation {
    SpiderState state;
    double stress = 0.0;
    double reward = 0.0;
    int iteration = 0;
};

struct RunResult {
    bool success = false;
    int spiders_presented = 0;
    int iterations_used = 0;
    SpiderState final_state;
    /// Distinct states in first-presentation order (empty unless record_sequence).
    std::vector<Presentation> presented_sequence;
};

/// Runs one adaptation session. Throws std::invalid_argument when the
/// subject does not match cfg.subject_id or the config is invalid.
RunResult run_session(const RunConfig& cfg, const VirtualSubject& subject);

/// Same, but RL methods learn into `shared_table` instead of a fresh table.
RunResult run_session(const RunConfig& cfg, const VirtualSubject& subject, QTable& shared_table);

/// JSON lines, one object per presented spider: {state, stress, reward, iteration}.
/// A non-negative subject_id is added to every line.
void write_trace(std::ostream& out, const RunResult& result, int subject_id = -1);

} // namespace spiderpcg
