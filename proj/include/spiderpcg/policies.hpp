#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "spiderpcg/reward_model.hpp"
#include "spiderpcg/rng.hpp"
#include "spiderpcg/spider_domain.hpp"
#include "spiderpcg/virtual_subjects.hpp"

namespace spiderpcg {

/// Adaptation methods, in report column order.
enum class Method { Random = 0, Greedy = 1, GA = 2, RLRandom = 3, RLZero = 4 };

inline constexpr std::array<Method, 5> kAllMethods{Method::Random, Method::Greedy, Method::GA, Method::RLRandom,
                                                   Method::RLZero};

/// CLI name: random | greedy | ga | rl_random | rl_zero.
std::string_view method_name(Method m);
/// Report label: Random | Greedy | GA | RL_Random | RL_Zero.
std::string_view method_label(Method m);
/// Throws std::invalid_argument for an unknown name.
Method parse_method(std::string_view name);

bool is_sequential(Method m);

enum class QInit { Zero, Random };

struct RLConfig {
    double epsilon = 0.05;
    double learning_rate = 0.1;
    double discount = 0.9;
    QInit init_mode = QInit::Zero;
    /// Share one table across the subjects of a grid group instead of a fresh table per run.
    bool persist_qtable = false;

    void validate() const;
};

struct GAConfig {
    int population_size = 10;
    double mutation_prob = 0.1;
    int pairs_per_generation = 2;
    /// 2: both crossover children per pair; 1: only the first child.
    int children_per_pair = 2;
    /// Stop presenting a batch at its first successful member.
    bool per_member_early_stop = false;

    void validate() const;
    int offspring_per_generation() const { return pairs_per_generation * children_per_pair; }
};

/// Dense Q-values over (state index, nominal action index).
class QTable {
public:
    static QTable zeros();
    /// i.i.d. uniform on [0, 1).
    static QTable uniform(Rng& rng);
    static QTable make(QInit mode, Rng& rng);

    double get(const SpiderState& s, const Action& a) const { return values_[slot(s, a)]; }
    void set(const SpiderState& s, const Action& a, double v) { values_[slot(s, a)] = v; }

    /// Max over the actions valid in s.
    double max_value(const SpiderState& s) const;

    std::span<const double> raw() const { return values_; }

    bool operator==(const QTable&) const = default;

private:
    QTable() : values_(kStateCount * kNominalActionCount, 0.0) {}
    static std::size_t slot(const SpiderState& s, const Action& a)
    {
        return s.index() * kNominalActionCount + a.nominal_index();
    }

    std::vector<double> values_;
};

/// Epsilon-greedy over valid actions; argmax ties broken uniformly at random.
Action rl_select_action(const QTable& q, const SpiderState& state, double epsilon, Rng& rng);

/// One-step Q-learning update of the single entry Q(s, a).
void rl_update(QTable& q, const SpiderState& s, const Action& a, double r, const SpiderState& next,
               const RLConfig& cfg);

using FitnessFn = std::function<double(const SpiderState&)>;

/// Fitness (reward of stress) of a state for a subject and target.
double state_fitness(const VirtualSubject& subject, const SpiderState& state, const RewardSpec& spec);

/// The initial state followed by its neighbours; trimmed to the
/// population_size fittest (stable) when there are more candidates.
std::vector<SpiderState> ga_initial_population(const SpiderState& initial, const FitnessFn& fitness,
                                               int population_size = 10);
std::vector<SpiderState> ga_initial_population(const SpiderState& initial, const VirtualSubject& subject,
                                               const RewardSpec& spec, int population_size = 10);

/// Child A: first half of a, second half of b. Child B: the converse.
std::pair<SpiderState, SpiderState> midpoint_crossover(const SpiderState& a, const SpiderState& b);

/// With probability prob, sets one random attribute to a random in-range value.
SpiderState mutate(const SpiderState& s, double prob, Rng& rng);

/// Index drawn proportionally to fitness + 1, skipping `excluded` if given.
/// Falls back to uniform when every eligible weight is zero.
std::size_t fitness_proportional_pick(std::span<const double> fitnesses, Rng& rng,
                                      std::optional<std::size_t> excluded = std::nullopt);

/// Selection, crossover and mutation for one generation. Returns
/// pairs_per_generation * children_per_pair offspring.
std::vector<SpiderState> ga_generation(std::span<const SpiderState> population, std::span<const double> fitnesses,
                                       const GAConfig& cfg, Rng& rng);

/// The min(population_size, pool size) fittest; ties keep pool order.
std::vector<SpiderState> ga_select(std::span<const SpiderState> pool, std::span<const double> fitnesses,
                                   const GAConfig& cfg);

/// Index into neighbors(current) of the fittest neighbour; first wins ties.
std::size_t best_neighbor_index(const SpiderState& current, const FitnessFn& fitness);

SpiderState greedy_step(const SpiderState& current, const VirtualSubject& subject, const RewardSpec& spec);

SpiderState random_step(const SpiderState& current, Rng& rng);

// --- stepping interface ---------------------------------------------------

struct Evaluation {
    double stress = 0.0;
    double fitness = 0.0;
    bool success = false;
};

/// Session-side gateway through which policies show spiders to the subject.
class Presenter {
public:
    virtual ~Presenter() = default;
    /// Shows the spider (counted once per distinct state) and returns its evaluation.
    virtual Evaluation present(const SpiderState& state) = 0;
    /// Evaluates without presenting. Only the GA uses it, to rank an oversized initial population.
    virtual Evaluation assess(const SpiderState& state) const = 0;
};

class Policy {
public:
    virtual ~Policy() = default;

    /// Presents the starting content. Returns the success state if one was hit.
    virtual std::optional<SpiderState> start(const SpiderState& initial, Presenter& presenter) = 0;
    /// One iteration: one action, or one generation for the GA.
    virtual std::optional<SpiderState> step(Presenter& presenter) = 0;
    /// Current state (the GA reports its fittest chromosome).
    virtual SpiderState current() const = 0;
};

/// `shared_table`, if given, is used (and mutated) by RL methods instead of a fresh table.
std::unique_ptr<Policy> make_policy(Method method, const RLConfig& rl, const GAConfig& ga, Rng& rng,
                                    QTable* shared_table = nullptr);

} // namespace spiderpcg
