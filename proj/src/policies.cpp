#include "spiderpcg/policies.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace spiderpcg {

namespace {

struct MethodInfo {
    Method method;
    std::string_view name;
    std::string_view label;
};

constexpr std::array<MethodInfo, 5> kMethodInfo{{
    {Method::Random, "random", "Random"},
    {Method::Greedy, "greedy", "Greedy"},
    {Method::GA, "ga", "GA"},
    {Method::RLRandom, "rl_random", "RL_Random"},
    {Method::RLZero, "rl_zero", "RL_Zero"},
}};

} // namespace

std::string_view method_name(Method m)
{
    return kMethodInfo[static_cast<std::size_t>(m)].name;
}

std::string_view method_label(Method m)
{
    return kMethodInfo[static_cast<std::size_t>(m)].label;
}

Method parse_method(std::string_view name)
{
    for (const auto& info : kMethodInfo) {
        if (info.name == name) {
            return info.method;
        }
    }
    throw std::invalid_argument("unknown method '" + std::string(name)
                                + "' (expected rl_zero, rl_random, ga, greedy or random)");
}

bool is_sequential(Method m)
{
    return m != Method::GA;
}

void RLConfig::validate() const
{
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw std::invalid_argument("epsilon must be in [0, 1]");
    }
    if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
        throw std::invalid_argument("learning_rate must be in (0, 1]");
    }
    if (!(discount >= 0.0 && discount <= 1.0)) {
        throw std::invalid_argument("discount must be in [0, 1]");
    }
}

void GAConfig::validate() const
{
    if (population_size < 2) {
        throw std::invalid_argument("GA population_size must be at least 2");
    }
    if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0)) {
        throw std::invalid_argument("GA mutation_prob must be in [0, 1]");
    }
    if (pairs_per_generation < 1) {
        throw std::invalid_argument("GA pairs_per_generation must be at least 1");
    }
    if (children_per_pair != 1 && children_per_pair != 2) {
        throw std::invalid_argument("GA children_per_pair must be 1 or 2");
    }
}

// --- Q-learning ---------------------------------------------------------------

QTable QTable::zeros()
{
    return QTable();
}

QTable QTable::uniform(Rng& rng)
{
    QTable q;
    for (double& v : q.values_) {
        v = rng.uniform01();
    }
    return q;
}

QTable QTable::make(QInit mode, Rng& rng)
{
    return mode == QInit::Zero ? zeros() : uniform(rng);
}

double QTable::max_value(const SpiderState& s) const
{
    double best = -std::numeric_limits<double>::infinity();
    for (const Action& a : valid_actions(s)) {
        best = std::max(best, get(s, a));
    }
    return best;
}

Action rl_select_action(const QTable& q, const SpiderState& state, double epsilon, Rng& rng)
{
    const std::vector<Action> actions = valid_actions(state);
    if (rng.uniform01() < epsilon) {
        return actions[rng.uniform_index(actions.size())];
    }
    double best = -std::numeric_limits<double>::infinity();
    std::vector<Action> argmax;
    for (const Action& a : actions) {
        const double v = q.get(state, a);
        if (v > best) {
            best = v;
            argmax.clear();
        }
        if (v == best) {
            argmax.push_back(a);
        }
    }
    return argmax.size() == 1 ? argmax.front() : argmax[rng.uniform_index(argmax.size())];
}

void rl_update(QTable& q, const SpiderState& s, const Action& a, double r, const SpiderState& next,
               const RLConfig& cfg)
{
    if (!is_valid_action(s, a)) {
        throw std::invalid_argument("rl_update: action not valid in state " + s.to_string());
    }
    const double old = q.get(s, a);
    const double target = r + cfg.discount * q.max_value(next);
    q.set(s, a, old + cfg.learning_rate * (target - old));
}

// --- GA -----------------------------------------------------------------------

double state_fitness(const VirtualSubject& subject, const SpiderState& state, const RewardSpec& spec)
{
    return fitness(stress(subject, state), spec);
}

namespace {

// Stable descending order of fitness.
std::vector<std::size_t> rank_by_fitness(std::span<const double> fitnesses)
{
    std::vector<std::size_t> order(fitnesses.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fitnesses[a] > fitnesses[b]; });
    return order;
}

} // namespace

std::vector<SpiderState> ga_initial_population(const SpiderState& initial, const FitnessFn& fitness,
                                               int population_size)
{
    std::vector<SpiderState> candidates{initial};
    for (const SpiderState& n : neighbors(initial)) {
        candidates.push_back(n);
    }
    if (candidates.size() <= static_cast<std::size_t>(population_size)) {
        return candidates;
    }
    std::vector<double> fit;
    fit.reserve(candidates.size());
    for (const SpiderState& c : candidates) {
        fit.push_back(fitness(c));
    }
    std::vector<SpiderState> kept;
    for (std::size_t idx : rank_by_fitness(fit)) {
        if (kept.size() == static_cast<std::size_t>(population_size)) {
            break;
        }
        kept.push_back(candidates[idx]);
    }
    return kept;
}

std::vector<SpiderState> ga_initial_population(const SpiderState& initial, const VirtualSubject& subject,
                                               const RewardSpec& spec, int population_size)
{
    return ga_initial_population(
        initial, [&](const SpiderState& s) { return state_fitness(subject, s, spec); }, population_size);
}

std::pair<SpiderState, SpiderState> midpoint_crossover(const SpiderState& a, const SpiderState& b)
{
    constexpr std::size_t half = kAttributeCount / 2;
    SpiderState::Values first{};
    SpiderState::Values second{};
    for (std::size_t i = 0; i < kAttributeCount; ++i) {
        first[i] = i < half ? a[i] : b[i];
        second[i] = i < half ? b[i] : a[i];
    }
    return {SpiderState(first), SpiderState(second)};
}

SpiderState mutate(const SpiderState& s, double prob, Rng& rng)
{
    if (!rng.bernoulli(prob)) {
        return s;
    }
    const std::size_t attr = rng.uniform_index(kAttributeCount);
    const AttributeSpec& spec = attribute_table()[attr];
    SpiderState::Values v = s.values();
    v[attr] = spec.min_value + static_cast<int>(rng.uniform_index(static_cast<std::size_t>(spec.range_size())));
    return SpiderState(v);
}

std::size_t fitness_proportional_pick(std::span<const double> fitnesses, Rng& rng,
                                      std::optional<std::size_t> excluded)
{
    if (fitnesses.empty()) {
        throw std::invalid_argument("cannot sample from an empty population");
    }
    std::vector<std::size_t> eligible;
    double total = 0.0;
    for (std::size_t i = 0; i < fitnesses.size(); ++i) {
        if (excluded && *excluded == i && fitnesses.size() > 1) {
            continue;
        }
        eligible.push_back(i);
        total += std::max(0.0, fitnesses[i] + 1.0);
    }
    if (!(total > 0.0)) {
        return eligible[rng.uniform_index(eligible.size())];
    }
    const double u = rng.uniform01() * total;
    double acc = 0.0;
    for (std::size_t i : eligible) {
        const double w = std::max(0.0, fitnesses[i] + 1.0);
        acc += w;
        if (u < acc && w > 0.0) {
            return i;
        }
    }
    // Rounding left u at the top edge: take the last positive-weight entry.
    for (auto it = eligible.rbegin(); it != eligible.rend(); ++it) {
        if (fitnesses[*it] + 1.0 > 0.0) {
            return *it;
        }
    }
    return eligible.back();
}

std::vector<SpiderState> ga_generation(std::span<const SpiderState> population, std::span<const double> fitnesses,
                                       const GAConfig& cfg, Rng& rng)
{
    if (population.empty() || population.size() != fitnesses.size()) {
        throw std::invalid_argument("ga_generation: population and fitnesses must be nonempty and aligned");
    }
    std::vector<SpiderState> offspring;
    offspring.reserve(static_cast<std::size_t>(cfg.offspring_per_generation()));
    for (int pair = 0; pair < cfg.pairs_per_generation; ++pair) {
        const std::size_t first = fitness_proportional_pick(fitnesses, rng);
        const std::size_t second = fitness_proportional_pick(fitnesses, rng, first);
        auto [child_a, child_b] = midpoint_crossover(population[first], population[second]);
        offspring.push_back(mutate(child_a, cfg.mutation_prob, rng));
        if (cfg.children_per_pair == 2) {
            offspring.push_back(mutate(child_b, cfg.mutation_prob, rng));
        }
    }
    return offspring;
}

std::vector<SpiderState> ga_select(std::span<const SpiderState> pool, std::span<const double> fitnesses,
                                   const GAConfig& cfg)
{
    if (pool.empty() || pool.size() != fitnesses.size()) {
        throw std::invalid_argument("ga_select: pool and fitnesses must be nonempty and aligned");
    }
    const std::size_t keep = std::min(static_cast<std::size_t>(cfg.population_size), pool.size());
    std::vector<SpiderState> next;
    next.reserve(keep);
    for (std::size_t idx : rank_by_fitness(fitnesses)) {
        if (next.size() == keep) {
            break;
        }
        next.push_back(pool[idx]);
    }
    return next;
}

// --- greedy / random ----------------------------------------------------------

std::size_t best_neighbor_index(const SpiderState& current, const FitnessFn& fitness)
{
    const std::vector<SpiderState> ns = neighbors(current);
    std::size_t best = 0;
    double best_fit = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const double f = fitness(ns[i]);
        if (f > best_fit) {
            best_fit = f;
            best = i;
        }
    }
    return best;
}

SpiderState greedy_step(const SpiderState& current, const VirtualSubject& subject, const RewardSpec& spec)
{
    const std::size_t idx
        = best_neighbor_index(current, [&](const SpiderState& s) { return state_fitness(subject, s, spec); });
    return neighbors(current)[idx];
}

SpiderState random_step(const SpiderState& current, Rng& rng)
{
    const std::vector<Action> actions = valid_actions(current);
    return apply_action(current, actions[rng.uniform_index(actions.size())]);
}

// --- policy objects -------------------------------------------------------------

namespace {

std::optional<SpiderState> present_single(const SpiderState& s, Presenter& presenter)
{
    return presenter.present(s).success ? std::optional<SpiderState>(s) : std::nullopt;
}

class QLearningPolicy final : public Policy {
public:
    QLearningPolicy(QInit init, const RLConfig& cfg, Rng& rng, QTable* shared)
        : cfg_(cfg), rng_(rng), owned_(shared ? std::nullopt : std::optional<QTable>(QTable::make(init, rng))),
          q_(shared ? *shared : *owned_)
    {
    }

    std::optional<SpiderState> start(const SpiderState& initial, Presenter& presenter) override
    {
        current_ = initial;
        return present_single(initial, presenter);
    }

    std::optional<SpiderState> step(Presenter& presenter) override
    {
        const Action a = rl_select_action(q_, current_, cfg_.epsilon, rng_);
        const SpiderState next = apply_action(current_, a);
        const Evaluation ev = presenter.present(next);
        rl_update(q_, current_, a, ev.fitness, next, cfg_);
        current_ = next;
        return ev.success ? std::optional<SpiderState>(next) : std::nullopt;
    }

    SpiderState current() const override { return current_; }

private:
    RLConfig cfg_;
    Rng& rng_;
    std::optional<QTable> owned_;
    QTable& q_;
    SpiderState current_;
};

class GreedyPolicy final : public Policy {
public:
    std::optional<SpiderState> start(const SpiderState& initial, Presenter& presenter) override
    {
        current_ = initial;
        return present_single(initial, presenter);
    }

    std::optional<SpiderState> step(Presenter& presenter) override
    {
        // Neighbours are shown in canonical order while being ranked.
        std::optional<SpiderState> hit;
        const std::size_t best = best_neighbor_index(current_, [&](const SpiderState& s) {
            if (hit) {
                return -std::numeric_limits<double>::infinity();
            }
            const Evaluation ev = presenter.present(s);
            if (ev.success) {
                hit = s;
            }
            return ev.fitness;
        });
        if (hit) {
            return hit;
        }
        current_ = neighbors(current_)[best];
        return std::nullopt;
    }

    SpiderState current() const override { return current_; }

private:
    SpiderState current_;
};

class RandomPolicy final : public Policy {
public:
    explicit RandomPolicy(Rng& rng) : rng_(rng) {}

    std::optional<SpiderState> start(const SpiderState& initial, Presenter& presenter) override
    {
        current_ = initial;
        return present_single(initial, presenter);
    }

    std::optional<SpiderState> step(Presenter& presenter) override
    {
        current_ = random_step(current_, rng_);
        return present_single(current_, presenter);
    }

    SpiderState current() const override { return current_; }

private:
    Rng& rng_;
    SpiderState current_;
};

class GeneticPolicy final : public Policy {
public:
    GeneticPolicy(const GAConfig& cfg, Rng& rng) : cfg_(cfg), rng_(rng) {}

    std::optional<SpiderState> start(const SpiderState& initial, Presenter& presenter) override
    {
        population_ = ga_initial_population(
            initial, [&](const SpiderState& s) { return presenter.assess(s).fitness; }, cfg_.population_size);
        fitnesses_.clear();
        return present_batch(population_, fitnesses_, presenter);
    }

    std::optional<SpiderState> step(Presenter& presenter) override
    {
        const std::vector<SpiderState> offspring = ga_generation(population_, fitnesses_, cfg_, rng_);
        std::vector<double> offspring_fit;
        if (auto hit = present_batch(offspring, offspring_fit, presenter)) {
            return hit;
        }
        std::vector<SpiderState> pool = population_;
        pool.insert(pool.end(), offspring.begin(), offspring.end());
        std::vector<double> pool_fit = fitnesses_;
        pool_fit.insert(pool_fit.end(), offspring_fit.begin(), offspring_fit.end());

        population_ = ga_select(pool, pool_fit, cfg_);
        fitnesses_.clear();
        for (const SpiderState& s : population_) {
            fitnesses_.push_back(presenter.assess(s).fitness);
        }
        return std::nullopt;
    }

    SpiderState current() const override
    {
        const auto it = std::max_element(fitnesses_.begin(), fitnesses_.end());
        return population_[static_cast<std::size_t>(it - fitnesses_.begin())];
    }

private:
    // Success is checked once the batch is complete, unless per-member stop is on.
    std::optional<SpiderState> present_batch(const std::vector<SpiderState>& batch, std::vector<double>& fit,
                                             Presenter& presenter)
    {
        std::optional<SpiderState> hit;
        for (const SpiderState& s : batch) {
            const Evaluation ev = presenter.present(s);
            fit.push_back(ev.fitness);
            if (ev.success && !hit) {
                hit = s;
                if (cfg_.per_member_early_stop) {
                    break;
                }
            }
        }
        return hit;
    }

    GAConfig cfg_;
    Rng& rng_;
    std::vector<SpiderState> population_;
    std::vector<double> fitnesses_;
};

} // namespace

std::unique_ptr<Policy> make_policy(Method method, const RLConfig& rl, const GAConfig& ga, Rng& rng,
                                    QTable* shared_table)
{
    switch (method) {
    case Method::RLZero:
        return std::make_unique<QLearningPolicy>(QInit::Zero, rl, rng, shared_table);
    case Method::RLRandom:
        return std::make_unique<QLearningPolicy>(QInit::Random, rl, rng, shared_table);
    case Method::GA:
        return std::make_unique<GeneticPolicy>(ga, rng);
    case Method::Greedy:
        return std::make_unique<GreedyPolicy>();
    case Method::Random:
        return std::make_unique<RandomPolicy>(rng);
    }
    throw std::invalid_argument("unknown method");
}

} // namespace spiderpcg
