#include "spiderpcg/session.hpp"

#include <array>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "spiderpcg/reward_model.hpp"

namespace spiderpcg {

namespace {

constexpr std::uint64_t kRunStreamTag = 0x7u;

class SessionPresenter final : public Presenter {
public:
    SessionPresenter(const VirtualSubject& subject, const RewardSpec& spec, RunResult& result, bool record)
        : subject_(subject), spec_(spec), result_(result), record_(record)
    {
        seen_.fill(false);
    }

    Evaluation present(const SpiderState& state) override
    {
        const std::size_t idx = state.index();
        if (seen_[idx]) {
            return cache_[idx];
        }
        const Evaluation ev = assess(state);
        seen_[idx] = true;
        cache_[idx] = ev;
        ++result_.spiders_presented;
        if (record_) {
            result_.presented_sequence.push_back(Presentation{state, ev.stress, ev.fitness, iteration_});
        }
        return ev;
    }

    Evaluation assess(const SpiderState& state) const override
    {
        const double x = stress(subject_, state);
        return Evaluation{x, fitness(x, spec_), is_success(x, spec_.target)};
    }

    void set_iteration(int it) { iteration_ = it; }

private:
    const VirtualSubject& subject_;
    RewardSpec spec_;
    RunResult& result_;
    bool record_;
    int iteration_ = 0;
    std::array<bool, kStateCount> seen_{};
    std::array<Evaluation, kStateCount> cache_{};
};

RunResult run_impl(const RunConfig& cfg, const VirtualSubject& subject, QTable* shared)
{
    if (subject.id != cfg.subject_id) {
        throw std::invalid_argument("subject id " + std::to_string(subject.id) + " does not match run subject "
                                    + std::to_string(cfg.subject_id));
    }
    cfg.options.validate();
    const RewardSpec spec = RewardSpec::for_target(cfg.target, cfg.options.reward_on_rounded_stress);

    RunResult result;
    SessionPresenter presenter(subject, spec, result, cfg.options.record_sequence);
    Rng rng(cfg.run_seed());
    auto policy = make_policy(cfg.method, cfg.options.rl, cfg.options.ga, rng, shared);

    if (auto hit = policy->start(initial_state(cfg.initial_kind), presenter)) {
        result.success = true;
        result.final_state = *hit;
        return result;
    }
    for (int it = 1; it <= cfg.options.iteration_cap; ++it) {
        presenter.set_iteration(it);
        result.iterations_used = it;
        if (auto hit = policy->step(presenter)) {
            result.success = true;
            result.final_state = *hit;
            return result;
        }
    }
    result.final_state = policy->current();
    return result;
}

} // namespace

std::string_view initial_kind_name(InitialKind k)
{
    switch (k) {
    case InitialKind::Min:
        return "min";
    case InitialKind::Avg:
        return "avg";
    case InitialKind::Max:
        return "max";
    }
    return "?";
}

InitialKind parse_initial_kind(std::string_view name)
{
    for (InitialKind k : kAllInitialKinds) {
        if (initial_kind_name(k) == name) {
            return k;
        }
    }
    throw std::invalid_argument("unknown initial state '" + std::string(name) + "' (expected min, avg or max)");
}

SpiderState initial_state(InitialKind k)
{
    switch (k) {
    case InitialKind::Min:
        return SpiderState::minimum();
    case InitialKind::Avg:
        return SpiderState::average();
    case InitialKind::Max:
        return SpiderState::maximum();
    }
    throw std::invalid_argument("unknown initial kind");
}

void SessionOptions::validate() const
{
    if (iteration_cap < 0) {
        throw std::invalid_argument("iteration_cap must be non-negative");
    }
    rl.validate();
    ga.validate();
}

std::uint64_t RunConfig::run_seed() const
{
    return derive_seed(master_seed,
                       {kRunStreamTag, static_cast<std::uint64_t>(method), static_cast<std::uint64_t>(subject_id),
                        static_cast<std::uint64_t>(target), static_cast<std::uint64_t>(initial_kind),
                        static_cast<std::uint64_t>(repeat_index)});
}

RunResult run_session(const RunConfig& cfg, const VirtualSubject& subject)
{
    return run_impl(cfg, subject, nullptr);
}

RunResult run_session(const RunConfig& cfg, const VirtualSubject& subject, QTable& shared_table)
{
    return run_impl(cfg, subject, &shared_table);
}

void write_trace(std::ostream& out, const RunResult& result, int subject_id)
{
    for (const Presentation& p : result.presented_sequence) {
        nlohmann::ordered_json line;
        if (subject_id >= 0) {
            line["subject_id"] = subject_id;
        }
        line["state"] = p.state.values();
        line["stress"] = p.stress;
        line["reward"] = p.reward;
        line["iteration"] = p.iteration;
        out << line.dump() << '\n';
    }
}

} // namespace spiderpcg
