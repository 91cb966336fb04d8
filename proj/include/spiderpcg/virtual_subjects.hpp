#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spiderpcg/rng.hpp"
#include "spiderpcg/spider_domain.hpp"

namespace spiderpcg {

/// A synthetic participant: stress = coefficient * sum_i weights[i] * a_i.
struct VirtualSubject {
    int id = 0;
    std::array<double, kAttributeCount> weights{};
    double coefficient = 1.0;

    /// Builds a subject whose stress spans exactly [0, 10] over all states.
    static VirtualSubject from_weights(int id, const std::array<double, kAttributeCount>& weights);

    bool operator==(const VirtualSubject&) const = default;
};

struct SubjectPopulation {
    std::uint64_t seed = 0;
    std::vector<VirtualSubject> subjects;

    /// Throws std::out_of_range for an unknown id.
    const VirtualSubject& at(int id) const;
    std::size_t size() const { return subjects.size(); }

    bool operator==(const SubjectPopulation&) const = default;
};

/// Draws each weight from N(impact_mean, impact_std), redrawing negatives.
VirtualSubject sample_subject(int id, Rng& rng);

/// Stress in [0, 10]. Deterministic and linear in every attribute.
double stress(const VirtualSubject& subject, const SpiderState& state);

/// Subject i is drawn from a stream derived from (seed, i).
/// Throws std::invalid_argument for n == 0.
SubjectPopulation generate_population(std::size_t n, std::uint64_t seed);

/// Brute force over all states: every state whose stress rounds to target.
std::vector<SpiderState> success_states(const VirtualSubject& subject, int target);

/// Fewest +-1 moves from initial to any success state; nullopt if none exist.
std::optional<int> bfs_distance(const VirtualSubject& subject, const SpiderState& initial, int target);

// Subjects file: {"seed": u64, "subjects": [{"id", "weights", "coefficient"}]}
std::string subjects_to_json(const SubjectPopulation& population);
/// Throws std::runtime_error on malformed input or violated subject invariants.
SubjectPopulation subjects_from_json(std::string_view text);

void save_subjects(const SubjectPopulation& population, const std::filesystem::path& path);
SubjectPopulation load_subjects(const std::filesystem::path& path);

} // namespace spiderpcg
