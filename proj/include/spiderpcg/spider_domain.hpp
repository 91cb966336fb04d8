#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace spiderpcg {

inline constexpr std::size_t kAttributeCount = 6;
inline constexpr std::size_t kStateCount = 486;
inline constexpr std::size_t kNominalActionCount = 2 * kAttributeCount;

/// Canonical attribute order. Serialization and Q-table indexing depend on it.
enum class Attribute : std::uint8_t {
    Locomotion = 0,
    AmountOfMovement = 1,
    Closeness = 2,
    Largeness = 3,
    Hairiness = 4,
    Color = 5,
};

struct AttributeSpec {
    std::string_view name;
    int min_value;
    int max_value;
    double impact_mean;
    double impact_std;

    constexpr int range_size() const { return max_value - min_value + 1; }
};

/// The six spider attributes with their fear impact factors (mean, std).
const std::array<AttributeSpec, kAttributeCount>& attribute_table();

const AttributeSpec& attribute_spec(Attribute a);

/// One spider configuration: an ordinal value per attribute. Always valid;
/// construction from out-of-range values throws std::invalid_argument.
class SpiderState {
public:
    using Values = std::array<int, kAttributeCount>;

    SpiderState() = default;
    explicit SpiderState(const Values& values);

    static bool is_valid(const Values& values);

    static SpiderState minimum();
    static SpiderState maximum();
    /// Midpoint of every range; binary hairiness takes the lower midpoint 0.
    static SpiderState average();

    /// Inverse of index(). Throws std::out_of_range for index >= kStateCount.
    static SpiderState from_index(std::size_t index);

    /// Lexicographic (mixed-radix) position in [0, kStateCount).
    std::size_t index() const;

    int operator[](std::size_t i) const { return values_[i]; }
    int value(Attribute a) const { return values_[static_cast<std::size_t>(a)]; }
    const Values& values() const { return values_; }

    std::string to_string() const;

    auto operator<=>(const SpiderState&) const = default;

private:
    Values values_{};
};

struct Action {
    std::uint8_t attribute = 0;
    std::int8_t direction = 1;

    /// Position in the 12 nominal actions: attribute ascending, -1 before +1.
    std::size_t nominal_index() const { return 2 * std::size_t{attribute} + (direction > 0 ? 1 : 0); }
    static Action from_nominal_index(std::size_t index);

    Action inverse() const { return Action{attribute, static_cast<std::int8_t>(-direction)}; }

    auto operator<=>(const Action&) const = default;
};

bool is_valid_action(const SpiderState& state, const Action& action);

/// Actions that keep every attribute in range, in canonical order.
std::vector<Action> valid_actions(const SpiderState& state);

/// Throws std::invalid_argument when the action would leave the range.
SpiderState apply_action(const SpiderState& state, const Action& action);

std::vector<SpiderState> neighbors(const SpiderState& state);

/// All valid states in lexicographic order; enumerate_states()[k].index() == k.
const std::vector<SpiderState>& enumerate_states();

void to_json(nlohmann::json& j, const SpiderState& s);
void from_json(const nlohmann::json& j, SpiderState& s);

} // namespace spiderpcg
