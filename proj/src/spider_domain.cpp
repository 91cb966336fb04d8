#include "spiderpcg/spider_domain.hpp"

#include <sstream>
#include <stdexcept>

namespace spiderpcg {

namespace {

constexpr std::array<AttributeSpec, kAttributeCount> kAttributes{{
    {"locomotion", 0, 2, 0.9, 0.15},
    {"amount_of_movement", 0, 2, 0.9, 0.15},
    {"closeness", 0, 2, 0.4, 0.17},
    {"largeness", 0, 2, 0.7, 0.16},
    {"hairiness", 0, 1, 0.6, 0.21},
    {"color", 0, 2, 0.5, 0.20},
}};

// Mixed-radix strides, first attribute most significant.
constexpr std::array<std::size_t, kAttributeCount> make_strides()
{
    std::array<std::size_t, kAttributeCount> strides{};
    std::size_t stride = 1;
    for (std::size_t i = kAttributeCount; i-- > 0;) {
        strides[i] = stride;
        stride *= static_cast<std::size_t>(kAttributes[i].range_size());
    }
    return strides;
}

constexpr auto kStrides = make_strides();

static_assert(kStrides[0] * kAttributes[0].range_size() == kStateCount);

} // namespace

const std::array<AttributeSpec, kAttributeCount>& attribute_table()
{
    return kAttributes;
}

const AttributeSpec& attribute_spec(Attribute a)
{
    return kAttributes[static_cast<std::size_t>(a)];
}

SpiderState::SpiderState(const Values& values) : values_(values)
{
    if (!is_valid(values)) {
        std::ostringstream os;
        os << "invalid spider state (";
        for (std::size_t i = 0; i < kAttributeCount; ++i) {
            os << (i ? "," : "") << values[i];
        }
        os << ")";
        throw std::invalid_argument(os.str());
    }
}

bool SpiderState::is_valid(const Values& values)
{
    for (std::size_t i = 0; i < kAttributeCount; ++i) {
        if (values[i] < kAttributes[i].min_value || values[i] > kAttributes[i].max_value) {
            return false;
        }
    }
    return true;
}

SpiderState SpiderState::minimum()
{
    Values v{};
    for (std::size_t i = 0; i < kAttributeCount; ++i) {
        v[i] = kAttributes[i].min_value;
    }
    return SpiderState(v);
}

SpiderState SpiderState::maximum()
{
    Values v{};
    for (std::size_t i = 0; i < kAttributeCount; ++i) {
        v[i] = kAttributes[i].max_value;
    }
    return SpiderState(v);
}

SpiderState SpiderState::average()
{
    Values v{};
    for (std::size_t i = 0; i < kAttributeCount; ++i) {
        v[i] = (kAttributes[i].min_value + kAttributes[i].max_value) / 2;
    }
    return SpiderState(v);
}

SpiderState SpiderState::from_index(std::size_t index)
{
    if (index >= kStateCount) {
        throw std::out_of_range("state index out of range");
    }
    Values v{};
    for (std::size_t i = 0; i < kAttributeCount; ++i) {
        v[i] = kAttributes[i].min_value + static_cast<int>(index / kStrides[i]);
        index %= kStrides[i];
    }
    return SpiderState(v);
}

std::size_t SpiderState::index() const
{
    std::size_t idx = 0;
    for (std::size_t i = 0; i < kAttributeCount; ++i) {
        idx += static_cast<std::size_t>(values_[i] - kAttributes[i].min_value) * kStrides[i];
    }
    return idx;
}

std::string SpiderState::to_string() const
{
    std::string out = "(";
    for (std::size_t i = 0; i < kAttributeCount; ++i) {
        if (i) {
            out += ',';
        }
        out += std::to_string(values_[i]);
    }
    out += ')';
    return out;
}

Action Action::from_nominal_index(std::size_t index)
{
    if (index >= kNominalActionCount) {
        throw std::out_of_range("action index out of range");
    }
    return Action{static_cast<std::uint8_t>(index / 2), static_cast<std::int8_t>(index % 2 ? 1 : -1)};
}

bool is_valid_action(const SpiderState& state, const Action& action)
{
    if (action.attribute >= kAttributeCount || (action.direction != 1 && action.direction != -1)) {
        return false;
    }
    const auto& spec = kAttributes[action.attribute];
    const int next = state[action.attribute] + action.direction;
    return next >= spec.min_value && next <= spec.max_value;
}

std::vector<Action> valid_actions(const SpiderState& state)
{
    std::vector<Action> out;
    out.reserve(kNominalActionCount);
    for (std::size_t k = 0; k < kNominalActionCount; ++k) {
        const Action a = Action::from_nominal_index(k);
        if (is_valid_action(state, a)) {
            out.push_back(a);
        }
    }
    return out;
}

SpiderState apply_action(const SpiderState& state, const Action& action)
{
    if (!is_valid_action(state, action)) {
        throw std::invalid_argument("action leaves attribute range in state " + state.to_string());
    }
    SpiderState::Values v = state.values();
    v[action.attribute] += action.direction;
    return SpiderState(v);
}

std::vector<SpiderState> neighbors(const SpiderState& state)
{
    std::vector<SpiderState> out;
    out.reserve(kNominalActionCount);
    for (const Action& a : valid_actions(state)) {
        out.push_back(apply_action(state, a));
    }
    return out;
}

const std::vector<SpiderState>& enumerate_states()
{
    static const std::vector<SpiderState> states = [] {
        std::vector<SpiderState> all;
        all.reserve(kStateCount);
        for (std::size_t k = 0; k < kStateCount; ++k) {
            all.push_back(SpiderState::from_index(k));
        }
        return all;
    }();
    return states;
}

void to_json(nlohmann::json& j, const SpiderState& s)
{
    j = nlohmann::json::array();
    for (int v : s.values()) {
        j.push_back(v);
    }
}

void from_json(const nlohmann::json& j, SpiderState& s)
{
    if (!j.is_array() || j.size() != kAttributeCount) {
        throw std::invalid_argument("spider state must be an array of six integers");
    }
    SpiderState::Values v{};
    for (std::size_t i = 0; i < kAttributeCount; ++i) {
        if (!j[i].is_number_integer()) {
            throw std::invalid_argument("spider state must be an array of six integers");
        }
        v[i] = j[i].get<int>();
    }
    s = SpiderState(v);
}

} // namespace spiderpcg
