#include "spiderpcg/virtual_subjects.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "spiderpcg/reward_model.hpp"

namespace spiderpcg {

namespace {

constexpr std::uint64_t kSubjectStreamTag = 0x5u;

double weighted_sum(const std::array<double, kAttributeCount>& weights, const SpiderState& state)
{
    double total = 0.0;
    for (std::size_t i = 0; i < kAttributeCount; ++i) {
        total += weights[i] * state[i];
    }
    return total;
}

std::string format_real(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

VirtualSubject VirtualSubject::from_weights(int id, const std::array<double, kAttributeCount>& weights)
{
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument("subject weights must be finite and non-negative");
        }
    }
    const double peak = weighted_sum(weights, SpiderState::maximum());
    if (!(peak > 0.0)) {
        throw std::invalid_argument("subject weights must not all be zero");
    }
    return VirtualSubject{id, weights, kMaxStress / peak};
}

const VirtualSubject& SubjectPopulation::at(int id) const
{
    if (id < 0 || static_cast<std::size_t>(id) >= subjects.size() || subjects[id].id != id) {
        auto it = std::find_if(subjects.begin(), subjects.end(), [id](const VirtualSubject& s) { return s.id == id; });
        if (it == subjects.end()) {
            throw std::out_of_range("unknown subject id " + std::to_string(id));
        }
        return *it;
    }
    return subjects[id];
}

VirtualSubject sample_subject(int id, Rng& rng)
{
    std::array<double, kAttributeCount> weights{};
    const auto& table = attribute_table();
    for (std::size_t i = 0; i < kAttributeCount; ++i) {
        double w = rng.normal(table[i].impact_mean, table[i].impact_std);
        while (w < 0.0) {
            w = rng.normal(table[i].impact_mean, table[i].impact_std);
        }
        weights[i] = w;
    }
    return VirtualSubject::from_weights(id, weights);
}

double stress(const VirtualSubject& subject, const SpiderState& state)
{
    // c * S at the all-max state can land one ulp above 10.
    return std::clamp(subject.coefficient * weighted_sum(subject.weights, state), kMinStress, kMaxStress);
}

SubjectPopulation generate_population(std::size_t n, std::uint64_t seed)
{
    if (n == 0) {
        throw std::invalid_argument("population size must be at least 1");
    }
    SubjectPopulation population;
    population.seed = seed;
    population.subjects.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng(derive_seed(seed, {kSubjectStreamTag, i}));
        population.subjects.push_back(sample_subject(static_cast<int>(i), rng));
    }
    return population;
}

std::vector<SpiderState> success_states(const VirtualSubject& subject, int target)
{
    std::vector<SpiderState> out;
    for (const SpiderState& s : enumerate_states()) {
        if (is_success(stress(subject, s), target)) {
            out.push_back(s);
        }
    }
    return out;
}

std::optional<int> bfs_distance(const VirtualSubject& subject, const SpiderState& initial, int target)
{
    std::array<int, kStateCount> dist;
    dist.fill(-1);
    std::deque<SpiderState> frontier{initial};
    dist[initial.index()] = 0;
    while (!frontier.empty()) {
        const SpiderState s = frontier.front();
        frontier.pop_front();
        if (is_success(stress(subject, s), target)) {
            return dist[s.index()];
        }
        for (const SpiderState& n : neighbors(s)) {
            if (dist[n.index()] < 0) {
                dist[n.index()] = dist[s.index()] + 1;
                frontier.push_back(n);
            }
        }
    }
    return std::nullopt;
}

std::string subjects_to_json(const SubjectPopulation& population)
{
    std::ostringstream os;
    os << "{\n  \"seed\": " << population.seed << ",\n  \"subjects\": [";
    for (std::size_t k = 0; k < population.subjects.size(); ++k) {
        const VirtualSubject& s = population.subjects[k];
        os << (k ? ",\n" : "\n") << "    {\"id\": " << s.id << ", \"weights\": [";
        for (std::size_t i = 0; i < kAttributeCount; ++i) {
            os << (i ? ", " : "") << format_real(s.weights[i]);
        }
        os << "], \"coefficient\": " << format_real(s.coefficient) << "}";
    }
    os << "\n  ]\n}\n";
    return os.str();
}

SubjectPopulation subjects_from_json(std::string_view text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("subjects file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("seed") || !doc.contains("subjects") || !doc["subjects"].is_array()) {
        throw std::runtime_error("subjects file must have \"seed\" and \"subjects\" fields");
    }
    if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer()) {
        throw std::runtime_error("subjects file \"seed\" must be an integer");
    }
    SubjectPopulation population;
    population.seed = doc["seed"].get<std::uint64_t>();
    for (const auto& entry : doc["subjects"]) {
        if (!entry.is_object() || !entry.contains("id") || !entry.contains("weights") || !entry.contains("coefficient")) {
            throw std::runtime_error("subject entry needs id, weights and coefficient");
        }
        const auto& w = entry["weights"];
        if (!entry["id"].is_number_integer() || !w.is_array() || w.size() != kAttributeCount
            || !entry["coefficient"].is_number()) {
            throw std::runtime_error("subject entry has malformed fields");
        }
        VirtualSubject s;
        s.id = entry["id"].get<int>();
        for (std::size_t i = 0; i < kAttributeCount; ++i) {
            if (!w[i].is_number()) {
                throw std::runtime_error("subject weights must be numbers");
            }
            s.weights[i] = w[i].get<double>();
        }
        s.coefficient = entry["coefficient"].get<double>();

        VirtualSubject expected;
        try {
            expected = VirtualSubject::from_weights(s.id, s.weights);
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error("subject " + std::to_string(s.id) + ": " + e.what());
        }
        if (std::abs(expected.coefficient - s.coefficient) > 1e-9 * expected.coefficient) {
            throw std::runtime_error("subject " + std::to_string(s.id) + ": coefficient does not scale max stress to 10");
        }
        if (s.id != static_cast<int>(population.subjects.size())) {
            throw std::runtime_error("subject ids must be 0..n-1 in order");
        }
        population.subjects.push_back(s);
    }
    if (population.subjects.empty()) {
        throw std::runtime_error("subjects file contains no subjects");
    }
    return population;
}

void save_subjects(const SubjectPopulation& population, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << subjects_to_json(population);
    if (!out) {
        throw std::runtime_error("failed writing " + path.string());
    }
}

SubjectPopulation load_subjects(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open subjects file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return subjects_from_json(buf.str());
}

} // namespace spiderpcg
