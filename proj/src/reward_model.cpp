#include "spiderpcg/reward_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spiderpcg {

RewardSpec RewardSpec::for_target(int target, bool on_rounded_stress)
{
    if (target < kMinTarget || target > kMaxTarget) {
        throw std::invalid_argument("target stress must be in [1, 9], got " + std::to_string(target));
    }
    RewardSpec spec;
    spec.target = target;
    spec.sigma = (spec.max_stress - spec.min_stress) / 2.0;
    spec.alpha = target < spec.sigma ? spec.max_stress : spec.min_stress;
    spec.on_rounded_stress = on_rounded_stress;
    return spec;
}

double reward(double x, const RewardSpec& spec)
{
    if (!(x >= spec.min_stress && x <= spec.max_stress)) {
        throw std::out_of_range("stress " + std::to_string(x) + " outside reward bounds");
    }
    const auto gauss = [&](double v) {
        const double z = (v - spec.target) / spec.sigma;
        return std::exp(-0.5 * z * z);
    };
    const double floor_value = gauss(spec.alpha);
    return (2.0 * gauss(x) - floor_value - 1.0) / (1.0 - floor_value);
}

double fitness(double stress, const RewardSpec& spec)
{
    return reward(spec.on_rounded_stress ? static_cast<double>(stress_band(stress)) : stress, spec);
}

bool is_success(double x, int target)
{
    return x >= target - 0.5 && x < target + 0.5;
}

int stress_band(double x)
{
    return static_cast<int>(std::floor(x + 0.5));
}

} // namespace spiderpcg
