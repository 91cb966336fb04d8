#pragma once

namespace spiderpcg {

inline constexpr double kMinStress = 0.0;
inline constexpr double kMaxStress = 10.0;
inline constexpr int kMinTarget = 1;
inline constexpr int kMaxTarget = 9;

/// Scaled-Gaussian reward parameters for one integer target stress.
struct RewardSpec {
    int target = 5;
    double min_stress = kMinStress;
    double max_stress = kMaxStress;
    double sigma = (kMaxStress - kMinStress) / 2.0;
    /// Whichever stress extreme lies farther from the target; rewarded -1.
    double alpha = kMinStress;
    /// Evaluate the reward on the stress rounded to the nearest integer.
    bool on_rounded_stress = false;

    /// Throws std::invalid_argument for targets outside [1, 9].
    static RewardSpec for_target(int target, bool on_rounded_stress = false);
};

/// Gaussian around the target rescaled so reward(target) = 1 and
/// reward(alpha) = -1. Throws std::out_of_range if x is outside the bounds.
double reward(double x, const RewardSpec& spec);

/// reward() applied to the raw or rounded stress, per spec.on_rounded_stress.
double fitness(double stress, const RewardSpec& spec);

/// x lies in the half-open band [target - 0.5, target + 0.5).
bool is_success(double x, int target);

/// Nearest integer stress level, halves rounded up (consistent with is_success).
int stress_band(double x);

} // namespace spiderpcg
