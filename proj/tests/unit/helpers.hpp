#pragma once

#include <array>

#include "spiderpcg/virtual_subjects.hpp"

namespace spiderpcg::test {

// Worked-example subject weights: 0.97 a1 + 0.87 a2 + 0.07 a3 + 0.63 a4 + 0.67 a5 + 0.77 a6.
inline constexpr std::array<double, kAttributeCount> kExampleWeights{0.97, 0.87, 0.07, 0.63, 0.67, 0.77};

inline VirtualSubject example_subject(int id = 0)
{
    return VirtualSubject::from_weights(id, kExampleWeights);
}

// Same weights with the coefficient rounded to two decimals as printed.
inline VirtualSubject rounded_example_subject()
{
    return VirtualSubject{0, kExampleWeights, 1.37};
}

// Only locomotion matters: stress takes the values 0, 5 and 10.
inline VirtualSubject coarse_subject(int id = 0)
{
    return VirtualSubject::from_weights(id, {1.0, 0.0, 0.0, 0.0, 0.0, 0.0});
}

inline VirtualSubject mean_subject(int id = 0)
{
    return VirtualSubject::from_weights(id, {0.9, 0.9, 0.4, 0.7, 0.6, 0.5});
}

} // namespace spiderpcg::test
