// Generated by tests/oracles/derive_values.py from the shipped fixtures. Do not edit.
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace sspac::derived {

// fixture_A
inline constexpr std::array<double, 3> kFixtureABellmanFromZero{0.8492706824783012, 0.4577009089741605, 0.13010346611070972};
inline constexpr std::array<double, 3> kFixtureAVStar{0.9808819953769112, 0.4886937277350809, 0.2782013842305393};
inline constexpr std::array<double, 3> kFixtureAPerStateDiameter{2.0115895973641256, 1.0677141298023294, 2.138308782594675};
inline constexpr double kFixtureACMin = 0.13010346611070972;
inline constexpr std::size_t kFixtureAGamma = 2;
inline constexpr double kFixtureABStar = 0.9808819953769112;
inline constexpr double kFixtureADiameter = 2.138308782594675;
inline constexpr std::array<double, 3> kFixtureAValuePolicy000{1.7981684908027136, 0.4886937277350809, 0.2782013842305393};
inline constexpr std::array<std::size_t, 8> kFixtureAProperFlags{1, 1, 1, 1, 1, 1, 1, 1};
// fixture_A read as a discounted MDP over S+1 states, gamma = 0.9
inline constexpr std::array<double, 4> kFixtureADiscountedOptimal{0.9556155360110397, 0.4854068375744356, 0.24976986152984626, 0.0};
inline constexpr std::array<double, 4> kFixtureADiscountedPolicy000{1.6836938103524268, 0.4854068375744356, 0.24976986152984626, 0.0};
inline constexpr double kFixtureAToBL1 = 1.4576395200891514;
// fixture_B, theta = 4
inline constexpr std::array<double, 3> kFixtureBPerStateDiameter{1.7142857142857144, 1.4285714285714286, 1.3428571428571427};
inline constexpr std::size_t kFixtureBFeasibleCount = 2;
inline constexpr std::array<double, 3> kFixtureBVThetaStar{0.5428571428571429, 0.28571428571428575, 0.6085714285714285};
inline constexpr std::array<std::size_t, 3> kFixtureBArgmin{1, 0, 0};
inline constexpr double kFixtureBDiameter = 1.7142857142857144;
inline constexpr double kFixtureBBStar = 0.6085714285714285;
// formulas
inline constexpr double kBernsteinHalf100 = 3.1369037066779732;
inline constexpr double kCertifiedSingleObservation = 135.01447372520715;
inline constexpr double kCertifiedQuadrupleRatio = 0.4666028673377783;
inline constexpr std::uint64_t kAllocationExample = 1505;

} // namespace sspac::derived
